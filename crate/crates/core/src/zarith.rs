//! Arbitrary-precision integer utilities: primality, factorization and
//! multiplicative orders.
//!
//! Values below `2^64` run on machine words with `u128` products; larger
//! values fall back to `BigUint`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Trial division covers every prime below this bound.
pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

/// Below this bound the first twelve prime bases make Miller-Rabin exact.
/// 3_317_044_064_679_887_385_961_981
const DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const EXTRA_BASES: [u64; 13] = [41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

/// Default Pollard-rho iteration budget for one factorization.
pub const DEFAULT_RHO_BUDGET: u64 = 200_000_000;
/// Default number of multiplications for the fallback order search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZarithError {
    #[error("{base} and {modulus} are not coprime")]
    NotCoprime { base: BigUint, modulus: BigUint },
    #[error("modulus must be at least 2")]
    ModulusTooSmall,
    #[error("budget exhausted while working on {0}")]
    BudgetExceeded(BigUint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Proven,
    Probable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Proven,
    Probable,
    Composite,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }

    pub fn certainty(self) -> Option<Certainty> {
        match self {
            Primality::Proven => Some(Certainty::Proven),
            Primality::Probable => Some(Certainty::Probable),
            Primality::Composite => None,
        }
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        e >>= 1;
    }
    acc
}

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    BASES.iter().all(|&a| strong_probable_prime_u64(n, a))
}

fn strong_probable_prime_big(n: &BigUint, a: u64) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let mut x = BigUint::from(a).modpow(&d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin with a fixed witness set. Exact ("proven") below
/// 3.3·10^24, probable above.
pub fn is_prime(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Proven
        } else {
            Primality::Composite
        };
    }
    for &p in BASES.iter().chain(EXTRA_BASES.iter()) {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    if !BASES.iter().all(|&a| strong_probable_prime_big(n, a)) {
        return Primality::Composite;
    }
    if n.to_u128().is_some_and(|v| v < DETERMINISTIC_LIMIT) {
        return Primality::Proven;
    }
    if EXTRA_BASES.iter().all(|&a| strong_probable_prime_big(n, a)) {
        Primality::Probable
    } else {
        Primality::Composite
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_BOUND as usize;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i < n {
            if sieve[i] {
                let mut j = i * i;
                while j < n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..n as u32).filter(|&k| sieve[k as usize]).collect()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    #[serde(with = "crate::decimal")]
    pub prime: BigUint,
    pub exponent: u32,
    pub certainty: Certainty,
}

/// Prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct FactorList(pub Vec<Factor>);

impl FactorList {
    pub fn product(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, f| acc * f.prime.pow(f.exponent))
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.0.iter().map(|f| &f.prime)
    }

    pub fn pairs(&self) -> Vec<(BigUint, u32)> {
        self.0
            .iter()
            .map(|f| (f.prime.clone(), f.exponent))
            .collect()
    }

    pub fn all_proven(&self) -> bool {
        self.0.iter().all(|f| f.certainty == Certainty::Proven)
    }
}

impl fmt::Display for FactorList {
    /// `2^39·17·97`; the empty factorization renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, fac) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            if fac.exponent == 1 {
                write!(f, "{}", fac.prime)?;
            } else {
                write!(f, "{}^{}", fac.prime, fac.exponent)?;
            }
        }
        Ok(())
    }
}

/// Brent's cycle-finding variant of Pollard rho on `x -> x^2 + c`, seed 2.
/// Returns a nontrivial factor, or `None` if the walk collapsed to `n`
/// or the iteration budget ran out.
fn rho_brent_u64(n: u64, c: u64, budget: &mut u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut x, mut ys) = (2u64, 2u64, 2u64);
    let (mut r, mut q, mut g) = (1u64, 1u64, 1u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            if *budget < steps {
                return None;
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_brent_big(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let two = BigUint::from(2u32);
    let (mut y, mut x, mut ys) = (two.clone(), two.clone(), two);
    let (mut r, mut q, mut g) = (1u64, BigUint::one(), BigUint::one());
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            if *budget < steps {
                return None;
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(&y);
                q = q * absdiff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Finds a nontrivial factor of composite `n`, trying `c = 1, 2, 3, ...`.
fn split(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1u64.. {
        if *budget == 0 {
            return None;
        }
        let found = match n.to_u64() {
            Some(small) => rho_brent_u64(small, c, budget).map(BigUint::from),
            None => rho_brent_big(n, c, budget),
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Complete factorization with an unlimited rho budget.
pub fn factorize(n: &BigUint) -> FactorList {
    factorize_budgeted(n, u64::MAX).expect("unbounded budget")
}

pub fn factorize_u64(n: u64) -> FactorList {
    factorize(&BigUint::from(n))
}

/// Trial division below 10^6, then Pollard-rho/Brent splitting.
pub fn factorize_budgeted(n: &BigUint, rho_budget: u64) -> Result<FactorList, ZarithError> {
    let mut found: Vec<(BigUint, Certainty)> = Vec::new();
    let mut rest = n.clone();
    if rest.is_zero() {
        return Ok(FactorList::default());
    }
    let primes = small_primes();
    let mut i = 0;
    while i < primes.len() && rest.to_u64().is_none() {
        let p = primes[i];
        while (&rest % p).is_zero() {
            rest /= p;
            found.push((BigUint::from(p), Certainty::Proven));
        }
        i += 1;
    }
    if let Some(mut r) = rest.to_u64() {
        for &p in &primes[i..] {
            let p = p as u64;
            if p * p > r {
                break;
            }
            while r % p == 0 {
                r /= p;
                found.push((BigUint::from(p), Certainty::Proven));
            }
        }
        rest = BigUint::from(r);
    }
    let mut budget = rho_budget;
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        let primality = is_prime(&m);
        if let Some(c) = primality.certainty() {
            found.push((m, c));
            continue;
        }
        let d = split(&m, &mut budget).ok_or_else(|| ZarithError::BudgetExceeded(m.clone()))?;
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<Factor> = Vec::new();
    for (p, c) in found {
        match out.last_mut() {
            Some(last) if last.prime == p => last.exponent += 1,
            _ => out.push(Factor {
                prime: p,
                exponent: 1,
                certainty: c,
            }),
        }
    }
    Ok(FactorList(out))
}

/// How [`mult_order`] arrived at its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderPath {
    /// Factor the group exponent, then strip primes from it.
    FactoredExponent,
    /// Multiply until reaching 1.
    SequentialSearch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderValue {
    #[serde(with = "crate::decimal")]
    pub order: BigUint,
    pub path: OrderPath,
}

/// Carmichael exponent of `(Z/n)*` from a factorization of `n`.
pub fn carmichael(factors: &FactorList) -> BigUint {
    factors.0.iter().fold(BigUint::one(), |acc, f| {
        let two = BigUint::from(2u32);
        let lambda = if f.prime == two {
            match f.exponent {
                1 => BigUint::one(),
                2 => two,
                k => BigUint::one() << (k - 2),
            }
        } else {
            (&f.prime - 1u32) * f.prime.pow(f.exponent - 1)
        };
        acc.lcm(&lambda)
    })
}

/// Order of `p` in `(Z/h)*` with default budgets.
pub fn mult_order(p: &BigUint, h: &BigUint) -> Result<OrderValue, ZarithError> {
    mult_order_budgeted(p, h, DEFAULT_RHO_BUDGET, DEFAULT_SEARCH_BUDGET)
}

pub fn mult_order_u64(p: u64, h: u64) -> Result<OrderValue, ZarithError> {
    mult_order(&BigUint::from(p), &BigUint::from(h))
}

pub fn mult_order_budgeted(
    p: &BigUint,
    h: &BigUint,
    rho_budget: u64,
    search_budget: u64,
) -> Result<OrderValue, ZarithError> {
    if h < &BigUint::from(2u32) {
        return Err(ZarithError::ModulusTooSmall);
    }
    if !p.gcd(h).is_one() {
        return Err(ZarithError::NotCoprime {
            base: p.clone(),
            modulus: h.clone(),
        });
    }
    let exponent = factorize_budgeted(h, rho_budget)
        .map(|f| carmichael(&f))
        .and_then(|lambda| Ok((factorize_budgeted(&lambda, rho_budget)?, lambda)));
    match exponent {
        Ok((lambda_factors, lambda)) => {
            let mut f = lambda;
            for r in lambda_factors.primes() {
                while (&f % r).is_zero() && p.modpow(&(&f / r), h).is_one() {
                    f /= r;
                }
            }
            Ok(OrderValue {
                order: f,
                path: OrderPath::FactoredExponent,
            })
        }
        Err(_) => {
            let base = p % h;
            let mut x = base.clone();
            let mut k = 1u64;
            while !x.is_one() {
                if k >= search_budget {
                    return Err(ZarithError::BudgetExceeded(h.clone()));
                }
                x = x * &base % h;
                k += 1;
            }
            Ok(OrderValue {
                order: BigUint::from(k),
                path: OrderPath::SequentialSearch,
            })
        }
    }
}
