//! Exact arithmetic in `Z[ζ_N]`.
//!
//! Elements are integer coordinate vectors in the power basis of
//! `Z[x]/Φ_N(x)`, always fully reduced. A rational element is therefore one
//! whose non-constant coordinates vanish.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("operands live in Z[ζ_{0}] and Z[ζ_{1}]")]
    IncompatibleConductors(u64, u64),
    #[error("element is not rational: coordinates {coords:?}")]
    NotRational { coords: Vec<BigInt> },
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = std::mem::take(&mut rem[i]);
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate().take(dd) {
            rem[i - dd + j] -= &c * dj;
        }
        quot[i - dd] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// `Φ_n` as little-endian integer coefficients, obtained by dividing
/// `x^n - 1` by `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomials are indexed from 1");
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut memo: HashMap<u64, Vec<BigInt>> = HashMap::new();
    for &d in &divisors {
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = BigInt::from(-1);
        num[d as usize] = BigInt::one();
        for &e in divisors.iter().filter(|&&e| e < d && d % e == 0) {
            num = exact_div_monic(&num, &memo[&e]);
        }
        memo.insert(d, num);
    }
    memo.remove(&n).expect("n divides itself")
}

/// Structure constants for one conductor.
#[derive(Debug)]
pub struct CycloRing {
    n: u64,
    /// Monic `Φ_n`, little-endian.
    phi: Vec<BigInt>,
}

impl CycloRing {
    /// Shared ring for conductor `n`; rings are cached process-wide.
    pub fn get(n: u64) -> Arc<CycloRing> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloRing>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(r) = cache.lock().expect("cache lock").get(&n) {
            return r.clone();
        }
        let ring = Arc::new(CycloRing {
            n,
            phi: cyclotomic_poly(n),
        });
        cache
            .lock()
            .expect("cache lock")
            .entry(n)
            .or_insert(ring)
            .clone()
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// `deg Φ_n = φ(n)`
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi(&self) -> &[BigInt] {
        &self.phi
    }

    /// Reduces an arbitrary coefficient vector: first modulo `x^n - 1`,
    /// then modulo `Φ_n`.
    fn reduce(&self, coeffs: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.n as usize;
        let deg = self.degree();
        let mut folded = if coeffs.len() > n {
            let mut f = vec![BigInt::zero(); n];
            for (i, c) in coeffs.into_iter().enumerate() {
                f[i % n] += c;
            }
            f
        } else {
            coeffs
        };
        for i in (deg..folded.len()).rev() {
            let c = std::mem::take(&mut folded[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..deg {
                let pj = &self.phi[j];
                if !pj.is_zero() {
                    folded[i - deg + j] -= &c * pj;
                }
            }
        }
        folded.resize(deg, BigInt::zero());
        folded
    }
}

/// Element of `Z[ζ_N]`.
#[derive(Clone)]
pub struct CyclotomicInt {
    ring: Arc<CycloRing>,
    coords: Vec<BigInt>,
}

impl PartialEq for CyclotomicInt {
    fn eq(&self, other: &Self) -> bool {
        self.ring.n == other.ring.n && self.coords == other.coords
    }
}

impl Eq for CyclotomicInt {}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicInt(N={}, {:?})", self.ring.n, self.coords)
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "z")?,
                (_, true) => write!(f, "z^{i}")?,
                (1, false) => write!(f, "{a}*z")?,
                (_, false) => write!(f, "{a}*z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl CyclotomicInt {
    /// Builds and reduces from an arbitrary-length coefficient vector in `ζ_n`.
    pub fn from_coeffs(n: u64, coeffs: Vec<BigInt>) -> Self {
        let ring = CycloRing::get(n);
        let coords = ring.reduce(coeffs);
        Self { ring, coords }
    }

    pub fn zero(n: u64) -> Self {
        Self::from_coeffs(n, Vec::new())
    }

    pub fn from_int(n: u64, v: impl Into<BigInt>) -> Self {
        Self::from_coeffs(n, vec![v.into()])
    }

    pub fn one(n: u64) -> Self {
        Self::from_int(n, 1)
    }

    /// `ζ_n^k`
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        Self::from_coeffs(n, c)
    }

    /// `Σ counts[k] ζ_n^k` for `counts` of length `n`.
    pub fn from_exponent_counts(n: u64, counts: &[i64]) -> Self {
        debug_assert_eq!(counts.len() as u64, n);
        Self::from_coeffs(n, counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn conductor(&self) -> u64 {
        self.ring.n
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Image under `ζ_n -> ζ_{n'}^{n'/n}`; `n` must divide `n'`.
    pub fn lift(&self, target: u64) -> Option<Self> {
        if !target.is_multiple_of(self.ring.n) {
            return None;
        }
        if target == self.ring.n {
            return Some(self.clone());
        }
        let step = (target / self.ring.n) as usize;
        let mut c = vec![BigInt::zero(); (self.coords.len().max(1) - 1) * step + 1];
        for (i, x) in self.coords.iter().enumerate() {
            c[i * step] = x.clone();
        }
        Some(Self::from_coeffs(target, c))
    }

    fn lift_pair(&self, other: &Self) -> (Self, Self) {
        let l = self.ring.n.lcm(&other.ring.n);
        (
            self.lift(l).expect("lcm is a multiple"),
            other.lift(l).expect("lcm is a multiple"),
        )
    }

    fn same_ring(&self, other: &Self) -> Result<(), CycloError> {
        if self.ring.n == other.ring.n {
            Ok(())
        } else {
            Err(CycloError::IncompatibleConductors(
                self.ring.n,
                other.ring.n,
            ))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.same_ring(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            ring: self.ring.clone(),
            coords,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.same_ring(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            ring: self.ring.clone(),
            coords,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.same_ring(other)?;
        let d = self.coords.len();
        if d == 0 {
            return Ok(self.clone());
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self {
            coords: self.ring.reduce(prod),
            ring: self.ring.clone(),
        })
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ring.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// The automorphism `ζ -> ζ^a`, `gcd(a, N) = 1`.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.ring.n as i64;
        assert_eq!(a.gcd(&n), 1, "Galois action needs a unit exponent");
        let mut c = vec![BigInt::zero(); n as usize];
        for (i, x) in self.coords.iter().enumerate() {
            let j = (a * i as i64).rem_euclid(n) as usize;
            c[j] += x;
        }
        Self::from_coeffs(self.ring.n, c)
    }

    /// Complex conjugation, `ζ -> ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// The constant coordinate, provided every other coordinate is zero.
    pub fn rational_value(&self) -> Result<BigInt, CycloError> {
        if self.coords.iter().skip(1).all(Zero::is_zero) {
            Ok(self.coords.first().cloned().unwrap_or_default())
        } else {
            Err(CycloError::NotRational {
                coords: self.coords.clone(),
            })
        }
    }

    /// Floating image under `ζ_N -> exp(2πi/N)`. Cross-check oracle only;
    /// never authoritative.
    pub fn complex_approx(&self, precision: usize) -> ComplexApprox {
        let precision = precision.max(53);
        let work = precision + 64;
        let rm = RoundingMode::ToEven;
        let mut cc = Consts::new().expect("constants cache");
        let pi = cc.pi(work, rm);
        let two_pi_over_n = pi.mul(&BigFloat::from_word(2, work), work, rm).div(
            &BigFloat::from_u64(self.ring.n, work),
            work,
            rm,
        );
        let mut re = BigFloat::from_word(0, work);
        let mut im = BigFloat::from_word(0, work);
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = big_to_float(c, work, &mut cc);
            let angle = two_pi_over_n.mul(&BigFloat::from_u64(j as u64, work), work, rm);
            let cos = angle.cos(work, rm, &mut cc);
            let sin = angle.sin(work, rm, &mut cc);
            re = re.add(&cf.mul(&cos, work, rm), work, rm);
            im = im.add(&cf.mul(&sin, work, rm), work, rm);
        }
        ComplexApprox { re, im, precision }
    }
}

pub(crate) fn big_to_float(v: &BigInt, p: usize, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(&v.to_string(), Radix::Dec, p, RoundingMode::ToEven, cc)
}

/// Arbitrary-precision complex number produced by [`CyclotomicInt::complex_approx`].
#[derive(Clone, Debug)]
pub struct ComplexApprox {
    pub re: BigFloat,
    pub im: BigFloat,
    pub precision: usize,
}

impl ComplexApprox {
    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision.max(other.precision) + 64;
        let rm = RoundingMode::ToEven;
        let re = self
            .re
            .mul(&other.re, p, rm)
            .sub(&self.im.mul(&other.im, p, rm), p, rm);
        let im = self
            .re
            .mul(&other.im, p, rm)
            .add(&self.im.mul(&other.re, p, rm), p, rm);
        ComplexApprox {
            re,
            im,
            precision: self.precision.max(other.precision),
        }
    }

    pub fn one(precision: usize) -> Self {
        ComplexApprox {
            re: BigFloat::from_word(1, precision + 64),
            im: BigFloat::from_word(0, precision + 64),
            precision,
        }
    }

    /// Modulus `sqrt(re^2 + im^2)`.
    pub fn abs(&self) -> BigFloat {
        let p = self.precision + 64;
        let rm = RoundingMode::ToEven;
        self.re
            .mul(&self.re, p, rm)
            .add(&self.im.mul(&self.im, p, rm), p, rm)
            .sqrt(p, rm)
    }

    /// `|self| / |target| - 1` as an `f64`, for comparisons against an exact integer.
    pub fn relative_error_to(&self, target: &BigInt) -> f64 {
        let p = self.precision + 64;
        let rm = RoundingMode::ToEven;
        let mut cc = Consts::new().expect("constants cache");
        let t = big_to_float(&target.abs(), p, &mut cc);
        let diff = self.abs().sub(&t, p, rm).div(&t, p, rm);
        float_to_f64(&diff, &mut cc).abs()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let mut cc = Consts::new().expect("constants cache");
        (
            float_to_f64(&self.re, &mut cc),
            float_to_f64(&self.im, &mut cc),
        )
    }
}

pub(crate) fn float_to_f64(x: &BigFloat, cc: &mut Consts) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let s = x
        .format(Radix::Dec, RoundingMode::ToEven, cc)
        .expect("finite value");
    s.parse::<f64>().unwrap_or(f64::NAN)
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        let (a, b) = self.lift_pair(rhs);
        a.checked_add(&b).expect("lifted to a common conductor")
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        let (a, b) = self.lift_pair(rhs);
        a.checked_sub(&b).expect("lifted to a common conductor")
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        let (a, b) = self.lift_pair(rhs);
        a.checked_mul(&b).expect("lifted to a common conductor")
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn neg(self) -> CyclotomicInt {
        CyclotomicInt {
            ring: self.ring.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}
