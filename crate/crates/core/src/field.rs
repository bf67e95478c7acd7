//! Finite fields `F_q = F_p[x]/(modulus)`.
//!
//! Elements are stored as a single `u32` index, the base-`p` number whose
//! little-endian digits are the power-basis coordinates. Multiplication goes
//! through discrete log/antilog tables built once at construction, which is
//! why the field size is capped at [`MAX_FIELD_SIZE`].

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::poly::{PolyA, PolyRing};
use crate::zarith;

/// Serializable summary of a [`FieldDesc`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldInfo {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    pub modulus: Option<String>,
}

/// Largest `q` for which log tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("a defining modulus is required for extension degree {0}")]
    MissingModulus(u32),
    #[error("modulus must be monic of degree {expected} over F_p")]
    BadModulus { expected: u32 },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("field of size {0} exceeds the supported table size")]
    TooLarge(u128),
}

/// An element of a finite field, meaningful only together with its [`FieldDesc`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fq(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    /// Base-`p` index of the element (coordinates read little-endian).
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldInner {
    p: u32,
    e: u32,
    q: u32,
    /// Little-endian monic modulus of length `e + 1`; empty for prime fields.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: Fq,
}

/// Description of `F_q`, cheap to clone and safe to share between threads.
#[derive(Clone)]
pub struct FieldDesc {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if self.e() > 1 {
            write!(f, "[x]/({:?})", self.inner.modulus)?;
        }
        Ok(())
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.p() == other.p()
                && self.e() == other.e()
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldDesc {}

impl FieldDesc {
    /// Builds `F_{p^e}`. `modulus` is the little-endian coefficient list of a
    /// monic degree-`e` polynomial over `Z/p` and is required when `e > 1`.
    pub fn new(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<Self, FieldError> {
        if p < 2 || !zarith::is_prime_u64(p) {
            return Err(FieldError::NonPrimeCharacteristic(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if q > MAX_FIELD_SIZE as u128 {
            return Err(FieldError::TooLarge(q));
        }
        let modulus = if e == 1 {
            Vec::new()
        } else {
            let m = modulus.ok_or(FieldError::MissingModulus(e))?;
            let mut m: Vec<u32> = m.iter().map(|&c| (c % p) as u32).collect();
            while m.last() == Some(&0) {
                m.pop();
            }
            if m.len() != e as usize + 1 || m[e as usize] != 1 {
                return Err(FieldError::BadModulus { expected: e });
            }
            let base = FieldDesc::new(p, 1, None)?;
            let ring = PolyRing::new(base);
            let f = PolyA::from_coeffs(m.iter().map(|&c| Fq(c)).collect());
            if !ring.is_irreducible(&f) {
                return Err(FieldError::ReducibleModulus(p));
            }
            m
        };
        Ok(Self::build(p as u32, e, q as u32, modulus))
    }

    /// Shorthand for the prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    fn build(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let slow = SlowArith {
            p,
            e,
            modulus: &modulus,
        };
        let order = (q - 1) as u64;
        let mut primes: Vec<u64> = Vec::new();
        let mut rest = order;
        let mut r = 2;
        while r * r <= rest {
            if rest.is_multiple_of(r) {
                primes.push(r);
                while rest.is_multiple_of(r) {
                    rest /= r;
                }
            }
            r += 1;
        }
        if rest > 1 {
            primes.push(rest);
        }
        let generator = (1..q)
            .find(|&c| primes.iter().all(|&r| slow.pow(c, order / r) != 1))
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for i in 0..order as u32 {
            exp.push(x);
            log[x as usize] = i;
            x = slow.mul(x, generator);
        }
        FieldDesc {
            inner: Arc::new(FieldInner {
                p,
                e,
                q,
                modulus,
                exp,
                log,
                generator: Fq(generator),
            }),
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.inner.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Little-endian defining modulus over `Z/p` (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.e == 1
    }

    /// Defining modulus rendered in `x`, `None` for prime fields.
    pub fn modulus_text(&self) -> Option<String> {
        if self.is_prime_field() {
            return None;
        }
        let ring = PolyRing::new(FieldDesc::prime(self.p() as u64).expect("prime"));
        let f = PolyA::from_coeffs(self.inner.modulus.iter().map(|&c| Fq(c)).collect());
        Some(ring.render_in(&f, 'x'))
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            p: self.p(),
            e: self.e(),
            q: self.q(),
            modulus: self.modulus_text(),
        }
    }

    /// A fixed generator of `F_q*`.
    pub fn primitive_element(&self) -> Fq {
        self.inner.generator
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p() as i64) as u32)
    }

    /// Element with index `i`, if `i < q`.
    pub fn from_index(&self, i: u32) -> Option<Fq> {
        (i < self.q()).then_some(Fq(i))
    }

    /// Element from power-basis coordinates; missing coordinates are zero,
    /// residues are reduced mod `p`, and extra coordinates are rejected.
    pub fn from_coords(&self, coords: &[u64]) -> Option<Fq> {
        if coords.len() > self.e() as usize {
            return None;
        }
        let p = self.p() as u64;
        let idx = coords.iter().rev().fold(0u64, |acc, &c| acc * p + c % p);
        Some(Fq(idx as u32))
    }

    /// Power-basis coordinates, length exactly `e`.
    pub fn coords(&self, a: Fq) -> Vec<u32> {
        let p = self.p();
        let mut x = a.0;
        (0..self.e())
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q()).map(Fq)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p();
        if self.inner.e == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Fq(out)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        let p = self.p();
        if self.inner.e == 1 {
            return Fq(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let (mut out, mut place) = (0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Fq(out)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let inner = &*self.inner;
        let n = inner.exp.len() as u64;
        let l = inner.log[a.0 as usize] as u64 + inner.log[b.0 as usize] as u64;
        Fq(inner.exp[(l % n) as usize])
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return None;
        }
        let inner = &*self.inner;
        let n = inner.exp.len() as u64;
        let l = inner.log[a.0 as usize] as u64;
        Some(Fq(inner.exp[((n - l) % n) as usize]))
    }

    pub fn pow(&self, a: Fq, k: u64) -> Fq {
        if k == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        let inner = &*self.inner;
        let n = inner.exp.len() as u128;
        let l = (inner.log[a.0 as usize] as u128 * k as u128) % n;
        Fq(inner.exp[l as usize])
    }

    /// Discrete logarithm to the base [`Self::primitive_element`].
    pub fn log(&self, a: Fq) -> Option<u32> {
        (a.0 != 0).then(|| self.inner.log[a.0 as usize])
    }

    pub fn render(&self, a: Fq) -> String {
        if self.is_prime_field() {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coords(a).iter().map(|d| d.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }
}

/// Table-free arithmetic on element indices, used only while building tables.
struct SlowArith<'a> {
    p: u32,
    e: u32,
    modulus: &'a [u32],
}

impl SlowArith<'_> {
    fn digits(&self, mut x: u32) -> Vec<u64> {
        (0..self.e)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d as u64
            })
            .collect()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.e == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let e = self.e as usize;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % p;
            }
        }
        for i in (e..prod.len()).rev() {
            let c = prod[i];
            if c != 0 {
                for j in 0..=e {
                    let t = (c * self.modulus[j] as u64) % p;
                    prod[i - e + j] = (prod[i - e + j] + p - t) % p;
                }
            }
        }
        prod[..e].iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32
    }

    fn pow(&self, a: u32, mut k: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }
}
