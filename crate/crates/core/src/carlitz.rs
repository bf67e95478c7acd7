//! The Carlitz module `ρ_t(u) = t·u + u^q`, its torsion, and the counts
//! `φ(𝔭^m)` and `|S|` that the class-number and tower layers consume.

use num_bigint::BigUint;
use thiserror::Error;

use crate::field::{FieldDesc, Fq};
use crate::poly::{PolyA, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CarlitzError {
    #[error("the zero polynomial has no Carlitz action polynomial")]
    ZeroInput,
    #[error("input polynomial is not irreducible")]
    ReducibleInput,
    #[error("level m must be at least 1")]
    ZeroLevel,
    #[error("extension field has characteristic {ext}, base field has {base}")]
    CharacteristicMismatch { base: u32, ext: u32 },
    #[error("F_{base} does not embed into F_{ext}")]
    NoEmbedding { base: u32, ext: u32 },
}

/// `ρ_f(u) = Σ c_i u^{q^i}` with `c_i ∈ A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarlitzPolynomial {
    coeffs: Vec<PolyA>,
}

impl CarlitzPolynomial {
    pub fn coeffs(&self) -> &[PolyA] {
        &self.coeffs
    }

    /// `r` such that the degree in `u` is `q^r`.
    pub fn frobenius_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `ρ_f ∘ ρ_g`: `Σ_i Σ_j a_i · b_j^{q^i} · u^{q^{i+j}}`.
    pub fn compose(&self, other: &Self, ring: &PolyRing) -> Self {
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![PolyA::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            let mut shifted: Vec<PolyA> = other.coeffs.clone();
            for _ in 0..i {
                shifted = shifted.iter().map(|b| ring.frobenius(b)).collect();
            }
            for (j, b) in shifted.iter().enumerate() {
                out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
            }
        }
        while out.len() > 1 && out.last().is_some_and(PolyA::is_zero) {
            out.pop();
        }
        CarlitzPolynomial { coeffs: out }
    }

    pub fn render(&self, ring: &PolyRing) -> String {
        let q = ring.field().q() as u128;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = q.pow(i as u32);
            let u = if power == 1 {
                "u".to_string()
            } else {
                format!("u^{power}")
            };
            terms.push(if c.is_one() {
                u
            } else {
                let r = ring.render(c);
                if r.contains('+') {
                    format!("({r})*{u}")
                } else {
                    format!("{r}*{u}")
                }
            });
        }
        terms.join(" + ")
    }
}

/// Builds `ρ_f` from `ρ_t` by composition `ρ_{t^{i+1}} = ρ_t ∘ ρ_{t^i}` and
/// `F_q`-linearity in `f`.
pub fn carlitz_polynomial(ring: &PolyRing, f: &PolyA) -> Result<CarlitzPolynomial, CarlitzError> {
    if f.is_zero() {
        return Err(CarlitzError::ZeroInput);
    }
    let t = PolyA::t();
    let r = f.degree().expect("nonzero");
    let mut out = vec![PolyA::zero(); r + 1];
    // coefficients of ρ_{t^k}
    let mut cur = vec![PolyA::one()];
    for k in 0..=r {
        let fk = f.coeff(k);
        if !fk.is_zero() {
            for (i, c) in cur.iter().enumerate() {
                out[i] = ring.add(&out[i], &ring.scale(c, fk));
            }
        }
        if k < r {
            let mut next = vec![PolyA::zero(); cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i] = ring.add(&next[i], &ring.mul(&t, c));
                next[i + 1] = ring.add(&next[i + 1], &ring.frobenius(c));
            }
            cur = next;
        }
    }
    Ok(CarlitzPolynomial { coeffs: out })
}

/// Field embedding `F_q -> F_{q'}` fixed by a root of the base modulus.
#[derive(Debug, Clone)]
pub struct Embedding {
    base: FieldDesc,
    ext: FieldDesc,
    /// Image of the base power-basis generator.
    alpha: Fq,
}

impl Embedding {
    /// Picks the smallest-index root of the base modulus in `ext`.
    pub fn find(base: &FieldDesc, ext: &FieldDesc) -> Result<Self, CarlitzError> {
        if base.p() != ext.p() {
            return Err(CarlitzError::CharacteristicMismatch {
                base: base.p(),
                ext: ext.p(),
            });
        }
        if !ext.e().is_multiple_of(base.e()) {
            return Err(CarlitzError::NoEmbedding {
                base: base.q(),
                ext: ext.q(),
            });
        }
        if base.is_prime_field() {
            return Ok(Embedding {
                base: base.clone(),
                ext: ext.clone(),
                alpha: Fq::ONE,
            });
        }
        let modulus: Vec<Fq> = base
            .modulus()
            .iter()
            .map(|&c| ext.from_int(c as i64))
            .collect();
        let eval = |x: Fq| {
            modulus
                .iter()
                .rev()
                .fold(Fq::ZERO, |acc, &c| ext.add(ext.mul(acc, x), c))
        };
        let alpha =
            ext.elements()
                .find(|&x| eval(x).is_zero())
                .ok_or(CarlitzError::NoEmbedding {
                    base: base.q(),
                    ext: ext.q(),
                })?;
        Ok(Embedding {
            base: base.clone(),
            ext: ext.clone(),
            alpha,
        })
    }

    pub fn apply(&self, a: Fq) -> Fq {
        let ext = &self.ext;
        self.base.coords(a).iter().rev().fold(Fq::ZERO, |acc, &c| {
            ext.add(ext.mul(acc, self.alpha), ext.from_int(c as i64))
        })
    }
}

/// Evaluates `ρ_f(u)` in `ext` after specializing `t -> θ`.
pub fn carlitz_act(
    ring: &PolyRing,
    f: &PolyA,
    u: Fq,
    theta: Fq,
    ext: &FieldDesc,
) -> Result<Fq, CarlitzError> {
    let rho = carlitz_polynomial(ring, f)?;
    let emb = Embedding::find(ring.field(), ext)?;
    Ok(eval_specialized(&rho, &emb, u, theta))
}

pub fn eval_specialized(rho: &CarlitzPolynomial, emb: &Embedding, u: Fq, theta: Fq) -> Fq {
    let ext = &emb.ext;
    let q = emb.base.q() as u64;
    let mut acc = Fq::ZERO;
    let mut u_power = u;
    for c in &rho.coeffs {
        let c_theta = c
            .coeffs()
            .iter()
            .rev()
            .fold(Fq::ZERO, |a, &x| ext.add(ext.mul(a, theta), emb.apply(x)));
        acc = ext.add(acc, ext.mul(c_theta, u_power));
        u_power = ext.pow(u_power, q);
    }
    acc
}

/// Every `u ∈ ext` with `ρ_f(u) = 0` under `t -> θ`, in index order.
pub fn torsion_points(
    ring: &PolyRing,
    f: &PolyA,
    theta: Fq,
    ext: &FieldDesc,
) -> Result<Vec<Fq>, CarlitzError> {
    let rho = carlitz_polynomial(ring, f)?;
    let emb = Embedding::find(ring.field(), ext)?;
    Ok(ext
        .elements()
        .filter(|&u| eval_specialized(&rho, &emb, u, theta).is_zero())
        .collect())
}

/// `φ(𝔭^m) = q^{dm} - q^{d(m-1)}`.
pub fn euler_phi(ring: &PolyRing, prime: &PolyA, m: u32) -> Result<BigUint, CarlitzError> {
    if m == 0 {
        return Err(CarlitzError::ZeroLevel);
    }
    if !ring.is_irreducible(prime) {
        return Err(CarlitzError::ReducibleInput);
    }
    let d = prime.degree().expect("irreducible") as u32;
    Ok(euler_phi_raw(ring.field().q() as u64, d, m))
}

pub fn euler_phi_raw(q: u64, d: u32, m: u32) -> BigUint {
    let q = BigUint::from(q);
    q.pow(d * m) - q.pow(d * (m - 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceCounts {
    /// Infinite places of `K(λ_{𝔭^m})`: `φ(𝔭^m)/(q-1)`.
    pub s_cyclotomic: BigUint,
    /// Infinite places of a degree-`h` unramified extension in which they all split.
    pub s_h: Option<BigUint>,
}

pub fn place_counts(
    ring: &PolyRing,
    prime: &PolyA,
    m: u32,
    h: Option<&BigUint>,
) -> Result<PlaceCounts, CarlitzError> {
    let phi = euler_phi(ring, prime, m)?;
    let q1 = BigUint::from(ring.field().q() - 1);
    let s = &phi / &q1;
    debug_assert_eq!(&s * &q1, phi);
    Ok(PlaceCounts {
        s_h: h.map(|h| h * &s),
        s_cyclotomic: s,
    })
}

/// Smallest-index monic irreducible of degree `n` over `F_p`, as a
/// little-endian coefficient list ready for [`FieldDesc::new`].
pub fn first_irreducible(p: u64, n: usize) -> Option<Vec<u64>> {
    let base = FieldDesc::prime(p).ok()?;
    let ring = PolyRing::new(base);
    ring.monic_enum(n, None)
        .find(|f| ring.is_irreducible(f))
        .map(|f| f.coeffs().iter().map(|c| c.index() as u64).collect())
}

/// `F_{p^n}` built on [`first_irreducible`].
pub fn standard_extension(p: u64, n: u32) -> Option<FieldDesc> {
    if n == 1 {
        return FieldDesc::prime(p).ok();
    }
    let m = first_irreducible(p, n as usize)?;
    FieldDesc::new(p, n, Some(&m)).ok()
}
