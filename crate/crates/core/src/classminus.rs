//! Relative class numbers of Carlitz cyclotomic function fields from
//! `h⁻ = |Π_{χ odd} L(0, χ)|`, computed exactly in `Z[ζ_N]`.

use std::io::{self, Write};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::carlitz::{place_counts, CarlitzError};
use crate::cyclo::{ComplexApprox, CycloError, CyclotomicInt};
use crate::field::FieldDesc;
use crate::poly::PolyA;
use crate::residue::{DirichletCharacter, Parity, ResidueError, ResidueUnitGroup, DEFAULT_BUDGET};
use crate::zarith::{factorize_budgeted, FactorList, ZarithError, DEFAULT_RHO_BUDGET};

#[derive(Debug, Error)]
pub enum ClassError {
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Carlitz(#[from] CarlitzError),
    #[error("L(0, χ) is only defined here for nontrivial χ")]
    TrivialCharacter,
    #[error("product of odd L-values is not rational: {0}")]
    NotRational(CycloError),
    #[error("product of odd L-values vanished")]
    ZeroProduct,
    #[error("h⁻ = {h_minus} is not divisible by (q-1)^(s-1) = {divisor}")]
    RosenViolation { h_minus: BigUint, divisor: BigUint },
    #[error("characteristic {expected} expected, got {got}")]
    WrongCharacteristic { expected: u32, got: u64 },
    #[error(transparent)]
    Factor(#[from] ZarithError),
}

/// Sums `χ(a)` over the monic `a` coprime to `𝔭` grouped by degree.
pub struct LValueKernel<'g> {
    group: &'g ResidueUnitGroup,
    q: u64,
    /// `d·m`; monic polynomials of smaller degree are their own residues.
    span: u32,
}

impl<'g> LValueKernel<'g> {
    pub fn new(group: &'g ResidueUnitGroup) -> Self {
        let d = group.prime().degree().expect("prime has a degree") as u32;
        LValueKernel {
            group,
            q: group.ring().field().q() as u64,
            span: d * group.level(),
        }
    }

    /// `L(0, χ) = Σ_{deg a < dm} χ(a)`; higher degrees contribute zero.
    pub fn l_value(&self, chi: &DirichletCharacter<'_>) -> Result<CyclotomicInt, ClassError> {
        if chi.is_trivial() {
            return Err(ClassError::TrivialCharacter);
        }
        let n = chi.value_order();
        let mut counts = vec![0i64; n as usize];
        let mut start = 1u64;
        for _ in 0..self.span {
            for idx in start..2 * start {
                if let Some(y) = self.group.dlog_index(idx) {
                    counts[chi.value_exponent(y) as usize] += 1;
                }
            }
            start *= self.q;
        }
        Ok(CyclotomicInt::from_exponent_counts(n, &counts))
    }

    /// `Σ χ(a)` over monic `a` of exact degree `deg`, for any `deg`.
    pub fn partial_sum(&self, chi: &DirichletCharacter<'_>, deg: usize) -> CyclotomicInt {
        let n = chi.value_order();
        let mut counts = vec![0i64; n as usize];
        let ring = self.group.ring();
        for a in ring.monic_enum(deg, Some(self.group.prime())) {
            if let Some(y) = self.group.dlog(&a) {
                counts[chi.value_exponent(y) as usize] += 1;
            }
        }
        CyclotomicInt::from_exponent_counts(n, &counts)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct HMinusOptions {
    /// Ceiling on `q^{dm}`, the residue table size.
    pub budget: u64,
    pub factor: bool,
    pub keep_l_values: bool,
    pub rho_budget: u64,
}

impl Default for HMinusOptions {
    fn default() -> Self {
        HMinusOptions {
            budget: DEFAULT_BUDGET,
            factor: false,
            keep_l_values: false,
            rho_budget: DEFAULT_RHO_BUDGET,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LValueRecord {
    pub exponents: Vec<u64>,
    pub parity: Parity,
    pub value: CyclotomicInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelClassResult {
    pub q: u32,
    pub prime: String,
    pub m: u32,
    /// Invariant factors of `(A/𝔭^m)*`.
    pub group_structure: Vec<u64>,
    pub odd_characters: usize,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub s_cyclotomic: BigUint,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub h_minus: BigUint,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub h_tilde_minus: BigUint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<FactorList>,
    #[serde(skip)]
    pub l_values: Option<Vec<LValueRecord>>,
}

pub fn h_minus(
    field: &FieldDesc,
    prime: &PolyA,
    m: u32,
    opts: &HMinusOptions,
) -> Result<RelClassResult, ClassError> {
    let group = ResidueUnitGroup::with_budget(field, prime, m, opts.budget)?;
    let ring = group.ring();
    let counts = place_counts(ring, prime, m, None)?;
    let kernel = LValueKernel::new(&group);
    let odd: Vec<DirichletCharacter<'_>> = group
        .characters()
        .into_iter()
        .filter(|c| c.is_odd())
        .collect();
    let values: Vec<CyclotomicInt> = odd
        .par_iter()
        .map(|chi| kernel.l_value(chi))
        .collect::<Result<_, _>>()?;

    let n = group.exponent();
    let product = values.iter().fold(CyclotomicInt::one(n), |acc, v| &acc * v);
    let value = product.rational_value().map_err(ClassError::NotRational)?;
    if value.is_zero() {
        return Err(ClassError::ZeroProduct);
    }
    let h = value.magnitude().clone();
    let h_tilde = rosen_quotient(&h, field.q(), &counts.s_cyclotomic)?;

    let factorization = if opts.factor {
        Some(factorize_budgeted(&h, opts.rho_budget)?)
    } else {
        None
    };
    let l_values = opts.keep_l_values.then(|| {
        odd.iter()
            .zip(values)
            .map(|(chi, value)| LValueRecord {
                exponents: chi.exponents().to_vec(),
                parity: chi.parity(),
                value,
            })
            .collect()
    });
    Ok(RelClassResult {
        q: field.q(),
        prime: ring.render(prime),
        m,
        group_structure: group.orders().to_vec(),
        odd_characters: odd.len(),
        s_cyclotomic: counts.s_cyclotomic,
        h_minus: h,
        h_tilde_minus: h_tilde,
        factorization,
        l_values,
    })
}

/// `h̃⁻ = h⁻ / (q-1)^{s-1}`, failing if the division is inexact.
pub fn rosen_quotient(h: &BigUint, q: u32, s: &BigUint) -> Result<BigUint, ClassError> {
    let exp = u32::try_from(s - BigUint::one()).expect("s fits in u32 under any budget");
    let divisor = BigUint::from(q - 1).pow(exp);
    let (quot, rem) = h.div_rem(&divisor);
    if !rem.is_zero() {
        return Err(ClassError::RosenViolation {
            h_minus: h.clone(),
            divisor,
        });
    }
    Ok(quot)
}

/// `p ∤ h̃⁻` for `p` the characteristic of `F_q`.
pub fn minus_regular(
    field: &FieldDesc,
    prime: &PolyA,
    m: u32,
    p: u64,
    opts: &HMinusOptions,
) -> Result<bool, ClassError> {
    if p != field.p() as u64 {
        return Err(ClassError::WrongCharacteristic {
            expected: field.p(),
            got: p,
        });
    }
    let r = h_minus(
        field,
        prime,
        m,
        &HMinusOptions {
            factor: false,
            ..*opts
        },
    )?;
    Ok(!(r.h_tilde_minus % p).is_zero())
}

/// Product of the complex embeddings of the stored L-values.
pub fn complex_product(records: &[LValueRecord], precision: usize) -> ComplexApprox {
    records
        .iter()
        .fold(ComplexApprox::one(precision), |acc, r| {
            acc.mul(&r.value.complex_approx(precision))
        })
}

/// One TSV line per odd character: exponents, parity, conductor `N`, and
/// the coordinates of `L(0, χ)` in the power basis of `Z[ζ_N]`.
pub fn write_l_value_dump<W: Write>(mut w: W, records: &[LValueRecord]) -> io::Result<()> {
    writeln!(w, "#exponents\tparity\tN\tcoords")?;
    for r in records {
        let e: Vec<String> = r.exponents.iter().map(u64::to_string).collect();
        let c: Vec<String> = r.value.coords().iter().map(BigInt::to_string).collect();
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            e.join(","),
            r.parity,
            r.value.conductor(),
            c.join(",")
        )?;
    }
    Ok(())
}
