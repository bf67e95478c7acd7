//! Discriminant-exponent bookkeeping for a compositum of Artin–Schreier
//! extensions `H_i = H(y_i)`, `y_i^p - y_i = x_i`, each ramified at one
//! prime `𝔭_i` where `x_i` has a pole of order `w`.
//!
//! The pole order is called `w` here so it cannot be confused with the
//! cyclotomic level `m`. Only valuation exponents are tracked; linear
//! disjointness of the `H_i` and the splitting of infinite places are
//! carried as stated assumptions.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("pole order {w} is divisible by p = {p}")]
    PoleOrderDivisibleByP { p: u64, w: u64 },
    #[error("pole order must be at least 1")]
    ZeroPoleOrder,
    #[error("at least one ramified prime is required")]
    NoPrimes,
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
}

pub const LEDGER_ASSUMPTIONS: [&str; 2] = [
    "the extensions H_i/H are linearly disjoint over H",
    "every infinite place of H splits completely in each H_i",
];

/// `(p-1)(w+1)`, the exponent of `𝔭` in the discriminant of `y^p - y = x`
/// when `v_𝔭(x) = -w` with `p ∤ w`.
pub fn as_disc_exponent(p: u64, w: u64) -> Result<u64, LedgerError> {
    check(p, w)?;
    Ok((p - 1) * (w + 1))
}

fn check(p: u64, w: u64) -> Result<(), LedgerError> {
    if !crate::zarith::is_prime_u64(p) {
        return Err(LedgerError::NotPrime(p));
    }
    if w == 0 {
        return Err(LedgerError::ZeroPoleOrder);
    }
    if w.gcd(&p) != 1 {
        return Err(LedgerError::PoleOrderDivisibleByP { p, w });
    }
    Ok(())
}

/// Exponents at each `𝔭_i`, identical for every `i` by symmetry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscLedger {
    pub p: u64,
    pub h: u32,
    pub w: u64,
    /// `δ_{H_i/H}`.
    pub e_single: u64,
    /// `δ_{L/H}` with `L = H_1`.
    pub e_l: u64,
    /// `δ_{M/H}` for the compositum `M = H_1 ⋯ H_h`.
    #[serde(with = "crate::decimal")]
    pub e_m: BigUint,
    /// `N_{L/H}(δ_{M/L})`, read off from the tower formula.
    #[serde(with = "crate::decimal")]
    pub e_norm_ml: BigUint,
    pub m_over_l_unramified: bool,
    pub assumptions: [&'static str; 2],
}

/// Fills the ledger. `e_M` comes from the conductor-discriminant formula over
/// the characters of `Gal(M/H)`, and the tower formula
/// `δ_{M/H} = δ_{L/H}^{[M:L]} · N_{L/H}(δ_{M/L})` then fixes the norm term.
pub fn compositum_ledger(p: u64, h: u32, w: u64) -> Result<DiscLedger, LedgerError> {
    let e_single = as_disc_exponent(p, w)?;
    if h == 0 {
        return Err(LedgerError::NoPrimes);
    }
    let degree_m_over_l = BigUint::from(p).pow(h - 1);
    // conductor-discriminant sum: p^{h-1}(p-1) characters of Gal(M/H) are
    // nontrivial at 𝔭_i, each with conductor exponent w+1
    let ramified_characters = &degree_m_over_l * (p - 1);
    let e_m = ramified_characters * (w + 1);
    let e_l = e_single;
    let from_l = &degree_m_over_l * e_l;
    let e_norm_ml = &e_m - &from_l;
    Ok(DiscLedger {
        p,
        h,
        w,
        e_single,
        e_l,
        m_over_l_unramified: e_norm_ml == BigUint::from(0u32),
        e_m,
        e_norm_ml,
        assumptions: LEDGER_ASSUMPTIONS,
    })
}
