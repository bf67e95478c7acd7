//! The inequality layer for infinite class field towers: the two margin
//! conditions, Schoof's rank criteria, the Golod–Šafarevič bound, and an
//! auditable certificate tying them to computed class-number data.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::carlitz::{euler_phi, CarlitzError};
use crate::classminus::{h_minus, ClassError, HMinusOptions};
use crate::field::{FieldDesc, FieldInfo};
use crate::poly::{PolyA, PolyRing};
use crate::residue::{ResidueError, DEFAULT_BUDGET};
use crate::zarith::{
    factorize, factorize_budgeted, is_prime, mult_order_budgeted, FactorList, OrderPath, Primality,
    ZarithError, DEFAULT_RHO_BUDGET, DEFAULT_SEARCH_BUDGET,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum TowerError {
    #[error(transparent)]
    Carlitz(#[from] CarlitzError),
    #[error(transparent)]
    Zarith(#[from] ZarithError),
}

/// `4·h2 > h1²`, the inequality every nontrivial finite `p`-group satisfies.
pub fn golod_shafarevich_bound(h1: u64, h2: u64) -> bool {
    4 * h2 as u128 > (h1 as u128) * (h1 as u128)
}

/// `dp_cl ≥ 2 + 2√(dp_units + 1)` in integers.
pub fn schoof_rank_criterion(dp_cl: u64, dp_units: u64) -> bool {
    sqrt_bound(dp_cl, 2, dp_units)
}

/// `ρ ≥ 3 + dp_units_sub + 2√(dp_units + 1)` in integers.
pub fn schoof_ramified_criterion(rho: u64, dp_units_sub: u64, dp_units: u64) -> bool {
    match dp_units_sub.checked_add(3) {
        Some(offset) => sqrt_bound(rho, offset, dp_units),
        None => false,
    }
}

/// `x ≥ c + 2√(y+1)` iff `x ≥ c` and `(x-c)² ≥ 4(y+1)`.
fn sqrt_bound(x: u64, c: u64, y: u64) -> bool {
    if x < c {
        return false;
    }
    let d = (x - c) as u128;
    d * d >= 4 * (y as u128 + 1)
}

/// Number of invariant factors divisible by `p`.
pub fn dp_rank(invariant_factors: &[u64], p: u64) -> usize {
    invariant_factors.iter().filter(|&&n| n % p == 0).count()
}

/// `p`-rank of the `S`-units when `p ∤ q-1`: `|S| - 1`. Zero for `|S| = 0`.
pub fn unit_p_rank(s_count: &BigUint) -> BigUint {
    if s_count.is_zero() {
        BigUint::zero()
    } else {
        s_count - 1u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionMargin {
    /// Margin multiplied through by `q-1`.
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub cleared: BigInt,
    /// Margin on the unscaled side, present when `q-1` divides exactly.
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub unscaled: Option<BigInt>,
    pub holds: bool,
}

impl ConditionMargin {
    fn new(cleared: BigInt, q1: &BigInt) -> Self {
        let (quot, rem) = cleared.div_rem(q1);
        ConditionMargin {
            holds: cleared.sign() != Sign::Minus,
            unscaled: rem.is_zero().then_some(quot),
            cleared,
        }
    }
}

/// `(q-1)(f² - 4f) - 4hφ`.
pub fn condition_i_margin(q: u64, phi: &BigUint, h: &BigUint, f: &BigUint) -> ConditionMargin {
    let q1 = BigInt::from(q - 1);
    let f = BigInt::from(f.clone());
    let lhs = &q1 * (&f * &f - 4 * &f);
    let rhs = BigInt::from(4u32 * h * phi);
    ConditionMargin::new(lhs - rhs, &q1)
}

/// `(q-1)h - (4pφ + 4(q-1))`.
pub fn condition_ii_margin(q: u64, p: u64, phi: &BigUint, h: &BigUint) -> ConditionMargin {
    let q1 = BigInt::from(q - 1);
    let lhs = &q1 * BigInt::from(h.clone());
    let rhs = BigInt::from(4u64 * p) * BigInt::from(phi.clone()) + 4 * &q1;
    ConditionMargin::new(lhs - rhs, &q1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Margins {
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub f_ph: BigUint,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub phi: BigUint,
    #[serde(rename = "I")]
    pub condition_i: ConditionMargin,
    #[serde(rename = "II")]
    pub condition_ii: ConditionMargin,
}

pub fn condition_margins(
    field: &FieldDesc,
    prime: &PolyA,
    m: u32,
    h: &BigUint,
) -> Result<Margins, TowerError> {
    let ring = PolyRing::new(field.clone());
    let phi = euler_phi(&ring, prime, m)?;
    let p = BigUint::from(field.p());
    let f = mult_order_budgeted(&p, h, DEFAULT_RHO_BUDGET, DEFAULT_SEARCH_BUDGET)?.order;
    let q = field.q() as u64;
    Ok(Margins {
        condition_i: condition_i_margin(q, &phi, h, &f),
        condition_ii: condition_ii_margin(q, field.p() as u64, &phi, h),
        f_ph: f,
        phi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PlusRegularSource {
    #[serde(rename = "external-table")]
    ExternalTable,
    #[serde(rename = "unknown")]
    Unknown,
}

impl FromStr for PlusRegularSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "external" | "external-table" => Ok(Self::ExternalTable),
            "unknown" => Ok(Self::Unknown),
            other => Err(format!("unknown plus-regularity source '{other}'")),
        }
    }
}

/// Which branch of the `p | |Cl_H|` case split must be covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CertMode {
    #[serde(rename = "both")]
    Both,
    /// Assume `p | |Cl_H|`; only condition I is needed.
    #[serde(rename = "I")]
    CaseI,
    /// Assume `p ∤ |Cl_H|`; only condition II is needed.
    #[serde(rename = "II")]
    CaseII,
}

impl FromStr for CertMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "both" => Ok(Self::Both),
            "I" | "i" | "case-i" => Ok(Self::CaseI),
            "II" | "ii" | "case-ii" => Ok(Self::CaseII),
            other => Err(format!("unknown mode '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Conditional,
    Rejected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::Conditional => "conditional",
            Verdict::Rejected => "rejected",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reason {
    InvalidLevel,
    PrimeReducible,
    HComposite,
    HEqualsP,
    HNotCoprimeToQMinus1,
    HDoesNotDivideHTildeMinus,
    NotMinusRegular,
    ConditionIFails,
    ConditionIIFails,
    BudgetExceeded,
    InternalError,
    HProbablePrime,
    PlusRegularityUnknown,
    SingleCaseAssumed,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::InvalidLevel => "invalid_level",
            Reason::PrimeReducible => "prime_reducible",
            Reason::HComposite => "h_not_prime",
            Reason::HEqualsP => "h_equals_p",
            Reason::HNotCoprimeToQMinus1 => "h_not_coprime_to_q_minus_1",
            Reason::HDoesNotDivideHTildeMinus => "h_does_not_divide_h_tilde_minus",
            Reason::NotMinusRegular => "not_minus_regular",
            Reason::ConditionIFails => "condition_I_fails",
            Reason::ConditionIIFails => "condition_II_fails",
            Reason::BudgetExceeded => "budget_exceeded",
            Reason::InternalError => "internal_error",
            Reason::HProbablePrime => "h_probable_prime",
            Reason::PlusRegularityUnknown => "plus_regularity_unknown",
            Reason::SingleCaseAssumed => "single_case_assumed",
        }
    }

    /// Reasons that only downgrade to a conditional verdict.
    pub fn is_soft(self) -> bool {
        matches!(
            self,
            Reason::HProbablePrime | Reason::PlusRegularityUnknown | Reason::SingleCaseAssumed
        )
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for Reason {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertInputs {
    pub field: FieldInfo,
    pub prime: String,
    pub prime_degree: u32,
    pub m: u32,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub h: BigUint,
    pub p: u32,
    pub plus_regular_source: PlusRegularSource,
    pub mode: CertMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertFacts {
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub phi: Option<BigUint>,
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub s_cyclotomic: Option<BigUint>,
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub s_h: Option<BigUint>,
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub f_ph: Option<BigUint>,
    pub f_ph_path: Option<OrderPath>,
    pub h_prime: Primality,
    pub h_neq_p: bool,
    pub gcd_h_qminus1_is_1: bool,
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub h_tilde_minus: Option<BigUint>,
    pub h_divides_h_tilde_minus: Option<bool>,
    pub minus_regular: Option<bool>,
    pub plus_regular_source: PlusRegularSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertMargins {
    #[serde(rename = "I")]
    pub condition_i: Option<ConditionMargin>,
    #[serde(rename = "II")]
    pub condition_ii: Option<ConditionMargin>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerCertificate {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub inputs: CertInputs,
    pub facts: CertFacts,
    pub margins: CertMargins,
    pub assumptions: Vec<&'static str>,
    pub verdict: Verdict,
    pub reasons: Vec<Reason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub const ASSUMPTION_UNRAMIFIED_SUBEXTENSION: &str =
    "h | h_tilde_minus stands in for a cyclic degree-h unramified extension H split at infinity";
pub const ASSUMPTION_PLUS_EXTERNAL: &str =
    "plus-part regularity taken from an external class number table";
pub const ASSUMPTION_CASE_I: &str = "p divides |Cl_H| (only condition I checked)";
pub const ASSUMPTION_CASE_II: &str = "p does not divide |Cl_H| (only condition II checked)";

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub budget: u64,
    pub rho_budget: u64,
    pub search_budget: u64,
    pub mode: CertMode,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            budget: DEFAULT_BUDGET,
            rho_budget: DEFAULT_RHO_BUDGET,
            search_budget: DEFAULT_SEARCH_BUDGET,
            mode: CertMode::Both,
        }
    }
}

/// Builds the certificate, computing `h̃⁻` from scratch.
pub fn certify(
    field: &FieldDesc,
    prime: &PolyA,
    m: u32,
    h: &BigUint,
    plus: PlusRegularSource,
    opts: &CertifyOptions,
) -> TowerCertificate {
    certify_inner(field, prime, m, h, plus, opts, None)
}

/// As [`certify`] with `h̃⁻` supplied by the caller (a cache or a sweep).
pub fn certify_with_h_tilde(
    field: &FieldDesc,
    prime: &PolyA,
    m: u32,
    h: &BigUint,
    plus: PlusRegularSource,
    opts: &CertifyOptions,
    h_tilde_minus: &BigUint,
) -> TowerCertificate {
    certify_inner(field, prime, m, h, plus, opts, Some(h_tilde_minus))
}

fn certify_inner(
    field: &FieldDesc,
    prime: &PolyA,
    m: u32,
    h: &BigUint,
    plus: PlusRegularSource,
    opts: &CertifyOptions,
    known: Option<&BigUint>,
) -> TowerCertificate {
    let ring = PolyRing::new(field.clone());
    let p = BigUint::from(field.p());
    let q = field.q() as u64;
    let q1 = BigUint::from(q - 1);
    let mut reasons = Vec::new();
    let mut error = None;

    let h_prime = is_prime(h);
    let mut facts = CertFacts {
        phi: None,
        s_cyclotomic: None,
        s_h: None,
        f_ph: None,
        f_ph_path: None,
        h_prime,
        h_neq_p: *h != p,
        gcd_h_qminus1_is_1: h.gcd(&q1).is_one(),
        h_tilde_minus: None,
        h_divides_h_tilde_minus: None,
        minus_regular: None,
        plus_regular_source: plus,
    };
    let mut margins = CertMargins {
        condition_i: None,
        condition_ii: None,
    };

    match h_prime {
        Primality::Composite => reasons.push(Reason::HComposite),
        Primality::Probable => reasons.push(Reason::HProbablePrime),
        Primality::Proven => {}
    }
    if !facts.h_neq_p {
        reasons.push(Reason::HEqualsP);
    }
    if !facts.gcd_h_qminus1_is_1 {
        reasons.push(Reason::HNotCoprimeToQMinus1);
    }

    let phi = match euler_phi(&ring, prime, m) {
        Ok(phi) => Some(phi),
        Err(CarlitzError::ZeroLevel) => {
            reasons.push(Reason::InvalidLevel);
            None
        }
        Err(_) => {
            reasons.push(Reason::PrimeReducible);
            None
        }
    };

    if let Some(phi) = &phi {
        let s = phi / &q1;
        facts.s_h = Some(h * &s);
        facts.s_cyclotomic = Some(s);
        facts.phi = Some(phi.clone());

        if h >= &BigUint::from(2u32) && h.gcd(&p).is_one() {
            match mult_order_budgeted(&p, h, opts.rho_budget, opts.search_budget) {
                Ok(ov) => {
                    margins.condition_i = Some(condition_i_margin(q, phi, h, &ov.order));
                    facts.f_ph = Some(ov.order);
                    facts.f_ph_path = Some(ov.path);
                }
                Err(e) => {
                    reasons.push(Reason::BudgetExceeded);
                    error = Some(e.to_string());
                }
            }
        }
        margins.condition_ii = Some(condition_ii_margin(q, field.p() as u64, phi, h));

        let h_tilde = match known {
            Some(v) => Ok(v.clone()),
            None => h_minus(
                field,
                prime,
                m,
                &HMinusOptions {
                    budget: opts.budget,
                    ..Default::default()
                },
            )
            .map(|r| r.h_tilde_minus),
        };
        match h_tilde {
            Ok(ht) => {
                let divides = !h.is_zero() && (&ht % h).is_zero();
                let regular = !(&ht % &p).is_zero();
                if !divides {
                    reasons.push(Reason::HDoesNotDivideHTildeMinus);
                }
                if !regular {
                    reasons.push(Reason::NotMinusRegular);
                }
                facts.h_divides_h_tilde_minus = Some(divides);
                facts.minus_regular = Some(regular);
                facts.h_tilde_minus = Some(ht);
            }
            Err(ClassError::Residue(ResidueError::BudgetExceeded { .. })) => {
                reasons.push(Reason::BudgetExceeded);
                error = Some("residue table exceeds budget".into());
            }
            Err(e) => {
                reasons.push(Reason::InternalError);
                error = Some(e.to_string());
            }
        }
    }

    let need_i = opts.mode != CertMode::CaseII;
    let need_ii = opts.mode != CertMode::CaseI;
    if need_i {
        match &margins.condition_i {
            Some(c) if !c.holds => reasons.push(Reason::ConditionIFails),
            None if phi.is_some() && !reasons.contains(&Reason::BudgetExceeded) => {
                reasons.push(Reason::ConditionIFails)
            }
            _ => {}
        }
    }
    if need_ii && margins.condition_ii.as_ref().is_some_and(|c| !c.holds) {
        reasons.push(Reason::ConditionIIFails);
    }
    if plus == PlusRegularSource::Unknown {
        reasons.push(Reason::PlusRegularityUnknown);
    }
    if opts.mode != CertMode::Both {
        reasons.push(Reason::SingleCaseAssumed);
    }
    reasons.sort();
    reasons.dedup();

    let mut assumptions = vec![ASSUMPTION_UNRAMIFIED_SUBEXTENSION];
    if plus == PlusRegularSource::ExternalTable {
        assumptions.push(ASSUMPTION_PLUS_EXTERNAL);
    }
    match opts.mode {
        CertMode::CaseI => assumptions.push(ASSUMPTION_CASE_I),
        CertMode::CaseII => assumptions.push(ASSUMPTION_CASE_II),
        CertMode::Both => {}
    }

    let verdict = verdict_from_reasons(&reasons);
    TowerCertificate {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        inputs: CertInputs {
            field: field.info(),
            prime: ring.render(prime),
            prime_degree: prime.degree().unwrap_or(0) as u32,
            m,
            h: h.clone(),
            p: field.p(),
            plus_regular_source: plus,
            mode: opts.mode,
        },
        facts,
        margins,
        assumptions,
        verdict,
        reasons,
        error,
    }
}

fn verdict_from_reasons(reasons: &[Reason]) -> Verdict {
    if reasons.iter().any(|r| !r.is_soft()) {
        Verdict::Rejected
    } else if reasons.is_empty() {
        Verdict::Certified
    } else {
        Verdict::Conditional
    }
}

/// Re-derives every fact of a certificate from its inputs and stored
/// intermediate values, using plain modular arithmetic rather than the code
/// paths that produced it. Returns the list of disagreements.
pub fn recheck(cert: &TowerCertificate) -> Result<(), Vec<String>> {
    let mut bad = Vec::new();
    let inp = &cert.inputs;
    let f = &cert.facts;
    let q = BigUint::from(inp.field.q);
    let q1 = &q - 1u32;
    let p = BigUint::from(inp.p);
    let h = &inp.h;

    if f.h_neq_p != (*h != p) {
        bad.push("h_neq_p".into());
    }
    if f.gcd_h_qminus1_is_1 != h.gcd(&q1).is_one() {
        bad.push("gcd_h_qminus1_is_1".into());
    }
    let prime_by_trial = h.to_u64().map(trial_is_prime);
    match (prime_by_trial, f.h_prime) {
        (Some(true), Primality::Proven) | (Some(false), Primality::Composite) => {}
        (None, _) => {}
        _ => bad.push("h_prime".into()),
    }

    if let Some(phi) = &f.phi {
        let d = inp.prime_degree;
        let expect = q.pow(d * inp.m) - q.pow(d * (inp.m - 1));
        if *phi != expect {
            bad.push("phi".into());
        }
        let s = phi / &q1;
        if &s * &q1 != *phi || f.s_cyclotomic.as_ref() != Some(&s) {
            bad.push("s_cyclotomic".into());
        }
        if f.s_h.as_ref() != Some(&(h * &s)) {
            bad.push("s_h".into());
        }
        if let Some(ord) = &f.f_ph {
            if !order_is_exact(&p, h, ord) {
                bad.push("f_ph".into());
            }
            let ord = BigInt::from(ord.clone());
            let lhs = &ord * &ord - 4 * &ord;
            let rhs = 4u32 * h * phi;
            let holds = lhs >= BigInt::from(ceil_div(&rhs, &q1));
            match &cert.margins.condition_i {
                Some(c) => {
                    if c.holds != holds
                        || c.cleared != BigInt::from(q1.clone()) * &lhs - BigInt::from(rhs)
                    {
                        bad.push("margin I".into());
                    }
                }
                None => bad.push("margin I missing".into()),
            }
        }
        let rhs_ii = 4u32 * &p * phi + 4u32 * &q1;
        let holds_ii = h * &q1 >= rhs_ii;
        match &cert.margins.condition_ii {
            Some(c)
                if c.holds == holds_ii
                    && c.cleared == BigInt::from(h * &q1) - BigInt::from(rhs_ii.clone()) => {}
            _ => bad.push("margin II".into()),
        }
    }
    if let Some(ht) = &f.h_tilde_minus {
        if f.h_divides_h_tilde_minus != Some(!h.is_zero() && (ht % h).is_zero()) {
            bad.push("h_divides_h_tilde_minus".into());
        }
        if f.minus_regular != Some(!(ht % &p).is_zero()) {
            bad.push("minus_regular".into());
        }
    }

    let all_true = f.h_prime == Primality::Proven
        && f.h_neq_p
        && f.gcd_h_qminus1_is_1
        && f.h_divides_h_tilde_minus == Some(true)
        && f.minus_regular == Some(true)
        && cert.margins.condition_i.as_ref().is_some_and(|c| c.holds)
        && cert.margins.condition_ii.as_ref().is_some_and(|c| c.holds)
        && f.plus_regular_source == PlusRegularSource::ExternalTable
        && inp.mode == CertMode::Both;
    if (cert.verdict == Verdict::Certified) != all_true {
        bad.push(format!("verdict {} against facts", cert.verdict));
    }
    if cert.verdict == Verdict::Conditional && cert.reasons.iter().any(|r| !r.is_soft()) {
        bad.push("conditional verdict with a hard reason".into());
    }

    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - 1u32) / b
}

fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n > 1 << 50 {
        return is_prime(&BigUint::from(n)).is_prime();
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^f ≡ 1` and `p^{f/r} ≢ 1 (mod h)` for each prime `r | f`.
fn order_is_exact(p: &BigUint, h: &BigUint, f: &BigUint) -> bool {
    if f.is_zero() || !p.modpow(f, h).is_one() {
        return false;
    }
    factorize(f)
        .primes()
        .all(|r| !p.modpow(&(f / r), h).is_one())
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub certify: CertifyOptions,
    pub plus_regular_source: PlusRegularSource,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            certify: CertifyOptions::default(),
            plus_regular_source: PlusRegularSource::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchItem {
    pub prime: String,
    pub prime_degree: u32,
    pub m: u32,
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub h_minus: Option<BigUint>,
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub h_tilde_minus: Option<BigUint>,
    pub factorization: Option<FactorList>,
    pub error: Option<String>,
    pub certificates: Vec<TowerCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub field: FieldInfo,
    pub max_deg: u32,
    pub max_m: u32,
    pub items: Vec<SearchItem>,
}

impl SearchReport {
    pub fn certificates(&self) -> impl Iterator<Item = &TowerCertificate> {
        self.items.iter().flat_map(|i| &i.certificates)
    }
}

/// Sweeps monic irreducible `𝔭` of degree `1..=max_deg` and levels
/// `1..=max_m`, certifying each admissible prime factor of `h̃⁻`.
pub fn search(field: &FieldDesc, max_deg: u32, max_m: u32, opts: &SearchOptions) -> SearchReport {
    let ring = PolyRing::new(field.clone());
    let mut work = Vec::new();
    for d in 1..=max_deg as usize {
        for prime in ring.monic_enum(d, None).filter(|f| ring.is_irreducible(f)) {
            for m in 1..=max_m {
                work.push((prime.clone(), m));
            }
        }
    }
    let items = work
        .par_iter()
        .map(|(prime, m)| search_item(field, &ring, prime, *m, opts))
        .collect();
    SearchReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        field: field.info(),
        max_deg,
        max_m,
        items,
    }
}

fn search_item(
    field: &FieldDesc,
    ring: &PolyRing,
    prime: &PolyA,
    m: u32,
    opts: &SearchOptions,
) -> SearchItem {
    let mut item = SearchItem {
        prime: ring.render(prime),
        prime_degree: prime.degree().unwrap_or(0) as u32,
        m,
        h_minus: None,
        h_tilde_minus: None,
        factorization: None,
        error: None,
        certificates: Vec::new(),
    };
    let hopts = HMinusOptions {
        budget: opts.certify.budget,
        ..Default::default()
    };
    let r = match h_minus(field, prime, m, &hopts) {
        Ok(r) => r,
        Err(e) => {
            item.error = Some(e.to_string());
            return item;
        }
    };
    let factors = match factorize_budgeted(&r.h_tilde_minus, opts.certify.rho_budget) {
        Ok(f) => f,
        Err(e) => {
            item.h_minus = Some(r.h_minus);
            item.h_tilde_minus = Some(r.h_tilde_minus);
            item.error = Some(e.to_string());
            return item;
        }
    };
    let p = BigUint::from(field.p());
    let q1 = BigUint::from(field.q() - 1);
    for h in factors.primes() {
        if *h == p || !h.gcd(&q1).is_one() {
            continue;
        }
        item.certificates.push(certify_with_h_tilde(
            field,
            prime,
            m,
            h,
            opts.plus_regular_source,
            &opts.certify,
            &r.h_tilde_minus,
        ));
    }
    item.h_minus = Some(r.h_minus);
    item.h_tilde_minus = Some(r.h_tilde_minus);
    item.factorization = Some(factors);
    item
}
