//! Acceptance gate. Prints one PASS/FAIL line per criterion, then fails the
//! test if any criterion failed.

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use common::props;
use towerforge_core::classminus::{h_minus, HMinusOptions, RelClassResult};
use towerforge_core::cyclo::CyclotomicInt;
use towerforge_core::field::FieldDesc;
use towerforge_core::poly::{PolyA, PolyRing};
use towerforge_core::tower::{
    certify, condition_margins, recheck, CertifyOptions, PlusRegularSource, Verdict,
};
use towerforge_core::zarith::{mult_order_u64, Certainty};

const CLASS_NUMBER_LIMIT: Duration = Duration::from_secs(60);
const ORDER_TOTAL_LIMIT: Duration = Duration::from_secs(5);
const TABLE_ROW_LIMIT: Duration = Duration::from_secs(60);
const SUITE_LIMIT: Duration = Duration::from_secs(600);

/// `(q, m, h, condition I margin, condition II margin)` for `𝔭 = t`.
const TABLE: [(u64, u32, u64, i64, i64); 5] = [
    (7, 2, 118147, 1547476280, 117947),
    (11, 2, 19031, 361227416, 18543),
    (5, 3, 821, 84360, 317),
    (3, 4, 379, 100440, 51),
    (3, 5, 5779, 31489776, 4803),
];
const PRINTED_Q7_CONDITION_II: i64 = 11647;

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn record(&mut self, id: u32, title: &str, outcome: Result<String, String>) {
        match outcome {
            Ok(detail) => println!("PASS [{id}] {title}: {detail}"),
            Err(detail) => {
                println!("FAIL [{id}] {title}: {detail}");
                self.failed.push(id);
            }
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f3_prime(text: &str) -> (FieldDesc, PolyA) {
    let f = FieldDesc::prime(3).unwrap();
    let p = PolyRing::new(f.clone()).parse(text).unwrap();
    (f, p)
}

fn f3_case(text: &str, m: u32) -> (FieldDesc, PolyA, u32) {
    let (f, p) = f3_prime(text);
    (f, p, m)
}

fn timed_h_minus(
    field: &FieldDesc,
    prime: &PolyA,
    m: u32,
    factor: bool,
) -> Result<(RelClassResult, Duration), String> {
    let start = Instant::now();
    let r = h_minus(
        field,
        prime,
        m,
        &HMinusOptions {
            factor,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    Ok((r, start.elapsed()))
}

fn criterion_1() -> Result<String, String> {
    let cases = [
        (
            "t^4+2*t+2",
            vec![(2u64, 39u32), (17, 1), (97, 1), (63648628175761, 1)],
        ),
        (
            "t^4+t+2",
            vec![(2, 39), (241, 1), (641, 1), (881, 1), (532611841, 1)],
        ),
    ];
    let mut notes = Vec::new();
    for (prime, expected) in cases {
        let (field, p) = f3_prime(prime);
        let (r, took) = timed_h_minus(&field, &p, 1, true)?;
        let target = expected
            .iter()
            .fold(BigUint::one(), |acc, &(q, e)| acc * BigUint::from(q).pow(e));
        ensure(r.h_minus == target, || {
            format!("{prime}: h⁻ = {}", r.h_minus)
        })?;
        let factors = r.factorization.unwrap();
        let got: Vec<(BigUint, u32)> = factors.pairs();
        let want: Vec<(BigUint, u32)> = expected
            .iter()
            .map(|&(q, e)| (BigUint::from(q), e))
            .collect();
        ensure(got == want, || format!("{prime}: factors {factors}"))?;
        ensure(
            factors.0.iter().all(|f| f.certainty == Certainty::Proven),
            || format!("{prime}: unproven factor"),
        )?;
        ensure(took <= CLASS_NUMBER_LIMIT, || format!("{prime}: {took:?}"))?;
        notes.push(format!("{prime} = {factors} in {:.2}s", took.as_secs_f64()));
    }
    Ok(notes.join("; "))
}

fn criterion_2() -> Result<String, String> {
    let rows: [(u64, u64, u64); 7] = [
        (3, 63648628175761, 31824314087880),
        (3, 532611841, 88768640),
        (7, 118147, 39382),
        (11, 19031, 19030),
        (5, 821, 410),
        (3, 379, 378),
        (3, 5779, 5778),
    ];
    let start = Instant::now();
    for (p, h, f) in rows {
        let got = mult_order_u64(p, h).map_err(|e| e.to_string())?.order;
        ensure(got == BigUint::from(f), || {
            format!("f_({p},{h}) = {got}, expected {f}")
        })?;
    }
    let took = start.elapsed();
    ensure(took <= ORDER_TOTAL_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("7 orders in {:.3}s", took.as_secs_f64()))
}

fn criterion_3() -> Result<String, String> {
    let mut slowest = Duration::ZERO;
    for (q, m, h, _, _) in TABLE {
        let field = FieldDesc::prime(q).unwrap();
        let (r, took) = timed_h_minus(&field, &PolyA::t(), m, false)?;
        ensure((&r.h_minus % h).is_zero(), || {
            format!("{h} ∤ h⁻(F_{q}, t, {m})")
        })?;
        ensure(!(&r.h_tilde_minus % field.p()).is_zero(), || {
            format!("{} | h̃⁻(F_{q}, t, {m})", field.p())
        })?;
        ensure(took <= TABLE_ROW_LIMIT, || format!("F_{q} m={m}: {took:?}"))?;
        slowest = slowest.max(took);
    }
    Ok(format!(
        "5 rows divide, all minus-regular, slowest {:.2}s",
        slowest.as_secs_f64()
    ))
}

fn criterion_4() -> Result<String, String> {
    let mut q7_ii = None;
    for (q, m, h, cond_i, cond_ii) in TABLE {
        let field = FieldDesc::prime(q).unwrap();
        let mg = condition_margins(&field, &PolyA::t(), m, &BigUint::from(h))
            .map_err(|e| e.to_string())?;
        let got_i = mg.condition_i.unscaled.clone();
        let got_ii = mg.condition_ii.unscaled.clone();
        ensure(got_i == Some(BigInt::from(cond_i)), || {
            format!("q={q} m={m}: condition I margin {got_i:?}, expected {cond_i}")
        })?;
        ensure(got_ii == Some(BigInt::from(cond_ii)), || {
            format!("q={q} m={m}: condition II margin {got_ii:?}, expected {cond_ii}")
        })?;
        if q == 7 {
            q7_ii = got_ii;
        }
    }
    let q7 = q7_ii.unwrap();
    ensure(q7 != BigInt::from(PRINTED_Q7_CONDITION_II), || {
        "q=7 row matched the printed 11647".into()
    })?;
    Ok(format!(
        "condition I and II margins exact; q=7 recomputed {q7} (printed {PRINTED_Q7_CONDITION_II} flagged)"
    ))
}

fn criterion_5() -> Result<String, String> {
    let mut cases: Vec<(FieldDesc, PolyA, u32, u64)> = vec![
        {
            let (f, p) = f3_prime("t^4+2*t+2");
            (f, p, 1, 63648628175761)
        },
        {
            let (f, p) = f3_prime("t^4+t+2");
            (f, p, 1, 532611841)
        },
    ];
    for (q, m, h, _, _) in TABLE {
        cases.push((FieldDesc::prime(q).unwrap(), PolyA::t(), m, h));
    }
    for (field, prime, m, h) in &cases {
        let cert = certify(
            field,
            prime,
            *m,
            &BigUint::from(*h),
            PlusRegularSource::ExternalTable,
            &CertifyOptions::default(),
        );
        ensure(cert.verdict == Verdict::Certified, || {
            format!("h={h}: verdict {} reasons {:?}", cert.verdict, cert.reasons)
        })?;
        recheck(&cert).map_err(|e| format!("h={h}: recheck {e:?}"))?;
    }
    Ok(format!(
        "{} certificates certified and rechecked",
        cases.len()
    ))
}

fn criterion_6() -> Result<String, String> {
    let field = FieldDesc::prime(3).unwrap();
    let (r, _) = timed_h_minus(&field, &PolyA::t(), 2, false)?;
    ensure(r.h_minus == BigUint::from(4u32), || {
        format!("h⁻ = {}", r.h_minus)
    })?;
    ensure(r.h_tilde_minus.is_one(), || {
        format!("h̃⁻ = {}", r.h_tilde_minus)
    })?;
    // the three odd characters by hand: 1 · (1 + ζ_3 − ζ_3²)(1 + ζ_3² − ζ_3)
    let z = |k| CyclotomicInt::root_of_unity(3, k);
    let one = CyclotomicInt::one(3);
    let a = &(&one + &z(1)) - &z(2);
    let b = &(&one + &z(2)) - &z(1);
    let hand = (&a * &b).rational_value().map_err(|e| e.to_string())?;
    ensure(hand == BigInt::from(4), || format!("hand product {hand}"))?;

    let mut computed = 0;
    let mut all: Vec<(FieldDesc, PolyA, u32)> = props::small_groups();
    for (q, m, _, _, _) in TABLE {
        all.push((FieldDesc::prime(q).unwrap(), PolyA::t(), m));
    }
    all.push(f3_case("t^4+t+2", 1));
    for (field, prime, m) in all {
        let (r, _) = timed_h_minus(&field, &prime, m, false)?;
        let s = u32::try_from(&r.s_cyclotomic).unwrap();
        let rosen = BigUint::from(field.q() - 1).pow(s - 1);
        ensure(
            (&r.h_minus % &rosen).is_zero() && r.h_minus == &rosen * &r.h_tilde_minus,
            || format!("Rosen fails for F_{} m={m}", field.q()),
        )?;
        computed += 1;
    }
    Ok(format!(
        "h⁻(F_3, t, 2) = 4, h̃⁻ = 1; Rosen holds in {computed} cases"
    ))
}

type CheckFn = fn() -> props::Check;

fn criterion_7() -> Result<String, String> {
    let mut notes = Vec::new();
    let checks: [(&str, CheckFn); 8] = [
        ("carlitz", props::carlitz_homomorphism),
        ("torsion", props::torsion_counts),
        ("characters", props::character_orthogonality),
        ("tails", props::tail_vanishing),
        ("conjugation", props::conjugation_pairing),
        ("rationality", props::rationality_and_rosen),
        ("factor", props::factor_roundtrip_reference),
        ("ledger", props::ledger_exhaustive),
    ];
    for (name, check) in checks {
        notes.push(format!(
            "{name}: {}",
            check().map_err(|e| format!("{name}: {e}"))?
        ));
    }
    let mut worst = 0f64;
    let mut float_cases: Vec<(FieldDesc, PolyA, u32)> =
        vec![f3_case("t^4+2*t+2", 1), f3_case("t^4+t+2", 1)];
    for (q, m, _, _, _) in TABLE {
        float_cases.push((FieldDesc::prime(q).unwrap(), PolyA::t(), m));
    }
    for (field, prime, m) in &float_cases {
        let err = props::float_cross_check(field, prime, *m)?;
        ensure(err < props::FLOAT_TOLERANCE, || {
            format!(
                "float cross-check F_{} m={m}: relative error {err:e}",
                field.q()
            )
        })?;
        worst = worst.max(err);
    }
    notes.push(format!(
        "float@{}bit: worst relative error {worst:.1e} (tolerance {:.0e})",
        props::FLOAT_PRECISION,
        props::FLOAT_TOLERANCE
    ));
    Ok(notes.join("; "))
}

fn main() {
    let start = Instant::now();
    let mut report = Report { failed: Vec::new() };
    report.record(1, "exact class numbers and factor lists", criterion_1());
    report.record(2, "multiplicative orders", criterion_2());
    report.record(3, "divisibility rows and minus-regularity", criterion_3());
    report.record(4, "margin columns", criterion_4());
    report.record(5, "certification end-to-end", criterion_5());
    report.record(6, "desk-scale oracle and Rosen relation", criterion_6());
    report.record(7, "property suites", criterion_7());
    let took = start.elapsed();
    report.record(
        8,
        "wall-clock",
        if took <= SUITE_LIMIT {
            Ok(format!(
                "acceptance target ran in {:.1}s (limit {}s; full-suite time is in the test log)",
                took.as_secs_f64(),
                SUITE_LIMIT.as_secs()
            ))
        } else {
            Err(format!("{took:?}"))
        },
    );
    if report.failed.is_empty() {
        println!("acceptance: all 8 criteria pass");
    } else {
        println!("acceptance: failed criteria {:?}", report.failed);
        std::process::exit(1);
    }
}
