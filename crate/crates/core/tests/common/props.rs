//! Property checks shared by the dedicated suites and the acceptance target.
//! Each returns a short summary on success and the first counterexample on
//! failure.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use towerforge_core::carlitz::{
    carlitz_polynomial, eval_specialized, standard_extension, Embedding,
};
use towerforge_core::classminus::{complex_product, h_minus, HMinusOptions, LValueKernel};
use towerforge_core::cyclo::CyclotomicInt;
use towerforge_core::field::{FieldDesc, Fq};
use towerforge_core::ledger::compositum_ledger;
use towerforge_core::poly::{PolyA, PolyRing};
use towerforge_core::residue::{CharValue, ResidueUnitGroup};
use towerforge_core::zarith::factorize;
use towerforge_core::ClassError;

pub type Check = Result<String, String>;

/// `(p, e, field modulus, 𝔭, m)`.
type GroupSpec<'a> = (u64, u32, Option<&'a [u64]>, &'a str, u32);

/// `(q, 𝔭, m)` triples whose unit groups have order at most 200.
pub fn small_groups() -> Vec<(FieldDesc, PolyA, u32)> {
    let mut out = Vec::new();
    let specs: &[GroupSpec] = &[
        (2, 1, None, "t", 7),
        (2, 1, None, "t^2+t+1", 3),
        (2, 1, None, "t^3+t+1", 2),
        (3, 1, None, "t", 5),
        (3, 1, None, "t+1", 4),
        (3, 1, None, "t^2+1", 2),
        (3, 1, None, "t^4+2*t+2", 1),
        (2, 2, Some(&[1, 1, 1]), "t", 3),
        (2, 2, Some(&[1, 1, 1]), "t^2+t+[0,1]", 1),
        (5, 1, None, "t", 3),
        (5, 1, None, "t^2+2", 1),
        (7, 1, None, "t", 2),
        (3, 2, Some(&[2, 2, 1]), "t", 2),
        (11, 1, None, "t", 2),
        (13, 1, None, "t", 2),
    ];
    for &(p, e, modulus, prime, max_m) in specs {
        let field = FieldDesc::new(p, e, modulus).expect("field");
        let ring = PolyRing::new(field.clone());
        let prime = ring.parse(prime).expect("prime parses");
        for m in 1..=max_m {
            out.push((field.clone(), prime.clone(), m));
        }
    }
    out
}

fn nonzero_polys(ring: &PolyRing, max_deg: usize) -> Vec<PolyA> {
    let q = ring.field().q() as u64;
    (1..q.pow(max_deg as u32 + 1))
        .map(|i| ring.from_index(i))
        .collect()
}

/// `ρ_{fg} = ρ_f ∘ ρ_g`, `ρ_{f+g} = ρ_f + ρ_g`, and additivity of the
/// specialized action, for all nonzero `f, g` of degree at most 2 over
/// `F_2` and `F_3`.
pub fn carlitz_homomorphism() -> Check {
    let mut pairs = 0usize;
    for p in [2u64, 3] {
        let field = FieldDesc::prime(p).unwrap();
        let ring = PolyRing::new(field.clone());
        let ext = standard_extension(p, 3).unwrap();
        let emb = Embedding::find(&field, &ext).unwrap();
        let polys = nonzero_polys(&ring, 2);
        let rho: Vec<_> = polys
            .iter()
            .map(|f| carlitz_polynomial(&ring, f).unwrap())
            .collect();
        for (f, rf) in polys.iter().zip(&rho) {
            for (g, rg) in polys.iter().zip(&rho) {
                let fg = carlitz_polynomial(&ring, &ring.mul(f, g)).unwrap();
                if fg != rf.compose(rg, &ring) {
                    return Err(format!(
                        "ρ_(fg) ≠ ρ_f∘ρ_g for f={}, g={} over F_{p}",
                        ring.render(f),
                        ring.render(g)
                    ));
                }
                let sum = ring.add(f, g);
                if !sum.is_zero() {
                    let rs = carlitz_polynomial(&ring, &sum).unwrap();
                    let n = rs
                        .coeffs()
                        .len()
                        .max(rf.coeffs().len())
                        .max(rg.coeffs().len());
                    for i in 0..n {
                        let a = rf.coeffs().get(i).cloned().unwrap_or_else(PolyA::zero);
                        let b = rg.coeffs().get(i).cloned().unwrap_or_else(PolyA::zero);
                        let c = rs.coeffs().get(i).cloned().unwrap_or_else(PolyA::zero);
                        if ring.add(&a, &b) != c {
                            return Err(format!("ρ_(f+g) ≠ ρ_f+ρ_g at u^(q^{i})"));
                        }
                    }
                }
                pairs += 1;
            }
            let theta = ext.primitive_element();
            for u in ext.elements().step_by(3) {
                for v in ext.elements().step_by(5) {
                    let lhs = eval_specialized(rf, &emb, ext.add(u, v), theta);
                    let rhs = ext.add(
                        eval_specialized(rf, &emb, u, theta),
                        eval_specialized(rf, &emb, v, theta),
                    );
                    if lhs != rhs {
                        return Err(format!("ρ_f not additive for f={}", ring.render(f)));
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} (f, g) pairs"))
}

/// Roots of `ρ_f` after `t -> θ`, counted by scanning all of `F_{q^n}`.
/// With `P` the minimal polynomial of `θ` (degree `a`), the count must be
/// `q^{deg gcd(f, P^{n/a} - 1)}`, reaching `q^{deg f}` once `f | P^{n/a} - 1`.
/// Every `f` with `q^{deg f} ≤ 81` over `F_2`, `F_3`, `F_4` is driven to a
/// field where the full count is reached.
pub fn torsion_counts() -> Check {
    const MAX_EXT: u64 = 1 << 16;
    let mut checked = 0usize;
    let bases = [
        FieldDesc::prime(2).unwrap(),
        FieldDesc::prime(3).unwrap(),
        FieldDesc::new(2, 2, Some(&[1, 1, 1])).unwrap(),
    ];
    let mut ext_cache: HashMap<(u32, u32), FieldDesc> = HashMap::new();
    for base in &bases {
        let ring = PolyRing::new(base.clone());
        let q = base.q() as u64;
        let mut max_deg = 0;
        while q.pow(max_deg + 1) <= 81 {
            max_deg += 1;
        }
        // irreducible P of small degree, candidates for the minimal polynomial of θ
        let mut candidates = Vec::new();
        for a in 1..=6usize {
            if q.pow(a as u32) > MAX_EXT {
                break;
            }
            candidates.extend(ring.monic_enum(a, None).filter(|f| ring.is_irreducible(f)));
        }
        for d in 1..=max_deg as usize {
            for f in ring.monic_enum(d, None) {
                let full = q.pow(d as u32);
                // smallest n = a·ord_f(P) with q^n within reach
                let mut best: Option<(u64, PolyA)> = None;
                for pp in &candidates {
                    if !ring.gcd(&f, pp).is_one() {
                        continue;
                    }
                    let a = pp.degree().unwrap() as u64;
                    let mut k = 1u64;
                    let mut x = ring.rem(pp, &f).unwrap();
                    let base_res = x.clone();
                    while !x.is_one() && k * a <= 16 {
                        x = ring.mulmod(&x, &base_res, &f).unwrap();
                        k += 1;
                    }
                    let n = a * k;
                    if x.is_one()
                        && q.pow(n as u32) <= MAX_EXT
                        && best.as_ref().is_none_or(|b| n < b.0)
                    {
                        best = Some((n, pp.clone()));
                    }
                }
                // P ≡ 1 mod f puts all torsion in F_{q^{deg P}}
                'lift: for k in 1.. {
                    let deg = d + k;
                    if q.pow(deg as u32) > MAX_EXT
                        || best.as_ref().is_some_and(|b| b.0 <= deg as u64)
                    {
                        break;
                    }
                    for g in ring.monic_enum(k, None) {
                        let pp = ring.add(&PolyA::one(), &ring.mul(&f, &g));
                        if ring.is_irreducible(&pp) {
                            best = Some((deg as u64, pp));
                            break 'lift;
                        }
                    }
                }
                let (n, pp) =
                    best.ok_or_else(|| format!("no splitting field for f={}", ring.render(&f)))?;
                let a = pp.degree().unwrap() as u32;
                let rho = carlitz_polynomial(&ring, &f).unwrap();
                for (deg_n, expect_full) in [(a, false), (n as u32, true)] {
                    let total = base.e() * deg_n;
                    let ext = ext_cache
                        .entry((base.p(), total))
                        .or_insert_with(|| standard_extension(base.p() as u64, total).unwrap())
                        .clone();
                    let emb = Embedding::find(base, &ext).unwrap();
                    let pcoef: Vec<Fq> = pp.coeffs().iter().map(|&c| emb.apply(c)).collect();
                    let theta = ext
                        .elements()
                        .find(|&x| {
                            pcoef
                                .iter()
                                .rev()
                                .fold(Fq::ZERO, |acc, &c| ext.add(ext.mul(acc, x), c))
                                .is_zero()
                        })
                        .unwrap();
                    let count = ext
                        .elements()
                        .filter(|&u| eval_specialized(&rho, &emb, u, theta).is_zero())
                        .count() as u64;
                    let frob = ring.pow(&pp, deg_n / a);
                    let g = ring.gcd(&f, &ring.sub(&frob, &PolyA::one()));
                    let expect = q.pow(g.degree().unwrap_or(d) as u32);
                    if count != expect || (expect_full && count != full) {
                        return Err(format!(
                            "f={} θ root of {} in F_(q^{deg_n}): {count} roots, expected {expect}",
                            ring.render(&f),
                            ring.render(&pp)
                        ));
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} polynomials reach q^deg f torsion points"
    ))
}

fn counts_zero(n: u64, counts: &[i64]) -> bool {
    CyclotomicInt::from_exponent_counts(n, counts).is_zero()
}

/// Row and column orthogonality of the character table, and `χ(ab) = χ(a)χ(b)`
/// through the homomorphism property of the discrete log.
pub fn character_orthogonality() -> Check {
    let mut groups = 0;
    for (field, prime, m) in small_groups() {
        let g = ResidueUnitGroup::new(&field, &prime, m).map_err(|e| e.to_string())?;
        if g.order() > 200 {
            continue;
        }
        g.verify()?;
        let n = g.exponent();
        let chars = g.characters();
        let units: Vec<u64> = g.unit_indices().collect();
        let label = format!("F_{} 𝔭={} m={m}", field.q(), g.ring().render(&prime));
        for chi in &chars {
            let mut counts = vec![0i64; n as usize];
            for &u in &units {
                counts[chi.value_exponent(g.dlog_index(u).unwrap()) as usize] += 1;
            }
            if counts_zero(n, &counts) == chi.is_trivial() {
                return Err(format!("{label}: row sum of χ={:?}", chi.exponents()));
            }
        }
        for &u in &units {
            let y = g.dlog_index(u).unwrap();
            let mut counts = vec![0i64; n as usize];
            for chi in &chars {
                counts[chi.value_exponent(y) as usize] += 1;
            }
            if counts_zero(n, &counts) == (u == 1) {
                return Err(format!("{label}: column sum at residue {u}"));
            }
        }
        let ring = g.ring();
        let modulus = g.modulus();
        for &a in &units {
            let pa = ring.from_index(a);
            let ya = g.dlog_index(a).unwrap();
            for &b in &units {
                let pb = ring.from_index(b);
                let ab = ring.mulmod(&pa, &pb, modulus).unwrap();
                let yab = g
                    .dlog(&ab)
                    .ok_or_else(|| format!("{label}: product not a unit"))?;
                let yb = g.dlog_index(b).unwrap();
                for ((&x, &y), (&z, &nj)) in ya.iter().zip(yb).zip(yab.iter().zip(g.orders())) {
                    if (x as u64 + y as u64) % nj != z as u64 {
                        return Err(format!("{label}: dlog not additive at ({a}, {b})"));
                    }
                }
            }
        }
        for chi in chars.iter().step_by(7) {
            for (i, &a) in units.iter().enumerate().step_by(3) {
                let b = units[(i * 5 + 1) % units.len()];
                let ab = ring
                    .mulmod(&ring.from_index(a), &ring.from_index(b), modulus)
                    .unwrap();
                let (CharValue::Root(x), CharValue::Root(y), CharValue::Root(z)) =
                    (chi.eval_index(a), chi.eval_index(b), chi.eval(&ab))
                else {
                    return Err(format!("{label}: unit evaluated to zero"));
                };
                if (x + y) % n != z {
                    return Err(format!("{label}: χ(ab) ≠ χ(a)χ(b)"));
                }
            }
        }
        groups += 1;
    }
    Ok(format!("{groups} groups"))
}

/// Degree-`i` partial sums vanish for `i ≥ deg` of the conductor, checked
/// through `d·m + 1`.
pub fn tail_vanishing() -> Check {
    let mut sums = 0;
    for (field, prime, m) in small_groups() {
        let g = ResidueUnitGroup::new(&field, &prime, m).unwrap();
        let dm = prime.degree().unwrap() * m as usize;
        if (field.q() as u64).pow(dm as u32 + 1) > 20_000 {
            continue;
        }
        let k = LValueKernel::new(&g);
        for chi in g.characters().iter().filter(|c| !c.is_trivial()) {
            let cond = chi.conductor_degree();
            for i in cond..=dm + 1 {
                if !k.partial_sum(chi, i).is_zero() {
                    return Err(format!(
                        "F_{} 𝔭={} m={m} χ={:?}: degree {i} sum nonzero (conductor degree {cond})",
                        field.q(),
                        g.ring().render(&prime),
                        chi.exponents()
                    ));
                }
                sums += 1;
            }
            if cond > 0 && cond <= dm {
                let below: CyclotomicInt = (0..cond)
                    .map(|i| k.partial_sum(chi, i))
                    .fold(CyclotomicInt::zero(chi.value_order()), |a, b| &a + &b);
                if below != k.l_value(chi).unwrap() {
                    return Err("L-value differs from its conductor-truncated sum".into());
                }
            }
        }
    }
    Ok(format!("{sums} vanishing partial sums"))
}

/// `L(0, χ̄)` is the complex conjugate of `L(0, χ)`.
pub fn conjugation_pairing() -> Check {
    let mut n = 0;
    for (field, prime, m) in small_groups() {
        let g = ResidueUnitGroup::new(&field, &prime, m).unwrap();
        let k = LValueKernel::new(&g);
        for chi in g.characters().iter().filter(|c| !c.is_trivial()) {
            let a = k.l_value(chi).unwrap();
            let b = k.l_value(&chi.conj()).unwrap();
            if b != a.conjugate() {
                return Err(format!("conjugation fails for χ={:?}", chi.exponents()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} characters"))
}

/// Every computed `h⁻` is a nonzero rational integer divisible by
/// `(q-1)^{s-1}`. Returns the number of cases and of `NotRational` events.
pub fn rationality_and_rosen() -> Check {
    let mut cases = 0;
    let mut not_rational = 0;
    for (field, prime, m) in small_groups() {
        match h_minus(&field, &prime, m, &HMinusOptions::default()) {
            Ok(r) => {
                let s = u32::try_from(&r.s_cyclotomic).unwrap();
                let rosen = BigUint::from(field.q() - 1).pow(s - 1);
                if r.h_minus != &rosen * &r.h_tilde_minus {
                    return Err(format!("Rosen relation fails for F_{} m={m}", field.q()));
                }
            }
            Err(ClassError::NotRational(_)) => not_rational += 1,
            Err(e) => return Err(e.to_string()),
        }
        cases += 1;
    }
    if not_rational > 0 {
        return Err(format!("{not_rational} NotRational events"));
    }
    Ok(format!("{cases} cases, 0 NotRational"))
}

pub const FLOAT_PRECISION: usize = 256;
pub const FLOAT_TOLERANCE: f64 = 1e-6;

/// Relative gap between `|Π L(0, χ)|` computed at 256 bits and exact `h⁻`.
pub fn float_cross_check(field: &FieldDesc, prime: &PolyA, m: u32) -> Result<f64, String> {
    let r = h_minus(
        field,
        prime,
        m,
        &HMinusOptions {
            keep_l_values: true,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let approx = complex_product(r.l_values.as_ref().unwrap(), FLOAT_PRECISION);
    Ok(approx.relative_error_to(&BigInt::from(r.h_minus)))
}

/// Factor lists of every class number and order argument quoted for the
/// table cases multiply back to their inputs.
pub fn factor_roundtrip_reference() -> Check {
    let values: [BigUint; 10] = [
        BigUint::from(2u32).pow(39) * 17u32 * 97u32 * 63648628175761u64,
        BigUint::from(2u32).pow(39) * 241u32 * 641u32 * 881u32 * 532611841u64,
        BigUint::from(63648628175760u64),
        BigUint::from(532611840u64),
        BigUint::from(118146u64),
        BigUint::from(19030u64),
        BigUint::from(820u64),
        BigUint::from(378u64),
        BigUint::from(5778u64),
        BigUint::from(31824314087880u64),
    ];
    for v in &values {
        let f = factorize(v);
        if f.product() != *v || !f.all_proven() {
            return Err(format!("factorization of {v} does not round-trip"));
        }
    }
    Ok(format!("{} values", values.len()))
}

/// `e_norm_ML = 0` and `e_M / e_L = p^{h-1}` for all valid `p ≤ 7, h ≤ 11, w ≤ 10`.
pub fn ledger_exhaustive() -> Check {
    let mut n = 0;
    for p in [2u64, 3, 5, 7] {
        for h in 1..=11u32 {
            for w in 1..=10u64 {
                if w % p == 0 {
                    if compositum_ledger(p, h, w).is_ok() {
                        return Err(format!("accepted w={w} divisible by p={p}"));
                    }
                    continue;
                }
                let l = compositum_ledger(p, h, w).map_err(|e| e.to_string())?;
                if !l.e_norm_ml.is_zero()
                    || l.e_m != BigUint::from(p).pow(h - 1) * l.e_l
                    || !l.m_over_l_unramified
                {
                    return Err(format!("ledger fails at p={p} h={h} w={w}"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} (p, h, w) triples"))
}
