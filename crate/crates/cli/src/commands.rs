use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use towerforge_core::carlitz::{standard_extension, torsion_points};
use towerforge_core::classminus::{write_l_value_dump, LValueRecord};
use towerforge_core::residue::{ResidueUnitGroup, DEFAULT_BUDGET};
use towerforge_core::tower::{
    certify_with_h_tilde, ConditionMargin, Reason, SCHEMA_VERSION, TOOL_VERSION,
};
use towerforge_core::zarith::{
    factorize_budgeted, factorize_u64, mult_order_budgeted, DEFAULT_RHO_BUDGET,
    DEFAULT_SEARCH_BUDGET,
};
use towerforge_core::{
    carlitz_polynomial, certify, compositum_ledger, h_minus, place_counts, search, CarlitzError,
    CertMode, CertifyOptions, ClassError, FieldDesc, FieldInfo, HMinusOptions, PlusRegularSource,
    PolyA, PolyRing, RelClassResult, ResidueError, SearchOptions, SearchReport, TowerCertificate,
    Verdict, ZarithError,
};

use crate::cache::{Cache, CacheKey, CacheRecord};
use crate::{Cli, Command, GlobalOpts};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Failure(_) => 4,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}

impl From<ZarithError> for CliError {
    fn from(e: ZarithError) -> Self {
        match e {
            ZarithError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ClassError> for CliError {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::Residue(ResidueError::BudgetExceeded { .. }) => {
                CliError::Budget(e.to_string())
            }
            ClassError::Factor(z) => z.into(),
            ClassError::Residue(_) | ClassError::Carlitz(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<ResidueError> for CliError {
    fn from(e: ResidueError) -> Self {
        ClassError::Residue(e).into()
    }
}

impl From<CarlitzError> for CliError {
    fn from(e: CarlitzError) -> Self {
        CliError::Usage(e.to_string())
    }
}

type Outcome = Result<u8, CliError>;

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Hminus {
            prime,
            m,
            factor,
            dump,
        } => hminus(g, prime, *m, *factor, dump.as_deref()),
        Command::Order { p, h } => order(g, p, h),
        Command::Certify {
            prime,
            m,
            h,
            plus_regular,
            mode,
        } => certify_cmd(g, prime, *m, h, *plus_regular, *mode),
        Command::Search {
            max_deg,
            max_m,
            plus_regular,
            mode,
        } => search_cmd(g, *max_deg, *max_m, *plus_regular, *mode),
        Command::Irreducible { poly } => irreducible(g, poly),
        Command::Carlitz {
            f,
            torsion_in,
            theta,
        } => carlitz(g, f, *torsion_in, *theta),
        Command::Ledger { p, h, w } => ledger(g, *p, *h, *w),
    }
}

/// Wraps a payload with the schema header shared by every JSON document.
#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema_version: u32,
    tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<FieldInfo>,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(field: Option<&FieldDesc>, body: T) -> Envelope<T> {
    Envelope {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION,
        field: field.map(FieldDesc::info),
        body,
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Failure(format!("json encoding failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn print_rows(rows: &[(&str, String)]) {
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
}

fn field_label(field: &FieldDesc) -> String {
    match field.modulus_text() {
        Some(m) => format!("F_{} = F_{}[x]/({m})", field.q(), field.p()),
        None => format!("F_{}", field.q()),
    }
}

fn parse_big(name: &str, text: &str) -> Result<BigUint, CliError> {
    text.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "--{name} must be a non-negative integer, got {text:?}"
        ))
    })
}

/// The constant field from `--q`, `--char-p`, `--ext-degree` and `--field-modulus`.
/// Extension fields without an explicit modulus use the smallest monic
/// irreducible of the right degree over `F_p`.
pub fn resolve_field(g: &GlobalOpts) -> Result<FieldDesc, CliError> {
    let (p, e) = match (g.q, g.char_p) {
        (Some(q), _) => {
            let factors = factorize_u64(q).pairs();
            let [(p, e)] = factors.as_slice() else {
                return Err(CliError::Usage(format!("--q {q} is not a prime power")));
            };
            let p: u64 = p.try_into().expect("factor of a u64");
            if g.char_p.is_some_and(|c| c != p) || g.ext_degree.is_some_and(|d| d != *e) {
                return Err(CliError::Usage(format!(
                    "--q {q} disagrees with --char-p/--ext-degree"
                )));
            }
            (p, *e)
        }
        (None, Some(p)) => (p, g.ext_degree.unwrap_or(1)),
        (None, None) => {
            return Err(CliError::Usage(
                "the constant field needs --q or --char-p".into(),
            ))
        }
    };
    let field = match (&g.field_modulus, e) {
        (Some(_), 1) => {
            return Err(CliError::Usage(
                "--field-modulus only applies to extension degrees above 1".into(),
            ))
        }
        (None, 1) => FieldDesc::prime(p),
        (Some(text), _) => {
            let base = FieldDesc::prime(p).map_err(|e| CliError::Usage(e.to_string()))?;
            let poly = PolyRing::new(base)
                .parse_in(text, 'x')
                .map_err(|e| CliError::Usage(format!("--field-modulus: {e}")))?;
            let coeffs: Vec<u64> = poly.coeffs().iter().map(|c| c.index() as u64).collect();
            FieldDesc::new(p, e, Some(&coeffs))
        }
        (None, _) => {
            return standard_extension(p, e)
                .ok_or_else(|| CliError::Usage(format!("no supported field of order {p}^{e}")))
        }
    };
    field.map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_poly(ring: &PolyRing, flag: &str, text: &str) -> Result<PolyA, CliError> {
    ring.parse(text)
        .map_err(|e| CliError::Usage(format!("--{flag} {text:?}: {e}")))
}

fn cache_key(field: &FieldDesc, ring: &PolyRing, prime: &PolyA, m: u32) -> CacheKey {
    CacheKey {
        p: field.p(),
        e: field.e(),
        modulus: field.modulus_text().unwrap_or_else(|| "-".into()),
        prime: ring.render(prime),
        m,
    }
}

fn record_of(key: CacheKey, h: &BigUint, h_tilde: &BigUint) -> CacheRecord {
    CacheRecord {
        key,
        h_minus: h.to_string(),
        h_tilde_minus: h_tilde.to_string(),
        version: TOOL_VERSION.to_string(),
    }
}

fn open_cache(g: &GlobalOpts) -> Result<Option<Cache>, CliError> {
    let Some(path) = &g.cache else {
        return Ok(None);
    };
    let (cache, warnings) = Cache::open(path)?;
    for w in warnings {
        eprintln!("towerforge: cache {}: {w}", path.display());
    }
    Ok(Some(cache))
}

/// Fails unless a fresh computation reproduces the cached values byte for byte.
fn verify_record(cached: &CacheRecord, h: &BigUint, h_tilde: &BigUint) -> Result<(), CliError> {
    let fresh = record_of(cached.key.clone(), h, h_tilde);
    if fresh.h_minus != cached.h_minus || fresh.h_tilde_minus != cached.h_tilde_minus {
        return Err(CliError::Failure(format!(
            "cache mismatch for {} at m = {}: cached ({}, {}), recomputed ({}, {})",
            cached.key.prime,
            cached.key.m,
            cached.h_minus,
            cached.h_tilde_minus,
            fresh.h_minus,
            fresh.h_tilde_minus
        )));
    }
    Ok(())
}

fn hminus_options(g: &GlobalOpts) -> HMinusOptions {
    HMinusOptions {
        budget: g.budget.unwrap_or(DEFAULT_BUDGET),
        ..Default::default()
    }
}

/// Rebuilds the library result around cached class numbers; only the
/// cheap structural fields are recomputed.
fn result_from_cache(
    field: &FieldDesc,
    prime: &PolyA,
    m: u32,
    record: &CacheRecord,
    opts: &HMinusOptions,
) -> Result<RelClassResult, CliError> {
    let group = ResidueUnitGroup::with_budget(field, prime, m, opts.budget)?;
    let counts = place_counts(group.ring(), prime, m, None)?;
    let order: u64 = group.orders().iter().product();
    let q1 = u64::from(field.q() - 1);
    let h = parse_big("cache h_minus", &record.h_minus)?;
    let factorization = if opts.factor {
        Some(factorize_budgeted(&h, opts.rho_budget)?)
    } else {
        None
    };
    Ok(RelClassResult {
        q: field.q(),
        prime: record.key.prime.clone(),
        m,
        group_structure: group.orders().to_vec(),
        odd_characters: (order - order / q1) as usize,
        s_cyclotomic: counts.s_cyclotomic,
        h_minus: h,
        h_tilde_minus: parse_big("cache h_tilde_minus", &record.h_tilde_minus)?,
        factorization,
        l_values: None,
    })
}

fn hminus(g: &GlobalOpts, prime_text: &str, m: u32, factor: bool, dump: Option<&Path>) -> Outcome {
    let field = resolve_field(g)?;
    let ring = PolyRing::new(field.clone());
    let prime = parse_poly(&ring, "prime", prime_text)?;
    let opts = HMinusOptions {
        factor,
        keep_l_values: dump.is_some(),
        ..hminus_options(g)
    };
    let mut cache = open_cache(g)?;
    let key = cache_key(&field, &ring, &prime, m);
    let hit = cache.as_ref().and_then(|c| c.get(&key)).cloned();

    let result = match &hit {
        Some(record) if dump.is_none() && !g.verify_cache => {
            result_from_cache(&field, &prime, m, record, &opts)?
        }
        _ => {
            let r = h_minus(&field, &prime, m, &opts)?;
            if let Some(record) = &hit {
                verify_record(record, &r.h_minus, &r.h_tilde_minus)?;
            }
            r
        }
    };
    if let Some(cache) = cache.as_mut() {
        cache.put(record_of(key, &result.h_minus, &result.h_tilde_minus))?;
    }
    if let Some(path) = dump {
        write_dump(path, result.l_values.as_deref().unwrap_or_default())?;
    }

    if g.json {
        print_json(&envelope(Some(&field), &result))?;
    } else {
        let mut rows = vec![
            ("field", field_label(&field)),
            ("prime", result.prime.clone()),
            ("m", m.to_string()),
            ("group", format!("{:?}", result.group_structure)),
            ("odd characters", result.odd_characters.to_string()),
            ("s", result.s_cyclotomic.to_string()),
            ("h_minus", result.h_minus.to_string()),
            ("h_tilde_minus", result.h_tilde_minus.to_string()),
        ];
        if let Some(f) = &result.factorization {
            rows.push(("factorization", f.to_string()));
        }
        print_rows(&rows);
    }
    Ok(0)
}

fn write_dump(path: &Path, records: &[LValueRecord]) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_l_value_dump(&mut w, records)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct OrderOutput {
    p: String,
    h: String,
    order: String,
    path: towerforge_core::zarith::OrderPath,
}

fn order(g: &GlobalOpts, p_text: &str, h_text: &str) -> Outcome {
    let p = parse_big("p", p_text)?;
    let h = parse_big("h", h_text)?;
    let rho = g.budget.unwrap_or(DEFAULT_RHO_BUDGET);
    let value = mult_order_budgeted(&p, &h, rho, DEFAULT_SEARCH_BUDGET)?;
    if g.json {
        print_json(&envelope(
            None,
            OrderOutput {
                p: p.to_string(),
                h: h.to_string(),
                order: value.order.to_string(),
                path: value.path,
            },
        ))?;
    } else {
        println!("{}", value.order);
    }
    Ok(0)
}

fn certify_options(g: &GlobalOpts, mode: CertMode) -> CertifyOptions {
    CertifyOptions {
        budget: g.budget.unwrap_or(DEFAULT_BUDGET),
        mode,
        ..Default::default()
    }
}

fn certificate_exit(cert: &TowerCertificate) -> u8 {
    if cert.reasons.contains(&Reason::BudgetExceeded) {
        3
    } else if cert.reasons.contains(&Reason::InternalError) {
        4
    } else if cert.verdict == Verdict::Rejected {
        1
    } else {
        0
    }
}

fn certify_cmd(
    g: &GlobalOpts,
    prime_text: &str,
    m: u32,
    h_text: &str,
    plus: PlusRegularSource,
    mode: CertMode,
) -> Outcome {
    let field = resolve_field(g)?;
    let ring = PolyRing::new(field.clone());
    let prime = parse_poly(&ring, "prime", prime_text)?;
    let h = parse_big("h", h_text)?;
    let opts = certify_options(g, mode);

    let cert = match open_cache(g)? {
        None => certify(&field, &prime, m, &h, plus, &opts),
        Some(mut cache) => {
            let key = cache_key(&field, &ring, &prime, m);
            let hit = cache.get(&key).cloned();
            let h_tilde = match hit {
                Some(record) if !g.verify_cache => {
                    Some(parse_big("cache h_tilde_minus", &record.h_tilde_minus)?)
                }
                _ => match h_minus(&field, &prime, m, &hminus_options(g)) {
                    Ok(r) => {
                        if let Some(record) = &hit {
                            verify_record(record, &r.h_minus, &r.h_tilde_minus)?;
                        }
                        cache.put(record_of(key, &r.h_minus, &r.h_tilde_minus))?;
                        Some(r.h_tilde_minus)
                    }
                    // the certificate records the failure as a reason
                    Err(_) => None,
                },
            };
            match h_tilde {
                Some(ht) => certify_with_h_tilde(&field, &prime, m, &h, plus, &opts, &ht),
                None => certify(&field, &prime, m, &h, plus, &opts),
            }
        }
    };

    if g.json {
        print_json(&cert)?;
    } else {
        print_certificate(&cert);
    }
    Ok(certificate_exit(&cert))
}

fn show<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".into(), T::to_string)
}

fn show_margin(m: &Option<ConditionMargin>) -> String {
    match m {
        None => "not checked".into(),
        Some(m) => {
            let scale = m
                .unscaled
                .as_ref()
                .map_or_else(String::new, |s| format!(", unscaled {s}"));
            let status = if m.holds { "holds" } else { "fails" };
            format!("{status} (margin {}{scale})", m.cleared)
        }
    }
}

fn reason_list(reasons: &[Reason]) -> String {
    if reasons.is_empty() {
        return "-".into();
    }
    reasons
        .iter()
        .map(|r| r.code())
        .collect::<Vec<_>>()
        .join(", ")
}

fn print_certificate(cert: &TowerCertificate) {
    let i = &cert.inputs;
    let f = &cert.facts;
    print_rows(&[
        ("verdict", cert.verdict.to_string()),
        ("reasons", reason_list(&cert.reasons)),
        ("prime", format!("{} (degree {})", i.prime, i.prime_degree)),
        ("m", i.m.to_string()),
        ("h", i.h.to_string()),
        ("q", i.field.q.to_string()),
        ("phi", show(&f.phi)),
        ("h_tilde_minus", show(&f.h_tilde_minus)),
        ("f_ph", show(&f.f_ph)),
        ("condition I", show_margin(&cert.margins.condition_i)),
        ("condition II", show_margin(&cert.margins.condition_ii)),
    ]);
    for a in &cert.assumptions {
        println!("assumes  {a}");
    }
    if let Some(e) = &cert.error {
        println!("error  {e}");
    }
}

fn search_cmd(
    g: &GlobalOpts,
    max_deg: u32,
    max_m: u32,
    plus: PlusRegularSource,
    mode: CertMode,
) -> Outcome {
    let field = resolve_field(g)?;
    let opts = SearchOptions {
        certify: certify_options(g, mode),
        plus_regular_source: plus,
    };
    let report = search(&field, max_deg, max_m, &opts);
    if let Some(mut cache) = open_cache(g)? {
        sync_cache(&mut cache, &field, &report, g.verify_cache)?;
    }

    let failed = report.items.iter().filter(|i| i.error.is_some()).count();
    if failed > 0 {
        eprintln!(
            "towerforge: {failed} of {} items could not be computed",
            report.items.len()
        );
    }
    if g.json {
        print_json(&report)?;
    } else {
        print_search(&field, &report);
    }
    Ok(0)
}

/// Stores every computed item; with verification, checks existing records first.
fn sync_cache(
    cache: &mut Cache,
    field: &FieldDesc,
    report: &SearchReport,
    verify: bool,
) -> Result<(), CliError> {
    let ring = PolyRing::new(field.clone());
    for item in &report.items {
        let (Some(h), Some(ht)) = (&item.h_minus, &item.h_tilde_minus) else {
            continue;
        };
        let prime = parse_poly(&ring, "prime", &item.prime)?;
        let key = cache_key(field, &ring, &prime, item.m);
        if verify {
            if let Some(record) = cache.get(&key) {
                verify_record(record, h, ht)?;
            }
        }
        cache.put(record_of(key, h, ht))?;
    }
    Ok(())
}

fn print_search(field: &FieldDesc, report: &SearchReport) {
    println!(
        "# {}  deg <= {}  m <= {}",
        field_label(field),
        report.max_deg,
        report.max_m
    );
    println!("prime\tm\th_tilde_minus\tcertificates");
    for item in &report.items {
        let value = match (&item.factorization, &item.h_tilde_minus, &item.error) {
            (Some(f), _, _) => f.to_string(),
            (None, Some(ht), _) => ht.to_string(),
            (None, None, Some(e)) => format!("error: {e}"),
            _ => "-".into(),
        };
        let certs: Vec<String> = item
            .certificates
            .iter()
            .map(|c| format!("h={}:{}", c.inputs.h, c.verdict))
            .collect();
        let certs = if certs.is_empty() {
            "-".into()
        } else {
            certs.join(" ")
        };
        println!("{}\t{}\t{}\t{}", item.prime, item.m, value, certs);
    }
}

#[derive(Serialize)]
struct IrreducibleOutput {
    poly: String,
    degree: Option<usize>,
    irreducible: bool,
}

fn irreducible(g: &GlobalOpts, text: &str) -> Outcome {
    let field = resolve_field(g)?;
    let ring = PolyRing::new(field.clone());
    let f = parse_poly(&ring, "poly", text)?;
    let out = IrreducibleOutput {
        poly: ring.render(&f),
        degree: f.degree(),
        irreducible: ring.is_irreducible(&f),
    };
    if g.json {
        print_json(&envelope(Some(&field), out))?;
    } else {
        let verdict = if out.irreducible {
            "irreducible"
        } else {
            "reducible"
        };
        println!("{}: {verdict}", out.poly);
    }
    Ok(0)
}

#[derive(Serialize)]
struct TorsionOutput {
    ext_degree: u32,
    ext_field: FieldInfo,
    theta: String,
    count: usize,
    points: Vec<String>,
}

#[derive(Serialize)]
struct CarlitzOutput {
    f: String,
    rho: String,
    frobenius_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    torsion: Option<TorsionOutput>,
}

fn carlitz(g: &GlobalOpts, text: &str, torsion_in: Option<u32>, theta: Option<u32>) -> Outcome {
    let field = resolve_field(g)?;
    let ring = PolyRing::new(field.clone());
    let f = parse_poly(&ring, "f", text)?;
    let rho = carlitz_polynomial(&ring, &f)?;
    let torsion = match torsion_in {
        None => None,
        Some(n) => {
            let degree = field.e().checked_mul(n).filter(|_| n > 0);
            let ext = degree
                .and_then(|d| standard_extension(u64::from(field.p()), d))
                .ok_or_else(|| CliError::Usage(format!("no supported extension of degree {n}")))?;
            let theta = match theta {
                Some(i) => ext.from_index(i).ok_or_else(|| {
                    CliError::Usage(format!("--theta {i} is outside F_{}", ext.q()))
                })?,
                None => ext.primitive_element(),
            };
            let points = torsion_points(&ring, &f, theta, &ext)?;
            Some(TorsionOutput {
                ext_degree: n,
                ext_field: ext.info(),
                theta: ext.render(theta),
                count: points.len(),
                points: points.iter().map(|&u| ext.render(u)).collect(),
            })
        }
    };
    let out = CarlitzOutput {
        f: ring.render(&f),
        rho: rho.render(&ring),
        frobenius_degree: rho.frobenius_degree(),
        torsion,
    };
    if g.json {
        print_json(&envelope(Some(&field), out))?;
    } else {
        let mut rows = vec![("f", out.f.clone()), ("rho_f(u)", out.rho.clone())];
        if let Some(t) = &out.torsion {
            rows.push((
                "extension",
                format!(
                    "F_{} (degree {} over F_{})",
                    t.ext_field.q,
                    t.ext_degree,
                    field.q()
                ),
            ));
            rows.push(("theta", t.theta.clone()));
            rows.push(("torsion points", t.count.to_string()));
        }
        print_rows(&rows);
    }
    Ok(0)
}

fn ledger(g: &GlobalOpts, p: u64, h: u32, w: u64) -> Outcome {
    let l = compositum_ledger(p, h, w).map_err(|e| CliError::Usage(e.to_string()))?;
    if g.json {
        print_json(&envelope(None, &l))?;
    } else {
        print_rows(&[
            ("p", l.p.to_string()),
            ("h", l.h.to_string()),
            ("w", l.w.to_string()),
            ("delta(H_i/H)", l.e_single.to_string()),
            ("delta(L/H)", l.e_l.to_string()),
            ("delta(M/H)", l.e_m.to_string()),
            ("N(delta(M/L))", l.e_norm_ml.to_string()),
            ("M/L unramified", l.m_over_l_unramified.to_string()),
        ]);
        for a in &l.assumptions {
            println!("assumes  {a}");
        }
    }
    Ok(0)
}
