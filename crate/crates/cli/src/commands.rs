//! The subcommands as library functions returning [`Report`]s.

use std::str::FromStr;

use abmod_core::constructors::random_simple_pole;
use abmod_core::duality::{candidate_delta, DEFAULT_SEED};
use abmod_core::{
    bernstein, biggest_simple_pole_sub, chain_residuals, default_trunc, dual_bernstein, e_delta,
    e_lambda, find_self_duality, hom_ab, is_regular, jordan_chain_lift, jordan_module, pham,
    pole_prediction, random_regular, reflection_check, saturate, verify_bidual, verify_prop_dual,
    verify_twist_hom, AbError, AbModule, FixedPointConfig, PhamSpec, RandomProfile, Rational,
    Series,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::description::ModuleDescription;
use crate::report::{self, Report, Status};

/// Global flags shared by all commands.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub trunc: Option<usize>,
    pub max_iter: Option<usize>,
}

impl Options {
    pub fn config(&self) -> FixedPointConfig {
        FixedPointConfig {
            max_iter: self.max_iter,
            ..FixedPointConfig::default()
        }
    }

    fn precision(&self, m: &AbModule) -> Value {
        json!({
            "trunc": m.trunc(),
            "exact": m.is_exact(),
            "max_iter": self.max_iter.unwrap_or(2 * m.rank() + 4),
        })
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|e| format!("invalid rational {s:?}: {e}"))
}

/// The module of a description, at the `--trunc` precision if given.
pub fn load(desc: &ModuleDescription, opts: &Options) -> Result<AbModule, AbError> {
    let m = desc.to_module()?;
    match opts.trunc {
        Some(n) => m.at_trunc(n),
        None => Ok(m),
    }
}

fn report(
    command: &str,
    desc: &ModuleDescription,
    m: &AbModule,
    opts: &Options,
    result: Value,
) -> Report {
    Report {
        command: command.to_string(),
        input_digest: Some(desc.digest()),
        precision: opts.precision(m),
        result,
        caveats: Vec::new(),
        status: Status::Ok,
    }
}

pub fn info(desc: &ModuleDescription, opts: &Options) -> Result<Report, AbError> {
    let m = load(desc, opts)?;
    let mut caveats = Vec::new();
    let regular = match is_regular(&m, &opts.config()) {
        Ok(r) => json!(r),
        Err(e) if e.is_precision_exhausted() => {
            caveats.push(format!("regularity undecided: {e}"));
            Value::Null
        }
        Err(e) => return Err(e),
    };
    let mut r = report(
        "info",
        desc,
        &m,
        opts,
        json!({
            "name": desc.name,
            "rank": m.rank(),
            "simple_pole": m.is_simple_pole(),
            "regular": regular,
        }),
    );
    r.caveats = caveats;
    Ok(r)
}

pub fn bernstein_cmd(
    desc: &ModuleDescription,
    dual: bool,
    opts: &Options,
) -> Result<Report, AbError> {
    let m = load(desc, opts)?;
    let cfg = opts.config();
    let (poly, sub) = if dual {
        (
            dual_bernstein(&m, &cfg)?,
            biggest_simple_pole_sub(&m, &cfg)?,
        )
    } else {
        (bernstein(&m, &cfg)?, saturate(&m, &cfg)?)
    };
    let mut result = json!({"polynomial": report::bernstein(&poly)});
    result[if dual {
        "simple_pole_submodule"
    } else {
        "saturation"
    }] = report::submodule(&sub);
    let mut r = report(
        if dual {
            "bernstein --dual"
        } else {
            "bernstein"
        },
        desc,
        &m,
        opts,
        result,
    );
    if !poly.irreducibility_certified {
        r.caveats
            .push("factorization budget exhausted; factors may be reducible".into());
    }
    Ok(r)
}

pub fn poles(desc: &ModuleDescription, n: u32, opts: &Options) -> Result<Report, AbError> {
    let m = load(desc, opts)?;
    let p = pole_prediction(&m, n, &opts.config())?;
    let mut r = report("poles", desc, &m, opts, report::poles(&p));
    if !p.symbolic_classes.is_empty() {
        r.caveats
            .push("irrational roots: symbolic classes carry no numeric prediction".into());
    }
    r.result["n"] = json!(n);
    // d is read off the minimal polynomial of the residue, not a
    // characteristic polynomial.
    r.result["multiplicity_source"] = json!("minimal_polynomial");
    Ok(r)
}

pub fn jordan(
    desc: &ModuleDescription,
    beta: &Rational,
    d: usize,
    opts: &Options,
) -> Result<Report, AbError> {
    let m = load(desc, opts)?;
    let f = biggest_simple_pole_sub(&m, &opts.config())?;
    let chain = jordan_chain_lift(&f.module, beta, d)?;
    let residuals_zero = chain_residuals(&f.module, beta, &chain)
        .iter()
        .all(|r| r.iter().all(Series::is_zero));
    let (shift, g) = f.inclusion();
    let ambient: Vec<Value> = chain
        .iter()
        .map(|v| report::vector(&g.mul_vec(v)))
        .collect();
    let certified = chain
        .first()
        .and_then(|v| v.first())
        .map_or(0, Series::trunc);
    let mut r = report(
        "jordan",
        desc,
        &m,
        opts,
        json!({
            "beta": report::rational(beta),
            "d": d,
            "chain": chain.iter().map(|v| report::vector(v)).collect::<Vec<_>>(),
            "ambient_chain": {"shift": shift, "vectors": ambient},
            "residuals_zero": residuals_zero,
            "certified_trunc": certified,
            "simple_pole_submodule": report::lattice(&f.lattice),
        }),
    );
    if !residuals_zero {
        r.status = Status::Fail;
    }
    Ok(r)
}

/// Generators for `gen`.
#[derive(Clone, Debug)]
pub enum GenSpec {
    Pham(Vec<u32>),
    Jordan(Rational, usize),
    ELambda(Rational),
    Random(usize, u64),
}

pub fn generate(spec: &GenSpec, trunc: Option<usize>) -> Result<ModuleDescription, AbError> {
    let (m, name, prov) = match spec {
        GenSpec::Pham(exps) => {
            let s = PhamSpec::new(exps.clone())?;
            let n = trunc.unwrap_or(default_trunc(s.milnor_number()));
            let list = exps
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",");
            (
                pham(&s, n),
                format!("pham({list})"),
                format!("gen --pham {list}"),
            )
        }
        GenSpec::Jordan(beta, d) => {
            if *d == 0 {
                return Err(AbError::DimensionMismatch(
                    "Jordan block size must be positive".into(),
                ));
            }
            let n = trunc.unwrap_or(default_trunc(*d));
            (
                jordan_module(beta, *d, n),
                format!("J({beta},{d})"),
                format!("gen --jordan {beta} {d}"),
            )
        }
        GenSpec::ELambda(l) => {
            let n = trunc.unwrap_or(default_trunc(1));
            (
                e_lambda(l, n),
                format!("E_{l}"),
                format!("gen --elambda {l}"),
            )
        }
        GenSpec::Random(k, seed) => {
            if *k == 0 {
                return Err(AbError::DimensionMismatch("rank must be positive".into()));
            }
            let n = trunc.unwrap_or(default_trunc(*k));
            (
                random_regular(*k, *seed, n, &RandomProfile::default())?,
                format!("random(k={k},seed={seed})"),
                format!("gen --random {k} {seed}"),
            )
        }
    };
    Ok(ModuleDescription::from_module(&m, Some(name), Some(prov)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Lemma32,
    Bidual,
    Twist,
    Propdual,
    Reflection,
    All,
}

impl Suite {
    fn includes(self, s: Suite) -> bool {
        self == s || self == Suite::All
    }
}

#[derive(Clone, Debug)]
pub enum CheckInput {
    File(ModuleDescription),
    Random {
        rank: usize,
        seed: u64,
        count: usize,
    },
}

#[derive(Clone, Debug)]
struct Check {
    name: String,
    status: Status,
    detail: Value,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool, detail: Value) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Ok } else { Status::Fail },
            detail,
        }
    }

    fn from_error(name: impl Into<String>, e: &AbError) -> Self {
        let status = match e {
            AbError::PrecisionExhausted { .. }
            | AbError::IterationCap { .. }
            | AbError::NotRegular { .. } => Status::Inconclusive,
            _ => Status::Fail,
        };
        Check {
            name: name.into(),
            status,
            detail: json!({"error": e.to_string()}),
        }
    }

    fn to_value(&self) -> Value {
        json!({"check": self.name, "status": self.status.as_str(), "detail": self.detail})
    }
}

fn lemma32_pair(name: &str, e: &AbModule, f: &AbModule) -> Check {
    let h = hom_ab(e, f);
    Check::new(
        format!("lemma32 {name}"),
        h.is_simple_pole(),
        json!({"hom_rank": h.rank(), "a_at_zero_vanishes": h.is_simple_pole()}),
    )
}

fn lemma32_on(e: &AbModule, delta: &Rational, cfg: &FixedPointConfig) -> Vec<Check> {
    let sat = match saturate(e, cfg) {
        Ok(s) => s.module,
        Err(err) => return vec![Check::from_error("lemma32", &err)],
    };
    let f = match biggest_simple_pole_sub(e, cfg) {
        Ok(s) => s.module,
        Err(err) => return vec![Check::from_error("lemma32", &err)],
    };
    let ed = e_delta(delta, e.trunc());
    vec![
        lemma32_pair("(saturation, saturation)", &sat, &sat),
        lemma32_pair("(saturation, E_delta)", &sat, &ed),
        lemma32_pair("(F, F)", &f, &f),
        lemma32_pair("(F, saturation)", &f, &sat),
    ]
}

fn twist_on(e: &AbModule, delta: &Rational) -> Vec<Check> {
    let ed = e_delta(delta, e.trunc());
    [
        ("(E, E)", e, e),
        ("(E, E_delta)", e, &ed),
        ("(E_delta, E)", &ed, e),
    ]
    .into_iter()
    .map(|(name, x, y)| Check::new(format!("twist {name}"), verify_twist_hom(x, y), json!({})))
    .collect()
}

fn bidual_on(e: &AbModule, deltas: &[Rational], cfg: &FixedPointConfig) -> Vec<Check> {
    deltas
        .iter()
        .map(|d| match verify_bidual(e, d, cfg) {
            Ok(r) => Check::new(
                format!("bidual delta={d}"),
                r.passed(),
                json!({
                    "a_linear": r.iso.a_linear,
                    "det_unit": r.iso.det_unit,
                    "bernstein_invariant": r.bernstein_invariant,
                }),
            ),
            Err(err) => Check::from_error(format!("bidual delta={d}"), &err),
        })
        .collect()
}

/// The explicit shift, or the one read off from the two polynomials.
fn resolve_delta(
    e: &AbModule,
    delta: Option<&Rational>,
    cfg: &FixedPointConfig,
) -> Result<Option<Rational>, AbError> {
    if let Some(d) = delta {
        return Ok(Some(d.clone()));
    }
    Ok(candidate_delta(
        &bernstein(e, cfg)?,
        &dual_bernstein(e, cfg)?,
    ))
}

fn reflection_on(
    e: &AbModule,
    delta: Option<&Rational>,
    cfg: &FixedPointConfig,
    seed: u64,
) -> Check {
    let run = || -> Result<Check, AbError> {
        let Some(d) = resolve_delta(e, delta, cfg)? else {
            return Ok(Check {
                name: "reflection".into(),
                status: Status::Inconclusive,
                detail: json!({"reason": "no candidate shift"}),
            });
        };
        let b = bernstein(e, cfg)?;
        let bs = dual_bernstein(e, cfg)?;
        let holds = reflection_check(&b, &bs, &d);
        let (cert, search) = find_self_duality(e, &d, seed)?;
        let detail = json!({
            "delta": report::rational(&d),
            "reflection_holds": holds,
            "self_duality_certified": cert.is_some(),
            "morphism_space_dim": search.space_dim,
            "precision_caveat": search.precision_caveat,
        });
        Ok(Check {
            name: format!("reflection delta={d}"),
            status: match (cert.is_some(), holds) {
                (true, true) => Status::Ok,
                (true, false) => Status::Fail,
                (false, _) => Status::Inconclusive,
            },
            detail,
        })
    };
    run().unwrap_or_else(|err| Check::from_error("reflection", &err))
}

fn propdual_on(e: &AbModule, delta: Option<&Rational>, cfg: &FixedPointConfig, seed: u64) -> Check {
    let run = || -> Result<Check, AbError> {
        let Some(d) = resolve_delta(e, delta, cfg)? else {
            return Ok(Check {
                name: "propdual".into(),
                status: Status::Inconclusive,
                detail: json!({"reason": "no candidate shift"}),
            });
        };
        let r = verify_prop_dual(e, &d, cfg, seed)?;
        let found = r.found_both();
        Ok(Check {
            name: format!("propdual delta={d}"),
            status: match (found, r.reflection) {
                (true, true) => Status::Ok,
                (true, false) => Status::Fail,
                (false, _) => Status::Inconclusive,
            },
            detail: json!({
                "delta": report::rational(&d),
                "kappa_prime_found": r.kappa_prime.certificate.is_some(),
                "kappa_second_found": r.kappa_second.certificate.is_some(),
                "reflection_holds": r.reflection,
            }),
        })
    };
    run().unwrap_or_else(|err| Check::from_error("propdual", &err))
}

fn module_checks(
    e: &AbModule,
    suite: Suite,
    delta: Option<&Rational>,
    cfg: &FixedPointConfig,
) -> Vec<Check> {
    let zero = Rational::from_integer(0.into());
    let fixed = delta.unwrap_or(&zero);
    let mut out = Vec::new();
    if suite.includes(Suite::Lemma32) {
        out.extend(lemma32_on(e, fixed, cfg));
    }
    if suite.includes(Suite::Bidual) {
        let deltas: Vec<Rational> = match delta {
            Some(d) => vec![d.clone()],
            None => (0..3).map(|i| Rational::from_integer(i.into())).collect(),
        };
        out.extend(bidual_on(e, &deltas, cfg));
    }
    if suite.includes(Suite::Twist) {
        out.extend(twist_on(e, fixed));
    }
    if suite.includes(Suite::Reflection) {
        out.push(reflection_on(e, delta, cfg, DEFAULT_SEED));
    }
    if suite.includes(Suite::Propdual) {
        out.push(propdual_on(e, delta, cfg, DEFAULT_SEED));
    }
    out
}

/// Seed of case `i` of a random run.
fn case_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(i as u64)
}

/// Case `i` of a random run: a pair of random simple-pole modules for the
/// Hom lemma, and a random regular module for the other suites.
fn random_case(
    i: usize,
    rank: usize,
    seed: u64,
    suite: Suite,
    delta: Option<&Rational>,
    opts: &Options,
) -> Value {
    let cfg = opts.config();
    let profile = RandomProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, i));
    let n = opts.trunc.unwrap_or(default_trunc(rank));
    let mut checks = Vec::new();
    let mut module = Value::Null;
    if suite.includes(Suite::Lemma32) {
        let (ke, kf) = (rng.random_range(1..=rank), rng.random_range(1..=rank));
        let e = random_simple_pole(&mut rng, ke, n, &profile);
        let f = random_simple_pole(&mut rng, kf, n, &profile);
        checks.push(lemma32_pair(
            &format!("random simple-pole pair ({ke}, {kf})"),
            &e,
            &f,
        ));
    }
    if suite != Suite::Lemma32 {
        let k = 1 + i % rank;
        let mseed = rng.random::<u64>();
        match random_regular(k, mseed, n, &profile) {
            Ok(e) => {
                module = json!({"rank": k, "seed": mseed, "digest": ModuleDescription::from_module(&e, None, None).digest()});
                checks.extend(module_checks(&e, suite, delta, &cfg));
            }
            Err(err) => checks.push(Check::from_error("generate", &err)),
        }
    }
    let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Ok);
    json!({
        "index": i,
        "module": module,
        "status": status.as_str(),
        "checks": checks.iter().map(Check::to_value).collect::<Vec<_>>(),
    })
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Lemma32 => "lemma32",
        Suite::Bidual => "bidual",
        Suite::Twist => "twist",
        Suite::Propdual => "propdual",
        Suite::Reflection => "reflection",
        Suite::All => "all",
    }
}

pub fn check(
    input: &CheckInput,
    suite: Suite,
    delta: Option<&Rational>,
    opts: &Options,
) -> Result<Report, AbError> {
    let (cases, digest, precision) = match input {
        CheckInput::File(desc) => {
            let m = load(desc, opts)?;
            let checks = module_checks(&m, suite, delta, &opts.config());
            let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Ok);
            let case = json!({
                "index": 0,
                "module": {"rank": m.rank(), "digest": desc.digest()},
                "status": status.as_str(),
                "checks": checks.iter().map(Check::to_value).collect::<Vec<_>>(),
            });
            (vec![case], Some(desc.digest()), opts.precision(&m))
        }
        CheckInput::Random { rank, seed, count } => {
            if *rank == 0 {
                return Err(AbError::DimensionMismatch("rank must be positive".into()));
            }
            let cases: Vec<Value> = (0..*count)
                .into_par_iter()
                .map(|i| random_case(i, *rank, *seed, suite, delta, opts))
                .collect();
            let precision = json!({
                "trunc": opts.trunc.unwrap_or(default_trunc(*rank)),
                "max_iter": opts.max_iter,
                "random": {"rank": rank, "seed": seed, "count": count},
            });
            (cases, None, precision)
        }
    };
    let count = |s: &str| cases.iter().filter(|c| c["status"] == s).count();
    let (pass, fail, inconclusive) = (count("pass"), count("fail"), count("inconclusive"));
    let status = if fail > 0 {
        Status::Fail
    } else if inconclusive > 0 {
        Status::Inconclusive
    } else {
        Status::Ok
    };
    Ok(Report {
        command: "check".into(),
        input_digest: digest,
        precision,
        result: json!({
            "suite": suite_name(suite),
            "delta": delta.map(report::rational),
            "summary": {"pass": pass, "fail": fail, "inconclusive": inconclusive, "total": cases.len()},
            "cases": cases,
        }),
        caveats: Vec::new(),
        status,
    })
}

/// Report for a failed command.
pub fn error_report(command: &str, err: &AbError) -> Report {
    let mut detail = json!({"message": err.to_string(), "kind": error_kind(err)});
    if let AbError::Parse { line, column, .. } = err {
        detail["line"] = json!(line);
        detail["column"] = json!(column);
    }
    Report {
        command: command.into(),
        input_digest: None,
        precision: Value::Null,
        result: json!({"error": detail}),
        caveats: Vec::new(),
        status: Status::Fail,
    }
}

pub fn error_kind(err: &AbError) -> &'static str {
    match err {
        AbError::NotAUnit => "NotAUnit",
        AbError::PrecisionExhausted { .. } => "PrecisionExhausted",
        AbError::NotRegular { .. } => "NotRegular",
        AbError::IterationCap { .. } => "IterationCap",
        AbError::NotSimplePole => "NotSimplePole",
        AbError::NotMinimalInClass { .. } => "NotMinimalInClass",
        AbError::NoSuchBlock { .. } => "NoSuchBlock",
        AbError::NotFullRank { .. } => "NotFullRank",
        AbError::GenerationFailed { .. } => "GenerationFailed",
        AbError::DimensionMismatch(_) => "DimensionMismatch",
        AbError::Parse { .. } => "ParseError",
        AbError::Cancelled => "Cancelled",
    }
}
