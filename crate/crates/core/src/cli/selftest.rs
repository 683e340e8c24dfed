//! Built-in fixture suite, one verdict per acceptance criterion.

use num_traits::Zero;
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use super::{CliError, Report, RunConfig};
use crate::algebra::rat::parse_rat;
use crate::algebra::{AffineLine, Rat, RatFun, UPoly};
use crate::certify::{
    compute_certificate, decide_regular_at_origin, Certificate, CertifyParams, Decision,
};
use crate::factor::{factor_univariate, split_constant_term};
use crate::frontend::{parse_expression, parse_polynomial};
use crate::gen;
use crate::hensel::{hensel_lift, series_mul, SeriesPoly};
use crate::oracle::{OnLine, Oracle, RatFunOracle};
use crate::reconstruct::{
    reconstruct, reconstruct_checked, reconstruct_dense, ReconError, ReconParams,
};
use crate::rng::{derive, int_in, rng, small_rat};
use crate::unifit::{detect_type, fit_fixed_type, FitOutcome, LineFit};

pub const DEFAULT_FIXTURES: &str = include_str!("../../fixtures/selftest.json");

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixtures {
    pub examples: Vec<ExampleFixture>,
    pub lines: Vec<LineFixture>,
    pub certify: Vec<CertifyFixture>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleFixture {
    pub name: String,
    pub expr: String,
    pub num: String,
    pub den: String,
    pub regular_at_origin: Option<bool>,
    pub random_lines: usize,
    pub values: Vec<ValueFixture>,
    pub checkpoints: Vec<Vec<String>>,
    pub checked_fails: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueFixture {
    pub at: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineFixture {
    pub expr: String,
    pub base: Vec<String>,
    pub dir: Vec<String>,
    #[serde(rename = "type")]
    pub ty: [usize; 2],
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyFixture {
    pub name: String,
    pub vars: Vec<String>,
    pub g: String,
    pub h: String,
    pub witness: Option<WitnessFixture>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFixture {
    pub truncation: u32,
    pub subset: Vec<usize>,
    pub m: u32,
    pub t_tilde: String,
}

fn rats(v: &[String]) -> Result<Vec<Rat>, CliError> {
    v.iter()
        .map(|s| {
            parse_rat(s).ok_or_else(|| CliError::Usage(format!("bad rational '{s}' in fixtures")))
        })
        .collect()
}

impl Fixtures {
    /// Parses and validates a fixture file.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let fx: Fixtures = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("invalid fixtures: {e}")))?;
        for e in &fx.examples {
            let spec = parse_expression(&e.expr)?;
            parse_polynomial(&e.num, &spec.vars)?;
            parse_polynomial(&e.den, &spec.vars)?;
            for v in &e.values {
                rats(&v.at)?;
                rats(std::slice::from_ref(&v.value))?;
            }
            for c in &e.checkpoints {
                rats(c)?;
            }
        }
        for l in &fx.lines {
            parse_expression(&l.expr)?;
            rats(&l.base)?;
            rats(&l.dir)?;
        }
        for c in &fx.certify {
            parse_polynomial(&c.g, &c.vars)?;
            parse_polynomial(&c.h, &c.vars)?;
            if let Some(w) = &c.witness {
                parse_polynomial(&w.t_tilde, &c.vars[..c.vars.len().saturating_sub(1)])?;
            }
        }
        Ok(fx)
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, name: &'static str) -> Self {
        Criterion {
            id,
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn result<T, E: std::fmt::Display>(&mut self, r: Result<T, E>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

/// Values of `g / h` at `extra` fresh points of the line agree with the
/// oracle; points where `h` vanishes are skipped.
fn line_consistent(on: &OnLine, fit: &LineFit, extra: usize, seed: u64) -> Result<bool, String> {
    let mut rng = rng(seed);
    for _ in 0..extra {
        let t = small_rat(&mut rng, 97, 13);
        let h = fit.h.eval(&t);
        if h.is_zero() {
            continue;
        }
        let v = crate::oracle::LineOracle::value(on, &t).map_err(|e| e.to_string())?;
        if fit.g.eval(&t) / h != v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random affine line with small integer data that avoids the origin.
pub fn random_line_off_origin(rng: &mut impl Rng, n: usize) -> AffineLine {
    loop {
        let base: Vec<Rat> = (0..n).map(|_| int_in(rng, 5)).collect();
        let dir: Vec<Rat> = (0..n).map(|_| int_in(rng, 5)).collect();
        if let Ok(line) = AffineLine::new(base, dir) {
            if !line.through_origin() {
                return line;
            }
        }
    }
}

fn unique_fit(seed: u64, cases: usize) -> Criterion {
    let mut c = Criterion::new(1, "unique fit from r+s+1 nodes");
    let mut rng = rng(derive(seed, 1));
    for _ in 0..cases {
        let (r, s) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let (g, h) = gen::random_coprime_pair(&mut rng, r, s);
        let mut nodes = Vec::new();
        let mut x = -20i64;
        while nodes.len() < r + s + 1 {
            let t = Rat::from_integer(x.into());
            if !h.eval(&t).is_zero() {
                nodes.push(t);
            }
            x += rng.gen_range(1..=3);
        }
        let values: Vec<Rat> = nodes.iter().map(|t| g.eval(t) / h.eval(t)).collect();
        let out = fit_fixed_type(&nodes, &values, r, s);
        let expected = FitOutcome::Unique {
            g: g.clone(),
            h: h.clone(),
        };
        c.check(out.as_ref() == Ok(&expected), || {
            format!(
                "type ({r}, {s}): {} / {} gave {out:?}",
                g.display_var("t"),
                h.display_var("t")
            )
        });
    }
    c
}

fn round_trip(seed: u64, cases: usize, max_deg: u32) -> Criterion {
    let mut c = Criterion::new(2, "reconstruction round trip and dense agreement");
    let mut rng = rng(derive(seed, 2));
    for i in 0..cases {
        let n = rng.gen_range(2..=3);
        let f = gen::random_ratfun(&mut rng, n, max_deg);
        let oracle = RatFunOracle(f.clone());
        let params = ReconParams {
            seed: derive(seed, 1000 + i as u64),
            ..ReconParams::default()
        };
        let got = reconstruct(&oracle, &params);
        c.check(got.as_ref() == Ok(&f), || {
            format!("{f}: reconstruct gave {got:?}")
        });
        let dense = reconstruct_dense(&oracle, f.num().degree(), f.den().degree(), &params);
        if let (Ok(a), Ok(b)) = (&got, &dense) {
            c.check(a == b, || format!("{f}: dense gave {b}"));
        } else {
            c.check(dense.as_ref() == Ok(&f), || {
                format!("{f}: dense gave {dense:?}")
            });
        }
    }
    c
}

fn examples(
    fx: &Fixtures,
    cfg: &RunConfig,
    id: u32,
    name: &'static str,
    sampling: bool,
) -> Result<Criterion, CliError> {
    let mut c = Criterion::new(id, name);
    for (k, e) in fx.examples.iter().enumerate() {
        if e.checked_fails != sampling {
            continue;
        }
        let spec = parse_expression(&e.expr)?;
        let num = parse_polynomial(&e.num, &spec.vars)?;
        let den = parse_polynomial(&e.den, &spec.vars)?;
        let expected = RatFun::new(num, den).map_err(|err| CliError::Usage(err.to_string()))?;
        let params = ReconParams {
            seed: derive(cfg.seed, 30 + k as u64),
            ..cfg.recon_params()
        };
        let got = reconstruct(&spec, &params);
        c.check(got.as_ref() == Ok(&expected), || {
            format!("{}: reconstruct gave {got:?}", e.name)
        });
        for v in &e.values {
            let p = rats(&v.at)?;
            let want = rats(std::slice::from_ref(&v.value))?.remove(0);
            let val = spec.eval(&p);
            c.check(val.as_ref() == Ok(&want), || {
                format!("{}: value at {:?} is {val:?}", e.name, v.at)
            });
        }
        if let Some(regular) = e.regular_at_origin {
            let d = decide_regular_at_origin(&expected, &CertifyParams::default(), cfg.seed);
            let ok = matches!(d, Decision::Regular { .. }) == regular;
            c.check(ok, || format!("{}: decision {d:?}", e.name));
        }
        let mut rng = rng(derive(cfg.seed, 40 + k as u64));
        for j in 0..e.random_lines {
            let line = random_line_off_origin(&mut rng, spec.vars.len());
            let on = OnLine::new(&spec, line)?;
            let fit = detect_type(
                &on,
                cfg.r_max,
                cfg.s_max,
                cfg.n_verify,
                derive(cfg.seed, 50 + j as u64),
            );
            match fit {
                Ok(fit) => {
                    let ok = line_consistent(&on, &fit, 10, derive(cfg.seed, 60 + j as u64));
                    c.check(ok == Ok(true), || {
                        format!("{}: line {j} inconsistent ({ok:?})", e.name)
                    });
                }
                Err(err) => c.check(false, || format!("{}: line {j}: {err}", e.name)),
            }
        }
        if !e.checkpoints.is_empty() {
            let pts = e
                .checkpoints
                .iter()
                .map(|p| rats(p))
                .collect::<Result<Vec<_>, _>>()?;
            let checked = reconstruct_checked(&spec, &params, &pts);
            let ok =
                matches!(checked, Err(ReconError::VerificationFailed { .. })) == e.checked_fails;
            c.check(ok, || {
                format!("{}: checked reconstruction gave {checked:?}", e.name)
            });
        }
    }
    if !sampling {
        for (k, l) in fx.lines.iter().enumerate() {
            let spec = parse_expression(&l.expr)?;
            let line = AffineLine::new(rats(&l.base)?, rats(&l.dir)?)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let on = OnLine::new(&spec, line)?;
            let fit = detect_type(
                &on,
                cfg.r_max,
                cfg.s_max,
                cfg.n_verify,
                derive(cfg.seed, 70 + k as u64),
            );
            let got = fit.as_ref().map(|f| [f.ty.r, f.ty.s]);
            c.check(got.as_ref() == Ok(&l.ty), || {
                format!("line fixture {k}: type {got:?}")
            });
        }
    }
    Ok(c)
}

fn certificates(
    fx: &Fixtures,
    seed: u64,
    seeds: u64,
) -> Result<(Criterion, Vec<String>), CliError> {
    let mut c = Criterion::new(4, CERTIFY_NAME);
    let mut serialized = Vec::new();
    for f in &fx.certify {
        let g = parse_polynomial(&f.g, &f.vars)?;
        let h = parse_polynomial(&f.h, &f.vars)?;
        for s in 0..seeds {
            let Some(cert) = c.result(
                compute_certificate(&g, &h, &CertifyParams::default(), derive(seed, s)),
                &f.name,
            ) else {
                continue;
            };
            let json = serde_json::to_string(&cert.to_json()).expect("certificate serializes");
            let back = serde_json::from_str(&json)
                .map_err(|e| e.to_string())
                .and_then(|j| Certificate::from_json(&j).map_err(|e| e.to_string()))
                .and_then(|c| c.recheck().map_err(|e| e.to_string()));
            c.check(back.is_ok(), || {
                format!("{}: recheck failed: {back:?}", f.name)
            });
            serialized.push(json);
        }
        if let Some(w) = &f.witness {
            let params = CertifyParams {
                initial_truncation: Some(w.truncation),
                ..CertifyParams::default()
            };
            let want = parse_polynomial(&w.t_tilde, &f.vars[..f.vars.len() - 1])?;
            if let Some(cert) = c.result(compute_certificate(&g, &h, &params, seed), &f.name) {
                let found = cert.truncation == w.truncation
                    && cert
                        .witnesses
                        .iter()
                        .any(|x| x.subset == w.subset && x.m == w.m && x.t_tilde == want);
                c.check(found, || {
                    format!("{}: witnesses {:?}", f.name, cert.witnesses)
                });
            }
        }
    }
    Ok((c, serialized))
}

fn lifting(seed: u64, cases: usize) -> Criterion {
    let mut c = Criterion::new(5, "Hensel lifting product and refinement");
    let mut rng = rng(derive(seed, 5));
    for _ in 0..cases {
        let n = rng.gen_range(2..=3);
        let h = gen::random_hensel_input(&mut rng, n, 5);
        let Some((e, parts)) = c.result(split_constant_term(&h), "split") else {
            continue;
        };
        let mut seeds = vec![UPoly::monomial(e as usize, Rat::from_integer(1.into()))];
        seeds.extend(parts);
        let mut prev: Option<Vec<SeriesPoly>> = None;
        for d in 0..=7u32 {
            let Some(lifted) = c.result(hensel_lift(&h, &seeds, d), "lift") else {
                break;
            };
            if d <= 6 {
                let prod = lifted
                    .iter()
                    .try_fold(SeriesPoly::one(n, d), |acc, f| series_mul(&acc, f));
                let ok = prod.as_ref() == Ok(&SeriesPoly::from_mpoly(&h, d));
                c.check(ok, || format!("{h}: product mismatch at D = {d}"));
            }
            if let Some(p) = prev {
                let cut: Vec<SeriesPoly> = lifted.iter().map(|f| f.truncate(d - 1)).collect();
                c.check(cut == p, || {
                    format!("{h}: lifting to {d} and truncating disagrees")
                });
            }
            prev = Some(lifted);
        }
    }
    c
}

fn factoring(seed: u64, cases: usize) -> Criterion {
    let mut c = Criterion::new(6, "univariate factorization recovers the multiset");
    let mut rng = rng(derive(seed, 6));
    for _ in 0..cases {
        let (p, unit, factors) = gen::random_factorization(&mut rng, 3, 8);
        let Some(fac) = c.result(factor_univariate(&p), "factor") else {
            continue;
        };
        let mut got: Vec<UPoly> = fac
            .factors
            .iter()
            .flat_map(|(q, m)| std::iter::repeat_n(q.clone(), *m as usize))
            .collect();
        got.sort_by(|a, b| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
        c.check(fac.unit == unit && got == factors, || {
            format!("{}: got {fac:?}", p.display_var("x"))
        });
    }
    c
}

const EXAMPLE_NAME: &str = "rational example: reconstruction, decision and lines";
const CERTIFY_NAME: &str = "witness certificates and standalone recheck";
const SAMPLING_NAME: &str = "sampling caveat on the twisted cubic";

fn or_failed(c: Result<Criterion, CliError>, id: u32, name: &'static str) -> Criterion {
    c.unwrap_or_else(|e| {
        let mut c = Criterion::new(id, name);
        c.check(false, || e.to_string());
        c
    })
}

/// Runs the suite. Case counts are smaller than in the full acceptance
/// tests so that the command finishes in seconds.
pub fn run_selftest(fx: &Fixtures, cfg: &RunConfig) -> Report {
    let certs = certificates(fx, cfg.seed, 2);
    let first = certs.as_ref().map(|(_, s)| s.clone()).unwrap_or_default();
    let mut criteria = vec![
        unique_fit(cfg.seed, 50),
        round_trip(cfg.seed, 10, 4),
        or_failed(examples(fx, cfg, 3, EXAMPLE_NAME, false), 3, EXAMPLE_NAME),
        or_failed(certs.map(|(c, _)| c), 4, CERTIFY_NAME),
        lifting(cfg.seed, 10),
        factoring(cfg.seed, 10),
        or_failed(examples(fx, cfg, 7, SAMPLING_NAME, true), 7, SAMPLING_NAME),
    ];

    let mut det = Criterion::new(8, "deterministic output");
    let again = certificates(fx, cfg.seed, 2)
        .map(|(_, s)| s)
        .unwrap_or_default();
    det.check(!first.is_empty() && first == again, || {
        "certificate JSON differs between runs".into()
    });
    criteria.push(det);

    let all = criteria.iter().all(|c| c.failures.is_empty());
    let mut text = String::new();
    let mut items = Vec::new();
    for c in &criteria {
        let verdict = if c.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        text.push_str(&format!(
            "criterion {}: {verdict} ({} checks) {}\n",
            c.id, c.cases, c.name
        ));
        for f in &c.failures {
            text.push_str(&format!("    {f}\n"));
        }
        items.push(json!({
            "id": c.id,
            "name": c.name,
            "checks": c.cases,
            "passed": c.failures.is_empty(),
            "failures": c.failures,
        }));
    }
    text.push_str(if all {
        "all criteria passed\n"
    } else {
        "some criteria failed\n"
    });
    let json: Value = json!({
        "command": "selftest",
        "seed": cfg.seed.to_string(),
        "criteria": items,
        "passed": all,
    });
    Report {
        text,
        json,
        code: if all { 0 } else { 2 },
    }
}
