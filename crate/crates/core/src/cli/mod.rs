//! Command-line surface. Every command returns a human-readable report and
//! a JSON value; identical inputs and flags give byte-identical JSON.

mod selftest;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::rat::{fmt_rat, parse_rat};
use crate::algebra::{AffineLine, MPoly, PlaneDir, Rat, RatFun, UPoly};
use crate::certify::{
    decide_regular_at_origin, shear_to_general_position, verify_witness_plane, Certificate,
    CertificateJson, CertifyError, CertifyParams, Decision, Justification, PlaneVerdict,
};
use crate::factor::{factor_univariate, split_constant_term, FactorError};
use crate::frontend::{
    oracle_from_table, parse_expression, parse_polynomial, FrontendError, OracleSpec, SampleTable,
    TableOracle,
};
use crate::hensel::{hensel_lift, series_mul, HenselError, SeriesPoly};
use crate::oracle::{OnLine, Oracle, OracleError};
use crate::reconstruct::{reconstruct_checked, reconstruct_dense, ReconError, ReconParams};
use crate::rng::{derive, rng, small_rat};
use crate::unifit::{detect_type, UnifitError};

pub use selftest::{run_selftest, Fixtures, DEFAULT_FIXTURES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Method(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Method(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<FrontendError> for CliError {
    fn from(e: FrontendError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Method(e.to_string()),
        }
    }
}

impl From<ReconError> for CliError {
    fn from(e: ReconError) -> Self {
        match e {
            ReconError::InvalidParams(_) => CliError::Usage(e.to_string()),
            ReconError::Oracle(o) => o.into(),
            _ => CliError::Method(e.to_string()),
        }
    }
}

impl From<UnifitError> for CliError {
    fn from(e: UnifitError) -> Self {
        match e {
            UnifitError::NoFitWithinCaps { .. } => CliError::Method(e.to_string()),
            UnifitError::Oracle(o) => o.into(),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<FactorError> for CliError {
    fn from(e: FactorError) -> Self {
        match e {
            FactorError::ZeroInput | FactorError::NotMonicInLastVar => {
                CliError::Usage(e.to_string())
            }
            FactorError::NotSquarefreeAfterShear { .. } => CliError::Method(e.to_string()),
        }
    }
}

impl From<HenselError> for CliError {
    fn from(e: HenselError) -> Self {
        match e {
            HenselError::NotMonicInLastVar | HenselError::SeedsNotCoprime => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::InvalidInput(_) => CliError::Usage(e.to_string()),
            CertifyError::Factor(f) => f.into(),
            CertifyError::Hensel(h) => h.into(),
            CertifyError::Algebra(_) => CliError::Internal(e.to_string()),
            _ => CliError::Method(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "regfun",
    version,
    about = "Exact rational reconstruction and regularity certificates"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// Root seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Degree caps r,s for numerator and denominator along lines.
    #[arg(long, global = true, value_parser = parse_caps, default_value = "4,4")]
    pub caps: (usize, usize),
    /// Total degree bounds dG,dH for dense reconstruction.
    #[arg(long = "degree-bounds", global = true, value_parser = parse_degree_bounds)]
    pub degree_bounds: Option<(u32, u32)>,
    /// Number of verification points.
    #[arg(long = "verify", global = true, default_value_t = 10)]
    pub n_verify: usize,
    /// Retries after a failed reconstruction attempt.
    #[arg(long = "retries", global = true, default_value_t = 3)]
    pub retry_budget: usize,
    /// Series truncation order for lifting.
    #[arg(long, global = true)]
    pub truncation: Option<u32>,
    /// Write the JSON report to this file ("-" for standard output).
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub r_max: usize,
    pub s_max: usize,
    pub degree_bounds: Option<(u32, u32)>,
    pub n_verify: usize,
    pub retry_budget: usize,
    pub truncation: Option<u32>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            r_max: 4,
            s_max: 4,
            degree_bounds: None,
            n_verify: 10,
            retry_budget: 3,
            truncation: None,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn from_args(a: &ConfigArgs) -> Result<Self, CliError> {
        if a.n_verify == 0 {
            return Err(CliError::Usage("--verify must be positive".into()));
        }
        if a.truncation == Some(0) {
            return Err(CliError::Usage("--truncation must be positive".into()));
        }
        Ok(RunConfig {
            seed: a.seed,
            r_max: a.caps.0,
            s_max: a.caps.1,
            degree_bounds: a.degree_bounds,
            n_verify: a.n_verify,
            retry_budget: a.retry_budget,
            truncation: a.truncation,
            output: a.json.clone(),
        })
    }

    pub fn recon_params(&self) -> ReconParams {
        ReconParams {
            r_max: self.r_max,
            s_max: self.s_max,
            n_verify: self.n_verify,
            retry_budget: self.retry_budget,
            seed: self.seed,
            ..ReconParams::default()
        }
    }

    pub fn certify_params(&self) -> CertifyParams {
        CertifyParams {
            initial_truncation: self.truncation,
            ..CertifyParams::default()
        }
    }
}

fn parse_caps(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected r,s")?;
    Ok((
        a.trim().parse().map_err(|_| format!("bad number '{a}'"))?,
        b.trim().parse().map_err(|_| format!("bad number '{b}'"))?,
    ))
}

fn parse_degree_bounds(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected dG,dH")?;
    Ok((
        a.trim().parse().map_err(|_| format!("bad number '{a}'"))?,
        b.trim().parse().map_err(|_| format!("bad number '{b}'"))?,
    ))
}

/// Comma-separated rationals.
pub fn parse_point(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(|c| {
            parse_rat(c.trim())
                .ok_or_else(|| CliError::Usage(format!("bad rational '{}'", c.trim())))
        })
        .collect()
}

fn parse_vars(s: &str) -> Result<Vec<String>, CliError> {
    let vars: Vec<String> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|v| !v.is_empty())
        .map(str::to_string)
        .collect();
    if vars.is_empty() {
        return Err(CliError::Usage("no variables given".into()));
    }
    Ok(vars)
}

#[derive(Args, Debug, Clone)]
pub struct OracleInput {
    /// Function in the expression language, e.g. "vars x y; x*y/(x^2+y^2) default 0".
    pub expr: Option<String>,
    /// CSV sample table with header x1,...,xn,f.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Expression consulted for points missing from the table.
    #[arg(long)]
    pub fallback: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct PolyInput {
    /// Variable names, comma or space separated.
    #[arg(long)]
    pub vars: Option<String>,
    /// Numerator polynomial.
    #[arg(long)]
    pub g: Option<String>,
    /// Denominator polynomial.
    #[arg(long)]
    pub h: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Detect the type (r, s) of the restriction to an affine line.
    FitLine {
        #[command(flatten)]
        input: OracleInput,
        /// Base point of the line.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Direction of the line.
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Recover a rational representation from point evaluations.
    Reconstruct {
        #[command(flatten)]
        input: OracleInput,
        /// Point where the result must agree with the function (repeatable).
        #[arg(long = "checkpoint", allow_hyphen_values = true)]
        checkpoints: Vec<String>,
    },
    /// Decide regularity at the origin and emit a certificate when not regular.
    Certify {
        /// Function in the expression language.
        expr: Option<String>,
        #[command(flatten)]
        poly: PolyInput,
        /// Decide at this point instead of the origin.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Re-verify a certificate JSON file and exit.
        #[arg(long)]
        recheck: Option<PathBuf>,
    },
    /// Restrict G/H to the plane x' = a u, xn = v and test regularity there.
    WitnessPlane {
        #[command(flatten)]
        poly: PolyInput,
        /// Direction a in the first n-1 coordinates.
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Lift the factorization of H(0, xn) to power series factors of H.
    Hensel {
        #[command(flatten)]
        poly: PolyInput,
    },
    /// Factor a univariate polynomial over the rationals.
    FactorUni {
        /// Polynomial in one variable.
        poly: String,
        /// Variable name.
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Find a shear putting H in general position.
    Shear {
        #[command(flatten)]
        poly: PolyInput,
    },
    /// Run the built-in fixture suite.
    Selftest {
        /// Fixture file replacing the built-in fixtures.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

/// A finished command: text for the terminal, JSON for machines, exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            code: 0,
        }
    }
}

/// Loaded black-box function.
pub enum LoadedOracle {
    Spec(OracleSpec),
    Table(TableOracle),
}

impl LoadedOracle {
    pub fn as_oracle(&self) -> &dyn Oracle {
        match self {
            LoadedOracle::Spec(s) => s,
            LoadedOracle::Table(t) => t,
        }
    }

    /// Variable names for printing.
    pub fn names(&self) -> Vec<String> {
        match self {
            LoadedOracle::Spec(s) => s.vars.clone(),
            LoadedOracle::Table(t) => crate::algebra::mpoly::default_names(t.dim()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_oracle(input: &OracleInput) -> Result<LoadedOracle, CliError> {
    match (&input.expr, &input.table) {
        (Some(e), None) => {
            if input.fallback.is_some() {
                return Err(CliError::Usage("--fallback needs --table".into()));
            }
            Ok(LoadedOracle::Spec(parse_expression(e)?))
        }
        (None, Some(path)) => {
            let text = read_file(path)?;
            let table = SampleTable::from_csv(text.as_bytes())?;
            let fallback = input
                .fallback
                .as_deref()
                .map(parse_expression)
                .transpose()?;
            Ok(LoadedOracle::Table(oracle_from_table(table, fallback)?))
        }
        _ => Err(CliError::Usage(
            "give exactly one of an expression or --table".into(),
        )),
    }
}

struct Polys {
    vars: Vec<String>,
    g: MPoly,
    h: MPoly,
}

fn load_polys(p: &PolyInput, need_g: bool) -> Result<Polys, CliError> {
    let vars = parse_vars(
        p.vars
            .as_deref()
            .ok_or_else(|| CliError::Usage("--vars is required".into()))?,
    )?;
    let h = parse_polynomial(
        p.h.as_deref()
            .ok_or_else(|| CliError::Usage("--h is required".into()))?,
        &vars,
    )?;
    let g = match (&p.g, need_g) {
        (Some(g), _) => parse_polynomial(g, &vars)?,
        (None, true) => MPoly::one(vars.len()),
        (None, false) => MPoly::zero(vars.len()),
    };
    if h.is_zero() {
        return Err(CliError::Usage("the denominator is zero".into()));
    }
    Ok(Polys { vars, g, h })
}

fn show(p: &MPoly, names: &[String]) -> String {
    p.display_with(names).to_string()
}

fn show_point(p: &[Rat]) -> String {
    format!("({})", p.iter().map(fmt_rat).collect::<Vec<_>>().join(", "))
}

fn point_json(p: &[Rat]) -> Value {
    Value::from(p.iter().map(fmt_rat).collect::<Vec<_>>())
}

/// Parses arguments, runs the command and writes its output; returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let config = match RunConfig::from_args(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match execute(&cli.command, &config) {
        Ok(report) => match emit(&report, &config) {
            Ok(()) => report.code,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(report: &Report, config: &RunConfig) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(&report.json)
        .map_err(|e| CliError::Internal(e.to_string()))?
        + "\n";
    match config.output.as_deref() {
        Some(p) if p == Path::new("-") => print!("{json}"),
        Some(p) => {
            std::fs::write(p, json)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?;
            print!("{}", report.text);
        }
        None => print!("{}", report.text),
    }
    Ok(())
}

pub fn execute(cmd: &Command, config: &RunConfig) -> Result<Report, CliError> {
    match cmd {
        Command::FitLine { input, base, dir } => {
            cmd_fit_line(&load_oracle(input)?, base, dir, config)
        }
        Command::Reconstruct { input, checkpoints } => {
            let pts = checkpoints
                .iter()
                .map(|c| parse_point(c))
                .collect::<Result<Vec<_>, _>>()?;
            cmd_reconstruct(&load_oracle(input)?, &pts, config)
        }
        Command::Certify {
            expr,
            poly,
            at,
            recheck,
        } => {
            if let Some(path) = recheck {
                return cmd_recheck(&read_file(path)?);
            }
            let at = at.as_deref().map(parse_point).transpose()?;
            let (f, vars, source) = match (expr, poly.h.is_some() || poly.g.is_some()) {
                (Some(e), false) => {
                    let spec = parse_expression(e)?;
                    match spec.to_ratfun() {
                        Ok(f) => (f, spec.vars.clone(), "expression"),
                        Err(FrontendError::HasGuards) => {
                            let f = reconstruct_checked(&spec, &config.recon_params(), &[])?;
                            (f, spec.vars.clone(), "reconstructed")
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                (None, true) => {
                    let p = load_polys(poly, true)?;
                    let f = RatFun::new(p.g, p.h).map_err(|e| CliError::Usage(e.to_string()))?;
                    (f, p.vars, "polynomials")
                }
                _ => {
                    return Err(CliError::Usage(
                        "give either an expression or --vars/--g/--h".into(),
                    ))
                }
            };
            cmd_certify(&f, &vars, source, at.as_deref(), config)
        }
        Command::WitnessPlane { poly, dir } => {
            cmd_witness_plane(&load_polys(poly, true)?, &parse_point(dir)?)
        }
        Command::Hensel { poly } => cmd_hensel(&load_polys(poly, false)?, config),
        Command::FactorUni { poly, var } => cmd_factor_uni(poly, var),
        Command::Shear { poly } => cmd_shear(&load_polys(poly, false)?, config),
        Command::Selftest { fixtures } => {
            let fx = match fixtures {
                Some(path) => Fixtures::from_json(&read_file(path)?)?,
                None => Fixtures::from_json(DEFAULT_FIXTURES)?,
            };
            Ok(run_selftest(&fx, config))
        }
    }
}

pub fn cmd_fit_line(
    f: &LoadedOracle,
    base: &str,
    dir: &str,
    config: &RunConfig,
) -> Result<Report, CliError> {
    let line = AffineLine::new(parse_point(base)?, parse_point(dir)?)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let on = OnLine::new(f.as_oracle(), line.clone())?;
    let fit = detect_type(
        &on,
        config.r_max,
        config.s_max,
        config.n_verify,
        config.seed,
    )?;
    let (g, h) = (fit.g.display_var("t"), fit.h.display_var("t"));
    let text = format!(
        "line: {} + t*{}\ntype: ({}, {})\nG(t) = {g}\nH(t) = {h}\n",
        show_point(line.base()),
        show_point(line.dir()),
        fit.ty.r,
        fit.ty.s
    );
    let json = json!({
        "command": "fit-line",
        "line": {"base": point_json(line.base()), "dir": point_json(line.dir())},
        "type": [fit.ty.r, fit.ty.s],
        "g": g,
        "h": h,
    });
    Ok(Report::ok(text, json))
}

/// Agreement of `f` with the oracle at fresh random points.
struct Verification {
    checked: usize,
    agreed: usize,
    skipped: usize,
}

fn verify_against(f: &RatFun, oracle: &dyn Oracle, n: usize, seed: u64) -> Verification {
    let mut rng = rng(derive(seed, 0xC11));
    let mut v = Verification {
        checked: 0,
        agreed: 0,
        skipped: 0,
    };
    for _ in 0..n {
        let p: Vec<Rat> = (0..oracle.dim())
            .map(|_| small_rat(&mut rng, 50, 7))
            .collect();
        match (f.eval(&p), oracle.eval(&p)) {
            (Ok(Some(a)), Ok(b)) => {
                v.checked += 1;
                if a == b {
                    v.agreed += 1;
                }
            }
            _ => v.skipped += 1,
        }
    }
    v
}

pub fn cmd_reconstruct(
    f: &LoadedOracle,
    checkpoints: &[Vec<Rat>],
    config: &RunConfig,
) -> Result<Report, CliError> {
    let names = f.names();
    let oracle = f.as_oracle();
    let params = config.recon_params();
    let r = reconstruct_checked(oracle, &params, checkpoints)?;
    let v = verify_against(&r, oracle, config.n_verify, config.seed);
    let (num, den) = (show(r.num(), &names), show(r.den(), &names));
    let mut text = format!(
        "numerator:   {num}\ndenominator: {den}\nverification: {}/{} points agree, {} skipped\n",
        v.agreed, v.checked, v.skipped
    );
    let mut json = json!({
        "command": "reconstruct",
        "vars": names,
        "num": num,
        "den": den,
        "verification": {"checked": v.checked, "agreed": v.agreed, "skipped": v.skipped},
        "checkpoints": checkpoints.iter().map(|p| point_json(p)).collect::<Vec<_>>(),
    });
    if let Some((dg, dh)) = config.degree_bounds {
        let dense = match reconstruct_dense(oracle, dg, dh, &params) {
            Ok(d) => {
                let agrees = d == r;
                text.push_str(&format!(
                    "dense method: {}\n",
                    if agrees { "agrees" } else { "differs" }
                ));
                json!({"agrees": agrees, "num": show(d.num(), &names), "den": show(d.den(), &names)})
            }
            Err(e) => {
                text.push_str(&format!("dense method: failed ({e})\n"));
                json!({"error": e.to_string()})
            }
        };
        json["dense"] = dense;
    }
    let code = if v.agreed == v.checked { 0 } else { 2 };
    Ok(Report { text, json, code })
}

fn translate(f: &RatFun, at: &[Rat]) -> Result<RatFun, CliError> {
    let n = f.nvars();
    if at.len() != n {
        return Err(CliError::Usage(format!(
            "--at has {} coordinates, expected {n}",
            at.len()
        )));
    }
    let images: Vec<MPoly> = (0..n)
        .map(|i| &MPoly::var(n, i) + &MPoly::constant(n, at[i].clone()))
        .collect();
    RatFun::new(f.num().compose(&images), f.den().compose(&images))
        .map_err(|e| CliError::Internal(e.to_string()))
}

pub fn cmd_certify(
    f: &RatFun,
    vars: &[String],
    source: &str,
    at: Option<&[Rat]>,
    config: &RunConfig,
) -> Result<Report, CliError> {
    let (f, at_json) = match at {
        Some(p) => (translate(f, p)?, point_json(p)),
        None => (f.clone(), point_json(&vec![Rat::zero(); f.nvars()])),
    };
    let names = vars.to_vec();
    let mut text = format!("function: {}\n", f.display_with(&names));
    if at.is_some() {
        text.push_str("(translated so that the point is the origin)\n");
    }
    let mut json = json!({
        "command": "certify",
        "vars": names,
        "source": source,
        "at": at_json,
        "num": show(f.num(), &names),
        "den": show(f.den(), &names),
    });
    match decide_regular_at_origin(&f, &config.certify_params(), config.seed) {
        Decision::Regular { value } => {
            text.push_str(&format!("regular, value {}\n", fmt_rat(&value)));
            json["decision"] = json!("regular");
            json["value"] = json!(fmt_rat(&value));
        }
        Decision::NonRegular {
            certificate,
            justification,
        } => {
            text.push_str("not regular\n");
            json["decision"] = json!("non-regular");
            let why = match &justification {
                Justification::WitnessPlane => "witness-plane".to_string(),
                Justification::UnivariatePole => "univariate-pole".to_string(),
                Justification::NoWitness(msg) => {
                    text.push_str(&format!("no certificate: {msg}\n"));
                    json["reason"] = json!(msg);
                    "no-witness".to_string()
                }
            };
            json["justification"] = json!(why);
            if let Some(c) = certificate {
                let xp = &names[..names.len() - 1];
                let uv = ["u".to_string(), "v".to_string()];
                text.push_str(&format!(
                    "shear: {}\nwitness plane direction: {}\nrestriction: ({}) / ({})\npi = {}\n",
                    show_point(&c.shear),
                    show_point(&c.direction.0),
                    show(&c.g_plane, &uv),
                    show(&c.h_plane, &uv),
                    show(&c.pi, xp)
                ));
                c.recheck().map_err(|e| CliError::Internal(e.to_string()))?;
                json["certificate"] = serde_json::to_value(c.to_json())
                    .map_err(|e| CliError::Internal(e.to_string()))?;
            }
        }
    }
    Ok(Report::ok(text, json))
}

/// Rechecks a certificate given as bare JSON or inside a certify report.
pub fn cmd_recheck(text: &str) -> Result<Report, CliError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))?;
    let inner = v.get("certificate").cloned().unwrap_or(v);
    let cj: CertificateJson = serde_json::from_value(inner)
        .map_err(|e| CliError::Usage(format!("not a certificate: {e}")))?;
    let cert = Certificate::from_json(&cj).map_err(|e| CliError::Usage(e.to_string()))?;
    match cert.recheck() {
        Ok(()) => Ok(Report::ok(
            "certificate verified\n".into(),
            json!({"command": "recheck", "verified": true}),
        )),
        Err(e) => Ok(Report {
            text: format!("certificate rejected: {}\n", e.0),
            json: json!({"command": "recheck", "verified": false, "reason": e.0}),
            code: 2,
        }),
    }
}

fn cmd_witness_plane(p: &Polys, dir: &[Rat]) -> Result<Report, CliError> {
    let n = p.vars.len();
    if n < 2 || dir.len() != n - 1 {
        return Err(CliError::Usage(format!(
            "--dir needs {} coordinates",
            n.saturating_sub(1)
        )));
    }
    let dir = PlaneDir(dir.to_vec());
    let uv = ["u".to_string(), "v".to_string()];
    let mut json = json!({"command": "witness-plane", "dir": point_json(&dir.0)});
    let text = match verify_witness_plane(&p.g, &p.h, &dir)? {
        PlaneVerdict::VerifiedNonRegular { g, h } => {
            json["verdict"] = json!("non-regular");
            json["g"] = json!(show(&g, &uv));
            json["h"] = json!(show(&h, &uv));
            format!(
                "restriction ({}) / ({}) is not regular at the origin\n",
                show(&g, &uv),
                show(&h, &uv)
            )
        }
        PlaneVerdict::NotAWitness => {
            json["verdict"] = json!("not-a-witness");
            "restriction is regular at the origin\n".to_string()
        }
    };
    Ok(Report::ok(text, json))
}

fn cmd_hensel(p: &Polys, config: &RunConfig) -> Result<Report, CliError> {
    let n = p.vars.len();
    if n < 2 {
        return Err(CliError::Usage(
            "lifting needs at least two variables".into(),
        ));
    }
    let (e, parts) = split_constant_term(&p.h)?;
    let d = config.truncation.unwrap_or(p.h.degree_in_first(n - 1) + 2);
    let mut seeds = vec![UPoly::monomial(e as usize, Rat::one())];
    seeds.extend(parts);
    let lifted = hensel_lift(&p.h, &seeds, d)?;
    let product = lifted
        .iter()
        .try_fold(SeriesPoly::one(n, d), |acc, f| series_mul(&acc, f))?;
    if product != SeriesPoly::from_mpoly(&p.h, d) {
        return Err(CliError::Internal(
            "lifted factors do not multiply back".into(),
        ));
    }
    let factors: Vec<String> = lifted
        .iter()
        .map(|f| show(&f.to_mpoly(), &p.vars))
        .collect();
    let xn = &p.vars[n - 1];
    let mut text = format!("truncation: {d}\n");
    for (s, f) in seeds.iter().zip(&factors) {
        text.push_str(&format!("{}  ->  {f}\n", s.display_var(xn)));
    }
    text.push_str("product check: ok\n");
    let json = json!({
        "command": "hensel",
        "truncation": d,
        "seeds": seeds.iter().map(|s| s.display_var(xn)).collect::<Vec<_>>(),
        "factors": factors,
    });
    Ok(Report::ok(text, json))
}

fn cmd_factor_uni(poly: &str, var: &str) -> Result<Report, CliError> {
    let vars = vec![var.to_string()];
    let p = parse_polynomial(poly, &vars)?;
    let u = UPoly::from_mpoly(&p, 0).ok_or_else(|| CliError::Internal("not univariate".into()))?;
    let fac = factor_univariate(&u)?;
    let mut text = format!("unit: {}\n", fmt_rat(&fac.unit));
    let mut factors = Vec::new();
    for (q, m) in &fac.factors {
        text.push_str(&format!("({})^{m}\n", q.display_var(var)));
        factors.push(json!({"factor": q.display_var(var), "multiplicity": m}));
    }
    Ok(Report::ok(
        text,
        json!({"command": "factor-uni", "unit": fmt_rat(&fac.unit), "factors": factors}),
    ))
}

fn cmd_shear(p: &Polys, config: &RunConfig) -> Result<Report, CliError> {
    let (a, h, c) =
        shear_to_general_position(&p.h, config.seed, CertifyParams::default().shear_budget)?;
    let text = format!(
        "shear: {}\nsheared and scaled: {}\nscale: {}\n",
        show_point(&a),
        show(&h, &p.vars),
        fmt_rat(&c)
    );
    Ok(Report::ok(
        text,
        json!({"command": "shear", "a": point_json(&a), "h": show(&h, &p.vars), "scale": fmt_rat(&c)}),
    ))
}
