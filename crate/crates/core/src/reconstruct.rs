//! Reconstruction of a rational representation of a separately regular
//! black-box function from its restrictions to axis-parallel lines, and an
//! independent dense interpolation used as a cross-check.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::linsolve::{cramer_solve_poly, nullspace};
use crate::algebra::{reduce_fraction, MPoly, Rat, RatFun};
use crate::oracle::{AxisLine, LastSlice, Oracle, OracleError};
use crate::rng::{derive, int_in, rng, small_rat};
use crate::unifit::{detect_type, TypeRS, UnifitError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconParams {
    /// Cap on the numerator degree along any axis line.
    pub r_max: usize,
    /// Cap on the denominator degree along any axis line.
    pub s_max: usize,
    pub n_type_probes: usize,
    pub n_verify: usize,
    /// Number of retries after a failed attempt.
    pub retry_budget: usize,
    pub seed: u64,
}

impl Default for ReconParams {
    fn default() -> Self {
        ReconParams {
            r_max: 4,
            s_max: 4,
            n_type_probes: 3,
            n_verify: 10,
            retry_budget: 3,
            seed: 0,
        }
    }
}

impl ReconParams {
    fn with_seed(&self, seed: u64) -> Self {
        ReconParams {
            seed,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("reconstructed fraction disagrees with the oracle after {attempts} attempts")]
    VerificationFailed { attempts: usize },
    #[error("no rational fit with numerator degree <= {r_max} and denominator degree <= {s_max}")]
    NoFitWithinCaps { r_max: usize, s_max: usize },
    #[error("degree bounds too small: the interpolation system has only the trivial solution")]
    TrivialNullspace,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<UnifitError> for ReconError {
    fn from(e: UnifitError) -> Self {
        match e {
            UnifitError::NoFitWithinCaps { r_max, s_max } => {
                ReconError::NoFitWithinCaps { r_max, s_max }
            }
            UnifitError::Oracle(o) => ReconError::Oracle(o),
            // nodes are generated internally, so these cannot reach the caller
            other => panic!("internal interpolation error: {other}"),
        }
    }
}

fn check_params(f: &dyn Oracle, p: &ReconParams) -> Result<(), ReconError> {
    if f.dim() == 0 {
        return Err(ReconError::InvalidParams("oracle has no variables".into()));
    }
    if p.n_type_probes == 0 || p.n_verify == 0 {
        return Err(ReconError::InvalidParams(
            "probe and verification counts must be positive".into(),
        ));
    }
    Ok(())
}

/// Random point with small rational coordinates.
fn random_point(rng: &mut impl rand::Rng, n: usize) -> Vec<Rat> {
    (0..n).map(|_| small_rat(rng, 97, 13)).collect()
}

/// Componentwise maximum type of `t -> f(x', t)` over random `x'`.
pub fn probe_generic_type(f: &dyn Oracle, params: &ReconParams) -> Result<TypeRS, ReconError> {
    check_params(f, params)?;
    let n = f.dim();
    if n < 2 {
        return Err(ReconError::InvalidParams(
            "type probing needs at least two variables".into(),
        ));
    }
    let mut rng = rng(derive(params.seed, 1));
    let mut ty = TypeRS::new(0, 0);
    for k in 0..params.n_type_probes {
        let prefix = random_point(&mut rng, n - 1);
        let line = AxisLine::new(f, prefix);
        let fit = detect_type(
            &line,
            params.r_max,
            params.s_max,
            params.n_verify,
            derive(params.seed, 1000 + k as u64),
        )?;
        ty = ty.join(fit.ty);
    }
    Ok(ty)
}

/// Reduced `G / H` with `f = G / H` on a dense open set.
pub fn reconstruct(f: &dyn Oracle, params: &ReconParams) -> Result<RatFun, ReconError> {
    reconstruct_checked(f, params, &[])
}

/// Like [`reconstruct`], additionally requiring agreement at every
/// checkpoint where the denominator does not vanish.
pub fn reconstruct_checked(
    f: &dyn Oracle,
    params: &ReconParams,
    checkpoints: &[Vec<Rat>],
) -> Result<RatFun, ReconError> {
    check_params(f, params)?;
    if let Some(p) = checkpoints.iter().find(|p| p.len() != f.dim()) {
        return Err(OracleError::DimensionMismatch {
            expected: f.dim(),
            found: p.len(),
        }
        .into());
    }
    let mut last = ReconError::VerificationFailed { attempts: 0 };
    for attempt in 0..=params.retry_budget {
        let seed = derive(params.seed, attempt as u64);
        let outcome = attempt_once(f, params, seed, attempt).and_then(|r| {
            if verify(f, &r, params.n_verify, derive(seed, 2), checkpoints)? {
                Ok(r)
            } else {
                Err(ReconError::VerificationFailed {
                    attempts: attempt + 1,
                })
            }
        });
        match outcome {
            Ok(r) => return Ok(r),
            Err(
                e @ (ReconError::VerificationFailed { .. } | ReconError::NoFitWithinCaps { .. }),
            ) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(match last {
        ReconError::VerificationFailed { .. } => ReconError::VerificationFailed {
            attempts: params.retry_budget + 1,
        },
        e => e,
    })
}

fn attempt_once(
    f: &dyn Oracle,
    params: &ReconParams,
    seed: u64,
    attempt: usize,
) -> Result<RatFun, ReconError> {
    let n = f.dim();
    let sub = params.with_seed(seed);
    if n == 1 {
        let line = AxisLine::new(f, Vec::new());
        let fit = detect_type(
            &line,
            params.r_max,
            params.s_max,
            params.n_verify,
            derive(seed, 1),
        )?;
        return Ok(
            reduce_fraction(&fit.g.to_mpoly(1, 0), &fit.h.to_mpoly(1, 0))
                .expect("monic denominator"),
        );
    }
    let TypeRS { r, s } = probe_generic_type(f, &sub)?;
    let k = r + s + 1;
    // first attempt uses nodes 0..k; retries shift them to avoid special slices
    let offset = if attempt == 0 {
        Rat::zero()
    } else {
        int_in(&mut rng(derive(seed, 3)), 4 * k as i64 + 8)
    };
    let nodes: Vec<Rat> = (0..k)
        .map(|i| &offset + Rat::from_integer(i.into()))
        .collect();

    let mut slices = Vec::with_capacity(k);
    for (i, c) in nodes.iter().enumerate() {
        let slice = LastSlice::new(f, c.clone());
        slices.push(reconstruct(
            &slice,
            &params.with_seed(derive(seed, 100 + i as u64)),
        )?);
    }
    solve_slice_system(n, r, s, &nodes, &slices).ok_or(ReconError::VerificationFailed {
        attempts: attempt + 1,
    })
}

/// Solves the interpolation system of type `(r, s)` over the field of
/// rational functions in `x'`, with row `i` cleared of the denominator of
/// the slice `f(x', c_i)`.
fn solve_slice_system(
    n: usize,
    r: usize,
    s: usize,
    nodes: &[Rat],
    slices: &[RatFun],
) -> Option<RatFun> {
    let mut a = Vec::with_capacity(nodes.len());
    let mut b = Vec::with_capacity(nodes.len());
    for (c, fi) in nodes.iter().zip(slices) {
        let mut powers = vec![Rat::one()];
        for j in 1..=r.max(s) {
            powers.push(&powers[j - 1] * c);
        }
        let mut row: Vec<MPoly> = (0..=r).map(|j| fi.den().scale(&powers[r - j])).collect();
        row.extend((1..=s).map(|j| fi.num().scale(&-&powers[s - j])));
        a.push(row);
        b.push(fi.num().scale(&powers[s]));
    }
    let (det, xs) = cramer_solve_poly(a, b)?;
    let xn = MPoly::var(n, n - 1);
    let mut g = MPoly::zero(n);
    for (j, bj) in xs[..=r].iter().enumerate() {
        g = &g + &(&bj.extend_vars(n) * &xn.pow((r - j) as u32));
    }
    let mut h = &det.extend_vars(n) * &xn.pow(s as u32);
    for (j, cj) in xs[r + 1..].iter().enumerate() {
        h = &h + &(&cj.extend_vars(n) * &xn.pow((s - j - 1) as u32));
    }
    Some(reduce_fraction(&g, &h).expect("denominator has a nonzero leading coefficient"))
}

/// Agreement at `n_verify` random points with nonzero denominator and at
/// every usable checkpoint. Points where the oracle fails are skipped.
fn verify(
    f: &dyn Oracle,
    r: &RatFun,
    n_verify: usize,
    seed: u64,
    checkpoints: &[Vec<Rat>],
) -> Result<bool, ReconError> {
    let agrees = |p: &[Rat]| -> Option<bool> {
        let want = r.eval(p).expect("dimension checked")?;
        let got = f.eval(p).ok()?;
        Some(want == got)
    };
    for p in checkpoints {
        if agrees(p) == Some(false) {
            return Ok(false);
        }
    }
    let mut rng = rng(seed);
    let mut used = 0;
    for _ in 0..20 * n_verify {
        if used == n_verify {
            break;
        }
        let p = random_point(&mut rng, f.dim());
        match agrees(&p) {
            Some(true) => used += 1,
            Some(false) => return Ok(false),
            None => {}
        }
    }
    Ok(used == n_verify)
}

/// Exponent vectors of total degree at most `d` in `n` variables.
fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=d {
            prefix.push(k);
            rec(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

const DENSE_EXTRA_POINTS: usize = 8;

/// Sample box half-width for dense interpolation. A point lands on the
/// pole set of a degree-`d` denominator with probability at most
/// `d / (2 * bound + 1)`.
const DENSE_BOX: i64 = 1 << 12;

/// Dense interpolation: solves `f(p) H(p) - G(p) = 0` for all coefficients
/// of `G` (total degree `<= dg`) and `H` (total degree `<= dh`) at random
/// integer points and takes a nullspace vector.
pub fn reconstruct_dense(
    f: &dyn Oracle,
    dg: u32,
    dh: u32,
    params: &ReconParams,
) -> Result<RatFun, ReconError> {
    check_params(f, params)?;
    let n = f.dim();
    let gm = monomials_up_to(n, dg);
    let hm = monomials_up_to(n, dh);
    let unknowns = gm.len() + hm.len();
    let bound = DENSE_BOX;
    let mut last = ReconError::VerificationFailed { attempts: 0 };
    for attempt in 0..=params.retry_budget {
        let seed = derive(params.seed, 500 + attempt as u64);
        let mut rng = rng(seed);
        let mut rows = Vec::with_capacity(unknowns + DENSE_EXTRA_POINTS);
        let mut draws = 0;
        while rows.len() < unknowns + DENSE_EXTRA_POINTS
            && draws < 20 * (unknowns + DENSE_EXTRA_POINTS)
        {
            draws += 1;
            let p: Vec<Rat> = (0..n).map(|_| int_in(&mut rng, bound)).collect();
            let Ok(v) = f.eval(&p) else { continue };
            let mono = |e: &Vec<u32>| -> Rat {
                e.iter().zip(&p).fold(Rat::one(), |acc, (&k, x)| {
                    acc * crate::algebra::rat::rat_pow(x, k)
                })
            };
            let mut row: Vec<Rat> = gm.iter().map(|e| -mono(e)).collect();
            row.extend(hm.iter().map(|e| &v * mono(e)));
            rows.push(row);
        }
        let ns = nullspace(&rows).expect("rows have equal length");
        let Some(vec) = ns.into_iter().next() else {
            last = ReconError::TrivialNullspace;
            continue;
        };
        let g = MPoly::from_terms(n, gm.iter().cloned().zip(vec[..gm.len()].iter().cloned()));
        let h = MPoly::from_terms(n, hm.iter().cloned().zip(vec[gm.len()..].iter().cloned()));
        if h.is_zero() {
            last = ReconError::VerificationFailed {
                attempts: attempt + 1,
            };
            continue;
        }
        let r = reduce_fraction(&g, &h).expect("nonzero denominator");
        if verify(f, &r, params.n_verify, derive(seed, 2), &[])? {
            return Ok(r);
        }
        last = ReconError::VerificationFailed {
            attempts: attempt + 1,
        };
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;
    use crate::oracle::{FnOracle, RatFunOracle};

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    fn example() -> RatFun {
        let xy = &x(2, 0) * &x(2, 1);
        let q = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        RatFun::new(xy, q).unwrap()
    }

    #[test]
    fn probe_types() {
        let f = RatFunOracle(example());
        assert_eq!(
            probe_generic_type(&f, &ReconParams::default()).unwrap(),
            TypeRS::new(1, 2)
        );
        let sum = RatFunOracle(RatFun::from_poly(&x(2, 0) + &x(2, 1)));
        assert_eq!(
            probe_generic_type(&sum, &ReconParams::default()).unwrap(),
            TypeRS::new(1, 0)
        );
        let prod = &x(2, 0).pow(2) * &x(2, 1).pow(2);
        let lor = RatFunOracle(RatFun::new(MPoly::one(2), &MPoly::one(2) + &prod).unwrap());
        assert_eq!(
            probe_generic_type(&lor, &ReconParams::default()).unwrap(),
            TypeRS::new(0, 2)
        );
    }

    #[test]
    fn reconstructs_example() {
        let f = RatFunOracle(example());
        let r = reconstruct(&f, &ReconParams::default()).unwrap();
        assert_eq!(r, example());
        let d = reconstruct_dense(&f, 2, 2, &ReconParams::default()).unwrap();
        assert_eq!(d, example());
    }

    #[test]
    fn reconstructs_polynomial_and_constant() {
        let sum = RatFun::from_poly(&x(2, 0) + &x(2, 1));
        assert_eq!(
            reconstruct(&RatFunOracle(sum.clone()), &ReconParams::default()).unwrap(),
            sum
        );
        let five = FnOracle::new(3, |_: &[Rat]| Ok(rat(5)));
        let r = reconstruct(&five, &ReconParams::default()).unwrap();
        assert_eq!(r, RatFun::constant(3, rat(5)));
        let d = reconstruct_dense(&five, 0, 0, &ReconParams::default()).unwrap();
        assert_eq!(d, RatFun::constant(3, rat(5)));
    }

    #[test]
    fn deterministic() {
        let f = RatFunOracle(example());
        let p = ReconParams {
            seed: 42,
            ..Default::default()
        };
        assert_eq!(reconstruct(&f, &p).unwrap(), reconstruct(&f, &p).unwrap());
    }

    #[test]
    fn dense_bounds_too_small() {
        let f = RatFunOracle(example());
        assert_eq!(
            reconstruct_dense(&f, 1, 1, &ReconParams::default()),
            Err(ReconError::TrivialNullspace)
        );
    }

    #[test]
    fn caps_exceeded() {
        let f = RatFunOracle(RatFun::from_poly(x(2, 1).pow(6)));
        assert!(matches!(
            reconstruct(&f, &ReconParams::default()),
            Err(ReconError::NoFitWithinCaps { .. })
        ));
    }

    #[test]
    fn checkpoints_detect_mismatch() {
        // equals x1 except on the line x2 = 1/3, x1 = 2
        let f = FnOracle::new(2, |p: &[Rat]| {
            if p[1] == Rat::new(1.into(), 3.into()) && p[0] == rat(2) {
                Ok(rat(0))
            } else {
                Ok(p[0].clone())
            }
        });
        let p = ReconParams::default();
        assert_eq!(reconstruct(&f, &p).unwrap(), RatFun::from_poly(x(2, 0)));
        let bad = vec![vec![rat(2), Rat::new(1.into(), 3.into())]];
        assert!(matches!(
            reconstruct_checked(&f, &p, &bad),
            Err(ReconError::VerificationFailed { .. })
        ));
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(2, 0), vec![vec![0, 0]]);
    }
}
