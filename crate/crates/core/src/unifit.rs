//! Univariate rational interpolation of fixed type and type detection for
//! black-box functions of one variable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{solve_linear, LinearSolution, Rat, UPoly};
use crate::oracle::{LineOracle, OracleError};
use crate::rng::{derive, int_in, rng, small_rat};
use num_traits::{One, Zero};

/// Type `(r, s)`: degrees of numerator and monic denominator of the reduced
/// representation. `(0, 0)` is allowed for constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeRS {
    pub r: usize,
    pub s: usize,
}

impl TypeRS {
    pub fn new(r: usize, s: usize) -> Self {
        TypeRS { r, s }
    }

    /// Componentwise maximum.
    pub fn join(self, other: TypeRS) -> TypeRS {
        TypeRS {
            r: self.r.max(other.r),
            s: self.s.max(other.s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifitError {
    #[error("interpolation nodes are not pairwise distinct")]
    DuplicateNodes,
    #[error("expected at least {expected} nodes and as many values, got {nodes} nodes and {values} values")]
    LengthMismatch {
        expected: usize,
        nodes: usize,
        values: usize,
    },
    #[error("no rational fit with numerator degree <= {r_max} and denominator degree <= {s_max}")]
    NoFitWithinCaps { r_max: usize, s_max: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitOutcome {
    /// `G` of degree at most `r`, `H` monic of degree exactly `s`.
    Unique {
        g: UPoly,
        h: UPoly,
    },
    NotUnique,
    Inconsistent,
}

/// Solves `B0 x^r + ... + Br - f(x)(C1 x^(s-1) + ... + Cs) = f(x) x^s` at the
/// nodes. At least `r + s + 1` nodes are required; extra nodes make the
/// system overdetermined.
pub fn fit_fixed_type(
    nodes: &[Rat],
    values: &[Rat],
    r: usize,
    s: usize,
) -> Result<FitOutcome, UnifitError> {
    let k = r + s + 1;
    if nodes.len() < k || values.len() != nodes.len() {
        return Err(UnifitError::LengthMismatch {
            expected: k,
            nodes: nodes.len(),
            values: values.len(),
        });
    }
    for i in 0..nodes.len() {
        if nodes[i + 1..].contains(&nodes[i]) {
            return Err(UnifitError::DuplicateNodes);
        }
    }
    let mut a = Vec::with_capacity(nodes.len());
    let mut b = Vec::with_capacity(nodes.len());
    for (x, fx) in nodes.iter().zip(values) {
        let mut powers = vec![Rat::one()];
        for j in 1..=r.max(s) {
            powers.push(&powers[j - 1] * x);
        }
        let mut row: Vec<Rat> = (0..=r).map(|j| powers[r - j].clone()).collect();
        row.extend((1..=s).map(|j| -(fx * &powers[s - j])));
        a.push(row);
        b.push(fx * &powers[s]);
    }
    Ok(
        match solve_linear(&a, &b).expect("dimensions are consistent") {
            LinearSolution::Unique(sol) => {
                let g = UPoly::new(sol[..=r].iter().rev().cloned().collect());
                let mut hc: Vec<Rat> = sol[r + 1..].iter().rev().cloned().collect();
                hc.push(Rat::one());
                FitOutcome::Unique {
                    g,
                    h: UPoly::new(hc),
                }
            }
            LinearSolution::Singular { .. } => FitOutcome::NotUnique,
            LinearSolution::Inconsistent => FitOutcome::Inconsistent,
        },
    )
}

/// A detected type together with its reduced fit (`h` monic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineFit {
    pub ty: TypeRS,
    pub g: UPoly,
    pub h: UPoly,
}

const DETECT_ATTEMPTS: u64 = 3;
const EXTRA_POOL_NODES: usize = 2;

/// Integer range used for interpolation nodes.
pub fn node_bound(r_max: usize, s_max: usize) -> i64 {
    (8 * (r_max + s_max)).max(8) as i64
}

/// Finds the smallest type (by `r + s`, then `s`) whose fit through random
/// nodes agrees with the oracle at `n_verify` fresh points.
pub fn detect_type(
    f: &dyn LineOracle,
    r_max: usize,
    s_max: usize,
    n_verify: usize,
    seed: u64,
) -> Result<LineFit, UnifitError> {
    let bound = node_bound(r_max, s_max);
    let pool = r_max + s_max + 1 + EXTRA_POOL_NODES;
    let mut oracle_err: Option<OracleError> = None;
    let mut sampled_any = false;

    for attempt in 0..DETECT_ATTEMPTS {
        let mut rng = rng(derive(seed, attempt));
        let mut nodes: Vec<Rat> = Vec::with_capacity(pool);
        let mut values = Vec::with_capacity(pool);
        let mut draws = 0;
        while nodes.len() < pool && draws < 20 * pool {
            draws += 1;
            let x = int_in(&mut rng, bound);
            if nodes.contains(&x) {
                continue;
            }
            match f.value(&x) {
                Ok(v) => {
                    nodes.push(x);
                    values.push(v);
                }
                Err(e) => oracle_err = Some(e),
            }
        }
        if nodes.len() < r_max + s_max + 1 {
            continue;
        }
        sampled_any = true;

        let mut checks: Vec<(Rat, Rat)> = Vec::new();
        let mut draws = 0;
        while checks.len() < 2 * n_verify + 2 && draws < 20 * (n_verify + 1) {
            draws += 1;
            let x = small_rat(&mut rng, 4 * bound, 9);
            if nodes.contains(&x) || checks.iter().any(|(c, _)| c == &x) {
                continue;
            }
            match f.value(&x) {
                Ok(v) => checks.push((x, v)),
                Err(e) => oracle_err = Some(e),
            }
        }

        for total in 0..=r_max + s_max {
            for s in 0..=total.min(s_max) {
                let r = total - s;
                if r > r_max {
                    continue;
                }
                let k = r + s + 1;
                let FitOutcome::Unique { g, h } = fit_fixed_type(&nodes[..k], &values[..k], r, s)?
                else {
                    continue;
                };
                if g.is_zero() && !h.is_one() {
                    continue;
                }
                if !g.is_zero() && !g.gcd(&h).is_one() {
                    continue;
                }
                let extra = nodes[k..].iter().cloned().zip(values[k..].iter().cloned());
                if agrees(
                    &g,
                    &h,
                    extra.chain(checks.iter().cloned()),
                    n_verify,
                    checks.len(),
                ) {
                    return Ok(LineFit {
                        ty: TypeRS::new(r, s),
                        g,
                        h,
                    });
                }
            }
        }
    }
    match (sampled_any, oracle_err) {
        (false, Some(e)) => Err(UnifitError::Oracle(e)),
        _ => Err(UnifitError::NoFitWithinCaps { r_max, s_max }),
    }
}

/// Every point with `h != 0` must match, and at least `need` of the last
/// `n_checks` (the random verification points) must have been usable.
fn agrees(
    g: &UPoly,
    h: &UPoly,
    points: impl Iterator<Item = (Rat, Rat)>,
    need: usize,
    n_checks: usize,
) -> bool {
    let pts: Vec<(Rat, Rat)> = points.collect();
    let first_check = pts.len() - n_checks;
    let mut used = 0;
    for (i, (x, v)) in pts.iter().enumerate() {
        let hx = h.eval(x);
        if hx.is_zero() {
            continue;
        }
        if g.eval(x) != v * &hx {
            return false;
        }
        if i >= first_check {
            used += 1;
        }
    }
    used >= need
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{rat, ratio};

    fn ok(v: Rat) -> Result<Rat, OracleError> {
        Ok(v)
    }

    #[test]
    fn fixed_type_hand_example() {
        let nodes = [rat(0), rat(1), rat(2)];
        let values = [rat(0), ratio(1, 2), ratio(2, 3)];
        let out = fit_fixed_type(&nodes, &values, 1, 1).unwrap();
        assert_eq!(
            out,
            FitOutcome::Unique {
                g: UPoly::from_ints(&[0, 1]),
                h: UPoly::from_ints(&[1, 1])
            }
        );
    }

    #[test]
    fn constant_fit() {
        let out = fit_fixed_type(&[rat(5)], &[ratio(7, 3)], 0, 0).unwrap();
        assert_eq!(
            out,
            FitOutcome::Unique {
                g: UPoly::constant(ratio(7, 3)),
                h: UPoly::one()
            }
        );
    }

    #[test]
    fn parabola_is_not_linear() {
        let nodes = [rat(0), rat(1), rat(2)];
        let values = [rat(0), rat(1), rat(4)];
        assert_eq!(
            fit_fixed_type(&nodes, &values, 1, 0).unwrap(),
            FitOutcome::Inconsistent
        );
    }

    #[test]
    fn oversized_type_is_not_unique() {
        // x fitted with type (2, 1): G = x(x+c), H = x + c for any c
        let nodes = [rat(1), rat(2), rat(3), rat(4)];
        let values = nodes.clone();
        assert_eq!(
            fit_fixed_type(&nodes, &values, 2, 1).unwrap(),
            FitOutcome::NotUnique
        );
    }

    #[test]
    fn fixed_type_errors() {
        assert_eq!(
            fit_fixed_type(&[rat(1), rat(1), rat(2)], &[rat(0), rat(0), rat(0)], 1, 1),
            Err(UnifitError::DuplicateNodes)
        );
        assert!(matches!(
            fit_fixed_type(&[rat(1)], &[rat(0)], 1, 1),
            Err(UnifitError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn detect_lorentzian() {
        let f = |t: &Rat| ok((rat(1) + t * t).recip());
        let fit = detect_type(&f, 4, 4, 10, 1).unwrap();
        assert_eq!(fit.ty, TypeRS::new(0, 2));
        assert_eq!(fit.g, UPoly::one());
        assert_eq!(fit.h, UPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn detect_cubic() {
        let f = |t: &Rat| ok(t * t * t);
        let fit = detect_type(&f, 4, 4, 10, 2).unwrap();
        assert_eq!(fit.ty, TypeRS::new(3, 0));
        assert_eq!(fit.g, UPoly::from_ints(&[0, 0, 0, 1]));
        assert!(fit.h.is_one());
    }

    #[test]
    fn detect_example_on_line_y_equals_one() {
        // x*y/(x^2+y^2) at y = 1
        let f = |t: &Rat| ok(t / (t * t + rat(1)));
        let fit = detect_type(&f, 4, 4, 10, 3).unwrap();
        assert_eq!(fit.ty, TypeRS::new(1, 2));
        assert_eq!(fit.g, UPoly::x());
        assert_eq!(fit.h, UPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn caps_too_small() {
        let f = |t: &Rat| ok(t * t * t);
        assert_eq!(
            detect_type(&f, 2, 1, 5, 0),
            Err(UnifitError::NoFitWithinCaps { r_max: 2, s_max: 1 })
        );
    }

    #[test]
    fn pole_collisions_are_survived() {
        // pole at an integer inside the node range
        let f = |t: &Rat| {
            let d = t - rat(3);
            if d.is_zero() {
                ok(rat(0))
            } else {
                ok(d.recip())
            }
        };
        for seed in 0..20 {
            let fit = detect_type(&f, 2, 2, 8, seed).unwrap();
            assert_eq!(fit.ty, TypeRS::new(0, 1));
            assert_eq!(fit.h, UPoly::from_ints(&[-3, 1]));
        }
    }
}
