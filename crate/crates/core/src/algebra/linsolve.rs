//! Exact linear algebra by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::rat::{lcm_of_denominators, Rat};
use super::AlgebraError;

/// Integral domain with exact division, enough for Bareiss elimination.
pub trait ExactDomain: Clone {
    fn is_zero(&self) -> bool;
    fn one_like(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// `self / d`, which the caller guarantees to be exact.
    fn div_exact(&self, d: &Self) -> Self;
}

impl ExactDomain for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(Zero::is_zero(&r), "inexact Bareiss division");
        q
    }
}

impl ExactDomain for MPoly {
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn one_like(&self) -> Self {
        MPoly::one(self.nvars())
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn div_exact(&self, d: &Self) -> Self {
        MPoly::div_exact(self, d).expect("inexact Bareiss division")
    }
}

/// Result of fraction-free forward elimination.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    /// Row echelon form; rows below `pivots.len()` are zero in the pivoted
    /// columns.
    pub rows: Vec<Vec<T>>,
    /// Pivot column of each leading row.
    pub pivots: Vec<usize>,
}

/// Bareiss elimination of `rows`, pivoting only among the first `ncols`
/// columns (further columns, e.g. right-hand sides, are carried along).
#[allow(clippy::needless_range_loop)]
pub fn bareiss<T: ExactDomain>(mut rows: Vec<Vec<T>>, ncols: usize) -> Echelon<T> {
    let m = rows.len();
    let mut pivots = Vec::new();
    if m == 0 {
        return Echelon { rows, pivots };
    }
    let width = rows[0].len();
    let mut prev: Option<T> = None;
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in r + 1..m {
            let lead = rows[i][c].clone();
            for j in c + 1..width {
                let mut v = pivot.mul(&rows[i][j]);
                if !lead.is_zero() {
                    v = v.sub(&lead.mul(&rows[r][j]));
                }
                rows[i][j] = match &prev {
                    Some(d) => v.div_exact(d),
                    None => v,
                };
            }
            rows[i][c] = pivot.sub(&pivot);
        }
        prev = Some(pivot);
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots }
}

/// Solution set of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Rat>),
    /// Infinitely many solutions: `particular + span(nullspace)`.
    Singular {
        particular: Vec<Rat>,
        nullspace: Vec<Vec<Rat>>,
    },
    Inconsistent,
}

/// Solves `A x = b` exactly over the rationals.
pub fn solve_linear(a: &[Vec<Rat>], b: &[Rat]) -> Result<LinearSolution, AlgebraError> {
    if a.len() != b.len() {
        return Err(AlgebraError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let ncols = a.first().map_or(0, |r| r.len());
    if let Some(bad) = a.iter().find(|r| r.len() != ncols) {
        return Err(AlgebraError::DimensionMismatch {
            expected: ncols,
            found: bad.len(),
        });
    }
    // scale every augmented row to integers
    let rows: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let l = Rat::from_integer(lcm_of_denominators(row.iter().chain(std::iter::once(rhs))));
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|v| (v * &l).to_integer())
                .collect()
        })
        .collect();
    let ech = bareiss(rows, ncols);
    let rank = ech.pivots.len();
    if ech.rows[rank..].iter().any(|r| !Zero::is_zero(&r[ncols])) {
        return Ok(LinearSolution::Inconsistent);
    }
    let to_rat = |v: &BigInt| Rat::from_integer(v.clone());
    let echelon: Vec<Vec<Rat>> = ech.rows[..rank]
        .iter()
        .map(|r| r.iter().map(to_rat).collect())
        .collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();

    let back_substitute = |rhs_col: Option<usize>, free_values: &[(usize, Rat)]| -> Vec<Rat> {
        let mut x = vec![Rat::zero(); ncols];
        for (c, v) in free_values {
            x[*c] = v.clone();
        }
        for (i, &pc) in ech.pivots.iter().enumerate().rev() {
            let row = &echelon[i];
            let mut acc = match rhs_col {
                Some(c) => row[c].clone(),
                None => Rat::zero(),
            };
            for j in pc + 1..ncols {
                if !x[j].is_zero() {
                    acc -= &row[j] * &x[j];
                }
            }
            x[pc] = acc / &row[pc];
        }
        x
    };

    let particular = back_substitute(Some(ncols), &[]);
    if free.is_empty() {
        return Ok(LinearSolution::Unique(particular));
    }
    let nullspace = free
        .iter()
        .map(|&f| back_substitute(None, &[(f, Rat::one())]))
        .collect();
    Ok(LinearSolution::Singular {
        particular,
        nullspace,
    })
}

/// Nullspace basis of `A` (empty when `A` has full column rank).
pub fn nullspace(a: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>, AlgebraError> {
    let b = vec![Rat::zero(); a.len()];
    match solve_linear(a, &b)? {
        LinearSolution::Singular { nullspace, .. } => Ok(nullspace),
        _ => Ok(Vec::new()),
    }
}

/// Solves a square system over the polynomial ring by Cramer's rule computed
/// with Bareiss elimination: returns `(det, [det * x_j])`, all polynomials.
/// `None` when the system is singular.
pub fn cramer_solve_poly(a: Vec<Vec<MPoly>>, b: Vec<MPoly>) -> Option<(MPoly, Vec<MPoly>)> {
    let m = a.len();
    let rows: Vec<Vec<MPoly>> = a
        .into_iter()
        .zip(b)
        .map(|(mut r, rhs)| {
            r.push(rhs);
            r
        })
        .collect();
    let ech = bareiss(rows, m);
    if ech.pivots.len() < m {
        return None;
    }
    let u = ech.rows;
    let det = u[m - 1][m - 1].clone();
    let mut xs: Vec<MPoly> = vec![MPoly::zero(det.nvars()); m];
    for j in (0..m).rev() {
        let mut acc = &det * &u[j][m];
        for k in j + 1..m {
            if !xs[k].is_zero() && !u[j][k].is_zero() {
                acc = &acc - &(&u[j][k] * &xs[k]);
            }
        }
        xs[j] = acc
            .div_exact(&u[j][j])
            .expect("Cramer numerator is a polynomial");
    }
    Some((det, xs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect()
    }

    #[test]
    fn identity_returns_rhs() {
        let a = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let b = vec![rat(3), ratio(-1, 2), rat(7)];
        assert_eq!(
            solve_linear(&a, &b).unwrap(),
            LinearSolution::Unique(b.clone())
        );
    }

    #[test]
    fn zero_one_by_one_is_singular() {
        match solve_linear(&m(&[&[0]]), &[rat(0)]).unwrap() {
            LinearSolution::Singular { nullspace, .. } => assert_eq!(nullspace.len(), 1),
            other => panic!("expected singular, got {other:?}"),
        }
        assert_eq!(
            solve_linear(&m(&[&[0]]), &[rat(1)]).unwrap(),
            LinearSolution::Inconsistent
        );
    }

    #[test]
    fn fit_system_hand_solution() {
        // rows B0*x + B1 - f*C1 = f*x at x = 0, 1, 2 with f = x/(x+1)
        let a = vec![
            vec![rat(0), rat(1), rat(0)],
            vec![rat(1), rat(1), ratio(-1, 2)],
            vec![rat(2), rat(1), ratio(-2, 3)],
        ];
        let b = vec![rat(0), ratio(1, 2), ratio(4, 3)];
        assert_eq!(
            solve_linear(&a, &b).unwrap(),
            LinearSolution::Unique(vec![rat(1), rat(0), rat(1)])
        );
    }

    #[test]
    fn dimension_mismatch() {
        assert!(solve_linear(&m(&[&[1, 2]]), &[rat(1), rat(2)]).is_err());
    }

    #[test]
    fn rank_deficient_rectangular() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let b = vec![rat(6), rat(12), rat(2)];
        match solve_linear(&a, &b).unwrap() {
            LinearSolution::Singular {
                particular,
                nullspace,
            } => {
                assert_eq!(nullspace.len(), 1);
                for (row, rhs) in a.iter().zip(&b) {
                    let v: Rat = row.iter().zip(&particular).map(|(x, y)| x * y).sum();
                    assert_eq!(&v, rhs);
                    let z: Rat = row.iter().zip(&nullspace[0]).map(|(x, y)| x * y).sum();
                    assert!(z.is_zero());
                }
            }
            other => panic!("expected singular, got {other:?}"),
        }
    }

    #[test]
    fn cramer_over_polynomials() {
        // [[x, 1], [1, x]] * v = [1, 0]  =>  v = [x, -1] / (x^2 - 1)
        let x = MPoly::var(1, 0);
        let one = MPoly::one(1);
        let (det, xs) = cramer_solve_poly(
            vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]],
            vec![one.clone(), MPoly::zero(1)],
        )
        .unwrap();
        assert_eq!(det, &x.pow(2) - &one);
        assert_eq!(xs[0], x);
        assert_eq!(xs[1], -&one);
    }
}
