//! Planes through the origin and affine lines, and restriction of
//! polynomials to them.

use num_traits::Zero;

use super::mpoly::MPoly;
use super::rat::{rat_pow, Rat};
use super::upoly::UPoly;
use super::AlgebraError;

/// Direction `a` of the plane `x' = a*u, xn = v` through the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneDir(pub Vec<Rat>);

impl PlaneDir {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }
}

/// Affine line `base + t * dir`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLine {
    base: Vec<Rat>,
    dir: Vec<Rat>,
}

impl AffineLine {
    pub fn new(base: Vec<Rat>, dir: Vec<Rat>) -> Result<Self, AlgebraError> {
        if base.len() != dir.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: base.len(),
                found: dir.len(),
            });
        }
        if dir.iter().all(|d| d.is_zero()) {
            return Err(AlgebraError::ZeroInput("line direction"));
        }
        Ok(AffineLine { base, dir })
    }

    pub fn base(&self) -> &[Rat] {
        &self.base
    }

    pub fn dir(&self) -> &[Rat] {
        &self.dir
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn point(&self, t: &Rat) -> Vec<Rat> {
        self.base
            .iter()
            .zip(&self.dir)
            .map(|(b, d)| b + t * d)
            .collect()
    }

    /// Whether the line passes through the origin.
    pub fn through_origin(&self) -> bool {
        // base = -t*dir for some t
        let k = self
            .dir
            .iter()
            .position(|d| !d.is_zero())
            .expect("nonzero direction");
        let t = -(&self.base[k] / &self.dir[k]);
        self.point(&t).iter().all(|c| c.is_zero())
    }
}

/// `F(a1*u, ..., a(n-1)*u, v)` as a polynomial in `(u, v)`.
pub fn restrict_to_plane(f: &MPoly, a: &PlaneDir) -> Result<MPoly, AlgebraError> {
    let n = f.nvars();
    if n < 2 || a.0.len() != n - 1 {
        return Err(AlgebraError::DimensionMismatch {
            expected: n.saturating_sub(1),
            found: a.0.len(),
        });
    }
    let mut out = MPoly::zero(2);
    for (e, c) in f.terms() {
        let mut coeff = c.clone();
        for (ai, &k) in a.0.iter().zip(&e[..n - 1]) {
            if k > 0 {
                coeff *= rat_pow(ai, k);
            }
        }
        let du: u32 = e[..n - 1].iter().sum();
        out.add_term(vec![du, e[n - 1]], coeff);
    }
    Ok(out)
}

/// `F(base + t * dir)` as a polynomial in `t`.
pub fn restrict_to_line(f: &MPoly, line: &AffineLine) -> Result<UPoly, AlgebraError> {
    if f.nvars() != line.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: f.nvars(),
            found: line.dim(),
        });
    }
    let images: Vec<UPoly> = line
        .base
        .iter()
        .zip(&line.dir)
        .map(|(b, d)| UPoly::new(vec![b.clone(), d.clone()]))
        .collect();
    let mut cache: Vec<Vec<UPoly>> = images
        .iter()
        .map(|p| vec![UPoly::one(), p.clone()])
        .collect();
    let mut out = UPoly::zero();
    for (e, c) in f.terms() {
        let mut t = UPoly::constant(c.clone());
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let pw = &mut cache[i];
            while pw.len() <= k as usize {
                let next = &pw[pw.len() - 1] * &images[i];
                pw.push(next);
            }
            t = &t * &pw[k as usize];
        }
        out = &out + &t;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn plane_restriction_examples() {
        let f = &(&x(3, 0).pow(2) + &x(3, 1).pow(2)) + &x(3, 2).pow(2);
        let r = restrict_to_plane(&f, &PlaneDir(vec![rat(1), rat(2)])).unwrap();
        assert_eq!(r, &x(2, 0).pow(2).scale(&rat(5)) + &x(2, 1).pow(2));
        let r = restrict_to_plane(&x(3, 2), &PlaneDir(vec![rat(3), rat(-1)])).unwrap();
        assert_eq!(r, x(2, 1));
        let r = restrict_to_plane(
            &MPoly::constant(3, rat(4)),
            &PlaneDir(vec![rat(3), rat(-1)]),
        )
        .unwrap();
        assert_eq!(r, MPoly::constant(2, rat(4)));
        assert!(restrict_to_plane(&f, &PlaneDir(vec![rat(1)])).is_err());
    }

    #[test]
    fn line_restriction_examples() {
        let l = AffineLine::new(vec![rat(0), rat(0)], vec![rat(1), rat(1)]).unwrap();
        let r = restrict_to_line(&(&x(2, 0) + &x(2, 1)), &l).unwrap();
        assert_eq!(r, UPoly::from_ints(&[0, 2]));
        let l = AffineLine::new(vec![rat(0), rat(1)], vec![rat(1), rat(0)]).unwrap();
        let r = restrict_to_line(&(&x(2, 0).pow(2) + &x(2, 1).pow(2)), &l).unwrap();
        assert_eq!(r, UPoly::from_ints(&[1, 0, 1]));
        let r = restrict_to_line(&MPoly::constant(2, rat(9)), &l).unwrap();
        assert_eq!(r, UPoly::from_ints(&[9]));
        assert!(!l.through_origin());
        assert!(AffineLine::new(vec![rat(2), rat(2)], vec![rat(1), rat(1)])
            .unwrap()
            .through_origin());
        assert!(AffineLine::new(vec![rat(0)], vec![rat(0)]).is_err());
    }
}
