//! Polynomials in `xn` with power-series coefficients in `x' = (x1, ...,
//! x(n-1))`, truncated by total degree in `x'`, and multifactor Hensel
//! lifting of a monic `H` from a coprime factorization of `H(0, ..., 0, xn)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{MPoly, Rat, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenselError {
    #[error("truncation orders differ: {0} and {1}")]
    TruncationMismatch(u32, u32),
    #[error("variable counts differ: {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("polynomial is not monic in the last variable")]
    NotMonicInLastVar,
    #[error("seed factors are not monic and pairwise coprime")]
    SeedsNotCoprime,
    #[error("product of the seeds differs from H(0, ..., 0, xn)")]
    ProductMismatch,
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("subset index {0} is out of range")]
    InvalidSubset(usize),
}

/// `sum_k c_k(x') xn^k` with every `c_k` of total degree at most `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoly {
    nvars: usize,
    trunc: u32,
    /// Coefficients in `n - 1` variables, lowest `xn` power first, trimmed.
    coeffs: Vec<MPoly>,
}

impl SeriesPoly {
    fn new(nvars: usize, trunc: u32, mut coeffs: Vec<MPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SeriesPoly {
            nvars,
            trunc,
            coeffs,
        }
    }

    /// Truncation of a polynomial in `n` variables.
    pub fn from_mpoly(p: &MPoly, trunc: u32) -> Self {
        let n = p.nvars();
        let coeffs = p
            .to_univariate(n - 1)
            .iter()
            .map(|c| c.truncate_vars(n - 1).truncate_first(n - 1, trunc))
            .collect();
        Self::new(n, trunc, coeffs)
    }

    /// A polynomial in `xn` alone.
    pub fn from_upoly(u: &UPoly, nvars: usize, trunc: u32) -> Self {
        let coeffs = u
            .coeffs()
            .iter()
            .map(|c| MPoly::constant(nvars - 1, c.clone()))
            .collect();
        Self::new(nvars, trunc, coeffs)
    }

    pub fn one(nvars: usize, trunc: u32) -> Self {
        Self::from_upoly(&UPoly::one(), nvars, trunc)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    /// Coefficient of `xn^k`, a polynomial in `x'`.
    pub fn coeff(&self, k: usize) -> MPoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| MPoly::zero(self.nvars - 1))
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    pub fn degree_xn(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Value at `x' = 0`.
    pub fn at_origin(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c.constant_term()).collect())
    }

    /// Drops all terms of `x'`-degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        let d = d.min(self.trunc);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.truncate_first(self.nvars - 1, d))
            .collect();
        Self::new(self.nvars, d, coeffs)
    }

    pub fn to_mpoly(&self) -> MPoly {
        let n = self.nvars;
        let lifted: Vec<MPoly> = self.coeffs.iter().map(|c| c.extend_vars(n)).collect();
        MPoly::from_univariate(n, n - 1, &lifted)
    }

    fn check_compatible(&self, o: &Self) -> Result<(), HenselError> {
        if self.nvars != o.nvars {
            return Err(HenselError::DimensionMismatch(self.nvars, o.nvars));
        }
        if self.trunc != o.trunc {
            return Err(HenselError::TruncationMismatch(self.trunc, o.trunc));
        }
        Ok(())
    }

    pub fn sub(&self, o: &Self) -> Result<Self, HenselError> {
        self.check_compatible(o)?;
        let len = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..len).map(|k| &self.coeff(k) - &o.coeff(k)).collect();
        Ok(Self::new(self.nvars, self.trunc, coeffs))
    }
}

/// Truncated product.
pub fn series_mul(a: &SeriesPoly, b: &SeriesPoly) -> Result<SeriesPoly, HenselError> {
    a.check_compatible(b)?;
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        return Ok(SeriesPoly::new(a.nvars, a.trunc, Vec::new()));
    }
    let m = a.nvars - 1;
    let mut out = vec![MPoly::zero(m); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in b.coeffs.iter().enumerate() {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &x.mul_truncated(y, m, a.trunc);
        }
    }
    Ok(SeriesPoly::new(a.nvars, a.trunc, out))
}

fn product(factors: &[&SeriesPoly], nvars: usize, trunc: u32) -> Result<SeriesPoly, HenselError> {
    let mut acc = SeriesPoly::one(nvars, trunc);
    for f in factors {
        acc = series_mul(&acc, f)?;
    }
    Ok(acc)
}

/// Lifts `H(0, ..., 0, xn) = seeds[0] * ... * seeds[s]` to `H = H0 * ... *
/// Hs` modulo `x'`-degree above `trunc`, with every `Hi` monic in `xn` and
/// `Hi(0, xn) = seeds[i]`.
pub fn hensel_lift(h: &MPoly, seeds: &[UPoly], trunc: u32) -> Result<Vec<SeriesPoly>, HenselError> {
    let n = h.nvars();
    let target = SeriesPoly::from_mpoly(h, trunc);
    if !target.is_monic() || target.degree_xn() == Some(0) {
        return Err(HenselError::NotMonicInLastVar);
    }
    if seeds.is_empty() || seeds.iter().any(|s| !s.is_monic()) {
        return Err(HenselError::SeedsNotCoprime);
    }
    let seed_product = seeds.iter().fold(UPoly::one(), |acc, s| &acc * s);
    if seed_product != target.at_origin() {
        return Err(HenselError::ProductMismatch);
    }
    // L_i = (prod_{j != i} seed_j)^(-1) mod seed_i
    let mut inverses = Vec::with_capacity(seeds.len());
    for (i, si) in seeds.iter().enumerate() {
        let others = seeds
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(UPoly::one(), |acc, (_, s)| &acc * s);
        let (g, inv, _) = others.ext_gcd(si);
        if !g.is_one() {
            return Err(HenselError::SeedsNotCoprime);
        }
        inverses.push(inv);
    }

    let mut factors: Vec<SeriesPoly> = seeds
        .iter()
        .map(|s| SeriesPoly::from_upoly(s, n, trunc))
        .collect();
    for d in 1..=trunc {
        let refs: Vec<&SeriesPoly> = factors.iter().collect();
        let err = target.sub(&product(&refs, n, trunc)?)?;
        // error component of x'-degree d, grouped by x'-monomial
        let mut by_monomial: BTreeMap<Vec<u32>, Vec<Rat>> = BTreeMap::new();
        for (k, c) in err.coeffs.iter().enumerate() {
            for (e, v) in c.homogeneous_component(d).terms() {
                let row = by_monomial
                    .entry(e.clone())
                    .or_insert_with(|| vec![Rat::zero(); err.coeffs.len()]);
                row[k] = v.clone();
            }
        }
        if by_monomial.is_empty() {
            continue;
        }
        for (i, fi) in factors.iter_mut().enumerate() {
            let mut coeffs = fi.coeffs.clone();
            for (e, row) in &by_monomial {
                let corr = (&UPoly::new(row.clone()) * &inverses[i]).rem(&seeds[i]);
                for (k, c) in corr.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if coeffs.len() <= k {
                        coeffs.resize(k + 1, MPoly::zero(n - 1));
                    }
                    coeffs[k] = &coeffs[k] + &MPoly::monomial(e.clone(), c.clone());
                }
            }
            *fi = SeriesPoly::new(n, trunc, coeffs);
        }
    }
    Ok(factors)
}

/// `A_I = prod_{i in I} Hi`, or with `complement` the product over
/// `{0, ..., s} \ I`. Indices in `subset` must lie in `1..=s`.
pub fn subset_product(
    factors: &[SeriesPoly],
    subset: &[usize],
    complement: bool,
) -> Result<SeriesPoly, HenselError> {
    if subset.is_empty() {
        return Err(HenselError::EmptySubset);
    }
    if let Some(&bad) = subset.iter().find(|&&i| i == 0 || i >= factors.len()) {
        return Err(HenselError::InvalidSubset(bad));
    }
    let chosen: Vec<&SeriesPoly> = factors
        .iter()
        .enumerate()
        .filter(|(i, _)| subset.contains(i) != complement)
        .map(|(_, f)| f)
        .collect();
    product(&chosen, factors[0].nvars, factors[0].trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn multiplication_examples() {
        let a = SeriesPoly::from_mpoly(&(&x(2, 1) + &x(2, 0)), 2);
        let b = SeriesPoly::from_mpoly(&(&x(2, 1) - &x(2, 0)), 2);
        let p = series_mul(&a, &b).unwrap();
        assert_eq!(p.to_mpoly(), &x(2, 1).pow(2) - &x(2, 0).pow(2));
        assert_eq!(series_mul(&a, &SeriesPoly::one(2, 2)).unwrap(), a);
        let c = SeriesPoly::from_mpoly(&(&MPoly::one(2) + &x(2, 0)), 1);
        let sq = series_mul(&c, &c).unwrap();
        assert_eq!(sq.to_mpoly(), &MPoly::one(2) + &x(2, 0).scale(&rat(2)));
        assert_eq!(
            series_mul(&a, &c),
            Err(HenselError::TruncationMismatch(2, 1))
        );
    }

    #[test]
    fn lift_hand_example() {
        let (x1, z) = (x(2, 0), x(2, 1));
        let h = &(&z.pow(2) + &z) + &x1;
        let seeds = [UPoly::x(), UPoly::from_ints(&[1, 1])];
        let f = hensel_lift(&h, &seeds, 2).unwrap();
        assert_eq!(f[0].to_mpoly(), &(&z + &x1) + &x1.pow(2));
        assert_eq!(
            f[1].to_mpoly(),
            &(&(&z + &MPoly::one(2)) - &x1) - &x1.pow(2)
        );
    }

    #[test]
    fn single_seed_is_truncation() {
        let (x1, z) = (x(2, 0), x(2, 1));
        let h = &(&z.pow(2) + &x1.pow(3)) + &MPoly::one(2);
        let f = hensel_lift(&h, &[UPoly::from_ints(&[1, 0, 1])], 2).unwrap();
        assert_eq!(f, vec![SeriesPoly::from_mpoly(&h, 2)]);
    }

    #[test]
    fn lift_errors() {
        let (x1, z) = (x(2, 0), x(2, 1));
        let h = &(&z.pow(2) + &z) + &x1;
        assert_eq!(
            hensel_lift(&h, &[UPoly::x(), UPoly::x()], 2),
            Err(HenselError::ProductMismatch)
        );
        let h2 = z.pow(2);
        assert_eq!(
            hensel_lift(&h2, &[UPoly::x(), UPoly::x()], 2),
            Err(HenselError::SeedsNotCoprime)
        );
        assert_eq!(
            hensel_lift(&(&x1 * &z), &[UPoly::x()], 2),
            Err(HenselError::NotMonicInLastVar)
        );
    }

    #[test]
    fn subsets() {
        let (x1, z) = (x(2, 0), x(2, 1));
        let h = &(&z.pow(2) + &z) + &x1;
        let f = hensel_lift(&h, &[UPoly::x(), UPoly::from_ints(&[1, 1])], 3).unwrap();
        assert_eq!(subset_product(&f, &[1], false).unwrap(), f[1]);
        assert_eq!(subset_product(&f, &[1], true).unwrap(), f[0]);
        assert_eq!(
            subset_product(&f, &[], false),
            Err(HenselError::EmptySubset)
        );
        assert_eq!(
            subset_product(&f, &[2], false),
            Err(HenselError::InvalidSubset(2))
        );
    }
}
