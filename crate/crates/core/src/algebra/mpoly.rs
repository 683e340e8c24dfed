//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{fmt_rat, primitive_scale, rat_pow, Rat};
use super::AlgebraError;

/// Exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

/// Sparse polynomial in `nvars` variables. Terms are keyed by exponent
/// vector and never store a zero coefficient, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rat>,
}

/// Graded-lexicographic comparison of exponent vectors.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn total(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The polynomial `x_{var+1}` (variables are zero-indexed).
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exps: Exponents, c: Rat) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from possibly repeated terms, summing duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| total(e)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Total degree in the variables `0..k` only.
    pub fn degree_in_first(&self, k: usize) -> u32 {
        self.terms.keys().map(|e| total(&e[..k])).max().unwrap_or(0)
    }

    /// Lowest total degree of a term; zero for the zero polynomial.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|e| total(e)).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| total(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Leading term under graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rat)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by the monomial `x^e`.
    pub fn shift(&self, e: &[u32]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.iter().zip(e).map(|(a, b)| a + b).collect(), v.clone()))
                .collect(),
        }
    }

    /// Multiplies and drops every term whose total degree in the variables
    /// `0..k` exceeds `bound`.
    pub fn mul_truncated(&self, other: &Self, k: usize, bound: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            let da = total(&ea[..k]);
            if da > bound {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + total(&eb[..k]) > bound {
                    continue;
                }
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Drops terms whose total degree in variables `0..k` exceeds `bound`.
    pub fn truncate_first(&self, k: usize, bound: u32) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(&e[..k]) <= bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Rat>> = point.iter().map(|p| vec![Rat::one(), p.clone()]).collect();
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= k as usize {
                    let next = &pw[pw.len() - 1] * &point[i];
                    pw.push(next);
                }
                t *= &pw[k as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes `value` for variable `var`, removing it: the result has
    /// one variable fewer.
    pub fn specialize(&self, var: usize, value: &Rat) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne.remove(var);
            out.add_term(ne, c * rat_pow(value, k));
        }
        out
    }

    /// Re-embeds into `nvars` variables, keeping the existing variables first.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        MPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = e.clone();
                    ne.resize(nvars, 0);
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    /// Drops trailing variables that must not occur.
    pub fn truncate_vars(&self, nvars: usize) -> Self {
        assert!(nvars <= self.nvars);
        MPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    debug_assert!(e[nvars..].iter().all(|&x| x == 0));
                    (e[..nvars].to_vec(), c.clone())
                })
                .collect(),
        }
    }

    /// Coefficients with respect to `var`, lowest power first. Each
    /// coefficient keeps `nvars` variables but no longer involves `var`.
    pub fn to_univariate(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.nvars); if self.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut ne = e.clone();
            ne[var] = 0;
            out[k].terms.insert(ne, c.clone());
        }
        out
    }

    pub fn from_univariate(nvars: usize, var: usize, coeffs: &[MPoly]) -> Self {
        let mut out = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, v) in &c.terms {
                debug_assert_eq!(e[var], 0);
                let mut ne = e.clone();
                ne[var] = k as u32;
                out.add_term(ne, v.clone());
            }
        }
        out
    }

    /// Degree-`d` homogeneous part (possibly zero).
    pub fn homogeneous_component(&self, d: u32) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Lowest-degree nonzero homogeneous component.
    pub fn initial_form(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroInput("initial form"));
        }
        Ok(self.homogeneous_component(self.order()))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.nvars, d.nvars, "variable count mismatch");
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        for v in 0..self.nvars {
            if d.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let (ld, lc) = d
            .terms
            .last_key_value()
            .map(|(e, c)| (e.clone(), c.clone()))?;
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        while let Some((e, c)) = rem.terms.last_key_value() {
            if e.iter().zip(&ld).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponents = e.iter().zip(&ld).map(|(a, b)| a - b).collect();
            let qc = c * &lc_inv;
            for (de, dc) in &d.terms {
                let te: Exponents = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(te, -(dc * &qc));
            }
            quo.terms.insert(qe, qc);
        }
        Some(quo)
    }

    /// Division with remainder in `K[x1..x(n-1)][xn]` by a divisor that is
    /// monic in the last variable: `self = q * h + r` with `deg_xn r < deg_xn h`.
    pub fn divmod_last(&self, h: &Self) -> Result<(Self, Self), AlgebraError> {
        assert_eq!(self.nvars, h.nvars, "variable count mismatch");
        let n = self.nvars;
        let last = n - 1;
        let hc = h.to_univariate(last);
        let dh = hc.len().saturating_sub(1);
        if hc.is_empty() || dh == 0 || !hc[dh].is_one() {
            return Err(AlgebraError::NotMonicInLastVar);
        }
        let mut rc = self.to_univariate(last);
        if rc.len() <= dh {
            return Ok((Self::zero(n), self.clone()));
        }
        let mut qc = vec![Self::zero(n); rc.len() - dh];
        for k in (dh..rc.len()).rev() {
            let lead = std::mem::replace(&mut rc[k], Self::zero(n));
            if lead.is_zero() {
                continue;
            }
            for (j, hj) in hc.iter().enumerate().take(dh) {
                let t = &lead * hj;
                rc[k - dh + j] = &rc[k - dh + j] - &t;
            }
            qc[k - dh] = lead;
        }
        rc.truncate(dh);
        Ok((
            Self::from_univariate(n, last, &qc),
            Self::from_univariate(n, last, &rc),
        ))
    }

    /// `(c, c * self)` with `c * self` having coprime integer coefficients and
    /// a positive graded-lex leading coefficient.
    pub fn primitive_integer(&self) -> (Rat, Self) {
        if self.is_zero() {
            return (Rat::one(), self.clone());
        }
        let mut c = primitive_scale(self.terms.values());
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c))
    }

    /// Composition `self(images[0], ..., images[n-1])`.
    pub fn compose(&self, images: &[MPoly]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut cache: Vec<Vec<MPoly>> = images
            .iter()
            .map(|p| vec![MPoly::one(target), p.clone()])
            .collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
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
        out
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> MPolyDisplay<'a> {
        MPolyDisplay { poly: self, names }
    }
}

/// Default variable names `x1..xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub struct MPolyDisplay<'a> {
    poly: &'a MPoly,
    names: &'a [String],
}

impl fmt::Display for MPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.poly.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        self.names[v].clone()
                    } else {
                        format!("{}^{}", self.names[v], k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_rat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else if mag.denom().is_one() {
                write!(f, "{}*{}", fmt_rat(&mag), vars.join("*"))?;
            } else {
                write!(f, "({})*{}", fmt_rat(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        write!(f, "{}", self.display_with(&names))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.nvars, self)
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}
