//! Canonical reduced fractions of multivariate polynomials.

use std::fmt;

use num_traits::{Signed, Zero};

use super::gcd::gcd_mpoly;
use super::mpoly::MPoly;
use super::rat::{primitive_scale, Rat};
use super::AlgebraError;

/// Reduced fraction `num / den` in canonical form: `gcd(num, den) = 1`, all
/// coefficients of `num` and `den` are integers with no common factor, and
/// `den` has a positive graded-lex leading coefficient. Equality is
/// structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

/// Canonical form of `g / h`.
pub fn reduce_fraction(g: &MPoly, h: &MPoly) -> Result<RatFun, AlgebraError> {
    if h.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    assert_eq!(g.nvars(), h.nvars(), "variable count mismatch");
    let n = g.nvars();
    if g.is_zero() {
        return Ok(RatFun {
            num: MPoly::zero(n),
            den: MPoly::one(n),
        });
    }
    let (g, h) = if h.is_constant() {
        (g.clone(), h.clone())
    } else {
        let c = gcd_mpoly(g, h);
        (
            g.div_exact(&c).expect("gcd divides numerator"),
            h.div_exact(&c).expect("gcd divides denominator"),
        )
    };
    let coeffs: Vec<&Rat> = g.terms().chain(h.terms()).map(|(_, c)| c).collect();
    let mut scale = primitive_scale(coeffs.iter().copied());
    if h.leading_coeff().is_negative() {
        scale = -scale;
    }
    Ok(RatFun {
        num: g.scale(&scale),
        den: h.scale(&scale),
    })
}

impl RatFun {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, AlgebraError> {
        reduce_fraction(&num, &den)
    }

    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars();
        RatFun {
            num: p,
            den: MPoly::one(n),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn into_parts(self) -> (MPoly, MPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value at `p`; `Ok(None)` when the denominator vanishes there.
    pub fn eval(&self, p: &[Rat]) -> Result<Option<Rat>, AlgebraError> {
        let d = self.den.eval(p)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval(p)? / d))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return reduce_fraction(&(&self.num + &o.num), &self.den).expect("nonzero den");
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        reduce_fraction(&num, &(&self.den * &o.den)).expect("nonzero den")
    }

    pub fn neg(&self) -> Self {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        reduce_fraction(&(&self.num * &o.num), &(&self.den * &o.den)).expect("nonzero den")
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        reduce_fraction(&(&self.num * &o.den), &(&self.den * &o.num))
    }

    pub fn pow(&self, k: u32) -> Self {
        // powers of coprime polynomials stay coprime
        RatFun {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        format!(
            "({}) / ({})",
            self.num.display_with(names),
            self.den.display_with(names)
        )
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}
