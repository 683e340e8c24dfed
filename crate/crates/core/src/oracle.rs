//! Black-box function interfaces and adapters.

use thiserror::Error;

use crate::algebra::{AffineLine, Rat, RatFun};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("point has {found} coordinates, oracle expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("division by zero and no default value declared")]
    DivisionByZeroWithoutDefault,
    #[error("point {0} is not covered by the sample table")]
    PointNotCovered(String),
}

/// Deterministic, side-effect free function `Q^n -> Q`.
pub trait Oracle: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, p: &[Rat]) -> Result<Rat, OracleError>;
}

/// Deterministic univariate function, e.g. a restriction to a line.
pub trait LineOracle {
    fn value(&self, t: &Rat) -> Result<Rat, OracleError>;
}

impl<F> LineOracle for F
where
    F: Fn(&Rat) -> Result<Rat, OracleError>,
{
    fn value(&self, t: &Rat) -> Result<Rat, OracleError> {
        self(t)
    }
}

fn check_dim(expected: usize, p: &[Rat]) -> Result<(), OracleError> {
    if p.len() != expected {
        return Err(OracleError::DimensionMismatch {
            expected,
            found: p.len(),
        });
    }
    Ok(())
}

/// Evaluates a rational function, returning zero where its denominator
/// vanishes so that the oracle is total.
#[derive(Clone, Debug)]
pub struct RatFunOracle(pub RatFun);

impl Oracle for RatFunOracle {
    fn dim(&self) -> usize {
        self.0.nvars()
    }

    fn eval(&self, p: &[Rat]) -> Result<Rat, OracleError> {
        check_dim(self.dim(), p)?;
        Ok(self
            .0
            .eval(p)
            .expect("dimension checked")
            .unwrap_or_else(|| Rat::from_integer(0.into())))
    }
}

/// Wraps a closure as an oracle of fixed dimension.
pub struct FnOracle<F> {
    dim: usize,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&[Rat]) -> Result<Rat, OracleError> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnOracle { dim, f }
    }
}

impl<F> Oracle for FnOracle<F>
where
    F: Fn(&[Rat]) -> Result<Rat, OracleError> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, p: &[Rat]) -> Result<Rat, OracleError> {
        check_dim(self.dim, p)?;
        (self.f)(p)
    }
}

/// `x' -> f(x', c)`: fixes the last coordinate.
pub struct LastSlice<'a> {
    inner: &'a dyn Oracle,
    value: Rat,
}

impl<'a> LastSlice<'a> {
    pub fn new(inner: &'a dyn Oracle, value: Rat) -> Self {
        LastSlice { inner, value }
    }
}

impl Oracle for LastSlice<'_> {
    fn dim(&self) -> usize {
        self.inner.dim() - 1
    }

    fn eval(&self, p: &[Rat]) -> Result<Rat, OracleError> {
        check_dim(self.dim(), p)?;
        let mut q = p.to_vec();
        q.push(self.value.clone());
        self.inner.eval(&q)
    }
}

/// `t -> f(x', t)` for a fixed `x'`.
pub struct AxisLine<'a> {
    inner: &'a dyn Oracle,
    prefix: Vec<Rat>,
}

impl<'a> AxisLine<'a> {
    pub fn new(inner: &'a dyn Oracle, prefix: Vec<Rat>) -> Self {
        AxisLine { inner, prefix }
    }
}

impl LineOracle for AxisLine<'_> {
    fn value(&self, t: &Rat) -> Result<Rat, OracleError> {
        let mut q = self.prefix.clone();
        q.push(t.clone());
        self.inner.eval(&q)
    }
}

/// `t -> f(base + t * dir)`.
pub struct OnLine<'a> {
    inner: &'a dyn Oracle,
    line: AffineLine,
}

impl<'a> OnLine<'a> {
    pub fn new(inner: &'a dyn Oracle, line: AffineLine) -> Result<Self, OracleError> {
        if line.dim() != inner.dim() {
            return Err(OracleError::DimensionMismatch {
                expected: inner.dim(),
                found: line.dim(),
            });
        }
        Ok(OnLine { inner, line })
    }
}

impl LineOracle for OnLine<'_> {
    fn value(&self, t: &Rat) -> Result<Rat, OracleError> {
        self.inner.eval(&self.line.point(t))
    }
}
