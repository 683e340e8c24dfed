//! Expression language for total black-box functions, sample tables, and
//! the oracles built from them.
//!
//! ```text
//! spec  := "vars" ident+ ";" expr ["default" rational]
//! expr  := "if" guard ("&&" guard)* "then" expr "else" expr | sum
//! guard := sum "==" "0"
//! sum   := prod (("+" | "-") prod)*
//! prod  := unary (("*" | "/") unary)*
//! unary := "-" unary | pow
//! pow   := atom ["^" nat]
//! atom  := integer | ident | "(" expr ")"
//! ```

mod parser;
mod table;

use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::rat::fmt_rat;
use crate::algebra::{MPoly, Rat, RatFun};
use crate::oracle::{Oracle, OracleError};

pub use parser::{parse_body, parse_expression};
pub use table::{oracle_from_table, SampleTable, TableOracle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("undeclared identifier '{name}' at line {line}, column {col}")]
    UndeclaredIdentifier {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("guard at line {line}, column {col} is a nonzero constant")]
    ConstantGuard { line: usize, col: usize },
    #[error("expression contains conditionals and is not a single rational function")]
    HasGuards,
    #[error("division by the zero function")]
    DivisionByZeroFunction,
    #[error("expression is not a polynomial")]
    NotPolynomial,
    #[error("sample table: {0}")]
    Table(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    If {
        guards: Vec<Expr>,
        then: Box<Expr>,
        other: Box<Expr>,
    },
}

struct DivByZero;

impl Expr {
    /// Division, folding a quotient of two literals into one literal.
    pub fn quotient(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Num(p), Expr::Num(q)) if !q.is_zero() => Expr::Num(p / q),
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    /// Negation, folding negated literals.
    pub fn negated(a: Expr) -> Expr {
        match a {
            Expr::Num(p) => Expr::Num(-p),
            other => Expr::Neg(Box::new(other)),
        }
    }

    fn has_vars(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(_) | Expr::If { .. } => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_vars() || b.has_vars()
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_vars(),
        }
    }

    /// Value of a variable-free expression, if it is defined.
    pub fn constant_value(&self) -> Option<Rat> {
        if self.has_vars() {
            return None;
        }
        self.eval(&[]).ok()
    }

    fn eval(&self, p: &[Rat]) -> Result<Rat, DivByZero> {
        Ok(match self {
            Expr::Num(c) => c.clone(),
            Expr::Var(i) => p[*i].clone(),
            Expr::Add(a, b) => a.eval(p)? + b.eval(p)?,
            Expr::Sub(a, b) => a.eval(p)? - b.eval(p)?,
            Expr::Mul(a, b) => a.eval(p)? * b.eval(p)?,
            Expr::Div(a, b) => {
                let d = b.eval(p)?;
                if d.is_zero() {
                    return Err(DivByZero);
                }
                a.eval(p)? / d
            }
            Expr::Neg(a) => -a.eval(p)?,
            Expr::Pow(a, k) => num_traits::pow(a.eval(p)?, *k as usize),
            Expr::If {
                guards,
                then,
                other,
            } => {
                let mut all = true;
                for g in guards {
                    if !g.eval(p)?.is_zero() {
                        all = false;
                        break;
                    }
                }
                if all {
                    then.eval(p)?
                } else {
                    other.eval(p)?
                }
            }
        })
    }

    /// The rational function of a guard-free expression in `nvars` variables.
    pub fn to_ratfun(&self, nvars: usize) -> Result<RatFun, FrontendError> {
        Ok(match self {
            Expr::Num(c) => RatFun::constant(nvars, c.clone()),
            Expr::Var(i) => RatFun::from_poly(MPoly::var(nvars, *i)),
            Expr::Add(a, b) => a.to_ratfun(nvars)?.add(&b.to_ratfun(nvars)?),
            Expr::Sub(a, b) => a.to_ratfun(nvars)?.sub(&b.to_ratfun(nvars)?),
            Expr::Mul(a, b) => a.to_ratfun(nvars)?.mul(&b.to_ratfun(nvars)?),
            Expr::Div(a, b) => a
                .to_ratfun(nvars)?
                .div(&b.to_ratfun(nvars)?)
                .map_err(|_| FrontendError::DivisionByZeroFunction)?,
            Expr::Neg(a) => a.to_ratfun(nvars)?.neg(),
            Expr::Pow(a, k) => a.to_ratfun(nvars)?.pow(*k),
            Expr::If { .. } => return Err(FrontendError::HasGuards),
        })
    }

    fn print(&self, vars: &[String], out: &mut String) {
        let bin = |out: &mut String, a: &Expr, op: &str, b: &Expr| {
            out.push('(');
            a.print(vars, out);
            let _ = write!(out, " {op} ");
            b.print(vars, out);
            out.push(')');
        };
        match self {
            Expr::Num(c) => {
                if c.is_integer() && !c.numer().sign().eq(&num_bigint::Sign::Minus) {
                    out.push_str(&fmt_rat(c));
                } else {
                    let _ = write!(out, "({})", fmt_rat(c));
                }
            }
            Expr::Var(i) => out.push_str(&vars[*i]),
            Expr::Add(a, b) => bin(out, a, "+", b),
            Expr::Sub(a, b) => bin(out, a, "-", b),
            Expr::Mul(a, b) => bin(out, a, "*", b),
            Expr::Div(a, b) => bin(out, a, "/", b),
            Expr::Neg(a) => {
                out.push_str("(-");
                a.print(vars, out);
                out.push(')');
            }
            Expr::Pow(a, k) => {
                out.push('(');
                a.print(vars, out);
                let _ = write!(out, "^{k})");
            }
            Expr::If {
                guards,
                then,
                other,
            } => {
                out.push_str("(if ");
                for (i, g) in guards.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" && ");
                    }
                    g.print(vars, out);
                    out.push_str(" == 0");
                }
                out.push_str(" then ");
                then.print(vars, out);
                out.push_str(" else ");
                other.print(vars, out);
                out.push(')');
            }
        }
    }
}

/// A parsed specification: declared variables, body, optional value used
/// wherever the taken branch divides by zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    pub vars: Vec<String>,
    pub body: Expr,
    pub default: Option<Rat>,
}

impl OracleSpec {
    /// Canonical text; parsing it gives back an equal specification.
    pub fn print(&self) -> String {
        let mut out = format!("vars {};", self.vars.join(" "));
        out.push(' ');
        self.body.print(&self.vars, &mut out);
        if let Some(d) = &self.default {
            let _ = write!(out, " default {}", fmt_rat(d));
        }
        out
    }

    pub fn to_ratfun(&self) -> Result<RatFun, FrontendError> {
        self.body.to_ratfun(self.vars.len())
    }
}

pub fn eval_oracle(spec: &OracleSpec, p: &[Rat]) -> Result<Rat, OracleError> {
    if p.len() != spec.vars.len() {
        return Err(OracleError::DimensionMismatch {
            expected: spec.vars.len(),
            found: p.len(),
        });
    }
    match spec.body.eval(p) {
        Ok(v) => Ok(v),
        Err(DivByZero) => spec
            .default
            .clone()
            .ok_or(OracleError::DivisionByZeroWithoutDefault),
    }
}

impl Oracle for OracleSpec {
    fn dim(&self) -> usize {
        self.vars.len()
    }

    fn eval(&self, p: &[Rat]) -> Result<Rat, OracleError> {
        eval_oracle(self, p)
    }
}

/// A polynomial written in the expression grammar over `vars`.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<MPoly, FrontendError> {
    let r = parse_body(text, vars)?.to_ratfun(vars.len())?;
    let c = r
        .den()
        .constant_value()
        .ok_or(FrontendError::NotPolynomial)?;
    Ok(r.num().scale(&c.recip()))
}
