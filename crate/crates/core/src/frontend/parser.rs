//! Lexer and recursive-descent parser for oracle specifications.

use num_traits::Zero;

use super::{Expr, FrontendError, OracleSpec};
use crate::algebra::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(num_bigint::BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semi,
    EqEq,
    AndAnd,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Semi => "';'".into(),
            Tok::EqEq => "'=='".into(),
            Tok::AndAnd => "'&&'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, FrontendError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' | '\u{00b7}' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        let tok = if let Some(t) = single {
            i += 1;
            col += 1;
            t
        } else if c == '=' && chars.get(i + 1) == Some(&'=') {
            i += 2;
            col += 2;
            Tok::EqEq
        } else if c == '&' && chars.get(i + 1) == Some(&'&') {
            i += 2;
            col += 2;
            Tok::AndAnd
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
                col += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
                col += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            return Err(FrontendError::Syntax {
                line: l0,
                col: c0,
                message: format!("unexpected character '{c}'"),
            });
        };
        out.push(Spanned {
            tok,
            line: l0,
            col: c0,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: Vec<String>,
}

const KEYWORDS: [&str; 5] = ["vars", "if", "then", "else", "default"];

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, FrontendError> {
        let t = self.peek();
        Err(FrontendError::Syntax {
            line: t.line,
            col: t.col,
            message: format!("expected {expected}, found {}", t.tok.describe()),
        })
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), FrontendError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("'{kw}'"))
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FrontendError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&tok.describe())
        }
    }

    fn spec(&mut self) -> Result<OracleSpec, FrontendError> {
        self.expect_keyword("vars")?;
        while let Tok::Ident(name) = self.peek().tok.clone() {
            if KEYWORDS.contains(&name.as_str()) {
                return self.error("a variable name");
            }
            if self.vars.contains(&name) {
                let t = self.peek();
                return Err(FrontendError::Syntax {
                    line: t.line,
                    col: t.col,
                    message: format!("variable '{name}' declared twice"),
                });
            }
            self.vars.push(name);
            self.bump();
        }
        if self.vars.is_empty() {
            return self.error("a variable name");
        }
        self.expect(Tok::Semi)?;
        let body = self.expr()?;
        let default = if self.is_keyword("default") {
            self.bump();
            Some(self.rational()?)
        } else {
            None
        };
        if self.peek().tok != Tok::End {
            return self.error("end of input");
        }
        Ok(OracleSpec {
            vars: std::mem::take(&mut self.vars),
            body,
            default,
        })
    }

    fn rational(&mut self) -> Result<Rat, FrontendError> {
        let neg = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let Tok::Int(p) = self.peek().tok.clone() else {
            return self.error("a rational number");
        };
        self.bump();
        let mut q = num_bigint::BigInt::from(1);
        if self.peek().tok == Tok::Slash {
            self.bump();
            let Tok::Int(d) = self.peek().tok.clone() else {
                return self.error("a denominator");
            };
            if d.is_zero() {
                return self.error("a nonzero denominator");
            }
            self.bump();
            q = d;
        }
        let r = Rat::new(p, q);
        Ok(if neg { -r } else { r })
    }

    fn expr(&mut self) -> Result<Expr, FrontendError> {
        if !self.is_keyword("if") {
            return self.sum();
        }
        self.bump();
        let mut guards = vec![self.guard()?];
        while self.peek().tok == Tok::AndAnd {
            self.bump();
            guards.push(self.guard()?);
        }
        self.expect_keyword("then")?;
        let then = self.expr()?;
        self.expect_keyword("else")?;
        let other = self.expr()?;
        Ok(Expr::If {
            guards,
            then: Box::new(then),
            other: Box::new(other),
        })
    }

    fn guard(&mut self) -> Result<Expr, FrontendError> {
        let start = self.peek().clone();
        let g = self.sum()?;
        self.expect(Tok::EqEq)?;
        match &self.peek().tok {
            Tok::Int(z) if z.is_zero() => {
                self.bump();
            }
            _ => return self.error("'0'"),
        }
        if let Some(c) = g.constant_value() {
            if !c.is_zero() {
                return Err(FrontendError::ConstantGuard {
                    line: start.line,
                    col: start.col,
                });
            }
        }
        Ok(g)
    }

    fn sum(&mut self) -> Result<Expr, FrontendError> {
        let mut acc = self.prod()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.prod()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.prod()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn prod(&mut self) -> Result<Expr, FrontendError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    acc = Expr::quotient(acc, self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, FrontendError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::negated(self.unary()?));
        }
        self.pow()
    }

    fn pow(&mut self) -> Result<Expr, FrontendError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let Tok::Int(k) = self.peek().tok.clone() else {
            return self.error("a natural exponent");
        };
        let Ok(k) = u32::try_from(&k) else {
            return self.error("an exponent below 2^32");
        };
        self.bump();
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<Expr, FrontendError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                let Some(i) = self.vars.iter().position(|v| *v == name) else {
                    return Err(FrontendError::UndeclaredIdentifier {
                        name,
                        line: t.line,
                        col: t.col,
                    });
                };
                self.bump();
                Ok(Expr::Var(i))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => self.error("a number, variable or '('"),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<OracleSpec, FrontendError> {
    let toks = lex(text)?;
    Parser {
        toks,
        pos: 0,
        vars: Vec::new(),
    }
    .spec()
}

/// Parses a guard-free expression over the given variables.
pub fn parse_body(text: &str, vars: &[String]) -> Result<Expr, FrontendError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars: vars.to_vec(),
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return p.error("end of input");
    }
    Ok(e)
}
