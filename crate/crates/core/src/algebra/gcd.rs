//! Multivariate gcd by recursive primitive polynomial remainder sequences,
//! eliminating one variable at a time.

use super::mpoly::MPoly;

/// Greatest common divisor, normalized to coprime integer coefficients with
/// a positive graded-lex leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd_mpoly(a: &MPoly, b: &MPoly) -> MPoly {
    normalize(raw_gcd(a, b))
}

/// Content with respect to `var`: gcd of the coefficients of `p` viewed as
/// a polynomial in `var`.
pub fn content_in(p: &MPoly, var: usize) -> MPoly {
    let mut coeffs: Vec<MPoly> = p
        .to_univariate(var)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    if coeffs.is_empty() {
        return MPoly::zero(p.nvars());
    }
    coeffs.sort_by_key(|c| (c.num_terms(), c.degree()));
    let mut g = normalize(coeffs[0].clone());
    for c in &coeffs[1..] {
        if g.is_constant() {
            break;
        }
        if c.div_exact(&g).is_some() {
            continue;
        }
        g = normalize(raw_gcd(&g, c));
    }
    g
}

fn normalize(p: MPoly) -> MPoly {
    if p.is_zero() {
        return p;
    }
    if p.is_constant() {
        return MPoly::one(p.nvars());
    }
    p.primitive_integer().1
}

fn main_var(a: &MPoly, b: &MPoly) -> Option<usize> {
    (0..a.nvars())
        .rev()
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

fn raw_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    assert_eq!(a.nvars(), b.nvars(), "variable count mismatch");
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(a.nvars());
    }
    let (small, large) = if a.num_terms() <= b.num_terms() {
        (a, b)
    } else {
        (b, a)
    };
    if large.div_exact(small).is_some() {
        return small.clone();
    }
    let v = match main_var(a, b) {
        Some(v) => v,
        None => return MPoly::one(a.nvars()),
    };
    if a.degree_in(v) == 0 {
        return raw_gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return raw_gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = raw_gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, v);
    &c * &g
}

/// Last nonzero term of the primitive PRS of two polynomials that are
/// primitive in `v`.
fn primitive_prs(a: MPoly, b: MPoly, v: usize) -> MPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    a = normalize(a);
    b = normalize(b);
    loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == 0 {
            return MPoly::one(a.nvars());
        }
        let c = content_in(&r, v);
        let r = normalize(r.div_exact(&c).expect("content divides"));
        a = b;
        b = r;
    }
}

/// Sparse pseudo-remainder of `a` by `b` in `K[...][v]`.
pub fn pseudo_rem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let n = a.nvars();
    let mut ac = a.to_univariate(v);
    let bc = b.to_univariate(v);
    let db = bc.len() - 1;
    let lb = &bc[db];
    while ac.len() > db {
        let k = ac.len() - 1;
        let la = ac[k].clone();
        for c in ac.iter_mut().take(k) {
            *c = &*c * lb;
        }
        ac[k] = MPoly::zero(n);
        for (j, bj) in bc.iter().enumerate().take(db) {
            let t = &la * bj;
            ac[k - db + j] = &ac[k - db + j] - &t;
        }
        while ac.last().is_some_and(|c| c.is_zero()) {
            ac.pop();
        }
    }
    MPoly::from_univariate(n, v, &ac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn coprime_pair() {
        let xy = &x(2, 0) * &x(2, 1);
        let q = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        assert!(gcd_mpoly(&xy, &q).is_one());
    }

    #[test]
    fn gcd_with_self_is_normalized() {
        let f = &x(2, 0).scale(&rat(-4)) + &MPoly::constant(2, rat(6));
        let g = gcd_mpoly(&f, &f);
        assert_eq!(g, &x(2, 0).scale(&rat(2)) - &MPoly::constant(2, rat(3)));
    }

    #[test]
    fn zero_cases() {
        assert!(gcd_mpoly(&MPoly::zero(2), &MPoly::zero(2)).is_zero());
        let f = &x(2, 0) + &x(2, 1);
        assert_eq!(gcd_mpoly(&MPoly::zero(2), &f.scale(&rat(-3))), f);
    }

    #[test]
    fn shared_factor_three_vars() {
        let s = &x(3, 0) + &x(3, 1);
        let f = &(&x(3, 2).pow(2) - &(&x(3, 0) * &x(3, 1))) * &s;
        let g = &(&x(3, 2) + &MPoly::one(3)) * &s;
        assert_eq!(gcd_mpoly(&f, &g), s);
        let h = &s.pow(2) * &x(3, 2);
        assert_eq!(gcd_mpoly(&f, &h), s);
    }
}
