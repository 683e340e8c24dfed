//! Integer polynomial arithmetic, multifactor Hensel lifting modulo `p^k`
//! and factor recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{Fp, Poly};

/// Integer coefficients, lowest degree first, trimmed.
pub(crate) type ZPoly = Vec<BigInt>;

fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn zadd_scaled(a: &ZPoly, b: &Poly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + m * BigInt::from(b.get(i).copied().unwrap_or(0)))
            .collect(),
    )
}

fn lift_poly(a: &Poly) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Symmetric residues in `(-m/2, m/2]`.
pub(crate) fn symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half: BigInt = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Exact quotient by a monic divisor, `None` if it does not divide.
pub(crate) fn div_monic(a: &ZPoly, d: &ZPoly) -> Option<ZPoly> {
    let dd = d.len() - 1;
    debug_assert!(d[dd].is_one());
    if a.len() <= dd {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - dd];
    for k in (dd..a.len()).rev() {
        let c = r[k].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in d.iter().enumerate() {
            r[k - dd + j] -= &c * dj;
        }
        q[k - dd] = c;
    }
    r[..dd].iter().all(|c| c.is_zero()).then(|| trim(q))
}

/// Lifts `f = g0 * h0 (mod p)` with coprime monic `g0, h0` to `f = g * h
/// (mod p^k)`, `g, h` monic.
fn lift_pair(fp: &Fp, f: &ZPoly, g0: &Poly, h0: &Poly, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = fp.ext_gcd(g0, h0);
    debug_assert_eq!(one, vec![1]);
    let p = BigInt::from(fp.p);
    let mut g = lift_poly(g0);
    let mut h = lift_poly(h0);
    let mut pj = p.clone();
    for _ in 1..k {
        let diff = zsub(f, &zmul(&g, &h));
        let e: ZPoly = diff
            .iter()
            .map(|c| {
                debug_assert!(c.is_multiple_of(&pj));
                c / &pj
            })
            .collect();
        let e = fp.reduce_ints(&e);
        let sigma = fp.rem(&fp.mul(&e, &s), h0);
        let tau = fp.rem(&fp.mul(&e, &t), g0);
        g = zadd_scaled(&g, &tau, &pj);
        h = zadd_scaled(&h, &sigma, &pj);
        pj *= &p;
    }
    (g, h)
}

/// Lifts a factorization of the monic integer polynomial `f` into pairwise
/// coprime monic factors modulo `p` to one modulo `p^k`, in symmetric
/// representation.
pub(crate) fn hensel_lift(fp: &Fp, f: &ZPoly, factors: &[Poly], k: u32) -> Vec<ZPoly> {
    let m = BigInt::from(fp.p).pow(k);
    let mut out = Vec::with_capacity(factors.len());
    let mut target = f.clone();
    for i in 0..factors.len() - 1 {
        let rest = factors[i + 1..]
            .iter()
            .fold(vec![1u64], |acc, q| fp.mul(&acc, q));
        let (g, h) = lift_pair(fp, &target, &factors[i], &rest, k);
        out.push(symmetric(&g, &m));
        target = symmetric(&h, &m);
    }
    out.push(target);
    out
}

/// Splits the monic integer polynomial `f` into its monic irreducible
/// integer factors, given its lifted modular factors modulo `m`, which must
/// exceed twice any factor coefficient.
pub(crate) fn recombine(f: &ZPoly, lifted: Vec<ZPoly>, m: &BigInt) -> Vec<ZPoly> {
    let mut remaining = lifted;
    let mut f = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let prod = subset.iter().fold(vec![BigInt::one()], |acc, &i| {
                symmetric(&zmul(&acc, &remaining[i]), m)
            });
            if let Some(q) = div_monic(&f, &prod) {
                found.push(prod);
                f = q;
                for &i in subset.iter().rev() {
                    remaining.remove(i);
                }
                continue 'outer;
            }
            if !next_subset(&mut subset, remaining.len()) {
                break;
            }
        }
        size += 1;
    }
    if f.len() > 1 {
        found.push(f);
    }
    found
}

/// Advances `s` to the next `s.len()`-subset of `0..n` in lexicographic
/// order.
fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Upper bound on the coefficients of any integer factor of `f`.
pub(crate) fn factor_coefficient_bound(f: &ZPoly) -> BigInt {
    let l1: BigInt = f.iter().map(|c| c.abs()).sum();
    (BigInt::one() << (f.len().saturating_sub(1))) * l1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> ZPoly {
        trim(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn subsets_enumerate_all() {
        let mut s = vec![0, 1];
        let mut count = 1;
        while next_subset(&mut s, 4) {
            count += 1;
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn lift_and_recombine_x4_minus_4() {
        // x^4 - 4 = (x^2 - 2)(x^2 + 2); mod 3 it splits as (x^2+1)(x+1)(x+2)
        let f = z(&[-4, 0, 0, 0, 1]);
        let fp = Fp { p: 3 };
        let factors = vec![vec![1, 0, 1], vec![1, 1], vec![2, 1]];
        let k = 6;
        let m = BigInt::from(3).pow(k);
        let lifted = hensel_lift(&fp, &f, &factors, k);
        let prod = lifted
            .iter()
            .fold(z(&[1]), |acc, q| symmetric(&zmul(&acc, q), &m));
        assert_eq!(prod, f);
        let mut got = recombine(&f, lifted, &m);
        got.sort();
        assert_eq!(got, vec![z(&[-2, 0, 1]), z(&[2, 0, 1])]);
    }
}
