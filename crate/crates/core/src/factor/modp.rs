//! Dense polynomials over a small prime field, with distinct-degree and
//! equal-degree factorization.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

/// Coefficients lowest degree first, trimmed, each in `0..p`.
pub(crate) type Poly = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp {
    pub p: u64,
}

pub(crate) fn deg(a: &Poly) -> Option<usize> {
    a.len().checked_sub(1)
}

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

impl Fp {
    fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn powm(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulm(acc, b);
            }
            b = self.mulm(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.powm(a, self.p - 2)
    }

    pub fn reduce(&self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits")
    }

    pub fn reduce_ints(&self, a: &[BigInt]) -> Poly {
        trim(a.iter().map(|c| self.reduce(c)).collect())
    }

    #[cfg(test)]
    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    (a.get(i).copied().unwrap_or(0) + self.p - b.get(i).copied().unwrap_or(0))
                        % self.p
                })
                .collect(),
        )
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mulm(x, y)) % self.p;
            }
        }
        trim(out)
    }

    pub fn scale(&self, a: &Poly, c: u64) -> Poly {
        trim(a.iter().map(|&x| self.mulm(x, c)).collect())
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        match a.last() {
            Some(&lc) => self.scale(a, self.inv(lc)),
            None => Vec::new(),
        }
    }

    pub fn divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = deg(b).expect("division by zero polynomial");
        if a.len() <= db {
            return (Vec::new(), a.clone());
        }
        let inv = self.inv(b[db]);
        let mut r = a.clone();
        let mut q = vec![0u64; a.len() - db];
        for k in (db..a.len()).rev() {
            let c = self.mulm(r[k], inv);
            if c == 0 {
                continue;
            }
            q[k - db] = c;
            for (j, &bj) in b.iter().enumerate() {
                r[k - db + j] = (r[k - db + j] + self.p - self.mulm(c, bj)) % self.p;
            }
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.divrem(a, b).1
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1): (Poly, Poly) = (vec![1], Vec::new());
        let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = self.inv(*r0.last().expect("inputs not both zero"));
        (
            self.scale(&r0, inv),
            self.scale(&s0, inv),
            self.scale(&t0, inv),
        )
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| self.mulm(c, k as u64 % self.p))
                .collect(),
        )
    }

    /// `base^e mod m`.
    pub fn powmod(&self, base: &Poly, e: &BigUint, m: &Poly) -> Poly {
        let mut acc: Poly = self.rem(&vec![1], m);
        let b = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &b), m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self, a: &Poly) -> bool {
        deg(&self.gcd(a, &self.derivative(a))) == Some(0)
    }

    /// Monic irreducible factors of a monic squarefree polynomial.
    pub fn factor_squarefree(&self, f: &Poly, rng: &mut impl Rng) -> Vec<Poly> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            self.equal_degree(&g, d, rng, &mut out);
        }
        out
    }

    /// Pairs `(g, d)` where `g` is the product of all degree-`d` factors.
    fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let x: Poly = vec![0, 1];
        let mut out = Vec::new();
        let mut f = f.clone();
        let mut h = self.rem(&x, &f);
        let mut d = 0;
        while deg(&f).unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = self.powmod(&h, &BigUint::from(self.p), &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if deg(&g).unwrap_or(0) > 0 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        if deg(&f).unwrap_or(0) > 0 {
            let d = deg(&f).unwrap();
            out.push((f, d));
        }
        out
    }

    /// Cantor-Zassenhaus splitting of a product of degree-`d` factors.
    fn equal_degree(&self, f: &Poly, d: usize, rng: &mut impl Rng, out: &mut Vec<Poly>) {
        let n = deg(f).expect("nonzero");
        if n == d {
            out.push(f.clone());
            return;
        }
        let e = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: Poly = trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if deg(&a).unwrap_or(0) == 0 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, f), &vec![1]);
            let g = self.gcd(&b, f);
            let dg = deg(&g).unwrap_or(0);
            if dg > 0 && dg < n {
                let q = self.divrem(f, &g).0;
                self.equal_degree(&g, d, rng, out);
                self.equal_degree(&q, d, rng, out);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn factors_mod_five() {
        let fp = Fp { p: 5 };
        // (x+1)(x+2)(x^2+2) mod 5
        let f = fp.mul(&fp.mul(&vec![1, 1], &vec![2, 1]), &vec![2, 0, 1]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut got = fp.factor_squarefree(&f, &mut rng);
        got.sort();
        assert_eq!(got, vec![vec![1, 1], vec![2, 0, 1], vec![2, 1]]);
    }

    #[test]
    fn ext_gcd_identity() {
        let fp = Fp { p: 7 };
        let a = vec![1, 2, 1, 3];
        let b = vec![4, 0, 1];
        let (g, s, t) = fp.ext_gcd(&a, &b);
        assert_eq!(g, vec![1]);
        assert_eq!(fp.add(&fp.mul(&s, &a), &fp.mul(&t, &b)), vec![1]);
    }
}
