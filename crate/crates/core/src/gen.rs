//! Random instances for self-tests and property checks.

use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::rat::rat;
use crate::algebra::{MPoly, Rat, RatFun, UPoly};
use crate::factor::split_constant_term;

pub fn nonzero_coeff(rng: &mut impl Rng, bound: i64) -> i64 {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            return c;
        }
    }
}

/// Random exponent vector of total degree exactly `d`.
pub fn random_exponents(rng: &mut impl Rng, n: usize, d: u32) -> Vec<u32> {
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    e
}

/// Sparse polynomial of total degree exactly `d` with up to `max_terms` terms.
pub fn random_mpoly(rng: &mut impl Rng, n: usize, d: u32, max_terms: usize) -> MPoly {
    loop {
        let mut terms = vec![(random_exponents(rng, n, d), rat(nonzero_coeff(rng, 5)))];
        for _ in 1..rng.gen_range(1..=max_terms) {
            let k = rng.gen_range(0..=d);
            terms.push((random_exponents(rng, n, k), rat(nonzero_coeff(rng, 5))));
        }
        let p = MPoly::from_terms(n, terms);
        if p.degree() == d && !p.is_zero() {
            return p;
        }
    }
}

/// Random canonical rational function whose numerator and denominator are
/// drawn with total degree at most `max_deg` and up to three terms.
pub fn random_ratfun(rng: &mut impl Rng, n: usize, max_deg: u32) -> RatFun {
    let dg = rng.gen_range(0..=max_deg);
    let dh = rng.gen_range(0..=max_deg);
    let g = random_mpoly(rng, n, dg, 3);
    let h = random_mpoly(rng, n, dh, 3);
    RatFun::new(g, h).expect("nonzero denominator")
}

/// Random monic polynomial of exact degree `d` with small integer coefficients.
pub fn random_monic(rng: &mut impl Rng, d: usize, bound: i64) -> UPoly {
    let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-bound..=bound)).collect();
    c.push(1);
    UPoly::from_ints(&c)
}

/// Coprime pair `(g, h)` with `deg g = r`, `h` monic of degree `s`.
pub fn random_coprime_pair(rng: &mut impl Rng, r: usize, s: usize) -> (UPoly, UPoly) {
    loop {
        let mut c: Vec<i64> = (0..r).map(|_| rng.gen_range(-6..=6)).collect();
        c.push(nonzero_coeff(rng, 6));
        let g = UPoly::from_ints(&c);
        let h = random_monic(rng, s, 6);
        if g.gcd(&h).is_one() {
            return (g, h);
        }
    }
}

/// Polynomial in `n` variables, monic in the last one, of total degree at
/// most `max_deg`, whose restriction to the `xn`-axis is `xn^e` times a
/// squarefree polynomial that does not vanish at zero.
pub fn random_hensel_input(rng: &mut impl Rng, n: usize, max_deg: u32) -> MPoly {
    loop {
        let d = rng.gen_range(1..=max_deg);
        let mut e = vec![0u32; n];
        e[n - 1] = d;
        let mut terms = vec![(e, Rat::one())];
        for _ in 0..rng.gen_range(1..=5) {
            let k = rng.gen_range(0..=d);
            let mut ex = random_exponents(rng, n, k);
            if ex[n - 1] >= d {
                continue;
            }
            if rng.gen_bool(0.5) {
                // Bias towards terms that live on the xn-axis.
                let c = ex[n - 1] + ex[..n - 1].iter().sum::<u32>();
                ex = vec![0; n];
                ex[n - 1] = c.min(d - 1);
            }
            terms.push((ex, rat(nonzero_coeff(rng, 4))));
        }
        let h = MPoly::from_terms(n, terms);
        if h.degree() <= max_deg && h.degree_in(n - 1) == d && split_constant_term(&h).is_ok() {
            return h;
        }
    }
}

fn small_prime(rng: &mut impl Rng) -> i64 {
    [2, 3, 5, 7][rng.gen_range(0..4)]
}

/// Random monic irreducible of degree at most `max_deg`: a linear factor,
/// `x^2 + c` with `c > 0`, or an Eisenstein polynomial.
pub fn random_irreducible(rng: &mut impl Rng, max_deg: usize) -> UPoly {
    match rng.gen_range(0..3) {
        0 => UPoly::new(vec![
            Rat::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into()),
            Rat::one(),
        ]),
        1 if max_deg >= 2 => UPoly::new(vec![
            Rat::new(rng.gen_range(1..=9).into(), rng.gen_range(1..=3).into()),
            Rat::zero(),
            Rat::one(),
        ]),
        _ => {
            let d = rng.gen_range(1..=max_deg.max(1));
            let p = small_prime(rng);
            let mut c: Vec<i64> = (0..d).map(|_| p * rng.gen_range(-3..=3)).collect();
            c[0] = p * nonzero_coeff(rng, 3);
            if c[0] % (p * p) == 0 {
                c[0] += p;
            }
            c.push(1);
            UPoly::from_ints(&c)
        }
    }
}

/// `unit * prod(factors)` with `1..=max_factors` irreducibles of degree at
/// most `max_deg`; returns the product, the unit and the sorted multiset.
pub fn random_factorization(
    rng: &mut impl Rng,
    max_factors: usize,
    max_deg: usize,
) -> (UPoly, Rat, Vec<UPoly>) {
    let k = rng.gen_range(1..=max_factors);
    let mut factors: Vec<UPoly> = Vec::with_capacity(k);
    for _ in 0..k {
        if !factors.is_empty() && rng.gen_bool(0.2) {
            let f = factors[rng.gen_range(0..factors.len())].clone();
            factors.push(f);
        } else {
            factors.push(random_irreducible(rng, max_deg));
        }
    }
    let unit = Rat::new(nonzero_coeff(rng, 6).into(), rng.gen_range(1..=3).into());
    let product = factors
        .iter()
        .fold(UPoly::constant(unit.clone()), |acc, f| &acc * f);
    factors.sort_by(|a, b| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
    (product, unit, factors)
}
