//! Univariate factorization over the rationals and the splitting of
//! `H(0, ..., 0, xn)` into a power of `xn` and coprime irreducible parts.

mod lift;
mod modp;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use thiserror::Error;

use crate::algebra::rat::rat_pow;
use crate::algebra::{MPoly, Rat, UPoly};
use lift::{factor_coefficient_bound, hensel_lift, recombine, ZPoly};
use modp::Fp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("cannot factor the zero polynomial")]
    ZeroInput,
    #[error("polynomial is not monic in the last variable")]
    NotMonicInLastVar,
    #[error("factor {factor} of the constant-term polynomial has multiplicity {multiplicity}")]
    NotSquarefreeAfterShear { factor: String, multiplicity: u32 },
}

/// `unit * prod(f^m)` with monic irreducible, pairwise distinct factors
/// sorted by degree and then coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniFactorization {
    pub unit: Rat,
    pub factors: Vec<(UPoly, u32)>,
}

impl UniFactorization {
    pub fn expand(&self) -> UPoly {
        self.factors
            .iter()
            .fold(UPoly::constant(self.unit.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }
}

/// Yun's squarefree decomposition: monic, pairwise coprime, squarefree
/// parts `a_i` with `F = lc(F) * prod(a_i^i)`. Parts equal to 1 are omitted.
pub fn squarefree_decomposition(f: &UPoly) -> Result<Vec<(UPoly, u32)>, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroInput);
    }
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return Ok(out);
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c = df.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        let nb = b.div_exact(&a).expect("gcd divides");
        let c = d.div_exact(&a).expect("gcd divides");
        d = &c - &nb.derivative();
        b = nb;
        if a.deg() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

fn to_zpoly(f: &UPoly) -> ZPoly {
    f.primitive()
        .coeffs()
        .iter()
        .map(|c| c.to_integer())
        .collect()
}

fn from_zpoly(f: &ZPoly) -> UPoly {
    UPoly::new(f.iter().map(|c| Rat::from_integer(c.clone())).collect())
}

/// `f(a x)`.
fn dilate(f: &UPoly, a: &Rat) -> UPoly {
    UPoly::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c * rat_pow(a, k as u32))
            .collect(),
    )
}

const FACTOR_SEED: u64 = 0x5eed_fac7;

/// Monic irreducible factors of a squarefree polynomial of positive degree.
fn factor_squarefree(f: &UPoly) -> Vec<UPoly> {
    let d = f.deg();
    if d == 1 {
        return vec![f.monic()];
    }
    // g(x) = a^(d-1) F(x/a) is a monic integer polynomial
    let prim = f.primitive();
    let a = prim.leading_coeff();
    let g = dilate(&prim, &a.recip()).scale(&rat_pow(&a, d as u32 - 1));
    let gz = to_zpoly(&g);
    debug_assert!(gz[d].is_one());

    let mut p = 3u64;
    let fp = loop {
        let fp = Fp { p };
        if fp.is_squarefree(&fp.reduce_ints(&gz)) {
            break fp;
        }
        p = next_prime(p);
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(FACTOR_SEED);
    let modular = fp.factor_squarefree(&fp.reduce_ints(&gz), &mut rng);
    let parts = if modular.len() == 1 {
        vec![gz]
    } else {
        let bound = factor_coefficient_bound(&gz) * 2u32;
        let pb = BigInt::from(fp.p);
        let mut k = 1u32;
        let mut m = pb.clone();
        while m <= bound {
            m *= &pb;
            k += 1;
        }
        recombine(&gz, hensel_lift(&fp, &gz, &modular, k), &m)
    };
    // a factor c(x) of g gives the factor c(a x) of F
    parts
        .iter()
        .map(|c| dilate(&from_zpoly(c), &a).monic())
        .collect()
}

fn next_prime(mut p: u64) -> u64 {
    loop {
        p += 2;
        if (3..)
            .step_by(2)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
        {
            return p;
        }
    }
}

/// Complete factorization into monic irreducibles over the rationals.
pub fn factor_univariate(f: &UPoly) -> Result<UniFactorization, FactorError> {
    let parts = squarefree_decomposition(f)?;
    let mut factors = Vec::new();
    for (part, m) in parts {
        factors.extend(factor_squarefree(&part).into_iter().map(|q| (q, m)));
    }
    factors.sort_by(|(a, _), (b, _)| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
    let out = UniFactorization {
        unit: f.leading_coeff(),
        factors,
    };
    assert_eq!(&out.expand(), f, "factorization does not multiply back");
    Ok(out)
}

/// Writes `H(0, ..., 0, xn) = xn^e * H1 * ... * Hs` with distinct monic
/// irreducible `Hi` not vanishing at zero. Fails when some `Hi` is
/// repeated.
pub fn split_constant_term(h: &MPoly) -> Result<(u32, Vec<UPoly>), FactorError> {
    let n = h.nvars();
    let last = n - 1;
    let lc = h
        .to_univariate(last)
        .pop()
        .unwrap_or_else(|| MPoly::zero(n));
    if h.degree_in(last) == 0 || !lc.is_one() {
        return Err(FactorError::NotMonicInLastVar);
    }
    let mut base = h.clone();
    for _ in 0..last {
        base = base.specialize(0, &Rat::zero());
    }
    let u = UPoly::from_mpoly(&base, 0).expect("single variable");
    let e = u.order_at_zero();
    let rest = u.shift_down(e);
    let fac = factor_univariate(&rest)?;
    if let Some((q, m)) = fac.factors.iter().find(|(_, m)| *m > 1) {
        return Err(FactorError::NotSquarefreeAfterShear {
            factor: q.display_var("z"),
            multiplicity: *m,
        });
    }
    debug_assert!(fac.unit.is_one());
    Ok((e as u32, fac.factors.into_iter().map(|(q, _)| q).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn up(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn squarefree_examples() {
        let f = &up(&[-1, 1]).pow(2) * &up(&[2, 1]);
        assert_eq!(
            squarefree_decomposition(&f).unwrap(),
            vec![(up(&[2, 1]), 1), (up(&[-1, 1]), 2)]
        );
        assert_eq!(
            squarefree_decomposition(&up(&[0, 0, 0, 1])).unwrap(),
            vec![(up(&[0, 1]), 3)]
        );
        assert_eq!(
            squarefree_decomposition(&up(&[2, 0, 4])).unwrap(),
            vec![(
                UPoly::new(vec![Rat::new(1.into(), 2.into()), rat(0), rat(1)]),
                1
            )]
        );
        assert_eq!(
            squarefree_decomposition(&UPoly::zero()),
            Err(FactorError::ZeroInput)
        );
    }

    #[test]
    fn factor_examples() {
        let f = factor_univariate(&up(&[-1, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(up(&[-1, 1]), 1), (up(&[1, 1]), 1)]);
        let f = factor_univariate(&up(&[1, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(up(&[1, 0, 1]), 1)]);
        let f = factor_univariate(&up(&[-4, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(up(&[-2, 0, 1]), 1), (up(&[2, 0, 1]), 1)]);
    }

    #[test]
    fn non_monic_and_repeated() {
        // 6 (x - 1/2)^2 (x^2 + 3)
        let f = &(&up(&[-1, 2]).pow(2) * &up(&[3, 0, 1])).scale(&Rat::new(3.into(), 2.into()));
        let out = factor_univariate(f).unwrap();
        assert_eq!(out.unit, rat(6));
        assert_eq!(
            out.factors,
            vec![
                (UPoly::new(vec![Rat::new((-1).into(), 2.into()), rat(1)]), 2),
                (up(&[3, 0, 1]), 1)
            ]
        );
    }

    #[test]
    fn swinnerton_dyer_like_irreducible() {
        // x^4 - 10x^2 + 1 is irreducible but splits modulo every prime
        let f = factor_univariate(&up(&[1, 0, -10, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(up(&[1, 0, -10, 0, 1]), 1)]);
    }

    #[test]
    fn split_examples() {
        let z = MPoly::var(3, 2);
        let x = MPoly::var(3, 0);
        let h = &(&z.pow(2) + &z) + &(&x * &z);
        assert_eq!(split_constant_term(&h).unwrap(), (1, vec![up(&[1, 1])]));
        assert_eq!(split_constant_term(&z.pow(3)).unwrap(), (3, vec![]));
        let h = &z.pow(3) + &z;
        assert_eq!(split_constant_term(&h).unwrap(), (1, vec![up(&[1, 0, 1])]));
        let h = (&z + &MPoly::one(3)).pow(2);
        assert!(matches!(
            split_constant_term(&h),
            Err(FactorError::NotSquarefreeAfterShear {
                multiplicity: 2,
                ..
            })
        ));
        assert_eq!(
            split_constant_term(&(&x * &z)),
            Err(FactorError::NotMonicInLastVar)
        );
    }
}
