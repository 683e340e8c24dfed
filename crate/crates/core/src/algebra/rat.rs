//! Exact rationals and the few integer helpers the rest of the crate needs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number. Always stored reduced with a
/// positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

/// `p/q` rendering with `q` omitted when it is one.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn gcd_of_numerators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v.numer());
        if g.is_one() {
            break;
        }
    }
    g
}

/// Scale factor `c > 0` such that `c * values` is a list of coprime integers.
pub fn primitive_scale<'a, I>(values: I) -> Rat
where
    I: IntoIterator<Item = &'a Rat> + Clone,
{
    let l = lcm_of_denominators(values.clone());
    let ints: Vec<BigInt> = values
        .into_iter()
        .map(|v| (v * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return Rat::one();
    }
    Rat::new(l, g.abs())
}

pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    num_traits::pow(base.clone(), exp as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse_rat("-4"), Some(rat(-4)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
        assert_eq!(fmt_rat(&ratio(-2, 4)), "-1/2");
        assert_eq!(fmt_rat(&rat(7)), "7");
    }

    #[test]
    fn primitive_scale_clears_denominators() {
        let v = [ratio(1, 2), ratio(3, 4), rat(0)];
        let c = primitive_scale(v.iter());
        assert_eq!(c, rat(4));
        let v = [rat(6), rat(-9)];
        assert_eq!(primitive_scale(v.iter()), ratio(1, 3));
    }
}
