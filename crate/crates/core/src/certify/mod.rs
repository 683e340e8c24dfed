//! Regularity at the origin of a reduced fraction `G / H`, with a
//! checkable witness plane on which the restriction is not regular.

mod certificate;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{
    reduce_fraction, restrict_to_plane, AlgebraError, MPoly, PlaneDir, Rat, RatFun, UPoly,
};
use crate::factor::{split_constant_term, FactorError};
use crate::hensel::{hensel_lift, subset_product, HenselError};
use crate::rng::{derive, int_in, rng};

pub use certificate::{Certificate, CertificateJson, RecheckError, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("the denominator does not vanish at the origin")]
    OriginNotOnZeroSet,
    #[error("the denominator divides the numerator")]
    ZeroRemainder,
    #[error("no shear in general position found within the retry budget")]
    RetryBudgetExhausted,
    #[error("no homogeneous witness term found up to truncation order {truncation}")]
    NoSeriesWitness { truncation: u32 },
    #[error("the sheared denominator has the polynomial factor {factor}")]
    ReducibleDenominator { factor: String },
    #[error("no direction passed plane verification within the retry budget")]
    VerificationFailed,
    #[error("the plane lies inside the zero set of the denominator")]
    PlaneInsideZeroSet,
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Hensel(#[from] HenselError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyParams {
    pub shear_budget: usize,
    pub direction_budget: usize,
    /// Starting truncation order; defaults to `deg_{x'} H + 2`.
    pub initial_truncation: Option<u32>,
    pub max_truncation: u32,
}

impl Default for CertifyParams {
    fn default() -> Self {
        CertifyParams {
            shear_budget: 200,
            direction_budget: 200,
            initial_truncation: None,
            max_truncation: 64,
        }
    }
}

/// `H(x1 + a1 xn, ..., x(n-1) + a(n-1) xn, xn)`.
pub fn apply_shear(p: &MPoly, a: &[Rat]) -> MPoly {
    let n = p.nvars();
    let xn = MPoly::var(n, n - 1);
    let images: Vec<MPoly> = (0..n)
        .map(|i| {
            if i + 1 == n {
                xn.clone()
            } else {
                &MPoly::var(n, i) + &xn.scale(&a[i])
            }
        })
        .collect();
    p.compose(&images)
}

/// Leading `xn`-coefficient when `H` has `deg_xn H = deg H` and
/// `H(0, ..., 0, xn)` is squarefree apart from a power of `xn`.
fn general_position_scale(h: &MPoly) -> Option<Rat> {
    let n = h.nvars();
    let d = h.degree();
    if d == 0 || h.degree_in(n - 1) != d {
        return None;
    }
    let mut e = vec![0u32; n];
    e[n - 1] = d;
    let lc = h.coeff(&e);
    let base = UPoly::new(
        (0..=d)
            .map(|k| {
                let mut e = vec![0u32; n];
                e[n - 1] = k;
                h.coeff(&e)
            })
            .collect(),
    );
    let q = base.shift_down(base.order_at_zero());
    q.gcd(&q.derivative()).is_one().then_some(lc)
}

/// Candidate shears: zero first, then all vectors with
/// entries in `{0, 1, -1}`, then seeded random vectors.
fn shear_candidates(m: usize, seed: u64, budget: usize) -> impl Iterator<Item = Vec<Rat>> {
    let digits = [0i64, 1, -1];
    let small = 3usize.pow(m.min(6) as u32);
    let mut rng = rng(derive(seed, 7));
    (0..budget).map(move |t| {
        if m <= 6 && t < small {
            let mut v = vec![Rat::zero(); m];
            let mut k = t;
            for i in (0..m).rev() {
                v[i] = Rat::from_integer(digits[k % 3].into());
                k /= 3;
            }
            v
        } else {
            let bound = 2 + (t / 20) as i64;
            (0..m).map(|_| int_in(&mut rng, bound)).collect()
        }
    })
}

/// Finds a shear `a` putting `H` in general position and returns `(a,
/// H_a / c, c)` where `c` is the leading `xn`-coefficient of the sheared
/// polynomial `H_a`, so the returned polynomial is monic in `xn`.
pub fn shear_to_general_position(
    h: &MPoly,
    seed: u64,
    budget: usize,
) -> Result<(Vec<Rat>, MPoly, Rat), CertifyError> {
    let n = h.nvars();
    if n < 2 {
        return Err(CertifyError::InvalidInput(
            "shearing needs at least two variables".into(),
        ));
    }
    if h.is_constant() {
        return Err(CertifyError::InvalidInput("denominator is constant".into()));
    }
    for a in shear_candidates(n - 1, seed, budget) {
        let ha = apply_shear(h, &a);
        if let Some(lc) = general_position_scale(&ha) {
            let inv = lc.recip();
            return Ok((a, ha.scale(&inv), inv));
        }
    }
    Err(CertifyError::RetryBudgetExhausted)
}

/// Outcome of restricting `G / H` to the plane `x' = a u, xn = v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaneVerdict {
    /// The reduced restriction `(G_L, H_L)` has `H_L(0, 0) = 0`.
    VerifiedNonRegular {
        g: MPoly,
        h: MPoly,
    },
    NotAWitness,
}

pub fn verify_witness_plane(
    g: &MPoly,
    h: &MPoly,
    a: &PlaneDir,
) -> Result<PlaneVerdict, CertifyError> {
    let gl = restrict_to_plane(g, a)?;
    let hl = restrict_to_plane(h, a)?;
    if hl.is_zero() {
        return Err(CertifyError::PlaneInsideZeroSet);
    }
    let (gr, hr) = reduce_fraction(&gl, &hl)?.into_parts();
    Ok(if hr.constant_term().is_zero() {
        PlaneVerdict::VerifiedNonRegular { g: gr, h: hr }
    } else {
        PlaneVerdict::NotAWitness
    })
}

/// Witnesses are collected for every nonempty subset of the factors.
const MAX_SEED_FACTORS: usize = 16;

/// Nonempty subsets of `{1..s}` in increasing bitmask order.
fn nonempty_subsets(s: usize) -> Vec<Vec<usize>> {
    (1u64..(1 << s))
        .map(|mask| (1..=s).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

/// Lowest-degree homogeneous component of degree in `(low, high]` among the
/// coefficients of `xn^m`, `m < deg`, of `a`; ties go to the smallest `m`.
fn find_witness(a: &crate::hensel::SeriesPoly, low: u32, high: u32) -> Option<(u32, MPoly)> {
    let top = a.degree_xn().unwrap_or(0);
    for d in low + 1..=high {
        for m in 0..top {
            let c = a.coeff(m).homogeneous_component(d);
            if !c.is_zero() {
                return Some((m as u32, c));
            }
        }
    }
    None
}

/// Builds and verifies a witness-plane certificate for `G / H` with
/// `H(0) = 0`. `G` and `H` must be coprime.
pub fn compute_certificate(
    g: &MPoly,
    h: &MPoly,
    params: &CertifyParams,
    seed: u64,
) -> Result<Certificate, CertifyError> {
    let n = h.nvars();
    if g.nvars() != n {
        return Err(CertifyError::InvalidInput(
            "numerator and denominator differ in variable count".into(),
        ));
    }
    if n < 2 {
        return Err(CertifyError::InvalidInput(
            "certificates need at least two variables".into(),
        ));
    }
    if h.is_constant() || !h.constant_term().is_zero() {
        return Err(CertifyError::OriginNotOnZeroSet);
    }
    let (shear, h_sheared, c) = shear_to_general_position(h, seed, params.shear_budget)?;
    let g_sheared = apply_shear(g, &shear).scale(&c);

    let (_, r) = g_sheared.divmod_last(&h_sheared)?;
    if r.is_zero() {
        return Err(CertifyError::ZeroRemainder);
    }
    let k = r.degree_in(n - 1);
    let r_k = r.to_univariate(n - 1)[k as usize].truncate_vars(n - 1);
    let r_tilde_k = r_k.initial_form()?;

    let (e, parts) = split_constant_term(&h_sheared)?;
    let s = parts.len();
    if s > MAX_SEED_FACTORS {
        return Err(CertifyError::InvalidInput(format!(
            "{s} factors at the origin exceed the subset enumeration limit of {MAX_SEED_FACTORS}"
        )));
    }
    let deg_prime = h_sheared.degree_in_first(n - 1);
    let mut witnesses = Vec::new();
    let mut truncation = 0;
    if s > 0 {
        let mut d = params
            .initial_truncation
            .unwrap_or(deg_prime + 2)
            .max(deg_prime + 1);
        let mut seeds = vec![UPoly::monomial(e as usize, Rat::one())];
        seeds.extend(parts.iter().cloned());
        'lift: loop {
            let lifted = hensel_lift(&h_sheared, &seeds, d)?;
            witnesses.clear();
            for subset in nonempty_subsets(s) {
                let a = subset_product(&lifted, &subset, false)?;
                match find_witness(&a, deg_prime, d) {
                    Some((m, t_tilde)) => witnesses.push(Witness { subset, m, t_tilde }),
                    None => {
                        // Past deg H a polynomial factor is represented exactly.
                        if d >= h_sheared.degree() {
                            let f = a.to_mpoly();
                            if h_sheared.div_exact(&f).is_some() {
                                return Err(CertifyError::ReducibleDenominator {
                                    factor: f.to_string(),
                                });
                            }
                        }
                        if d >= params.max_truncation {
                            return Err(CertifyError::NoSeriesWitness { truncation: d });
                        }
                        d = (2 * d).min(params.max_truncation);
                        continue 'lift;
                    }
                }
            }
            truncation = d;
            break;
        }
    }
    let pi = witnesses
        .iter()
        .fold(r_tilde_k.clone(), |acc, w| &acc * &w.t_tilde);

    let mut rng = rng(derive(seed, 11));
    for t in 0..params.direction_budget {
        let dir: Vec<Rat> = if t == 0 {
            vec![Rat::one(); n - 1]
        } else {
            (0..n - 1).map(|_| int_in(&mut rng, 8)).collect()
        };
        let dir = PlaneDir(dir);
        if dir.is_zero() || pi.eval(&dir.0)?.is_zero() {
            continue;
        }
        match verify_witness_plane(&g_sheared, &h_sheared, &dir) {
            Ok(PlaneVerdict::VerifiedNonRegular {
                g: g_plane,
                h: h_plane,
            }) => {
                return Ok(Certificate {
                    nvars: n,
                    g: g.clone(),
                    h: h.clone(),
                    shear,
                    g_sheared,
                    h_sheared,
                    k,
                    r_tilde_k,
                    e,
                    seeds: parts,
                    truncation,
                    witnesses,
                    pi,
                    direction: dir,
                    g_plane,
                    h_plane,
                });
            }
            Ok(PlaneVerdict::NotAWitness) | Err(CertifyError::PlaneInsideZeroSet) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(CertifyError::VerificationFailed)
}

/// Why a fraction is reported non-regular at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// A verified witness plane is attached.
    WitnessPlane,
    /// One variable: the reduced denominator vanishes at the origin.
    UnivariatePole,
    /// The reduced denominator vanishes at the origin, but no witness plane
    /// was constructed (the message says why).
    NoWitness(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Regular {
        value: Rat,
    },
    NonRegular {
        certificate: Option<Box<Certificate>>,
        justification: Justification,
    },
}

/// Regular with its value when the reduced denominator does not vanish at
/// the origin, otherwise non-regular.
pub fn decide_regular_at_origin(f: &RatFun, params: &CertifyParams, seed: u64) -> Decision {
    let den0 = f.den().constant_term();
    if !den0.is_zero() {
        return Decision::Regular {
            value: f.num().constant_term() / den0,
        };
    }
    if f.nvars() == 1 {
        return Decision::NonRegular {
            certificate: None,
            justification: Justification::UnivariatePole,
        };
    }
    match compute_certificate(f.num(), f.den(), params, seed) {
        Ok(c) => Decision::NonRegular {
            certificate: Some(Box::new(c)),
            justification: Justification::WitnessPlane,
        },
        Err(e) => Decision::NonRegular {
            certificate: None,
            justification: Justification::NoWitness(e.to_string()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    fn xyz() -> (MPoly, MPoly, MPoly) {
        (x(3, 0), x(3, 1), x(3, 2))
    }

    #[test]
    fn shear_examples() {
        let (x1, y, z) = xyz();
        let h = &z.pow(2) - &(&x1 * &y);
        let (a, ha, _) = shear_to_general_position(&h, 0, 50).unwrap();
        assert_eq!(a, vec![rat(0), rat(0)]);
        assert_eq!(ha, h);

        let h = &(&x1 * &z) + &MPoly::one(3);
        let (a, ha, c) = shear_to_general_position(&h, 0, 50).unwrap();
        assert_eq!(a, vec![rat(1), rat(0)]);
        assert_eq!(c, rat(1));
        assert_eq!(ha, &(&z.pow(2) + &(&x1 * &z)) + &MPoly::one(3));

        let h = &(&(&z.pow(2) + &z) + &x1) + &y;
        let (a, ha, _) = shear_to_general_position(&h, 0, 50).unwrap();
        assert_eq!(a, vec![rat(0), rat(0)]);
        assert_eq!(ha, h);
    }

    #[test]
    fn plane_verdicts() {
        let (xx, yy) = (x(2, 0), x(2, 1));
        let g = &xx * &yy;
        let h = &xx.pow(2) + &yy.pow(2);
        assert_eq!(
            verify_witness_plane(&g, &h, &PlaneDir(vec![rat(1)])).unwrap(),
            PlaneVerdict::VerifiedNonRegular {
                g: g.clone(),
                h: h.clone()
            }
        );
        let (x1, y, z) = xyz();
        let h = &z.pow(2) - &(&x1 * &y);
        let v = verify_witness_plane(&MPoly::one(3), &h, &PlaneDir(vec![rat(1), rat(1)])).unwrap();
        let (u, w) = (x(2, 0), x(2, 1));
        assert_eq!(
            v,
            PlaneVerdict::VerifiedNonRegular {
                g: MPoly::constant(2, rat(-1)),
                h: &u.pow(2) - &w.pow(2)
            }
        );
        assert_eq!(
            verify_witness_plane(&h, &h, &PlaneDir(vec![rat(1), rat(1)])).unwrap(),
            PlaneVerdict::NotAWitness
        );
        assert_eq!(
            verify_witness_plane(&MPoly::one(3), &x1, &PlaneDir(vec![rat(0), rat(1)])),
            Err(CertifyError::PlaneInsideZeroSet)
        );
    }

    #[test]
    fn certificate_cone() {
        let (x1, y, z) = xyz();
        let h = &z.pow(2) - &(&x1 * &y);
        let c = compute_certificate(&MPoly::one(3), &h, &CertifyParams::default(), 0).unwrap();
        assert_eq!(c.shear, vec![rat(0), rat(0)]);
        assert!(c.r_tilde_k.is_one());
        assert_eq!((c.e, c.seeds.len()), (2, 0));
        assert!(c.pi.is_one());
        assert_eq!(c.direction, PlaneDir(vec![rat(1), rat(1)]));
        c.recheck().unwrap();
    }

    #[test]
    fn certificate_hand_lifted() {
        let (x1, y, z) = xyz();
        let h = &(&(&z.pow(2) + &z) + &x1) + &y;
        let c = compute_certificate(&MPoly::one(3), &h, &CertifyParams::default(), 0).unwrap();
        assert_eq!((c.e, c.seeds.len()), (1, 1));
        let xy = &x(2, 0) + &x(2, 1);
        let expected = -&xy.pow(2);
        assert_eq!(c.witnesses.len(), 1);
        assert_eq!(c.witnesses[0].t_tilde, expected);
        assert_eq!(c.witnesses[0].m, 0);
        assert_eq!(c.pi, expected);
        assert_eq!(c.pi.eval(&c.direction.0).unwrap(), rat(-4));
        let (u, v) = (x(2, 0), x(2, 1));
        assert_eq!(c.h_plane, &(&v.pow(2) + &v) + &u.scale(&rat(2)));
        c.recheck().unwrap();
    }

    #[test]
    fn reducible_denominator_is_reported() {
        let (xx, yy) = (x(2, 0), x(2, 1));
        let h = &yy * &(&(&xx * &yy) - &MPoly::constant(2, rat(4)));
        assert!(matches!(
            compute_certificate(&MPoly::one(2), &h, &CertifyParams::default(), 0),
            Err(CertifyError::ReducibleDenominator { .. })
        ));
    }

    #[test]
    fn origin_off_zero_set() {
        let (x1, y, _) = xyz();
        let h = &(&MPoly::one(3) + &x1.pow(2)) + &y.pow(2);
        assert_eq!(
            compute_certificate(&MPoly::one(3), &h, &CertifyParams::default(), 0),
            Err(CertifyError::OriginNotOnZeroSet)
        );
    }

    #[test]
    fn decisions() {
        let (xx, yy) = (x(2, 0), x(2, 1));
        let q = &xx.pow(2) + &yy.pow(2);
        let f = RatFun::new(&xx + &yy, &MPoly::one(2) + &q).unwrap();
        assert_eq!(
            decide_regular_at_origin(&f, &CertifyParams::default(), 0),
            Decision::Regular { value: rat(0) }
        );
        let f = RatFun::new(&xx * &yy, q.clone()).unwrap();
        match decide_regular_at_origin(&f, &CertifyParams::default(), 0) {
            Decision::NonRegular {
                certificate: Some(c),
                justification: Justification::WitnessPlane,
            } => c.recheck().unwrap(),
            other => panic!("unexpected {other:?}"),
        }
        let f = RatFun::new(&(&MPoly::one(2) + &xx) * &q, q.clone()).unwrap();
        assert_eq!(
            decide_regular_at_origin(&f, &CertifyParams::default(), 0),
            Decision::Regular { value: rat(1) }
        );
        let f = RatFun::new(MPoly::one(1), x(1, 0)).unwrap();
        assert!(matches!(
            decide_regular_at_origin(&f, &CertifyParams::default(), 0),
            Decision::NonRegular {
                certificate: None,
                justification: Justification::UnivariatePole
            }
        ));
    }
}
