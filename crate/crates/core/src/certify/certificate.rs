//! Witness-plane certificates, their independent re-verification and their
//! JSON form.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{apply_shear, verify_witness_plane, PlaneVerdict};
use crate::algebra::gcd::gcd_mpoly;
use crate::algebra::rat::{fmt_rat, parse_rat};
use crate::algebra::{MPoly, PlaneDir, Rat, UPoly};
use crate::factor::split_constant_term;
use crate::hensel::{hensel_lift, subset_product};

/// Homogeneous witness `t_tilde` found in the coefficient of `xn^m` of the
/// lifted product `A_I` over `subset = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub subset: Vec<usize>,
    pub m: u32,
    pub t_tilde: MPoly,
}

/// Everything needed to re-verify that `g / h` is not regular at the origin.
/// Polynomials in `x'` have `nvars - 1` variables; plane polynomials are in
/// `(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub nvars: usize,
    pub g: MPoly,
    pub h: MPoly,
    /// Substitution `xi -> xi + shear[i] * xn`.
    pub shear: Vec<Rat>,
    /// Sheared numerator, scaled by the same constant as `h_sheared`.
    pub g_sheared: MPoly,
    /// Sheared denominator, monic in `xn`.
    pub h_sheared: MPoly,
    /// `xn`-degree of the division remainder.
    pub k: u32,
    /// Initial form of the top coefficient of the remainder.
    pub r_tilde_k: MPoly,
    /// `H_sheared(0, ..., 0, xn) = xn^e * prod(seeds)`.
    pub e: u32,
    pub seeds: Vec<UPoly>,
    /// Truncation order used for lifting (0 when there are no seeds).
    pub truncation: u32,
    pub witnesses: Vec<Witness>,
    pub pi: MPoly,
    pub direction: PlaneDir,
    pub g_plane: MPoly,
    pub h_plane: MPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate check failed: {0}")]
pub struct RecheckError(pub String);

fn ensure(cond: bool, what: &str) -> Result<(), RecheckError> {
    if cond {
        Ok(())
    } else {
        Err(RecheckError(what.to_string()))
    }
}

impl Certificate {
    /// Recomputes every stored quantity from the input pair and the recorded
    /// choices, and checks all invariants.
    pub fn recheck(&self) -> Result<(), RecheckError> {
        let n = self.nvars;
        ensure(n >= 2, "at least two variables")?;
        ensure(
            self.g.nvars() == n && self.h.nvars() == n,
            "input variable counts",
        )?;
        ensure(self.shear.len() == n - 1, "shear length")?;
        ensure(self.direction.0.len() == n - 1, "direction length")?;
        let xs = |p: &MPoly| p.nvars() == n - 1;
        ensure(
            xs(&self.r_tilde_k) && xs(&self.pi),
            "x' polynomial variable counts",
        )?;
        ensure(
            self.witnesses.iter().all(|w| xs(&w.t_tilde)),
            "witness variable counts",
        )?;
        ensure(
            self.g_plane.nvars() == 2 && self.h_plane.nvars() == 2,
            "plane polynomial variable counts",
        )?;

        ensure(
            self.h.constant_term().is_zero() && !self.h.is_constant(),
            "h vanishes at the origin",
        )?;

        // shear and normalization
        let ha = apply_shear(&self.h, &self.shear);
        let d = self.h.degree();
        ensure(
            ha.degree_in(n - 1) == d,
            "sheared degree in xn equals total degree",
        )?;
        let mut top = vec![0u32; n];
        top[n - 1] = d;
        let lc = ha.coeff(&top);
        ensure(
            !lc.is_zero(),
            "sheared leading coefficient is a nonzero constant",
        )?;
        let c = lc.recip();
        ensure(
            ha.scale(&c) == self.h_sheared,
            "h_sheared matches the shear",
        )?;
        ensure(
            apply_shear(&self.g, &self.shear).scale(&c) == self.g_sheared,
            "g_sheared matches the shear",
        )?;

        // remainder and its initial form
        let (_, r) = self
            .g_sheared
            .divmod_last(&self.h_sheared)
            .map_err(|e| RecheckError(e.to_string()))?;
        ensure(!r.is_zero(), "remainder is nonzero")?;
        ensure(r.degree_in(n - 1) == self.k, "remainder degree")?;
        let r_k = r.to_univariate(n - 1)[self.k as usize].truncate_vars(n - 1);
        ensure(
            r_k.initial_form().ok().as_ref() == Some(&self.r_tilde_k),
            "r_tilde_k is the initial form of the top remainder coefficient",
        )?;

        // constant-term split
        let (e, parts) =
            split_constant_term(&self.h_sheared).map_err(|e| RecheckError(e.to_string()))?;
        ensure(
            e == self.e && parts == self.seeds,
            "constant-term factorization",
        )?;

        // series witnesses
        let s = self.seeds.len();
        let deg_prime = self.h_sheared.degree_in_first(n - 1);
        let subsets = super::nonempty_subsets(s);
        ensure(
            self.witnesses.len() == subsets.len(),
            "one witness per nonempty subset",
        )?;
        if s > 0 {
            ensure(self.truncation > deg_prime, "truncation exceeds deg_x' H")?;
            let mut seeds = vec![UPoly::monomial(self.e as usize, Rat::one())];
            seeds.extend(self.seeds.iter().cloned());
            let lifted = hensel_lift(&self.h_sheared, &seeds, self.truncation)
                .map_err(|e| RecheckError(e.to_string()))?;
            let deg_h = self.h_sheared.degree_in(n - 1);
            for (w, want) in self.witnesses.iter().zip(&subsets) {
                ensure(&w.subset == want, "witness subsets in canonical order")?;
                ensure(
                    !w.t_tilde.is_zero() && w.t_tilde.is_homogeneous(),
                    "t_tilde is a nonzero form",
                )?;
                let dt = w.t_tilde.degree();
                ensure(
                    dt > deg_prime && dt <= self.truncation,
                    "deg t_tilde exceeds deg_x' H",
                )?;
                ensure(w.m < deg_h, "witness power below deg_xn H")?;
                let a = subset_product(&lifted, &w.subset, false)
                    .map_err(|e| RecheckError(e.to_string()))?;
                ensure(
                    a.coeff(w.m as usize).homogeneous_component(dt) == w.t_tilde,
                    "t_tilde is a component of the lifted coefficient",
                )?;
            }
        }

        // pi and the direction
        let pi = self
            .witnesses
            .iter()
            .fold(self.r_tilde_k.clone(), |acc, w| &acc * &w.t_tilde);
        ensure(
            pi == self.pi,
            "pi is the product of r_tilde_k and all t_tilde",
        )?;
        let pa = self
            .pi
            .eval(&self.direction.0)
            .map_err(|e| RecheckError(e.to_string()))?;
        ensure(!pa.is_zero(), "pi does not vanish at the direction")?;

        // plane restriction
        match verify_witness_plane(&self.g_sheared, &self.h_sheared, &self.direction) {
            Ok(PlaneVerdict::VerifiedNonRegular { g, h }) => {
                ensure(
                    g == self.g_plane && h == self.h_plane,
                    "reduced plane restriction",
                )?;
            }
            _ => return Err(RecheckError("plane restriction is not a witness".into())),
        }
        ensure(
            gcd_mpoly(&self.g_plane, &self.h_plane).is_one(),
            "plane pair is coprime",
        )?;
        ensure(
            self.h_plane.constant_term().is_zero(),
            "plane denominator vanishes at the origin",
        )?;
        ensure(
            self.h_plane.degree_in(0) <= deg_prime,
            "deg_u of the plane denominator",
        )?;
        Ok(())
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            nvars: self.nvars,
            input: PairJson {
                g: poly_json(&self.g),
                h: poly_json(&self.h),
            },
            shear: ShearJson {
                a: self.shear.iter().map(fmt_rat).collect(),
                g: poly_json(&self.g_sheared),
                h: poly_json(&self.h_sheared),
            },
            remainder: RemainderJson {
                k: self.k,
                r_tilde_k: poly_json(&self.r_tilde_k),
            },
            factorization: FactorizationJson {
                e: self.e,
                s: self.seeds.len(),
                seeds: self.seeds.iter().map(upoly_json).collect(),
                truncation: self.truncation,
            },
            witnesses: self
                .witnesses
                .iter()
                .map(|w| WitnessJson {
                    subset: w.subset.clone(),
                    m: w.m,
                    t_tilde: poly_json(&w.t_tilde),
                })
                .collect(),
            pi: poly_json(&self.pi),
            plane: PlaneJson {
                direction: self.direction.0.iter().map(fmt_rat).collect(),
                g: poly_json(&self.g_plane),
                h: poly_json(&self.h_plane),
            },
        }
    }

    pub fn from_json(j: &CertificateJson) -> Result<Self, RecheckError> {
        let n = j.nvars;
        if n < 2 {
            return Err(RecheckError("nvars must be at least 2".into()));
        }
        if j.factorization.s != j.factorization.seeds.len() {
            return Err(RecheckError("s differs from the number of seeds".into()));
        }
        Ok(Certificate {
            nvars: n,
            g: parse_poly(&j.input.g, n)?,
            h: parse_poly(&j.input.h, n)?,
            shear: parse_rats(&j.shear.a)?,
            g_sheared: parse_poly(&j.shear.g, n)?,
            h_sheared: parse_poly(&j.shear.h, n)?,
            k: j.remainder.k,
            r_tilde_k: parse_poly(&j.remainder.r_tilde_k, n - 1)?,
            e: j.factorization.e,
            seeds: j
                .factorization
                .seeds
                .iter()
                .map(parse_upoly)
                .collect::<Result<_, _>>()?,
            truncation: j.factorization.truncation,
            witnesses: j
                .witnesses
                .iter()
                .map(|w| {
                    Ok(Witness {
                        subset: w.subset.clone(),
                        m: w.m,
                        t_tilde: parse_poly(&w.t_tilde, n - 1)?,
                    })
                })
                .collect::<Result<_, RecheckError>>()?,
            pi: parse_poly(&j.pi, n - 1)?,
            direction: PlaneDir(parse_rats(&j.plane.direction)?),
            g_plane: parse_poly(&j.plane.g, 2)?,
            h_plane: parse_poly(&j.plane.h, 2)?,
        })
    }
}

/// A term as `[exponents, numerator, denominator]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson(pub Vec<u32>, pub String, pub String);

pub type PolyJson = Vec<TermJson>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub g: PolyJson,
    pub h: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShearJson {
    pub a: Vec<String>,
    pub g: PolyJson,
    pub h: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemainderJson {
    pub k: u32,
    pub r_tilde_k: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationJson {
    pub e: u32,
    pub s: usize,
    pub seeds: Vec<PolyJson>,
    pub truncation: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub subset: Vec<usize>,
    pub m: u32,
    pub t_tilde: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneJson {
    pub direction: Vec<String>,
    pub g: PolyJson,
    pub h: PolyJson,
}

/// Serialized certificate. Univariate seeds use one-element exponent
/// vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub nvars: usize,
    pub input: PairJson,
    pub shear: ShearJson,
    pub remainder: RemainderJson,
    pub factorization: FactorizationJson,
    pub witnesses: Vec<WitnessJson>,
    pub pi: PolyJson,
    pub plane: PlaneJson,
}

pub fn poly_json(p: &MPoly) -> PolyJson {
    p.terms()
        .map(|(e, c)| TermJson(e.clone(), c.numer().to_string(), c.denom().to_string()))
        .collect()
}

fn upoly_json(u: &UPoly) -> PolyJson {
    poly_json(&u.to_mpoly(1, 0))
}

pub fn parse_poly(p: &PolyJson, nvars: usize) -> Result<MPoly, RecheckError> {
    let mut terms = Vec::with_capacity(p.len());
    for TermJson(e, num, den) in p {
        if e.len() != nvars {
            return Err(RecheckError(format!(
                "exponent vector {e:?} should have {nvars} entries"
            )));
        }
        let num: BigInt = num
            .parse()
            .map_err(|_| RecheckError(format!("bad integer {num:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| RecheckError(format!("bad integer {den:?}")))?;
        if den.is_zero() {
            return Err(RecheckError("zero denominator in coefficient".into()));
        }
        terms.push((e.clone(), Rat::new(num, den)));
    }
    Ok(MPoly::from_terms(nvars, terms))
}

fn parse_upoly(p: &PolyJson) -> Result<UPoly, RecheckError> {
    let m = parse_poly(p, 1)?;
    Ok(UPoly::from_mpoly(&m, 0).expect("single variable"))
}

fn parse_rats(v: &[String]) -> Result<Vec<Rat>, RecheckError> {
    v.iter()
        .map(|s| parse_rat(s).ok_or_else(|| RecheckError(format!("bad rational {s:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{compute_certificate, CertifyParams};
    use super::*;

    fn fixture() -> Certificate {
        let (x, y, z) = (MPoly::var(3, 0), MPoly::var(3, 1), MPoly::var(3, 2));
        let h = &(&(&z.pow(2) + &z) + &x) + &y;
        compute_certificate(&x, &h, &CertifyParams::default(), 3).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let c = fixture();
        let text = serde_json::to_string(&c.to_json()).unwrap();
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        let c2 = Certificate::from_json(&back).unwrap();
        assert_eq!(c2, c);
        c2.recheck().unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let c = fixture();
        let mut bad = c.clone();
        bad.pi = bad.pi.scale(&Rat::from_integer(2.into()));
        assert!(bad.recheck().is_err());
        let mut bad = c.clone();
        bad.direction = PlaneDir(vec![Rat::zero(), Rat::zero()]);
        assert!(bad.recheck().is_err());
        let mut bad = c.clone();
        bad.witnesses[0].m += 1;
        assert!(bad.recheck().is_err());
        let mut bad = c;
        bad.h_plane = &bad.h_plane + &MPoly::one(2);
        assert!(bad.recheck().is_err());
    }
}
