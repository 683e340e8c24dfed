//! Property tests for the documented invariants.

use num_traits::{One, Zero};
use proptest::prelude::*;

use regfun::algebra::rat::rat;
use regfun::algebra::{gcd_mpoly, MPoly, Rat, RatFun, UPoly};
use regfun::certify::{
    apply_shear, compute_certificate, shear_to_general_position, CertifyError, CertifyParams,
};
use regfun::factor::{factor_univariate, split_constant_term, squarefree_decomposition};
use regfun::frontend::{eval_oracle, parse_expression, Expr, OracleSpec};
use regfun::gen;
use regfun::hensel::{hensel_lift, series_mul, SeriesPoly};
use regfun::oracle::{Oracle, RatFunOracle};
use regfun::rng::rng;
use regfun::unifit::{fit_fixed_type, FitOutcome};

fn names(n: usize) -> Vec<String> {
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

fn partial(p: &MPoly, i: usize) -> MPoly {
    MPoly::from_terms(
        p.nvars(),
        p.terms().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut e = e.clone();
            e[i] -= 1;
            (e.clone(), c * Rat::from_integer((e[i] + 1).into()))
        }),
    )
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| Rat::new(p.into(), q.into()))
}

fn expr(nvars: usize, guards: bool) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        small_rat().prop_map(Expr::Num),
        (0..nvars).prop_map(Expr::Var)
    ];
    leaf.prop_recursive(4, 24, 3, move |inner| {
        let b = |a: Expr| Box::new(a);
        let mut arms = vec![
            (inner.clone(), inner.clone())
                .prop_map(move |(a, c)| Expr::Add(b(a), b(c)))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(move |(a, c)| Expr::Sub(b(a), b(c)))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(move |(a, c)| Expr::Mul(b(a), b(c)))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(move |(a, c)| Expr::Div(b(a), b(c)))
                .boxed(),
            inner.clone().prop_map(move |a| Expr::Neg(b(a))).boxed(),
            (inner.clone(), 0u32..4)
                .prop_map(move |(a, k)| Expr::Pow(b(a), k))
                .boxed(),
        ];
        if guards {
            arms.push(
                (
                    prop::collection::vec(inner.clone(), 1..3),
                    inner.clone(),
                    inner.clone(),
                )
                    .prop_map(move |(g, t, o)| Expr::If {
                        guards: g,
                        then: b(t),
                        other: b(o),
                    })
                    .boxed(),
            );
        }
        proptest::strategy::Union::new(arms)
    })
}

fn spec(guards: bool) -> impl Strategy<Value = OracleSpec> {
    (1usize..=3).prop_flat_map(move |n| {
        (expr(n, guards), prop::option::of(small_rat())).prop_map(move |(body, default)| {
            OracleSpec {
                vars: names(n),
                body,
                default,
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn parse_print_parse_is_stable(s in spec(true)) {
        // Generated guards may be nonzero constants, which the parser rejects.
        if let Ok(first) = parse_expression(&s.print()) {
            let second = parse_expression(&first.print()).unwrap();
            prop_assert_eq!(&first, &second);
            prop_assert_eq!(first.print(), second.print());
        }
    }

    #[test]
    fn guard_free_eval_matches_rational_function(
        s in spec(false),
        p in prop::collection::vec(small_rat(), 3),
    ) {
        let p = &p[..s.vars.len()];
        let Ok(r) = s.to_ratfun() else { return Ok(()) };
        let strict = OracleSpec { default: None, ..s };
        // Where no intermediate division vanishes, both must agree exactly.
        if let Ok(w) = eval_oracle(&strict, p) {
            prop_assert_eq!(r.eval(p).unwrap(), Some(w));
        }
    }

    #[test]
    fn ratfun_is_canonical_and_evaluates(seed in any::<u64>(), p in prop::collection::vec(small_rat(), 3)) {
        let mut r = rng(seed);
        let n = 2 + (seed % 2) as usize;
        let f = gen::random_ratfun(&mut r, n, 3);
        let g = gen::random_ratfun(&mut r, n, 3);
        prop_assert!(gcd_mpoly(f.num(), f.den()).is_constant());
        prop_assert!(f.den().leading_coeff() > Rat::zero());
        let again = RatFun::new(f.num().scale(&rat(-3)), f.den().scale(&rat(-3))).unwrap();
        prop_assert_eq!(&again, &f);
        let p = &p[..n];
        if let (Ok(Some(a)), Ok(Some(b))) = (f.eval(p), g.eval(p)) {
            if let Ok(Some(s)) = f.add(&g).eval(p) {
                prop_assert_eq!(s, &a + &b);
            }
            if let Ok(Some(m)) = f.mul(&g).eval(p) {
                prop_assert_eq!(m, &a * &b);
            }
        }
    }

    #[test]
    fn unique_fit_recovers_pair(seed in any::<u64>(), r in 0usize..=4, s in 0usize..=4) {
        let mut rg = rng(seed);
        let (g, h) = gen::random_coprime_pair(&mut rg, r, s);
        let nodes: Vec<Rat> = (-30i64..30).map(rat).filter(|t| !h.eval(t).is_zero()).take(r + s + 1).collect();
        let values: Vec<Rat> = nodes.iter().map(|t| g.eval(t) / h.eval(t)).collect();
        prop_assert_eq!(fit_fixed_type(&nodes, &values, r, s).unwrap(), FitOutcome::Unique { g, h });
    }

    #[test]
    fn oracle_of_ratfun_is_total(seed in any::<u64>(), p in prop::collection::vec(small_rat(), 3)) {
        let mut rg = rng(seed);
        let f = gen::random_ratfun(&mut rg, 3, 3);
        let o = RatFunOracle(f.clone());
        let v = o.eval(&p).unwrap();
        match f.eval(&p).unwrap() {
            Some(w) => prop_assert_eq!(v, w),
            None => prop_assert!(v.is_zero()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hensel_product_and_refinement(seed in any::<u64>(), d in 0u32..=5) {
        let mut rg = rng(seed);
        let n = 2 + (seed % 2) as usize;
        let h = gen::random_hensel_input(&mut rg, n, 5);
        let (e, parts) = split_constant_term(&h).unwrap();
        let mut seeds = vec![UPoly::monomial(e as usize, Rat::one())];
        seeds.extend(parts);
        let lifted = hensel_lift(&h, &seeds, d).unwrap();
        let product = lifted.iter().try_fold(SeriesPoly::one(n, d), |acc, f| series_mul(&acc, f)).unwrap();
        prop_assert_eq!(product, SeriesPoly::from_mpoly(&h, d));
        for (f, s) in lifted.iter().zip(&seeds) {
            prop_assert!(f.is_monic());
            prop_assert_eq!(&f.at_origin(), s);
        }
        let finer = hensel_lift(&h, &seeds, d + 1).unwrap();
        let cut: Vec<SeriesPoly> = finer.iter().map(|f| f.truncate(d)).collect();
        prop_assert_eq!(cut, lifted);
    }

    #[test]
    fn shear_postconditions(seed in any::<u64>()) {
        let mut rg = rng(seed);
        let n = 2 + (seed % 2) as usize;
        let d = 1 + (seed / 2 % 4) as u32;
        let h = gen::random_mpoly(&mut rg, n, d, 4);
        let Ok((a, hs, c)) = shear_to_general_position(&h, seed, 200) else {
            // Only a repeated factor prevents general position.
            let g = (0..n).fold(h.clone(), |g, i| gcd_mpoly(&g, &partial(&h, i)));
            prop_assert!(!g.is_constant(), "no shear found for squarefree {}", h);
            return Ok(());
        };
        prop_assert_eq!(&apply_shear(&h, &a).scale(&c), &hs);
        prop_assert_eq!(hs.degree_in(n - 1), hs.degree());
        let top = hs.to_univariate(n - 1).pop().unwrap();
        prop_assert!(top.is_one());
        let mut base = hs.clone();
        for _ in 0..n - 1 {
            base = base.specialize(0, &Rat::zero());
        }
        let u = UPoly::from_mpoly(&base, 0).unwrap();
        let rest = u.shift_down(u.order_at_zero());
        prop_assert!(squarefree_decomposition(&rest).unwrap().iter().all(|(_, m)| *m == 1));
    }

    #[test]
    fn factorization_multiplies_back(seed in any::<u64>()) {
        let mut rg = rng(seed);
        let (p, unit, factors) = gen::random_factorization(&mut rg, 3, 6);
        let fac = factor_univariate(&p).unwrap();
        prop_assert_eq!(&fac.expand(), &p);
        prop_assert_eq!(fac.unit, unit);
        prop_assert_eq!(fac.factors.iter().map(|(_, m)| *m as usize).sum::<usize>(), factors.len());
    }

    #[test]
    fn certificates_recheck(seed in any::<u64>()) {
        let mut rg = rng(seed);
        let n = 2 + (seed % 2) as usize;
        let d = 1 + (seed / 2 % 3) as u32;
        // Denominator through the origin, numerator not divisible by it.
        let h0 = gen::random_mpoly(&mut rg, n, d, 3);
        let h = &h0 - &MPoly::constant(n, h0.constant_term());
        let g = gen::random_mpoly(&mut rg, n, d.saturating_sub(1), 2);
        prop_assume!(!h.is_zero() && !h.is_constant());
        let f = RatFun::new(g, h).unwrap();
        prop_assume!(f.den().constant_term().is_zero() && !f.den().is_constant());
        match compute_certificate(f.num(), f.den(), &CertifyParams::default(), seed) {
            Ok(c) => prop_assert!(c.recheck().is_ok()),
            Err(e) => prop_assert!(matches!(e, CertifyError::ReducibleDenominator { .. }), "{e}"),
        }
    }
}
