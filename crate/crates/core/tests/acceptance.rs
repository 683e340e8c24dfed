//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when
//! any criterion fails. Runs without the libtest harness so the verdicts
//! always reach the terminal.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_traits::{One, Zero};
use rand::Rng;

use regfun::algebra::rat::{rat, ratio};
use regfun::algebra::{AffineLine, MPoly, Rat, RatFun, UPoly};
use regfun::certify::{
    compute_certificate, decide_regular_at_origin, Certificate, CertifyParams, Decision,
};
use regfun::cli::{run_selftest, Fixtures, RunConfig, DEFAULT_FIXTURES};
use regfun::factor::{factor_univariate, split_constant_term};
use regfun::frontend::{eval_oracle, parse_expression};
use regfun::gen;
use regfun::hensel::hensel_lift;
use regfun::oracle::{LineOracle, OnLine, Oracle, RatFunOracle};
use regfun::reconstruct::{
    reconstruct, reconstruct_checked, reconstruct_dense, ReconError, ReconParams,
};
use regfun::rng::{derive, int_in, rng, small_rat};
use regfun::unifit::{detect_type, fit_fixed_type, FitOutcome};

const ROOT: u64 = 20_240_611;

struct Outcome {
    passed: usize,
    total: usize,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: 0,
            total: 0,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.notes.len() < 5 {
            self.notes.push(note());
        }
    }

    fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }
}

fn x(n: usize, i: usize) -> MPoly {
    MPoly::var(n, i)
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(derive(ROOT, 1));
    for _ in 0..100 {
        let (r, s) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let (g, h) = gen::random_coprime_pair(&mut rng, r, s);
        let mut nodes: Vec<Rat> = Vec::new();
        while nodes.len() < r + s + 1 {
            let t = small_rat(&mut rng, 40, 5);
            if !h.eval(&t).is_zero() && !nodes.contains(&t) {
                nodes.push(t);
            }
        }
        let values: Vec<Rat> = nodes.iter().map(|t| g.eval(t) / h.eval(t)).collect();
        let got = fit_fixed_type(&nodes, &values, r, s);
        let want = FitOutcome::Unique {
            g: g.clone(),
            h: h.clone(),
        };
        out.check(got.as_ref() == Ok(&want), || {
            format!(
                "({r}, {s}) {} / {}: {got:?}",
                g.display_var("t"),
                h.display_var("t")
            )
        });
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(derive(ROOT, 2));
    for i in 0..100u64 {
        let n = rng.gen_range(2..=3);
        let f = gen::random_ratfun(&mut rng, n, 4);
        let oracle = RatFunOracle(f.clone());
        let params = ReconParams {
            seed: derive(ROOT, 200 + i),
            ..ReconParams::default()
        };
        let got = reconstruct(&oracle, &params);
        out.check(got.as_ref() == Ok(&f), || {
            format!("{f}: reconstruct gave {got:?}")
        });
        let dense = reconstruct_dense(&oracle, f.num().degree(), f.den().degree(), &params);
        if let (Ok(a), Ok(b)) = (&got, &dense) {
            out.check(a == b, || format!("{f}: dense gave {b}"));
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let spec = parse_expression("vars x y; x*y/(x^2+y^2) default 0").unwrap();
    let (xx, yy) = (x(2, 0), x(2, 1));
    let want = RatFun::new(&xx * &yy, &xx.pow(2) + &yy.pow(2)).unwrap();
    let got = reconstruct(&spec, &ReconParams::default());
    out.check(got.as_ref() == Ok(&want), || {
        format!("reconstruct gave {got:?}")
    });
    out.check(eval_oracle(&spec, &[rat(0), rat(0)]) == Ok(rat(0)), || {
        "value at origin".into()
    });

    let decision = decide_regular_at_origin(&want, &CertifyParams::default(), ROOT);
    out.check(matches!(decision, Decision::NonRegular { .. }), || {
        format!("decision {decision:?}")
    });

    let mut rng = rng(derive(ROOT, 3));
    let mut lines = 0;
    while lines < 50 {
        let base = vec![int_in(&mut rng, 6), int_in(&mut rng, 6)];
        let dir = vec![int_in(&mut rng, 6), int_in(&mut rng, 6)];
        let Ok(line) = AffineLine::new(base, dir) else {
            continue;
        };
        if line.through_origin() {
            continue;
        }
        lines += 1;
        let on = OnLine::new(&spec, line.clone()).unwrap();
        match detect_type(&on, 4, 4, 10, derive(ROOT, 300 + lines)) {
            Ok(fit) => {
                let mut exact = true;
                for _ in 0..10 {
                    let t = small_rat(&mut rng, 1000, 37);
                    let h = fit.h.eval(&t);
                    exact &= !h.is_zero() && fit.g.eval(&t) / h == on.value(&t).unwrap();
                }
                out.check(exact, || {
                    format!("line {line:?}: fit disagrees at extra points")
                });
            }
            Err(e) => out.check(false, || format!("line {line:?}: {e}")),
        }
    }
    out
}

/// Power series root `r` of `z^2 + z + s = 0` with `r(0) = 0`, as a
/// polynomial in `s = x + y` truncated at degree `d`, by fixed-point
/// iteration `r <- -s - r^2`.
fn branch_root(d: u32) -> MPoly {
    let s = &x(2, 0) + &x(2, 1);
    let mut r = MPoly::zero(2);
    for _ in 0..=d {
        r = (&(-&s) - &r.pow(2)).truncate_first(2, d);
    }
    r
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let (xx, yy, zz) = (x(3, 0), x(3, 1), x(3, 2));
    let branch = &(&(&zz.pow(2) + &zz) + &xx) + &yy;
    let fixtures = [
        (MPoly::one(3), &zz.pow(2) - &(&xx * &yy)),
        (MPoly::one(3), branch.clone()),
        (xx.clone(), branch.clone()),
    ];
    for (g, h) in &fixtures {
        for s in 0..20 {
            match compute_certificate(g, h, &CertifyParams::default(), derive(ROOT, 400 + s)) {
                Ok(c) => {
                    let json = serde_json::to_string(&c.to_json()).unwrap();
                    let back = Certificate::from_json(&serde_json::from_str(&json).unwrap());
                    let ok = back.map(|b| b.recheck().is_ok()).unwrap_or(false);
                    out.check(ok, || format!("({g}, {h}) seed {s}: recheck failed"));
                }
                Err(e) => out.check(false, || format!("({g}, {h}) seed {s}: {e}")),
            }
        }
    }
    // H = z^2 + z + x + y: the factor through z = -1 is z + 1 + r where r is
    // the root through the origin; its z^0 coefficient has quadratic part
    // equal to that of r.
    let expected = branch_root(2).homogeneous_component(2);
    out.check(expected == -&(&x(2, 0) + &x(2, 1)).pow(2), || {
        format!("independent root gave {expected}")
    });
    let params = CertifyParams {
        initial_truncation: Some(2),
        ..CertifyParams::default()
    };
    match compute_certificate(&MPoly::one(3), &branch, &params, ROOT) {
        Ok(c) => {
            let w = c.witnesses.iter().find(|w| w.subset == vec![1]);
            let ok = c.truncation == 2 && w.is_some_and(|w| w.m == 0 && w.t_tilde == expected);
            out.check(ok, || format!("witnesses {:?}", c.witnesses));
        }
        Err(e) => out.check(false, || e.to_string()),
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(derive(ROOT, 5));
    for _ in 0..50 {
        let n = rng.gen_range(2..=3);
        let h = gen::random_hensel_input(&mut rng, n, 5);
        let (e, parts) = split_constant_term(&h).unwrap();
        let mut seeds = vec![UPoly::monomial(e as usize, Rat::one())];
        seeds.extend(parts);
        for d in 0..=6u32 {
            let lifted = hensel_lift(&h, &seeds, d).unwrap();
            let product = lifted
                .iter()
                .fold(MPoly::one(n), |acc, f| &acc * &f.to_mpoly())
                .truncate_first(n - 1, d);
            out.check(product == h.truncate_first(n - 1, d), || {
                format!("{h}: product at D = {d}")
            });
            let finer: Vec<MPoly> = hensel_lift(&h, &seeds, d + 1)
                .unwrap()
                .iter()
                .map(|f| f.to_mpoly().truncate_first(n - 1, d))
                .collect();
            let coarse: Vec<MPoly> = lifted.iter().map(|f| f.to_mpoly()).collect();
            out.check(finer == coarse, || format!("{h}: refinement at D = {d}"));
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(derive(ROOT, 6));
    for _ in 0..100 {
        let (p, unit, factors) = gen::random_factorization(&mut rng, 3, 8);
        match factor_univariate(&p) {
            Ok(fac) => {
                let mut got: Vec<UPoly> = fac
                    .factors
                    .iter()
                    .flat_map(|(q, m)| std::iter::repeat_n(q.clone(), *m as usize))
                    .collect();
                got.sort_by(|a, b| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
                out.check(fac.unit == unit && got == factors, || {
                    format!("{}: got {fac:?}", p.display_var("x"))
                });
            }
            Err(e) => out.check(false, || format!("{}: {e}", p.display_var("x"))),
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let spec = parse_expression("vars x y z; if (y-x^2)^2+(z-x^3)^2 == 0 then x else 0").unwrap();
    let zero = RatFun::from_poly(MPoly::zero(3));
    let got = reconstruct(&spec, &ReconParams::default());
    out.check(got.as_ref() == Ok(&zero), || {
        format!("reconstruct gave {got:?}")
    });
    out.check(spec.eval(&[rat(1), rat(1), rat(1)]) == Ok(rat(1)), || {
        "f(1,1,1)".into()
    });
    let curve = vec![
        vec![rat(1), rat(1), rat(1)],
        vec![ratio(1, 2), ratio(1, 4), ratio(1, 8)],
    ];
    let checked = reconstruct_checked(&spec, &ReconParams::default(), &curve);
    out.check(
        matches!(checked, Err(ReconError::VerificationFailed { .. })),
        || format!("checked reconstruction gave {checked:?}"),
    );
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let fixtures = Fixtures::from_json(DEFAULT_FIXTURES).unwrap();
    let config = RunConfig::default();
    let runs: Vec<String> = (0..2)
        .map(|_| serde_json::to_string_pretty(&run_selftest(&fixtures, &config).json).unwrap())
        .collect();
    out.check(runs[0] == runs[1], || {
        "library self-test JSON differs".into()
    });
    let cli: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            Command::new(env!("CARGO_BIN_EXE_regfun"))
                .args(["selftest", "--json", "-"])
                .output()
                .expect("run regfun")
                .stdout
        })
        .collect();
    out.check(!cli[0].is_empty() && cli[0] == cli[1], || {
        "selftest --json output differs".into()
    });
    out
}

type Check = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("unique fit from exactly r+s+1 nodes", criterion_1),
        ("reconstruction round trip, dense agreement", criterion_2),
        (
            "xy/(x^2+y^2): representation, non-regularity, 50 lines",
            criterion_3,
        ),
        (
            "witness certificates over 20 seeds with recheck",
            criterion_4,
        ),
        ("Hensel product and refinement up to D = 6", criterion_5),
        ("univariate factorization of random products", criterion_6),
        ("twisted cubic sampling caveat", criterion_7),
        ("byte-identical self-test JSON", criterion_8),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all &= o.ok();
        println!(
            "criterion {}: {} {} ({}/{} checks, {:.1}s)",
            i + 1,
            if o.ok() { "PASS" } else { "FAIL" },
            name,
            o.passed,
            o.total,
            start.elapsed().as_secs_f64()
        );
        for note in &o.notes {
            println!("    {note}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
