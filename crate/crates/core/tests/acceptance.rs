//! Acceptance run: seven criteria, exact comparisons, wall-clock limits.
//! Prints one `PASS`/`FAIL` line per criterion and exits non-zero on any
//! failure. Set `LEXSPEC_SEED` to change the random batches.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    crossed_marginals, e, endpoint_candidates, random_batch, refined, single_jump, slice_case,
    staircase,
};
use lexspec::calculus::{marginal, meet_joint, neutral_observable, sum_observables};
use lexspec::extend::{
    block_units, check_decomposition, check_extension, component_sum, decompose_perfect,
    decompose_staircase, positive_form, projection_formula, require_uniqueness, Factor,
};
use lexspec::gen::{extra_breakpoints, random_observable, rng, seed_from_env, GenParams};
use lexspec::{
    characteristic_points, oracle_observable, ExtensionMode, Kind, LexElem, MvContext, Observable,
    Rat, SpectralResolution,
};

type Check = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn lib<T>(r: lexspec::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn pt(xs: &[i64]) -> Vec<Factor> {
    xs.iter()
        .map(|&x| Factor::Point {
            at: Rat::from_int(x),
        })
        .collect()
}

fn masses_are(x: &Observable, want: &[(&[i64], LexElem)]) -> Check {
    let map = x.mass_map();
    ensure(map.len() == want.len(), || {
        format!("expected {} atoms, got {}", want.len(), map.len())
    })?;
    for (p, v) in want {
        ensure(map.get(&pt(p)) == Some(v), || {
            format!("mass at {p:?}: {:?}", map.get(&pt(p)))
        })?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Criteria

fn single_jump_example() -> Check {
    let sr = single_jump();
    let x = lib(oracle_observable(&sr))?;
    masses_are(&x, &[(&[0], e(0, 1)), (&[2], e(1, -1))])?;
    let units = lib(block_units(&sr))?;
    ensure(units.identity_sum == e(1, 0), || {
        format!("unit sum {}", units.identity_sum)
    })?;
    ensure(lib(projection_formula(&sr))?.same_masses(&x), || {
        "projection differs".into()
    })?;
    ensure(lib(component_sum(&sr))?.same_masses(&x), || {
        "components differ".into()
    })
}

fn meet_joint_example() -> Check {
    let (fx, fy) = crossed_marginals();
    let (_, z) = lib(meet_joint(&[fx.clone(), fy.clone()]))?;
    masses_are(
        &z,
        &[(&[2, 1], e(0, 3)), (&[3, 1], e(0, 1)), (&[3, 5], e(1, -4))],
    )?;
    ensure(
        lib(marginal(&z, 0))?.same_masses(&lib(oracle_observable(&fx))?),
        || "x marginal".into(),
    )?;
    ensure(
        lib(marginal(&z, 1))?.same_masses(&lib(oracle_observable(&fy))?),
        || "y marginal".into(),
    )?;
    // Summing pairwise meets of the marginal masses overshoots the unit.
    let xs = [e(0, 3), e(1, -3)];
    let ys = [e(0, 4), e(1, -4)];
    let mut total = e(0, 0);
    for a in &xs {
        for b in &ys {
            total = &total + &lib(a.inf(b))?;
        }
    }
    ensure(total == e(1, 6), || format!("meet sum {total}"))?;
    ensure(total != e(1, 0), || "meet sum equals the unit".into())
}

fn staircase_example() -> Check {
    let sr = staircase();
    let comps = lib(decompose_staircase(&sr))?;
    ensure(comps.len() == 5, || format!("{} components", comps.len()))?;
    let total = comps.iter().fold(e(0, 0), |acc, c| &acc + c.sr.top());
    ensure(total == e(2, 0), || format!("component sum {total}"))?;
    let x = lib(component_sum(&sr))?;
    masses_are(&x, &[(&[0], e(0, 1)), (&[1], e(1, 0)), (&[3], e(1, -1))])?;
    ensure(x.same_masses(&lib(oracle_observable(&sr))?), || {
        "oracle differs".into()
    })
}

/// Full check of one random instance; returns the oracle observable.
fn random_instance(sr: &SpectralResolution) -> Result<Observable, String> {
    let report = sr.report();
    ensure(report.is_valid(), || report.to_string())?;
    let oracle = lib(oracle_observable(sr))?;
    let comp = lib(component_sum(sr))?;
    ensure(comp.same_masses(&oracle), || {
        "component sum differs from oracle".into()
    })?;
    lib(check_extension(sr, &comp))?;
    let comps = if sr.ctx().is_perfect() && characteristic_points(sr).len() == 1 {
        lib(decompose_perfect(sr))?
    } else {
        lib(decompose_staircase(sr))?
    };
    lib(check_decomposition(sr, &comps))?;
    lib(require_uniqueness(sr))?;
    Ok(oracle)
}

fn perfect_instance(sr: &SpectralResolution) -> Result<Observable, String> {
    let oracle = lib(oracle_observable(sr))?;
    for mode in ExtensionMode::ALL {
        let x = lib(lexspec::extend_observable(sr, mode))?;
        ensure(x.same_masses(&oracle), || format!("mode {mode} differs"))?;
    }
    let units = lib(block_units(sr))?;
    ensure(&units.identity_sum == sr.top(), || "unit identity".into())?;
    ensure(lib(positive_form(sr))?.all_nonnegative(), || {
        "negative term in positive form".into()
    })?;
    let cps = characteristic_points(sr);
    ensure(cps.len() == 1, || {
        format!("{} characteristic points", cps.len())
    })?;
    let t0 = &cps[0].point;
    for (axis, t0_axis) in t0.iter().enumerate() {
        let cands = endpoint_candidates(sr.grid().axis(axis));
        for lo in &cands {
            for hi in cands.iter().filter(|hi| lo <= *hi) {
                let Some((case, expected)) = slice_case(lo, hi, t0_axis) else {
                    continue;
                };
                let d = lib(sr.fun().delta(axis, lo.clone(), hi.clone()))?;
                let slice = lib(SpectralResolution::new(d, sr.ctx(), Kind::Pseudo))?;
                let got = characteristic_points(&slice);
                ensure(got.is_empty() != expected, || {
                    format!("case {case} at ({lo}, {hi})")
                })?;
            }
        }
    }
    Ok(oracle)
}

fn sum_params(n: usize) -> GenParams {
    GenParams::perfect()
        .with_n(n)
        .with_ctx(MvContext::new(1, 1).unwrap())
}

fn sum_triples(seed: u64, count: usize) -> Vec<[Observable; 3]> {
    let mut g = rng(seed);
    (0..count)
        .map(|i| {
            let p = sum_params(1 + i % 2);
            [0, 1, 2].map(|_| random_observable(&mut g, &p))
        })
        .collect()
}

/// Sums `a + b` and `(a + b) + c` after checking the algebraic laws.
fn sum_laws([a, b, c]: &[Observable; 3]) -> Result<(Observable, Observable), String> {
    let ab = lib(sum_observables(a, b))?;
    ensure(ab.same_masses(&lib(sum_observables(b, a))?), || {
        "not commutative".into()
    })?;
    let left = lib(sum_observables(&ab, c))?;
    let right = lib(sum_observables(a, &lib(sum_observables(b, c))?))?;
    ensure(left.same_masses(&right), || "not associative".into())?;
    let o = lib(neutral_observable(a.ctx(), a.n()))?;
    let ao = lib(sum_observables(a, &o))?;
    for i in 0..a.n() {
        let lhs = lib(marginal(&ab, i))?;
        let rhs = lib(sum_observables(
            &lib(marginal(a, i))?,
            &lib(marginal(b, i))?,
        ))?;
        ensure(lhs.same_masses(&rhs), || {
            format!("marginal {i} not homomorphic")
        })?;
        ensure(
            lib(marginal(&ao, i))?.same_masses(&lib(marginal(a, i))?),
            || "neutral marginal".into(),
        )?;
    }
    if a.n() == 1 {
        ensure(ao.same_masses(a), || "x + o ≠ x".into())?;
    }
    Ok((ab, left))
}

fn batch<T, U>(items: &[T], f: impl Fn(&T) -> Result<U, String>) -> Result<Vec<U>, String> {
    items
        .iter()
        .enumerate()
        .map(|(i, x)| f(x).map_err(|e| format!("item {i}: {e}")))
        .collect()
}

fn refine_obs(x: &Observable) -> Observable {
    x.refine(&extra_breakpoints(x.grid())).unwrap()
}

fn same_all(a: &[Observable], b: &[Observable]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_masses(y))
}

// ---------------------------------------------------------------------------

struct Runner {
    failures: usize,
}

impl Runner {
    fn run(&mut self, name: &str, limit: Duration, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let verdict = match (&result, took <= limit) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over {:.0?} limit)", limit),
            (Err(e), _) => format!("FAIL: {e}"),
        };
        if !verdict.starts_with("PASS") {
            self.failures += 1;
        }
        println!("{verdict:<6} {name} [{took:.2?}]");
    }
}

fn main() -> ExitCode {
    let seed = seed_from_env(20240601);
    let mut r = Runner { failures: 0 };
    let secs = Duration::from_secs;

    r.run(
        "1 single-breakpoint worked example",
        secs(1),
        single_jump_example,
    );
    r.run(
        "2 meet joint and its overshooting meet sum",
        secs(1),
        meet_joint_example,
    );
    r.run(
        "3 two-point staircase on a 2-perfect algebra",
        secs(1),
        staircase_example,
    );

    let general = random_batch(seed, 200, &GenParams::default());
    let perfect = random_batch(seed.wrapping_add(1), 100, &GenParams::perfect());
    let triples = sum_triples(seed.wrapping_add(2), 50);

    let mut coarse = (Vec::new(), Vec::new(), Vec::new());
    r.run(
        "4 200 random instances: validity, extension, decomposition, uniqueness",
        secs(60),
        || {
            coarse.0 = batch(&general, random_instance)?;
            Ok(())
        },
    );
    r.run(
        "5 100 perfect instances: all modes, units, positive form, slice table",
        secs(60),
        || {
            coarse.1 = batch(&perfect, perfect_instance)?;
            Ok(())
        },
    );
    r.run("6 50 observable triples: sum laws", secs(30), || {
        coarse.2 = batch(&triples, sum_laws)?;
        Ok(())
    });
    r.run(
        "7 criteria 4-6 on refined grids give identical results",
        secs(120),
        || {
            let fine: Vec<_> = general.iter().map(refined).collect();
            let fine = batch(&fine, random_instance)?;
            ensure(same_all(&fine, &coarse.0), || {
                "criterion 4 masses changed".into()
            })?;
            let fine: Vec<_> = perfect.iter().map(refined).collect();
            let fine = batch(&fine, perfect_instance)?;
            ensure(same_all(&fine, &coarse.1), || {
                "criterion 5 masses changed".into()
            })?;
            let fine: Vec<_> = triples
                .iter()
                .map(|t| t.clone().map(|x| refine_obs(&x)))
                .collect();
            let fine = batch(&fine, sum_laws)?;
            let pairs = |v: &[(Observable, Observable)]| -> Vec<Observable> {
                v.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect()
            };
            ensure(same_all(&pairs(&fine), &pairs(&coarse.2)), || {
                "criterion 6 sums changed".into()
            })
        },
    );

    println!("seed {seed}: {} of 7 criteria failed", r.failures);
    if r.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
