//! Acceptance criteria. Each prints one `PASS`/`FAIL` line; the test fails
//! if any criterion does.
//!
//! Run with `cargo test --release -p timeobs --test acceptance -- --nocapture`.

use std::process::Command;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use timeobs_core::cosmology::{emergent_time_moment, window, CosmoParams, CosmoState};
use timeobs_core::numerics::integrate_1d;
use timeobs_core::povm::{
    ab_time_moment, arrival_distribution, auto_range, finite_aperture_mass, povm_mass,
    povm_total_mass,
};
use timeobs_core::wavepacket::builtin_profiles;
use timeobs_core::weights::{
    conditional_probability, conditional_state_expectation, dwell_time, mean_inverse_velocity,
    TimeWindow,
};
use timeobs_core::{Complex64, Dispersion, Interval, MomentumProfile, Wavepacket};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(start: Instant, limit: Duration, outcome: Outcome) -> Outcome {
    let elapsed = start.elapsed();
    match outcome {
        Ok(d) if elapsed <= limit => Ok(format!("{d}; {:.1}s", elapsed.as_secs_f64())),
        Ok(d) => Err(format!(
            "{d}; took {:.1}s > {}s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        )),
        Err(d) => Err(d),
    }
}

fn nonrel() -> Dispersion {
    Dispersion::nonrelativistic(1.0).unwrap()
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn classical_dwell_limit() -> Outcome {
    let start = Instant::now();
    let wp = Wavepacket::new(MomentumProfile::bump(5.0, 1.0).map_err(fail)?, nonrel());
    let (mean, spread) = wp.position_moments(1e-10).map_err(fail)?;
    let inv_v = mean_inverse_velocity(&wp, 1e-12).map_err(fail)?;
    let mut worst: f64 = 0.0;
    for factor in [100.0, 200.0, 400.0] {
        let len = factor * spread;
        let j = Interval::new(mean - 0.5 * len, mean + 0.5 * len).map_err(fail)?;
        let d = dwell_time(&wp, j, 1e-10).map_err(fail)?;
        worst = worst.max((d.value / len - inv_v).abs() / inv_v);
    }
    within(start, Duration::from_secs(60), check(worst <= 1e-2, format!("<1/v> = {inv_v:.8}, worst relative deviation {worst:.2e} for |J| in 100..400 widths")))
}

fn completeness() -> Outcome {
    let start = Instant::now();
    let budget = Duration::from_secs(60);
    let mut lines = Vec::new();
    let mut ok = true;
    let positive: Vec<MomentumProfile> = builtin_profiles()
        .into_iter()
        .filter(|p| p.support().lo() >= 0.0)
        .collect();
    if positive.is_empty() {
        return Err("no builtin profile supported in p > 0".into());
    }
    let share = budget / positive.len() as u32;
    for phi in positive {
        let began = Instant::now();
        let total = povm_total_mass(&phi, nonrel(), 1e-10).map_err(fail)?;
        // Double T until the mass passes 0.999, the quadrature gives up or
        // this profile's share of the time budget is spent.
        let mut t = 1.0;
        let mut history: Vec<(f64, f64)> = Vec::new();
        let mut stop = String::new();
        loop {
            match povm_mass(&phi, nonrel(), Interval::symmetric(t).map_err(fail)?, 1e-6) {
                Ok(m) => history.push((t, m)),
                Err(e) => {
                    stop = format!(", stopped at T={t}: {e}");
                    break;
                }
            }
            if history.last().unwrap().1 >= 0.999 || began.elapsed() > share {
                break;
            }
            t *= 2.0;
        }
        let &(t_last, m_last) = history.last().ok_or("no finite T evaluated")?;
        let reached = m_last >= 0.999;
        ok &= (total - 1.0).abs() <= 1e-6 && reached;
        let trend = match history.len() {
            n if n >= 2 && !reached => {
                let (t0, m0) = history[n - 2];
                let slope = ((1.0 - m_last) / (1.0 - m0)).ln() / (t_last / t0).ln();
                format!(", deficit ~ T^{slope:.2}{stop}")
            }
            _ => stop,
        };
        lines.push(format!(
            "{}: |1-total| {:.1e}, mass {m_last:.5} at T={t_last}{trend}",
            phi.label(),
            (total - 1.0).abs()
        ));
    }
    within(
        start,
        budget + Duration::from_secs(30),
        check(ok, lines.join("; ")),
    )
}

fn moment_identification() -> Outcome {
    let start = Instant::now();
    let cases = [
        (5.0, 1.0, -5.0),
        (3.0, 1.0, -2.0),
        (4.0, 0.5, -3.0),
        (2.0, 0.5, 1.0),
        (6.0, 1.5, -4.0),
    ];
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for (p0, w, x0) in cases {
        let phi = MomentumProfile::bump(p0, w).map_err(fail)?.translated(x0);
        let range = auto_range(&phi, nonrel(), 1e-6, 1e-8).map_err(fail)?;
        let bins = range.partition(4096).map_err(fail)?;
        let dist = arrival_distribution(&phi, nonrel(), &bins, 1e-7).map_err(fail)?;
        let ab = ab_time_moment(&phi, nonrel(), 1e-12).map_err(fail)?;
        let rel = (dist.first_moment - ab).abs() / ab.abs();
        worst = worst.max(rel);
        lines.push(format!(
            "bump({p0},{w}) x0={x0}: {:.6} vs {ab:.6}",
            dist.first_moment
        ));
    }
    lines.push(format!("worst relative {worst:.2e}"));
    within(
        start,
        Duration::from_secs(300),
        check(worst <= 1e-3, lines.join("; ")),
    )
}

fn aperture_convergence() -> Outcome {
    let phi = MomentumProfile::bump(2.0, 1.0)
        .map_err(fail)?
        .translated(-1.0);
    let i = Interval::new(0.0, 1.0).map_err(fail)?;
    let exact = povm_mass(&phi, nonrel(), i, 1e-12).map_err(fail)?;
    let mut gaps = Vec::new();
    for a in [0.5, 0.25, 0.125, 0.0625] {
        gaps.push((finite_aperture_mass(&phi, nonrel(), a, i, 1e-12).map_err(fail)? - exact).abs());
    }
    let monotone = gaps.windows(2).all(|g| g[1] < g[0]);
    let last = *gaps.last().unwrap();
    let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.2e}")).collect();
    check(
        monotone && last < 1e-2,
        format!("mass {exact:.8}, gaps [{}]", shown.join(", ")),
    )
}

fn relativistic_reduction() -> Outcome {
    let m = 1000.0;
    // Support [1, 10] = [0.001 m, 0.01 m].
    let phi = MomentumProfile::bump(5.5, 4.5)
        .map_err(fail)?
        .translated(-0.5);
    let nr = Dispersion::nonrelativistic(m).map_err(fail)?;
    let rel = Dispersion::relativistic(m).map_err(fail)?;
    let range = auto_range(&phi, nr, 1e-4, 1e-8).map_err(fail)?;
    let bins = range.partition(64).map_err(fail)?;
    let a = arrival_distribution(&phi, nr, &bins, 1e-7).map_err(fail)?;
    let b = arrival_distribution(&phi, rel, &bins, 1e-7).map_err(fail)?;
    let worst = a
        .masses()
        .zip(b.masses())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    check(
        worst <= 1e-3,
        format!(
            "64 bins on [{:.0}, {:.0}], worst bin difference {worst:.2e}",
            range.lo(),
            range.hi()
        ),
    )
}

fn dirac_window_limit() -> Outcome {
    let wp = Wavepacket::new(MomentumProfile::bump(5.0, 1.0).map_err(fail)?, nonrel());
    let t = |t: f64| Complex64::new(t, 0.0);
    let t2 = |t: f64| Complex64::new(t * t, 0.0);
    let mut ok = true;
    let mut lines = Vec::new();
    let mut prev: Option<f64> = None;
    for w in [0.1, 0.05, 0.025] {
        let g = TimeWindow::Gaussian {
            center: 2.0,
            width: w,
        };
        let e1 = (conditional_state_expectation(&wp, g, &t, 1e-12)
            .map_err(fail)?
            .re
            - 2.0)
            .abs();
        // f = t has no w² term by symmetry; f = t² exposes it with unit
        // coefficient.
        let e2 = (conditional_state_expectation(&wp, g, &t2, 1e-12)
            .map_err(fail)?
            .re
            - 4.0)
            .abs();
        ok &= e1 <= 1e-12 + 1e-6 * w * w;
        ok &= (e2 / (w * w) - 1.0).abs() <= 1e-6;
        if let Some(p) = prev {
            ok &= (p / e2 - 4.0).abs() <= 1e-5;
        }
        prev = Some(e2);
        lines.push(format!(
            "w={w}: |<t>-2| {e1:.1e}, (<t^2>-4)/w^2 {:.8}",
            e2 / (w * w)
        ));
    }
    check(ok, lines.join("; "))
}

fn big_bang_law() -> Outcome {
    let params = CosmoParams::new(1.0).map_err(fail)?;
    let phi = MomentumProfile::bump(3.0, 1.0).map_err(fail)?;
    let state = CosmoState::single_sector(params, phi.clone(), true).translated(0.7);
    let ps = [1e-2, 1e-1, 1.0, 1e1, 1e2];
    let pts: Vec<(f64, f64)> = ps
        .iter()
        .map(|&p| emergent_time_moment(&state, p, 1e-12).map(|t| (p.ln(), t.value)))
        .collect::<Result<_, _>>()
        .map_err(fail)?;
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let residual = pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).abs())
        .fold(0.0, f64::max);
    // <ω/k> straight from the amplitude, with its own quadrature call.
    let support = state.plus.support();
    let weight = |f: &dyn Fn(f64) -> f64| {
        integrate_1d(
            |k| Complex64::new(f(k) * state.plus.eval(k).norm_sqr(), 0.0),
            support,
            1e-14,
        )
    };
    let num = weight(&|k| params.omega(k) / k).map_err(fail)?.value.re;
    let den = weight(&|_| 1.0).map_err(fail)?.value.re;
    let expected = num / den;
    let rel = (slope - expected).abs() / expected.abs();
    check(
        residual <= 1e-10 && rel <= 1e-6,
        format!("slope {slope:.10} vs <w/k> {expected:.10} (rel {rel:.1e}), affine residual {residual:.1e}"),
    )
}

fn window_conventions() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 0..100 {
        let a = 0.05 + 0.09 * n as f64;
        let p = -9.9 + 0.2 * n as f64 + 0.013;
        let got = window(Interval::symmetric(0.5 * a).map_err(fail)?, p).map_err(fail)?;
        let want = (a * p).sin() / p;
        worst = worst.max((got - Complex64::new(want, 0.0)).norm() / want.abs().max(1e-300));
    }
    check(
        worst <= 1e-14,
        format!("100 points, worst relative difference {worst:.1e}"),
    )
}

fn validate_exits_zero() -> Outcome {
    let o = Command::new(env!("CARGO_BIN_EXE_timeobs"))
        .args(["validate", "--tol", "1e-9"])
        .output()
        .map_err(fail)?;
    let text = String::from_utf8_lossy(&o.stdout);
    let rows = text.lines().skip(1).count();
    let passed = text
        .lines()
        .skip(1)
        .filter(|l| l.ends_with(",true"))
        .count();
    check(
        o.status.code() == Some(0) && rows == 10,
        format!("{passed}/{rows} cases passed, exit {:?}", o.status.code()),
    )
}

fn measure_properties() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 50,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = (
        2.0f64..5.0,
        0.5f64..1.5,
        3.0f64..6.0,
        0.3f64..0.6,
        -1.0f64..1.0,
        -2.0f64..0.5,
        -1.5f64..0.5,
        0.1f64..1.0,
        0.1f64..1.5,
        -1.0f64..0.0,
        0.3f64..1.5,
    );
    let mut worst_add: f64 = 0.0;
    let mut worst_neg: f64 = 0.0;
    let mut failures = Vec::new();
    for case in 0..50 {
        let (p1, w1, p2, s2, c, x0, lo, l1, l2, jl, jh) =
            strategy.new_tree(&mut runner).map_err(fail)?.current();
        let phi = MomentumProfile::bump(p1, w1)
            .map_err(fail)?
            .plus(
                &MomentumProfile::odd_gaussian(p2, s2)
                    .map_err(fail)?
                    .restricted(Interval::new(0.0, f64::INFINITY).map_err(fail)?)
                    .scaled(Complex64::new(0.0, c)),
            )
            .translated(x0);
        let (mid, hi) = (lo + l1, lo + l1 + l2);
        let iv = |a: f64, b: f64| Interval::new(a, b).unwrap();
        let wp = Wavepacket::new(phi.clone(), nonrel());
        let j = iv(jl, jh);
        let cp = |a, b| conditional_probability(&wp, iv(a, b), j, TOL).map(|c| c.value);
        let am = |a, b| povm_mass(&phi, nonrel(), iv(a, b), TOL);
        for (name, f) in [
            (
                "P(I|J)",
                &cp as &dyn Fn(f64, f64) -> timeobs_core::Result<f64>,
            ),
            ("arrival", &am),
        ] {
            let (a, b, whole) = (
                f(lo, mid).map_err(fail)?,
                f(mid, hi).map_err(fail)?,
                f(lo, hi).map_err(fail)?,
            );
            let add = (a + b - whole).abs();
            worst_add = worst_add.max(add);
            worst_neg = worst_neg.max(-a.min(b));
            if a < -10.0 * TOL || b < -10.0 * TOL || add > 2.0 * TOL || whole < a.max(b) - 2.0 * TOL
            {
                failures.push(format!("case {case} {name}: {a} + {b} vs {whole}"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!("100 checks on 50 cases, worst additivity defect {worst_add:.1e}, worst negativity {:.1e} {}", worst_neg.max(0.0), failures.join("; ")),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("classical dwell-time limit", classical_dwell_limit),
        ("arrival completeness", completeness),
        (
            "first moment equals Aharonov-Bohm moment",
            moment_identification,
        ),
        ("finite-aperture convergence", aperture_convergence),
        ("relativistic reduction", relativistic_reduction),
        ("Dirac-window limit", dirac_window_limit),
        ("linear big-bang law", big_bang_law),
        ("scale window equals sin(ap)/p", window_conventions),
        ("oracle equivalence via validate", validate_exits_zero),
        ("measure properties", measure_properties),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", n + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
