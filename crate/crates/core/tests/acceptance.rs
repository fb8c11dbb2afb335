//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p spin-correlation --test acceptance`.

use std::f64::consts::{PI, TAU};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use spin_correlation::estimators::chsh_from_batches;
use spin_correlation::rationality::EXACTNESS_TOL;
use spin_correlation::*;

const N_LARGE: u64 = 1_000_000;

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn correlation(model: ModelSpec, a: f64, b: f64, n: u64, seed: u64) -> f64 {
    let s = DetectorSettings::from_degrees(a, b).expect("finite angles");
    let batch = run_experiment(&RunConfig::new(model, s, n, seed).expect("valid config")).expect("run");
    correlation_from_counts(&batch).real_value
}

fn spincorr(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_spincorr")).args(args).output().expect("spawn spincorr");
    assert!(out.status.success(), "spincorr {args:?} failed");
    out.stdout
}

/// Worked example at 2 significant figures / 1 decimal.
fn worked_example() -> Outcome {
    let s = DetectorSettings::from_degrees(47.4, 45.0).unwrap();
    let r = rationality_report(s.delta(), 10_000).unwrap();
    let x = format!("{:.1e}", r.target_fraction);
    let count = format!("{:.1}", r.real_count);
    let rel = r.relative_error.map(|e| format!("{e:.1}")).unwrap_or_default();
    let table = String::from_utf8(spincorr(&["reproduce-paper"])).unwrap();
    let table_ok = table.lines().any(|l| l.starts_with("real_count") && l.contains(" 4.4 "))
        && table.lines().any(|l| l.starts_with("relative_error") && l.contains(" 0.1 "));
    check(
        x == "4.4e-4" && count == "4.4" && r.nearest_m == 4 && rel == "0.1" && table_ok,
        format!("x={x} n*x={count} m={} rel={rel} table_ok={table_ok}", r.nearest_m),
    )
}

fn quantum_convergence() -> Outcome {
    let c = correlation(ModelSpec::QUANTUM, 60.0, 0.0, N_LARGE, 42);
    let err = (c + 0.5).abs();
    check(err <= 0.004, format!("C={c:.6} |C+0.5|={err:.6} (tol 0.004)"))
}

fn nonlocal_fidelity() -> Outcome {
    let mut worst = 0.0f64;
    let mut at = 0.0;
    for (i, k) in (0..=12).enumerate() {
        let deg = 15.0 * k as f64;
        let c = correlation(ModelSpec::NONLOCAL_STOCHASTIC, deg, 0.0, N_LARGE, 100 + i as u64);
        let err = (c + deg.to_radians().cos()).abs();
        if err > worst {
            worst = err;
            at = deg;
        }
    }
    check(worst <= 0.005, format!("max |C+cos D|={worst:.6} at D={at} (tol 0.005)"))
}

fn local_model_and_chsh() -> Outcome {
    let mut worst = 0.0f64;
    for (i, deg) in [0.0, 45.0, 90.0, 135.0, 180.0].into_iter().enumerate() {
        let c = correlation(ModelSpec::LOCAL_LINEAR, deg, 0.0, N_LARGE, 200 + i as u64);
        worst = worst.max((c - (-1.0 + 2.0 * deg.to_radians() / PI)).abs());
    }
    let quad = SettingsQuad::from_degrees(0.0, 90.0, 45.0, 135.0).unwrap();
    let s_for = |model| {
        let batches = run_quad(&RunConfig::new(model, quad, N_LARGE, 300).unwrap()).unwrap();
        chsh_from_batches(&batches).s_value
    };
    let s_local = s_for(ModelSpec::LOCAL_LINEAR);
    let s_quantum = s_for(ModelSpec::QUANTUM);
    check(
        worst <= 0.005 && s_local <= 2.02 && (2.78..=2.88).contains(&s_quantum),
        format!("max local err={worst:.6} (tol 0.005) S_local={s_local:.5} (<=2.02) S_qm={s_quantum:.5} (in [2.78,2.88])"),
    )
}

fn rationality_invariants() -> Outcome {
    let config = Config { cases: 1000, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (-4.0 * PI..4.0 * PI, 1u64..=N_LARGE);
    let result = runner.run(&strategy, |(delta, n)| {
        let r = rationality_report(delta, n).unwrap();
        let e = CorrelationEstimate::from_counts(&Counts::synthetic(n, r.nearest_m));
        prop_assert_eq!(e.denominator, n);
        prop_assert_eq!(e.numerator, 2 * r.nearest_m as i64 - n as i64);
        prop_assert_eq!((e.real_value * n as f64).round() as i64, e.numerator);
        prop_assert!(r.gap <= 0.5);
        prop_assert_eq!(r.exact, r.gap <= EXACTNESS_TOL);

        let tol = 1e-12 * (1.0 + n as f64);
        for other in [rationality_report(-delta, n).unwrap(), rationality_report(delta + TAU, n).unwrap()] {
            prop_assert_eq!(other.nearest_m, r.nearest_m);
            prop_assert_eq!(other.exact, r.exact);
            prop_assert_eq!(other.relative_error.is_some(), r.relative_error.is_some());
            prop_assert!((other.target_fraction - r.target_fraction).abs() <= tol);
            prop_assert!((other.real_count - r.real_count).abs() <= tol);
            prop_assert!((other.gap - r.gap).abs() <= tol);
            prop_assert!((other.binomial_sigma - r.binomial_sigma).abs() <= tol);
        }
        Ok(())
    });
    match result {
        Ok(()) => check(true, "1000 cases"),
        Err(e) => check(false, e.to_string()),
    }
}

fn determinism() -> Outcome {
    let args = ["simulate", "--model", "quantum", "--theta-a", "47.4", "--theta-b", "45", "--n", "10000", "--seed", "99"];
    let identical = spincorr(&args) == spincorr(&args);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let identical_json = spincorr(&json_args) == spincorr(&json_args);

    let s = DetectorSettings::from_degrees(90.0, 0.0).unwrap();
    let counts = |seed| run_experiment(&RunConfig::new(ModelSpec::QUANTUM, s, 10_000, seed).unwrap()).unwrap().counts;
    let distinct = (0..20u64).filter(|&i| counts(2 * i) != counts(2 * i + 1)).count();
    check(
        identical && identical_json && distinct == 20,
        format!("byte-identical csv={identical} json={identical_json}; distinct seed pairs {distinct}/20"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("1 worked-example reproduction", Duration::from_secs(1), worked_example),
        ("2 quantum convergence", Duration::from_secs(10), quantum_convergence),
        ("3 nonlocal model fidelity", Duration::from_secs(120), nonlocal_fidelity),
        ("4 local model and CHSH", Duration::from_secs(120), local_model_and_chsh),
        ("5 rationality invariants", Duration::from_secs(30), rationality_invariants),
        ("6 determinism", Duration::from_secs(5), determinism),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = outcome.passed && in_time;
        if !passed {
            failed += 1;
        }
        println!(
            "{} [{name}] {} ({:.2}s, limit {}s)",
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 6 criteria passed", 6 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
