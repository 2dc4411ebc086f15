//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for each
//! and exits non-zero if any criterion fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use simplex_proj::{
    assemble_projection, find_support_size, gap_sequence, kkt_check, objective_sequence,
    oracle_project, project, sort_descending, RealVector, TargetSum,
};

const EPS: f64 = f64::EPSILON;

type Criterion = fn() -> Outcome;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn worked_example() -> Outcome {
    let a = RealVector::new(EXAMPLE_ROW.to_vec()).unwrap();
    let p = project(&a).unwrap();
    let x_err = max_abs_diff(&p.x, &EXAMPLE_X);
    let shift_err = (p.shift - EXAMPLE_SHIFT).abs();
    let dist_err = (p.squared_distance - EXAMPLE_DISTANCE).abs();
    let ok = p.support_size == 4 && shift_err <= 1e-10 && x_err <= 1e-9 && dist_err <= 1e-12;
    outcome(
        ok,
        format!(
            "m*={} lambda*={:e} (err {shift_err:.1e}) x err {x_err:.1e} distance={:e} (err {dist_err:.1e})",
            p.support_size, p.shift, p.squared_distance
        ),
    )
}

fn worked_gap_sequence() -> Outcome {
    let a = RealVector::new(EXAMPLE_ROW.to_vec()).unwrap();
    let g = gap_sequence(&sort_descending(&a));
    let err = max_abs_diff(g.s(), &EXAMPLE_S);
    outcome(err <= 1e-6, format!("max |S - quoted| = {err:.1e}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(3);
    let mut failures = 0;
    let mut worst = 0.0f64;
    let mut total = 0;
    for n in 1..=10 {
        for _ in 0..1000 {
            let a = uniform_vector(&mut rng, n, -2.0, 2.0);
            let core = project(&a).unwrap();
            let oracle = oracle_project(&a, TargetSum::ONE).unwrap();
            let err = max_abs_diff(&core.x, &oracle.x);
            worst = worst.max(err);
            total += 1;
            if err > 1e-9 {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(60),
        format!("{total} vectors, {failures} mismatches, worst {worst:.1e}, {elapsed:.2?}"),
    )
}

fn kkt_suite() -> Outcome {
    let mut rng = rng(4);
    let mut failures = 0;
    let mut total = 0;
    let mut worst_ratio = 0.0f64;
    for n in [100, 1_000, 10_000, 100_000] {
        for i in 0..100 {
            // Alternate between a narrow and a wide entry range.
            let scale = if i % 2 == 0 { 2.0 } else { 1e3 };
            let a = uniform_vector(&mut rng, n, -scale, scale);
            let p = project(&a).unwrap();
            let tol = 1e-8 * inf_norm(&a).max(1.0);
            let r = kkt_check(&a, &p.x, TargetSum::ONE, tol).unwrap();
            worst_ratio = worst_ratio.max(r.max_violation / tol);
            total += 1;
            if !r.passed() {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{total} vectors, {failures} failures, worst violation/tol {worst_ratio:.1e}"),
    )
}

fn monotonicity_suite() -> Outcome {
    let mut rng = rng(5);
    let mut s_violations = 0;
    let mut f_violations = 0;
    let mut mismatches = 0;
    let mut worst_rel = 0.0f64;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=200);
        let a = uniform_vector(&mut rng, n, -2.0, 2.0);
        let sv = sort_descending(&a);
        let g = gap_sequence(&sv);
        let f = objective_sequence(&sv, &g, TargetSum::ONE);
        s_violations += g.s().windows(2).filter(|w| w[1] < w[0]).count();
        f_violations += f.windows(2).filter(|w| w[1] > w[0]).count();
        let m = find_support_size(&g, TargetSum::ONE);
        let d = project(&a).unwrap().squared_distance;
        let rel = if d == 0.0 {
            f[m - 1].abs()
        } else {
            (f[m - 1] - d).abs() / d
        };
        worst_rel = worst_rel.max(rel);
        if rel > 1e-9 {
            mismatches += 1;
        }
    }
    outcome(
        s_violations == 0 && f_violations == 0 && mismatches == 0,
        format!(
            "S violations {s_violations}, f violations {f_violations}, f(m*) mismatches {mismatches} (worst rel {worst_rel:.1e})"
        ),
    )
}

fn property_suite() -> Outcome {
    const TRIALS: usize = 1000;
    let mut rng = rng(6);
    let random_instance = |rng: &mut rand_chacha::ChaCha8Rng| {
        let n = rng.random_range(1..=100);
        uniform_vector(rng, n, -2.0, 2.0)
    };

    let mut idempotence = 0;
    let mut equivariance = 0;
    let mut shift_inv = 0;
    let mut nonexpansive = 0;

    for _ in 0..TRIALS {
        let a = random_instance(&mut rng);
        let n = a.len() as f64;
        let x = project(&a).unwrap().x;

        let xx = project(&x).unwrap().x;
        if max_abs_diff(&xx, &x) > n * EPS {
            idempotence += 1;
        }

        let sigma = random_permutation(&mut rng, a.len());
        let permuted = RealVector::new(permute(&a, &sigma)).unwrap();
        if project(&permuted).unwrap().x.as_slice() != permute(&x, &sigma).as_slice() {
            equivariance += 1;
        }

        for c in [-10.0, -1.0, 0.5, 10.0] {
            let shifted = RealVector::new(a.iter().map(|v| v + c).collect()).unwrap();
            let xs = project(&shifted).unwrap().x;
            if max_abs_diff(&xs, &x) > n * EPS * f64::abs(c) {
                shift_inv += 1;
            }
        }

        let b = uniform_vector(&mut rng, a.len(), -2.0, 2.0);
        let y = project(&b).unwrap().x;
        if l2_diff(&x, &y) > l2_diff(&a, &b) + 4.0 * n * EPS {
            nonexpansive += 1;
        }
    }
    outcome(
        idempotence + equivariance + shift_inv + nonexpansive == 0,
        format!(
            "{TRIALS} instances: idempotence {idempotence}, permutation {equivariance}, uniform shift {shift_inv}/{}, non-expansive {nonexpansive} failures",
            4 * TRIALS
        ),
    )
}

fn boundary_non_uniqueness() -> Outcome {
    let a = RealVector::new(vec![1.5, 0.5]).unwrap();
    let sv = sort_descending(&a);
    let g = gap_sequence(&sv);
    let p = project(&a).unwrap();
    let with_two = assemble_projection(&sv, &g, 2, TargetSum::ONE).unwrap();
    let with_one = assemble_projection(&sv, &g, 1, TargetSum::ONE).unwrap();
    let gap = max_abs_diff(&with_one.x, &with_two.x);
    let ok = g.s()[1] == 1.0 && p.x.as_slice() == [1.0, 0.0] && gap <= EPS;
    outcome(
        ok,
        format!(
            "S_2 = {}, x* = {:?}, |x(m=1) - x(m=2)| = {gap:e}",
            g.s()[1],
            p.x.as_slice()
        ),
    )
}

fn time_projection(a: &RealVector) -> Duration {
    let start = Instant::now();
    std::hint::black_box(project(std::hint::black_box(a)).unwrap());
    start.elapsed()
}

fn performance() -> Outcome {
    let mut rng = rng(8);
    let small = uniform_vector(&mut rng, 100_000, -2.0, 2.0);
    let large = uniform_vector(&mut rng, 1_000_000, -2.0, 2.0);
    let single = time_projection(&large);
    // Interleave the two sizes so that drift affects both equally; keep the
    // best run of each.
    let (mut t_small, mut t_large) = (Duration::MAX, Duration::MAX);
    for _ in 0..9 {
        t_small = t_small.min(time_projection(&small));
        t_large = t_large.min(time_projection(&large));
    }
    let ratio = t_large.as_secs_f64() / t_small.as_secs_f64();
    outcome(
        single < Duration::from_secs(1) && ratio < 15.0,
        format!("n=1e6 first run {single:.2?}; best n=1e5 {t_small:.2?}, n=1e6 {t_large:.2?}, ratio {ratio:.1}"),
    )
}

fn cli_round_trip() -> Outcome {
    let dir = std::env::temp_dir().join(format!("simplex-proj-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("row.csv");
    let row: Vec<String> = EXAMPLE_ROW.iter().map(|v| format!("{v}")).collect();
    std::fs::write(&input, row.join(",") + "\n").unwrap();

    let out = Command::new(env!("CARGO_BIN_EXE_simplex-proj"))
        .args(["--mode", "vector", "--report", "--verify", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    let _ = std::fs::remove_dir_all(&dir);

    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    let field = |key: &str| -> Option<f64> {
        stderr
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix(key))
            .and_then(|v| v.parse().ok())
    };
    let m = field("m*=");
    let shift = field("lambda*=");
    let dist = field("distance=");
    let x: Vec<f64> = stdout
        .trim()
        .split(',')
        .filter_map(|v| v.parse().ok())
        .collect();

    let ok = out.status.code() == Some(0)
        && m == Some(4.0)
        && shift.is_some_and(|s| (s - EXAMPLE_SHIFT).abs() <= 1e-10)
        && dist.is_some_and(|d| (d - EXAMPLE_DISTANCE).abs() <= 1e-12)
        && x.len() == 8
        && max_abs_diff(&x, &EXAMPLE_X) <= 1e-9;
    outcome(
        ok,
        format!(
            "exit {:?}, report {:?}",
            out.status.code(),
            stderr.lines().next().unwrap_or("")
        ),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("worked example, full pipeline", worked_example),
        ("worked example, gap sequence", worked_gap_sequence),
        ("oracle equivalence, n = 1..10", oracle_equivalence),
        ("KKT certificates, n up to 1e5", kkt_suite),
        ("S and f monotonicity, f(m*) = distance", monotonicity_suite),
        (
            "idempotence, equivariance, shift invariance, non-expansiveness",
            property_suite,
        ),
        ("boundary non-uniqueness", boundary_non_uniqueness),
        ("performance at n = 1e6", performance),
        ("CLI round trip", cli_round_trip),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = check();
        if !r.passed {
            failed += 1;
        }
        println!(
            "criterion {}: {} - {name}: {} [{:.2?}]",
            i + 1,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail,
            start.elapsed()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
