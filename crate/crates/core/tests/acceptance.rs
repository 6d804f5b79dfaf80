//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zigzag_core::bench::{fit_exponent, run_bench, BenchOp};
use zigzag_core::dense::relative_error;
use zigzag_core::metric::{quasi_hermiticity_residual, theta_from_eigenkets, BANDWIDTH_TOL};
use zigzag_core::oracle::{dense_mul, expm_series, sylvester_metric_space};
use zigzag_core::{
    bandwidth, build_theta, certify_positive, dyson_factor, eigen_q, eigen_qtilde, evolve,
    generate, gzz_inverse, gzz_mul, propagator, time_grid, to_zigzag_basis, zz_eigen,
    CouplingPattern, DenseMatrix, Error, GeneratorConfig, GzzHamiltonian, Pattern, Spectrum,
    StateVector, ToDense, Validate, Variant, WeightVector, ZigZagHamiltonian,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const PATTERNS: [Pattern; 3] = [Pattern::Full, Pattern::Zigzag, Pattern::Banded(1)];

fn model(dim: usize, seed: u64) -> GzzHamiltonian {
    let pattern = PATTERNS[(seed % 3) as usize];
    generate(&GeneratorConfig::new(dim, pattern, seed)).expect("generator")
}

fn weights(dim: usize, rng: &mut ChaCha8Rng) -> WeightVector {
    WeightVector::new((0..dim).map(|_| rng.gen_range(0.1..10.0)).collect()).expect("positive")
}

/// Diagonalizable models for 2m = 2..64.
fn corpus() -> Vec<GzzHamiltonian> {
    let mut out = Vec::new();
    for (dim, count) in [(2, 60), (4, 60), (8, 60), (16, 40), (32, 20), (64, 10)] {
        for s in 0..count {
            out.push(model(dim, 10_000 * dim as u64 + s));
        }
    }
    out
}

fn closure_pairs() -> impl Iterator<Item = (GzzHamiltonian, GzzHamiltonian)> {
    [2usize, 4, 8, 16].into_iter().flat_map(|dim| {
        (0..200u64).map(move |s| {
            (
                model(dim, 2 * s + 7 * dim as u64),
                model(dim, 2 * s + 1 + 7 * dim as u64 + 5000),
            )
        })
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut inclusion_failures = 0;
    let mut count = 0;
    for (a, b) in closure_pairs() {
        let c = gzz_mul(&a, &b).expect("same size");
        let oracle = dense_mul(&a.to_dense(), &b.to_dense()).expect("square");
        worst = worst.max(relative_error(&c.to_dense(), &oracle).expect("shape"));
        let allowed = CouplingPattern::of(&a).union(&CouplingPattern::of(&b));
        if !CouplingPattern::of(&c).is_subset(&allowed) {
            inclusion_failures += 1;
        }
        count += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-12 && inclusion_failures == 0 && secs < 5.0,
        format!("{count} pairs, max rel err {worst:.2e} (<= 1e-12), pattern violations {inclusion_failures}, {secs:.2}s (< 5s)"),
    )
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (a, _) in closure_pairs() {
        let inv = match gzz_inverse(&a) {
            Ok(inv) => inv,
            Err(e) => return outcome(false, format!("inverse failed: {e}")),
        };
        let id = DenseMatrix::identity(a.dim());
        let right = gzz_mul(&a, &inv).expect("same size").to_dense();
        worst = worst.max(relative_error(&right, &id).expect("shape"));
        count += 1;
    }
    outcome(
        worst <= 1e-11,
        format!("{count} models, max ‖A·A⁻¹ − I‖/‖I‖ {worst:.2e} (<= 1e-11)"),
    )
}

fn jordan_case(seed: u64) -> GzzHamiltonian {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=6);
    let base = model(2 * m, seed);
    let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
    let mut lm = base.lambda_minus().to_vec();
    lm[j] = base.lambda_plus()[i];
    let mut triplets: Vec<_> = base
        .couplings()
        .iter()
        .filter(|c| (c.i, c.j) != (i, j))
        .map(|c| (c.i, c.j, c.value))
        .collect();
    triplets.push((i, j, rng.gen_range(0.5..2.0)));
    GzzHamiltonian::new(base.lambda_plus().to_vec(), lm, triplets).expect("valid model")
}

fn criterion_3() -> Outcome {
    let mut worst_q: f64 = 0.0;
    let mut worst_qt: f64 = 0.0;
    let mut count = 0;
    for h in corpus() {
        let hd = h.to_dense();
        let lambda = DenseMatrix::from_diagonal(&h.spectrum());
        let norm = hd.frobenius_norm();
        let q = eigen_q(&h).expect("diagonalizable").to_dense();
        let qt = eigen_qtilde(&h).expect("diagonalizable").to_dense();
        let rq = hd
            .matmul(&q)
            .unwrap()
            .sub(&q.matmul(&lambda).unwrap())
            .unwrap()
            .frobenius_norm();
        let rqt = hd
            .transpose()
            .matmul(&qt)
            .unwrap()
            .sub(&qt.matmul(&lambda).unwrap())
            .unwrap()
            .frobenius_norm();
        worst_q = worst_q.max(rq / norm);
        worst_qt = worst_qt.max(rqt / norm);
        count += 1;
    }
    let mut rejected = 0;
    for seed in 0..50 {
        let h = jordan_case(900 + seed);
        let flagged = !h.validate().is_diagonalizable();
        let q = matches!(eigen_q(&h), Err(Error::NonDiagonalizable { .. }));
        let qt = matches!(eigen_qtilde(&h), Err(Error::NonDiagonalizable { .. }));
        if flagged && q && qt {
            rejected += 1;
        }
    }
    outcome(
        worst_q <= 1e-12 && worst_qt <= 1e-12 && rejected == 50,
        format!(
            "{count} models up to 2m=64, max ‖HQ−QΛ‖/‖H‖ {worst_q:.2e}, max ‖HᵀQ̃−Q̃Λ‖/‖H‖ {worst_qt:.2e} (<= 1e-12); Jordan injections rejected {rejected}/50"
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut residual, mut assembly): (f64, f64) = (0.0, 0.0);
    let mut not_positive = 0;
    let mut count = 0;
    for h in corpus() {
        let w = weights(h.dim(), &mut rng);
        let theta = build_theta(&h, &w).expect("diagonalizable");
        let t = theta.theta();
        residual = residual.max(quasi_hermiticity_residual(&h.to_dense(), t).unwrap());
        let r1 = theta_from_eigenkets(&h, &w).unwrap();
        assembly = assembly.max(t.sub(&r1).unwrap().frobenius_norm() / t.frobenius_norm());
        if !certify_positive(t)
            .map(|p| p.is_positive())
            .unwrap_or(false)
        {
            not_positive += 1;
        }
        count += 1;
    }
    outcome(
        residual <= 1e-12 && assembly <= 1e-13 && not_positive == 0,
        format!(
            "{count} metrics, max quasi-Hermiticity residual {residual:.2e} (<= 1e-12), rank-one vs factored {assembly:.2e} (<= 1e-13), not certified positive {not_positive}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut wrong = Vec::new();
    let mut count = 0;
    for dim in [2usize, 4, 6, 8] {
        let mut seed = 50_000 * dim as u64;
        let mut done = 0;
        while done < 50 {
            let h = model(dim, seed);
            seed += 1;
            if !h.validate().has_distinct_spectrum() {
                continue;
            }
            let space = sylvester_metric_space(&h.to_dense()).expect("square");
            if space.nullspace_dim != dim {
                wrong.push((dim, space.nullspace_dim));
            }
            done += 1;
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        wrong.is_empty() && secs < 60.0,
        format!(
            "{count} models, nullspace dim != 2m in {} cases {wrong:?}, {secs:.2}s (< 60s)",
            wrong.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for h in corpus() {
        let w = weights(h.dim(), &mut rng);
        let hd = h.to_dense();
        let dy = dyson_factor(&h, &w).expect("diagonalizable");
        let partner = dy.hermitian_partner(&hd).unwrap();
        let lambda = DenseMatrix::from_diagonal(&h.spectrum());
        worst = worst.max(partner.sub(&lambda).unwrap().frobenius_norm() / hd.frobenius_norm());
        count += 1;
    }
    outcome(
        worst <= 1e-10,
        format!("{count} models, max ‖ΩHΩ⁻¹ − Λ‖/‖H‖ {worst:.2e} (<= 1e-10)"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0;
    let (mut widest_native, mut widest_zz) = (0, 0);
    for case in 0..100u64 {
        let dim = 2 * rng.gen_range(2..=20);
        let h = generate(&GeneratorConfig::new(dim, Pattern::Zigzag, 70_000 + case)).unwrap();
        let w = weights(dim, &mut rng);
        let theta = build_theta(&h, &w).unwrap().into_theta();
        let native = bandwidth(&theta, BANDWIDTH_TOL).unwrap();
        let zz = bandwidth(&to_zigzag_basis(&theta).unwrap(), BANDWIDTH_TOL).unwrap();
        widest_native = widest_native.max(native);
        widest_zz = widest_zz.max(zz);
        if native > 3 || zz > 2 {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("100 zig-zag models, widest bandwidth {widest_native} (<= 3) and {widest_zz} after pair swap (<= 2), violations {violations}"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let dim = rng.gen_range(2..=24);
        let variant = if case % 2 == 0 {
            Variant::ZZ
        } else {
            Variant::TZ
        };
        // distinct diagonal keeps every coupled pair apart
        let mut a: Vec<f64> = (0..dim)
            .map(|k| k as f64 + rng.gen_range(0.1..0.9))
            .collect();
        for k in (1..dim).rev() {
            a.swap(k, rng.gen_range(0..=k));
        }
        let c = (0..dim - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let z = ZigZagHamiltonian::new(variant, a, c).unwrap();
        let zd = z.to_dense();
        let v = zz_eigen(&z).unwrap().to_dense();
        let r = zd
            .matmul(&v)
            .unwrap()
            .sub(&v.matmul(&DenseMatrix::from_diagonal(z.a())).unwrap())
            .unwrap()
            .frobenius_norm();
        worst = worst.max(r / zd.frobenius_norm());
    }
    let z = ZigZagHamiltonian::new(Variant::TZ, vec![4.0, 3.0, 2.0, 1.0], vec![1.0; 3]).unwrap();
    let q = zz_eigen(&z).unwrap().c().to_vec();
    let literal = q == [-1.0, -1.0, -1.0];
    outcome(
        worst <= 1e-12 && literal,
        format!(
            "100 random ZZ/TZ cases, max residual {worst:.2e} (<= 1e-12); a=(4,3,2,1), c=(1,1,1) gives q = {q:?}, expected [-1.0, -1.0, -1.0]{}",
            if literal { "" } else { " (the residual-consistent eigenvector has alternating signs)" }
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let times = time_grid(0.0, 10.0, 100);
    let (mut drift, mut series): (f64, f64) = (0.0, 0.0);
    for case in 0..50u64 {
        let dim = [2, 4, 8, 16, 32][(case % 5) as usize];
        let h = model(dim, 90_000 + case);
        let w = weights(dim, &mut rng);
        let psi0 = StateVector::new(
            (0..dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap();
        let traj = evolve(&h, &psi0, &times, &w).unwrap();
        drift = drift.max(traj.theta_drift());

        let hd = h.to_dense();
        let t = 20.0 / hd.frobenius_norm() * rng.gen_range(0.1..1.0);
        let u = propagator(&h, t).unwrap();
        let oracle = expm_series(&hd.to_complex().scale(Complex64::new(0.0, -t)), 1e-15).unwrap();
        series = series.max(relative_error(&u, &oracle).unwrap());
    }
    outcome(
        drift <= 1e-10 && series <= 1e-8,
        format!("50 triples, max Θ-norm drift {drift:.2e} (<= 1e-10), propagator vs series {series:.2e} (<= 1e-8)"),
    )
}

fn criterion_10() -> Outcome {
    let rows = match run_bench(&[64, 128, 256, 512, 1024], 3) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let series = |op: BenchOp, dense: bool, max_dim: usize| -> Vec<(f64, f64)> {
        rows.iter()
            .filter(|r| r.op == op && r.dim <= max_dim)
            .filter_map(|r| {
                let y = if dense { r.dense_ns? } else { r.structured_ns };
                Some((r.dim as f64, y))
            })
            .collect()
    };
    let inv_s = fit_exponent(&series(BenchOp::Inverse, false, 1024)).unwrap_or(f64::NAN);
    let eig_s = fit_exponent(&series(BenchOp::Eigen, false, 1024)).unwrap_or(f64::NAN);
    let inv_d = fit_exponent(&series(BenchOp::Inverse, true, 512)).unwrap_or(f64::NAN);
    let slower: Vec<String> = rows
        .iter()
        .filter(|r| r.dense_ns.is_some_and(|d| r.structured_ns >= d))
        .map(|r| format!("{}@{}", r.op, r.dim))
        .collect();
    outcome(
        inv_s <= 2.3 && eig_s <= 2.3 && inv_d >= 2.7 && slower.is_empty(),
        format!(
            "exponents: structured inverse {inv_s:.2}, structured eigen {eig_s:.2} (<= 2.3), dense inverse {inv_d:.2} (>= 2.7); structured not faster at {slower:?}"
        ),
    )
}

type Criterion = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("closure", criterion_1),
        ("inverse", criterion_2),
        ("eigensystem", criterion_3),
        ("metric family", criterion_4),
        ("completeness", criterion_5),
        ("hermitization", criterion_6),
        ("bandwidth", criterion_7),
        ("zig-zag formulas", criterion_8),
        ("dynamics", criterion_9),
        ("performance", criterion_10),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let label = format!("criterion {:>2} [{name}]", k + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{label}: {} {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
