//! Wall-clock comparison of structured and dense kernels, shared by the CLI
//! `bench` command, the acceptance suite and the criterion benches.

use std::fmt;
use std::hint::black_box;
use std::time::{Duration, Instant};

use crate::algebra::{gzz_inverse, gzz_mul};
use crate::error::{Error, Result};
use crate::generate::{generate, GeneratorConfig, Pattern};
use crate::model::ToDense;
use crate::oracle::{dense_inverse, dense_mul, inverse_iteration_eigenvectors};
use crate::spectral::{eigen_q, Spectrum};

pub const STRUCTURED_CAP: usize = 4096;
pub const DENSE_CAP: usize = 512;
/// Dense eigenvectors cost one elimination per column, so `O(n⁴)` overall.
pub const DENSE_EIGEN_CAP: usize = 128;

const MIN_BATCH: Duration = Duration::from_millis(2);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchOp {
    Mul,
    Inverse,
    Eigen,
}

impl BenchOp {
    pub const ALL: [BenchOp; 3] = [BenchOp::Mul, BenchOp::Inverse, BenchOp::Eigen];
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchOp::Mul => "mul",
            BenchOp::Inverse => "inverse",
            BenchOp::Eigen => "eigen",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub dim: usize,
    pub op: BenchOp,
    pub structured_ns: f64,
    pub dense_ns: Option<f64>,
}

/// Best per-call time in nanoseconds: warm-up calls, then `reps` batches,
/// each long enough to swamp timer resolution.
pub fn time_ns<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    black_box(f());
    let start = Instant::now();
    let mut batch = 1usize;
    black_box(f());
    while start.elapsed() < MIN_BATCH && batch < 1 << 20 {
        batch *= 2;
        let s = Instant::now();
        for _ in 0..batch {
            black_box(f());
        }
        if s.elapsed() >= MIN_BATCH {
            break;
        }
    }
    (0..reps.max(1))
        .map(|_| {
            let s = Instant::now();
            for _ in 0..batch {
                black_box(f());
            }
            s.elapsed().as_nanos() as f64 / batch as f64
        })
        .fold(f64::INFINITY, f64::min)
}

/// Times every operation at each dimension. Dense timings are omitted above
/// their caps.
pub fn run_bench(dims: &[usize], reps: usize) -> Result<Vec<BenchRow>> {
    for &d in dims {
        if d == 0 || d % 2 == 1 {
            return Err(Error::InvalidModel(format!(
                "bench dimension {d} must be even and positive"
            )));
        }
        if d > STRUCTURED_CAP {
            return Err(Error::DimensionCap {
                dim: d,
                cap: STRUCTURED_CAP,
            });
        }
    }
    let mut rows = Vec::new();
    for &dim in dims {
        let a = generate(&GeneratorConfig::new(dim, Pattern::Full, 1000 + dim as u64))?;
        let b = generate(&GeneratorConfig::new(dim, Pattern::Full, 2000 + dim as u64))?;
        let (ad, bd) = (a.to_dense(), b.to_dense());
        let with_dense = dim <= DENSE_CAP;
        for op in BenchOp::ALL {
            let (structured_ns, dense_ns) = match op {
                BenchOp::Mul => (
                    time_ns(reps, || gzz_mul(&a, &b)),
                    with_dense.then(|| time_ns(reps, || dense_mul(&ad, &bd))),
                ),
                BenchOp::Inverse => (
                    time_ns(reps, || gzz_inverse(&a)),
                    with_dense.then(|| time_ns(reps, || dense_inverse(&ad))),
                ),
                BenchOp::Eigen => {
                    let spectrum = a.spectrum();
                    (
                        time_ns(reps, || eigen_q(&a)),
                        (dim <= DENSE_EIGEN_CAP)
                            .then(|| time_ns(1, || inverse_iteration_eigenvectors(&ad, &spectrum))),
                    )
                }
            };
            rows.push(BenchRow {
                dim,
                op,
                structured_ns,
                dense_ns,
            });
        }
    }
    Ok(rows)
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("dim,op,structured_ns,dense_ns\n");
    for r in rows {
        let dense = r.dense_ns.map_or(String::new(), |d| format!("{d:.1}"));
        out.push_str(&format!(
            "{},{},{:.1},{}\n",
            r.dim, r.op, r.structured_ns, dense
        ));
    }
    out
}
