use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use zigzag_core::bench::{run_bench, to_csv};
use zigzag_core::io::{
    model_from_json, model_to_json, parse_weights, trajectory_csv, ModelFile, ThetaRecord,
};
use zigzag_core::metric::{quasi_hermiticity_residual, BANDWIDTH_TOL};
use zigzag_core::spectral::labeled_spectrum;
use zigzag_core::{
    bandwidth, build_theta, certify_positive, evolve, generate, gzz_to_zz, time_grid, verify_model,
    zigzag_evolve, zigzag_theta, zz_to_gzz, Error, GeneratorConfig, Pattern, Spectrum, StateVector,
    ToDense, Variant, WeightVector,
};

#[derive(Parser)]
#[command(
    name = "zigzag",
    version,
    about = "Generalized zig-zag Hamiltonians: generate, verify, metric, evolve, convert, bench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a seeded random diagonalizable model
    Gen {
        /// Matrix dimension 2m
        #[arg(long)]
        dim: usize,
        /// full, zigzag or banded:K
        #[arg(long, default_value = "full")]
        pattern: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum |λ₊ᵢ − λ₋ⱼ| over coupled pairs
        #[arg(long, default_value_t = 0.1)]
        gap: f64,
        /// Bound on entry magnitudes
        #[arg(long, default_value_t = 1.0)]
        range: f64,
        /// Accept an odd dimension by padding with a zero eigenvalue
        #[arg(long)]
        embed_odd: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every closed-form invariant against the dense oracle
    Verify {
        model: PathBuf,
        /// Weights κ²: `uniform:V`, a JSON array, or a file holding one
        #[arg(long, default_value = "uniform:1")]
        kappa: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues with their labels
    Spectrum {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Metric Θ as `theta/v1` JSON
    Metric {
        model: PathBuf,
        #[arg(long, default_value = "uniform:1")]
        kappa: String,
        /// Entries at or below this magnitude (relative to max |Θ|) count as zero for the bandwidth
        #[arg(long, default_value_t = BANDWIDTH_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample ψ(t) on a time grid as CSV
    Evolve {
        model: PathBuf,
        #[arg(long, default_value = "uniform:1")]
        kappa: String,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 10.0)]
        t1: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// `basis:K` (1-based position) or a JSON array of real amplitudes
        #[arg(long, default_value = "basis:1")]
        psi0: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time structured against dense kernels
    Bench {
        /// Comma-separated even dimensions
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a model in another family
    Convert {
        model: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Gzz,
    Zz,
    Tz,
}

/// Error with its process exit code: 1 for a failed check or an illegal
/// operation on a valid model, 2 for unusable input.
struct Exit {
    code: u8,
    err: anyhow::Error,
}

fn usage(err: impl Into<anyhow::Error>) -> Exit {
    Exit {
        code: 2,
        err: err.into(),
    }
}

fn failure(err: impl Into<anyhow::Error>) -> Exit {
    Exit {
        code: 1,
        err: err.into(),
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        match e {
            Error::Format(_)
            | Error::Generator(_)
            | Error::InvalidWeight { .. }
            | Error::DimensionMismatch(_)
            | Error::InvalidModel(_)
            | Error::DimensionCap { .. } => usage(e),
            _ => failure(e),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, Exit>;

fn read_model(path: &Path) -> CliResult<ModelFile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(usage)?;
    model_from_json(&text).map_err(|e| usage(anyhow!("{}: {e}", path.display())))
}

fn read_weights(spec: &str, dim: usize) -> CliResult<WeightVector> {
    let trimmed = spec.trim_start();
    if trimmed.starts_with("uniform:") || trimmed.starts_with('[') {
        return Ok(parse_weights(spec, dim)?);
    }
    let text = fs::read_to_string(spec)
        .with_context(|| format!("--kappa: cannot read {spec}"))
        .map_err(usage)?;
    Ok(parse_weights(&text, dim)?)
}

fn parse_state(spec: &str, dim: usize) -> CliResult<StateVector> {
    if let Some(k) = spec.strip_prefix("basis:") {
        let k: usize = k
            .parse()
            .map_err(|_| usage(anyhow!("--psi0: cannot parse {k:?} as a position")))?;
        if k == 0 || k > dim {
            return Err(usage(anyhow!("--psi0: position {k} outside 1..={dim}")));
        }
        return Ok(StateVector::basis(dim, k - 1)?);
    }
    let values: Vec<f64> = serde_json::from_str(spec).map_err(|e| usage(anyhow!("--psi0: {e}")))?;
    if values.len() != dim {
        return Err(usage(anyhow!(
            "--psi0: {} amplitudes for dimension {dim}",
            values.len()
        )));
    }
    Ok(StateVector::from_real(&values)?)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(failure),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn model_dim(model: &ModelFile) -> usize {
    match model {
        ModelFile::Gzz(h) => h.dim(),
        ModelFile::ZigZag(z) => z.dim(),
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Gen {
            dim,
            pattern,
            seed,
            gap,
            range,
            embed_odd,
            out,
        } => {
            let pattern: Pattern = pattern.parse()?;
            let config = GeneratorConfig {
                dim,
                pattern,
                seed,
                gap,
                range,
                embed_odd,
            };
            let h = generate(&config)?;
            emit(
                out.as_deref(),
                &with_newline(model_to_json(&ModelFile::Gzz(h))),
            )?;
        }
        Command::Verify { model, kappa, out } => {
            let m = read_model(&model)?;
            let w = read_weights(&kappa, model_dim(&m))?;
            let report = verify_model(&m, &w);
            emit(out.as_deref(), &with_newline(report.to_json()))?;
            for f in report.failures() {
                eprintln!("FAIL {}: {}", f.name, f.detail);
            }
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Spectrum { model, out } => {
            let m = read_model(&model)?;
            let entries: Vec<serde_json::Value> = match &m {
                ModelFile::Gzz(h) => labeled_spectrum(h)
                    .into_iter()
                    .map(|(label, value)| serde_json::json!({ "label": label.to_string(), "value": value }))
                    .collect(),
                ModelFile::ZigZag(z) => z
                    .spectrum()
                    .into_iter()
                    .enumerate()
                    .map(|(k, value)| serde_json::json!({ "label": (k + 1).to_string(), "value": value }))
                    .collect(),
            };
            let doc = serde_json::json!({ "format": "spectrum/v1", "dim": model_dim(&m), "eigenvalues": entries });
            emit(
                out.as_deref(),
                &with_newline(serde_json::to_string_pretty(&doc).expect("serializable")),
            )?;
        }
        Command::Metric {
            model,
            kappa,
            tol,
            out,
        } => {
            let m = read_model(&model)?;
            let w = read_weights(&kappa, model_dim(&m))?;
            let (dense, theta) = match &m {
                ModelFile::Gzz(h) => (h.to_dense(), build_theta(h, &w)?.into_theta()),
                ModelFile::ZigZag(z) => (z.to_dense(), zigzag_theta(z, &w)?),
            };
            let residual = quasi_hermiticity_residual(&dense, &theta)?;
            let positive = certify_positive(&theta)?.is_positive();
            let band = bandwidth(&theta, tol)?;
            let record = ThetaRecord::new(&theta, residual, positive, band);
            emit(out.as_deref(), &with_newline(record.to_json()))?;
        }
        Command::Evolve {
            model,
            kappa,
            t0,
            t1,
            steps,
            psi0,
            out,
        } => {
            let m = read_model(&model)?;
            let dim = model_dim(&m);
            let w = read_weights(&kappa, dim)?;
            let psi = parse_state(&psi0, dim)?;
            let times = time_grid(t0, t1, steps);
            let traj = match &m {
                ModelFile::Gzz(h) => evolve(h, &psi, &times, &w)?,
                ModelFile::ZigZag(z) => zigzag_evolve(z, &psi, &times, &w)?,
            };
            emit(out.as_deref(), &trajectory_csv(&traj))?;
        }
        Command::Bench { dims, reps, out } => {
            let rows = run_bench(&dims, reps)?;
            emit(out.as_deref(), &to_csv(&rows))?;
        }
        Command::Convert { model, to, out } => {
            let m = read_model(&model)?;
            let converted = match (m, to) {
                (ModelFile::Gzz(h), Target::Gzz) => ModelFile::Gzz(h),
                (ModelFile::Gzz(h), Target::Zz) => ModelFile::ZigZag(gzz_to_zz(&h, Variant::ZZ)?),
                (ModelFile::Gzz(h), Target::Tz) => ModelFile::ZigZag(gzz_to_zz(&h, Variant::TZ)?),
                (ModelFile::ZigZag(z), Target::Gzz) => {
                    let emb = zz_to_gzz(&z)?;
                    let mut note = String::new();
                    if z.dim() % 2 == 1 {
                        write!(
                            note,
                            "odd dimension {} padded to {}; ",
                            z.dim(),
                            emb.model.dim()
                        )
                        .unwrap();
                    }
                    if emb.transposed {
                        note.push_str(
                            "TZ input: the result is the generalized form of its transpose; ",
                        );
                    }
                    if !note.is_empty() {
                        eprintln!("note: {}", note.trim_end_matches("; "));
                    }
                    ModelFile::Gzz(emb.model)
                }
                (ModelFile::ZigZag(z), Target::Zz) if z.variant() == Variant::TZ => {
                    ModelFile::ZigZag(z.transpose())
                }
                (ModelFile::ZigZag(z), Target::Tz) if z.variant() == Variant::ZZ => {
                    ModelFile::ZigZag(z.transpose())
                }
                (ModelFile::ZigZag(z), _) => ModelFile::ZigZag(z),
            };
            emit(out.as_deref(), &with_newline(model_to_json(&converted)))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Exit { code, err }) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
