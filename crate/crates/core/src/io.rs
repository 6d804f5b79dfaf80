//! File formats: model JSON (`gzz-model/v1`, `zz-model/v1`), metric JSON
//! (`theta/v1`), weight specifications and the evolution CSV.
//!
//! Block indices in files are 1-based. Floats are written in shortest
//! round-trip form, so re-reading a file reproduces every bit.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dense::DenseMatrix;
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::model::{GzzHamiltonian, Variant, WeightVector, ZigZagHamiltonian};

pub const GZZ_FORMAT: &str = "gzz-model/v1";
pub const ZZ_FORMAT: &str = "zz-model/v1";
pub const THETA_FORMAT: &str = "theta/v1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CouplingRecord {
    i: usize,
    j: usize,
    value: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GzzRecord {
    format: String,
    m: usize,
    lambda_plus: Vec<f64>,
    lambda_minus: Vec<f64>,
    couplings: Vec<CouplingRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZzRecord {
    format: String,
    variant: String,
    a: Vec<f64>,
    c: Vec<f64>,
}

#[derive(Deserialize)]
struct FormatProbe {
    format: Option<String>,
}

/// Either model family, as read from disk.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelFile {
    Gzz(GzzHamiltonian),
    ZigZag(ZigZagHamiltonian),
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn gzz_to_json(h: &GzzHamiltonian) -> String {
    let record = GzzRecord {
        format: GZZ_FORMAT.into(),
        m: h.m(),
        lambda_plus: h.lambda_plus().to_vec(),
        lambda_minus: h.lambda_minus().to_vec(),
        couplings: h
            .couplings()
            .iter()
            .map(|c| CouplingRecord {
                i: c.i + 1,
                j: c.j + 1,
                value: c.value,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&record).expect("finite floats serialize")
}

pub fn zz_to_json(z: &ZigZagHamiltonian) -> String {
    let record = ZzRecord {
        format: ZZ_FORMAT.into(),
        variant: z.variant().to_string(),
        a: z.a().to_vec(),
        c: z.c().to_vec(),
    };
    serde_json::to_string_pretty(&record).expect("finite floats serialize")
}

pub fn model_to_json(model: &ModelFile) -> String {
    match model {
        ModelFile::Gzz(h) => gzz_to_json(h),
        ModelFile::ZigZag(z) => zz_to_json(z),
    }
}

fn gzz_from_record(r: GzzRecord) -> Result<GzzHamiltonian> {
    if r.lambda_plus.len() != r.m {
        return Err(Error::Format(format!(
            "field `lambda_plus`: expected m = {} entries, found {}",
            r.m,
            r.lambda_plus.len()
        )));
    }
    if r.lambda_minus.len() != r.m {
        return Err(Error::Format(format!(
            "field `lambda_minus`: expected m = {} entries, found {}",
            r.m,
            r.lambda_minus.len()
        )));
    }
    let mut triplets = Vec::with_capacity(r.couplings.len());
    for (k, c) in r.couplings.iter().enumerate() {
        if c.i == 0 || c.j == 0 || c.i > r.m || c.j > r.m {
            return Err(Error::Format(format!(
                "field `couplings[{k}]`: indices ({}, {}) must lie in 1..={}",
                c.i, c.j, r.m
            )));
        }
        triplets.push((c.i - 1, c.j - 1, c.value));
    }
    GzzHamiltonian::new(r.lambda_plus, r.lambda_minus, triplets)
        .map_err(|e| Error::Format(e.to_string()))
}

fn zz_from_record(r: ZzRecord) -> Result<ZigZagHamiltonian> {
    let variant = match r.variant.as_str() {
        "ZZ" => Variant::ZZ,
        "TZ" => Variant::TZ,
        other => {
            return Err(Error::Format(format!(
                "field `variant`: expected \"ZZ\" or \"TZ\", found {other:?}"
            )))
        }
    };
    ZigZagHamiltonian::new(variant, r.a, r.c).map_err(|e| Error::Format(e.to_string()))
}

pub fn model_from_json(text: &str) -> Result<ModelFile> {
    let probe: FormatProbe = serde_json::from_str(text).map_err(json_err)?;
    match probe.format.as_deref() {
        Some(GZZ_FORMAT) => {
            let r: GzzRecord = serde_json::from_str(text).map_err(json_err)?;
            Ok(ModelFile::Gzz(gzz_from_record(r)?))
        }
        Some(ZZ_FORMAT) => {
            let r: ZzRecord = serde_json::from_str(text).map_err(json_err)?;
            Ok(ModelFile::ZigZag(zz_from_record(r)?))
        }
        Some(other) => Err(Error::Format(format!(
            "field `format`: unknown format {other:?} (expected {GZZ_FORMAT:?} or {ZZ_FORMAT:?})"
        ))),
        None => Err(Error::Format("field `format`: missing".into())),
    }
}

/// Summary emitted by the `metric` command.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ThetaRecord {
    pub format: String,
    pub dim: usize,
    pub entries: Vec<Vec<f64>>,
    pub residual: f64,
    pub positive: bool,
    pub bandwidth: usize,
}

impl ThetaRecord {
    pub fn new(theta: &DenseMatrix<f64>, residual: f64, positive: bool, bandwidth: usize) -> Self {
        Self {
            format: THETA_FORMAT.into(),
            dim: theta.rows(),
            entries: theta.to_rows(),
            residual,
            positive,
            bandwidth,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite floats serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text).map_err(json_err)?;
        if r.format != THETA_FORMAT {
            return Err(Error::Format(format!(
                "field `format`: expected {THETA_FORMAT:?}"
            )));
        }
        Ok(r)
    }
}

/// Parses `uniform:VALUE` or a JSON array of `κ²` values.
pub fn parse_weights(spec: &str, dim: usize) -> Result<WeightVector> {
    if let Some(v) = spec.strip_prefix("uniform:") {
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("--kappa: cannot parse {v:?} as a number")))?;
        return WeightVector::uniform(dim, value);
    }
    let values: Vec<f64> = serde_json::from_str(spec).map_err(json_err)?;
    let w = WeightVector::new(values)?;
    w.check_dim(dim)?;
    Ok(w)
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Evolution CSV: `t,theta_norm,l2_norm,re_psi_1,im_psi_1,…`.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let dim = traj.states.first().map_or(0, |s| s.dim());
    let mut out = String::from("t,theta_norm,l2_norm");
    for k in 1..=dim {
        write!(out, ",re_psi_{k},im_psi_{k}").unwrap();
    }
    out.push('\n');
    for (idx, t) in traj.times.iter().enumerate() {
        out.push_str(&fmt_f64(*t));
        write!(
            out,
            ",{},{}",
            fmt_f64(traj.theta_norms[idx]),
            fmt_f64(traj.l2_norms[idx])
        )
        .unwrap();
        for z in traj.states[idx].amplitudes() {
            write!(out, ",{},{}", fmt_f64(z.re), fmt_f64(z.im)).unwrap();
        }
        out.push('\n');
    }
    out
}
