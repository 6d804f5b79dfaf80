//! Time evolution `i dψ/dt = H ψ` (ħ = 1) through the closed-form
//! eigensystem: `U(t) = Q e^{−iΛt} Q⁻¹`.
//!
//! Because `N̄ D N̄ = 0` for diagonal `D`, the propagator keeps the shape of
//! `H`: diagonal phases `e^{−iλt}` plus `U[+i, −j] = N̄_ij (e^{−iλ₋ⱼt} − e^{−iλ₊ᵢt})`.

use num_complex::Complex64;

use crate::dense::{DenseMatrix, Scalar};
use crate::error::{Error, Result};
use crate::metric::build_theta;
use crate::model::{GzzHamiltonian, WeightVector};
use crate::spectral::{eigen_q, factor_inverse, EigenFactor, Spectrum};

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if let Some(k) = amplitudes.iter().position(|z| !z.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "amplitude {} is not finite",
                k + 1
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Unit vector at 0-based position `k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch(format!(
                "basis index {} outside 1..={dim}",
                k + 1
            )));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn l2_norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    /// `ψ†Θψ` at each time.
    pub theta_norms: Vec<f64>,
    /// `ψ†ψ` at each time.
    pub l2_norms: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max |θ(t) − θ(0)| / θ(0)`.
    pub fn theta_drift(&self) -> f64 {
        let Some(&first) = self.theta_norms.first() else {
            return 0.0;
        };
        let dev = self
            .theta_norms
            .iter()
            .map(|x| (x - first).abs())
            .fold(0.0, f64::max);
        if first > 0.0 {
            dev / first
        } else {
            dev
        }
    }
}

fn phases(h: &GzzHamiltonian, t: f64) -> Vec<Complex64> {
    h.spectrum()
        .into_iter()
        .map(|l| Complex64::new(0.0, -l * t).exp())
        .collect()
}

/// Dense `U(t) = e^{−iHt}`, assembled entry by entry from `Q`.
pub fn propagator(h: &GzzHamiltonian, t: f64) -> Result<DenseMatrix<Complex64>> {
    let q = eigen_q(h)?;
    let d = phases(h, t);
    let mut u = DenseMatrix::from_diagonal(&d);
    for c in q.entries() {
        let (r, s) = (2 * c.i, 2 * c.j + 1);
        u[(r, s)] = Complex64::from_real(c.value) * (d[s] - d[r]);
    }
    Ok(u)
}

/// Precomputed closed-form propagation for one model.
#[derive(Clone, Debug)]
pub struct Evolver {
    h: GzzHamiltonian,
    q: EigenFactor,
    q_inv: EigenFactor,
}

impl Evolver {
    pub fn new(h: &GzzHamiltonian) -> Result<Self> {
        let q = eigen_q(h)?;
        let q_inv = factor_inverse(&q);
        Ok(Self {
            h: h.clone(),
            q,
            q_inv,
        })
    }

    /// `ψ(t) = Q e^{−iΛt} Q⁻¹ ψ₀` in O(dim + couplings).
    pub fn state_at(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        if psi0.dim() != self.h.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} for model of dimension {}",
                psi0.dim(),
                self.h.dim()
            )));
        }
        let mut coeffs = self.q_inv.apply(psi0.amplitudes());
        for (c, p) in coeffs.iter_mut().zip(phases(&self.h, t)) {
            *c *= p;
        }
        StateVector::new(self.q.apply(&coeffs))
    }
}

/// `ψ†Θψ`, real part (the imaginary part vanishes for symmetric real `Θ`).
pub fn theta_norm(psi: &StateVector, theta: &DenseMatrix<f64>) -> Result<f64> {
    if theta.rows() != psi.dim() || theta.cols() != psi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} against {}x{} metric",
            psi.dim(),
            theta.rows(),
            theta.cols()
        )));
    }
    let v = psi.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, vr) in v.iter().enumerate() {
        let row = theta.row(r);
        let mut inner = Complex64::new(0.0, 0.0);
        for (t, vc) in row.iter().zip(v) {
            inner += vc * *t;
        }
        acc += vr.conj() * inner;
    }
    Ok(acc.re)
}

/// Samples `ψ(t)` at `times`, recording the Θ-norm (dense `Θ` from
/// `build_theta`) and the plain ℓ² norm.
pub fn evolve(
    h: &GzzHamiltonian,
    psi0: &StateVector,
    times: &[f64],
    w: &WeightVector,
) -> Result<Trajectory> {
    let theta = build_theta(h, w)?;
    let evolver = Evolver::new(h)?;
    let mut traj = Trajectory::default();
    for &t in times {
        let psi = evolver.state_at(psi0, t)?;
        traj.theta_norms.push(theta_norm(&psi, theta.theta())?);
        traj.l2_norms.push(psi.l2_norm_sqr());
        traj.times.push(t);
        traj.states.push(psi);
    }
    Ok(traj)
}

/// `steps + 1` equally spaced times covering `[t0, t1]`.
pub fn time_grid(t0: f64, t1: f64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![t0];
    }
    (0..=steps)
        .map(|k| t0 + (t1 - t0) * k as f64 / steps as f64)
        .collect()
}
