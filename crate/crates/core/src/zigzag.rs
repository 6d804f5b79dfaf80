//! Metric and evolution of zig-zag models in their own basis.
//!
//! Everything is computed on the generalized embedding and conjugated back
//! with the pair-swap permutation. A `TZ` model embeds through its transpose,
//! so its metric uses the right eigenvectors and its propagator is the
//! transpose of the embedded one. Odd sizes carry one zero padding row and
//! column, which decouple and are cut off again.

use crate::algebra::{gzz_transpose, zz_to_gzz, ZigZagEmbedding};
use crate::dense::DenseMatrix;
use crate::dynamics::{propagator, theta_norm, StateVector, Trajectory};
use crate::error::{Error, Result};
use crate::metric::{build_theta, build_theta_transposed};
use crate::model::{WeightVector, ZigZagHamiltonian};

fn leading_block<T: crate::dense::Scalar>(a: &DenseMatrix<T>, n: usize) -> DenseMatrix<T> {
    let mut out = DenseMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(r, c)] = a[(r, c)];
        }
    }
    out
}

fn embedded_weights(emb: &ZigZagEmbedding, w: &WeightVector) -> Result<WeightVector> {
    let mut kappa = w.kappa_sq().to_vec();
    kappa.resize(emb.model.dim(), 1.0);
    WeightVector::new(emb.permutation.inverse().apply(&kappa))
}

/// Symmetric positive `Θ` with `ZᵀΘ = ΘZ`; weights are in zig-zag order.
pub fn zigzag_theta(z: &ZigZagHamiltonian, w: &WeightVector) -> Result<DenseMatrix<f64>> {
    w.check_dim(z.dim())?;
    let emb = zz_to_gzz(z)?;
    let wg = embedded_weights(&emb, w)?;
    let theta = if emb.transposed {
        build_theta_transposed(&gzz_transpose(&emb.model), &wg)?
    } else {
        build_theta(&emb.model, &wg)?
    };
    let full = emb.permutation.conjugate(theta.theta())?;
    Ok(leading_block(&full, z.dim()))
}

/// Dense `e^{−iZt}`.
pub fn zigzag_propagator(
    z: &ZigZagHamiltonian,
    t: f64,
) -> Result<DenseMatrix<num_complex::Complex64>> {
    let emb = zz_to_gzz(z)?;
    let u = propagator(&emb.model, t)?;
    let u = if emb.transposed { u.transpose() } else { u };
    Ok(leading_block(&emb.permutation.conjugate(&u)?, z.dim()))
}

pub fn zigzag_evolve(
    z: &ZigZagHamiltonian,
    psi0: &StateVector,
    times: &[f64],
    w: &WeightVector,
) -> Result<Trajectory> {
    if psi0.dim() != z.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} for model of dimension {}",
            psi0.dim(),
            z.dim()
        )));
    }
    let theta = zigzag_theta(z, w)?;
    let mut traj = Trajectory::default();
    for &t in times {
        let psi = StateVector::new(zigzag_propagator(z, t)?.matvec(psi0.amplitudes())?)?;
        traj.theta_norms.push(theta_norm(&psi, &theta)?);
        traj.l2_norms.push(psi.l2_norm_sqr());
        traj.times.push(t);
        traj.states.push(psi);
    }
    Ok(traj)
}
