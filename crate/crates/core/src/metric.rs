//! Inner-product metrics `Θ` making a model quasi-Hermitian (`HᵀΘ = ΘH`).
//!
//! With `Q̃ = 1 + T` (`T` holding `t_ij = n_ij / (λ₊ᵢ − λ₋ⱼ)` at `(−j, +i)`)
//! the metric family is `Θ = Q̃ K² Q̃ᵀ`, one strictly positive weight per
//! eigenvector. Expanded:
//!
//! ```text
//! Θ = K² + T K² + K² Tᵀ + T K² Tᵀ
//! Θ[−j, +i] = Θ[+i, −j] = t_ij κ²₊ᵢ
//! Θ[−j, −l] += Σ_i κ²₊ᵢ t_ij t_il
//! ```
//!
//! which is symmetric entry by entry because every mirrored pair is written
//! from the same product.

use crate::algebra::{Permutation, TransposedGzz};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::model::{Coupling, GzzHamiltonian, ToDense, WeightVector};
use crate::spectral::{eigen_q, eigen_qtilde, EigenFactor};

/// Default relative threshold used by [`bandwidth`].
pub const BANDWIDTH_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct MetricOperator {
    theta: DenseMatrix<f64>,
    weights: WeightVector,
}

impl MetricOperator {
    pub fn theta(&self) -> &DenseMatrix<f64> {
        &self.theta
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.theta.rows()
    }

    pub fn into_theta(self) -> DenseMatrix<f64> {
        self.theta
    }
}

impl ToDense for MetricOperator {
    fn to_dense(&self) -> DenseMatrix<f64> {
        self.theta.clone()
    }
}

/// Gram-type assembly `Θ = K² + F K² + K² Fᵀ + F K² Fᵀ` for a unit-diagonal
/// factor `1 + F` whose entries are grouped by source column.
fn assemble_gram(kappa_sq: &[f64], entries: &[(usize, usize, f64)]) -> DenseMatrix<f64> {
    // entries: (row, column, value) of F, sorted by column
    let mut theta = DenseMatrix::from_diagonal(kappa_sq);
    for &(r, c, v) in entries {
        let x = v * kappa_sq[c];
        theta[(r, c)] = x;
        theta[(c, r)] = x;
    }
    let mut start = 0;
    while start < entries.len() {
        let col = entries[start].1;
        let end = start + entries[start..].iter().take_while(|e| e.1 == col).count();
        let group = &entries[start..end];
        let w = kappa_sq[col];
        for (a, &(ra, _, va)) in group.iter().enumerate() {
            for &(rb, _, vb) in &group[a..] {
                let x = w * va * vb;
                theta[(ra, rb)] += x;
                if ra != rb {
                    theta[(rb, ra)] += x;
                }
            }
        }
        start = end;
    }
    theta
}

fn factor_entries(f: &EigenFactor) -> Vec<(usize, usize, f64)> {
    let mut entries: Vec<_> = f
        .entries()
        .iter()
        .map(|c: &Coupling| {
            let (r, s) = f.position(c);
            (r, s, c.value)
        })
        .collect();
    entries.sort_by_key(|e| (e.1, e.0));
    entries
}

/// `Θ = Q̃ K² Q̃ᵀ`.
pub fn build_theta(h: &GzzHamiltonian, w: &WeightVector) -> Result<MetricOperator> {
    w.check_dim(h.dim())?;
    let qt = eigen_qtilde(h)?;
    Ok(MetricOperator {
        theta: assemble_gram(w.kappa_sq(), &factor_entries(&qt)),
        weights: w.clone(),
    })
}

/// Metric for `Hᵀ`: `(Hᵀ)ᵀ Θ = Θ Hᵀ` is solved by `Θ = Q K² Qᵀ` with the
/// right eigenvectors `Q` of `H`.
pub fn build_theta_transposed(t: &TransposedGzz, w: &WeightVector) -> Result<MetricOperator> {
    w.check_dim(t.dim())?;
    let q = eigen_q(t.source())?;
    Ok(MetricOperator {
        theta: assemble_gram(w.kappa_sq(), &factor_entries(&q)),
        weights: w.clone(),
    })
}

/// Rank-one assembly `Σₙ |n⟧ κ²ₙ ⟦n|` from the dense columns of `Q̃`.
/// Independent of the structured Gram route; used as a cross-check.
pub fn theta_from_eigenkets(h: &GzzHamiltonian, w: &WeightVector) -> Result<DenseMatrix<f64>> {
    w.check_dim(h.dim())?;
    let qt = eigen_qtilde(h)?.to_dense();
    let n = h.dim();
    let mut theta = DenseMatrix::zeros(n, n);
    for (col, &k2) in w.kappa_sq().iter().enumerate() {
        let ket = qt.column(col);
        for r in 0..n {
            if ket[r] == 0.0 {
                continue;
            }
            for s in 0..n {
                theta[(r, s)] += ket[r] * k2 * ket[s];
            }
        }
    }
    Ok(theta)
}

/// `‖HᵀΘ − ΘH‖_F / (‖H‖_F ‖Θ‖_F)`; zero when either factor vanishes.
pub fn quasi_hermiticity_residual(h: &DenseMatrix<f64>, theta: &DenseMatrix<f64>) -> Result<f64> {
    if !h.is_square() || h.rows() != theta.rows() || !theta.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{}, Θ is {}x{}",
            h.rows(),
            h.cols(),
            theta.rows(),
            theta.cols()
        )));
    }
    let lhs = h.transpose().matmul(theta)?;
    let rhs = theta.matmul(h)?;
    let scale = h.frobenius_norm() * theta.frobenius_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(lhs.sub(&rhs)?.frobenius_norm() / scale)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Positivity {
    Positive,
    /// `witnessᵀ Θ witness = quadratic_form ≤ 0` (up to rounding).
    NotPositive {
        witness: Vec<f64>,
        quadratic_form: f64,
    },
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        matches!(self, Positivity::Positive)
    }
}

fn check_symmetric(a: &DenseMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    let tol = 1e-12 * a.max_abs();
    for r in 0..a.rows() {
        for c in r + 1..a.cols() {
            let gap = (a[(r, c)] - a[(c, r)]).abs();
            if gap > tol {
                return Err(Error::Asymmetric {
                    row: r,
                    col: c,
                    gap,
                });
            }
        }
    }
    Ok(())
}

/// Certifies positive definiteness by a diagonally pivoted `LDLᵀ`
/// elimination. Fails at the first Schur complement whose largest diagonal
/// entry is not positive and returns the direction realizing it.
pub fn certify_positive(theta: &DenseMatrix<f64>) -> Result<Positivity> {
    check_symmetric(theta)?;
    let n = theta.rows();
    // s holds the Schur complement in its trailing block and L (unit lower,
    // scaled) in its leading columns, in pivoted order.
    let mut s = theta.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (p, &best) = (k..n)
            .map(|d| (d, &s[(d, d)]))
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty range");
        if best <= 0.0 || !best.is_finite() {
            return Ok(witness(theta, &s, &perm, k, p));
        }
        if p != k {
            swap_symmetric(&mut s, k, p);
            perm.swap(k, p);
        }
        let d = s[(k, k)];
        for r in k + 1..n {
            let l = s[(r, k)] / d;
            if l == 0.0 {
                continue;
            }
            // row k above the diagonal still holds the unscaled column k
            for c in k + 1..=r {
                let v = s[(r, c)] - l * s[(k, c)];
                s[(r, c)] = v;
                s[(c, r)] = v;
            }
            s[(r, k)] = l;
        }
    }
    Ok(Positivity::Positive)
}

fn swap_symmetric(s: &mut DenseMatrix<f64>, a: usize, b: usize) {
    let n = s.rows();
    for c in 0..n {
        let t = s[(a, c)];
        s[(a, c)] = s[(b, c)];
        s[(b, c)] = t;
    }
    for r in 0..n {
        let t = s[(r, a)];
        s[(r, a)] = s[(r, b)];
        s[(r, b)] = t;
    }
}

/// For the pivoted block split `[[A₁₁, A₁₂], [A₂₁, A₂₂]]` at step `k`, the
/// vector `v = [−A₁₁⁻¹ A₁₂ e; e]` gives `vᵀ A v = eᵀ S e` with `S` the Schur
/// complement; `e` selects the offending diagonal entry `p`.
fn witness(
    theta: &DenseMatrix<f64>,
    s: &DenseMatrix<f64>,
    perm: &[usize],
    k: usize,
    p: usize,
) -> Positivity {
    let n = theta.rows();
    // solve L₁₁ D Lᵀ₁₁ y = A₁₂ e_p using the stored unit-lower L₁₁ (rows < k)
    // and A₁₂ e_p = column p of the original matrix in pivoted order.
    let mut y: Vec<f64> = (0..k).map(|r| theta[(perm[r], perm[p])]).collect();
    for r in 0..k {
        for c in 0..r {
            y[r] -= s[(r, c)] * y[c];
        }
    }
    for (r, yr) in y.iter_mut().enumerate() {
        *yr /= s[(r, r)];
    }
    for r in (0..k).rev() {
        for c in r + 1..k {
            y[r] -= s[(c, r)] * y[c];
        }
    }
    let mut v = vec![0.0; n];
    for r in 0..k {
        v[perm[r]] = -y[r];
    }
    v[perm[p]] = 1.0;
    let av = theta.matvec(&v).expect("square");
    let quadratic_form = v.iter().zip(&av).map(|(a, b)| a * b).sum();
    Positivity::NotPositive {
        witness: v,
        quadratic_form,
    }
}

/// Dyson map `Ω = K Q̃ᵀ` with `ΩᵀΩ = Θ` and `Ω H Ω⁻¹ = Λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DysonFactor {
    omega: DenseMatrix<f64>,
    omega_inverse: DenseMatrix<f64>,
}

impl DysonFactor {
    pub fn omega(&self) -> &DenseMatrix<f64> {
        &self.omega
    }

    /// `Ω⁻¹ = Q K⁻¹`, closed form.
    pub fn omega_inverse(&self) -> &DenseMatrix<f64> {
        &self.omega_inverse
    }

    /// `Ω H Ω⁻¹`, which equals the diagonal partner `Λ`.
    pub fn hermitian_partner(&self, h: &DenseMatrix<f64>) -> Result<DenseMatrix<f64>> {
        self.omega.matmul(h)?.matmul(&self.omega_inverse)
    }
}

pub fn dyson_factor(h: &GzzHamiltonian, w: &WeightVector) -> Result<DysonFactor> {
    w.check_dim(h.dim())?;
    let qt = eigen_qtilde(h)?;
    let kappa = w.kappa();
    let n = h.dim();
    // Q̃ᵀ has t_ij at (+i, −j); Q̃ᵀ⁻¹ = Q has −t_ij there.
    let mut omega = DenseMatrix::from_diagonal(&kappa);
    let mut omega_inverse =
        DenseMatrix::from_diagonal(&kappa.iter().map(|k| 1.0 / k).collect::<Vec<_>>());
    for c in qt.entries() {
        let (r, s) = (2 * c.i, 2 * c.j + 1);
        omega[(r, s)] = kappa[r] * c.value;
        omega_inverse[(r, s)] = -c.value / kappa[s];
    }
    debug_assert_eq!(omega.rows(), n);
    Ok(DysonFactor {
        omega,
        omega_inverse,
    })
}

/// Largest `|r − c|` over entries above `tol · max|Θ|`.
pub fn bandwidth(theta: &DenseMatrix<f64>, tol: f64) -> Result<usize> {
    if !theta.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            theta.rows(),
            theta.cols()
        )));
    }
    let cutoff = tol * theta.max_abs();
    let mut band = 0;
    for r in 0..theta.rows() {
        for (c, v) in theta.row(r).iter().enumerate() {
            if v.abs() > cutoff {
                band = band.max(r.abs_diff(c));
            }
        }
    }
    Ok(band)
}

/// `Θ` expressed in the zig-zag basis, `P Θ Pᵀ` with the `+i ↔ −i` swap.
pub fn to_zigzag_basis(theta: &DenseMatrix<f64>) -> Result<DenseMatrix<f64>> {
    Permutation::pair_swap(theta.rows()).conjugate(theta)
}
