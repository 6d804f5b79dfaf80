//! Dense brute-force numerics for cross-checking the closed forms.
//!
//! Nothing in here knows about the generalized class: every routine takes
//! plain dense matrices and uses textbook elimination or series arithmetic.

use num_complex::Complex64;

use crate::dense::{DenseMatrix, Scalar};
use crate::error::{Error, Result};

/// Relative pivot threshold for [`dense_inverse`] and [`dense_solve`].
pub const PIVOT_TOL: f64 = 1e-13;
/// Relative rank threshold for nullspace computations.
pub const RANK_TOL: f64 = 1e-10;
/// Largest dimension accepted by [`sylvester_metric_space`].
pub const SYLVESTER_CAP: usize = 16;

pub fn dense_mul<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    a.matmul(b)
}

/// Solves `A X = B` by Gauss-Jordan elimination with partial pivoting.
pub fn dense_solve<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot solve {}x{} system with {}x{} right-hand side",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let n = a.rows();
    let nb = b.cols();
    let width = n + nb;
    let scale = a.max_abs();
    let threshold = PIVOT_TOL * scale;
    // augmented [A | B], row-major
    let mut aug: Vec<T> = Vec::with_capacity(n * width);
    for r in 0..n {
        aug.extend_from_slice(a.row(r));
        aug.extend_from_slice(b.row(r));
    }
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|r| (r, aug[r * width + k].modulus()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty");
        // also rejects NaN pivots
        if best.partial_cmp(&threshold) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::SingularPivot { pivot: k });
        }
        if p != k {
            for c in 0..width {
                aug.swap(k * width + c, p * width + c);
            }
        }
        let inv = T::one() / aug[k * width + k];
        for c in k..width {
            aug[k * width + c] *= inv;
        }
        let (head, tail) = aug.split_at_mut(k * width);
        let (pivot_row, rest) = tail.split_at_mut(width);
        for row in head
            .chunks_exact_mut(width)
            .chain(rest.chunks_exact_mut(width))
        {
            let f = row[k];
            if f == T::zero() {
                continue;
            }
            for c in k..width {
                row[c] -= f * pivot_row[c];
            }
        }
    }
    let mut x = DenseMatrix::zeros(n, nb);
    for r in 0..n {
        for c in 0..nb {
            x[(r, c)] = aug[r * width + n + c];
        }
    }
    Ok(x)
}

pub fn dense_inverse<T: Scalar>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    dense_solve(a, &DenseMatrix::identity(a.rows()))
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut DenseMatrix<f64>, tol: f64) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (p, best) = (r..rows)
            .map(|k| (k, m[(k, c)].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty");
        if best <= tol {
            continue;
        }
        for k in 0..cols {
            let t = m[(r, k)];
            m[(r, k)] = m[(p, k)];
            m[(p, k)] = t;
        }
        let inv = 1.0 / m[(r, c)];
        for k in c..cols {
            m[(r, k)] *= inv;
        }
        for other in 0..rows {
            if other == r {
                continue;
            }
            let f = m[(other, c)];
            if f == 0.0 {
                continue;
            }
            for k in c..cols {
                m[(other, k)] -= f * m[(r, k)];
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank and nullspace of a homogeneous linear system.
#[derive(Clone, Debug)]
pub struct LinearSystemReport {
    pub rank: usize,
    pub nullspace_dim: usize,
    /// Nullspace basis, reshaped into the domain's matrix form.
    pub basis: Vec<DenseMatrix<f64>>,
}

impl LinearSystemReport {
    pub fn domain_dim(&self) -> usize {
        self.rank + self.nullspace_dim
    }

    /// `‖X − proj(X)‖_F / ‖X‖_F` for the orthogonal projection onto the span
    /// of `basis` (Frobenius inner product).
    pub fn distance_to_span(&self, x: &DenseMatrix<f64>) -> Result<f64> {
        let mut ortho: Vec<Vec<f64>> = Vec::new();
        for b in &self.basis {
            let mut v = b.entries().to_vec();
            for _ in 0..2 {
                for u in &ortho {
                    let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
                }
            }
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n > 0.0 {
                v.iter_mut().for_each(|a| *a /= n);
                ortho.push(v);
            }
        }
        let mut r = x.entries().to_vec();
        if let Some(b) = self.basis.first() {
            if b.rows() != x.rows() || b.cols() != x.cols() {
                return Err(Error::DimensionMismatch(
                    "candidate and basis shapes differ".into(),
                ));
            }
        }
        for u in &ortho {
            let d: f64 = r.iter().zip(u).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        let scale = x.frobenius_norm();
        let dist = r.iter().map(|a| a * a).sum::<f64>().sqrt();
        Ok(if scale > 0.0 { dist / scale } else { dist })
    }
}

/// Symmetric solutions of `HᵀΘ = ΘH`: builds the operator on the
/// `n(n+1)/2`-dimensional symmetric space column by column and row-reduces it.
pub fn sylvester_metric_space(h: &DenseMatrix<f64>) -> Result<LinearSystemReport> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            h.rows(),
            h.cols()
        )));
    }
    let n = h.rows();
    if n > SYLVESTER_CAP {
        return Err(Error::DimensionCap {
            dim: n,
            cap: SYLVESTER_CAP,
        });
    }
    let sym_basis: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let ht = h.transpose();
    let mut op = DenseMatrix::zeros(n * n, sym_basis.len());
    for (col, &(a, b)) in sym_basis.iter().enumerate() {
        let mut e = DenseMatrix::zeros(n, n);
        e[(a, b)] = 1.0;
        e[(b, a)] = 1.0;
        let image = ht.matmul(&e)?.sub(&e.matmul(h)?)?;
        for (row, &v) in image.entries().iter().enumerate() {
            op[(row, col)] = v;
        }
    }
    let tol = RANK_TOL * op.max_abs();
    let mut reduced = op;
    let pivots = rref(&mut reduced, tol);
    let free: Vec<usize> = (0..sym_basis.len())
        .filter(|c| !pivots.contains(c))
        .collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut coeffs = vec![0.0; sym_basis.len()];
            coeffs[f] = 1.0;
            for (r, &p) in pivots.iter().enumerate() {
                coeffs[p] = -reduced[(r, f)];
            }
            let mut theta = DenseMatrix::zeros(n, n);
            for (&(a, b), &x) in sym_basis.iter().zip(&coeffs) {
                theta[(a, b)] = x;
                theta[(b, a)] = x;
            }
            theta
        })
        .collect();
    Ok(LinearSystemReport {
        rank: pivots.len(),
        nullspace_dim: free.len(),
        basis,
    })
}

/// `‖HᵀΘ − ΘH‖_F / (‖H‖_F ‖Θ‖_F)`.
pub fn sylvester_residual(h: &DenseMatrix<f64>, theta: &DenseMatrix<f64>) -> Result<f64> {
    let r = h.transpose().matmul(theta)?.sub(&theta.matmul(h)?)?;
    let scale = h.frobenius_norm() * theta.frobenius_norm();
    Ok(if scale > 0.0 {
        r.frobenius_norm() / scale
    } else {
        0.0
    })
}

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// series. The series runs until the tail bound
/// `‖X‖^{k+1}/(k+1)! · 1/(1 − ‖X‖/(k+2))` drops below `tol · e^{−‖X‖}`
/// (a lower bound on `‖e^X‖`), or until a term vanishes exactly.
pub fn expm_series(a: &DenseMatrix<Complex64>, tol: f64) -> Result<DenseMatrix<Complex64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let norm = a.norm_inf();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let x = a.scale(Complex64::from_real(0.5f64.powi(squarings)));
    let x_norm = x.norm_inf();
    let target = tol * (-x_norm).exp();

    let mut sum = DenseMatrix::identity(n);
    let mut term = DenseMatrix::identity(n);
    let mut bound_power = 1.0;
    for k in 1..=64 {
        term = term.matmul(&x)?.scale(Complex64::from_real(1.0 / k as f64));
        if term.max_abs() == 0.0 {
            break;
        }
        sum = sum.add(&term)?;
        bound_power *= x_norm / k as f64;
        let tail = bound_power * x_norm / (k + 1) as f64 / (1.0 - x_norm / (k + 2) as f64);
        if tail <= target {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    Ok(sum)
}

/// Eigenvectors for known, distinct eigenvalues by two steps of shifted
/// inverse iteration. Columns are scaled to unit Euclidean norm.
pub fn inverse_iteration_eigenvectors(
    h: &DenseMatrix<f64>,
    eigenvalues: &[f64],
) -> Result<DenseMatrix<f64>> {
    if !h.is_square() || h.rows() != eigenvalues.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix with {} eigenvalues",
            h.rows(),
            h.cols(),
            eigenvalues.len()
        )));
    }
    let n = h.rows();
    let shift = 1e-7 * h.max_abs().max(1.0);
    let mut out = DenseMatrix::zeros(n, n);
    for (col, &lambda) in eigenvalues.iter().enumerate() {
        let mut shifted = h.clone();
        for k in 0..n {
            shifted[(k, k)] -= lambda + shift;
        }
        let mut v =
            DenseMatrix::from_row_major(n, 1, (0..n).map(|k| 1.0 + 0.1 * k as f64).collect())?;
        for _ in 0..2 {
            v = dense_solve(&shifted, &v)?;
            let norm = v.frobenius_norm();
            v = v.scale(1.0 / norm);
        }
        for r in 0..n {
            out[(r, col)] = v[(r, 0)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let a = DenseMatrix::from_rows(&[[2.0, 3.0], [0.0, 1.0]]).unwrap();
        let inv = dense_inverse(&a).unwrap();
        assert_eq!(inv.to_rows(), vec![vec![0.5, -1.5], vec![0.0, 1.0]]);
        assert_eq!(a.matmul(&inv).unwrap(), DenseMatrix::identity(2));
        assert_eq!(
            dense_inverse(&DenseMatrix::<f64>::identity(4)).unwrap(),
            DenseMatrix::identity(4)
        );
        let singular = DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert_eq!(
            dense_inverse(&singular),
            Err(Error::SingularPivot { pivot: 1 })
        );
    }

    #[test]
    fn solve_needs_pivoting() {
        let a =
            DenseMatrix::from_rows(&[[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [4.0, -3.0, 8.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[[1.0], [2.0], [3.0]]).unwrap();
        let x = dense_solve(&a, &b).unwrap();
        let r = a.matmul(&x).unwrap().sub(&b).unwrap().frobenius_norm();
        assert!(r <= 1e-11 * a.frobenius_norm() * x.frobenius_norm());
    }

    #[test]
    fn sylvester_running_example() {
        let h = DenseMatrix::from_rows(&[[2.0, 3.0], [0.0, 1.0]]).unwrap();
        let rep = sylvester_metric_space(&h).unwrap();
        assert_eq!(rep.nullspace_dim, 2);
        assert_eq!(rep.rank, 1);
        let theta = DenseMatrix::from_rows(&[[1.0, 3.0], [3.0, 10.0]]).unwrap();
        assert!(rep.distance_to_span(&theta).unwrap() < 1e-14);
        for b in &rep.basis {
            assert!(sylvester_residual(&h, b).unwrap() < 1e-15);
        }
    }

    #[test]
    fn sylvester_identity_is_full_space() {
        let rep = sylvester_metric_space(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(rep.nullspace_dim, 3);
        assert_eq!(rep.domain_dim(), 3);
    }

    #[test]
    fn sylvester_cap() {
        let big = DenseMatrix::<f64>::identity(18);
        assert!(matches!(
            sylvester_metric_space(&big),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn expm_examples() {
        let zero = DenseMatrix::<Complex64>::zeros(3, 3);
        assert_eq!(expm_series(&zero, 1e-15).unwrap(), DenseMatrix::identity(3));

        let t = 0.7;
        let a =
            DenseMatrix::from_diagonal(&[Complex64::new(0.0, -2.0 * t), Complex64::new(0.0, -t)]);
        let e = expm_series(&a, 1e-15).unwrap();
        assert!((e[(0, 0)] - Complex64::new(0.0, -2.0 * t).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - Complex64::new(0.0, -t).exp()).norm() < 1e-14);
        assert_eq!(e[(0, 1)], Complex64::new(0.0, 0.0));

        let mut n = DenseMatrix::<Complex64>::zeros(4, 4);
        n[(0, 1)] = Complex64::new(0.3, 0.1);
        n[(0, 3)] = Complex64::new(-0.2, 0.0);
        n[(2, 1)] = Complex64::new(0.1, 0.0);
        let e = expm_series(&n, 1e-15).unwrap();
        assert_eq!(e, DenseMatrix::identity(4).add(&n).unwrap());
    }

    #[test]
    fn expm_large_argument() {
        // exp of a rotation generator
        let theta = 17.0;
        let a = DenseMatrix::from_rows(&[[0.0, -theta], [theta, 0.0]])
            .unwrap()
            .to_complex();
        let e = expm_series(&a, 1e-15).unwrap();
        assert!((e[(0, 0)].re - theta.cos()).abs() < 1e-12);
        assert!((e[(1, 0)].re - theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn inverse_iteration_recovers_eigenvectors() {
        let h = DenseMatrix::from_rows(&[[2.0, 3.0], [0.0, 1.0]]).unwrap();
        let v = inverse_iteration_eigenvectors(&h, &[2.0, 1.0]).unwrap();
        // eigenvector of 1 is (-3, 1)/√10 up to sign
        let c = v.column(1);
        assert!((c[0] / c[1] + 3.0).abs() < 1e-9);
        assert!(v[(1, 0)].abs() < 1e-9);
    }
}
