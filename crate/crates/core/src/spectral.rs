//! Closed-form eigensystems.
//!
//! The spectrum of every model in the class is its diagonal. Eigenvectors
//! are collected into unit-diagonal factors `Q = 1 + N̄` (right eigenvectors
//! of `H`) and `Q̃ = 1 − N̄ᵀ` (eigenvectors of `Hᵀ`) with
//! `N̄₊ᵢ₋ⱼ = −n_ij / (λ₊ᵢ − λ₋ⱼ)`. Both off-diagonal parts square to zero, so
//! each factor is inverted by flipping the sign of its off-diagonal part.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::model::{
    nearly_equal, Coupling, Couplings, GzzHamiltonian, SignedIndex, ToDense, Variant,
    ZigZagHamiltonian,
};

pub trait Spectrum {
    /// Eigenvalues in linear (dense) order.
    fn spectrum(&self) -> Vec<f64>;
}

impl Spectrum for GzzHamiltonian {
    fn spectrum(&self) -> Vec<f64> {
        self.diagonal_entries()
    }
}

impl Spectrum for ZigZagHamiltonian {
    fn spectrum(&self) -> Vec<f64> {
        self.a().to_vec()
    }
}

/// Eigenvalues paired with their `±i` labels, ordered `+1, −1, +2, …`.
pub fn labeled_spectrum(h: &GzzHamiltonian) -> Vec<(SignedIndex, f64)> {
    h.spectrum()
        .into_iter()
        .enumerate()
        .map(|(p, v)| (SignedIndex::from_position(p), v))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// Entry `(i, j)` sits at row `+i`, column `−j`.
    Q,
    /// Entry `(i, j)` sits at row `−j`, column `+i`.
    QTilde,
}

/// Unit-diagonal eigenvector factor. Off-diagonal values are keyed by the
/// block pair `(i, j)` of the coupling they come from.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenFactor {
    m: usize,
    kind: FactorKind,
    entries: Couplings,
}

impl EigenFactor {
    pub fn identity(m: usize, kind: FactorKind) -> Self {
        Self {
            m,
            kind,
            entries: Couplings::new(),
        }
    }

    pub fn from_entries(m: usize, kind: FactorKind, entries: Couplings) -> Result<Self> {
        if let Some(c) = entries.iter().find(|c| c.i >= m || c.j >= m) {
            return Err(Error::InvalidModel(format!(
                "factor entry ({}, {}) outside 1..={m}",
                c.i + 1,
                c.j + 1
            )));
        }
        Ok(Self { m, kind, entries })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    pub fn entries(&self) -> &Couplings {
        &self.entries
    }

    /// 0-based dense position of the entry keyed `(i, j)`.
    pub fn position(&self, c: &Coupling) -> (usize, usize) {
        match self.kind {
            FactorKind::Q => (2 * c.i, 2 * c.j + 1),
            FactorKind::QTilde => (2 * c.j + 1, 2 * c.i),
        }
    }

    /// `F v` in O(dim + entries).
    pub fn apply<T: crate::dense::Scalar>(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for c in &self.entries {
            let (r, s) = self.position(c);
            out[r] += T::from_real(c.value) * v[s];
        }
        out
    }

    /// `Fᵀ v`.
    pub fn apply_transpose<T: crate::dense::Scalar>(&self, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for c in &self.entries {
            let (r, s) = self.position(c);
            out[s] += T::from_real(c.value) * v[r];
        }
        out
    }
}

impl ToDense for EigenFactor {
    fn to_dense(&self) -> DenseMatrix<f64> {
        let mut d = DenseMatrix::identity(self.dim());
        for c in &self.entries {
            d[self.position(c)] = c.value;
        }
        d
    }
}

fn check_diagonalizable(h: &GzzHamiltonian) -> Result<()> {
    let pairs = h.jordan_pairs();
    if pairs.is_empty() {
        Ok(())
    } else {
        Err(Error::NonDiagonalizable { pairs })
    }
}

/// Right eigenvectors: `H Q = Q Λ`, columns normalized to a unit own component.
pub fn eigen_q(h: &GzzHamiltonian) -> Result<EigenFactor> {
    check_diagonalizable(h)?;
    let (lp, lm) = (h.lambda_plus(), h.lambda_minus());
    let entries = h.couplings().map_values(|c| -c.value / (lp[c.i] - lm[c.j]));
    EigenFactor::from_entries(h.m(), FactorKind::Q, entries)
}

/// Eigenvectors of the transpose: `Hᵀ Q̃ = Q̃ Λ` with `Q̃ = 1 − N̄ᵀ`.
pub fn eigen_qtilde(h: &GzzHamiltonian) -> Result<EigenFactor> {
    check_diagonalizable(h)?;
    let (lp, lm) = (h.lambda_plus(), h.lambda_minus());
    let entries = h.couplings().map_values(|c| c.value / (lp[c.i] - lm[c.j]));
    EigenFactor::from_entries(h.m(), FactorKind::QTilde, entries)
}

/// `(1 + X)⁻¹ = 1 − X` for `X² = 0`.
pub fn factor_inverse(f: &EigenFactor) -> EigenFactor {
    EigenFactor {
        m: f.m,
        kind: f.kind,
        entries: f.entries.map_values(|c| -c.value),
    }
}

/// Unit-diagonal eigenvector matrix of a zig-zag model, returned in the same
/// zig-zag shape as the input (diagonal `p = 1`, off-diagonal `q`).
///
/// For `TZ` each `c_k` at row `r`, column `s` yields `q_k = −c_k / (a_r − a_s)`;
/// the row is the odd (1-based) member of `{k, k+1}`, so for even `k` the
/// denominator is `a_{k+1} − a_k`. The `ZZ` eigenvectors are the transposed
/// inverse of the `TZ(a⃗, c⃗)` ones, which flips the sign of `q`.
pub fn zz_eigen(z: &ZigZagHamiltonian) -> Result<ZigZagHamiltonian> {
    let tz = match z.variant() {
        Variant::TZ => z.clone(),
        Variant::ZZ => z.transpose(),
    };
    let a = tz.a();
    let mut offending = Vec::new();
    let q: Vec<f64> = tz
        .c()
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            if c == 0.0 {
                return 0.0;
            }
            let (r, s) = tz.c_position(k);
            if nearly_equal(a[r], a[s]) {
                offending.push(k + 1);
                return 0.0;
            }
            -c / (a[r] - a[s])
        })
        .collect();
    if !offending.is_empty() {
        return Err(Error::ZigZagNonDiagonalizable { offending });
    }
    let ones = vec![1.0; a.len()];
    match z.variant() {
        Variant::TZ => ZigZagHamiltonian::new(Variant::TZ, ones, q),
        Variant::ZZ => {
            ZigZagHamiltonian::new(Variant::ZZ, ones, q.into_iter().map(|x| -x).collect())
        }
    }
}
