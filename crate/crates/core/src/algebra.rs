//! Closed-form algebra on the generalized class: sums, products, inverse,
//! transpose, coupling patterns, odd-dimension embedding and the bridge to
//! the classic zig-zag matrices.
//!
//! Everything here works on the sparse coupling map; no operation builds a
//! `2m × 2m` buffer.

use std::collections::BTreeSet;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::model::{GzzHamiltonian, SignedIndex, ToDense, Variant, ZigZagHamiltonian};

fn check_same_m(a: &GzzHamiltonian, b: &GzzHamiltonian) -> Result<()> {
    if a.m() != b.m() {
        return Err(Error::DimensionMismatch(format!(
            "models have {} and {} blocks",
            a.m(),
            b.m()
        )));
    }
    Ok(())
}

fn zip(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

pub fn gzz_add(a: &GzzHamiltonian, b: &GzzHamiltonian) -> Result<GzzHamiltonian> {
    check_same_m(a, b)?;
    let couplings = a.couplings().merge_with(b.couplings(), |_, _, x, y| x + y);
    GzzHamiltonian::from_parts(
        zip(a.lambda_plus(), b.lambda_plus(), |x, y| x + y),
        zip(a.lambda_minus(), b.lambda_minus(), |x, y| x + y),
        couplings,
    )
}

/// `(Λ + N)(Λ' + N') = ΛΛ' + (ΛN' + NΛ')`, since `NN' = 0` inside the class.
pub fn gzz_mul(a: &GzzHamiltonian, b: &GzzHamiltonian) -> Result<GzzHamiltonian> {
    check_same_m(a, b)?;
    let (lp, lm) = (a.lambda_plus(), b.lambda_minus());
    let couplings = a.couplings().merge_with(b.couplings(), |i, j, n, n_prime| {
        lp[i] * n_prime + n * lm[j]
    });
    GzzHamiltonian::from_parts(
        zip(a.lambda_plus(), b.lambda_plus(), |x, y| x * y),
        zip(a.lambda_minus(), b.lambda_minus(), |x, y| x * y),
        couplings,
    )
}

/// `(Λ + N)⁻¹ = Λ⁻¹ − Λ⁻¹ N Λ⁻¹`.
pub fn gzz_inverse(a: &GzzHamiltonian) -> Result<GzzHamiltonian> {
    let zero_positions: Vec<SignedIndex> = (0..a.dim())
        .filter(|&p| a.diagonal_at(p) == 0.0)
        .map(SignedIndex::from_position)
        .collect();
    if !zero_positions.is_empty() {
        return Err(Error::SingularMatrix { zero_positions });
    }
    let (lp, lm) = (a.lambda_plus(), a.lambda_minus());
    let couplings = a.couplings().map_values(|c| -c.value / (lp[c.i] * lm[c.j]));
    GzzHamiltonian::from_parts(
        lp.iter().map(|x| 1.0 / x).collect(),
        lm.iter().map(|x| 1.0 / x).collect(),
        couplings,
    )
}

/// Set of block pairs `(i, j)` (0-based) carrying a nonzero coupling.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CouplingPattern(BTreeSet<(usize, usize)>);

impl CouplingPattern {
    pub fn of(model: &GzzHamiltonian) -> Self {
        Self(model.couplings().iter().map(|c| (c.i, c.j)).collect())
    }

    pub fn union(&self, other: &Self) -> Self {
        Self(self.0.union(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.0.contains(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every pair has `j ∈ {i, i+1}`: the zig-zag band.
    pub fn is_zigzag(&self) -> bool {
        self.0.iter().all(|&(i, j)| j == i || j == i + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.0.iter()
    }
}

/// `Hᵀ = Λ + Nᵀ`: the coupling `n_ij` moves to row `−j`, column `+i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransposedGzz {
    source: GzzHamiltonian,
}

impl TransposedGzz {
    /// The model whose transpose this is.
    pub fn source(&self) -> &GzzHamiltonian {
        &self.source
    }

    pub fn transpose(&self) -> GzzHamiltonian {
        self.source.clone()
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }
}

impl ToDense for TransposedGzz {
    fn to_dense(&self) -> DenseMatrix<f64> {
        let h = &self.source;
        let mut d = DenseMatrix::zeros(h.dim(), h.dim());
        for p in 0..h.dim() {
            d[(p, p)] = h.diagonal_at(p);
        }
        for c in h.couplings() {
            d[(2 * c.j + 1, 2 * c.i)] = c.value;
        }
        d
    }
}

pub fn gzz_transpose(a: &GzzHamiltonian) -> TransposedGzz {
    TransposedGzz { source: a.clone() }
}

/// Index permutation; `image()[k]` is where index `k` is sent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Swaps `2k ↔ 2k+1` (0-based), i.e. `+i ↔ −i`.
    pub fn pair_swap(dim: usize) -> Self {
        Self((0..dim).map(|k| k ^ 1).collect())
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `P A Pᵀ`.
    pub fn conjugate<T: crate::dense::Scalar>(&self, a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        a.permute_symmetric(&self.0)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (k, &p) in self.0.iter().enumerate() {
            inv[p] = k;
        }
        Self(inv)
    }

    /// `P v`.
    pub fn apply<T: Copy + Default>(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); v.len()];
        for (k, &p) in self.0.iter().enumerate() {
            out[p] = v[k];
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix<f64> {
        let mut d = DenseMatrix::zeros(self.0.len(), self.0.len());
        for (k, &p) in self.0.iter().enumerate() {
            d[(p, k)] = 1.0;
        }
        d
    }
}

/// A zig-zag matrix expressed in the generalized class.
///
/// For `ZZ` input `dense(Z) = P·dense(model)·Pᵀ`; for `TZ` input
/// `transposed` is set and `dense(Z) = P·dense(model)ᵀ·Pᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZigZagEmbedding {
    pub model: GzzHamiltonian,
    pub permutation: Permutation,
    pub transposed: bool,
}

impl ZigZagEmbedding {
    /// Dense image in the zig-zag basis, rebuilt from the generalized model.
    pub fn zigzag_dense(&self) -> Result<DenseMatrix<f64>> {
        let d = if self.transposed {
            gzz_transpose(&self.model).to_dense()
        } else {
            self.model.to_dense()
        };
        self.permutation.conjugate(&d)
    }
}

/// Maps an even-dimensional zig-zag matrix onto the generalized class by the
/// `+i ↔ −i` relabelling: `λ₋ᵢ = a_{2i−1}`, `λ₊ᵢ = a_{2i}`,
/// `n_ii = c_{2i−1}`, `n_{i,i+1} = c_{2i}` (1-based). Odd dimensions are
/// padded first with [`embed_odd`].
pub fn zz_to_gzz(z: &ZigZagHamiltonian) -> Result<ZigZagEmbedding> {
    let z = if z.dim() % 2 == 1 {
        embed_odd(z)
    } else {
        z.clone()
    };
    let (a, c) = (z.a(), z.c());
    let m = z.dim() / 2;
    let lambda_plus = (0..m).map(|i| a[2 * i + 1]).collect();
    let lambda_minus = (0..m).map(|i| a[2 * i]).collect();
    let triplets = c
        .iter()
        .enumerate()
        .map(|(k, &v)| (k / 2, k / 2 + k % 2, v));
    Ok(ZigZagEmbedding {
        model: GzzHamiltonian::new(lambda_plus, lambda_minus, triplets)?,
        permutation: Permutation::pair_swap(z.dim()),
        transposed: z.variant() == Variant::TZ,
    })
}

/// Inverse of [`zz_to_gzz`]; needs couplings confined to `j ∈ {i, i+1}`.
pub fn gzz_to_zz(h: &GzzHamiltonian, variant: Variant) -> Result<ZigZagHamiltonian> {
    if let Some(bad) = h.couplings().iter().find(|c| c.j != c.i && c.j != c.i + 1) {
        return Err(Error::PatternTooWide {
            i: bad.i + 1,
            j: bad.j + 1,
        });
    }
    let m = h.m();
    let a = (0..m)
        .flat_map(|i| [h.lambda_minus()[i], h.lambda_plus()[i]])
        .collect();
    let mut c = vec![0.0; 2 * m - 1];
    for cp in h.couplings() {
        c[2 * cp.i + (cp.j - cp.i)] = cp.value;
    }
    ZigZagHamiltonian::new(variant, a, c)
}

/// Pads an odd-dimensional zig-zag matrix with a zero row and column.
/// Even input is returned unchanged.
pub fn embed_odd(z: &ZigZagHamiltonian) -> ZigZagHamiltonian {
    if z.dim().is_multiple_of(2) {
        return z.clone();
    }
    let mut a = z.a().to_vec();
    let mut c = z.c().to_vec();
    a.push(0.0);
    c.push(0.0);
    ZigZagHamiltonian::new(z.variant(), a, c).expect("padding preserves validity")
}

/// Builds a `2m`-dimensional model from an odd `(2m−1)`-dimensional one that
/// lacks label `−m`: `λ₋ₘ = 0` and no coupling enters column `−m`.
///
/// `lambda_minus` holds `m − 1` entries; coupling keys are 0-based.
pub fn embed_odd_gzz(
    lambda_plus: Vec<f64>,
    mut lambda_minus: Vec<f64>,
    triplets: impl IntoIterator<Item = (usize, usize, f64)>,
) -> Result<GzzHamiltonian> {
    let m = lambda_plus.len();
    if m == 0 || lambda_minus.len() + 1 != m {
        return Err(Error::InvalidModel(format!(
            "odd model with {m} plus labels needs {} minus labels, got {}",
            m.saturating_sub(1),
            lambda_minus.len()
        )));
    }
    let triplets: Vec<_> = triplets.into_iter().collect();
    if let Some(&(i, _, v)) = triplets.iter().find(|&&(_, j, v)| j + 1 == m && v != 0.0) {
        return Err(Error::InvalidModel(format!(
            "coupling ({}, {m}) = {v} enters the padded column -{m}",
            i + 1
        )));
    }
    lambda_minus.push(0.0);
    GzzHamiltonian::new(lambda_plus, lambda_minus, triplets)
}
