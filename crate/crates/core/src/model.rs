//! Domain types: signed block labels, the generalized zig-zag class
//! `H = Λ + N`, the classic zig-zag matrices and metric weights.
//!
//! Rows and columns of a `2m`-dimensional model carry the labels
//! `+1, −1, +2, −2, …, +m, −m`. Label `+i` sits at 0-based dense position
//! `2(i−1)` and `−i` at `2(i−1) + 1`. Block indices inside the Rust API
//! (coupling keys, [`JordanPair`]) are 0-based; [`SignedIndex`] and all
//! external formats use 1-based blocks.

use std::fmt;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Relative tolerance for eigenvalue coincidence tests.
pub const EQ_TOL: f64 = 1e-12;

/// `|a − b| ≤ EQ_TOL · max(1, |a|, |b|)`.
pub fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQ_TOL * 1f64.max(a.abs()).max(b.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

/// Row/column label `±i` with a 1-based block number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedIndex {
    pub sign: Sign,
    pub block: usize,
}

impl SignedIndex {
    pub fn plus(block: usize) -> Self {
        Self {
            sign: Sign::Plus,
            block,
        }
    }

    pub fn minus(block: usize) -> Self {
        Self {
            sign: Sign::Minus,
            block,
        }
    }

    /// 1-based linear index: `+i ↦ 2i−1`, `−i ↦ 2i`.
    pub fn linear(self) -> usize {
        match self.sign {
            Sign::Plus => 2 * self.block - 1,
            Sign::Minus => 2 * self.block,
        }
    }

    /// 0-based dense position.
    pub fn position(self) -> usize {
        self.linear() - 1
    }

    pub fn from_position(pos: usize) -> Self {
        let block = pos / 2 + 1;
        if pos.is_multiple_of(2) {
            Self::plus(block)
        } else {
            Self::minus(block)
        }
    }
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "+{}", self.block),
            Sign::Minus => write!(f, "-{}", self.block),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Sparse map `(i, j) ↦ n_ij` (0-based blocks), sorted by `(i, j)`,
/// free of duplicates and exact zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Couplings {
    entries: Vec<Coupling>,
}

impl Couplings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the map for `m` blocks. Exact zeros are dropped; duplicates,
    /// out-of-range keys and non-finite values are errors.
    pub fn from_triplets(
        m: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<Coupling> = Vec::new();
        for (i, j, value) in triplets {
            if i >= m || j >= m {
                return Err(Error::InvalidModel(format!(
                    "coupling ({}, {}) outside 1..={m}",
                    i + 1,
                    j + 1
                )));
            }
            if !value.is_finite() {
                return Err(Error::InvalidModel(format!(
                    "coupling ({}, {}) is not finite",
                    i + 1,
                    j + 1
                )));
            }
            if value != 0.0 {
                entries.push(Coupling { i, j, value });
            }
        }
        entries.sort_by_key(|c| (c.i, c.j));
        if let Some(w) = entries
            .windows(2)
            .find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j))
        {
            return Err(Error::InvalidModel(format!(
                "duplicate coupling ({}, {})",
                w[0].i + 1,
                w[0].j + 1
            )));
        }
        Ok(Self { entries })
    }

    /// Caller guarantees sorted, unique, nonzero, finite entries.
    pub(crate) fn from_sorted_unchecked(entries: Vec<Coupling>) -> Self {
        debug_assert!(entries
            .windows(2)
            .all(|w| (w[0].i, w[0].j) < (w[1].i, w[1].j)));
        debug_assert!(entries.iter().all(|c| c.value != 0.0));
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Coupling> {
        self.entries.iter()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.entries
            .binary_search_by_key(&(i, j), |c| (c.i, c.j))
            .ok()
            .map(|k| self.entries[k].value)
    }

    /// Applies `f` to every value, pruning results that are exactly zero.
    pub(crate) fn map_values(&self, f: impl Fn(&Coupling) -> f64) -> Self {
        Self::from_sorted_unchecked(
            self.entries
                .iter()
                .filter_map(|c| {
                    let value = f(c);
                    (value != 0.0).then_some(Coupling { value, ..*c })
                })
                .collect(),
        )
    }

    /// Sorted merge of two maps; `f(a, b)` sees 0.0 for absent entries.
    pub(crate) fn merge_with(
        &self,
        other: &Self,
        f: impl Fn(usize, usize, f64, f64) -> f64,
    ) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len().max(b.len()));
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            let key_a = a.get(x).map(|c| (c.i, c.j));
            let key_b = b.get(y).map(|c| (c.i, c.j));
            let (key, va, vb) = match (key_a, key_b) {
                (Some(ka), Some(kb)) if ka == kb => {
                    x += 1;
                    y += 1;
                    (ka, a[x - 1].value, b[y - 1].value)
                }
                (Some(ka), Some(kb)) if ka < kb => {
                    x += 1;
                    (ka, a[x - 1].value, 0.0)
                }
                (Some(ka), None) => {
                    x += 1;
                    (ka, a[x - 1].value, 0.0)
                }
                (_, Some(kb)) => {
                    y += 1;
                    (kb, 0.0, b[y - 1].value)
                }
                (None, None) => unreachable!(),
            };
            let value = f(key.0, key.1, va, vb);
            if value != 0.0 {
                out.push(Coupling {
                    i: key.0,
                    j: key.1,
                    value,
                });
            }
        }
        Self::from_sorted_unchecked(out)
    }
}

impl<'a> IntoIterator for &'a Couplings {
    type Item = &'a Coupling;
    type IntoIter = std::slice::Iter<'a, Coupling>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Generalized zig-zag Hamiltonian `H(λ⃗, n̂) = Λ + N` of dimension `2m`.
///
/// `N` carries `n_ij` at row `+i`, column `−j` and nothing else, so `N² = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GzzHamiltonian {
    lambda_plus: Vec<f64>,
    lambda_minus: Vec<f64>,
    couplings: Couplings,
}

impl GzzHamiltonian {
    /// `triplets` use 0-based block indices.
    pub fn new(
        lambda_plus: Vec<f64>,
        lambda_minus: Vec<f64>,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let m = lambda_plus.len();
        let couplings = Couplings::from_triplets(m, triplets)?;
        Self::from_parts(lambda_plus, lambda_minus, couplings)
    }

    pub fn from_parts(
        lambda_plus: Vec<f64>,
        lambda_minus: Vec<f64>,
        couplings: Couplings,
    ) -> Result<Self> {
        let m = lambda_plus.len();
        if lambda_minus.len() != m {
            return Err(Error::InvalidModel(format!(
                "lambda_plus has {m} entries but lambda_minus has {}",
                lambda_minus.len()
            )));
        }
        if m == 0 {
            return Err(Error::InvalidModel("model needs at least one block".into()));
        }
        if let Some(k) = lambda_plus.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "lambda_plus[{}] is not finite",
                k + 1
            )));
        }
        if let Some(k) = lambda_minus.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "lambda_minus[{}] is not finite",
                k + 1
            )));
        }
        if let Some(c) = couplings.iter().find(|c| c.i >= m || c.j >= m) {
            return Err(Error::InvalidModel(format!(
                "coupling ({}, {}) outside 1..={m}",
                c.i + 1,
                c.j + 1
            )));
        }
        Ok(Self {
            lambda_plus,
            lambda_minus,
            couplings,
        })
    }

    /// Diagonal model `Λ` without couplings.
    pub fn diagonal(lambda_plus: Vec<f64>, lambda_minus: Vec<f64>) -> Result<Self> {
        Self::from_parts(lambda_plus, lambda_minus, Couplings::new())
    }

    pub fn identity(m: usize) -> Self {
        Self {
            lambda_plus: vec![1.0; m],
            lambda_minus: vec![1.0; m],
            couplings: Couplings::new(),
        }
    }

    /// Number of 2×2 blocks.
    pub fn m(&self) -> usize {
        self.lambda_plus.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.m()
    }

    pub fn lambda_plus(&self) -> &[f64] {
        &self.lambda_plus
    }

    pub fn lambda_minus(&self) -> &[f64] {
        &self.lambda_minus
    }

    pub fn couplings(&self) -> &Couplings {
        &self.couplings
    }

    /// Diagonal entry at a 0-based dense position.
    pub fn diagonal_at(&self, pos: usize) -> f64 {
        if pos.is_multiple_of(2) {
            self.lambda_plus[pos / 2]
        } else {
            self.lambda_minus[pos / 2]
        }
    }

    /// Recovers a model from its dense image, rejecting anything outside the class.
    pub fn from_dense(dense: &DenseMatrix<f64>) -> Result<Self> {
        let n = dense.rows();
        if !dense.is_square() || n == 0 || !n.is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "expected an even square matrix, got {}x{}",
                dense.rows(),
                dense.cols()
            )));
        }
        let m = n / 2;
        let mut triplets = Vec::new();
        for r in 0..n {
            for c in 0..n {
                let v = dense[(r, c)];
                if r == c || v == 0.0 {
                    continue;
                }
                if r % 2 == 0 && c % 2 == 1 {
                    triplets.push((r / 2, c / 2, v));
                } else {
                    return Err(Error::InvalidModel(format!(
                        "nonzero entry at ({}, {}) is outside the +i/-j coupling pattern",
                        SignedIndex::from_position(r),
                        SignedIndex::from_position(c)
                    )));
                }
            }
        }
        let lambda_plus = (0..m).map(|i| dense[(2 * i, 2 * i)]).collect();
        let lambda_minus = (0..m).map(|i| dense[(2 * i + 1, 2 * i + 1)]).collect();
        Self::new(lambda_plus, lambda_minus, triplets)
    }

    /// Dense image of `N` alone.
    pub fn nilpotent_part_dense(&self) -> DenseMatrix<f64> {
        let mut d = DenseMatrix::zeros(self.dim(), self.dim());
        for c in &self.couplings {
            d[(2 * c.i, 2 * c.j + 1)] = c.value;
        }
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Couplings in even (1-based) rows.
    ZZ,
    /// Transpose of `ZZ`.
    TZ,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::ZZ => "ZZ",
            Variant::TZ => "TZ",
        })
    }
}

/// Zig-zag matrix `H_ZZ(a⃗, c⃗)` or its transpose `H_TZ(a⃗, c⃗)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZigZagHamiltonian {
    variant: Variant,
    a: Vec<f64>,
    c: Vec<f64>,
}

impl ZigZagHamiltonian {
    pub fn new(variant: Variant, a: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidModel(
                "zig-zag model needs at least one diagonal entry".into(),
            ));
        }
        if c.len() + 1 != a.len() {
            return Err(Error::InvalidModel(format!(
                "dimension {} needs {} c entries, got {}",
                a.len(),
                a.len() - 1,
                c.len()
            )));
        }
        if let Some(k) = a.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidModel(format!("a[{}] is not finite", k + 1)));
        }
        if let Some(k) = c.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidModel(format!("c[{}] is not finite", k + 1)));
        }
        Ok(Self { variant, a, c })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// 0-based dense position of `c[k]` in the `ZZ` layout. The row is always
    /// the odd 0-based index of the pair `{k, k+1}`.
    pub(crate) fn zz_position(k: usize) -> (usize, usize) {
        if k.is_multiple_of(2) {
            (k + 1, k)
        } else {
            (k, k + 1)
        }
    }

    /// 0-based dense position of `c[k]` for this model's variant.
    pub fn c_position(&self, k: usize) -> (usize, usize) {
        let (r, c) = Self::zz_position(k);
        match self.variant {
            Variant::ZZ => (r, c),
            Variant::TZ => (c, r),
        }
    }

    pub fn transpose(&self) -> Self {
        let variant = match self.variant {
            Variant::ZZ => Variant::TZ,
            Variant::TZ => Variant::ZZ,
        };
        Self {
            variant,
            a: self.a.clone(),
            c: self.c.clone(),
        }
    }
}

/// Metric weights `K² = diag(κ²₊₁, κ²₋₁, …, κ²₋ₘ)` in linear order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    kappa_sq: Vec<f64>,
}

impl WeightVector {
    pub fn new(kappa_sq: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = kappa_sq
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidWeight { index, value });
        }
        Ok(Self { kappa_sq })
    }

    pub fn uniform(dim: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; dim])
    }

    pub fn len(&self) -> usize {
        self.kappa_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa_sq.is_empty()
    }

    pub fn kappa_sq(&self) -> &[f64] {
        &self.kappa_sq
    }

    pub fn kappa(&self) -> Vec<f64> {
        self.kappa_sq.iter().map(|k| k.sqrt()).collect()
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.kappa_sq.iter().map(|k| k * s).collect())
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.kappa_sq.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "weight vector has {} entries, model dimension is {dim}",
                self.kappa_sq.len()
            )));
        }
        Ok(())
    }
}

/// Coupled pair `(+i, −j)` with `λ₊ᵢ = λ₋ⱼ`; 0-based blocks, displayed 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanPair {
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for JordanPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i + 1, self.j + 1)
    }
}

/// Diagnostics collected by [`Validate::validate`]. Positions are 0-based dense indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub jordan_pairs: Vec<JordanPair>,
    pub zero_diagonal: Vec<usize>,
    /// Groups of positions sharing one diagonal value. Informational only.
    pub degenerate: Vec<Vec<usize>>,
}

impl ValidationReport {
    pub fn is_diagonalizable(&self) -> bool {
        self.jordan_pairs.is_empty()
    }

    pub fn is_invertible(&self) -> bool {
        self.zero_diagonal.is_empty()
    }

    pub fn has_distinct_spectrum(&self) -> bool {
        self.degenerate.is_empty()
    }

    fn from_diagonal(diag: &[f64], jordan_pairs: Vec<JordanPair>) -> Self {
        let zero_diagonal = diag
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0.0)
            .map(|(k, _)| k)
            .collect();
        let mut order: Vec<usize> = (0..diag.len()).collect();
        order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
        let mut degenerate = Vec::new();
        let mut group = vec![order[0]];
        for w in order.windows(2) {
            if nearly_equal(diag[w[0]], diag[w[1]]) {
                group.push(w[1]);
            } else {
                if group.len() > 1 {
                    group.sort_unstable();
                    degenerate.push(std::mem::take(&mut group));
                }
                group = vec![w[1]];
            }
        }
        if group.len() > 1 {
            group.sort_unstable();
            degenerate.push(group);
        }
        degenerate.sort();
        Self {
            jordan_pairs,
            zero_diagonal,
            degenerate,
        }
    }
}

pub trait Validate {
    fn validate(&self) -> ValidationReport;
}

impl GzzHamiltonian {
    pub(crate) fn jordan_pairs(&self) -> Vec<JordanPair> {
        self.couplings
            .iter()
            .filter(|c| nearly_equal(self.lambda_plus[c.i], self.lambda_minus[c.j]))
            .map(|c| JordanPair { i: c.i, j: c.j })
            .collect()
    }

    pub(crate) fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.dim()).map(|p| self.diagonal_at(p)).collect()
    }
}

impl Validate for GzzHamiltonian {
    fn validate(&self) -> ValidationReport {
        ValidationReport::from_diagonal(&self.diagonal_entries(), self.jordan_pairs())
    }
}

impl Validate for ZigZagHamiltonian {
    fn validate(&self) -> ValidationReport {
        // c[k] couples positions k and k+1; in block terms c[2i] = n_ii and c[2i+1] = n_{i,i+1}.
        let jordan_pairs = self
            .c
            .iter()
            .enumerate()
            .filter(|&(k, &v)| v != 0.0 && nearly_equal(self.a[k], self.a[k + 1]))
            .map(|(k, _)| JordanPair {
                i: k / 2,
                j: k / 2 + k % 2,
            })
            .collect();
        ValidationReport::from_diagonal(&self.a, jordan_pairs)
    }
}

/// Explicit dense image.
pub trait ToDense {
    fn to_dense(&self) -> DenseMatrix<f64>;
}

impl ToDense for GzzHamiltonian {
    fn to_dense(&self) -> DenseMatrix<f64> {
        let mut d = self.nilpotent_part_dense();
        for p in 0..self.dim() {
            d[(p, p)] = self.diagonal_at(p);
        }
        d
    }
}

impl ToDense for ZigZagHamiltonian {
    fn to_dense(&self) -> DenseMatrix<f64> {
        let mut d = DenseMatrix::from_diagonal(&self.a);
        for (k, &v) in self.c.iter().enumerate() {
            d[self.c_position(k)] = v;
        }
        d
    }
}
