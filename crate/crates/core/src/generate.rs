//! Seeded random models with a guaranteed spectral gap on coupled pairs.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::GzzHamiltonian;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// Every `(i, j)`.
    Full,
    /// `j ∈ {i, i+1}`.
    Zigzag,
    /// `|i − j| ≤ k`.
    Banded(usize),
}

impl Pattern {
    pub fn contains(self, i: usize, j: usize) -> bool {
        match self {
            Pattern::Full => true,
            Pattern::Zigzag => j == i || j == i + 1,
            Pattern::Banded(k) => i.abs_diff(j) <= k,
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Pattern::Full),
            "zigzag" => Ok(Pattern::Zigzag),
            _ => {
                let k = s
                    .strip_prefix("banded:")
                    .or_else(|| s.strip_prefix("banded(").and_then(|r| r.strip_suffix(')')))
                    .ok_or_else(|| {
                        Error::Generator(format!(
                            "unknown pattern {s:?}; use full, zigzag or banded:K"
                        ))
                    })?;
                k.parse()
                    .map(Pattern::Banded)
                    .map_err(|_| Error::Generator(format!("bad band width in {s:?}")))
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Full => f.write_str("full"),
            Pattern::Zigzag => f.write_str("zigzag"),
            Pattern::Banded(k) => write!(f, "banded:{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub dim: usize,
    pub pattern: Pattern,
    pub seed: u64,
    /// Minimum `|λ₊ᵢ − λ₋ⱼ|` over coupled pairs.
    pub gap: f64,
    /// Bound on entry magnitudes.
    pub range: f64,
    /// Allow odd `dim` by padding label `−m` with a zero.
    pub embed_odd: bool,
}

impl GeneratorConfig {
    pub fn new(dim: usize, pattern: Pattern, seed: u64) -> Self {
        Self {
            dim,
            pattern,
            seed,
            gap: 0.1,
            range: 1.0,
            embed_odd: false,
        }
    }

    fn check(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Generator("dimension must be positive".into()));
        }
        if self.dim % 2 == 1 && !self.embed_odd {
            return Err(Error::Generator(format!(
                "odd dimension {} needs --embed-odd",
                self.dim
            )));
        }
        if !(self.gap > 0.0 && self.gap.is_finite()) {
            return Err(Error::Generator(format!(
                "gap must be > 0, got {}",
                self.gap
            )));
        }
        if !(self.range >= self.gap && self.range.is_finite()) {
            return Err(Error::Generator(format!(
                "range {} must be at least the gap {}",
                self.range, self.gap
            )));
        }
        Ok(())
    }
}

const REJECTION_TRIES: usize = 256;

fn signed_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    let x = rng.gen_range(lo..=hi);
    if rng.gen_bool(0.5) {
        x
    } else {
        -x
    }
}

/// Draws a model for `config`. Diagonal entries are uniform in
/// `±[gap, range]`, resampled until every coupled pair is at least `gap`
/// apart. When rejection cannot satisfy a dense pattern the plus and minus
/// eigenvalues are drawn from opposite half-lines instead.
pub fn generate(config: &GeneratorConfig) -> Result<GzzHamiltonian> {
    config.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let m = config.dim.div_ceil(2);
    let padded = config.dim % 2 == 1;
    let (gap, range) = (config.gap, config.range);

    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| config.pattern.contains(i, j) && !(padded && j == m - 1))
        .collect();

    let lambda_plus: Vec<f64> = (0..m)
        .map(|_| signed_uniform(&mut rng, gap, range))
        .collect();
    let mut lambda_minus = Vec::with_capacity(m);
    let mut feasible = true;
    for j in 0..m {
        if padded && j == m - 1 {
            lambda_minus.push(0.0);
            continue;
        }
        let coupled: Vec<f64> = pairs
            .iter()
            .filter(|p| p.1 == j)
            .map(|p| lambda_plus[p.0])
            .collect();
        let found = (0..REJECTION_TRIES)
            .map(|_| signed_uniform(&mut rng, gap, range))
            .find(|x| coupled.iter().all(|lp| (lp - x).abs() >= gap));
        match found {
            Some(x) => lambda_minus.push(x),
            None => {
                feasible = false;
                break;
            }
        }
    }

    let (lambda_plus, lambda_minus) = if feasible {
        (lambda_plus, lambda_minus)
    } else {
        let orient = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let half = 0.5 * gap;
        let lp = (0..m)
            .map(|_| orient * rng.gen_range(half..=range))
            .collect();
        let lm = (0..m)
            .map(|j| {
                if padded && j == m - 1 {
                    0.0
                } else {
                    -orient * rng.gen_range(half..=range)
                }
            })
            .collect();
        (lp, lm)
    };

    let triplets: Vec<_> = pairs
        .iter()
        .map(|&(i, j)| (i, j, signed_uniform(&mut rng, 0.1 * range, range)))
        .collect();
    GzzHamiltonian::new(lambda_plus, lambda_minus, triplets)
}
