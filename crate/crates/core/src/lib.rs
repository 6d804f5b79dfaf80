//! Closed-form algebra, spectra, metrics and dynamics for zig-zag and
//! generalized zig-zag non-Hermitian Hamiltonians, with a dense oracle to
//! check them against.
//!
//! A generalized model of size `2m` has diagonal `Λ` with entries `λ₊ᵢ`,
//! `λ₋ᵢ` and a nilpotent part whose only nonzeros `n_ij` couple row `+i` to
//! column `−j`. Label `+i` sits at dense position `2i` and `−i` at `2i+1`
//! (0-based blocks).

pub mod algebra;
pub mod bench;
pub mod dense;
pub mod dynamics;
pub mod error;
pub mod generate;
pub mod io;
pub mod metric;
pub mod model;
pub mod oracle;
#[cfg(test)]
mod properties;
pub mod spectral;
pub mod verify;
pub mod zigzag;

pub use algebra::{
    embed_odd, embed_odd_gzz, gzz_add, gzz_inverse, gzz_mul, gzz_to_zz, gzz_transpose, zz_to_gzz,
    CouplingPattern, Permutation, TransposedGzz, ZigZagEmbedding,
};
pub use dense::DenseMatrix;
pub use dynamics::{evolve, propagator, theta_norm, time_grid, Evolver, StateVector, Trajectory};
pub use error::{Error, Result};
pub use generate::{generate, GeneratorConfig, Pattern};
pub use io::{model_from_json, model_to_json, ModelFile, ThetaRecord};
pub use metric::{
    bandwidth, build_theta, build_theta_transposed, certify_positive, dyson_factor,
    to_zigzag_basis, DysonFactor, MetricOperator, Positivity,
};
pub use model::{
    Coupling, Couplings, GzzHamiltonian, JordanPair, Sign, SignedIndex, ToDense, Validate,
    ValidationReport, Variant, WeightVector, ZigZagHamiltonian,
};
pub use spectral::{
    eigen_q, eigen_qtilde, factor_inverse, zz_eigen, EigenFactor, FactorKind, Spectrum,
};
pub use verify::{verify_gzz, verify_model, verify_zigzag, Status, VerifyReport};
pub use zigzag::{zigzag_evolve, zigzag_propagator, zigzag_theta};
