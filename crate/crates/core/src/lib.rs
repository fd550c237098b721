//! One-particle quantum lattice-gas automata in one dimension.
//!
//! The crate builds the block-tridiagonal evolution operator of a two-component
//! walker on a finite or periodic lattice, including boundaries and rule
//! inhomogeneities, and analyses it: time evolution of wave packets, plane-wave
//! dispersion, reflection amplitudes, quantization conditions and dense spectra.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below are the usual entry points.

pub mod dynamics;
pub mod lattice;
pub mod linalg;
pub mod output;
pub mod scalar;
pub mod spectral;
pub mod weights;

pub use scalar::{Cx, Real};

pub type RuleParams64 = weights::RuleParams<f64>;
pub type WeightBlock64 = weights::WeightBlock<f64>;
pub type LatticeConfig64 = lattice::LatticeConfig<f64>;
pub type GlobalOperator64 = lattice::GlobalOperator<f64>;
pub type State64 = dynamics::State<f64>;
pub type SpectralResult64 = spectral::SpectralResult<f64>;

pub type RuleParams32 = weights::RuleParams<f32>;
pub type WeightBlock32 = weights::WeightBlock<f32>;
pub type LatticeConfig32 = lattice::LatticeConfig<f32>;
pub type GlobalOperator32 = lattice::GlobalOperator<f32>;
pub type State32 = dynamics::State<f32>;
pub type SpectralResult32 = spectral::SpectralResult<f32>;
