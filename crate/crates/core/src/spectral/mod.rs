//! Dispersion, reflection, boundary eigenfunctions, quantization and numeric spectra.

mod eigen;
mod planewave;
mod roots;
mod spectrum;

use thiserror::Error;

pub use eigen::{eigen_decompose, EigenDecomposition, EigenError};
pub use planewave::{
    band_range, dispersion_omega, eigenfunction_type1, eigenfunction_type2, eigenfunction_type3,
    planewave_from_z, planewave_spinor, reflection_type1, reflection_type1_right, reflection_type2,
    symbol, BoundaryEigenfunction, PlaneWave, CONDITION_CAP, DENOMINATOR_FLOOR, PROBE_SITES,
};
pub use roots::{
    quantization_function, quantization_roots, quantization_roots_general, trapped_wavenumbers,
    QuantizedMode, TrappedMode,
};
pub use spectrum::{
    boundary_sweep, full_spectrum, in_band, write_roots_csv, write_sweep_csv, Mode, ModeClass,
    SpectralResult, SweepParam, SweepPoint, BAND_TOLERANCE, CORNER_WEIGHT, SPECTRUM_HEADER,
};

use crate::lattice::{OperatorError, ValidationErrors};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("plane-wave spinor vanishes at e^(ik) = {z:?}")]
    ZeroSpinor { z: (f64, f64) },
    #[error("{what}: denominator modulus {modulus:e} below floor")]
    DenominatorNearZero { what: &'static str, modulus: f64 },
    #[error("boundary system is singular (condition number {condition:e})")]
    SingularSystem { condition: f64 },
    #[error("parameter {param} does not apply to boundary {boundary}")]
    ParamNotApplicable {
        param: &'static str,
        boundary: String,
    },
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("invalid configuration: {0}")]
    Config(ValidationErrors),
}
