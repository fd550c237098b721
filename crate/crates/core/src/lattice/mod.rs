//! Lattice configurations and the global evolution operator they define.

mod config;
mod operator;

pub use config::{
    validate_config, Boundaries, Boundary, ConfigError, Junction, JunctionKind, LatticeConfig,
    RawBoundaries, RawBoundary, RawBoundaryKind, RawConfig, RawSegment, Segment, Side,
    ValidationErrors, ANGLE_TOLERANCE,
};
pub use operator::{
    assemble_operator, Corner, CornerReport, GlobalOperator, Mover, OperatorError, UnitarityReport,
    DEFAULT_DENSE_CAP,
};
