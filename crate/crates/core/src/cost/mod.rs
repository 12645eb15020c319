//! Energy-delay cost model: calibrated lookups, relative-variation tables,
//! their audit against the published values, and a structural estimator.

pub mod audit;
pub mod calibration;
pub mod reference;
pub mod structural;
pub mod tables;

pub use audit::{audit, Anomaly, AuditCell, AuditReport, AuditStatus, AUDIT_TOLERANCE_PP};
pub use calibration::{edp_lookup, CalibrationTable, PowerLawScaling, ScalingHook, SEED_SIZE};
pub use structural::{structural_estimate, structural_estimate_with, CostCoefficients, StructuralEstimate};
pub use tables::{
    comparison_table, format_percent, relative_variation, ComparisonKind, ComparisonTable,
    RelativeVariation,
};
