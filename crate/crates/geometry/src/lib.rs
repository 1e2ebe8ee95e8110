//! Numerical side: integrate the frame ODE on the ideal slice, rebuild the
//! shape operator and connection, and check curvature identities sample by
//! sample.

pub mod check;
pub mod curvature;
pub mod frame;
pub mod ode;
pub mod structure;

pub use check::{
    check_trajectory, curvature_report, read_csv, write_csv, CheckReport, CurvatureReport, Thresholds, Verdict,
    CSV_COLUMNS,
};
pub use curvature::{
    delta2_cross_check, delta2_plane_grid, fibonacci_sphere, gauss_form, inequality_monte_carlo, inequality_residual,
    pointwise, random_adapted_frame, random_equality_case, random_plane, random_symmetric, sectional, CurvatureTensor,
    InequalitySummary, PointCurvature,
};
pub use frame::{ConnectionCoeffs, FrameState, PhiStructure, ShapeOp};
pub use ode::{
    integrate_2hopf, observed_order, rhs_2hopf, rhs_general, IntegrateOptions, Model, StepMeta, StopReason, Trajectory,
};
pub use structure::{
    codazzi_at, codazzi_residual, gauss_at, gauss_residual, kappa1_derivative, state_derivative, Mutation,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("non-Hopf frame requires beta != 0 (got beta = {0})")]
    Singular(f64),

    #[error("{0}")]
    Usage(String),

    #[error("malformed trajectory data: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
