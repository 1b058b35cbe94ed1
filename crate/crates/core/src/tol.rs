//! Default tolerances (calibrated for `f64`; see [`crate::Real::tol`]).

/// Maximum `|H - H*|` accepted before symmetrizing.
pub const HERMITIAN: f64 = 1e-8;
/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as roundoff and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;
/// Unit-trace tolerance for density matrices.
pub const TRACE: f64 = 1e-9;
/// Unit-norm tolerance for pure states.
pub const NORM: f64 = 1e-10;
/// Kraus completeness and Choi partial-trace tolerance.
pub const COMPLETENESS: f64 = 1e-8;
/// Unitarity / isometry tolerance.
pub const UNITARY: f64 = 1e-8;
/// POVM elements must sum to the identity within this.
pub const POVM_SUM: f64 = 1e-8;
/// Choi eigenvalues below this do not produce Kraus operators.
pub const KRAUS_RETENTION: f64 = 1e-10;
/// Agreement required between the two state-fidelity evaluation paths.
pub const FIDELITY_PATHS: f64 = 1e-9;
/// Agreement required between channel-fidelity routes.
pub const ROUTE_RESIDUAL: f64 = 1e-8;
/// Fidelity roundoff outside `[0, 1]` by at most this is clamped.
pub const FIDELITY_CLAMP: f64 = 1e-9;
/// Certificate for the optimal measurement: statistic within this of `sqrt(F)`.
pub const POVM_CERTIFICATE: f64 = 1e-6;
/// Regularization weight mixed into a singular reference state.
pub const POVM_REGULARIZATION: f64 = 1e-8;
/// Slack granted to asserted inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-9;
