//! Error taxonomy shared by every numeric module.
//!
//! All failures carry the offending value so callers can report actionable
//! diagnostics; none of the constructors panic on bad numeric input.

use num_complex::Complex64;
use thiserror::Error;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The circle point `z = -1` (equivalently the angle pi, or infinity on
    /// the line) is excluded from every chart used here.
    #[error("point {z} is at or too close to the excluded boundary point -1")]
    BoundaryPoint { z: Complex64 },

    /// A Schwarzian derivative was requested where `|f'|` is numerically zero.
    #[error("derivative magnitude {deriv:.3e} at {z} too small for a Schwarzian")]
    SingularDerivative { z: Complex64, deriv: f64 },

    /// The argument lies outside the region an operation is defined on.
    #[error("point {x} lies outside the required domain ({what})")]
    OutsideDomain { x: f64, what: &'static str },

    /// A root solve exhausted its iteration budget.
    #[error(
        "root solve stalled at {last} after {iterations} iterations (target residual {target:.3e})"
    )]
    ConvergenceFailure {
        target: f64,
        last: f64,
        iterations: usize,
    },

    /// A flow was requested at a point too close to a component endpoint,
    /// where every branch of the flow degenerates.
    #[error("point {x} is within the rejection margin of a component endpoint")]
    BranchError { x: f64 },

    /// Two-interval coefficients violate `LN - M^2 > 0`, so the closed-form
    /// velocity and angle formulas lose their real square root.
    #[error("degenerate two-interval configuration: LN - M^2 = {det:.6e} <= 0")]
    DegenerateCone { det: f64 },

    /// A regulated correlator denominator came within `epsilon/2` of zero;
    /// the evaluation point is effectively on the singular support.
    #[error("regulated denominator modulus {modulus:.3e} below epsilon/2 = {epsilon:.3e}/2")]
    RegulatedPole { modulus: f64, epsilon: f64 },

    /// A trigonometric identity was evaluated too close to a zero of one of
    /// its sine denominators.
    #[error("sine denominator {value:.3e} is within the near-singular guard")]
    NearSingular { value: f64 },

    /// A region constructor received intervals violating its invariants.
    #[error("invalid region: {detail}")]
    InvalidRegion { detail: String },
}
