//! Centralized tolerances and solver budgets.
//!
//! Every bound used by the library and its verification suite lives here with
//! its justification, so a reviewer can audit the numerics in one place and
//! tests cannot drift apart from the library.

/// Points closer than this to an interval endpoint are rejected by flow
/// operations. Flows fix endpoints, so the map degenerates there and a
/// silently clamped result would hide caller errors.
pub const ENDPOINT_REJECT: f64 = 1e-9;

/// Target residual for uniformizer preimage solves. Bisection brackets the
/// monotone zeta to machine width; Newton with the analytic derivative then
/// converges quadratically, so 1e-14 is reachable except where the preimage
/// sits within an ulp of an endpoint (the solver then accepts the bracket).
pub const PREIMAGE_TOL: f64 = 1e-14;

/// Iteration cap for the preimage solver (bisection plus Newton polish).
pub const PREIMAGE_MAX_ITER: usize = 200;

/// Default step for the plain 5-point Schwarzian stencil. Truncation error is
/// O(h^2 f^(5)); at 1e-3 this keeps mild maps below 1e-6 without sinking into
/// the O(eps/h^3) cancellation floor.
pub const SCHWARZIAN_H: f64 = 1e-3;

/// Guard on |f'| below which a Schwarzian is reported as singular rather than
/// amplified into noise.
pub const SCHWARZIAN_DERIV_GUARD: f64 = 1e-12;

/// Denominator guard for the trigonometric lemma identities: closer than this
/// to a sine zero the identity is still true but numerically meaningless.
pub const LEMMA_SIN_GUARD: f64 = 1e-8;

/// Default fixed-step RK4 resolution for the mixing ODE, in steps per unit of
/// modular parameter. Local error O(h^5) with h = 1e-4 leaves the global
/// orthogonality drift far below its 1e-9 acceptance bound.
pub const MIXING_STEPS_PER_UNIT: usize = 10_000;

/// Verification-suite bounds. Each constant is an acceptance tolerance pinned
/// in one place; the named checks in `verification` consume them.
pub mod check {
    /// Sup-norm agreement between the zeta-form and circle-form flows through
    /// the Cayley transform (exact identity; budget is root-solve residual
    /// amplified by dx/dzeta on moderate intervals).
    pub const FLOW_EQUIVALENCE: f64 = 1e-10;

    /// Frobenius distance between closed-form and RK4 mixing matrices.
    pub const MIXING_FROBENIUS: f64 = 1e-8;

    /// Orthogonality defect ||O^T O - I||_F allowed for mixing matrices;
    /// integrator drift is asserted, never corrected.
    pub const MIXING_ORTHOGONALITY: f64 = 1e-9;

    /// Two-interval rotation angle: closed form vs ODE-integrated angle.
    pub const ANGLE_N2: f64 = 1e-8;

    /// Relative drift of the orbit invariant along closed-form orbits.
    pub const ORBIT_INVARIANT: f64 = 1e-8;

    /// Relative error of central-difference du/ds against -2 pi V(u); the
    /// difference step 1e-4 balances O(h^2) truncation against solver noise.
    pub const ORBIT_ODE: f64 = 1e-6;

    /// |V(u) * zeta'(u) - 1| on interior grids (algebraic identity).
    pub const VELOCITY_IDENTITY: f64 = 1e-10;

    /// Relative KMS residual of the closed correlator at imaginary parameter.
    pub const KMS: f64 = 1e-10;

    /// Relative difference between mixed-sum and closed-form correlators.
    pub const CORRELATOR_FORMS: f64 = 1e-10;

    /// Relative variation of the n-interval to single-interval correlator
    /// ratio across modular parameters.
    pub const RATIO_INDEPENDENCE: f64 = 1e-9;

    /// Absolute residuals of the three sine/cotangent/propagation identities.
    pub const LEMMA: f64 = 1e-10;

    /// Slack above 2 pi allowed for the temperature-acceleration product
    /// (the bound is attained only in the corner limit).
    pub const UNRUH_SLACK: f64 = 1e-6;

    /// Near-edge samples must push beta*kappa above 2 pi minus this.
    pub const UNRUH_EDGE_GAP: f64 = 1e-2;

    /// Sup-norm between the proper-time temperature closed form and its
    /// velocity-field expression (algebraic identity).
    pub const BETA_TAU: f64 = 1e-10;

    /// Absolute error allowed for the stencil-based energy density against
    /// its rational closed form; the Richardson-refined stencil meets this
    /// with roughly an order of margin on |y| <= 0.6.
    pub const ENERGY_DENSITY: f64 = 1e-8;

    /// Absolute error of z^2 D_z h against (1 - nu^2)/2 for the power-map
    /// family, numeric Schwarzian path.
    pub const NU_SCHWARZIAN: f64 = 1e-8;

    /// Central-difference t-derivative bound for the rotation-invariant
    /// two-point combination.
    pub const ROTATION_INVARIANCE: f64 = 1e-6;

    /// Absolute match of |c_2k|^2 against 1/(2k+1) at weight h = 1.
    pub const SL2_COEFFS: f64 = 1e-12;

    /// Bracket for S(10^4)/S(10^2), witnessing logarithmic growth.
    pub const SL2_RATIO: (f64, f64) = (1.5, 2.5);

    /// Invariant-column drift bound for emitted orbit tables.
    pub const ORBIT_TABLE_INVARIANT: f64 = 1e-8;
}
