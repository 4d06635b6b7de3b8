//! Geometric modular flows for unions of disjoint intervals.
//!
//! The library computes, for an n-component region on the line or the circle:
//!
//! * the uniformization function `zeta` whose exponential linearizes the flow,
//!   its derivative, and its per-component preimages ([`uniformization`]);
//! * the geometric flow itself in both its circle form (n-th roots of a
//!   one-parameter Moebius group on a base arc) and its zeta form, together
//!   with two-interval velocity fields, orbits, and the orbit invariant
//!   ([`flow`]);
//! * the orthogonal mixing matrices that couple field components on different
//!   intervals, in closed form for rotation-symmetric regions and by ODE
//!   integration in general ([`mixing`]);
//! * local inverse temperature and acceleration profiles, the distinguished
//!   boost orbit, energy densities, and the charge-splitting geometry
//!   ([`thermo`]);
//! * free-fermion two-point functions transported by the flow, with a
//!   numerical KMS check, the trigonometric lemma behind the closed forms,
//!   and an sl(2) recursion demo ([`fermi_kms`]);
//! * a deterministic self-verification suite ([`verification`]).
//!
//! All types are immutable values and all operations are pure functions, so
//! everything is safe to use from multiple threads without coordination.

pub mod error;
pub mod fermi_kms;
pub mod flow;
pub mod geometry;
pub mod mixing;
pub mod thermo;
pub mod tol;
pub mod uniformization;
pub mod verification;

pub use error::{Error, Result};
pub use geometry::{
    cayley, cayley_f, cayley_inv, CircleArc, MoebiusMap, NInterval, RealInterval, RealPoint,
};
pub use uniformization::UniformizerContext;
