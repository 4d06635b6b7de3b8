//! Component mixing along the modular flow.
//!
//! The flow of a multi-interval region permutes nothing, but correlators
//! between the n preimage points of a uniformizer value evolve by an SO(n)
//! rotation O(t). For rotationally symmetric regions O(t) is a closed-form
//! exponential of a constant antisymmetric generator; for general regions it
//! solves a linear matrix ODE driven by the flowed preimage configuration.

use nalgebra::DMatrix;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flow::{SymmetricRegion, TwoIntervalCone};
use crate::geometry::{NInterval, TAU};

use crate::uniformization::UniformizerContext;

/// Constant antisymmetric generator of the symmetric-region mixing rotation:
/// `Omega_{kl} = 1 / (2 sin((k - l) pi / n))`, zero diagonal.
#[derive(Debug, Clone)]
pub struct OmegaGenerator {
    n: usize,
    entries: DMatrix<f64>,
}

impl OmegaGenerator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// Builds the mixing generator for `n >= 2` components.
pub fn omega_matrix(n: usize) -> OmegaGenerator {
    assert!(n >= 2, "the mixing generator needs at least two components");
    let entries = DMatrix::from_fn(n, n, |k, l| {
        if k == l {
            0.0
        } else {
            1.0 / (2.0 * (((k as f64) - (l as f64)) * PI / n as f64).sin())
        }
    });
    OmegaGenerator { n, entries }
}

/// The mixing rotation at a given modular time.
#[derive(Debug, Clone)]
pub struct MixingMatrix {
    pub n: usize,
    pub t: f64,
    pub entries: DMatrix<f64>,
}

impl MixingMatrix {
    /// Frobenius norm of `O^T O - I`; the integrator never re-orthonormalizes,
    /// so this measures accumulated drift honestly.
    pub fn orthogonality_defect(&self) -> f64 {
        let gram = self.entries.transpose() * &self.entries;
        (gram - DMatrix::identity(self.n, self.n)).norm()
    }

    pub fn determinant(&self) -> f64 {
        self.entries.clone().determinant()
    }
}

/// Closed-form mixing matrix for a symmetric region:
/// `O(t) = exp((xi0(t) - xi0(0)) Omega)` where `xi0` is the angle of the
/// zeroth (largest-angle) preimage along the flow.
///
/// `xi0_start` selects the flow line; it must lie in window 0.
pub fn mixing_closed_symmetric(
    region: &SymmetricRegion,
    xi0_start: f64,
    t: f64,
) -> Result<MixingMatrix> {
    if region.component_of_angle(xi0_start)? != 0 {
        return Err(Error::OutsideDomain {
            x: xi0_start,
            what: "window 0 of the symmetric region",
        });
    }
    let n = region.n();
    let delta = region.flow_angle(xi0_start, t)? - xi0_start;
    let entries = if n == 1 {
        DMatrix::identity(1, 1)
    } else if n == 2 {
        // exp(delta * Omega) for Omega = [[0, -1/2], [1/2, 0]] is the
        // rotation by delta / 2.
        let half = 0.5 * delta;
        DMatrix::from_row_slice(2, 2, &[half.cos(), -half.sin(), half.sin(), half.cos()])
    } else {
        (omega_matrix(n).matrix() * delta).exp()
    };
    Ok(MixingMatrix { n, t, entries })
}

/// Preimage configuration in descending order (index 0 is the rightmost
/// component), plus the per-point density `dx/dzeta = 1/zeta'`.
fn descending_points(
    ctx: &UniformizerContext,
    zeta_val: f64,
    warm: &mut [f64],
) -> Result<Vec<f64>> {
    let n = ctx.n();
    let mut pts = Vec::with_capacity(n);
    for j in 0..n {
        let comp = n - 1 - j;
        let x = ctx.preimage_warm(zeta_val, comp, warm[comp])?;
        warm[comp] = x;
        pts.push(x);
    }
    Ok(pts)
}

fn k_from_points(ctx: &UniformizerContext, pts_desc: &[f64]) -> Result<DMatrix<f64>> {
    let n = pts_desc.len();
    let mut dens = Vec::with_capacity(n);
    for &x in pts_desc {
        dens.push((1.0 / ctx.zeta_prime(x)?).sqrt());
    }
    let mut k = DMatrix::zeros(n, n);
    for j in 0..n {
        for l in 0..n {
            if j != l {
                k[(j, l)] = TAU * dens[j] * dens[l] / (pts_desc[j] - pts_desc[l]);
            }
        }
    }
    Ok(k)
}

/// The instantaneous mixing kernel at modular time `t` along the flow line
/// through `x0`: `K_{jl} = 2 pi sqrt(dx_j/dzeta) sqrt(dx_l/dzeta) / (x_j -
/// x_l)` evaluated at the flowed preimages, indexed descending.
///
/// Antisymmetric with zero diagonal; for a single interval it is the 1x1
/// zero matrix.
pub fn k_matrix(region: &NInterval, x0: f64, t: f64) -> Result<DMatrix<f64>> {
    let ctx = UniformizerContext::new(region.clone());
    let zeta_t = ctx.zeta(x0)? - TAU * t;
    let mut warm: Vec<f64> = region.components().iter().map(|c| c.midpoint()).collect();
    let pts = descending_points(&ctx, zeta_t, &mut warm)?;
    k_from_points(&ctx, &pts)
}

/// Mixing matrix for an arbitrary region by integrating `dO/dt = K(t) O`
/// with `O(0) = I`, classical RK4 with `steps_per_unit` fixed steps per unit
/// of modular time (no re-orthonormalization).
pub fn mixing_ode(
    region: &NInterval,
    x0: f64,
    t: f64,
    steps_per_unit: usize,
) -> Result<MixingMatrix> {
    assert!(steps_per_unit > 0);
    let ctx = UniformizerContext::new(region.clone());
    let n = ctx.n();
    let zeta0 = ctx.zeta(x0)?;
    let mut o = DMatrix::<f64>::identity(n, n);
    if t == 0.0 {
        return Ok(MixingMatrix { n, t, entries: o });
    }
    let steps = ((t.abs() * steps_per_unit as f64).ceil() as usize).max(1);
    let h = t / steps as f64;
    let mut warm: Vec<f64> = region.components().iter().map(|c| c.midpoint()).collect();
    let k_eval = |tau: f64, warm: &mut Vec<f64>| -> Result<DMatrix<f64>> {
        let pts = descending_points(&ctx, zeta0 - TAU * tau, warm)?;
        k_from_points(&ctx, &pts)
    };
    let mut k_start = k_eval(0.0, &mut warm)?;
    for i in 0..steps {
        let tau = i as f64 * h;
        let k_mid = k_eval(tau + 0.5 * h, &mut warm)?;
        let k_end = k_eval(tau + h, &mut warm)?;
        let s1 = &k_start * &o;
        let s2 = &k_mid * (&o + (0.5 * h) * &s1);
        let s3 = &k_mid * (&o + (0.5 * h) * &s2);
        let s4 = &k_end * (&o + h * &s3);
        o += (h / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
        k_start = k_end;
    }
    Ok(MixingMatrix { n, t, entries: o })
}

/// Closed-form n = 2 rotation angle along the flow line through `x0` in the
/// right interval of the cone:
/// `theta(t) = arctan((L x0(t) - M)/sqrt(LN - M^2)) - arctan((L x0(0) - M)/sqrt(LN - M^2))`.
pub fn mixing_angle_n2(cone: &TwoIntervalCone, t: f64, x0: f64) -> Result<f64> {
    let (a1, b1, _, _) = cone.endpoints();
    if !(a1 < x0 && x0 < b1) {
        return Err(Error::OutsideDomain {
            x: x0,
            what: "interior of the cone's right interval",
        });
    }
    let (l, m, n) = cone.coefficients();
    let root = (l * n - m * m).sqrt();
    let region = cone.region();
    let x_t = crate::flow::flow_zeta(&region, t, x0)?;
    Ok(((l * x_t - m) / root).atan() - ((l * x0 - m) / root).atan())
}
