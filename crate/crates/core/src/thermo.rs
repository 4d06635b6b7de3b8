//! Local thermal data of the double-cone modular flow: inverse temperature
//! and proper acceleration fields, the distinguished boost orbit and its
//! proper-time temperature profile, the vacuum energy density, a family of
//! rotation-invariant state maps, and the charge-splitting point geometry.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flow::TwoIntervalCone;
use crate::geometry::{schwarzian_numeric_refined, CircleArc, MoebiusMap, TAU};

/// Proper acceleration at a point, with an explicit divergence flag: the
/// acceleration grows without bound toward the cone boundary and the caller
/// must be able to tell a huge-but-meaningful value from a boundary artifact.
#[derive(Debug, Clone, Copy)]
pub struct KappaSample {
    pub value: f64,
    pub divergent: bool,
}

fn lightray_coords(cone: &TwoIntervalCone, t: f64, x: f64) -> Result<(f64, f64)> {
    let (a1, b1, a2, b2) = cone.endpoints();
    let u = t + x;
    let v = t - x;
    if !(a1 <= u && u <= b1) {
        return Err(Error::OutsideDomain {
            x: u,
            what: "right lightray range of the double cone",
        });
    }
    if !(a2 <= v && v <= b2) {
        return Err(Error::OutsideDomain {
            x: v,
            what: "left lightray range of the double cone",
        });
    }
    Ok((u, v))
}

/// Local inverse temperature `beta(t, x) = 2 pi sqrt(V(t+x) V(t-x))`.
///
/// Positive strictly inside the cone, zero on its boundary (the local
/// temperature diverges there).
pub fn beta_field(cone: &TwoIntervalCone, t: f64, x: f64) -> Result<f64> {
    let (u, v) = lightray_coords(cone, t, x)?;
    Ok(TAU * (cone.velocity(u)? * cone.velocity(v)?).sqrt())
}

/// Proper acceleration `kappa = pi |V'(t+x) - V'(t-x)| / beta(t, x)`.
///
/// The derivative difference is evaluated from the analytic rational form;
/// the quotient is flagged divergent when `beta` underflows toward the
/// boundary.
pub fn kappa_field(cone: &TwoIntervalCone, t: f64, x: f64) -> Result<KappaSample> {
    let (u, v) = lightray_coords(cone, t, x)?;
    let beta = TAU * (cone.velocity(u)? * cone.velocity(v)?).sqrt();
    let value = PI * (cone.velocity_prime(u)? - cone.velocity_prime(v)?).abs() / beta;
    Ok(KappaSample {
        value,
        divergent: !value.is_finite() || beta < 1e-9,
    })
}

/// The product `beta * kappa = pi |V'(t+x) - V'(t-x)|` in a cancellation-free
/// form; bounded by `2 pi` and attained at the left and right cone corners.
pub fn beta_kappa_product(cone: &TwoIntervalCone, t: f64, x: f64) -> Result<f64> {
    let (u, v) = lightray_coords(cone, t, x)?;
    Ok(PI * (cone.velocity_prime(u)? - cone.velocity_prime(v)?).abs())
}

/// One grid point of a [`ThermoField`] sweep.
#[derive(Debug, Clone, Copy)]
pub struct ThermoSample {
    pub t: f64,
    pub x: f64,
    pub u: f64,
    pub v: f64,
    pub beta: f64,
    pub kappa: KappaSample,
    pub beta_kappa: f64,
}

/// Cell-centered sweep of the thermal fields over the full double cone.
///
/// The cone is a rectangle in lightray coordinates, so the grid is the
/// product of `nu` cell centers along `u` and `nv` along `v`; every sample is
/// strictly interior.
#[derive(Debug, Clone)]
pub struct ThermoField {
    cone: TwoIntervalCone,
    nu: usize,
    nv: usize,
}

impl ThermoField {
    pub fn new(cone: TwoIntervalCone, nu: usize, nv: usize) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(Error::InvalidRegion {
                detail: "thermal grid needs at least 2 cells per lightray direction".to_string(),
            });
        }
        Ok(ThermoField { cone, nu, nv })
    }

    pub fn cone(&self) -> &TwoIntervalCone {
        &self.cone
    }

    /// Samples in row-major order: `u` outer, `v` inner.
    pub fn samples(&self) -> Result<Vec<ThermoSample>> {
        let (a1, b1, a2, b2) = self.cone.endpoints();
        let mut out = Vec::with_capacity(self.nu * self.nv);
        for i in 0..self.nu {
            let u = a1 + (b1 - a1) * (i as f64 + 0.5) / self.nu as f64;
            for j in 0..self.nv {
                let v = a2 + (b2 - a2) * (j as f64 + 0.5) / self.nv as f64;
                let t = 0.5 * (u + v);
                let x = 0.5 * (u - v);
                out.push(ThermoSample {
                    t,
                    x,
                    u,
                    v,
                    beta: beta_field(&self.cone, t, x)?,
                    kappa: kappa_field(&self.cone, t, x)?,
                    beta_kappa: beta_kappa_product(&self.cone, t, x)?,
                });
            }
        }
        Ok(out)
    }
}

/// Proper-time temperature profile along the distinguished boost orbit of
/// the inversion-symmetric cone `(a, b) u (-1/a, -1/b)`, anchored at
/// `u_0 = 1` (hence `0 < a < 1 < b`).
#[derive(Debug, Clone, Copy)]
pub struct BoostProfile {
    a: f64,
    b: f64,
    tau_min: f64,
    tau_max: f64,
}

impl BoostProfile {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(0.0 < a && a < 1.0 && 1.0 < b) {
            return Err(Error::InvalidRegion {
                detail: format!("boost profile needs 0 < a < 1 < b, got ({a}, {b})"),
            });
        }
        Ok(BoostProfile {
            a,
            b,
            tau_min: a.ln(),
            tau_max: b.ln(),
        })
    }

    pub fn tau_min(&self) -> f64 {
        self.tau_min
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn cone(&self) -> Result<TwoIntervalCone> {
        TwoIntervalCone::symmetric(self.a, self.b)
    }

    /// Inverse temperature as a function of proper time along the boost:
    /// `beta(tau) = 2 pi (sinh tau_max - sinh tau)(sinh tau - sinh tau_min)
    /// / ((sinh tau_max - sinh tau_min) cosh tau)`.
    ///
    /// Vanishes at both ends of the proper-time range (the orbit reaches the
    /// cone tips at infinite temperature).
    pub fn beta_of_proper_time(&self, tau: f64) -> Result<f64> {
        if !(self.tau_min <= tau && tau <= self.tau_max) {
            return Err(Error::OutsideDomain {
                x: tau,
                what: "proper-time range of the boost orbit",
            });
        }
        let (s_min, s_max, s) = (self.tau_min.sinh(), self.tau_max.sinh(), tau.sinh());
        Ok(TAU * (s_max - s) * (s - s_min) / ((s_max - s_min) * tau.cosh()))
    }
}

/// Proper time elapsed along the boost orbit between two positive lightray
/// coordinates: `tau = ln(u_s) - ln(u_0)`.
pub fn proper_time_along_boost(u_s: f64, u_0: f64) -> Result<f64> {
    if u_s <= 0.0 || u_0 <= 0.0 {
        return Err(Error::OutsideDomain {
            x: if u_s <= 0.0 { u_s } else { u_0 },
            what: "positive lightray coordinates on the boost orbit",
        });
    }
    Ok(u_s.ln() - u_0.ln())
}

/// The diamond-to-ray coordinate map `gamma(y) = 2y / (1 - y^2)`.
pub fn gamma_map(y: Complex64) -> Complex64 {
    2.0 * y / (1.0 - y * y)
}

/// Vacuum energy density inside the standard double cone, computed from the
/// numeric Schwarzian of [`gamma_map`]:
/// `phi(y) = -(c / 24 pi) * S_gamma(y)`, which equals
/// `-(c / 4 pi) (1 + y^2)^{-2}` analytically.
///
/// Uses the Richardson-refined stencil with a step proportional to the
/// distance from the poles at `y = +-1`.
pub fn energy_density(central_charge: f64, y: f64) -> Result<f64> {
    if !(-1.0 < y && y < 1.0) {
        return Err(Error::OutsideDomain {
            x: y,
            what: "interior of the standard diamond (-1, 1)",
        });
    }
    let sep = 1.0 - y * y;
    if sep < 1e-3 {
        return Err(Error::SingularDerivative {
            z: Complex64::new(y, 0.0),
            deriv: sep,
        });
    }
    let h = 1e-2 * sep;
    let s = schwarzian_numeric_refined(&gamma_map, Complex64::new(y, 0.0), h)?;
    Ok(-central_charge / (24.0 * PI) * s.re)
}

/// An endpoint-preserving reparametrization of an arc: `h(z) = mu(z^nu)`
/// with the Moebius factor fixed by holding the arc's endpoints and
/// midpoint.
///
/// Its Schwarzian is constant in the scale-invariant combination:
/// `z^2 D_z h = (1 - nu^2)/2` for every point.
#[derive(Debug, Clone, Copy)]
pub struct HNuMap {
    nu: f64,
    mu: MoebiusMap,
}

impl HNuMap {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.mu.apply(z.powc(Complex64::new(self.nu, 0.0)))
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let p = z.powc(Complex64::new(self.nu, 0.0));
        self.mu.derivative(p) * self.nu * p / z
    }

    /// Exact Schwarzian `(1 - nu^2) / (2 z^2)`: the Moebius factor drops out.
    pub fn schwarzian(&self, z: Complex64) -> Complex64 {
        Complex64::new(0.5 * (1.0 - self.nu * self.nu), 0.0) / (z * z)
    }
}

/// Builds the arc-preserving power map of exponent `nu > 0`.
pub fn h_nu_map(arc: &CircleArc, nu: f64) -> Result<HNuMap> {
    if nu <= 0.0 {
        return Err(Error::InvalidRegion {
            detail: format!("power-map exponent must be positive, got {nu}"),
        });
    }
    if arc.contains_angle(PI) {
        return Err(Error::InvalidRegion {
            detail: "the arc must avoid the branch point at angle pi".to_string(),
        });
    }
    if nu * arc.len() >= TAU {
        return Err(Error::InvalidRegion {
            detail: "the powered arc would cover the full circle".to_string(),
        });
    }
    let p = arc.start_point();
    let q = arc.end_point();
    let m = Complex64::from_polar(1.0, arc.mid_angle());
    let pow = |z: Complex64| z.powc(Complex64::new(nu, 0.0));
    let mu = MoebiusMap::from_three_points([pow(p), pow(m), pow(q)], [p, m, q]);
    Ok(HNuMap { nu, mu })
}

/// The two-point combination that rotation invariance of the powered state
/// must keep independent of the rotation parameter `t`:
/// `Q = 2c [h_t'(z) h_t'(w) / (h_t(z) - h_t(w))^2]^2 + (c^2/36) D h_t(z) D h_t(w)`
/// with `h_t = h o rot_t`. Computed as written, rotation factors included.
pub fn rotinv_q(h: &HNuMap, central_charge: f64, z: Complex64, w: Complex64, t: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, t);
    let hz = h.apply(rot * z);
    let hw = h.apply(rot * w);
    let dz = h.derivative(rot * z) * rot;
    let dw = h.derivative(rot * w) * rot;
    let diff = hz - hw;
    let kernel = dz * dw / (diff * diff);
    let sz = h.schwarzian(rot * z) * rot * rot;
    let sw = h.schwarzian(rot * w) * rot * rot;
    2.0 * central_charge * kernel * kernel + central_charge * central_charge / 36.0 * sz * sw
}

/// The six point pairs cut out of an inversion-symmetric cone by the images
/// `u' = -1/u`, `v' = -1/v`: all descending-ordered pairs from the multiset
/// `{u, u', v, v'}`, in lexicographic index order.
#[derive(Debug, Clone, Copy)]
pub struct SplitRegions {
    pairs: [(f64, f64); 6],
}

impl SplitRegions {
    pub fn pairs(&self) -> &[(f64, f64); 6] {
        &self.pairs
    }

    /// Whether pair `i` has degenerated to a single point (its region sits on
    /// the cone boundary); happens for two of the six pairs exactly when
    /// `u v = -1`.
    pub fn on_boundary(&self, i: usize) -> bool {
        let (p, q) = self.pairs[i];
        (p - q).abs() <= 1e-12 * p.abs().max(q.abs()).max(1.0)
    }
}

/// Splitting points for a charge insertion at lightray coordinates `(u, v)`
/// with `u > 0 > v` inside a symmetric cone.
pub fn charge_split_points(u: f64, v: f64) -> Result<SplitRegions> {
    if u <= 0.0 {
        return Err(Error::OutsideDomain {
            x: u,
            what: "positive lightray coordinate of the right interval",
        });
    }
    if v >= 0.0 {
        return Err(Error::OutsideDomain {
            x: v,
            what: "negative lightray coordinate of the left interval",
        });
    }
    let mut pts = [u, -1.0 / u, v, -1.0 / v];
    pts.sort_by(|p, q| q.total_cmp(p));
    let mut pairs = [(0.0, 0.0); 6];
    let mut idx = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            pairs[idx] = (pts[i], pts[j]);
            idx += 1;
        }
    }
    Ok(SplitRegions { pairs })
}
