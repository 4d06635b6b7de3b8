//! Modular flows on multi-interval regions.
//!
//! Three equivalent presentations are implemented:
//!
//! * a circle form for rotationally symmetric regions (the n-th roots of a
//!   single base arc), flowed through a Moebius chart of the base arc;
//! * a uniformizer form on the line, `x(t) = x_k(zeta(x) - 2 pi t)`, valid
//!   for arbitrary multi-interval regions;
//! * a closed velocity field for the two-interval double cone, together with
//!   orbit tracing and the algebraic orbit invariant.
//!
//! Points too close to component endpoints are rejected, never clamped; the
//! flows degenerate there and silent clamping would hide caller bugs.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{CircleArc, MoebiusMap, NInterval, RealInterval, J, TAU};
use crate::tol;
use crate::uniformization::UniformizerContext;

/// Open angular window `(lo, hi)`, one component of a symmetric region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleWindow {
    pub lo: f64,
    pub hi: f64,
}

impl AngleWindow {
    pub fn contains(&self, xi: f64) -> bool {
        self.lo < xi && xi < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Region selector shared by the CLI and the flow entry points.
#[derive(Debug, Clone)]
pub enum RegionSpec {
    /// Explicit union of line intervals.
    Line(NInterval),
    /// The n-th roots of a base arc on the circle.
    SymmetricCircle { base: CircleArc, n: usize },
}

/// A flow request: a region plus the modular parameter.
#[derive(Debug, Clone)]
pub struct FlowParams {
    pub region: RegionSpec,
    pub t: f64,
}

/// The set of n-th roots of a base arc: n congruent windows on the circle,
/// spaced by exactly `2 pi / n`, with a shared Moebius chart onto `(0, inf)`.
///
/// Windows are indexed descending in angle: window 0 sits at the largest
/// angles and corresponds to the rightmost component of the line image.
#[derive(Debug, Clone)]
pub struct SymmetricRegion {
    base: CircleArc,
    n: usize,
    /// Unwrapped angle of the base arc start in the power coordinate
    /// `Theta = n xi`; the base window is `(theta_lo, theta_lo + len)`.
    theta_lo: f64,
    len: f64,
    windows: Vec<AngleWindow>,
    u_end: Complex64,
    v_end: Complex64,
    chart: MoebiusMap,
    exact_scale: bool,
}

impl SymmetricRegion {
    /// Validates that no window of the root region straddles the excluded
    /// circle point `-1`, which happens exactly when the n-th power of `-1`
    /// lies strictly inside the base arc.
    pub fn new(base: CircleArc, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRegion {
                detail: "symmetric region order n must be at least 1".to_string(),
            });
        }
        let n_f = n as f64;
        let len = base.len();
        // Lift the base arc into Theta-space so that it ends no later than
        // n*pi; then every root window stays inside [-pi, pi].
        let offset = (base.start() - n_f * PI).rem_euclid(TAU);
        if offset + len > TAU {
            return Err(Error::InvalidRegion {
                detail: format!(
                    "the angle {} lies inside the base arc, so a root window would \
                     straddle the excluded point -1",
                    if n.is_multiple_of(2) { 0.0 } else { PI }
                ),
            });
        }
        let theta_lo = (n_f * PI - TAU) + offset;
        let windows = (0..n)
            .map(|k| AngleWindow {
                lo: (theta_lo - TAU * k as f64) / n_f,
                hi: (theta_lo + len - TAU * k as f64) / n_f,
            })
            .collect();

        let u_end = base.start_point();
        let v_end = base.end_point();
        let pole = Complex64::new(if n.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0);
        let exact_scale = (pole - u_end).norm() > 1e-9 && (pole - v_end).norm() > 1e-9;
        let chart = if exact_scale {
            // Sends (U, V, (-1)^n) to (0, infinity, -1); this normalization
            // makes the circle uniformizer equal to the line uniformizer of
            // the root region, with no residual dilation.
            let kappa = (pole - v_end) / (pole - u_end);
            MoebiusMap::new(kappa, -kappa * u_end, Complex64::new(-1.0, 0.0), v_end)
        } else {
            // The arc endpoint coincides with the excluded point; fall back
            // to a chart fixed by three points. It differs from the exact
            // normalization by a dilation, which cancels in every flow.
            let mid = Complex64::from_polar(1.0, theta_lo + 0.5 * len);
            let t3 = MoebiusMap::from_three_points(
                [Complex64::new(1.0, 0.0), J, Complex64::new(-1.0, 0.0)],
                [u_end, mid, v_end],
            );
            MoebiusMap::cayley_map().inverse().compose(&t3.inverse())
        };

        Ok(SymmetricRegion {
            base,
            n,
            theta_lo,
            len,
            windows,
            u_end,
            v_end,
            chart,
            exact_scale,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &CircleArc {
        &self.base
    }

    pub fn windows(&self) -> &[AngleWindow] {
        &self.windows
    }

    /// Whether the chart carries the exact normalization that identifies the
    /// circle uniformizer with the line uniformizer (false only when an arc
    /// endpoint touches the excluded point).
    pub fn has_exact_scale(&self) -> bool {
        self.exact_scale
    }

    /// Index of the window strictly containing the principal angle `xi`.
    pub fn component_of_angle(&self, xi: f64) -> Result<usize> {
        self.windows
            .iter()
            .position(|w| w.contains(xi))
            .ok_or(Error::OutsideDomain {
                x: xi,
                what: "angular windows of the symmetric region",
            })
    }

    /// Line image of the region under the inverse Cayley transform, ordered
    /// ascending. Window `k` maps to component `n - 1 - k`.
    pub fn line_region(&self) -> Result<NInterval> {
        let last = self.windows[self.n - 1];
        let first = self.windows[0];
        if last.lo <= -PI + 1e-9 || first.hi >= PI - 1e-9 {
            return Err(Error::InvalidRegion {
                detail: "the region touches the excluded point; its line image is unbounded"
                    .to_string(),
            });
        }
        let components = self
            .windows
            .iter()
            .rev()
            .map(|w| RealInterval::new((0.5 * w.lo).tan(), (0.5 * w.hi).tan()))
            .collect::<Result<Vec<_>>>()?;
        NInterval::new(components)
    }

    /// Line component index for a window index (and vice versa).
    pub fn line_component(&self, window: usize) -> usize {
        self.n - 1 - window
    }

    fn theta_of(&self, xi: f64, window: usize) -> f64 {
        self.n as f64 * xi + TAU * window as f64
    }

    /// Uniformizer value of the point at principal angle `xi`.
    pub fn zeta_of_angle(&self, xi: f64) -> Result<f64> {
        let k = self.component_of_angle(xi)?;
        let w = Complex64::from_polar(1.0, self.theta_of(xi, k));
        let r = self.chart.apply(w);
        debug_assert!(r.re > 0.0 && r.im.abs() < 1e-9 * r.re.max(1.0));
        Ok(r.re.ln())
    }

    /// The unique angle in window `k` whose uniformizer value is `zeta`.
    pub fn angle_from_zeta(&self, zeta: f64, k: usize) -> f64 {
        assert!(k < self.n, "window index out of range");
        let r = zeta.exp();
        let w = self.chart.inverse().apply(Complex64::new(r, 0.0));
        let delta = (w * self.u_end.conj())
            .arg()
            .rem_euclid(TAU)
            .clamp(1e-300, self.len * (1.0 - 1e-16));
        (self.theta_lo + delta - TAU * k as f64) / self.n as f64
    }

    /// Rate of change of the power angle `Theta` with respect to the
    /// uniformizer, evaluated at `Theta = theta`. Positive inside the base
    /// arc; independent of the chart normalization.
    pub fn dtheta_dzeta(&self, theta: f64) -> f64 {
        let w = Complex64::from_polar(1.0, theta);
        let val = (self.v_end - w) * (w - self.u_end) / (J * w * (self.v_end - self.u_end));
        debug_assert!(val.im.abs() < 1e-9 * val.re.abs().max(1e-12));
        val.re
    }

    /// `d Theta / d zeta` evaluated directly from the uniformizer value,
    /// through the radial chart coordinate `r = e^zeta`.
    ///
    /// Equals `dtheta_dzeta` at the matching angle, but is built purely from
    /// products of the chart coefficients: it avoids the `w - U` subtraction
    /// of nearby unit-circle points, whose relative accuracy collapses as the
    /// point runs exponentially close to a window edge under the flow.
    pub fn dtheta_dzeta_of_zeta(&self, zeta: f64) -> f64 {
        let inv = self.chart.inverse();
        let r = zeta.exp();
        (r / ((inv.a * r + inv.b) * (inv.c * r + inv.d))).im
    }

    /// Signed gap `xi0(zeta_a) - xi0(zeta_b)` between the window-0 angles of
    /// two uniformizer values.
    ///
    /// Algebraically this is a difference of two `angle_from_zeta` calls, but
    /// it is evaluated as the argument of a single Moebius expression in the
    /// radial coordinates `r = e^zeta`. Writing `w(r) = (ar + b)/(cr + d)`,
    /// the product `w(r_a) conj(w(r_b))` has numerator and denominator whose
    /// imaginary parts are exactly `Im(a conj b) (r_a - r_b)` and
    /// `Im(c conj d) (r_a - r_b)`; small gaps therefore keep near-machine
    /// relative accuracy even when both angles sit exponentially close to the
    /// same window edge, where subtracting two rounded angles would lose most
    /// significant digits.
    pub fn angle_gap_of_zetas(&self, zeta_a: f64, zeta_b: f64) -> f64 {
        let inv = self.chart.inverse();
        let (ra, rb) = (zeta_a.exp(), zeta_b.exp());
        // r_a - r_b evaluated without cancellation between the exponentials.
        let g = rb * (zeta_a - zeta_b).exp_m1();
        let num = Complex64::new(
            inv.a.norm_sqr() * ra * rb + (inv.a * inv.b.conj()).re * (ra + rb) + inv.b.norm_sqr(),
            (inv.a * inv.b.conj()).im * g,
        );
        let den = Complex64::new(
            inv.c.norm_sqr() * ra * rb + (inv.c * inv.d.conj()).re * (ra + rb) + inv.d.norm_sqr(),
            (inv.c * inv.d.conj()).im * g,
        );
        let principal = (num / den).arg();
        // The power-angle gap can leave the principal branch when the base
        // arc is wider than pi; the coarse angles resolve the branch.
        let coarse =
            self.n as f64 * (self.angle_from_zeta(zeta_a, 0) - self.angle_from_zeta(zeta_b, 0));
        let branch = ((coarse - principal) / TAU).round();
        (principal + TAU * branch) / self.n as f64
    }

    /// `d xi / d zeta` at the principal angle `xi` of a region point.
    pub fn dxi_dzeta(&self, xi: f64) -> Result<f64> {
        let k = self.component_of_angle(xi)?;
        Ok(self.dtheta_dzeta(self.theta_of(xi, k)) / self.n as f64)
    }

    /// Modular flow in angle form: the image of the point at principal angle
    /// `xi` after flowing for modular time `t`, staying in its window.
    pub fn flow_angle(&self, xi: f64, t: f64) -> Result<f64> {
        let k = self.component_of_angle(xi)?;
        let win = self.windows[k];
        if xi - win.lo < tol::ENDPOINT_REJECT || win.hi - xi < tol::ENDPOINT_REJECT {
            return Err(Error::BranchError { x: xi });
        }
        let w = Complex64::from_polar(1.0, self.theta_of(xi, k));
        let r = self.chart.apply(w).re;
        debug_assert!(r > 0.0, "chart image must be positive inside the arc");
        let r_t = (-TAU * t).exp() * r;
        let w_t = self.chart.inverse().apply(Complex64::new(r_t, 0.0));
        let delta = (w_t * self.u_end.conj())
            .arg()
            .rem_euclid(TAU)
            .clamp(1e-300, self.len * (1.0 - 1e-16));
        Ok((self.theta_lo + delta - TAU * k as f64) / self.n as f64)
    }

    /// Modular flow of a unit-modulus point; see [`Self::flow_angle`].
    pub fn flow_point(&self, z: Complex64, t: f64) -> Result<Complex64> {
        let xi = self.flow_angle(z.arg(), t)?;
        Ok(Complex64::from_polar(1.0, xi))
    }
}

/// Modular flow of a circle point in a symmetric region, component by
/// component. Convenience wrapper that builds the region per call; use
/// [`SymmetricRegion`] directly for sweeps.
pub fn flow_circle_symmetric(
    base: &CircleArc,
    n: usize,
    t: f64,
    z: Complex64,
) -> Result<Complex64> {
    SymmetricRegion::new(*base, n)?.flow_point(z, t)
}

/// Modular flow in uniformizer form: `x(t) = x_k(zeta(x) - 2 pi t)` where
/// `k` is the component of `x`.
pub fn flow_zeta(region: &NInterval, t: f64, x: f64) -> Result<f64> {
    flow_zeta_with(&UniformizerContext::new(region.clone()), t, x)
}

/// Same as [`flow_zeta`] with a caller-owned context, for repeated use.
pub fn flow_zeta_with(ctx: &UniformizerContext, t: f64, x: f64) -> Result<f64> {
    let k = ctx.region().component_of(x)?;
    let comp = ctx.region().component(k);
    if x - comp.lo() < tol::ENDPOINT_REJECT || comp.hi() - x < tol::ENDPOINT_REJECT {
        return Err(Error::BranchError { x });
    }
    let target = ctx.zeta(x)? - TAU * t;
    ctx.preimage_warm(target, k, x)
}

/// Flow velocity `dx/ds = -2 pi / zeta'(x)` for an arbitrary region.
pub fn velocity_general(region: &NInterval, x: f64) -> Result<f64> {
    Ok(-TAU / UniformizerContext::new(region.clone()).zeta_prime(x)?)
}

/// A two-interval double cone `(a2, b2) u (a1, b1)` with `a2 < b2 < a1 < b1`
/// and the cached quadratic coefficients of its velocity denominator.
#[derive(Debug, Clone, Copy)]
pub struct TwoIntervalCone {
    a1: f64,
    b1: f64,
    a2: f64,
    b2: f64,
    coef_l: f64,
    coef_m: f64,
    coef_n: f64,
}

impl TwoIntervalCone {
    pub fn new(a1: f64, b1: f64, a2: f64, b2: f64) -> Result<Self> {
        if !(a2 < b2 && b2 < a1 && a1 < b1) {
            return Err(Error::InvalidRegion {
                detail: format!(
                    "cone endpoints must satisfy a2 < b2 < a1 < b1, got ({a1}, {b1}, {a2}, {b2})"
                ),
            });
        }
        let coef_l = (b1 - a1) + (b2 - a2);
        let coef_m = b1 * b2 - a1 * a2;
        let coef_n = b2 * a2 * (b1 - a1) + b1 * a1 * (b2 - a2);
        let det = coef_l * coef_n - coef_m * coef_m;
        if det <= 0.0 {
            return Err(Error::DegenerateCone { det });
        }
        Ok(TwoIntervalCone {
            a1,
            b1,
            a2,
            b2,
            coef_l,
            coef_m,
            coef_n,
        })
    }

    /// The inversion-symmetric cone `(a, b) u (-1/a, -1/b)` for `0 < a < b`.
    pub fn symmetric(a: f64, b: f64) -> Result<Self> {
        if !(0.0 < a && a < b) {
            return Err(Error::InvalidRegion {
                detail: format!("symmetric cone needs 0 < a < b, got ({a}, {b})"),
            });
        }
        Self::new(a, b, -1.0 / a, -1.0 / b)
    }

    pub fn endpoints(&self) -> (f64, f64, f64, f64) {
        (self.a1, self.b1, self.a2, self.b2)
    }

    /// Denominator coefficients `(L, M, N)` with `L N - M^2 > 0`.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        (self.coef_l, self.coef_m, self.coef_n)
    }

    /// The two components as an ascending region; the positive-ray interval
    /// `(a1, b1)` is component 1.
    pub fn region(&self) -> NInterval {
        NInterval::from_pairs(&[(self.a2, self.b2), (self.a1, self.b1)])
            .expect("cone ordering was validated at construction")
    }

    fn in_closure(&self, u: f64) -> bool {
        (self.a1 <= u && u <= self.b1) || (self.a2 <= u && u <= self.b2)
    }

    /// Velocity profile of the modular flow along a lightray coordinate:
    /// `V(u) = -(u-a1)(u-b1)(u-a2)(u-b2) / (L u^2 - 2 M u + N)`.
    ///
    /// Strictly positive inside both intervals, exactly zero at the four
    /// endpoints, and equal to `1/zeta'(u)` inside. The orbit equation is
    /// `du/ds = -2 pi V(u)`.
    pub fn velocity(&self, u: f64) -> Result<f64> {
        if !self.in_closure(u) {
            return Err(Error::OutsideDomain {
                x: u,
                what: "closure of the double-cone intervals",
            });
        }
        let pi4 = (u - self.a1) * (u - self.b1) * (u - self.a2) * (u - self.b2);
        let den = self.coef_l * u * u - 2.0 * self.coef_m * u + self.coef_n;
        let v = -pi4 / den;
        debug_assert!(v >= 0.0 || v.abs() < 1e-12);
        Ok(v)
    }

    /// Analytic derivative of [`Self::velocity`]; equals +1 at the left
    /// endpoints and -1 at the right endpoints of both intervals.
    pub fn velocity_prime(&self, u: f64) -> Result<f64> {
        if !self.in_closure(u) {
            return Err(Error::OutsideDomain {
                x: u,
                what: "closure of the double-cone intervals",
            });
        }
        let f1 = u - self.a1;
        let f2 = u - self.b1;
        let f3 = u - self.a2;
        let f4 = u - self.b2;
        let pi4 = f1 * f2 * f3 * f4;
        let pi4_prime = f2 * f3 * f4 + f1 * f3 * f4 + f1 * f2 * f4 + f1 * f2 * f3;
        let den = self.coef_l * u * u - 2.0 * self.coef_m * u + self.coef_n;
        let den_prime = 2.0 * self.coef_l * u - 2.0 * self.coef_m;
        Ok(-(pi4_prime * den - pi4 * den_prime) / (den * den))
    }

    /// The conserved combination along modular orbits:
    /// `[(u-a1)(u-a2)/((u-b1)(u-b2))] * [(v-b1)(v-b2)/((v-a1)(v-a2))]`.
    pub fn orbit_invariant(&self, u: f64, v: f64) -> Result<f64> {
        if !(self.a1 < u && u < self.b1) {
            return Err(Error::OutsideDomain {
                x: u,
                what: "interior of the cone's right interval",
            });
        }
        if !(self.a2 < v && v < self.b2) {
            return Err(Error::OutsideDomain {
                x: v,
                what: "interior of the cone's left interval",
            });
        }
        let num = (u - self.a1) * (u - self.a2) * (v - self.b1) * (v - self.b2);
        let den = (u - self.b1) * (u - self.b2) * (v - self.a1) * (v - self.a2);
        Ok(num / den)
    }

    /// Traces the modular orbit through the Minkowski point `start = (t, x)`
    /// with lightray coordinates `u = t + x`, `v = t - x`, evaluating the
    /// closed-form solution `zeta(u_s) = zeta(u_0) - 2 pi s` at each grid
    /// value. Orbits are past-directed: both coordinates decrease in `s`.
    pub fn trace_orbit(&self, start: (f64, f64), s_grid: &[f64]) -> Result<Vec<OrbitSample>> {
        let u0 = start.0 + start.1;
        let v0 = start.0 - start.1;
        let margin = tol::ENDPOINT_REJECT;
        if !(self.a1 + margin < u0 && u0 < self.b1 - margin) {
            return Err(Error::OutsideDomain {
                x: u0,
                what: "interior of the cone's right interval (u = t + x)",
            });
        }
        if !(self.a2 + margin < v0 && v0 < self.b2 - margin) {
            return Err(Error::OutsideDomain {
                x: v0,
                what: "interior of the cone's left interval (v = t - x)",
            });
        }
        let ctx = UniformizerContext::new(self.region());
        let zu0 = ctx.zeta(u0)?;
        let zv0 = ctx.zeta(v0)?;
        let mut samples = Vec::with_capacity(s_grid.len());
        let (mut warm_u, mut warm_v) = (u0, v0);
        for &s in s_grid {
            let u = ctx.preimage_warm(zu0 - TAU * s, 1, warm_u)?;
            let v = ctx.preimage_warm(zv0 - TAU * s, 0, warm_v)?;
            warm_u = u;
            warm_v = v;
            debug_assert!(v < u);
            samples.push(OrbitSample {
                s,
                u,
                v,
                invariant_value: self.orbit_invariant(u, v)?,
            });
        }
        Ok(samples)
    }
}

/// One point of a traced modular orbit in lightray coordinates.
#[derive(Debug, Clone, Copy)]
pub struct OrbitSample {
    pub s: f64,
    pub u: f64,
    pub v: f64,
    pub invariant_value: f64,
}

/// Reference integrator for cross-checking [`TwoIntervalCone::trace_orbit`]:
/// classical fixed-step RK4 on `du/ds = -2 pi V(u)` applied to both lightray
/// coordinates. Not used by any flow computation.
pub fn rk4_orbit(
    cone: &TwoIntervalCone,
    u0: f64,
    v0: f64,
    s_end: f64,
    step: f64,
) -> Result<(f64, f64)> {
    assert!(step > 0.0);
    let n_steps = ((s_end.abs() / step).ceil() as usize).max(1);
    let h = s_end / n_steps as f64;
    let f = |x: f64| cone.velocity(x).map(|v| -TAU * v);
    let mut u = u0;
    let mut v = v0;
    for _ in 0..n_steps {
        u = rk4_step(&f, u, h)?;
        v = rk4_step(&f, v, h)?;
    }
    Ok((u, v))
}

fn rk4_step(f: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let k1 = f(x)?;
    let k2 = f(x + 0.5 * h * k1)?;
    let k3 = f(x + 0.5 * h * k2)?;
    let k4 = f(x + h * k3)?;
    Ok(x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0)
}
