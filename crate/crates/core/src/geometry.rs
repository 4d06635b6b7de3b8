//! Moebius transformations, the Cayley transform, intervals on the line and
//! circle, and Schwarzian derivatives.
//!
//! Conventions used throughout the crate:
//!
//! * the Cayley transform is `C(x) = (1 + ix)/(1 - ix)`, sending the real
//!   line to the unit circle with `0 -> 1`, `1 -> i` and infinity to `-1`;
//! * circle points are stored by their principal angle in `(-pi, pi]`; the
//!   excluded point `-1` (angle `pi`) corresponds to infinity on the line;
//! * Moebius maps are determinant-one 2x2 complex matrices acting by
//!   `z -> (az + b)/(cz + d)`, compared projectively (up to overall sign).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Imaginary unit, used pervasively in chart formulas.
pub(crate) const J: Complex64 = Complex64::new(0.0, 1.0);

/// Two pi as an f64, the circle circumference in angle units.
pub(crate) const TAU: f64 = std::f64::consts::TAU;

/// A point of the completed real line.
///
/// The flows and charts in this crate are defined on the one-point
/// compactification; carrying infinity explicitly avoids sentinel NaNs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealPoint {
    Finite(f64),
    Infinity,
}

impl RealPoint {
    /// Classifies an already-computed value, treating overflow as infinity.
    pub fn from_value(x: f64) -> Self {
        if x.is_infinite() {
            RealPoint::Infinity
        } else {
            RealPoint::Finite(x)
        }
    }
}

/// Cayley transform of a completed-line point onto the unit circle.
pub fn cayley(x: RealPoint) -> Complex64 {
    match x {
        RealPoint::Finite(x) => cayley_f(x),
        RealPoint::Infinity => Complex64::new(-1.0, 0.0),
    }
}

/// Cayley transform of a finite real point: `(1 + ix)/(1 - ix)`.
///
/// For `x = tan(xi/2)` this is `e^{i xi}`; the result has unit modulus up to
/// rounding for every finite input.
pub fn cayley_f(x: f64) -> Complex64 {
    let num = Complex64::new(1.0, x);
    let den = Complex64::new(1.0, -x);
    num / den
}

/// Inverse Cayley transform of a unit-modulus point, `-i (z - 1)/(z + 1)`.
///
/// Returns the real coordinate `tan(arg(z)/2)`. Fails with
/// [`Error::BoundaryPoint`] when `z` is within 1e-12 of the excluded point
/// `-1`, whose preimage is infinity.
pub fn cayley_inv(z: Complex64) -> Result<f64> {
    if (z + 1.0).norm() < 1e-12 {
        return Err(Error::BoundaryPoint { z });
    }
    let w = -J * (z - 1.0) / (z + 1.0);
    Ok(w.re)
}

/// A Moebius transformation `z -> (az + b)/(cz + d)` stored as a
/// determinant-one matrix.
///
/// Composition is matrix multiplication; two maps are equal as
/// transformations iff their matrices agree up to overall sign.
#[derive(Debug, Clone, Copy)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    /// Builds a map from matrix entries, normalizing the determinant to one.
    ///
    /// Panics if the matrix is singular; that is always a programming error
    /// in this crate, never a data-dependent condition.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        let det = a * d - b * c;
        assert!(
            det.norm() > 1e-300,
            "Moebius matrix must be invertible (det = {det})"
        );
        let k = det.sqrt();
        MoebiusMap {
            a: a / k,
            b: b / k,
            c: c / k,
            d: d / k,
        }
    }

    /// Convenience constructor from real entries.
    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_real(1.0, 0.0, 0.0, 1.0)
    }

    /// The Cayley transform as a matrix: `[[i, 1], [-i, 1]]` normalized.
    pub fn cayley_map() -> Self {
        Self::new(J, 1.0.into(), -J, 1.0.into())
    }

    /// Applies the transformation. The caller is responsible for staying away
    /// from the pole `z = -d/c`; this is a total function on floats and will
    /// return an infinite or NaN value there.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Applies the transformation to a completed-line point, mapping through
    /// the pole projectively: infinity goes to `a/c`.
    pub fn apply_real_point(&self, x: RealPoint) -> RealPoint {
        match x {
            RealPoint::Infinity => {
                if self.c.norm() == 0.0 {
                    RealPoint::Infinity
                } else {
                    RealPoint::Finite((self.a / self.c).re)
                }
            }
            RealPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den.norm() == 0.0 {
                    RealPoint::Infinity
                } else {
                    RealPoint::Finite(((self.a * x + self.b) / den).re)
                }
            }
        }
    }

    /// Derivative `1/(cz + d)^2` (the determinant is one by construction).
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        1.0 / (den * den)
    }

    /// `self` after `other`: `(self.compose(other))(z) = self(other(z))`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap::new(self.d, -self.b, -self.c, self.a)
    }

    /// The unique map sending three pairwise-distinct source points to three
    /// pairwise-distinct target points.
    pub fn from_three_points(src: [Complex64; 3], dst: [Complex64; 3]) -> MoebiusMap {
        // to_standard(p) sends (p0, p1, p2) to (0, 1, infinity).
        fn to_standard(p: [Complex64; 3]) -> MoebiusMap {
            let [z1, z2, z3] = p;
            assert!(
                (z1 - z2).norm() > 1e-14 && (z2 - z3).norm() > 1e-14 && (z1 - z3).norm() > 1e-14,
                "three-point construction requires distinct points"
            );
            MoebiusMap::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))
        }
        to_standard(dst).inverse().compose(&to_standard(src))
    }

    /// Projective comparison: entrywise distance up to overall sign.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        let direct = (self.a - other.a)
            .norm()
            .max((self.b - other.b).norm())
            .max((self.c - other.c).norm())
            .max((self.d - other.d).norm());
        let flipped = (self.a + other.a)
            .norm()
            .max((self.b + other.b).norm())
            .max((self.c + other.c).norm())
            .max((self.d + other.d).norm());
        direct.min(flipped) <= tol
    }
}

/// A bounded open interval `(lo, hi)` on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealInterval {
    lo: f64,
    hi: f64,
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidRegion {
                detail: format!("interval ({lo}, {hi}) must satisfy lo < hi with finite endpoints"),
            });
        }
        Ok(RealInterval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// Strict interior membership with a symmetric margin.
    pub fn contains_with_margin(&self, x: f64, margin: f64) -> bool {
        self.lo + margin < x && x < self.hi - margin
    }
}

/// An open arc on the unit circle, traversed counter-clockwise from `start`
/// to `end`; both angles are principal values in `(-pi, pi]`.
///
/// The arc length `(end - start) mod 2 pi` lies strictly between 0 and 2 pi,
/// so an arc never degenerates to a point or the full circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleArc {
    start: f64,
    end: f64,
}

impl CircleArc {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        let principal = |a: f64| -std::f64::consts::PI < a && a <= std::f64::consts::PI;
        if !(start.is_finite() && end.is_finite() && principal(start) && principal(end)) {
            return Err(Error::InvalidRegion {
                detail: format!(
                    "arc angles ({start}, {end}) must be principal values in (-pi, pi]"
                ),
            });
        }
        if start == end {
            return Err(Error::InvalidRegion {
                detail: "arc endpoints must be distinct".to_string(),
            });
        }
        Ok(CircleArc { start, end })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// Arc length in `(0, 2 pi)`.
    pub fn len(&self) -> f64 {
        let l = (self.end - self.start).rem_euclid(TAU);
        debug_assert!(l > 0.0);
        l
    }

    /// Angle of the arc midpoint, as a principal value.
    pub fn mid_angle(&self) -> f64 {
        principal_angle(self.start + 0.5 * self.len())
    }

    pub fn start_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.start)
    }

    pub fn end_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.end)
    }

    /// Whether the principal angle `theta` lies strictly inside the arc.
    pub fn contains_angle(&self, theta: f64) -> bool {
        let offset = (theta - self.start).rem_euclid(TAU);
        0.0 < offset && offset < self.len()
    }
}

/// Reduces an angle to its principal value in `(-pi, pi]`.
pub fn principal_angle(theta: f64) -> f64 {
    let mut a = theta.rem_euclid(TAU);
    if a > std::f64::consts::PI {
        a -= TAU;
    }
    a
}

/// A union of `n >= 1` bounded open intervals with pairwise disjoint
/// closures, stored in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct NInterval {
    components: Vec<RealInterval>,
}

impl NInterval {
    pub fn new(components: Vec<RealInterval>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidRegion {
                detail: "an n-interval needs at least one component".to_string(),
            });
        }
        for pair in components.windows(2) {
            if pair[0].hi() >= pair[1].lo() {
                return Err(Error::InvalidRegion {
                    detail: format!(
                        "components ({}, {}) and ({}, {}) must be sorted with disjoint closures",
                        pair[0].lo(),
                        pair[0].hi(),
                        pair[1].lo(),
                        pair[1].hi()
                    ),
                });
            }
        }
        Ok(NInterval { components })
    }

    /// Builds from raw `(lo, hi)` pairs in any order, sorting ascending.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let mut components = pairs
            .iter()
            .map(|&(lo, hi)| RealInterval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        components.sort_by(|p, q| p.lo().total_cmp(&q.lo()));
        Self::new(components)
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[RealInterval] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &RealInterval {
        &self.components[k]
    }

    /// Index of the component strictly containing `x`.
    pub fn component_of(&self, x: f64) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.contains(x))
            .ok_or(Error::OutsideDomain {
                x,
                what: "union of the region's open components",
            })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }
}

/// One-parameter group fixing `(0, infinity)`: the dilation `x -> e^s x` as a
/// determinant-one matrix `diag(e^{s/2}, e^{-s/2})`.
pub fn lambda_half_line(s: f64) -> MoebiusMap {
    MoebiusMap::from_real((0.5 * s).exp(), 0.0, 0.0, (-0.5 * s).exp())
}

/// One-parameter group fixing the endpoints of a bounded interval, conjugate
/// to the standard dilation by the orientation-preserving map `(0, infinity)
/// -> (lo, hi)`.
pub fn lambda_interval(i: &RealInterval, s: f64) -> MoebiusMap {
    // w sends 0 -> lo and infinity -> hi with positive determinant.
    let w = MoebiusMap::from_real(i.hi(), i.lo(), 1.0, 1.0);
    w.compose(&lambda_half_line(s)).compose(&w.inverse())
}

/// One-parameter group fixing the endpoints of a circle arc.
///
/// The conjugating chart sends `(0, 1, infinity)` on the line to the arc's
/// start, midpoint and end, so it restricts to an orientation-preserving map
/// of `(0, infinity)` onto the arc; circle membership is preserved because
/// the chart is a three-point map between circle triples.
pub fn lambda_arc(arc: &CircleArc, s: f64) -> MoebiusMap {
    let chart = arc_chart(arc);
    chart
        .compose(&lambda_half_line(s))
        .compose(&chart.inverse())
}

/// Chart sending `(0, 1, infinity)` to (arc start, arc midpoint, arc end).
pub(crate) fn arc_chart(arc: &CircleArc) -> MoebiusMap {
    let t = MoebiusMap::from_three_points(
        [Complex64::new(1.0, 0.0), J, Complex64::new(-1.0, 0.0)],
        [
            arc.start_point(),
            Complex64::from_polar(1.0, arc.start + 0.5 * arc.len()),
            arc.end_point(),
        ],
    );
    t.compose(&MoebiusMap::cayley_map())
}

/// Principal-branch power map `z -> z^nu`.
pub fn power_map(nu: f64, z: Complex64) -> Complex64 {
    z.powc(Complex64::new(nu, 0.0))
}

/// A map with enough structure known to short-circuit its Schwarzian.
pub enum MapFamily<'a> {
    /// Moebius maps have Schwarzian exactly zero.
    Moebius(&'a MoebiusMap),
    /// Power maps `z^nu` have Schwarzian `(1 - nu^2)/(2 z^2)`.
    Power { nu: f64 },
    /// Anything else goes through the finite-difference stencil.
    General(&'a dyn Fn(Complex64) -> Complex64),
}

/// Schwarzian derivative `f'''/f' - (3/2)(f''/f')^2` with exact dispatch for
/// known families and a 5-point stencil of step `h` otherwise.
pub fn schwarzian(f: &MapFamily, z: Complex64, h: f64) -> Result<Complex64> {
    match f {
        MapFamily::Moebius(_) => Ok(Complex64::new(0.0, 0.0)),
        MapFamily::Power { nu } => {
            if z.norm() < 1e-12 {
                return Err(Error::SingularDerivative { z, deriv: 0.0 });
            }
            Ok(Complex64::new(0.5 * (1.0 - nu * nu), 0.0) / (z * z))
        }
        MapFamily::General(f) => schwarzian_numeric(f, z, h),
    }
}

/// Schwarzian derivative from 5-point central stencils for f', f'', f'''.
///
/// Truncation error is O(h^2) times fifth and higher derivatives; the default
/// step [`tol::SCHWARZIAN_H`] balances that against the O(eps/h^3)
/// cancellation floor of the third-derivative stencil.
pub fn schwarzian_numeric(
    f: &dyn Fn(Complex64) -> Complex64,
    z: Complex64,
    h: f64,
) -> Result<Complex64> {
    assert!(h > 0.0, "stencil step must be positive");
    let fm2 = f(z - 2.0 * h);
    let fm1 = f(z - h);
    let f0 = f(z);
    let fp1 = f(z + h);
    let fp2 = f(z + 2.0 * h);

    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    let d3 = (-fm2 + 2.0 * fm1 - 2.0 * fp1 + fp2) / (2.0 * h * h * h);

    if d1.norm() < tol::SCHWARZIAN_DERIV_GUARD {
        return Err(Error::SingularDerivative {
            z,
            deriv: d1.norm(),
        });
    }
    let r2 = d2 / d1;
    Ok(d3 / d1 - 1.5 * r2 * r2)
}

/// High-accuracy Schwarzian for maps analytic near `z`: the first three
/// derivatives come from the Cauchy integral evaluated by the trapezoid rule
/// on a circle of radius `h`.
///
/// With 32 nodes the quadrature error aliases to the 33rd Taylor term and is
/// negligible whenever the map is analytic within a few radii, so the result
/// sits at the rounding floor `k! eps |f| / h^k` instead of the much higher
/// floor of a real-step stencil. Standard device for derivatives of analytic
/// functions (Lyness & Moler; see also Trefethen, "Spectral Methods in
/// MATLAB", ch. 1).
pub fn schwarzian_numeric_refined(
    f: &dyn Fn(Complex64) -> Complex64,
    z: Complex64,
    h: f64,
) -> Result<Complex64> {
    assert!(h > 0.0, "contour radius must be positive");
    const NODES: usize = 32;
    let mut moments = [Complex64::new(0.0, 0.0); 3];
    for l in 0..NODES {
        let ang = TAU * l as f64 / NODES as f64;
        let val = f(z + Complex64::from_polar(h, ang));
        for (k, m) in moments.iter_mut().enumerate() {
            *m += val * Complex64::from_polar(1.0, -((k + 1) as f64) * ang);
        }
    }
    // f^(k)(z) = k! / (NODES h^k) * sum_l f(z + h e^{i ang_l}) e^{-ik ang_l}.
    let d1 = moments[0] / (NODES as f64 * h);
    let d2 = moments[1] * (2.0 / (NODES as f64 * h * h));
    let d3 = moments[2] * (6.0 / (NODES as f64 * h * h * h));
    if d1.norm() < tol::SCHWARZIAN_DERIV_GUARD {
        return Err(Error::SingularDerivative {
            z,
            deriv: d1.norm(),
        });
    }
    let r2 = d2 / d1;
    Ok(d3 / d1 - 1.5 * r2 * r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cayley_pins() {
        assert!((cayley_f(0.0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((cayley_f(1.0) - c(0.0, 1.0)).norm() < 1e-15);
        assert!((cayley(RealPoint::Infinity) - c(-1.0, 0.0)).norm() < 1e-15);
        // tan(xi/2) parametrization: x = 1 corresponds to angle pi/2.
        assert!((cayley_f((PI / 8.0).tan()) - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn cayley_inverse_pins() {
        assert_eq!(cayley_inv(c(1.0, 0.0)).unwrap(), 0.0);
        assert!((cayley_inv(c(0.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
        let x = cayley_inv(Complex64::from_polar(1.0, PI / 4.0)).unwrap();
        // Half-angle oracle: tan(pi/8) = sqrt(2) - 1.
        assert!((x - (2.0_f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(matches!(
            cayley_inv(c(-1.0, 0.0)),
            Err(Error::BoundaryPoint { .. })
        ));
    }

    #[test]
    fn cayley_round_trip_large_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let exponent = rng.gen_range(-6.0..6.0);
            let x: f64 = rng.gen_range(-1.0..1.0) * 10f64.powf(exponent);
            let back = cayley_inv(cayley_f(x)).unwrap();
            assert!(
                (back - x).abs() <= 1e-12 * x.abs().max(1.0),
                "round trip failed at {x}: {back}"
            );
        }
    }

    #[test]
    fn moebius_composition_matches_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let f = random_moebius(&mut rng);
            let g = random_moebius(&mut rng);
            let z = c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let lhs = f.compose(&g).apply(z);
            let rhs = f.apply(g.apply(z));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn three_point_map_hits_targets() {
        let src = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
        let dst = [c(0.3, 0.954), c(-0.6, 0.8), c(0.9, -0.436)];
        let m = MoebiusMap::from_three_points(src, dst);
        for (s, d) in src.iter().zip(dst.iter()) {
            assert!((m.apply(*s) - d).norm() < 1e-12);
        }
    }

    #[test]
    fn lambda_half_line_is_dilation() {
        let s = 0.63;
        let m = lambda_half_line(s);
        let x = m.apply(c(1.0, 0.0));
        assert!((x - c(s.exp(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lambda_interval_fixes_endpoints_and_satisfies_group_law() {
        let i = RealInterval::new(0.0, 1.0).unwrap();
        let m = lambda_interval(&i, 1.0);
        assert!((m.apply(c(0.0, 0.0)) - c(0.0, 0.0)).norm() < 1e-13);
        assert!((m.apply(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-13);
        assert!(lambda_interval(&i, 0.0).approx_eq(&MoebiusMap::identity(), 1e-13));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let lo = rng.gen_range(-2.0..1.0);
            let hi = lo + rng.gen_range(0.3..2.0);
            let iv = RealInterval::new(lo, hi).unwrap();
            let (s, sp) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let lhs = lambda_interval(&iv, s).compose(&lambda_interval(&iv, sp));
            let rhs = lambda_interval(&iv, s + sp);
            assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn lambda_arc_fixes_endpoints_preserves_circle_group_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let start = rng.gen_range(-3.0..3.0);
            let len = rng.gen_range(0.3..2.5);
            let arc = CircleArc::new(start, principal_angle(start + len)).unwrap();
            let (s, sp) = (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let m = lambda_arc(&arc, s);
            assert!((m.apply(arc.start_point()) - arc.start_point()).norm() < 1e-11);
            assert!((m.apply(arc.end_point()) - arc.end_point()).norm() < 1e-11);
            // Interior points stay on the unit circle.
            let z = Complex64::from_polar(1.0, start + 0.37 * len);
            assert!((m.apply(z).norm() - 1.0).abs() < 1e-12);
            let lhs = lambda_arc(&arc, s).compose(&lambda_arc(&arc, sp));
            assert!(lhs.approx_eq(&lambda_arc(&arc, s + sp), 1e-11));
        }
    }

    #[test]
    fn schwarzian_dispatch_is_exact() {
        let m = MoebiusMap::from_real(2.0, 1.0, 1.0, 1.0);
        let s = schwarzian(&MapFamily::Moebius(&m), c(0.3, 0.0), 1e-3).unwrap();
        assert_eq!(s.norm(), 0.0);

        let nu = 2.0;
        let z = c(0.8, 0.0);
        let s = schwarzian(&MapFamily::Power { nu }, z, 1e-3).unwrap();
        assert!((z * z * s - c(0.5 * (1.0 - nu * nu), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn schwarzian_numeric_on_random_moebius_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = random_moebius(&mut rng);
            let z = c(rng.gen_range(-0.5..0.5), 0.0);
            if (m.c * z + m.d).norm() < 0.75 {
                continue;
            }
            let f = |w: Complex64| m.apply(w);
            let s = schwarzian_numeric(&f, z, tol::SCHWARZIAN_H).unwrap();
            assert!(s.norm() < 1e-6, "residual {} for {m:?} at {z}", s.norm());
        }
    }

    #[test]
    fn schwarzian_numeric_matches_power_map_dispatch() {
        // gamma(y) = 2y/(1 - y^2) has Schwarzian 6/(1 + y^2)^2; at 0 this is 6.
        let gamma = |z: Complex64| 2.0 * z / (1.0 - z * z);
        // Plain stencil truncation is (h^2/4) f^(5)/f' = 3e-5 here.
        let s = schwarzian_numeric(&gamma, c(0.0, 0.0), tol::SCHWARZIAN_H).unwrap();
        assert!((s - c(6.0, 0.0)).norm() < 1e-4);

        let refined = schwarzian_numeric_refined(&gamma, c(0.0, 0.0), 1e-2).unwrap();
        assert!((refined - c(6.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn schwarzian_cocycle_postcomposition_with_moebius() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for nu in [0.5, 2.0] {
            for _ in 0..20 {
                let m = random_moebius(&mut rng);
                let z = c(rng.gen_range(0.7..1.4), 0.0);
                let p = power_map(nu, z);
                if (m.c * p + m.d).norm() < 0.5 {
                    continue;
                }
                let f = |w: Complex64| m.apply(power_map(nu, w));
                let numeric = schwarzian_numeric(&f, z, tol::SCHWARZIAN_H).unwrap();
                let exact = schwarzian(&MapFamily::Power { nu }, z, tol::SCHWARZIAN_H).unwrap();
                // The plain stencil's truncation term (h^2/4) f^(5)/f' blows up
                // when the composed map has a pole near z, so this is only a
                // coarse sanity bound; the contour-based value below is tight.
                assert!(
                    (numeric - exact).norm() < 1e-3,
                    "cocycle residual {} at nu={nu}",
                    (numeric - exact).norm()
                );
                let refined = schwarzian_numeric_refined(&f, z, 1e-2).unwrap();
                assert!((refined - exact).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn interval_and_arc_validation() {
        assert!(RealInterval::new(1.0, 1.0).is_err());
        assert!(RealInterval::new(2.0, 1.0).is_err());
        assert!(CircleArc::new(0.2, 0.2).is_err());
        assert!(CircleArc::new(4.0, 1.0).is_err());
        assert!(NInterval::from_pairs(&[(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(NInterval::from_pairs(&[(0.0, 1.0), (2.0, 3.0)]).is_ok());
        // Out-of-order input is sorted, overlap still rejected.
        assert!(NInterval::from_pairs(&[(2.0, 3.0), (0.0, 1.0)]).is_ok());
        assert!(NInterval::from_pairs(&[(0.0, 2.5), (2.0, 3.0)]).is_err());
    }

    #[test]
    fn arc_geometry_helpers() {
        let arc = CircleArc::new(2.8, -2.8).unwrap();
        assert!((arc.len() - (TAU - 5.6)).abs() < 1e-15);
        assert!((arc.mid_angle() - PI).abs() < 1e-12 || (arc.mid_angle() + PI).abs() < 1e-12);
        assert!(arc.contains_angle(3.0));
        assert!(!arc.contains_angle(0.0));
    }

    pub(crate) fn random_moebius(rng: &mut ChaCha8Rng) -> MoebiusMap {
        loop {
            let a: f64 = 1.0 + rng.gen_range(-0.25..0.25);
            let b = rng.gen_range(-0.25..0.25);
            let c_ = rng.gen_range(-0.25..0.25);
            let d = 1.0 + rng.gen_range(-0.25..0.25);
            if (a * d - b * c_).abs() > 0.5 {
                return MoebiusMap::from_real(a, b, c_, d);
            }
        }
    }
}
