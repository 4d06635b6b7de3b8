//! Free-fermion two-point correlators under the multi-interval modular flow,
//! the KMS residual check, the trigonometric summation identities behind the
//! closed correlator form, and a ladder-operator recursion whose partial sums
//! witness non-square-summability.
//!
//! Component indices throughout are in descending angular order: index 0 is
//! the window at the largest angles, equivalently the rightmost interval of
//! the line region. The positions `x`, `y` are seeds: their uniformizer
//! values select the flow lines, while the indices `i`, `j` pick which
//! preimage carries the field insertion.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::flow::SymmetricRegion;
use crate::geometry::{NInterval, J, TAU};
use crate::mixing::{mixing_closed_symmetric, mixing_ode, omega_matrix};
use crate::tol;
use crate::uniformization::UniformizerContext;

/// Vacuum two-point function on the line: `-i / (x - y - i eps)`.
pub fn psi_2pt(x: f64, y: f64, epsilon: f64) -> Complex64 {
    debug_assert!(epsilon > 0.0);
    -J / Complex64::new(x - y, -epsilon)
}

/// One evaluated correlator, with the inputs that produced it.
#[derive(Debug, Clone, Copy)]
pub struct CorrelatorValue {
    pub value: Complex64,
    pub t: Complex64,
    pub s: Complex64,
    pub i: usize,
    pub j: usize,
    pub epsilon: f64,
}

/// Per-seed data shared by the correlator forms.
struct Seed {
    zeta: f64,
    /// Window-0 angle of the seed's flow line at time zero.
    xi0: f64,
    /// d Theta / d zeta at the seed, for Jacobian ratios.
    dtheta: f64,
}

impl Seed {
    /// Line-to-angle half-density factor `2 / (1 + p^2)` at the insertion
    /// point `p`, the preimage with the given descending index on this flow
    /// line; `2 cos^2(xi/2)` in the angle variable.
    fn insertion_factor(&self, n: usize, idx: usize) -> f64 {
        let xi = self.xi0 - TAU * idx as f64 / n as f64;
        let c = (0.5 * xi).cos();
        2.0 * c * c
    }
}

fn seed(region: &SymmetricRegion, x: f64) -> Result<Seed> {
    let xi = 2.0 * x.atan();
    let k = region.component_of_angle(xi)?;
    let zeta = region.zeta_of_angle(xi)?;
    let n = region.n() as f64;
    let xi0 = xi + TAU * k as f64 / n;
    Ok(Seed {
        zeta,
        xi0,
        dtheta: region.dtheta_dzeta_of_zeta(zeta),
    })
}

fn check_indices(region: &SymmetricRegion, i: usize, j: usize) -> Result<()> {
    if i >= region.n() || j >= region.n() {
        return Err(Error::OutsideDomain {
            x: i.max(j) as f64,
            what: "component index range of the region",
        });
    }
    Ok(())
}

/// The flowed correlator as the explicit double sum over mixing-matrix
/// entries and angular kernels:
/// `(-i/2) sqrt(J_x(t) J_y(s)) sum_{k,l} O_{ik}(t) O_{jl}(s) /
/// sin((xi_k(t) - eta_l(s) - i eps)/2)`
/// with `xi_k(t) = xi_0(t) - 2 pi k / n` kept as unwrapped reals. The factor
/// `J_x(t)` combines the angle-frame flow Jacobian with the line half-density
/// at the insertion preimage `x_i`, so at `t = s = 0` the value reduces to
/// the line two-point function at `(x_i, y_j)`.
#[allow(clippy::too_many_arguments)]
pub fn correlator_mixed(
    region: &SymmetricRegion,
    x: f64,
    y: f64,
    t: f64,
    s: f64,
    i: usize,
    j: usize,
    epsilon: f64,
) -> Result<CorrelatorValue> {
    check_indices(region, i, j)?;
    let n = region.n();
    let n_f = n as f64;
    let sx = seed(region, x)?;
    let sy = seed(region, y)?;

    // The flowed angle gap and the flowed Jacobians are taken straight from
    // the uniformizer values, keeping small kernel arguments relative-accurate
    // deep into the windows (both points approach the same edge as |t| grows).
    let gap = region.angle_gap_of_zetas(sx.zeta - TAU * t, sy.zeta - TAU * s);
    let jx = region.dtheta_dzeta_of_zeta(sx.zeta - TAU * t) / sx.dtheta * sx.insertion_factor(n, i);
    let jy = region.dtheta_dzeta_of_zeta(sy.zeta - TAU * s) / sy.dtheta * sy.insertion_factor(n, j);

    let o_t = mixing_closed_symmetric(region, sx.xi0, t)?;
    let o_s = mixing_closed_symmetric(region, sy.xi0, s)?;

    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        for l in 0..n {
            let arg = gap - TAU * (k as f64 - l as f64) / n_f;
            let kernel = 1.0 / (0.5 * Complex64::new(arg, -epsilon)).sin();
            sum += o_t.entries[(i, k)] * o_s.entries[(j, l)] * kernel;
        }
    }
    Ok(CorrelatorValue {
        value: Complex64::new(0.0, -0.5) * (jx * jy).sqrt() * sum,
        t: t.into(),
        s: s.into(),
        i,
        j,
        epsilon,
    })
}

/// The closed correlator form: all modular dependence sits in exponentials,
/// `e^{-pi(t+s)} f(x_i, y_j) / (e^{-2 pi t} X - e^{-2 pi s} Y - i eps)`
/// with `X = e^{zeta(x)}`, `Y = e^{zeta(y)}` and a `(t, s)`-independent
/// factor `f` fixed by the value at `t = s = 0`.
///
/// The parameters may be complex; this is the route to imaginary modular
/// time, no preimages are continued off the real line.
#[allow(clippy::too_many_arguments)]
pub fn correlator_closed(
    region: &SymmetricRegion,
    x: f64,
    y: f64,
    t: Complex64,
    s: Complex64,
    i: usize,
    j: usize,
    epsilon: f64,
) -> Result<CorrelatorValue> {
    check_indices(region, i, j)?;
    let n_f = region.n() as f64;
    let sx = seed(region, x)?;
    let sy = seed(region, y)?;
    let big_x = sx.zeta.exp();
    let big_y = sy.zeta.exp();

    // f is evaluated without any regulator: the angular value at t = s = 0
    // divided by the kernel 1/(X - Y), simplified. Both factors below are
    // exactly antisymmetric under (x, i) <-> (y, j), so f is exactly
    // symmetric; the KMS identity then holds to rounding.
    let n = region.n();
    let fac = sx.insertion_factor(n, i) * sy.insertion_factor(n, j);
    let delta = (sx.xi0 - TAU * i as f64 / n_f) - (sy.xi0 - TAU * j as f64 / n_f);
    let f = -J * fac.sqrt() * (big_x - big_y) / (2.0 * (0.5 * delta).sin());

    let den = (-TAU * t).exp() * big_x - (-TAU * s).exp() * big_y - J * epsilon;
    if den.norm() < 0.5 * epsilon {
        return Err(Error::RegulatedPole {
            modulus: den.norm(),
            epsilon,
        });
    }
    Ok(CorrelatorValue {
        value: (-PI * (t + s)).exp() * f / den,
        t,
        s,
        i,
        j,
        epsilon,
    })
}

/// Single-interval correlator on the half-line `(0, inf)`, whose flow is the
/// pure dilation `X(t) = e^{-2 pi t} X`:
/// `-i e^{-pi(t+s)} / (e^{-2 pi t} x - e^{-2 pi s} y - i eps)`.
pub fn correlator_halfline(
    x: f64,
    y: f64,
    t: Complex64,
    s: Complex64,
    epsilon: f64,
) -> Result<Complex64> {
    if x <= 0.0 || y <= 0.0 {
        return Err(Error::OutsideDomain {
            x: if x <= 0.0 { x } else { y },
            what: "the open half-line",
        });
    }
    let den = (-TAU * t).exp() * x - (-TAU * s).exp() * y - J * epsilon;
    if den.norm() < 0.5 * epsilon {
        return Err(Error::RegulatedPole {
            modulus: den.norm(),
            epsilon,
        });
    }
    Ok(-J * (-PI * (t + s)).exp() / den)
}

/// Line-frame double sum for arbitrary regions, with mixing matrices from
/// the ODE integrator. Agrees with [`correlator_mixed`] on symmetric
/// regions up to the integrator tolerance.
#[allow(clippy::too_many_arguments)]
pub fn correlator_mixed_general(
    region: &NInterval,
    x: f64,
    y: f64,
    t: f64,
    s: f64,
    i: usize,
    j: usize,
    epsilon: f64,
    steps_per_unit: usize,
) -> Result<CorrelatorValue> {
    let n = region.n();
    if i >= n || j >= n {
        return Err(Error::OutsideDomain {
            x: i.max(j) as f64,
            what: "component index range of the region",
        });
    }
    let ctx = UniformizerContext::new(region.clone());
    let zx = ctx.zeta(x)?;
    let zy = ctx.zeta(y)?;
    let o_t = mixing_ode(region, x, t, steps_per_unit)?;
    let o_s = mixing_ode(region, y, s, steps_per_unit)?;

    // Descending preimages of the flowed uniformizer values; the Jacobian
    // bases sit at the time-zero insertion preimages, not at the seeds.
    let mut pts_x = ctx.preimages(zx - TAU * t)?;
    let mut pts_y = ctx.preimages(zy - TAU * s)?;
    pts_x.reverse();
    pts_y.reverse();
    let mut pts_x0 = ctx.preimages(zx)?;
    let mut pts_y0 = ctx.preimages(zy)?;
    pts_x0.reverse();
    pts_y0.reverse();
    let base_x = ctx.zeta_prime(pts_x0[i])?;
    let base_y = ctx.zeta_prime(pts_y0[j])?;
    let jac = |base: f64, pt: f64| -> Result<f64> { Ok(base / ctx.zeta_prime(pt)?) };

    let mut sum = Complex64::new(0.0, 0.0);
    for (k, &px) in pts_x.iter().enumerate() {
        let jx = jac(base_x, px)?.sqrt();
        for (l, &py) in pts_y.iter().enumerate() {
            let jy = jac(base_y, py)?.sqrt();
            let kernel = 1.0 / Complex64::new(px - py, -epsilon);
            sum += o_t.entries[(i, k)] * o_s.entries[(j, l)] * jx * jy * kernel;
        }
    }
    Ok(CorrelatorValue {
        value: -J * sum,
        t: t.into(),
        s: s.into(),
        i,
        j,
        epsilon,
    })
}

/// Relative KMS residual at half imaginary modular step:
/// `| C(x, y) - C(y, x) | / max(|C(x, y)|, |C(y, x)|)` with
/// `C(p, q) = <psi(p) sigma_{-i/2} psi(q)>` through the closed form, the same
/// finite regulator on both sides. Component indices are taken from the
/// seeds' own windows.
pub fn kms_residual(region: &SymmetricRegion, x: f64, y: f64, epsilon: f64) -> Result<f64> {
    let i = region.component_of_angle(2.0 * x.atan())?;
    let j = region.component_of_angle(2.0 * y.atan())?;
    let zero = Complex64::new(0.0, 0.0);
    let half_step = Complex64::new(0.0, -0.5);
    let a = correlator_closed(region, x, y, zero, half_step, i, j, epsilon)?.value;
    let b = correlator_closed(region, y, x, zero, half_step, j, i, epsilon)?.value;
    Ok((a - b).norm() / a.norm().max(b.norm()))
}

/// Absolute residuals of the three trigonometric identities that collapse
/// the mixed correlator sum, with `sin_k(a) = sin(a - k pi / n)`:
///
/// 1. `prod_k sin_k(a) = (-2)^{1-n} sin(n a)`;
/// 2. `sum_{k != j} cot((j - k) pi / n) = 0`;
/// 3. `sum_k exp(2(a - b) Omega)_{jk} / sin_k(a) = (sin(n b)/sin(n a)) / sin_j(b)`.
#[derive(Debug, Clone, Copy)]
pub struct LemmaResiduals {
    pub product: f64,
    pub cotangent: f64,
    pub mixing_sum: f64,
}

impl LemmaResiduals {
    pub fn max(&self) -> f64 {
        self.product.max(self.cotangent).max(self.mixing_sum)
    }
}

pub fn lemma_identities(n: usize, alpha: f64, beta_angle: f64, j: usize) -> Result<LemmaResiduals> {
    assert!(n >= 1 && j < n, "need n >= 1 and j < n");
    let n_f = n as f64;
    let sin_k = |a: f64, k: usize| (a - k as f64 * PI / n_f).sin();
    for k in 0..n {
        for v in [sin_k(alpha, k), sin_k(beta_angle, k)] {
            if v.abs() < tol::LEMMA_SIN_GUARD {
                return Err(Error::NearSingular { value: v });
            }
        }
    }
    let sin_na = (n_f * alpha).sin();
    if sin_na.abs() < tol::LEMMA_SIN_GUARD {
        return Err(Error::NearSingular { value: sin_na });
    }

    let product_lhs: f64 = (0..n).map(|k| sin_k(alpha, k)).product();
    let product_rhs = (-2.0f64).powi(1 - n as i32) * sin_na;
    let product = (product_lhs - product_rhs).abs();

    let cotangent = (0..n)
        .filter(|&k| k != j)
        .map(|k| {
            let arg = (j as f64 - k as f64) * PI / n_f;
            arg.cos() / arg.sin()
        })
        .sum::<f64>()
        .abs();

    let expm = if n == 1 {
        DMatrix::identity(1, 1)
    } else {
        (omega_matrix(n).matrix() * (2.0 * (alpha - beta_angle))).exp()
    };
    let mixing_lhs: f64 = (0..n).map(|k| expm[(j, k)] / sin_k(alpha, k)).sum();
    let mixing_rhs = (n_f * beta_angle).sin() / sin_na / sin_k(beta_angle, j);
    let mixing_sum = (mixing_lhs - mixing_rhs).abs();

    Ok(LemmaResiduals {
        product,
        cotangent,
        mixing_sum,
    })
}

/// The ladder recursion `c_{m+1} sqrt((m+1)(2h+m)) = c_{m-1} sqrt(m(2h+m-1))`
/// with `c_0 = 1`, `c_1 = 0`; odd coefficients vanish and the even
/// `|c_m|^2` decay like `1/m`, so the square sums diverge logarithmically.
#[derive(Debug, Clone, Copy)]
pub struct Sl2Recursion {
    h: f64,
}

impl Sl2Recursion {
    pub fn new(h: f64) -> Result<Self> {
        if h <= 0.0 {
            return Err(Error::InvalidRegion {
                detail: format!("ladder weight must be positive, got {h}"),
            });
        }
        Ok(Sl2Recursion { h })
    }

    /// `|c_m|^2` for `m = 0..=n_max`, built from exact ratio products.
    pub fn coefficient_squares(&self, n_max: usize) -> Vec<f64> {
        let mut sq = vec![0.0; n_max + 1];
        sq[0] = 1.0;
        let mut even = 1.0;
        let mut m = 1.0;
        for idx in (2..=n_max).step_by(2) {
            // |c_{m+1}|^2 = |c_{m-1}|^2 * m(2h+m-1) / ((m+1)(2h+m)).
            even *= m * (2.0 * self.h + m - 1.0) / ((m + 1.0) * (2.0 * self.h + m));
            sq[idx] = even;
            m += 2.0;
        }
        sq
    }
}

/// Running sums `S(N) = sum_{m <= N} |c_m|^2` for `N = 0..=n_max`.
pub fn sl2_partial_sums(h: f64, n_max: usize) -> Result<Vec<f64>> {
    assert!(n_max >= 2);
    let squares = Sl2Recursion::new(h)?.coefficient_squares(n_max);
    let mut sums = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    for sq in squares {
        acc += sq;
        sums.push(acc);
    }
    Ok(sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CircleArc;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TINY_EPS: f64 = 1e-300;

    /// The square-root region of the arc (pi/2, pi): line components
    /// (-(1+sqrt 2), -1) and (sqrt 2 - 1, 1).
    fn fixture() -> SymmetricRegion {
        SymmetricRegion::new(CircleArc::new(PI / 2.0, PI).unwrap(), 2).unwrap()
    }

    fn fixture3() -> SymmetricRegion {
        SymmetricRegion::new(CircleArc::new(0.4, 2.4).unwrap(), 3).unwrap()
    }

    fn random_in_window(region: &SymmetricRegion, k: usize, rng: &mut ChaCha8Rng) -> f64 {
        let w = region.windows()[k];
        let xi = w.lo + w.width() * rng.gen_range(0.08..0.92);
        (0.5 * xi).tan()
    }

    #[test]
    fn fixture_matches_expected_line_region() {
        let line = fixture().line_region().unwrap();
        let s = 2.0f64.sqrt();
        assert!((line.component(0).lo() + (1.0 + s)).abs() < 1e-12);
        assert!((line.component(0).hi() + 1.0).abs() < 1e-12);
        assert!((line.component(1).lo() - (s - 1.0)).abs() < 1e-12);
        assert!((line.component(1).hi() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psi_pins() {
        let v = psi_2pt(1.5, 0.5, 1e-12);
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-11);
        // Symmetrized combination is the regulator bump.
        let (x, y, eps) = (0.8, 0.3, 0.05);
        let sym = psi_2pt(x, y, eps) + psi_2pt(y, x, eps);
        let bump = 2.0 * eps / ((x - y).powi(2) + eps * eps);
        assert!((sym - Complex64::new(bump, 0.0)).norm() < 1e-14);
        // Angular form through the half-angle substitution.
        let (xi, eta): (f64, f64) = (0.9, -0.4);
        let (x, y) = ((0.5 * xi).tan(), (0.5 * eta).tan());
        let angular = Complex64::new(0.0, -0.5)
            * (2.0 / (1.0 + x * x) * 2.0 / (1.0 + y * y)).sqrt()
            / Complex64::new((0.5 * (xi - eta)).sin(), 0.0);
        assert!((angular - psi_2pt(x, y, TINY_EPS)).norm() < 1e-12 * angular.norm());
    }

    #[test]
    fn mixed_reduces_to_psi_at_zero_times() {
        let region = fixture();
        let line = region.line_region().unwrap();
        let ctx = UniformizerContext::new(line);
        let (x, y): (f64, f64) = (0.7, -1.5);
        // x sits in window 0, y in window 1.
        assert_eq!(region.component_of_angle(2.0 * x.atan()).unwrap(), 0);
        assert_eq!(region.component_of_angle(2.0 * y.atan()).unwrap(), 1);
        let own = correlator_mixed(&region, x, y, 0.0, 0.0, 0, 1, TINY_EPS)
            .unwrap()
            .value;
        let expected = psi_2pt(x, y, TINY_EPS);
        assert!((own - expected).norm() < 1e-12 * expected.norm());

        // Off-window indices select the other preimages of the same zeta.
        let other = correlator_mixed(&region, x, y, 0.0, 0.0, 1, 1, TINY_EPS)
            .unwrap()
            .value;
        let x1 = ctx.preimage_in_component(ctx.zeta(x).unwrap(), 0).unwrap();
        let expected = psi_2pt(x1, y, TINY_EPS);
        assert!((other - expected).norm() < 1e-11 * expected.norm());
    }

    #[test]
    fn mixed_equals_closed_on_real_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for region in [fixture(), fixture3()] {
            let n = region.n();
            for _ in 0..40 {
                let x = random_in_window(&region, rng.gen_range(0..n), &mut rng);
                let y = random_in_window(&region, rng.gen_range(0..n), &mut rng);
                let (t, s) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let (i, jj) = (rng.gen_range(0..n), rng.gen_range(0..n));
                let mixed = correlator_mixed(&region, x, y, t, s, i, jj, TINY_EPS).unwrap();
                let closed =
                    correlator_closed(&region, x, y, t.into(), s.into(), i, jj, TINY_EPS).unwrap();
                if mixed.value.norm() < 1e-6 {
                    continue;
                }
                assert!(
                    (mixed.value - closed.value).norm() < 1e-10 * mixed.value.norm(),
                    "forms disagree: n={n}, t={t}, s={s}, i={i}, j={jj}"
                );
            }
        }
    }

    #[test]
    fn equal_time_correlators_are_flow_invariant() {
        let region = fixture();
        let (x, y) = (0.55, -1.8);
        let base = correlator_mixed(&region, x, y, 0.0, 0.0, 0, 1, TINY_EPS)
            .unwrap()
            .value;
        for tau in [-0.8, 0.3, 1.1] {
            let moved = correlator_mixed(&region, x, y, tau, tau, 0, 1, TINY_EPS)
                .unwrap()
                .value;
            let rel = (moved - base).norm() / base.norm();
            assert!(
                rel < 1e-12,
                "equal-time invariance broken at tau={tau}: rel {rel:.3e}, {moved} vs {base}"
            );
        }
    }

    #[test]
    fn ratio_to_halfline_is_parameter_independent() {
        let region = fixture();
        let ctx = UniformizerContext::new(region.line_region().unwrap());
        let (x, y) = (0.6, 0.8);
        let (big_x, big_y) = (ctx.zeta(x).unwrap().exp(), ctx.zeta(y).unwrap().exp());
        let ratio_at = |t: f64, s: f64| {
            let num = correlator_mixed(&region, x, y, t, s, 0, 0, TINY_EPS)
                .unwrap()
                .value;
            let den = correlator_halfline(big_x, big_y, t.into(), s.into(), TINY_EPS).unwrap();
            num / den
        };
        let base = ratio_at(0.0, 0.0);
        for (t, s) in [(0.4, -0.2), (-1.0, 0.7), (1.3, 1.1)] {
            let r = ratio_at(t, s);
            assert!(
                (r - base).norm() < 1e-9 * base.norm(),
                "ratio drifted at ({t}, {s}): {r} vs {base}"
            );
        }
    }

    #[test]
    fn general_ode_form_matches_symmetric_form() {
        let region = fixture();
        let line = region.line_region().unwrap();
        let (x, y) = (0.7, -1.4);
        let (t, s) = (0.35, -0.55);
        for (i, jj) in [(0usize, 1usize), (1, 0), (0, 0)] {
            let angle_frame = correlator_mixed(&region, x, y, t, s, i, jj, TINY_EPS)
                .unwrap()
                .value;
            let line_frame = correlator_mixed_general(&line, x, y, t, s, i, jj, TINY_EPS, 2000)
                .unwrap()
                .value;
            assert!(
                (angle_frame - line_frame).norm() < 1e-8 * angle_frame.norm(),
                "frames disagree for (i,j)=({i},{jj})"
            );
        }
    }

    #[test]
    fn kms_residual_is_tiny() {
        // Half-line case through the explicit dilation correlator.
        let zero = Complex64::new(0.0, 0.0);
        let half = Complex64::new(0.0, -0.5);
        for eps in [1e-3, 1e-6] {
            let a = correlator_halfline(2.0, 0.7, zero, half, eps).unwrap();
            let b = correlator_halfline(0.7, 2.0, zero, half, eps).unwrap();
            assert!((a - b).norm() / a.norm() < 1e-12);
        }

        let region = fixture();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let x = random_in_window(&region, rng.gen_range(0..2), &mut rng);
            let y = random_in_window(&region, rng.gen_range(0..2), &mut rng);
            if (x - y).abs() < 1e-3 {
                continue;
            }
            for eps in [1e-3, 1e-6] {
                let r = kms_residual(&region, x, y, eps).unwrap();
                assert!(r < 1e-10, "KMS residual {r} at x={x}, y={y}, eps={eps}");
            }
        }
        // Explicit cross-component pair.
        let r = kms_residual(&region, 0.6, -1.7, 1e-3).unwrap();
        assert!(r < 1e-10);
    }

    #[test]
    fn lemma_pins() {
        // n=2, alpha=pi/3: both sides of the product identity equal
        // -sqrt(3)/4.
        let res = lemma_identities(2, PI / 3.0, 0.9, 0).unwrap();
        let lhs: f64 = (0..2)
            .map(|k| (PI / 3.0 - k as f64 * PI / 2.0).sin())
            .product();
        assert!((lhs - (-0.4330127018922193)).abs() < 1e-15);
        assert!(res.product < 1e-15);

        // n=3, j=0: cot(-pi/3) + cot(-2pi/3) = 0.
        let res = lemma_identities(3, 0.7, 0.4, 0).unwrap();
        assert!(res.cotangent < 1e-15);

        // alpha = beta collapses the mixing sum to the diagonal term.
        let res = lemma_identities(4, 0.62, 0.62, 2).unwrap();
        assert!(res.mixing_sum < 1e-12);

        assert!(matches!(
            lemma_identities(3, 0.0, 0.5, 0),
            Err(Error::NearSingular { .. })
        ));
    }

    #[test]
    fn lemma_random_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 1..=8 {
            let mut tested = 0;
            while tested < 40 {
                let alpha = rng.gen_range(-1.5..1.5);
                let beta_angle = rng.gen_range(-1.5..1.5);
                let j = rng.gen_range(0..n);
                match lemma_identities(n, alpha, beta_angle, j) {
                    Ok(res) => {
                        assert!(
                            res.max() < 1e-10,
                            "lemma residual {} at n={n}, alpha={alpha}, beta={beta_angle}, j={j}",
                            res.max()
                        );
                        tested += 1;
                    }
                    Err(Error::NearSingular { .. }) => continue,
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }

    #[test]
    fn sl2_pins() {
        let squares = Sl2Recursion::new(1.0).unwrap().coefficient_squares(10_000);
        for k in [0usize, 1, 2, 10, 50, 2000] {
            assert!(
                (squares[2 * k] - 1.0 / (2.0 * k as f64 + 1.0)).abs() < 1e-12,
                "closed form fails at m={}",
                2 * k
            );
        }
        assert!(squares.iter().skip(1).step_by(2).all(|&v| v == 0.0));

        let sums = sl2_partial_sums(1.0, 10_000).unwrap();
        assert!(sums.windows(2).all(|w| w[1] >= w[0]));
        for n in [100usize, 1000, 5000] {
            assert!(sums[2 * n] > sums[n], "no growth between {n} and {}", 2 * n);
        }
        let ratio = sums[10_000] / sums[100];
        assert!(
            (1.5..=2.5).contains(&ratio),
            "logarithmic growth ratio {ratio} out of range"
        );

        // Positive weights other than 1 still diverge.
        let sums = sl2_partial_sums(0.5, 4000).unwrap();
        assert!(sums[4000] > sums[2000]);
    }
}
