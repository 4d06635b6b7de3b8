//! The uniformizing coordinate on a multi-interval region.
//!
//! For a union of disjoint intervals `E = (a_1,b_1) u ... u (a_n,b_n)` the
//! map `zeta` with `e^{zeta(x)} = -prod_k (x - a_k)/(x - b_k)` restricts to a
//! strictly increasing bijection of each component onto the whole real line.
//! This module computes `zeta`, its derivative, the `n` per-component
//! preimages `x_k(zeta)`, and the induced circle map `g` that collapses all
//! components onto a single arc.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{cayley, cayley_inv, MoebiusMap, NInterval, RealPoint};
use crate::tol;

/// Precomputed view of a region for repeated uniformizer evaluations.
#[derive(Debug, Clone)]
pub struct UniformizerContext {
    region: NInterval,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl UniformizerContext {
    pub fn new(region: NInterval) -> Self {
        let a = region.components().iter().map(|c| c.lo()).collect();
        let b = region.components().iter().map(|c| c.hi()).collect();
        UniformizerContext { region, a, b }
    }

    pub fn region(&self) -> &NInterval {
        &self.region
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `zeta(x) = log( -prod_k (x - a_k)/(x - b_k) )` for `x` inside the
    /// region. Computed as a sum of logs of absolute values so that wide
    /// regions neither overflow nor underflow; the sign of the product is
    /// guaranteed by membership in the region.
    pub fn zeta(&self, x: f64) -> Result<f64> {
        self.region.component_of(x)?;
        Ok(self.zeta_unchecked(x))
    }

    fn zeta_unchecked(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (&a, &b) in self.a.iter().zip(&self.b) {
            acc += (x - a).abs().ln() - (x - b).abs().ln();
        }
        acc
    }

    /// `zeta'(x) = sum_k [ 1/(x - a_k) - 1/(x - b_k) ]`, strictly positive
    /// inside the region because zeros and poles interlace.
    pub fn zeta_prime(&self, x: f64) -> Result<f64> {
        self.region.component_of(x)?;
        let d = self.zeta_prime_unchecked(x);
        debug_assert!(d > 0.0, "zeta' must be positive inside the region");
        Ok(d)
    }

    fn zeta_prime_unchecked(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (&a, &b) in self.a.iter().zip(&self.b) {
            acc += 1.0 / (x - a) - 1.0 / (x - b);
        }
        acc
    }

    /// All `n` preimages of a uniformizer value, ascending (one per
    /// component).
    pub fn preimages(&self, zeta_val: f64) -> Result<Vec<f64>> {
        (0..self.n())
            .map(|k| self.preimage_in_component(zeta_val, k))
            .collect()
    }

    /// The unique preimage of `zeta_val` inside component `k`.
    ///
    /// Bracketed bisection seeded at the component midpoint, with Newton
    /// steps accepted only when they stay strictly inside the current
    /// bracket. Endpoints are never evaluated.
    pub fn preimage_in_component(&self, zeta_val: f64, k: usize) -> Result<f64> {
        let comp = self.region.component(k);
        self.solve(zeta_val, comp.lo(), comp.hi(), comp.midpoint())
    }

    /// Same solver as [`Self::preimage_in_component`] but seeded at `guess`,
    /// for callers that march along a flow line and already sit close to the
    /// root. Falls back to the midpoint seed if the guess is out of range.
    pub fn preimage_warm(&self, zeta_val: f64, k: usize, guess: f64) -> Result<f64> {
        let comp = self.region.component(k);
        let seed = if comp.contains(guess) {
            guess
        } else {
            comp.midpoint()
        };
        self.solve(zeta_val, comp.lo(), comp.hi(), seed)
    }

    fn solve(&self, target: f64, mut lo: f64, mut hi: f64, seed: f64) -> Result<f64> {
        let accept = tol::PREIMAGE_TOL * target.abs().max(1.0);
        let mut x = seed;
        let mut fx = self.zeta_unchecked(x) - target;
        for _ in 0..tol::PREIMAGE_MAX_ITER {
            if fx.abs() <= accept {
                return Ok(x);
            }
            if fx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let mut next = x - fx / self.zeta_prime_unchecked(x);
            if !(lo < next && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if next == x {
                // The bracket has collapsed to adjacent floats; x is the best
                // representable root.
                return Ok(x);
            }
            x = next;
            fx = self.zeta_unchecked(x) - target;
        }
        if hi - lo <= f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
            return Ok(x);
        }
        Err(Error::ConvergenceFailure {
            target,
            last: fx + target,
            iterations: tol::PREIMAGE_MAX_ITER,
        })
    }

    /// The circle map `g = mu^{-1} o C o exp o zeta o C^{-1}` on the Cayley
    /// image of the region.
    ///
    /// `g` sends every component arc onto the single arc `mu^{-1}(C(R_+))`,
    /// identifying points with equal uniformizer value. Very large `zeta`
    /// saturates to the arc endpoint through the point at infinity.
    pub fn g_map(&self, mu: &MoebiusMap, z: Complex64) -> Result<Complex64> {
        let x = cayley_inv(z)?;
        let zeta_val = self.zeta(x)?;
        let circle = cayley(RealPoint::from_value(zeta_val.exp()));
        Ok(mu.inverse().apply(circle))
    }
}
