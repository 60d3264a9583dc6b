//! Special-function kernels used by the optical link equations: the
//! principal branch of the Lambert W function, the complementary error
//! function, and its inverse.
//!
//! BER expressions push `erfc` deep into its tails, so the implementations
//! here target better than 1e-12 absolute accuracy. The defining-integral
//! quadrature and bisection oracles that check them live in the test suite,
//! independent of these code paths.

use std::f64::consts::{E, FRAC_2_SQRT_PI, PI};

use thiserror::Error;

/// Lower edge of the real Lambert W domain, -1/e.
pub const NEG_INV_E: f64 = -0.367_879_441_171_442_33;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("lambert_w0: argument {0} is below -1/e")]
    LambertDomain(f64),
    #[error("erfc_inv: argument {0} is outside (0, 2)")]
    ErfcInvDomain(f64),
    #[error("{0}: no convergence within the iteration cap")]
    NoConvergence(&'static str),
}

/// Convergence knobs shared by the iterative kernels.
#[derive(Debug, Clone, Copy)]
pub struct ToleranceConfig {
    /// Relative tolerance on the defining equation's residual.
    pub rel_tol: f64,
    /// Iteration cap before falling back to (or giving up on) bisection.
    pub max_iter: u32,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 100,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rel_tol: f64, max_iter: u32) -> Self {
        assert!(rel_tol > 0.0, "rel_tol must be positive");
        assert!(max_iter >= 1, "max_iter must be at least 1");
        Self { rel_tol, max_iter }
    }
}

// ---------------------------------------------------------------------------
// Lambert W, principal branch
// ---------------------------------------------------------------------------

/// Principal branch of the product logarithm: the `w >= -1` solving
/// `w * exp(w) = x`, defined for `x >= -1/e`.
pub fn lambert_w0(x: f64) -> Result<f64, NumericsError> {
    lambert_w0_with(x, &ToleranceConfig::default())
}

/// [`lambert_w0`] with explicit tolerances.
///
/// Halley iteration from a branch-appropriate seed; a bisection fallback
/// covers the (rare) non-convergent starts. Residuals are accepted when
/// `|w e^w - x| <= rel_tol * max(1, |x|)`.
pub fn lambert_w0_with(x: f64, tol: &ToleranceConfig) -> Result<f64, NumericsError> {
    if x.is_nan() || x < NEG_INV_E {
        return Err(NumericsError::LambertDomain(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    // Expansion around the branch point in p = sqrt(2(ex + 1)):
    //   W0(x) = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + O(p^5).
    // Where p is tiny the Halley denominator degenerates, so return the
    // series directly; otherwise it seeds the iteration.
    let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
    if p < 1e-4 {
        return Ok(branch_series(p));
    }

    let mut w = if x < 1.0 {
        branch_series(p)
    } else {
        // Asymptotic seed for large arguments.
        let l = x.ln();
        l - l.ln().max(0.0)
    };

    let residual_cap = tol.rel_tol * x.abs().max(1.0);
    let mut converged = false;
    for _ in 0..tol.max_iter {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= residual_cap {
            if converged {
                // One polish step past the residual target leaves w itself
                // at machine precision, not just the defect.
                return Ok(w.max(-1.0));
            }
            converged = true;
        }
        let w1 = w + 1.0;
        let denom = ew * w1 - (w + 2.0) * f / (2.0 * w1);
        let step = f / denom;
        if !step.is_finite() || step == 0.0 {
            return Ok(w.max(-1.0));
        }
        w -= step;
        if w < -1.0 {
            // Keep the iterate on the principal branch.
            w = -1.0 + 0.5 * (w1.abs());
        }
    }
    if converged {
        return Ok(w.max(-1.0));
    }

    lambert_bisect(x, tol)
}

fn branch_series(p: f64) -> f64 {
    -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)))
}

/// Plain bisection on the monotone map `w -> w e^w` over `[-1, hi]`.
fn lambert_bisect(x: f64, tol: &ToleranceConfig) -> Result<f64, NumericsError> {
    let mut lo = -1.0_f64;
    let mut hi = if x <= E { 1.0 } else { x.ln() + 1.0 };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.exp() > x {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= tol.rel_tol * lo.abs().max(1e-3) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(NumericsError::NoConvergence("lambert_w0"))
}

// ---------------------------------------------------------------------------
// Complementary error function
// ---------------------------------------------------------------------------

/// Complementary error function, `erfc(x) = 1 - erf(x)`.
///
/// Maclaurin series of erf below the crossover, Lentz-evaluated continued
/// fraction in the tail; both keep the absolute error under 1e-14 and the
/// tail relative error near machine precision, which the BER chain needs
/// because packet error rates amplify erfc across many decades.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// erf via its Maclaurin series; adequate for |x| < 2 where cancellation in
/// the alternating terms stays below two digits.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // x^(2n+1) / n!
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= -x2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs().max(1e-300) || n > 200 {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Tail evaluation:
///   sqrt(pi) e^{x^2} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
/// with partial numerators n/2, evaluated by the modified Lentz algorithm.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0_f64;
    for n in 1..400 {
        let a = if n == 1 { 1.0 } else { (n - 1) as f64 / 2.0 };
        let b = x;
        d = b + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / PI.sqrt() * f
}

// ---------------------------------------------------------------------------
// Inverse complementary error function
// ---------------------------------------------------------------------------

/// Inverse of [`erfc`] on (0, 2): returns the `x` with `erfc(x) = y`.
///
/// Coarse bisection brackets the root, Newton polishes it to machine
/// precision.
pub fn erfc_inv(y: f64) -> Result<f64, NumericsError> {
    if y.is_nan() || y <= 0.0 || y >= 2.0 {
        return Err(NumericsError::ErfcInvDomain(y));
    }
    if y == 1.0 {
        return Ok(0.0);
    }
    if y > 1.0 {
        return Ok(-erfc_inv(2.0 - y)?);
    }

    // Bracket [lo, hi] with erfc(hi) <= y <= erfc(lo).
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while erfc(hi) > y {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(NumericsError::NoConvergence("erfc_inv"));
        }
    }
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if erfc(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Newton on g(x) = erfc(x) - y, g'(x) = -2/sqrt(pi) e^{-x^2}.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..30 {
        let g = erfc(x) - y;
        let step = g * (x * x).exp() / FRAC_2_SQRT_PI;
        let next = (x + step).clamp(lo, hi);
        if (next - x).abs() <= 1e-16 * x.abs().max(1.0) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
