//! Optical channel gain between a transmitter and a receiver: Beer-Lambert
//! absorption/scattering loss and geometric beam-spreading loss, combined
//! either ballistically (product form) or with a scattered-ray correction
//! exponent.
//!
//! Geometry is planar. A link is described by the Euclidean distance `r`
//! between the nodes, the misalignment angle `phi` between the transmitter
//! pointing axis and the transmitter-to-receiver line, and the perpendicular
//! distance `d = r cos(phi)`. The loss formulas are written in terms of
//! `(d, phi)`; note that all `cos(phi)` factors cancel when they are
//! re-expressed in the Euclidean distance, so the combined gain depends on
//! `r` alone. That cancellation is asserted in the tests rather than
//! exploited here.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("water channel parameter out of range: {0}")]
    InvalidParams(&'static str),
    #[error("link geometry out of range: {0}")]
    InvalidGeometry(&'static str),
}

/// Physical water-column description.
#[derive(Debug, Clone, Copy)]
pub struct WaterChannelParams {
    /// Extinction coefficient c(lambda) in 1/m (absorption + scattering).
    pub extinction_c: f64,
    /// Scattered-ray correction exponent. Zero recovers the purely
    /// ballistic product of Beer-Lambert and geometric losses; the value 1
    /// is excluded because the range inversion is singular there.
    pub alpha: f64,
    /// Carrier wavelength in m.
    pub wavelength: f64,
}

impl WaterChannelParams {
    pub fn new(extinction_c: f64, alpha: f64, wavelength: f64) -> Result<Self, ChannelError> {
        if !extinction_c.is_finite() || extinction_c <= 0.0 {
            return Err(ChannelError::InvalidParams("extinction_c must be > 0"));
        }
        if !alpha.is_finite() || alpha < 0.0 || alpha == 1.0 {
            return Err(ChannelError::InvalidParams("alpha must be >= 0 and != 1"));
        }
        if !wavelength.is_finite() || wavelength <= 0.0 {
            return Err(ChannelError::InvalidParams("wavelength must be > 0"));
        }
        Ok(Self {
            extinction_c,
            alpha,
            wavelength,
        })
    }
}

/// Transmitter-to-receiver geometry for a single hop.
#[derive(Debug, Clone, Copy)]
pub struct LinkGeometry {
    /// Euclidean transmitter-to-receiver distance in m.
    pub distance: f64,
    /// Angle between the transmitter pointing axis and the bearing to the
    /// receiver, in rad, within [0, pi/2).
    pub misalign_phi: f64,
    /// Perpendicular distance `distance * cos(misalign_phi)` in m.
    pub perp_distance: f64,
}

impl LinkGeometry {
    /// Geometry from the Euclidean distance and the misalignment angle.
    pub fn new(distance: f64, misalign_phi: f64) -> Result<Self, ChannelError> {
        if !distance.is_finite() || distance <= 0.0 {
            return Err(ChannelError::InvalidGeometry("distance must be > 0"));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&misalign_phi) {
            return Err(ChannelError::InvalidGeometry(
                "misalign_phi must lie in [0, pi/2)",
            ));
        }
        Ok(Self {
            distance,
            misalign_phi,
            perp_distance: distance * misalign_phi.cos(),
        })
    }

    /// Geometry from the perpendicular distance and the misalignment angle.
    pub fn from_perpendicular(perp_distance: f64, misalign_phi: f64) -> Result<Self, ChannelError> {
        if !perp_distance.is_finite() || perp_distance <= 0.0 {
            return Err(ChannelError::InvalidGeometry("perp_distance must be > 0"));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&misalign_phi) {
            return Err(ChannelError::InvalidGeometry(
                "misalign_phi must lie in [0, pi/2)",
            ));
        }
        Ok(Self {
            distance: perp_distance / misalign_phi.cos(),
            misalign_phi,
            perp_distance,
        })
    }
}

// ---------------------------------------------------------------------------
// Loss factors
// ---------------------------------------------------------------------------

/// Beer-Lambert propagation loss `exp(-c(lambda) d / cos(phi))`, in (0, 1].
pub fn beer_lambert_loss(params: &WaterChannelParams, geom: &LinkGeometry) -> f64 {
    (-params.extinction_c * geom.perp_distance / geom.misalign_phi.cos()).exp()
}

/// Geometric spreading loss `(A cos(phi) / (theta d))^2` for a receiver
/// aperture `A` (m^2) and full-width divergence angle `theta` (rad).
pub fn geometric_loss(aperture_a: f64, theta: f64, geom: &LinkGeometry) -> f64 {
    let ratio = aperture_a * geom.misalign_phi.cos() / (theta * geom.perp_distance);
    ratio * ratio
}

/// Combined channel gain with the scattered-ray correction:
///
/// ```text
/// G = GL * exp(-(c d / cos(phi)) * (A cos(phi) / (theta d))^alpha)
/// ```
///
/// where `GL` is [`geometric_loss`]. At `alpha = 0` this reduces exactly to
/// the ballistic product of [`beer_lambert_loss`] and [`geometric_loss`].
/// The exponent base is implemented directly as `A cos(phi) / (theta d)`
/// (i.e. `GL^(alpha/2)`), not via `GL^alpha`.
pub fn channel_gain(
    params: &WaterChannelParams,
    aperture_a: f64,
    theta: f64,
    geom: &LinkGeometry,
) -> f64 {
    let cos_phi = geom.misalign_phi.cos();
    let base = aperture_a * cos_phi / (theta * geom.perp_distance);
    let gl = base * base;
    let path = params.extinction_c * geom.perp_distance / cos_phi;
    gl * (-path * base.powf(params.alpha)).exp()
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
