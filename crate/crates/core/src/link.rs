//! Single-hop link performance for IM/DD OOK photon-counting receivers:
//! photon arrival rates, BER, packet error/delivery ratios, achievable rate,
//! maximum communication range, and expected transmission counts for both
//! unicast and prioritized-broadcast delivery.
//!
//! Noise convention: dark-count and background noise are stored as photon
//! rates `f_dc`, `f_bg` (1/s). Where a formula wants noise *powers*, they are
//! derived at the operating rate via `P = f * h c R T / (eta_c lambda)`, so
//! the two representations always agree.

use crate::channel::{channel_gain, LinkGeometry, WaterChannelParams};
use crate::numerics::{erfc, erfc_inv, lambert_w0, NumericsError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("transceiver parameter out of range: {0}")]
    InvalidParams(&'static str),
    #[error("per-bit error target {0} outside (0, 0.5): no positive-power solution")]
    BerTargetOutOfRange(f64),
    #[error("infeasible link: {0}")]
    Infeasible(&'static str),
    #[error("candidate set is empty")]
    EmptyCandidateSet,
    #[error("priority rank {rank} outside 1..={len}")]
    RankOutOfRange { rank: usize, len: usize },
    #[error("delivery probability is zero; normalized ExNT undefined")]
    ZeroDeliveryProbability,
}

impl From<NumericsError> for LinkError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::LambertDomain(_) => {
                LinkError::Infeasible("range equation outside the Lambert W domain")
            }
            NumericsError::ErfcInvDomain(x) => LinkError::BerTargetOutOfRange(x / 2.0),
            NumericsError::NoConvergence(_) => LinkError::Infeasible("no numeric convergence"),
        }
    }
}

// ---------------------------------------------------------------------------
// Parameter blocks
// ---------------------------------------------------------------------------

/// Optical transceiver and physical-constant block, shared by both ends of a
/// hop in the homogeneous networks simulated here.
#[derive(Debug, Clone, Copy)]
pub struct TransceiverParams {
    /// Transmit power in W.
    pub p_tx: f64,
    /// Transmitter efficiency.
    pub eta_tx: f64,
    /// Receiver efficiency.
    pub eta_rx: f64,
    /// Detector counting efficiency.
    pub eta_c: f64,
    /// Receiver aperture area in m^2.
    pub aperture: f64,
    /// Pulse duration in s.
    pub pulse_t: f64,
    /// Narrowest full-width divergence angle in rad.
    pub theta_min: f64,
    /// Widest full-width divergence angle in rad.
    pub theta_max: f64,
    /// Planck constant in J s.
    pub planck_h: f64,
    /// Speed of light in water in m/s.
    pub light_speed_water: f64,
    /// Dark-count noise photon rate in 1/s.
    pub f_dc: f64,
    /// Background-illumination noise photon rate in 1/s.
    pub f_bg: f64,
}

impl Default for TransceiverParams {
    /// Reference parameter set for a 532 nm green-laser IoUT transceiver.
    fn default() -> Self {
        Self {
            p_tx: 0.1,
            eta_tx: 0.9,
            eta_rx: 0.9,
            eta_c: 0.16,
            aperture: 5e-4,
            pulse_t: 1e-9,
            theta_min: 0.336,
            theta_max: 2.0 / 3.0,
            planck_h: 6.62e-34,
            light_speed_water: 2.55e8,
            f_dc: 1e6,
            f_bg: 1e6,
        }
    }
}

impl TransceiverParams {
    pub fn validate(&self) -> Result<(), LinkError> {
        let pos = [
            (self.p_tx, "p_tx"),
            (self.aperture, "aperture"),
            (self.pulse_t, "pulse_t"),
            (self.theta_min, "theta_min"),
            (self.planck_h, "planck_h"),
            (self.light_speed_water, "light_speed_water"),
        ];
        for (v, name) in pos {
            if !v.is_finite() || v <= 0.0 {
                return Err(LinkError::InvalidParams(name));
            }
        }
        for (v, name) in [
            (self.eta_tx, "eta_tx"),
            (self.eta_rx, "eta_rx"),
            (self.eta_c, "eta_c"),
        ] {
            if !v.is_finite() || v <= 0.0 || v > 1.0 {
                return Err(LinkError::InvalidParams(name));
            }
        }
        if !self.theta_max.is_finite() || self.theta_max <= self.theta_min {
            return Err(LinkError::InvalidParams("theta_max must exceed theta_min"));
        }
        if self.f_dc < 0.0 || self.f_bg < 0.0 {
            return Err(LinkError::InvalidParams("noise rates must be >= 0"));
        }
        Ok(())
    }

    /// Combined noise photon rate in 1/s.
    pub fn noise_rate(&self) -> f64 {
        self.f_dc + self.f_bg
    }

    /// Equivalent noise power for a photon rate `f` at operating rate
    /// `rate_r`, per the stored-rates convention.
    pub fn noise_power(&self, f: f64, rate_r: f64, wavelength: f64) -> f64 {
        f * self.planck_h * self.light_speed_water * rate_r * self.pulse_t
            / (self.eta_c * wavelength)
    }
}

/// Quality-of-service point at which links operate: data rate, packet error
/// target, and packet length.
#[derive(Debug, Clone, Copy)]
pub struct LinkTarget {
    /// Operating data rate in bit/s.
    pub rate_r: f64,
    /// Packet error rate links are dimensioned for, in (0, 1).
    pub target_per: f64,
    /// Packet length in bits.
    pub packet_bits: u32,
}

impl Default for LinkTarget {
    fn default() -> Self {
        Self {
            rate_r: 1e9,
            target_per: 0.1,
            packet_bits: 992, // 124-byte packets
        }
    }
}

/// Computed single-hop reliability figures.
#[derive(Debug, Clone, Copy)]
pub struct LinkBudget {
    pub rate_r: f64,
    pub ber: f64,
    pub per: f64,
    pub pdr: f64,
    pub packet_l: u32,
    pub max_retx_k: u32,
}

// ---------------------------------------------------------------------------
// Photon-counting chain
// ---------------------------------------------------------------------------

/// Photon arrival rate (1/s) at the receiver:
/// `f = P_rx eta_c lambda / (R T h c)` with
/// `P_rx = P_tx eta_tx eta_rx * gain`.
pub fn photon_rate(
    tx: &TransceiverParams,
    rx: &TransceiverParams,
    gain: f64,
    rate_r: f64,
    wavelength: f64,
) -> f64 {
    let p_rx = tx.p_tx * tx.eta_tx * rx.eta_rx * gain;
    p_rx * rx.eta_c * wavelength / (rate_r * rx.pulse_t * rx.planck_h * rx.light_speed_water)
}

/// OOK bit error rate from signal and noise photon rates:
/// `BER = erfc(sqrt(T/2) (sqrt(f1) - sqrt(f0))) / 2` with
/// `f1 = f_signal + f_dc + f_bg` and `f0 = f_dc + f_bg`.
pub fn ber(f_signal: f64, f_dc: f64, f_bg: f64, pulse_t: f64) -> f64 {
    let f0 = f_dc + f_bg;
    let f1 = f_signal + f0;
    0.5 * erfc((pulse_t / 2.0).sqrt() * (f1.sqrt() - f0.sqrt()))
}

/// Packet error rate for `l` independent bit errors: `1 - (1 - ber)^l`.
pub fn per_from_ber(ber: f64, l: u32) -> f64 {
    -(l as f64 * (-ber).ln_1p()).exp_m1()
}

/// Packet delivery ratio, the complement of [`per_from_ber`].
pub fn pdr_from_ber(ber: f64, l: u32) -> f64 {
    (l as f64 * (-ber).ln_1p()).exp()
}

/// Highest data rate at which a link with received power `p_rx` still meets
/// `target_per` over `packet_bits`-bit packets.
///
/// This inverts the BER chain with the per-bit target
/// `a = 1 - (1 - PER)^(1/L)`; the noise powers follow the stored-rates
/// convention, which makes the solution closed-form.
pub fn achievable_rate(
    p_rx: f64,
    target_per: f64,
    packet_bits: u32,
    rx: &TransceiverParams,
    wavelength: f64,
) -> Result<f64, LinkError> {
    if p_rx.is_nan() || p_rx <= 0.0 {
        return Err(LinkError::Infeasible("received power must be positive"));
    }
    if target_per.is_nan() || target_per <= 0.0 || target_per >= 1.0 {
        return Err(LinkError::BerTargetOutOfRange(target_per));
    }
    let a = ber_target(target_per, packet_bits);
    if a.is_nan() || a <= 0.0 || a >= 0.5 {
        return Err(LinkError::BerTargetOutOfRange(a));
    }
    let q = erfc_inv(2.0 * a)?;
    let f_n = rx.noise_rate();
    // f_signal * R is rate-free; dividing by the squared amplitude target
    // recovers R.
    let signal_scale =
        p_rx * rx.eta_c * wavelength / (rx.pulse_t * rx.planck_h * rx.light_speed_water);
    let amplitude = q * (2.0 / rx.pulse_t).sqrt() + f_n.sqrt();
    Ok(signal_scale / (amplitude * amplitude - f_n))
}

/// Per-bit error target equivalent to a packet error target:
/// `a = 1 - (1 - PER)^(1/L)`.
pub fn ber_target(target_per: f64, packet_bits: u32) -> f64 {
    -((-target_per).ln_1p() / packet_bits as f64).exp_m1()
}

/// Maximum Euclidean range at which a link with divergence angle `theta` and
/// misalignment `phi` still achieves `target.rate_r` at `target.target_per`.
///
/// Solved in closed form through the principal Lambert W branch:
/// with `b1` the required channel gain, `b2 = (theta / (A cos phi))^2`, and
/// `b3 = -(c / cos phi)(A cos phi / theta)^alpha`,
///
/// ```text
/// D = (1 / cos phi) * ( 2 / ((alpha - 1) b3)
///       * W0[ (alpha - 1) (b1 b2)^((alpha-1)/2) b3 / 2 ] )^(1/(1-alpha))
/// ```
pub fn max_range(
    tx: &TransceiverParams,
    rx: &TransceiverParams,
    water: &WaterChannelParams,
    theta: f64,
    phi: f64,
    target: &LinkTarget,
) -> Result<f64, LinkError> {
    let b1 = required_gain(tx, rx, target, water.wavelength)?;
    max_range_from_gain(rx, water, theta, phi, b1)
}

/// Channel gain needed to hit the BER target of `target` — the `b1`
/// coefficient of the range equation.
pub fn required_gain(
    tx: &TransceiverParams,
    rx: &TransceiverParams,
    target: &LinkTarget,
    wavelength: f64,
) -> Result<f64, LinkError> {
    let a = ber_target(target.target_per, target.packet_bits);
    if a.is_nan() || a <= 0.0 || a >= 0.5 {
        return Err(LinkError::BerTargetOutOfRange(a));
    }
    let q = erfc_inv(2.0 * a)?;
    let f_n = rx.noise_rate();
    // Required signal photon rate: (Q sqrt(2/T) + sqrt(f_n))^2 - f_n,
    // converted back to a gain through the photon-rate chain.
    let amplitude = q * (2.0 / rx.pulse_t).sqrt() + f_n.sqrt();
    let f_required = amplitude * amplitude - f_n;
    let per_gain = photon_rate(tx, rx, 1.0, target.rate_r, wavelength);
    Ok(f_required / per_gain)
}

fn max_range_from_gain(
    rx: &TransceiverParams,
    water: &WaterChannelParams,
    theta: f64,
    phi: f64,
    b1: f64,
) -> Result<f64, LinkError> {
    let alpha = water.alpha;
    if alpha == 1.0 {
        return Err(LinkError::Infeasible(
            "range equation singular at alpha = 1",
        ));
    }
    let cos_phi = phi.cos();
    if cos_phi.is_nan() || cos_phi <= 0.0 {
        return Err(LinkError::Infeasible("misalignment at or beyond pi/2"));
    }
    let b2 = (theta / (rx.aperture * cos_phi)).powi(2);
    let b3 = -water.extinction_c / cos_phi * (rx.aperture * cos_phi / theta).powf(alpha);
    let arg = (alpha - 1.0) * (b1 * b2).powf((alpha - 1.0) / 2.0) * b3 / 2.0;
    let w = lambert_w0(arg)?;
    let y = 2.0 * w / ((alpha - 1.0) * b3);
    if y.is_nan() || y <= 0.0 {
        return Err(LinkError::Infeasible("no positive range solution"));
    }
    let d_perp = y.powf(1.0 / (1.0 - alpha));
    let range = d_perp / cos_phi;
    if range.is_finite() && range > 0.0 {
        Ok(range)
    } else {
        Err(LinkError::Infeasible("range not finite"))
    }
}

// ---------------------------------------------------------------------------
// Expected transmission counts
// ---------------------------------------------------------------------------

/// Probability that the k-th delivery attempt is the first success:
/// `per^(k-1) (1 - per)`.
pub fn success_prob_k(per: f64, k: u32) -> f64 {
    debug_assert!(k >= 1);
    per.powi(k as i32 - 1) * (1.0 - per)
}

/// Expected number of transmissions with a drop after `k_max` failures:
/// `sum_k k per^(k-1) (1-per) + K per^K`.
pub fn exnt_unicast(per: f64, k_max: u32) -> f64 {
    debug_assert!(k_max >= 1);
    let mut total = 0.0;
    for k in 1..=k_max {
        total += k as f64 * success_prob_k(per, k);
    }
    total + k_max as f64 * per.powi(k_max as i32)
}

/// Unicast ExNT normalized to eventual success: `1 / pdr`.
pub fn exnt_unicast_norm(pdr: f64) -> Result<f64, LinkError> {
    if pdr.is_nan() || pdr <= 0.0 {
        return Err(LinkError::ZeroDeliveryProbability);
    }
    Ok(1.0 / pdr)
}

/// Broadcast packet error rate of a candidate set: every member must fail,
/// so the per-member PERs multiply.
pub fn broadcast_per(pers: &[f64]) -> Result<f64, LinkError> {
    if pers.is_empty() {
        return Err(LinkError::EmptyCandidateSet);
    }
    Ok(pers.iter().product())
}

/// Successful forwarding ratio of the candidate at (1-based) priority
/// `rank`: it receives while every higher-priority member fails.
pub fn sfr(pers_ordered: &[f64], rank: usize) -> Result<f64, LinkError> {
    if rank == 0 || rank > pers_ordered.len() {
        return Err(LinkError::RankOutOfRange {
            rank,
            len: pers_ordered.len(),
        });
    }
    let prefix: f64 = pers_ordered[..rank - 1].iter().product();
    Ok(prefix * (1.0 - pers_ordered[rank - 1]))
}

/// Broadcast expected transmission count with a drop after `k_max`
/// attempts; reduces to [`exnt_unicast`] for a single candidate.
pub fn exnt_broadcast(pers: &[f64], k_max: u32) -> Result<f64, LinkError> {
    Ok(exnt_unicast(broadcast_per(pers)?, k_max))
}

/// Broadcast ExNT normalized to eventual success:
/// `1 / (1 - prod per_j)`.
pub fn exnt_broadcast_norm(pers: &[f64]) -> Result<f64, LinkError> {
    let per = broadcast_per(pers)?;
    if per >= 1.0 {
        return Err(LinkError::ZeroDeliveryProbability);
    }
    Ok(1.0 / (1.0 - per))
}

// ---------------------------------------------------------------------------
// Bound link model
// ---------------------------------------------------------------------------

/// Transceiver, water, and QoS parameters bound together with the derived
/// constants of the range equation. One of these backs every coverage and
/// routing query on a topology.
#[derive(Debug, Clone)]
pub struct LinkModel {
    pub xcvr: TransceiverParams,
    pub water: WaterChannelParams,
    pub target: LinkTarget,
    /// Retransmission cap K shared by every ExNT expression.
    pub max_retx: u32,
    required_gain: f64,
}

impl LinkModel {
    pub fn new(
        xcvr: TransceiverParams,
        water: WaterChannelParams,
        target: LinkTarget,
        max_retx: u32,
    ) -> Result<Self, LinkError> {
        xcvr.validate()?;
        if max_retx < 1 {
            return Err(LinkError::InvalidParams("max_retx must be >= 1"));
        }
        if !target.rate_r.is_finite() || target.rate_r <= 0.0 {
            return Err(LinkError::InvalidParams("rate_r must be > 0"));
        }
        if target.packet_bits < 1 {
            return Err(LinkError::InvalidParams("packet_bits must be >= 1"));
        }
        let required_gain = required_gain(&xcvr, &xcvr, &target, water.wavelength)?;
        Ok(Self {
            xcvr,
            water,
            target,
            max_retx,
            required_gain,
        })
    }

    /// Reference model: default transceiver/QoS blocks over clear water.
    pub fn reference(alpha: f64, max_retx: u32) -> Result<Self, LinkError> {
        let water = WaterChannelParams::new(0.1514, alpha, 532e-9)
            .map_err(|_| LinkError::InvalidParams("water"))?;
        Self::new(
            TransceiverParams::default(),
            water,
            LinkTarget::default(),
            max_retx,
        )
    }

    /// Packet transmission duration `L / R` in s.
    pub fn t_slot(&self) -> f64 {
        self.target.packet_bits as f64 / self.target.rate_r
    }

    /// Channel gain toward a receiver at Euclidean `distance` with
    /// misalignment `phi`, at divergence `theta`.
    pub fn gain_at(&self, distance: f64, phi: f64, theta: f64) -> Result<f64, LinkError> {
        let geom = LinkGeometry::new(distance, phi)
            .map_err(|_| LinkError::Infeasible("invalid link geometry"))?;
        Ok(channel_gain(&self.water, self.xcvr.aperture, theta, &geom))
    }

    /// Full forward budget (gain -> photon rate -> BER -> PER/PDR) at the
    /// operating rate.
    pub fn budget_at(&self, distance: f64, phi: f64, theta: f64) -> Result<LinkBudget, LinkError> {
        let gain = self.gain_at(distance, phi, theta)?;
        let f_signal = photon_rate(
            &self.xcvr,
            &self.xcvr,
            gain,
            self.target.rate_r,
            self.water.wavelength,
        );
        let ber = ber(f_signal, self.xcvr.f_dc, self.xcvr.f_bg, self.xcvr.pulse_t);
        let per = per_from_ber(ber, self.target.packet_bits);
        Ok(LinkBudget {
            rate_r: self.target.rate_r,
            ber,
            per,
            pdr: 1.0 - per,
            packet_l: self.target.packet_bits,
            max_retx_k: self.max_retx,
        })
    }

    /// Maximum Euclidean range at divergence `theta`, misalignment `phi`.
    pub fn max_range(&self, theta: f64, phi: f64) -> Result<f64, LinkError> {
        max_range_from_gain(&self.xcvr, &self.water, theta, phi, self.required_gain)
    }

    /// Range of the narrowest beam at perfect alignment — the outer radius
    /// of any coverage sector and the default acoustic neighborhood radius.
    pub fn d_max(&self) -> Result<f64, LinkError> {
        self.max_range(self.xcvr.theta_min, 0.0)
    }

    /// Range of the widest beam at perfect alignment.
    pub fn d_min(&self) -> Result<f64, LinkError> {
        self.max_range(self.xcvr.theta_max, 0.0)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
