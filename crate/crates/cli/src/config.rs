//! Flat key=value parameter files. Keys mirror the reference parameter
//! table symbols (`p_tx`, `eta_tx`, `theta_min`, ...) so configurations are
//! traceable; unknown keys are rejected. Command-line flags override file
//! values, which override the built-in defaults.
//!
//! ```text
//! # physical layer
//! p_tx = 0.1
//! eta_tx = 0.9
//! extinction_c = 0.1514
//! alpha = 0.5
//! ...
//! # sweep
//! side_lengths = 7,8,10,12
//! schemes = TUR,LOR-DP,GOR-ExNT
//! ```

use sector_core::metrics::CoordScheme;
use sector_core::sim::{Scheme, SimConfig};

/// A parsed configuration, applied on top of the defaults.
#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    pub sim: SimConfig,
}

pub fn parse_config(text: &str) -> Result<FileConfig, String> {
    let mut cfg = FileConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| format!("line {line}: expected key = value, got {trimmed:?}"))?;
        apply(&mut cfg, key.trim(), value.trim()).map_err(|e| format!("line {line}: {e}"))?;
    }
    Ok(cfg)
}

fn apply(cfg: &mut FileConfig, key: &str, value: &str) -> Result<(), String> {
    let f = |v: &str| -> Result<f64, String> {
        v.parse::<f64>()
            .map_err(|e| format!("bad float {v:?}: {e}"))
    };
    let sim = &mut cfg.sim;
    match key {
        "p_tx" => sim.xcvr.p_tx = f(value)?,
        "eta_tx" => sim.xcvr.eta_tx = f(value)?,
        "eta_rx" => sim.xcvr.eta_rx = f(value)?,
        "eta_c" => sim.xcvr.eta_c = f(value)?,
        "aperture_a" => sim.xcvr.aperture = f(value)?,
        "pulse_t" => sim.xcvr.pulse_t = f(value)?,
        "theta_min" => sim.xcvr.theta_min = f(value)?,
        "theta_max" => sim.xcvr.theta_max = f(value)?,
        "planck_h" => sim.xcvr.planck_h = f(value)?,
        "light_speed_water" => sim.xcvr.light_speed_water = f(value)?,
        "f_dc" => sim.xcvr.f_dc = f(value)?,
        "f_bg" => sim.xcvr.f_bg = f(value)?,
        "extinction_c" => sim.water.extinction_c = f(value)?,
        "alpha" => sim.water.alpha = f(value)?,
        "wavelength" => sim.water.wavelength = f(value)?,
        "rate_r" => sim.target.rate_r = f(value)?,
        "target_per" => sim.target.target_per = f(value)?,
        "packet_bits" => {
            sim.target.packet_bits = value
                .parse()
                .map_err(|e| format!("bad packet_bits {value:?}: {e}"))?
        }
        "packet_bytes" => {
            let bytes: u32 = value
                .parse()
                .map_err(|e| format!("bad packet_bytes {value:?}: {e}"))?;
            sim.target.packet_bits = bytes * 8;
        }
        "max_retx" => {
            sim.max_retx = value
                .parse()
                .map_err(|e| format!("bad max_retx {value:?}: {e}"))?
        }
        "p_listen" => sim.energy.p_listen = f(value)?,
        "p_coord" => sim.energy.p_coord = f(value)?,
        "tau_sifs" => sim.energy.tau_sifs = f(value)?,
        "tau_ack" => sim.energy.tau_ack = f(value)?,
        "tau_sens" => sim.energy.tau_sens = f(value)?,
        "coord_scheme" => {
            sim.energy.scheme = match value.to_ascii_uppercase().as_str() {
                "SA" => CoordScheme::Sa,
                "CSA" => CoordScheme::Csa,
                "FSA" => CoordScheme::Fsa,
                other => return Err(format!("unknown coord_scheme {other:?}")),
            }
        }
        "side_lengths" => {
            sim.side_lengths = value
                .split(',')
                .map(|s| f(s.trim()))
                .collect::<Result<_, _>>()?;
        }
        "n_nodes" => {
            sim.n_nodes = value
                .parse()
                .map_err(|e| format!("bad n_nodes {value:?}: {e}"))?
        }
        "n_trials" => {
            sim.n_trials = value
                .parse()
                .map_err(|e| format!("bad n_trials {value:?}: {e}"))?
        }
        "master_seed" => {
            sim.master_seed = value
                .parse()
                .map_err(|e| format!("bad master_seed {value:?}: {e}"))?
        }
        "schemes" => {
            sim.schemes = value
                .split(',')
                .map(|s| Scheme::parse(s).ok_or_else(|| format!("unknown scheme {:?}", s.trim())))
                .collect::<Result<_, _>>()?;
        }
        other => return Err(format!("unknown key {other:?}")),
    }
    Ok(())
}
