//! Full system configuration in linear SI units.

use std::f64::consts::PI;
use std::fmt;

use crate::antenna::BeamPattern;
use crate::channel::SrParams;
use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::pointprocess::MhccpConfig;
use crate::units::{db_to_linear, dbm_to_watts, METERS_PER_KM};

/// Which UAV group a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    /// Binomial point process, fixed size N₁.
    A1,
    /// Matérn hard-core cluster process.
    A2,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::A1 => "A1",
            Group::A2 => "A2",
        })
    }
}

impl std::str::FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Ok(Group::A1),
            "A2" => Ok(Group::A2),
            other => Err(format!("unknown group '{other}', expected A1 or A2")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub sr: SrParams,
    pub beam: BeamPattern,
    /// Group A2 process; its region is the deployment ball shared by both groups.
    pub topology: MhccpConfig,
    /// N₁, size of group A1.
    pub n1_total: usize,
    /// K, number of orthogonal FDMA channels.
    pub k_channels: usize,
    /// Target transmit power, W.
    pub p_m: f64,
    /// A1 transmit power, W.
    pub p1: f64,
    /// A2 transmit power, W.
    pub p2: f64,
    pub alpha: f64,
    /// Common UAV-to-satellite distance, m.
    pub d0: f64,
    /// Noise power, W.
    pub noise_power: f64,
    pub target_group: Group,
}

impl Scenario {
    /// Default system: d₀ = 300 km, R₁ = 10 km, D_min = 1 km, p₁ = 20 dBW,
    /// p₂ = 19 dBW, λ₁ = 1e-11 m⁻³, SR(0.158, 1, 0.1), α = 2, σ² = -160 dBm;
    /// plus G_t = 10 dBi, g_t = -10 dBi, G_r = 30 dBi, θ = π/6, N₁ = 40,
    /// K = 4, c̄ = 5, p_m = 20 dBW and a target in A1.
    pub fn table_defaults() -> Scenario {
        Scenario {
            sr: SrParams::new(0.158, 1.0, 0.1).expect("valid default fading"),
            beam: BeamPattern {
                g_main_tx: db_to_linear(10.0),
                g_side_tx: db_to_linear(-10.0),
                g_main_rx: db_to_linear(30.0),
                theta: PI / 6.0,
            },
            topology: MhccpConfig {
                lambda1: 1e-11,
                d_min: 1.0 * METERS_PER_KM,
                c_bar: 5.0,
                region: Ball::centered(10.0 * METERS_PER_KM),
            },
            n1_total: 40,
            k_channels: 4,
            p_m: db_to_linear(20.0),
            p1: db_to_linear(20.0),
            p2: db_to_linear(19.0),
            alpha: 2.0,
            d0: 300.0 * METERS_PER_KM,
            noise_power: dbm_to_watts(-160.0),
            target_group: Group::A1,
        }
    }

    pub fn region(&self) -> Ball {
        self.topology.region
    }

    /// Number of A1 nodes on the observed channel, N₁/K.
    pub fn a1_per_channel(&self) -> usize {
        self.n1_total / self.k_channels
    }

    /// Number of A1 interferers seen by the target.
    pub fn a1_interferers(&self) -> usize {
        match self.target_group {
            Group::A1 => self.a1_per_channel().saturating_sub(1),
            Group::A2 => self.a1_per_channel(),
        }
    }

    /// d₀^(-α).
    pub fn path_gain(&self) -> f64 {
        self.d0.powf(-self.alpha)
    }

    pub fn group_power(&self, group: Group) -> f64 {
        match group {
            Group::A1 => self.p1,
            Group::A2 => self.p2,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        for (name, value) in [("p_m", self.p_m), ("p1", self.p1), ("p2", self.p2)] {
            if !(value > 0.0 && value.is_finite()) {
                v.push(format!("{name} must be > 0, got {value}"));
            }
        }
        if !(self.alpha >= 2.0 && self.alpha.is_finite()) {
            v.push(format!("alpha must be >= 2, got {}", self.alpha));
        }
        if !(self.d0 > 0.0 && self.d0.is_finite()) {
            v.push(format!("d0 must be > 0, got {}", self.d0));
        }
        if !(self.noise_power >= 0.0 && self.noise_power.is_finite()) {
            v.push(format!("noise power must be >= 0, got {}", self.noise_power));
        }
        if self.k_channels == 0 {
            v.push("K must be >= 1".to_string());
        } else if !self.n1_total.is_multiple_of(self.k_channels) {
            v.push(format!(
                "N1 = {} must be divisible by K = {}",
                self.n1_total, self.k_channels
            ));
        }
        if self.k_channels > self.n1_total && self.n1_total > 0 {
            v.push(format!("K = {} exceeds N1 = {}", self.k_channels, self.n1_total));
        }
        if self.target_group == Group::A1 && self.k_channels > 0 && self.a1_per_channel() == 0 {
            v.push("target in A1 needs at least one A1 node per channel".to_string());
        }
        v.extend(self.beam.violations());
        v.extend(self.topology.violations());
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidScenario(v))
        }
    }
}
