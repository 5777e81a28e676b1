//! Sector antenna gains.
//!
//! The target link always uses main lobes at both ends, D_m = G_t G_r. An
//! interfering transmitter points its main lobe at the satellite with
//! probability θ/2π and a side lobe otherwise; the satellite always receives
//! through its main lobe.

use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{Error, Result};

/// Linear gains and main-lobe width in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamPattern {
    pub g_main_tx: f64,
    pub g_side_tx: f64,
    pub g_main_rx: f64,
    pub theta: f64,
}

impl BeamPattern {
    pub fn new(g_main_tx: f64, g_side_tx: f64, g_main_rx: f64, theta: f64) -> Result<Self> {
        let p = BeamPattern {
            g_main_tx,
            g_side_tx,
            g_main_rx,
            theta,
        };
        let v = p.violations();
        if v.is_empty() {
            Ok(p)
        } else {
            Err(Error::InvalidParameter(v.join(", ")))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.g_side_tx > 0.0 && self.g_side_tx <= self.g_main_tx && self.g_main_tx.is_finite()) {
            v.push(format!(
                "need 0 < side-lobe gain <= main-lobe gain, got g_t = {}, G_t = {}",
                self.g_side_tx, self.g_main_tx
            ));
        }
        if !(self.g_main_rx > 0.0 && self.g_main_rx.is_finite()) {
            v.push(format!("receive gain must be > 0, got {}", self.g_main_rx));
        }
        if !(0.0..=TAU).contains(&self.theta) {
            v.push(format!("main-lobe width must lie in [0, 2π], got {}", self.theta));
        }
        v
    }

    /// P(interferer main lobe hits the satellite) = θ/2π.
    pub fn main_lobe_probability(&self) -> f64 {
        self.theta / TAU
    }

    pub fn main_gain(&self) -> f64 {
        self.g_main_tx * self.g_main_rx
    }

    pub fn side_gain(&self) -> f64 {
        self.g_side_tx * self.g_main_rx
    }

    pub fn target_gain(&self) -> f64 {
        self.main_gain()
    }

    pub fn sample_interferer_gain<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if rng.random::<f64>() < self.main_lobe_probability() {
            self.main_gain()
        } else {
            self.side_gain()
        }
    }

    /// E[f(D)] over the interferer gain distribution.
    pub fn mean_gain_mixture(&self, f: impl Fn(f64) -> f64) -> f64 {
        let p = self.main_lobe_probability();
        f(self.main_gain()) * p + f(self.side_gain()) * (1.0 - p)
    }
}
