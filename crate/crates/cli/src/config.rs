//! Flat `key = value` run configuration.
//!
//! Values are written in human units (dB, dBW, dBm, dBi, km) and converted
//! to SI exactly once, here. Omitted keys take the default scenario.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use ntn_core::montecarlo::{A2ChannelPolicy, DistanceMode};
use ntn_core::units::{db_to_linear, dbm_to_watts, METERS_PER_KM};
use ntn_core::{
    BeamPattern, Group, MhccpConfig, Scenario, SeriesControl, SnapshotOptions, SrParams, Sweep,
    SweepParam,
};

use crate::CliError;

/// Which estimators to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    MonteCarlo,
    Both,
}

impl Mode {
    pub fn analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }

    pub fn monte_carlo(self) -> bool {
        matches!(self, Mode::MonteCarlo | Mode::Both)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Ok(Mode::Analytic),
            "montecarlo" | "monte-carlo" | "mc" => Ok(Mode::MonteCarlo),
            "both" => Ok(Mode::Both),
            other => Err(format!("unknown mode '{other}', expected analytic, montecarlo or both")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Analytic => "analytic",
            Mode::MonteCarlo => "montecarlo",
            Mode::Both => "both",
        })
    }
}

fn parse_distance_mode(s: &str) -> Result<DistanceMode, String> {
    match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
        "common-d0" => Ok(DistanceMode::CommonD0),
        "exact-geometry" => Ok(DistanceMode::ExactGeometry),
        other => Err(format!("unknown distance mode '{other}', expected common-d0 or exact-geometry")),
    }
}

fn parse_policy(s: &str) -> Result<A2ChannelPolicy, String> {
    match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
        "all-on-channel" => Ok(A2ChannelPolicy::AllOnChannel),
        "per-cluster-share" => Ok(A2ChannelPolicy::PerClusterShare),
        other => Err(format!(
            "unknown A2 channel policy '{other}', expected all-on-channel or per-cluster-share"
        )),
    }
}

/// Every accepted key with its default in configuration units. Keys marked
/// `true` are not fixed by the reference system and are reported as assumed
/// when left at their default.
pub const KEYS: &[(&str, &str, bool)] = &[
    ("d0_km", "300", false),
    ("R1_km", "10", false),
    ("D_min_km", "1", false),
    ("p1_dBW", "20", false),
    ("p2_dBW", "19", false),
    ("p_m_dBW", "20", true),
    ("lambda1", "1e-11", false),
    ("sr_c", "0.158", false),
    ("sr_q", "1", false),
    ("sr_omega", "0.1", false),
    ("alpha", "2", false),
    ("T_dB", "-18", false),
    ("noise_dBm", "-160", false),
    ("bandwidth_hz", "1", true),
    ("G_t_dBi", "10", true),
    ("g_t_dBi", "-10", true),
    ("G_r_dBi", "30", true),
    ("theta_rad", "0.5235987755982988", true),
    ("N1", "40", true),
    ("K", "4", true),
    ("c_bar", "5", true),
    ("target_group", "A1", true),
    ("mode", "both", false),
    ("n_iter", "50000", false),
    ("seed", "1", false),
    ("k_max", "200", false),
    ("tol", "1e-10", false),
    ("distance_mode", "common-d0", false),
    ("a2_channel_policy", "all-on-channel", false),
    ("satellite_offset_km", "", false),
    ("sweep_param", "", false),
    ("sweep_values", "", false),
];

/// A fully converted and validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// Linear SINR threshold.
    pub threshold: f64,
    pub mode: Mode,
    /// Sweep values are SI; `sweep_display` keeps them in config units.
    pub sweep: Option<Sweep>,
    pub sweep_display: Vec<f64>,
    pub n_iter: u64,
    pub seed: u64,
    pub ctrl: SeriesControl,
    pub snapshot: SnapshotOptions,
    /// Effective values in config units, in schema order, with whether each
    /// is an assumed default.
    pub echo: Vec<(&'static str, String, bool)>,
}

/// Raw `key -> (line, value)` map, before conversion.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: HashMap<&'static str, (usize, String)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(CliError::parse(line_no, body, "expected `key = value`"));
            };
            raw.set_at(line_no, key.trim(), value.trim())?;
        }
        Ok(raw)
    }

    /// Sets `key`, as if from a command-line override (line 0).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let canonical = canonical_key(key).ok_or_else(|| CliError::parse(0, key, "unknown key"))?;
        self.entries.insert(canonical, (0, value.trim().to_string()));
        Ok(())
    }

    fn set_at(&mut self, line: usize, key: &str, value: &str) -> Result<(), CliError> {
        let canonical = canonical_key(key).ok_or_else(|| CliError::parse(line, key, "unknown key"))?;
        if let Some((first, _)) = self.entries.get(canonical) {
            return Err(CliError::parse(line, key, format!("duplicate key, first set on line {first}")));
        }
        self.entries.insert(canonical, (line, value.to_string()));
        Ok(())
    }

    fn get(&self, key: &'static str) -> (usize, &str, bool) {
        match self.entries.get(key) {
            Some((line, v)) => (*line, v.as_str(), true),
            None => {
                let default = KEYS.iter().find(|k| k.0 == key).map(|k| k.1).unwrap_or("");
                (0, default, false)
            }
        }
    }

    fn value<T: FromStr>(&self, key: &'static str) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        let (line, v, _) = self.get(key);
        v.parse::<T>()
            .map_err(|e| CliError::parse(line, key, format!("cannot parse '{v}': {e}")))
    }

    fn with<T>(&self, key: &'static str, f: impl Fn(&str) -> Result<T, String>) -> Result<T, CliError> {
        let (line, v, _) = self.get(key);
        f(v).map_err(|e| CliError::parse(line, key, e))
    }

    /// Converts to SI and validates. Validation failures are collected and
    /// reported together.
    pub fn build(&self) -> Result<RunConfig, CliError> {
        let f = |k| self.value::<f64>(k);
        let sr_c = f("sr_c")?;
        let sr_q = f("sr_q")?;
        let sr_omega = f("sr_omega")?;
        let threshold_db = f("T_dB")?;
        let n1_total = self.value::<usize>("N1")?;
        let k_channels = self.value::<usize>("K")?;
        let mode = self.with("mode", |s| s.parse::<Mode>())?;
        let target_group = self.with("target_group", |s| s.parse::<Group>().map_err(|e| e.to_string()))?;
        let n_iter = self.value::<u64>("n_iter")?;
        let seed = self.value::<u64>("seed")?;
        let k_max = self.value::<usize>("k_max")?;
        let tol = f("tol")?;
        let distance_mode = self.with("distance_mode", parse_distance_mode)?;
        let a2_channel_policy = self.with("a2_channel_policy", parse_policy)?;
        let satellite_offset = match self.get("satellite_offset_km").1 {
            "" => None,
            _ => Some(f("satellite_offset_km")? * METERS_PER_KM),
        };
        let sweep_param = match self.get("sweep_param").1 {
            "" => None,
            _ => Some(self.with("sweep_param", |s| s.parse::<SweepParam>().map_err(|e| e.to_string()))?),
        };
        let sweep_display = self.with("sweep_values", parse_list)?;

        let mut problems = Vec::new();
        let sr = match SrParams::new(sr_c, sr_q, sr_omega) {
            Ok(sr) => Some(sr),
            Err(e) => {
                problems.push(e.to_string());
                None
            }
        };
        let scenario = Scenario {
            // placeholder fading keeps the remaining checks running
            sr: sr.unwrap_or_else(|| Scenario::table_defaults().sr),
            beam: BeamPattern {
                g_main_tx: db_to_linear(f("G_t_dBi")?),
                g_side_tx: db_to_linear(f("g_t_dBi")?),
                g_main_rx: db_to_linear(f("G_r_dBi")?),
                theta: f("theta_rad")?,
            },
            topology: MhccpConfig {
                lambda1: f("lambda1")?,
                d_min: f("D_min_km")? * METERS_PER_KM,
                c_bar: f("c_bar")?,
                region: ntn_core::Ball::centered(f("R1_km")? * METERS_PER_KM),
            },
            n1_total,
            k_channels,
            p_m: db_to_linear(f("p_m_dBW")?),
            p1: db_to_linear(f("p1_dBW")?),
            p2: db_to_linear(f("p2_dBW")?),
            alpha: f("alpha")?,
            d0: f("d0_km")? * METERS_PER_KM,
            noise_power: dbm_to_watts(f("noise_dBm")?) * f("bandwidth_hz")?,
            target_group,
        };
        problems.extend(scenario.violations());
        let bandwidth = f("bandwidth_hz")?;
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            problems.push(format!("bandwidth_hz must be > 0, got {bandwidth}"));
        }
        let threshold = db_to_linear(threshold_db);
        if !(threshold > 0.0 && threshold.is_finite()) {
            problems.push(format!("T_dB must give a finite positive threshold, got {threshold_db}"));
        }
        let ctrl = SeriesControl { k_max, tol };
        if let Err(e) = ctrl.validate() {
            problems.push(e.to_string());
        }
        if mode.monte_carlo() && n_iter == 0 {
            problems.push("n_iter must be >= 1 when Monte Carlo is requested".into());
        }
        if let Some(offset) = satellite_offset {
            if !(offset > 0.0 && offset.is_finite()) {
                problems.push(format!("satellite_offset_km must be > 0, got {}", offset / METERS_PER_KM));
            }
        }
        let sweep = match (sweep_param, sweep_display.is_empty()) {
            (None, true) => None,
            (None, false) => {
                problems.push("sweep_values given without sweep_param".into());
                None
            }
            (Some(p), true) => {
                problems.push(format!("sweep_param = {} needs at least one sweep value", p.name()));
                None
            }
            (Some(param), false) => {
                let values: Vec<f64> = sweep_display.iter().map(|&v| param.from_config_units(v)).collect();
                if problems.is_empty() {
                    for (&shown, &v) in sweep_display.iter().zip(&values) {
                        let (mut s, mut t) = (scenario, threshold);
                        if let Err(e) = param.apply(&mut s, &mut t, v) {
                            problems.push(format!("sweep {} = {shown}: {e}", param.name()));
                        }
                    }
                }
                Some(Sweep { param, values })
            }
        };
        if !problems.is_empty() {
            return Err(CliError::Validation(problems));
        }

        let echo = KEYS
            .iter()
            .map(|&(key, _, assumed)| {
                let (_, v, explicit) = self.get(key);
                (key, v.to_string(), assumed && !explicit)
            })
            .collect();
        Ok(RunConfig {
            scenario,
            threshold,
            mode,
            sweep,
            sweep_display,
            n_iter,
            seed,
            ctrl,
            snapshot: SnapshotOptions {
                distance_mode,
                a2_channel_policy,
                satellite_offset,
            },
            echo,
        })
    }
}

fn canonical_key(key: &str) -> Option<&'static str> {
    KEYS.iter().map(|k| k.0).find(|&k| k == key)
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse::<f64>().map_err(|e| format!("cannot parse '{v}': {e}")))
        .collect()
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    RawConfig::parse(text)?.build()
}
