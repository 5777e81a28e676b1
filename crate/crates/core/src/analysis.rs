//! Closed-form outage probability.
//!
//! With every UAV at the common distance d₀ from the satellite,
//!
//! ```text
//! P_out ≈ Σₖ Ψ(k) Γ(k+1) / (β-δ)^(k+1) · Σₜ C(k+1, t) (-1)ᵗ exp(-s σ²) L_I(s)
//! s     = t ζₖ (β-δ) T d₀^α / (p_m D_m),   ζₖ = Γ(k+2)^(-1/(k+1))
//! L_I(s) = M₂(A1)^n₁ · exp(λ₃ V₁ (M₂(A2) - 1))
//! ```
//!
//! where M₂ averages the SR moment-generating function over the interferer
//! gain distribution. The approximation comes from bounding γ(k+1, x) by
//! Γ(k+1)(1 - exp(-ζₖ x))^(k+1); at k = 0 the bound is exact, so for q = 1
//! the result equals the true outage under the common-distance model.

use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::special::{ln_factorial, ln_gamma, NeumaierSum};
use crate::channel::{ConvergenceTracker, SeriesControl};
use crate::error::{Error, Result};
use crate::scenario::{Group, Scenario};
use crate::units::{db_to_linear, METERS_PER_KM};

/// ζₖ = Γ(k+2)^(-1/(k+1)).
pub fn zeta(k: usize) -> f64 {
    (-ln_gamma(k as f64 + 2.0) / (k as f64 + 1.0)).exp()
}

/// Laplace argument for term (k, t) of the outage series at linear
/// threshold `threshold`.
pub fn s_value(scn: &Scenario, threshold: f64, k: usize, t: usize) -> f64 {
    t as f64 * zeta(k) * s_unit(scn, threshold)
}

/// (β-δ) T d₀^α / (p_m D_m), the t = 1, ζ = 1 Laplace argument.
fn s_unit(scn: &Scenario, threshold: f64) -> f64 {
    scn.sr.decay() * threshold / (scn.path_gain() * scn.p_m * scn.beam.target_gain())
}

/// SR moment-generating function E[exp(-x|h|²)].
pub fn m1(scn: &Scenario, x: f64) -> f64 {
    scn.sr.mgf(x)
}

/// Per-interferer factor of the Laplace transform for `group`:
/// E_D[M₁(s p_l d₀^(-α) D)].
pub fn m2(scn: &Scenario, group: Group, s: f64) -> f64 {
    let scale = s * scn.group_power(group) * scn.path_gain();
    scn.beam.mean_gain_mixture(|gain| m1(scn, scale * gain))
}

/// Laplace transform of the aggregate interference, E[exp(-sI)].
pub fn laplace_interference(scn: &Scenario, s: f64) -> f64 {
    if s == 0.0 {
        return 1.0;
    }
    let n1 = scn.a1_interferers() as i32;
    let a2_mean = scn.topology.point_density() * scn.region().volume();
    m2(scn, Group::A1, s).powi(n1) * (a2_mean * (m2(scn, Group::A2, s) - 1.0)).exp()
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(threshold))
    }
}

/// Outage probability P(SINR ≤ T) at linear threshold `threshold`.
pub fn outage_probability(scn: &Scenario, threshold: f64, ctrl: SeriesControl) -> Result<f64> {
    scn.validate()?;
    outage_series(scn, threshold, ctrl, |s| laplace_interference(scn, s))
}

/// The outage double series with the Laplace transform supplied by the
/// caller.
pub(crate) fn outage_series(
    scn: &Scenario,
    threshold: f64,
    ctrl: SeriesControl,
    laplace: impl Fn(f64) -> f64,
) -> Result<f64> {
    check_threshold(threshold)?;
    ctrl.validate()?;
    let unit = s_unit(scn, threshold);
    let ln_decay = scn.sr.decay().ln();
    let mut total = NeumaierSum::default();
    let mut tracker = ConvergenceTracker::default();
    let mut last_term = f64::NAN;
    for (k, psi) in scn.sr.series_coeffs().enumerate().take(ctrl.k_max + 1) {
        let ln_weight = psi.ln_abs + ln_factorial(k) - (k as f64 + 1.0) * ln_decay;
        let step = zeta(k) * unit;
        // Σₜ C(k+1, t) (-1)ᵗ E[exp(-s(I + σ²))]; alternating, hence compensated
        let mut inner = NeumaierSum::default();
        let mut binom = 1.0f64;
        for t in 0..=k + 1 {
            let s = t as f64 * step;
            let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
            inner.add(sign * binom * (-s * scn.noise_power).exp() * laplace(s));
            binom = binom * (k + 1 - t) as f64 / (t + 1) as f64;
        }
        let term = psi.sign * ln_weight.exp() * inner.value();
        total.add(term);
        last_term = term;
        if tracker.observe(term, total.value(), ctrl.tol) {
            return Ok(total.value().clamp(0.0, 1.0));
        }
    }
    if scn.sr.series_len().is_some_and(|n| n <= ctrl.k_max + 1) {
        return Ok(total.value().clamp(0.0, 1.0));
    }
    Err(Error::TruncationNotConverged {
        k_max: ctrl.k_max,
        last_term,
    })
}

/// Scenario quantity varied by a sweep. Values are in SI units (threshold
/// linear, power in W, radius in m, density in m⁻³).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    Threshold,
    TargetPower,
    Radius,
    Channels,
    CandidateDensity,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [
        SweepParam::Threshold,
        SweepParam::TargetPower,
        SweepParam::Radius,
        SweepParam::Channels,
        SweepParam::CandidateDensity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Threshold => "T",
            SweepParam::TargetPower => "p_m",
            SweepParam::Radius => "R1",
            SweepParam::Channels => "K",
            SweepParam::CandidateDensity => "lambda1",
        }
    }

    /// Converts a value in configuration units (dB, dBW, km, count, m⁻³)
    /// into the SI value [`SweepParam::apply`] expects.
    pub fn from_config_units(self, value: f64) -> f64 {
        match self {
            SweepParam::Threshold | SweepParam::TargetPower => db_to_linear(value),
            SweepParam::Radius => value * METERS_PER_KM,
            SweepParam::Channels | SweepParam::CandidateDensity => value,
        }
    }

    /// Writes `value` into the scenario (or threshold) and revalidates.
    pub fn apply(self, scn: &mut Scenario, threshold: &mut f64, value: f64) -> Result<()> {
        match self {
            SweepParam::Threshold => {
                check_threshold(value)?;
                *threshold = value;
            }
            SweepParam::TargetPower => scn.p_m = value,
            SweepParam::Radius => scn.topology.region.radius = value,
            SweepParam::Channels => {
                if !(value >= 1.0 && value == value.round()) {
                    return Err(Error::InvalidParameter(format!(
                        "K must be a positive integer, got {value}"
                    )));
                }
                scn.k_channels = value as usize;
            }
            SweepParam::CandidateDensity => scn.topology.lambda1 = value,
        }
        scn.validate()
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown sweep parameter '{s}', expected one of T, p_m, R1, K, lambda1"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    /// SI values.
    pub values: Vec<f64>,
}

/// One outage evaluation per sweep value, everything else held fixed.
/// Returns (value, P_out) pairs in input order.
pub fn outage_curve(
    scn: &Scenario,
    threshold: f64,
    sweep: &Sweep,
    ctrl: SeriesControl,
) -> Result<Vec<(f64, f64)>> {
    sweep
        .values
        .par_iter()
        .map(|&v| {
            let mut s = *scn;
            let mut t = threshold;
            sweep.param.apply(&mut s, &mut t, v)?;
            outage_probability(&s, t, ctrl).map(|p| (v, p))
        })
        .collect()
}
