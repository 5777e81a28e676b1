//! Shadowed-Rician (SR) fading power statistics.
//!
//! The fading power |h|² is modelled as |Z + ξ|², where Z is a circular
//! complex Gaussian scatter component of mean power `2c` and ξ a
//! Nakagami-`q` line-of-sight amplitude with mean power Ω. Its density is
//!
//! ```text
//! f(x) = κ exp(-βx) ₁F₁(q; 1; δx)
//! κ = (2cq)^q / (2c (2cq + Ω)^q),  δ = Ω / (2c (2cq + Ω)),  β = 1 / (2c)
//! ```
//!
//! Applying Kummer's transformation gives the series
//! `f(x) = Σₖ Ψ(k) xᵏ exp(-(β - δ) x)` with
//! `Ψ(k) = (-1)ᵏ κ δᵏ (1 - q)ₖ / (k!)²`, which integrates term by term into
//! a CDF built from lower incomplete gamma functions. For integer `q` the
//! Pochhammer factor vanishes for k ≥ q and every series is finite.

pub mod special;

use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::error::{Error, Result};
use special::{ln_factorial, ln_hyp1f1, ln_lower_incomplete_gamma, NeumaierSum, SignedLog};

pub use special::{hyp1f1, ln_gamma, lower_incomplete_gamma};

/// Truncation policy for the infinite k-series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub k_max: usize,
    /// Relative size of a term, compared with the running sum, below which
    /// the series is considered converged.
    pub tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            k_max: 200,
            tol: 1e-10,
        }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if self.tol > 0.0 && self.tol.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "series tolerance must be positive, got {}",
                self.tol
            )))
        }
    }
}

/// Tracks two-in-a-row small terms for truncated series.
#[derive(Debug, Default)]
pub(crate) struct ConvergenceTracker {
    small_in_a_row: u32,
}

impl ConvergenceTracker {
    pub(crate) fn observe(&mut self, term: f64, sum: f64, tol: f64) -> bool {
        if term.abs() <= tol * sum.abs() || term.abs() < f64::MIN_POSITIVE {
            self.small_in_a_row += 1;
        } else {
            self.small_in_a_row = 0;
        }
        self.small_in_a_row >= 2
    }
}

/// Shadowed-Rician fading parameters `SR(c, q, Ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrParams {
    c: f64,
    q: f64,
    omega: f64,
}

impl SrParams {
    pub fn new(c: f64, q: f64, omega: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if !(c > 0.0 && c.is_finite()) {
            problems.push(format!("c must be > 0, got {c}"));
        }
        if !(q > 0.0 && q.is_finite()) {
            problems.push(format!("q must be > 0, got {q}"));
        }
        if !(omega >= 0.0 && omega.is_finite()) {
            problems.push(format!("omega must be >= 0, got {omega}"));
        }
        if !problems.is_empty() {
            return Err(Error::InvalidParameter(format!("SR{:?}: {}", (c, q, omega), problems.join(", "))));
        }
        let p = SrParams { c, q, omega };
        if p.beta() <= p.delta() {
            return Err(Error::InvalidParameter(format!(
                "SR{:?}: need beta > delta for the CDF series to converge (beta = {}, delta = {})",
                (c, q, omega),
                p.beta(),
                p.delta()
            )));
        }
        Ok(p)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn kappa(&self) -> f64 {
        self.ln_kappa().exp()
    }

    fn ln_kappa(&self) -> f64 {
        let two_c = 2.0 * self.c;
        self.q * (two_c * self.q).ln() - two_c.ln() - self.q * (two_c * self.q + self.omega).ln()
    }

    pub fn delta(&self) -> f64 {
        let two_c = 2.0 * self.c;
        self.omega / (two_c * (two_c * self.q + self.omega))
    }

    pub fn beta(&self) -> f64 {
        1.0 / (2.0 * self.c)
    }

    /// β - δ, the exponential decay rate of the Kummer-transformed series.
    /// Equals q / (2cq + Ω).
    pub fn decay(&self) -> f64 {
        self.q / (2.0 * self.c * self.q + self.omega)
    }

    /// E|h|² = 2c + Ω.
    pub fn mean_power(&self) -> f64 {
        2.0 * self.c + self.omega
    }

    /// `Some(n)` when q is a positive integer n, in which case Ψ(k) = 0 for k ≥ n.
    pub fn integer_order(&self) -> Option<usize> {
        (self.q == self.q.round() && self.q >= 1.0).then_some(self.q as usize)
    }

    /// Ψ(0), Ψ(1), ... as sign and log-magnitude. Ends after the last nonzero
    /// coefficient when the series is finite.
    pub(crate) fn series_coeffs(&self) -> SeriesCoeffs {
        SeriesCoeffs {
            k: 0,
            ln_kappa: self.ln_kappa(),
            ln_delta: self.delta().ln(),
            one_minus_q: 1.0 - self.q,
            pochhammer: SignedLog::from_f64(1.0),
            ln_k_factorial: 0.0,
        }
    }

    /// Ψ(k) = (-1)ᵏ κ δᵏ (1 - q)ₖ / (k!)².
    pub fn series_coeff(&self, k: usize) -> f64 {
        self.series_coeffs()
            .nth(k)
            .map(SignedLog::to_f64)
            .unwrap_or(0.0)
    }

    /// Density of |h|²; zero for negative x.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Ok(0.0);
        }
        let f = ln_hyp1f1(self.q, 1.0, self.delta() * x)?;
        Ok(f.sign * (self.ln_kappa() - self.beta() * x + f.ln_abs).exp())
    }

    /// CDF of |h|² from the incomplete-gamma series
    /// `F(x) = Σₖ Ψ(k) / (β-δ)^(k+1) · γ(k+1, (β-δ)x)`.
    pub fn cdf(&self, x: f64, ctrl: SeriesControl) -> Result<f64> {
        ctrl.validate()?;
        if x <= 0.0 {
            return Ok(0.0);
        }
        if x.is_infinite() {
            return Ok(1.0);
        }
        let decay = self.decay();
        let y = decay * x;
        let ln_decay = decay.ln();
        let mut sum = NeumaierSum::default();
        let mut tracker = ConvergenceTracker::default();
        let mut last_term = f64::NAN;
        for (k, psi) in self.series_coeffs().enumerate().take(ctrl.k_max + 1) {
            let kf = k as f64;
            let ln_term = psi.ln_abs - (kf + 1.0) * ln_decay + ln_lower_incomplete_gamma(kf + 1.0, y);
            let term = psi.sign * ln_term.exp();
            sum.add(term);
            last_term = term;
            if tracker.observe(term, sum.value(), ctrl.tol) {
                return Ok(sum.value().clamp(0.0, 1.0));
            }
        }
        if self.series_len().is_some_and(|n| n <= ctrl.k_max + 1) {
            return Ok(sum.value().clamp(0.0, 1.0));
        }
        Err(Error::TruncationNotConverged {
            k_max: ctrl.k_max,
            last_term,
        })
    }

    /// Number of nonzero series coefficients, when finite.
    pub(crate) fn series_len(&self) -> Option<usize> {
        if self.omega == 0.0 {
            Some(1)
        } else {
            self.integer_order()
        }
    }

    /// Moment-generating function in Laplace form, E[exp(-x|h|²)], x ≥ 0.
    pub fn mgf(&self, x: f64) -> f64 {
        let (c, q, omega) = (self.c, self.q, self.omega);
        let u = 1.0 + 2.0 * c * x;
        // (2cq+Ω)u - Ω = 2cq + 2cx(2cq+Ω)
        let base = 2.0 * c * q / (2.0 * c * q + 2.0 * c * x * (2.0 * c * q + omega));
        base.powf(q) * u.powf(q - 1.0)
    }

    pub fn sampler(&self) -> SrSampler {
        SrSampler::new(*self)
    }

    /// One fading power draw. Prefer [`SrParams::sampler`] in loops.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }
}

/// Iterator over Ψ(k) in sign/log form.
#[derive(Debug, Clone)]
pub(crate) struct SeriesCoeffs {
    k: usize,
    ln_kappa: f64,
    ln_delta: f64,
    one_minus_q: f64,
    /// (1 - q)ₖ
    pochhammer: SignedLog,
    ln_k_factorial: f64,
}

impl Iterator for SeriesCoeffs {
    type Item = SignedLog;

    fn next(&mut self) -> Option<SignedLog> {
        if self.pochhammer.is_zero() || (self.k > 0 && self.ln_delta == f64::NEG_INFINITY) {
            return None;
        }
        let k = self.k as f64;
        let sign = if self.k.is_multiple_of(2) { 1.0 } else { -1.0 } * self.pochhammer.sign;
        let ln_abs = self.ln_kappa
            + if self.k == 0 { 0.0 } else { k * self.ln_delta }
            + self.pochhammer.ln_abs
            - 2.0 * self.ln_k_factorial;
        let out = SignedLog { sign, ln_abs };

        let factor = SignedLog::from_f64(self.one_minus_q + k);
        self.pochhammer = if factor.is_zero() {
            SignedLog::ZERO
        } else {
            SignedLog {
                sign: self.pochhammer.sign * factor.sign,
                ln_abs: self.pochhammer.ln_abs + factor.ln_abs,
            }
        };
        self.k += 1;
        self.ln_k_factorial = ln_factorial(self.k);
        Some(out)
    }
}

/// Reusable SR fading sampler.
#[derive(Debug, Clone, Copy)]
pub struct SrSampler {
    scatter: Normal<f64>,
    los_power: Option<Gamma<f64>>,
}

impl SrSampler {
    pub fn new(params: SrParams) -> Self {
        // each quadrature of Z carries half the scatter power 2c
        let scatter = Normal::new(0.0, params.c.sqrt()).expect("c > 0 checked at construction");
        let los_power = (params.omega > 0.0).then(|| {
            Gamma::new(params.q, params.omega / params.q).expect("q > 0 and omega > 0")
        });
        SrSampler { scatter, los_power }
    }
}

impl Distribution<f64> for SrSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let xi = self.los_power.map_or(0.0, |g| g.sample(rng).sqrt());
        let re = self.scatter.sample(rng) + xi;
        let im = self.scatter.sample(rng);
        re * re + im * im
    }
}
