//! Special functions for the shadowed-Rician law: log-gamma, the lower
//! incomplete gamma function and Kummer's confluent hypergeometric ₁F₁.
//!
//! Everything is evaluated in log space where magnitudes can leave the f64
//! range (γ(k+1, x) ~ k! reaches 1e300 near k = 170).

use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_SERIES_TERMS: usize = 20_000;
const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln|Γ(x)|, Lanczos (g = 7) with reflection below 1/2.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, &c)| acc + c / (x + (i + 1) as f64));
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
}

/// ln(n!) for integer n; exact summation below 32, Lanczos above.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 32 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new(initial: f64) -> Self {
        NeumaierSum {
            sum: initial,
            compensation: 0.0,
        }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    fn scale(&mut self, k: f64) {
        self.sum *= k;
        self.compensation *= k;
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// ln γ(a, x) for a > 0, x > 0, where γ is the (unregularized) lower
/// incomplete gamma function. Returns -∞ at x = 0.
pub fn ln_lower_incomplete_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x.is_infinite() {
        return ln_gamma(a);
    }
    if x < a + 1.0 {
        // γ(a,x) = x^a e^{-x} Σ x^n / (a (a+1) ... (a+n))
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..MAX_SERIES_TERMS {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        a * x.ln() - x + sum.ln()
    } else {
        // Γ(a,x) by modified Lentz continued fraction, then γ = Γ(a) - Γ(a,x)
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_SERIES_TERMS {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                break;
            }
        }
        let ln_upper = -x + a * x.ln() + h.ln();
        let ln_full = ln_gamma(a);
        ln_full + (-(ln_upper - ln_full).exp()).ln_1p()
    }
}

/// γ(a, x) = ∫₀ˣ t^(a-1) e^(-t) dt.
pub fn lower_incomplete_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    ln_lower_incomplete_gamma(a, x).exp()
}

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.floor()
}

/// A real number as sign and log-magnitude. `sign == 0.0` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: f64,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0.0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            SignedLog::ZERO
        } else {
            SignedLog {
                sign: v.signum(),
                ln_abs: v.abs().ln(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0.0
    }

    pub fn to_f64(self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

/// Kummer series Σ (a)_n / (b)_n · xⁿ / n!, summed with periodic rescaling so
/// that arguments up to ~10³ do not overflow.
fn kummer_series(a: f64, b: f64, x: f64) -> Result<SignedLog> {
    let mut term = 1.0f64;
    let mut sum = NeumaierSum::new(1.0);
    let mut ln_scale = 0.0f64;
    const RESCALE: f64 = 1e250;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        if a + nf == 0.0 {
            // (a)_n vanishes from here on: polynomial case
            return Ok(signed_log_scaled(sum.value(), ln_scale));
        }
        let ratio = (a + nf) / (b + nf) * x / (nf + 1.0);
        term *= ratio;
        sum.add(term);
        if term.abs() > RESCALE {
            term /= RESCALE;
            sum.scale(1.0 / RESCALE);
            ln_scale += RESCALE.ln();
        }
        // every later ratio is at most rho, so the tail is bounded by a
        // geometric series
        let rho = x.abs() / (nf + 2.0) * ((a + nf + 1.0) / (b + nf + 1.0)).abs().max(1.0);
        if rho < 1.0 {
            let tail = term.abs() * rho / (1.0 - rho);
            if tail <= EPS * sum.value().abs() {
                return Ok(signed_log_scaled(sum.value(), ln_scale));
            }
        }
    }
    Err(Error::NonConvergence {
        function: "hyp1f1",
        terms: MAX_SERIES_TERMS,
    })
}

fn signed_log_scaled(v: f64, ln_scale: f64) -> SignedLog {
    let mut s = SignedLog::from_f64(v);
    s.ln_abs += ln_scale;
    s
}

/// ln of Kummer's ₁F₁(a; b; x) as sign and magnitude.
pub fn ln_hyp1f1(a: f64, b: f64, x: f64) -> Result<SignedLog> {
    if is_nonpositive_integer(b) {
        return Err(Error::InvalidParameter(format!(
            "hyp1f1: b = {b} is a pole (nonpositive integer)"
        )));
    }
    if !(a.is_finite() && b.is_finite() && x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "hyp1f1: non-finite argument ({a}, {b}, {x})"
        )));
    }
    if x == 0.0 {
        return Ok(SignedLog::from_f64(1.0));
    }
    if x > 0.0 || is_nonpositive_integer(a) {
        return kummer_series(a, b, x);
    }
    // Kummer's transformation keeps the argument positive:
    // ₁F₁(a; b; x) = eˣ ₁F₁(b - a; b; -x)
    let mut s = kummer_series(b - a, b, -x)?;
    s.ln_abs += x;
    Ok(s)
}

/// Confluent hypergeometric function of the first kind, ₁F₁(a; b; x).
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    ln_hyp1f1(a, b, x).map(SignedLog::to_f64)
}
