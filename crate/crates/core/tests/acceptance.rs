//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::time::Instant;

use ntn_core::analysis::{outage_curve, outage_probability, zeta, Sweep, SweepParam};
use ntn_core::channel::{hyp1f1, ln_gamma, lower_incomplete_gamma, SeriesControl, SrParams};
use ntn_core::geometry::{distance, Ball};
use ntn_core::montecarlo::{
    estimate_laplace, estimate_outage, estimate_outage_multi, replication_rng, SnapshotOptions,
};
use ntn_core::pointprocess::{density_lambda2, density_lambda3, lambda3_limit, sample_mhccp, MhccpConfig};
use ntn_core::units::db_to_linear;
use ntn_core::{laplace_interference, Scenario};
use rand_distr::Distribution;
use rayon::prelude::*;

use common::{hyp1f1_rational, integrate_panels, ks_critical_value, ks_statistic, mean_var};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

type Check = fn() -> Outcome;

const SEED: u64 = 20_240_601;

fn ctrl() -> SeriesControl {
    SeriesControl::default()
}

fn cross_validation() -> Outcome {
    let scn = Scenario::table_defaults();
    assert_eq!(scn.sr.q(), 1.0);
    let t_db = [-30.0, -25.0, -20.0, -18.0, -15.0, -10.0];
    let thresholds: Vec<f64> = t_db.iter().map(|&t| db_to_linear(t)).collect();
    let mc = estimate_outage_multi(&scn, &thresholds, 50_000, SEED, &SnapshotOptions::default()).unwrap();
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for ((&t, &th), est) in t_db.iter().zip(&thresholds).zip(&mc) {
        let p = outage_probability(&scn, th, ctrl()).unwrap();
        let gap = (p - est.p_hat).abs();
        worst = worst.max(gap);
        rows.push(format!("T={t}dB analytic={p:.4} mc={:.4}", est.p_hat));
    }
    Outcome::new(worst <= 0.01, format!("max |gap| = {worst:.4} (tol 0.01); {}", rows.join(", ")))
}

fn density_formulas() -> Outcome {
    let radius = 10e3;
    let d_min = 1e3;
    let c_bar = 5.0;
    let parent_r = radius - d_min;
    let child_r = radius - 1.5 * d_min;
    let parent_vol = Ball::centered(parent_r).volume();
    let child_vol = Ball::centered(child_r).volume();
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for (j, &lambda1) in [1e-11, 1e-10, 1e-9].iter().enumerate() {
        let cfg = MhccpConfig {
            lambda1,
            d_min,
            c_bar,
            region: Ball::centered(radius),
        };
        let n = 10_000u64;
        let (parents, children) = (0..n)
            .into_par_iter()
            .map(|i| {
                let s = sample_mhccp(&mut replication_rng(SEED + j as u64, i), &cfg);
                let p = s.parents.iter().filter(|p| p.norm() <= parent_r).count() as u64;
                let c = s.points.iter().filter(|p| p.position.norm() <= child_r).count() as u64;
                (p, c)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        let l2 = parents as f64 / (n as f64 * parent_vol);
        let l3 = children as f64 / (n as f64 * child_vol);
        let e2 = (l2 / density_lambda2(lambda1, d_min) - 1.0).abs();
        let e3 = (l3 / density_lambda3(lambda1, d_min, c_bar) - 1.0).abs();
        worst = worst.max(e2).max(e3);
        rows.push(format!("lambda1={lambda1:e}: lambda2 err {:.2}%, lambda3 err {:.2}%", 100.0 * e2, 100.0 * e3));
    }
    Outcome::new(worst <= 0.03, format!("max rel err {:.2}% (tol 3%); {}", 100.0 * worst, rows.join(", ")))
}

fn saturation() -> Outcome {
    let l3 = density_lambda3(1e-8, 1e3, 5.0);
    let limit = lambda3_limit(1e3, 5.0);
    let scn = Scenario::table_defaults();
    let sweep = Sweep {
        param: SweepParam::CandidateDensity,
        values: vec![1e-9, 1e-8],
    };
    let curve = outage_curve(&scn, db_to_linear(-18.0), &sweep, ctrl()).unwrap();
    let gap = (curve[1].1 - curve[0].1).abs();
    Outcome::new(
        l3 >= 0.99 * limit && gap < 0.01,
        format!("lambda3(1e-8)/limit = {:.5} (need >= 0.99); |P(1e-8) - P(1e-9)| = {gap:.2e} (need < 0.01)", l3 / limit),
    )
}

fn hard_core_invariants() -> Outcome {
    let mut violations = 0u64;
    let mut realizations = 0u64;
    for (j, &lambda1) in [1e-11, 1e-9].iter().enumerate() {
        let cfg = MhccpConfig {
            lambda1,
            d_min: 1e3,
            c_bar: 5.0,
            region: Ball::centered(10e3),
        };
        violations += (0..1000u64)
            .into_par_iter()
            .map(|i| {
                let s = sample_mhccp(&mut replication_rng(SEED + 10 + j as u64, i), &cfg);
                let mut v = 0u64;
                for (a, &pa) in s.parents.iter().enumerate() {
                    v += s.parents[a + 1..].iter().filter(|&&pb| distance(pa, pb) < cfg.d_min).count() as u64;
                }
                v += s
                    .points
                    .iter()
                    .filter(|p| distance(p.position, s.parents[p.parent.unwrap()]) > cfg.d_min / 2.0)
                    .count() as u64;
                v
            })
            .sum::<u64>();
        realizations += 1000;
    }
    Outcome::new(violations == 0, format!("{violations} violations over {realizations} realizations (lambda1 = 1e-11 and 1e-9)"))
}

fn sr_fading_law() -> Outcome {
    let n = 100_000usize;
    let crit = ks_critical_value(n, 0.01);
    let mut pass = true;
    let mut rows = Vec::new();
    for (j, &(c, q, omega)) in [(0.158, 1.0, 0.1), (0.126, 5.0, 0.251), (0.063, 2.0, 0.0005)].iter().enumerate() {
        let sr = SrParams::new(c, q, omega).unwrap();
        let mut rng = replication_rng(SEED + 20, j as u64);
        let mut draws: Vec<f64> = (0..n).map(|_| sr.sample(&mut rng)).collect();
        // the mean gets its own 10⁶ draws: at 10⁵ its standard error is ~0.3%
        let sampler = sr.sampler();
        let means: Vec<f64> = (0..10u64)
            .into_par_iter()
            .map(|b| {
                let mut r = replication_rng(SEED + 21 + j as u64, b);
                let batch: Vec<f64> = (0..n).map(|_| sampler.sample(&mut r)).collect();
                mean_var(&batch).0
            })
            .collect();
        let (mean, _) = mean_var(&means);
        let mean_err = (mean / sr.mean_power() - 1.0).abs();
        let d = ks_statistic(&mut draws, |x| sr.cdf(x, ctrl()).unwrap());
        let upper = 80.0 * sr.mean_power();
        let pdf = |x: f64| sr.pdf(x).unwrap();
        let total = integrate_panels(&pdf, 0.0, upper, 400);
        let mass_err = (total - 1.0).abs();
        pass &= d <= crit && mean_err <= 0.005 && mass_err <= 1e-6;
        rows.push(format!(
            "SR({c},{q},{omega}): D={d:.5} (crit {crit:.5}), mean err {:.3}%, |int pdf - 1| = {mass_err:.1e}",
            100.0 * mean_err
        ));
    }
    Outcome::new(pass, rows.join("; "))
}

fn laplace_oracle() -> Outcome {
    let scn = Scenario::table_defaults();
    let grid = [1e3, 10f64.powf(3.5), 1e4];
    let mc = estimate_laplace(&scn, &grid, 50_000, SEED + 30, &SnapshotOptions::default()).unwrap();
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for (&s, &emp) in grid.iter().zip(&mc) {
        let l = laplace_interference(&scn, s);
        let err = (emp / l - 1.0).abs();
        worst = worst.max(err);
        rows.push(format!("s={s:.3e}: analytic {l:.5} empirical {emp:.5}"));
    }
    Outcome::new(worst <= 0.015, format!("max rel err {:.3}% (tol 1.5%); {}", 100.0 * worst, rows.join(", ")))
}

/// Counts adjacent pairs that break the expected ordering.
fn trend_violations(curve: &[(f64, f64)], nondecreasing: bool) -> usize {
    curve
        .windows(2)
        .filter(|w| {
            let (a, b) = (w[0].1, w[1].1);
            if nondecreasing {
                b < a - 1e-12
            } else {
                b > a + 1e-12
            }
        })
        .count()
}

fn trend_suite() -> Outcome {
    let scn = Scenario::table_defaults();
    let threshold = db_to_linear(-18.0);
    let cases: [(SweepParam, Vec<f64>, bool); 5] = [
        (SweepParam::Threshold, (-30..=-5).map(|t| t as f64).collect(), true),
        (SweepParam::TargetPower, (10..=30).map(|p| p as f64).collect(), false),
        (SweepParam::Radius, vec![5.0, 10.0, 15.0], true),
        (SweepParam::Channels, vec![1.0, 2.0, 4.0, 8.0], false),
        (SweepParam::CandidateDensity, vec![1e-11, 1e-10, 1e-9, 1e-8], true),
    ];
    let mut total = 0;
    let mut rows = Vec::new();
    for (param, values, nondecreasing) in cases {
        let sweep = Sweep {
            param,
            values: values.iter().map(|&v| param.from_config_units(v)).collect(),
        };
        let curve = outage_curve(&scn, threshold, &sweep, ctrl()).unwrap();
        let v = trend_violations(&curve, nondecreasing);
        total += v;
        let ends = (curve[0].1, curve[curve.len() - 1].1);
        rows.push(format!("{}: {v} violations ({:.4} -> {:.4})", param.name(), ends.0, ends.1));
    }
    Outcome::new(total == 0, rows.join(", "))
}

fn special_functions() -> Outcome {
    let mut worst_h = 0.0f64;
    // (a, b, x) as exact fractions
    let h_grid = [
        ((1, 3), (1, 1), (7, 1)),
        ((1, 2), (1, 1), (-3, 2)),
        ((1, 1), (1, 1), (25, 1)),
        ((2, 1), (1, 1), (1, 2)),
        ((5, 2), (1, 1), (3, 1)),
        ((5, 1), (1, 1), (-4, 1)),
        ((7, 2), (3, 2), (-4, 1)),
        ((-3, 1), (1, 1), (5, 2)),
        ((3, 1), (1, 1), (25, 1)),
        ((4, 1), (1, 1), (33, 10)),
    ];
    for ((an, ad), (bn, bd), (xn, xd)) in h_grid {
        let want = hyp1f1_rational((an, ad), (bn, bd), (xn, xd), 500);
        let got = hyp1f1(an as f64 / ad as f64, bn as f64 / bd as f64, xn as f64 / xd as f64).unwrap();
        worst_h = worst_h.max(((got - want) / want).abs());
    }
    let mut worst_g = 0.0f64;
    for &a in &[0.5, 1.0, 2.0, 3.0, 5.5, 11.0] {
        for &x in &[0.05f64, 0.7, 2.0, 6.0, 15.0, 40.0] {
            let want = if a >= 1.0 {
                integrate_panels(&|t: f64| t.powf(a - 1.0) * (-t).exp(), 0.0, x, 128)
            } else {
                integrate_panels(&|u: f64| (-(u.powf(1.0 / a))).exp() / a, 0.0, x.powf(a), 128)
            };
            worst_g = worst_g.max((lower_incomplete_gamma(a, x) / want - 1.0).abs());
        }
    }
    let accurate = worst_h <= 1e-9 && worst_g <= 1e-9;

    // γ(k+1, x) ≤ Γ(k+1)(1 - e^{-ζx})^{k+1}
    let mut stated_violations = 0;
    let mut reverse_violations = 0;
    let mut checked = 0;
    for k in 1..=10usize {
        let a = k as f64 + 1.0;
        let full = ln_gamma(a).exp();
        for i in 0..=80 {
            let x = 10f64.powf(-3.0 + i as f64 * 0.05);
            let g = lower_incomplete_gamma(a, x);
            let bound = full * (-(-zeta(k) * x).exp_m1()).powi(k as i32 + 1);
            checked += 1;
            if g > bound * (1.0 + 1e-12) {
                stated_violations += 1;
            }
            if g < bound * (1.0 - 1e-12) {
                reverse_violations += 1;
            }
        }
    }
    let k0_gap = (0..=80)
        .map(|i| {
            let x = 10f64.powf(-3.0 + i as f64 * 0.05);
            let rhs = -(-zeta(0) * x).exp_m1();
            (lower_incomplete_gamma(1.0, x) / rhs - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let direction = stated_violations == 0 && k0_gap <= 1e-12;
    Outcome::new(
        accurate && direction,
        format!(
            "hyp1f1 max rel err {worst_h:.1e}, incomplete gamma max rel err {worst_g:.1e} (tol 1e-9); \
             upper-bound direction violated at {stated_violations}/{checked} grid points \
             (opposite direction violated at {reverse_violations}); k=0 max rel gap {k0_gap:.1e}"
        ),
    )
}

fn determinism() -> Outcome {
    let scn = Scenario::table_defaults();
    let opts = SnapshotOptions::default();
    let threshold = db_to_linear(-18.0);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let est = estimate_outage(&scn, threshold, 20_000, SEED + 40, &opts).unwrap();
                let lap = estimate_laplace(&scn, &[1e3, 1e4], 20_000, SEED + 40, &opts).unwrap();
                let sweep = Sweep {
                    param: SweepParam::Threshold,
                    values: vec![db_to_linear(-20.0), threshold, db_to_linear(-10.0)],
                };
                let curve = outage_curve(&scn, threshold, &sweep, ctrl()).unwrap();
                let mut bits: Vec<u64> = vec![est.p_hat.to_bits(), est.half_width_95.to_bits()];
                bits.extend(lap.iter().map(|v| v.to_bits()));
                bits.extend(curve.iter().map(|(_, p)| p.to_bits()));
                let pts = sample_mhccp(&mut replication_rng(SEED + 41, 0), &scn.topology);
                bits.extend(pts.points.iter().map(|p| p.position.x.to_bits()));
                bits
            })
    };
    let reference = run(1);
    let same = [1, 2, 8].iter().all(|&t| run(t) == reference);
    Outcome::new(same, format!("{} values compared across 1, 2 and 8 threads, repeated runs", reference.len()))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("1 closed form vs Monte Carlo", cross_validation),
        ("2 density formulas", density_formulas),
        ("3 density saturation", saturation),
        ("4 hard-core and cluster invariants", hard_core_invariants),
        ("5 shadowed-Rician law", sr_fading_law),
        ("6 interference Laplace transform", laplace_oracle),
        ("7 outage trends", trend_suite),
        ("8 special functions and gamma power bound", special_functions),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let out = check();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {name}: {verdict} [{:.1}s] {}",
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
