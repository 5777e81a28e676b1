//! Snapshot Monte Carlo for the uplink SINR.
//!
//! Each snapshot draws a fresh topology (BPP group A1 and MHCCP group A2),
//! picks the nodes sharing the observed FDMA channel, selects a target among
//! its group's co-channel nodes and draws independent fading and antenna
//! gains for every link.
//!
//! Replication `i` of an estimate always runs on ChaCha8 stream `i` of the
//! seed, and replications are reduced with integer or order-preserving
//! operations, so results do not depend on the rayon schedule.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::special::NeumaierSum;
use crate::channel::SrSampler;
use crate::error::{Error, Result};
use crate::geometry::{distance, Point3};
use crate::pointprocess::{sample_bpp, sample_mhccp, ClusteredPointSet, PointSet};
use crate::scenario::{Group, Scenario};

/// How transmitter-to-satellite distances are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    /// Every node is at d₀ from the satellite.
    #[default]
    CommonD0,
    /// True Euclidean distance to a satellite on the +z axis.
    ExactGeometry,
}

/// Which A2 nodes share the observed channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum A2ChannelPolicy {
    /// Every A2 node transmits on the observed channel.
    #[default]
    AllOnChannel,
    /// Whole clusters are drawn until about N₂/K nodes are on the channel.
    PerClusterShare,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SnapshotOptions {
    pub distance_mode: DistanceMode,
    pub a2_channel_policy: A2ChannelPolicy,
    /// Satellite distance from the centre of the deployment ball in
    /// exact-geometry mode; `None` means d₀.
    pub satellite_offset: Option<f64>,
}

/// Indices of the nodes transmitting on the observed channel.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoChannelSet {
    /// Into the BPP point list.
    pub a1: Vec<usize>,
    /// Into the MHCCP point list.
    pub a2: Vec<usize>,
}

/// Picks N₁/K A1 nodes uniformly without replacement and the A2 nodes
/// allowed by `policy`.
pub fn assign_channels<R: Rng + ?Sized>(
    rng: &mut R,
    bpp: &PointSet,
    mhccp: &ClusteredPointSet,
    k_channels: usize,
    policy: A2ChannelPolicy,
) -> Result<CoChannelSet> {
    let n1 = bpp.len();
    if k_channels == 0 || !n1.is_multiple_of(k_channels) {
        return Err(Error::InvalidChannelCount { n1, k: k_channels });
    }
    let a1 = index::sample(rng, n1, n1 / k_channels).into_vec();
    let a2 = match policy {
        A2ChannelPolicy::AllOnChannel => (0..mhccp.len()).collect(),
        A2ChannelPolicy::PerClusterShare => {
            let clusters = mhccp.clusters();
            let mut order: Vec<usize> = (0..clusters.len()).collect();
            order.shuffle(rng);
            let share = mhccp.len() as f64 / k_channels as f64;
            let mut chosen = Vec::new();
            for c in order {
                let next = chosen.len() + clusters[c].len();
                if (next as f64 - share).abs() < (chosen.len() as f64 - share).abs() {
                    chosen.extend_from_slice(&clusters[c]);
                } else if !clusters[c].is_empty() {
                    break;
                }
            }
            chosen
        }
    };
    Ok(CoChannelSet { a1, a2 })
}

/// Received powers of one snapshot, in watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSample {
    pub signal: f64,
    pub interference: f64,
    pub noise: f64,
    pub target_distance: f64,
    pub interferers: usize,
}

impl LinkSample {
    pub fn sinr(&self) -> f64 {
        self.signal / (self.interference + self.noise)
    }
}

fn satellite_position(scn: &Scenario, opts: &SnapshotOptions) -> Point3 {
    let offset = opts.satellite_offset.unwrap_or(scn.d0);
    scn.region().center + Point3::new(0.0, 0.0, offset)
}

/// Draws one snapshot with a prepared fading sampler.
pub fn sample_link<R: Rng + ?Sized>(
    rng: &mut R,
    scn: &Scenario,
    opts: &SnapshotOptions,
    fading: &SrSampler,
) -> Result<LinkSample> {
    use rand_distr::Distribution;

    let bpp = sample_bpp(rng, scn.n1_total, &scn.region());
    let mhccp = sample_mhccp(rng, &scn.topology);
    let channel = assign_channels(rng, &bpp, &mhccp, scn.k_channels, opts.a2_channel_policy)?;

    let candidates = match scn.target_group {
        Group::A1 => &channel.a1,
        Group::A2 => &channel.a2,
    };
    if candidates.is_empty() {
        return Err(Error::EmptyChannel(scn.target_group));
    }
    let target = candidates[rng.random_range(0..candidates.len())];

    let satellite = satellite_position(scn, opts);
    let path_gain = |p: Point3| match opts.distance_mode {
        DistanceMode::CommonD0 => (scn.d0, scn.path_gain()),
        DistanceMode::ExactGeometry => {
            let d = distance(p, satellite);
            (d, d.powf(-scn.alpha))
        }
    };

    let target_pos = match scn.target_group {
        Group::A1 => bpp.points[target],
        Group::A2 => mhccp.points[target].position,
    };
    let (target_distance, target_path) = path_gain(target_pos);
    let signal = scn.p_m * scn.beam.target_gain() * fading.sample(rng) * target_path;

    let a1 = channel
        .a1
        .iter()
        .filter(|&&i| !(scn.target_group == Group::A1 && i == target))
        .map(|&i| (scn.p1, bpp.points[i]));
    let a2 = channel
        .a2
        .iter()
        .filter(|&&i| !(scn.target_group == Group::A2 && i == target))
        .map(|&i| (scn.p2, mhccp.points[i].position));
    let mut interference = 0.0;
    let mut interferers = 0;
    for (power, pos) in a1.chain(a2) {
        let gain = scn.beam.sample_interferer_gain(rng);
        interference += power * gain * fading.sample(rng) * path_gain(pos).1;
        interferers += 1;
    }

    Ok(LinkSample {
        signal,
        interference,
        noise: scn.noise_power,
        target_distance,
        interferers,
    })
}

/// One SINR draw (linear).
pub fn simulate_snapshot<R: Rng + ?Sized>(rng: &mut R, scn: &Scenario, opts: &SnapshotOptions) -> Result<f64> {
    sample_link(rng, scn, opts, &scn.sr.sampler()).map(|l| l.sinr())
}

/// Generator for replication `index` under `seed`.
pub fn replication_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Monte Carlo outage estimate with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub half_width_95: f64,
    pub n_iterations: u64,
    pub seed: u64,
}

impl OutageEstimate {
    pub fn from_count(outages: u64, n_iterations: u64, seed: u64) -> Self {
        let p = outages as f64 / n_iterations as f64;
        OutageEstimate {
            p_hat: p,
            half_width_95: 1.96 * (p * (1.0 - p) / n_iterations as f64).sqrt(),
            n_iterations,
            seed,
        }
    }
}

fn check_run(scn: &Scenario, n_iter: u64) -> Result<()> {
    scn.validate()?;
    if n_iter == 0 {
        return Err(Error::InvalidParameter("need at least one iteration".into()));
    }
    Ok(())
}

/// Runs `n_iter` snapshots and hands each to `f`, in replication order.
fn map_snapshots<T: Send>(
    scn: &Scenario,
    n_iter: u64,
    seed: u64,
    opts: &SnapshotOptions,
    f: impl Fn(LinkSample) -> T + Sync,
) -> Result<Vec<T>> {
    let fading = scn.sr.sampler();
    (0..n_iter)
        .into_par_iter()
        .map(|i| {
            let mut rng = replication_rng(seed, i);
            sample_link(&mut rng, scn, opts, &fading).map(&f)
        })
        .collect()
}

/// Fraction of snapshots with SINR ≤ `threshold` (linear).
pub fn estimate_outage(
    scn: &Scenario,
    threshold: f64,
    n_iter: u64,
    seed: u64,
    opts: &SnapshotOptions,
) -> Result<OutageEstimate> {
    Ok(estimate_outage_multi(scn, &[threshold], n_iter, seed, opts)?.remove(0))
}

/// Outage estimates for several thresholds from one set of snapshots.
/// Each entry equals what [`estimate_outage`] returns for that threshold.
pub fn estimate_outage_multi(
    scn: &Scenario,
    thresholds: &[f64],
    n_iter: u64,
    seed: u64,
    opts: &SnapshotOptions,
) -> Result<Vec<OutageEstimate>> {
    check_run(scn, n_iter)?;
    if let Some(&t) = thresholds.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidThreshold(t));
    }
    let sinrs = map_snapshots(scn, n_iter, seed, opts, |l| l.sinr())?;
    Ok(thresholds
        .iter()
        .map(|&t| {
            let outages = sinrs.iter().filter(|&&x| x <= t).count() as u64;
            OutageEstimate::from_count(outages, n_iter, seed)
        })
        .collect())
}

/// Empirical E[exp(-sI)] for each `s`, over `n_iter` snapshots.
pub fn estimate_laplace(
    scn: &Scenario,
    s_values: &[f64],
    n_iter: u64,
    seed: u64,
    opts: &SnapshotOptions,
) -> Result<Vec<f64>> {
    check_run(scn, n_iter)?;
    let interference = map_snapshots(scn, n_iter, seed, opts, |l| l.interference)?;
    Ok(s_values
        .iter()
        .map(|&s| {
            let sum: NeumaierSum = interference.iter().map(|i| (-s * i).exp()).collect();
            sum.value() / n_iter as f64
        })
        .collect())
}
