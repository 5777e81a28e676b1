//! Point processes in a ball: binomial (BPP), Poisson (PPP), Matérn type-II
//! hard-core thinning, and the Matérn hard-core cluster process (MHCCP) that
//! places Poisson-sized clusters around hard-core parents.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{self, Write};

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::geometry::{distance, sample_uniform_ball, Ball, Point3};

/// Below this many candidates the O(n²) neighbour scan beats building a grid.
const BRUTE_FORCE_LIMIT: usize = 96;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointSet {
    pub points: Vec<Point3>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterPoint {
    pub position: Point3,
    /// Index into [`ClusteredPointSet::parents`].
    pub parent: Option<usize>,
}

/// Cluster offspring together with the hard-core parents they belong to.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClusteredPointSet {
    pub parents: Vec<Point3>,
    pub points: Vec<ClusterPoint>,
}

impl ClusteredPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point indices grouped by parent, in parent order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.parents.len()];
        for (i, p) in self.points.iter().enumerate() {
            if let Some(parent) = p.parent {
                out[parent].push(i);
            }
        }
        out
    }
}

/// Parameters of the Matérn hard-core cluster process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhccpConfig {
    /// Density of the candidate PPP, points/m³.
    pub lambda1: f64,
    /// Hard-core distance between parents, m.
    pub d_min: f64,
    /// Mean number of points per cluster.
    pub c_bar: f64,
    pub region: Ball,
}

impl MhccpConfig {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.lambda1 >= 0.0 && self.lambda1.is_finite()) {
            v.push(format!("lambda1 must be >= 0, got {}", self.lambda1));
        }
        if !(self.d_min > 0.0 && self.d_min.is_finite()) {
            v.push(format!("d_min must be > 0, got {}", self.d_min));
        }
        if !(self.c_bar >= 0.0 && self.c_bar.is_finite()) {
            v.push(format!("c_bar must be >= 0, got {}", self.c_bar));
        }
        if !(self.region.radius >= 0.0 && self.region.radius.is_finite()) {
            v.push(format!("region radius must be >= 0, got {}", self.region.radius));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(v.join(", ")))
        }
    }

    pub fn parent_density(&self) -> f64 {
        density_lambda2(self.lambda1, self.d_min)
    }

    pub fn point_density(&self) -> f64 {
        density_lambda3(self.lambda1, self.d_min, self.c_bar)
    }
}

/// `n` independent uniform points in `region`.
pub fn sample_bpp<R: Rng + ?Sized>(rng: &mut R, n: usize, region: &Ball) -> PointSet {
    PointSet {
        points: (0..n).map(|_| sample_uniform_ball(rng, region)).collect(),
    }
}

fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("finite positive Poisson mean");
    d.sample(rng) as usize
}

/// Homogeneous PPP of density `lambda` restricted to `region`.
pub fn sample_ppp<R: Rng + ?Sized>(rng: &mut R, lambda: f64, region: &Ball) -> PointSet {
    let n = poisson_count(rng, lambda * region.volume());
    sample_bpp(rng, n, region)
}

/// Matérn type-II thinning: draws i.i.d. uniform marks and keeps the
/// candidates whose mark is strictly smallest among all candidates closer
/// than `d_min`.
pub fn matern2_thin<R: Rng + ?Sized>(rng: &mut R, candidates: &PointSet, d_min: f64) -> PointSet {
    let marks: Vec<f64> = (0..candidates.len()).map(|_| rng.random()).collect();
    let kept = matern2_retained(&candidates.points, &marks, d_min);
    PointSet {
        points: kept.into_iter().map(|i| candidates.points[i]).collect(),
    }
}

/// Indices of candidates surviving Matérn type-II thinning with the given
/// marks. Equal marks are ordered by index.
pub fn matern2_retained(points: &[Point3], marks: &[f64], d_min: f64) -> Vec<usize> {
    assert_eq!(points.len(), marks.len());
    if points.len() <= BRUTE_FORCE_LIMIT {
        matern2_brute_force(points, marks, d_min)
    } else {
        matern2_grid(points, marks, d_min)
    }
}

fn beats(marks: &[f64], j: usize, i: usize) -> bool {
    (marks[j], j) < (marks[i], i)
}

pub(crate) fn matern2_brute_force(points: &[Point3], marks: &[f64], d_min: f64) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !(0..points.len())
                .any(|j| j != i && distance(points[i], points[j]) < d_min && beats(marks, j, i))
        })
        .collect()
}

type Cell = (i64, i64, i64);

fn cell_of(p: Point3, size: f64) -> Cell {
    (
        (p.x / size).floor() as i64,
        (p.y / size).floor() as i64,
        (p.z / size).floor() as i64,
    )
}

pub(crate) fn matern2_grid(points: &[Point3], marks: &[f64], d_min: f64) -> Vec<usize> {
    let mut grid: HashMap<Cell, Vec<usize>> = HashMap::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        grid.entry(cell_of(p, d_min)).or_default().push(i);
    }
    (0..points.len())
        .filter(|&i| {
            let (cx, cy, cz) = cell_of(points[i], d_min);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        let Some(bucket) = grid.get(&(cx + dx, cy + dy, cz + dz)) else {
                            continue;
                        };
                        for &j in bucket {
                            if j != i && distance(points[i], points[j]) < d_min && beats(marks, j, i) {
                                return false;
                            }
                        }
                    }
                }
            }
            true
        })
        .collect()
}

/// MHCCP realization: hard-core parents thinned from PPP(λ₁) in the region,
/// each with Poisson(c̄) children uniform in the ball of radius `d_min / 2`
/// around it. Children are not clipped to the region.
pub fn sample_mhccp<R: Rng + ?Sized>(rng: &mut R, cfg: &MhccpConfig) -> ClusteredPointSet {
    let candidates = sample_ppp(rng, cfg.lambda1, &cfg.region);
    let parents = matern2_thin(rng, &candidates, cfg.d_min).points;
    let mut points = Vec::with_capacity((parents.len() as f64 * cfg.c_bar * 1.2) as usize + 4);
    for (idx, &parent) in parents.iter().enumerate() {
        let cluster = Ball::new(parent, cfg.d_min / 2.0);
        for _ in 0..poisson_count(rng, cfg.c_bar) {
            points.push(ClusterPoint {
                position: sample_uniform_ball(rng, &cluster),
                parent: Some(idx),
            });
        }
    }
    ClusteredPointSet { parents, points }
}

/// Volume of the hard-core exclusion ball, (4/3)π d³.
fn exclusion_volume(d_min: f64) -> f64 {
    4.0 / 3.0 * PI * d_min.powi(3)
}

/// Density of the Matérn type-II parents,
/// λ₂ = (1 - exp(-V λ₁)) / V with V = (4/3)π d_min³.
pub fn density_lambda2(lambda1: f64, d_min: f64) -> f64 {
    let v = exclusion_volume(d_min);
    -(-v * lambda1).exp_m1() / v
}

/// Density of the cluster points, λ₃ = c̄ λ₂.
pub fn density_lambda3(lambda1: f64, d_min: f64, c_bar: f64) -> f64 {
    c_bar * density_lambda2(lambda1, d_min)
}

/// Limit of λ₃ as λ₁ → ∞, 3c̄ / (4π d_min³).
pub fn lambda3_limit(d_min: f64, c_bar: f64) -> f64 {
    3.0 * c_bar / (4.0 * PI * d_min.powi(3))
}

/// Writes one delimited row per point: `process,parent,x,y,z`. Process tags
/// are `bpp` for A1, `parent` for hard-core parents and `cluster` for A2
/// points; `parent` is -1 where it does not apply.
pub fn write_realization<W: Write>(mut w: W, bpp: &PointSet, mhccp: &ClusteredPointSet) -> io::Result<()> {
    writeln!(w, "process,parent,x,y,z")?;
    for p in &bpp.points {
        writeln!(w, "bpp,-1,{},{},{}", p.x, p.y, p.z)?;
    }
    for p in &mhccp.parents {
        writeln!(w, "parent,-1,{},{},{}", p.x, p.y, p.z)?;
    }
    for p in &mhccp.points {
        let parent = p.parent.map_or(-1, |i| i as i64);
        writeln!(w, "cluster,{parent},{},{},{}", p.position.x, p.position.y, p.position.z)?;
    }
    Ok(())
}
