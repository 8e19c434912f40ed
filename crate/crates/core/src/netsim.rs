//! Seeded dynamic sensor-network generator.
//!
//! Nodes are dropped uniformly in the unit square and walk by independent
//! Gaussian steps, reflected at the boundary. An optional failure disk
//! grows linearly over time; nodes strictly inside it are masked out for
//! that step (they may reappear if the disk later uncovers them). Two nodes
//! communicate when both are up and less than twice the coverage radius
//! apart.
//!
//! Everything is a pure function of the config: the generator is ChaCha8
//! seeded with the config's seed, and draws are ordered step by step, node
//! by node, x before y.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::sequence::AdjacencyFrame;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureDisk {
    pub center: [f64; 2],
    pub initial_radius: f64,
    /// Radius increase per step; the disk has radius
    /// `initial_radius + growth * (t - 1)` at step `t` (1-based).
    pub growth: f64,
}

impl FailureDisk {
    #[must_use]
    pub fn radius_at(&self, step: usize) -> f64 {
        self.initial_radius + self.growth * (step as f64 - 1.0)
    }

    fn covers(&self, p: [f64; 2], step: usize) -> bool {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        (dx * dx + dy * dy).sqrt() < self.radius_at(step)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub n: usize,
    /// Coverage radius; communication range is twice this.
    pub radius: f64,
    pub motion_scale: f64,
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub failure: Option<FailureDisk>,
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.into()));
        if self.n == 0 {
            return fail("n must be at least 1");
        }
        if self.radius.is_nan() || self.radius <= 0.0 {
            return fail("radius must be positive");
        }
        if self.motion_scale.is_nan() || self.motion_scale < 0.0 {
            return fail("motion_scale must be nonnegative");
        }
        if self.steps == 0 {
            return fail("steps must be at least 1");
        }
        if let Some(d) = &self.failure {
            if d.initial_radius.is_nan() || d.initial_radius < 0.0 {
                return fail("failure.initial_radius must be nonnegative");
            }
            if d.growth.is_nan() || d.growth < 0.0 {
                return fail("failure.growth must be nonnegative");
            }
            if !d.center.iter().all(|c| c.is_finite()) {
                return fail("failure.center must be finite");
            }
        }
        Ok(())
    }
}

/// Node positions and up/down state at one step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub positions: Vec<[f64; 2]>,
    pub present: Vec<bool>,
}

/// Folds a coordinate back into [0, 1] by reflection.
fn reflect(x: f64) -> f64 {
    let m = x.rem_euclid(2.0);
    if m > 1.0 { 2.0 - m } else { m }
}

/// One snapshot per step, fully determined by the config.
pub fn generate(cfg: &NetworkConfig) -> Result<Vec<Snapshot>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let normal = Normal::new(0.0, cfg.motion_scale)
        .map_err(|e| Error::Config(format!("motion_scale: {e}")))?;

    let mut positions: Vec<[f64; 2]> = (0..cfg.n)
        .map(|_| {
            let x = rng.random::<f64>();
            let y = rng.random::<f64>();
            [x, y]
        })
        .collect();

    let mut out = Vec::with_capacity(cfg.steps);
    for step in 1..=cfg.steps {
        if step > 1 {
            for p in &mut positions {
                let dx: f64 = normal.sample(&mut rng);
                let dy: f64 = normal.sample(&mut rng);
                p[0] = reflect(p[0] + dx);
                p[1] = reflect(p[1] + dy);
            }
        }
        let present: Vec<bool> = match &cfg.failure {
            None => vec![true; cfg.n],
            Some(disk) => positions.iter().map(|&p| !disk.covers(p, step)).collect(),
        };
        out.push(Snapshot { positions: positions.clone(), present });
    }
    Ok(out)
}

/// Symmetric 0/1 adjacency with zero diagonal: 1 iff both nodes are up and
/// strictly closer than `2 * coverage_radius`.
#[must_use]
pub fn adjacency(s: &Snapshot, coverage_radius: f64) -> Vec<Vec<u8>> {
    let n = s.positions.len();
    let range = 2.0 * coverage_radius;
    let mut rows = vec![vec![0u8; n]; n];
    for i in 0..n {
        if !s.present[i] {
            continue;
        }
        for j in i + 1..n {
            if !s.present[j] {
                continue;
            }
            let dx = s.positions[i][0] - s.positions[j][0];
            let dy = s.positions[i][1] - s.positions[j][1];
            if (dx * dx + dy * dy).sqrt() < range {
                rows[i][j] = 1;
                rows[j][i] = 1;
            }
        }
    }
    rows
}

/// Generates and converts in one go: the adjacency-frame sequence a run of
/// the tracker consumes.
pub fn simulate_frames(cfg: &NetworkConfig) -> Result<Vec<AdjacencyFrame>> {
    let snapshots = generate(cfg)?;
    Ok(snapshots
        .iter()
        .map(|s| AdjacencyFrame {
            n: cfg.n,
            present: s.present.iter().map(|&p| u8::from(p)).collect(),
            rows: adjacency(s, cfg.radius),
        })
        .collect())
}
