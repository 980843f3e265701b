//! Unions of per-point regions over a grid of power splits
//! `(β1, θ1, μ1, β2, θ2, μ2)`, convexified by time sharing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gaussian::{
    mi_profile, push_region_vertices, GaussianIC, PowerSplit, RegionKind, TransmitterSplit,
};
use crate::region::{HullAccumulator, RatePolygon};

pub const DEFAULT_RESOLUTION: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepBounds {
    pub beta: [f64; 2],
    pub theta: [f64; 2],
    pub mu: [f64; 2],
}

impl Default for SweepBounds {
    fn default() -> Self {
        Self {
            beta: [0.0, 1.0],
            theta: [0.0, 1.0],
            mu: [0.0, 1.0],
        }
    }
}

/// Grid shared by both transmitters: `resolution` evenly spaced points per
/// axis, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub resolution: usize,
    pub bounds: SweepBounds,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_RESOLUTION,
            bounds: SweepBounds::default(),
        }
    }
}

impl SweepConfig {
    pub fn with_resolution(resolution: usize) -> Self {
        Self {
            resolution,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid resolution {} below 2",
                self.resolution
            )));
        }
        let b = &self.bounds;
        for (name, [lo, hi]) in [("beta", b.beta), ("theta", b.theta), ("mu", b.mu)] {
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} bounds [{lo}, {hi}] not inside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    fn axis(&self, [lo, hi]: [f64; 2]) -> Vec<f64> {
        let n = self.resolution - 1;
        (0..=n)
            .map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 })
            .collect()
    }

    /// Distinct single-transmitter splits of the grid. A silent transmitter
    /// makes `θ` and `μ` irrelevant and `θ = 0` makes `μ` irrelevant, so
    /// those points collapse onto one representative; the profile depends on
    /// the split only through the remaining coordinates.
    pub fn transmitter_splits(&self) -> Vec<TransmitterSplit> {
        let betas = self.axis(self.bounds.beta);
        let thetas = self.axis(self.bounds.theta);
        let mus = self.axis(self.bounds.mu);
        let mut out = Vec::new();
        for &beta in &betas {
            for &theta in &thetas {
                for &mu in &mus {
                    let theta_free = beta == 0.0;
                    let mu_free = theta_free || theta == 0.0;
                    if (theta_free && theta != thetas[0]) || (mu_free && mu != mus[0]) {
                        continue;
                    }
                    out.push(TransmitterSplit { beta, theta, mu });
                }
            }
        }
        out
    }

    /// Number of grid points before deduplication.
    pub fn raw_point_count(&self) -> u128 {
        (self.resolution as u128).pow(6)
    }
}

/// Convex hull of the chosen region over every grid point.
pub fn sweep_union(
    ch: &GaussianIC,
    cfg: &SweepConfig,
    kind: RegionKind,
    exec: Execution,
) -> Result<RatePolygon> {
    let mut out = sweep_unions(ch, cfg, &[kind], exec)?;
    Ok(out.remove(&kind).expect("requested kind"))
}

/// Several region kinds from one pass over the grid (each profile is
/// computed once and shared).
pub fn sweep_unions(
    ch: &GaussianIC,
    cfg: &SweepConfig,
    kinds: &[RegionKind],
    exec: Execution,
) -> Result<BTreeMap<RegionKind, RatePolygon>> {
    ch.validate()?;
    cfg.validate()?;
    let mut kinds = kinds.to_vec();
    kinds.sort();
    kinds.dedup();
    let splits = cfg.transmitter_splits();
    // one chunk per first-transmitter split, merged in index order, so the
    // result is bit-identical whatever the execution mode or thread count
    let chunks = exec.map_indices(splits.len(), |i| {
        let mut accs = vec![HullAccumulator::new(); kinds.len()];
        let mut buf = Vec::with_capacity(16);
        for other in &splits {
            let profile = mi_profile(ch, &PowerSplit::new(splits[i], *other));
            for (acc, &kind) in accs.iter_mut().zip(&kinds) {
                buf.clear();
                push_region_vertices(kind, &profile, &mut buf);
                acc.extend(&buf);
            }
        }
        accs.into_iter().map(|a| a.finish()).collect::<Vec<_>>()
    });
    let mut accs = vec![HullAccumulator::new(); kinds.len()];
    for chunk in chunks {
        for (acc, poly) in accs.iter_mut().zip(chunk) {
            acc.extend(poly.vertices());
        }
    }
    Ok(kinds
        .into_iter()
        .zip(accs)
        .map(|(k, acc)| (k, acc.finish()))
        .collect())
}
