use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use secmux::gaussian::{GaussianIC, RegionKind};
use secmux::region::{hausdorff_distance, HalfPlane, RatePolygon};
use secmux::sweep::{sweep_unions, SweepConfig};
use secmux::Execution;

use crate::config::{RunConfig, Units};
use crate::output::{scale_points, OutputDir};
use crate::svg::{self, Series};
use crate::Failure;

#[derive(Debug, Serialize)]
struct SweepMeta {
    resolution: usize,
    bounds: secmux::sweep::SweepBounds,
    raw_points: u128,
    distinct_splits_per_transmitter: usize,
    evaluated_pairs: usize,
}

#[derive(Debug, Serialize)]
struct RegionEntry {
    vertices: Vec<[f64; 2]>,
    halfplanes: Vec<HalfPlane>,
    max_r1: f64,
    max_r2: f64,
    max_sum_rate: f64,
}

#[derive(Debug, Serialize)]
struct Comparison {
    a: RegionKind,
    b: RegionKind,
    hausdorff: f64,
    /// How far `a` reaches outside `b`.
    excursion_a_from_b: f64,
}

#[derive(Debug, Serialize)]
struct RegionReport {
    schema: u32,
    workflow: &'static str,
    units: Units,
    channel: GaussianIC,
    execution: Execution,
    sweep: SweepMeta,
    regions: BTreeMap<RegionKind, RegionEntry>,
    comparisons: Vec<Comparison>,
}

fn entry(poly: &RatePolygon, units: Units) -> RegionEntry {
    let k = units.scale();
    RegionEntry {
        vertices: scale_points(poly.vertices(), units),
        halfplanes: poly
            .halfplanes()
            .iter()
            .map(|h| HalfPlane { rhs: h.rhs * k, ..*h })
            .collect(),
        max_r1: poly.max_r1() * k,
        max_r2: poly.max_r2() * k,
        max_sum_rate: poly.max_sum_rate() * k,
    }
}

fn sweep_meta(cfg: &SweepConfig) -> SweepMeta {
    let splits = cfg.transmitter_splits().len();
    SweepMeta {
        resolution: cfg.resolution,
        bounds: cfg.bounds,
        raw_points: cfg.raw_point_count(),
        distinct_splits_per_transmitter: splits,
        evaluated_pairs: splits * splits,
    }
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let mut kinds = cfg.regions.clone();
    kinds.sort();
    kinds.dedup();
    let start = Instant::now();
    let unions = sweep_unions(&cfg.channel, &cfg.sweep, &kinds, cfg.execution).map_err(Failure::from_core)?;
    let elapsed = start.elapsed();

    let mut comparisons = Vec::new();
    for (i, a) in kinds.iter().enumerate() {
        for b in &kinds[i + 1..] {
            let (pa, pb) = (&unions[a], &unions[b]);
            let k = cfg.units.scale();
            comparisons.push(Comparison {
                a: *a,
                b: *b,
                hausdorff: hausdorff_distance(pa, pb).map_err(Failure::from_core)? * k,
                excursion_a_from_b: pa.max_excursion_from(pb).map_err(Failure::from_core)? * k,
            });
        }
    }
    let report = RegionReport {
        schema: crate::config::SCHEMA_VERSION,
        workflow: "region",
        units: cfg.units,
        channel: cfg.channel,
        execution: cfg.execution,
        sweep: sweep_meta(&cfg.sweep),
        regions: unions.iter().map(|(k, p)| (*k, entry(p, cfg.units))).collect(),
        comparisons,
    };

    let out = OutputDir::create(&cfg.out_dir()).map_err(Failure::Config)?;
    for (kind, e) in &report.regions {
        out.write_vertices_csv(&format!("region_{kind}.csv"), &e.vertices)
            .map_err(Failure::Config)?;
    }
    let series: Vec<Series<'_>> = report
        .regions
        .iter()
        .map(|(k, e)| Series { name: k.name(), vertices: &e.vertices })
        .collect();
    out.write_bytes("overlay.svg", svg::render(&series, cfg.units.label()).as_bytes())
        .map_err(Failure::Config)?;
    out.write_json("report.json", &report).map_err(Failure::Config)?;

    println!(
        "swept {} transmitter-split pairs in {:.1}s ({})",
        report.sweep.evaluated_pairs,
        elapsed.as_secs_f64(),
        if cfg.execution.is_parallel() { "parallel" } else { "sequential" }
    );
    let u = cfg.units.label();
    for (kind, e) in &report.regions {
        println!(
            "{:>15}: {} vertices, max R1 {:.6} {u}, max R2 {:.6} {u}, max sum {:.6} {u}",
            kind.name(),
            e.vertices.len(),
            e.max_r1,
            e.max_r2,
            e.max_sum_rate
        );
    }
    for c in &report.comparisons {
        println!("{} vs {}: Hausdorff {:.6} {u}", c.a, c.b, c.hausdorff);
    }
    println!("wrote {}", out.path("report.json").display());
    Ok(())
}
