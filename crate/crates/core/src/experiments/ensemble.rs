use rayon::prelude::*;

use super::{aggregate_metrics, MetricsRow, SweepConfig, SweepPoint};
use crate::des::RngStream;
use crate::protocol::{run_shot_with_stream, ShotOutcome};
use crate::Error;

#[derive(Debug, Clone)]
pub struct PointResult {
    pub row: MetricsRow,
    pub outcomes: Vec<ShotOutcome>,
}

/// Stream for shot `shot` of run `run`. Every sweep point reuses the same
/// streams, so points differ only through their parameters.
pub fn shot_stream(seed: u64, run: usize, shot: usize) -> RngStream {
    RngStream::with_path(seed, vec![run as u64, shot as u64])
}

/// Runs every shot of one sweep point on the calling thread.
pub fn run_point(config: &SweepConfig, point: &SweepPoint) -> Result<PointResult, Error> {
    let shot_config = config.shot_config(point);
    let mut outcomes = Vec::with_capacity(config.total_shots());
    for run in 0..config.runs {
        for shot in 0..config.shots {
            let mut o = run_shot_with_stream(&shot_config, shot_stream(config.seed, run, shot))?;
            o.run = run;
            o.shot = shot;
            outcomes.push(o);
        }
    }
    let row = aggregate_metrics(point, &outcomes)?;
    Ok(PointResult { row, outcomes })
}

/// Runs all sweep points on `workers` threads. Results come back in sweep
/// order and do not depend on the worker count.
pub fn run_ensemble(config: &SweepConfig, workers: usize) -> Result<Vec<PointResult>, Error> {
    let points = config.points();
    let items: Vec<(usize, usize, usize)> = (0..points.len())
        .flat_map(|p| {
            (0..config.runs).flat_map(move |r| (0..config.shots).map(move |s| (p, r, s)))
        })
        .collect();
    let shot_configs: Vec<_> = points.iter().map(|p| config.shot_config(p)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Runtime(format!("thread pool: {e}")))?;
    let outcomes: Vec<ShotOutcome> = pool.install(|| {
        items
            .par_iter()
            .map(|&(p, run, shot)| {
                let mut o = run_shot_with_stream(&shot_configs[p], shot_stream(config.seed, run, shot))?;
                o.run = run;
                o.shot = shot;
                Ok(o)
            })
            .collect::<Result<_, Error>>()
    })?;
    let per_point = config.total_shots();
    points
        .iter()
        .zip(outcomes.chunks(per_point))
        .map(|(point, chunk)| {
            let row = aggregate_metrics(point, chunk)?;
            Ok(PointResult {
                row,
                outcomes: chunk.to_vec(),
            })
        })
        .collect()
}
