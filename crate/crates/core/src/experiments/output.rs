use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{MetricsRow, PointResult, SweepConfig};
use crate::hardware::HardwareProfile;

pub const METRICS_COLUMNS: [&str; 19] = [
    "profile",
    "n",
    "t",
    "m",
    "p0",
    "px",
    "py",
    "pz",
    "alpha_db_per_km",
    "length_km",
    "t1_s",
    "t2_s",
    "transit_s",
    "commander_loyal",
    "shots",
    "lieutenant_error_rate",
    "shot_error_rate",
    "abort_rate",
    "wrong_value_rate",
];

const SHOT_COLUMNS: [&str; 11] = [
    "point",
    "run",
    "shot",
    "commander_loyal",
    "lieutenant",
    "loyal",
    "sent_order",
    "decision",
    "error",
    "lost_qubits",
    "heralded_retries",
];

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv encoding: {0}")]
    Csv(#[from] csv::Error),
    #[error("manifest encoding: {0}")]
    Json(#[from] serde_json::Error),
    #[error("nothing to write")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFiles {
    pub metrics: PathBuf,
    pub shots: Option<PathBuf>,
    pub manifest: PathBuf,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    runs: usize,
    shots: usize,
    points: usize,
    config: &'a str,
}

fn num(x: f64) -> String {
    x.to_string()
}

fn profile_fields(p: &HardwareProfile) -> [String; 9] {
    let blank = String::new;
    match *p {
        HardwareProfile::Logical { pauli } => [
            num(pauli.p0),
            num(pauli.px),
            num(pauli.py),
            num(pauli.pz),
            blank(),
            blank(),
            blank(),
            blank(),
            blank(),
        ],
        HardwareProfile::Superconducting { t1, t2, transit, .. } => [
            blank(),
            blank(),
            blank(),
            blank(),
            blank(),
            blank(),
            num(t1),
            num(t2),
            num(transit),
        ],
        HardwareProfile::Photonic { alpha, length, .. } => [
            blank(),
            blank(),
            blank(),
            blank(),
            num(alpha),
            num(length),
            blank(),
            blank(),
            blank(),
        ],
    }
}

/// Renders the metrics table. Columns not applicable to a row's profile
/// are left empty.
pub fn metrics_csv<'a>(rows: impl IntoIterator<Item = &'a MetricsRow>) -> Result<String, OutputError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(METRICS_COLUMNS)?;
    for row in rows {
        let p = &row.point;
        let mut rec = vec![
            p.profile.name().to_string(),
            p.n.to_string(),
            p.t.to_string(),
            p.m.to_string(),
        ];
        rec.extend(profile_fields(&p.profile));
        rec.extend([
            p.commander_loyal.to_string(),
            row.shots.to_string(),
            num(row.lieutenant_error_rate),
            num(row.shot_error_rate),
            num(row.abort_rate),
            num(row.wrong_value_rate),
        ]);
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| OutputError::Io {
        path: PathBuf::from("<metrics>"),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn shots_csv(results: &[PointResult]) -> Result<String, OutputError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SHOT_COLUMNS)?;
    for (point, r) in results.iter().enumerate() {
        for o in &r.outcomes {
            for l in &o.lieutenants {
                w.write_record([
                    point.to_string(),
                    o.run.to_string(),
                    o.shot.to_string(),
                    o.commander_loyal.to_string(),
                    l.id.to_string(),
                    l.loyal.to_string(),
                    l.sent_order.to_string(),
                    l.decision.as_str().to_string(),
                    l.error.to_string(),
                    o.lost_qubits.to_string(),
                    o.heralded_retries.to_string(),
                ])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| OutputError::Io {
        path: PathBuf::from("<shots>"),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf, OutputError> {
    std::fs::write(&path, contents).map_err(|source| OutputError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Writes `metrics.csv`, `manifest.json` and, when asked, `shots.csv` into
/// `dir`. Identical inputs give identical bytes.
pub fn write_outputs(
    results: &[PointResult],
    config: &SweepConfig,
    dir: &Path,
    per_shot: bool,
) -> Result<OutputFiles, OutputError> {
    if results.is_empty() {
        return Err(OutputError::Empty);
    }
    std::fs::create_dir_all(dir).map_err(|source| OutputError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let metrics = write(dir.join("metrics.csv"), &metrics_csv(results.iter().map(|r| &r.row))?)?;
    let shots = if per_shot {
        Some(write(dir.join("shots.csv"), &shots_csv(results)?)?)
    } else {
        None
    };
    let manifest = Manifest {
        tool: "qdba-sim",
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        runs: config.runs,
        shots: config.shots,
        points: results.len(),
        config: config.canonical(),
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    let manifest = write(dir.join("manifest.json"), &json)?;
    Ok(OutputFiles {
        metrics,
        shots,
        manifest,
    })
}
