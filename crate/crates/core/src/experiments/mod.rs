//! Sweep configuration, ensemble execution, aggregation and output files.

mod config;
mod ensemble;
mod grid;
mod metrics;
mod output;

pub use config::{
    parse_config, ConfigError, ProfileKind, RawConfig, SweepConfig, SweepPoint, MAX_TABLE_PLAYERS,
};
pub use ensemble::{run_ensemble, run_point, shot_stream, PointResult};
pub use grid::ternary_grid;
pub use metrics::{aggregate_metrics, standard_error, MetricsError, MetricsRow};
pub use output::{metrics_csv, shots_csv, write_outputs, OutputError, OutputFiles, METRICS_COLUMNS};
