//! Configuration files, experiment metrics and on-disk artifacts.

mod config;
mod export;
mod metrics;

pub use config::{load_config, parse_config, parse_config_in, serialize_config};
pub use export::{
    aggregation_csv, events_csv, export_outputs, frame_file_name, histogram_csv, poses_csv,
    render_frame, render_trajectories, MARKER_DIAMETER,
};
pub use metrics::{aggregation_series, arrival_histogram, windowed_mean, ArrivalHistogram};
