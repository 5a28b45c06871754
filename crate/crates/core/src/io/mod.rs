//! Configuration ingestion and file output.

pub mod config;
pub mod csv;
pub mod heatmap;

pub use config::{parse_config, ConfigError, OutputConfig, RunConfig};
pub use csv::{read_csv, render_csv, write_csv, CSV_HEADER};
pub use heatmap::{write_heatmap, Colormap, ImageFormat, RenderStats};
