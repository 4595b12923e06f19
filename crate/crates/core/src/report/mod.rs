//! Datasheet, tables, figures and the end-to-end pipeline.

mod config;
mod datasheet;
mod figures;
mod pipeline;
mod svg;
mod tables;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ingest::PitchClass;
use crate::transitions::TransitionError;

pub use config::{parse_key_values, ConfigError, PipelineConfig};
pub use datasheet::{read_datasheet, write_datasheet, PieceRecord, DATASHEET_HEADER};
pub use figures::{
    box_plot_svg, box_stats, cell_color, emit_box_plot, emit_heatmap, emit_scatter, heatmap_svg, whiskers, BoxStats,
    Fit, LegendEntry, ScatterMode, ScatterOptions, ScatterPlot, ScatterPoint, Whiskers, BOX_STATS_HEADER,
};
pub use pipeline::{run_pipeline, with_out_dir, Command, Issue, PipelineError, RunOptions, RunSummary, Stage};
pub use tables::{
    format_g, ols_report, ttest_text, write_ols_csv, write_quadratic_csv, write_ranked_table, write_regression_csv,
    write_ttest_table, RANKED_HEADER, TTEST_HEADER,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("transition row {0} is undefined")]
    UndefinedRow(PitchClass),
    #[error("records lack originality or popularity: {}", .0.join(", "))]
    MissingFields(Vec<String>),
    #[error("composer {0:?} has no scores")]
    EmptyGroup(String),
    #[error(transparent)]
    Transition(#[from] TransitionError),
}

impl ReportError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ReportError::Io { path: path.to_path_buf(), source }
    }

    pub(crate) fn csv(path: &Path, e: csv::Error) -> Self {
        ReportError::Csv { path: path.to_path_buf(), message: e.to_string() }
    }
}
