//! Error-propagation sweeps over `(n, ρ, ν, μ)` with CSV and SVG output.

mod config;
mod plot;
mod report;
mod sweep;

pub use config::{parse_f64_list, parse_usize_list, CoeffMode, ExperimentConfig, RhoSpec};
pub use plot::{emit_plot, render_svg};
pub use report::{emit_csv, read_csv, write_csv, CSV_HEADER};
pub use sweep::{run_sweep, SweepResult, SweepRow};
