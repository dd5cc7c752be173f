//! Sweeps over N, power-law fits, the bound validators and the single-record
//! oracle; the back end of the `rxsim` command.

pub mod config;
pub mod fit;
pub mod oracle;
pub mod sweep;
pub mod validate;

pub use config::RunConfig;
pub use fit::{cmd_fit, fit_power_law, FitConfig, FitPoint, FitVerdict, ScalingFit};
pub use oracle::{cmd_oracle, OracleReport, OracleStep};
pub use sweep::{
    cmd_sweep, expected_exponent, read_csv, run_sweep, write_csv, PairSource, SweepReport,
    SweepRow, SweepSpec, DEGENERATE_GRID, GENERIC_GRID,
};
pub use validate::{cmd_validate, ValidateConfig, ValidationReport};
