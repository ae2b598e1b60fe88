//! Experiment harness for the game solvers: smoothed-trial batches with
//! oracle cross-checks, condition-number tail tables, robustness probes
//! around certified instances, and deterministic CSV reporting. The `mpg`
//! binary exposes the same operations on the command line.

mod config;
mod error;
mod robustness;
mod tail;
mod trial;

pub use config::{derived_seed, trial_seeds, ExperimentConfig};
pub use error::ExpError;
pub use robustness::{robustness_probe, Counterexample, RobustnessReport};
pub use tail::{condition_tail_report, tail_from_records, tail_to_csv, TailReport, TailRow};
pub use trial::{
    run_one_trial, run_smoothed_trials, switch_cap, trials_from_csv, trials_to_csv, TrialRecord,
    VERIFY_MAX_N,
};
