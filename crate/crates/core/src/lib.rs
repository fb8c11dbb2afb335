//! Simulation and analysis of idealized singlet spin-correlation
//! experiments.
//!
//! * [`quantum`]: closed-form singlet correlation and joint distribution.
//! * [`models`]: quantum, nonlocal stochastic and local deterministic
//!   outcome generators.
//! * [`runner`]: seeded, reproducible n-pair runs.
//! * [`estimators`]: exact `(2m − n)/n` correlation estimates and CHSH.
//! * [`rationality`]: the gap between `n·sin²(Δ/2)` and the nearest integer.
//! * [`output`] and [`cli`]: records, CSV / json-lines, and the `spincorr`
//!   binary.

pub mod angle;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod models;
pub mod output;
pub mod quantum;
pub mod rationality;
pub mod runner;

pub use angle::{Angle, DetectorSettings, SettingsQuad};
pub use error::{Error, Result};
pub use estimators::{chsh_value, correlation_from_counts, ChshEstimate, CorrelationEstimate};
pub use models::{expected_correlation, sample_pair, ModelKind, ModelSpec, Outcome, PairResult};
pub use quantum::{joint_distribution, qm_correlation, required_plus_fraction, JointDistribution};
pub use rationality::{
    exact_representability, rationality_report, significance_compare, sweep_reports, RationalityReport,
    Significance, SignificanceLabel,
};
pub use runner::{run_experiment, run_quad, Counts, ExecutionMode, RngSeed, RunConfig, TrialBatch};
