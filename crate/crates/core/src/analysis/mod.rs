//! Diagnostics, samplers, estimators and exact oracles for the engines.

pub mod diagnostics;
pub mod estimate;
pub mod oracle;
pub mod regime;
mod sampler;
pub mod trace;

pub use diagnostics::{entropy, graph_energy, hyper_energy, potential};
pub use estimate::{
    concentration_probe, estimate_marginals, map_runs, martingale_test, membership_agreement,
    run_health, sample_cells, AgreementReport, ConcentrationReport, MarginalsReport,
    MartingaleReport, RunHealth, StatError,
};
pub use oracle::{
    catalog, exact_oracle, exact_oracle_on, mutation_witnesses, OracleError, OracleLimits,
    OracleMode, OracleResult,
};
pub use regime::{check_regime, RegimeMode, RegimeReport};
pub use sampler::{color_class, is_independent, sample_independent_set};
pub use trace::RunTrace;
