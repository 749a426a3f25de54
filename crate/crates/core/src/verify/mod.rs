//! Inequality suites, exhaustive scans and their reports.

pub mod checks;
pub mod generator;
pub mod report;
pub mod scans;

pub use checks::{
    check_ent_k2, check_fk, check_functional_isop, check_log_sobolev, check_technical,
    run_suite, run_suite_chunked, Inequality,
};
pub use generator::{
    mixed_generators, replay_witness, split_generators, FunctionGenerator, GeneratorKind,
};
pub use report::{CheckRecord, Status, VerificationReport};
pub use scans::{
    fine_grid_technical, scan_all_subsets, tightness_rows, tightness_sweep, ExtremalRow,
    SubsetScan, TightnessRow,
};
