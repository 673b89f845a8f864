//! Experimental harnesses: failure rates, norm-growth statistics,
//! combinatorial security estimates, concrete attacks, the shift-module
//! experiment, and the baseline comparison benchmark.
//!
//! Every experiment draws from labeled [`crate::rng::Streams`] so results
//! are reproducible from a single master seed, independent of thread
//! scheduling.

pub mod attacks;
pub mod bench;
pub mod failure;
pub mod gamma;
pub mod membership;
pub mod security;

pub use attacks::{brute_force_attack, multiple_transmission_attack, BruteForceOutcome, MtaReport};
pub use bench::{benchmark_compare, size_table, BenchmarkReport, SizeTable};
pub use failure::{measure_failure_rate, FailureReport};
pub use gamma::{estimate_gamma, GammaReport};
pub use membership::{membership_experiment, shift_module_solution, MembershipReport, ShiftSolution};
pub use security::{
    key_security, message_security, mitm_cost, security_report, SecurityReport,
};
