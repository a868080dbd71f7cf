//! Simulation designs and the Monte Carlo runner.

pub mod generate;
pub mod runner;
pub mod scenario;
pub mod suites;

pub use generate::{gen_gaussian, gen_student_t3, Family, Generator};
pub use runner::{run_monte_carlo, MCResult, Method, Scenario};
pub use suites::{run_suite, suite_entries, Suite, SuiteEntry};
pub use scenario::{build_mean, toeplitz_cholesky, CovKind, CovScenario, MeanKind, MeanScenario};
