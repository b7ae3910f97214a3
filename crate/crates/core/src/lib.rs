//! Binary quadratic forms of negative fundamental discriminant: class groups,
//! genus characters, theta and Eisenstein series as exact q-expansions, and
//! coefficient-by-coefficient checks of the genus mass formula and the Hecke
//! identities relating them.

pub mod arith;
pub mod class_group;
pub mod cli;
pub mod forms;
pub mod genus;
pub mod hecke;
pub mod ideal;
pub mod qseries;
pub mod series;
pub mod verify;

pub use arith::Discriminant;
pub use class_group::{ClassGroup, ClassIndex, GenusId};
pub use qseries::QSeries;
pub use series::SeriesBook;
pub use verify::{run_suite, verify_discriminant, SuiteConfig, VerificationReport};
