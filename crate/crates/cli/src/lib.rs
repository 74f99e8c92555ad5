//! Command-line front end for `abmod-core`: module description files,
//! deterministic JSON reports and the verification suites.

pub mod commands;
pub mod description;
pub mod report;

pub use commands::{CheckInput, GenSpec, Options, Suite};
pub use description::ModuleDescription;
pub use report::{Report, Status};
