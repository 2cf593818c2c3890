//! A workspace language for fibered ordered monoids over `N̄ⁿ`, a gallery of
//! examples and the `cutilde` command-line driver.

pub mod cli;
pub mod dsl;
pub mod error;
pub mod gallery;
pub mod workspace;

pub use error::CliError;
pub use workspace::Workspace;
