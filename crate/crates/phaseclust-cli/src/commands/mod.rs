//! Subcommand implementations. Each writes its artifacts through an
//! [`ArtifactSet`](crate::artifacts::ArtifactSet) and prints a short
//! human-readable summary to stdout.

pub mod catalog;
pub mod perturb;
pub mod reduce;
pub mod simulate;
pub mod stability;
pub mod states;
pub mod sweep;
pub mod table;
