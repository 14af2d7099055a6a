//! Batch front end for `eqexc-core`: read a run spec, build and check the equivariant
//! collection, emit a deterministic report.

pub mod run;
pub mod selftest;
pub mod spec;
pub mod text;

pub use run::{run, RunReport, Verdict};
pub use spec::{RunSpec, SCHEMA_VERSION};
