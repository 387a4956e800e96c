//! Checks axiom schemata, rules and claimed invalidities of the knowledge
//! pooling logic on small models: every model up to isomorphism in a small
//! tier, then seeded random samples. Countermodels are reported with the
//! falsified instance and state.

pub mod enumerate;
pub mod gen;
pub mod pool;
pub mod registry;
pub mod report;
pub mod schemas;
pub mod suite;

pub use gen::{gen_model, GenConfig};
pub use registry::{Claim, Registry, Schema};
pub use report::{check_named, check_schema, LabConfig, LabError, LabReport, Status, Tier, Verdict};
pub use suite::{run_full_suite, run_golden, run_suite, SuiteReport};

#[cfg(test)]
mod tests;
