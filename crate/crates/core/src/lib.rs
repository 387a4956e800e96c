//! Knowledge pooling among agents: a formula language with individual,
//! agent-dependent and distributed knowledge, directed knowledge-sharing
//! updates, information resolution and a deontic layer of ideal transitions.
//!
//! ```
//! use kpool_core::{builtin, formula::parse, semantics::holds_at};
//!
//! let m = builtin::servers();
//! let f = parse("[a>c]K{c}(p -> q)").unwrap();
//! assert!(holds_at(&m, &f, 0).unwrap());
//! ```

pub mod builtin;
pub mod formula;
pub mod kripke;
pub mod norms;
pub mod semantics;
pub mod update;

pub use formula::{expand, parse, Agent, Formula};
pub use kripke::{Model, StateSet};
