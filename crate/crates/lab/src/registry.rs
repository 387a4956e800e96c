//! Named schemata behind a common interface, so the runner and the CLI can
//! select them by name.

use std::collections::HashMap;
use std::fmt;

use kpool_core::formula::SchemaError;
use kpool_core::Model;

use crate::pool::Vocabulary;

/// What the literature claims about a schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Valid,
    Invalid,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Valid => "valid",
            Claim::Invalid => "invalid",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Every instance must be globally true.
    Axiom,
    /// Whenever the premise is globally true in a model, so is the
    /// conclusion. Stronger than validity preservation.
    Rule,
    /// An axiom checked only on models meeting a semantic side condition.
    Conditioned,
    /// An existential over formulas, decided through a witness set.
    Witness,
}

/// One falsified instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Falsifier {
    pub instance: String,
    pub state: usize,
}

/// A schema instantiated for one vocabulary, ready to run on many models.
pub trait PreparedCheck: Send + Sync {
    fn instance_count(&self) -> usize;

    /// The first falsified instance, in instance order, and the first state
    /// where it fails.
    fn check(&self, m: &Model) -> Option<Falsifier>;
}

pub trait Schema: Send + Sync {
    fn name(&self) -> &str;

    /// Human-readable statement in the formula syntax.
    fn statement(&self) -> String;

    fn claim(&self) -> Claim;

    fn kind(&self) -> Kind;

    /// Needs models with an ideal relation.
    fn deontic(&self) -> bool {
        false
    }

    /// A countermodel is recorded as a finding rather than a failure.
    fn open_question(&self) -> bool {
        false
    }

    fn prepare(&self, vocab: &Vocabulary) -> Result<Box<dyn PreparedCheck>, SchemaError>;
}

#[derive(Default)]
pub struct Registry {
    schemas: Vec<Box<dyn Schema>>,
    by_name: HashMap<String, usize>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Every built-in schema.
    pub fn standard() -> Self {
        let mut r = Registry::new();
        for s in crate::schemas::all() {
            r.register(s);
        }
        r
    }

    /// Panics on a duplicate name.
    pub fn register(&mut self, schema: Box<dyn Schema>) {
        let name = schema.name().to_string();
        assert!(
            !self.by_name.contains_key(&name),
            "schema `{name}` registered twice"
        );
        self.by_name.insert(name, self.schemas.len());
        self.schemas.push(schema);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Schema> {
        self.by_name.get(name).map(|&i| &*self.schemas[i])
    }

    /// In registration order.
    pub fn iter(&self) -> impl Iterator<Item = &dyn Schema> {
        self.schemas.iter().map(|s| &**s)
    }

    pub fn names(&self) -> Vec<&str> {
        self.schemas.iter().map(|s| s.name()).collect()
    }
}
