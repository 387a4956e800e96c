//! Replacing a participant of a permitted share by an agent with the same
//! knowledge.
//!
//! The side condition "`K{x}phi <-> K{y}phi` for every `phi`" holds globally
//! in a model exactly when `cl_x(s) = cl_y(s)` at every state: both agents
//! know the same definable sets everywhere, though their cells may differ.

use kpool_core::formula::{Agent, SchemaError};
use kpool_core::semantics::Evaluator;
use kpool_core::{Formula, Model};

use crate::pool::Vocabulary;
use crate::registry::{Claim, Falsifier, Kind, PreparedCheck, Schema};

#[derive(Clone, Copy)]
enum Role {
    Sender,
    Receiver,
}

pub struct ReplaceSchema {
    name: &'static str,
    role: Role,
    claim: Claim,
}

/// If `K{a}phi <-> K{b}phi` then `Perm(a>c) <-> Perm(b>c)`.
pub fn sender() -> ReplaceSchema {
    ReplaceSchema {
        name: "SenderReplace",
        role: Role::Sender,
        claim: Claim::Valid,
    }
}

/// If `K{b}phi <-> K{c}phi` then `Perm(a>b) <-> Perm(a>c)`; claimed invalid.
pub fn receiver() -> ReplaceSchema {
    ReplaceSchema {
        name: "RecipientReplace",
        role: Role::Receiver,
        claim: Claim::Invalid,
    }
}

impl Schema for ReplaceSchema {
    fn name(&self) -> &str {
        self.name
    }

    fn statement(&self) -> String {
        match self.role {
            Role::Sender => "if K{A}phi <-> K{B}phi for all phi then Perm(A>C) <-> Perm(B>C)".into(),
            Role::Receiver => "if K{B}phi <-> K{C}phi for all phi then Perm(A>B) <-> Perm(A>C)".into(),
        }
    }

    fn claim(&self) -> Claim {
        self.claim
    }

    fn kind(&self) -> Kind {
        Kind::Conditioned
    }

    fn deontic(&self) -> bool {
        true
    }

    fn prepare(&self, vocab: &Vocabulary) -> Result<Box<dyn PreparedCheck>, SchemaError> {
        let ags = &vocab.agents;
        if ags.len() < 2 {
            return Err(SchemaError::DomainTooSmall {
                agents: ags.len(),
                metas: 3,
            });
        }
        // (x, y, z): x and y are the interchangeable pair, z the fixed party.
        let mut triples = Vec::new();
        for x in ags {
            for y in ags {
                for z in ags {
                    if x != y {
                        triples.push((x.clone(), y.clone(), z.clone()));
                    }
                }
            }
        }
        Ok(Box::new(Prepared {
            role: self.role,
            triples,
        }))
    }
}

struct Prepared {
    role: Role,
    triples: Vec<(Agent, Agent, Agent)>,
}

impl PreparedCheck for Prepared {
    fn instance_count(&self) -> usize {
        self.triples.len()
    }

    fn check(&self, m: &Model) -> Option<Falsifier> {
        let analysis = m.analysis();
        let mut ev = Evaluator::new(m);
        let all = m.all_states();
        self.triples.iter().find_map(|(x, y, z)| {
            let (xi, yi) = (m.agent_index(x)?, m.agent_index(y)?);
            let same = (0..m.num_states()).all(|s| analysis.closure(xi, s) == analysis.closure(yi, s));
            if !same {
                return None;
            }
            let perm = |a: &Agent, b: &Agent| Formula::PermShare {
                sender: a.clone(),
                receiver: b.clone(),
            };
            let f = match self.role {
                Role::Sender => Formula::iff(perm(x, z), perm(y, z)),
                Role::Receiver => Formula::iff(perm(z, x), perm(z, y)),
            };
            let ext = ev.extension(&f).expect("vocabulary");
            (ext != all).then(|| Falsifier {
                instance: format!("K{{{x}}}phi <-> K{{{y}}}phi for all phi, yet not {f}"),
                state: (all - ext).first().unwrap(),
            })
        })
    }
}
