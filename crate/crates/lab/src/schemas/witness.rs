//! Schemata whose consequent is a disjunction over all formulas `psi`.
//!
//! On a finite model the definable sets are the unions of definability
//! atoms, so the disjunction can be decided by looking at sets instead of
//! formulas.

use kpool_core::formula::{instantiate, Schema as Template, SchemaError};
use kpool_core::semantics::Evaluator;
use kpool_core::{Formula, Model};

use crate::pool::{pool, PoolKind, Vocabulary};
use crate::registry::{Claim, Falsifier, Kind, PreparedCheck, Schema};

#[derive(Clone, Copy)]
enum Which {
    /// `K{a|b}phi -> K{a}psi & K{b}(psi -> phi)` for some `psi`.
    Closure,
    /// `[a>b]K{b}phi -> K{b}[a>b](psi -> phi) & K{a}[a>b]psi` for some `psi`.
    SharedIntro,
}

pub struct WitnessSchema {
    name: &'static str,
    which: Which,
}

/// `psi` ranges over every definable set, so the check is exact: the least
/// definable set containing `R_a[w]` is `cl_a(w)`, and `K{b}(psi -> phi)`
/// only gets harder as `psi` grows.
pub fn closure() -> WitnessSchema {
    WitnessSchema {
        name: "Cl",
        which: Which::Closure,
    }
}

/// `psi` is the set `cl_a(w)` of the original model, held fixed across the
/// update like a Boolean formula would be. This is the witness the validity
/// argument for the axiom constructs.
pub fn shared_intro() -> WitnessSchema {
    WitnessSchema {
        name: "Int^+",
        which: Which::SharedIntro,
    }
}

impl Schema for WitnessSchema {
    fn name(&self) -> &str {
        self.name
    }

    fn statement(&self) -> String {
        match self.which {
            Which::Closure => "K{A|B}PHI -> K{A}psi & K{B}(psi -> PHI) for some psi".into(),
            Which::SharedIntro => {
                "[A>B]K{B}PHI -> K{B}[A>B](psi -> PHI) & K{A}[A>B]psi for some psi".into()
            }
        }
    }

    fn claim(&self) -> Claim {
        Claim::Valid
    }

    fn kind(&self) -> Kind {
        Kind::Witness
    }

    fn prepare(&self, vocab: &Vocabulary) -> Result<Box<dyn PreparedCheck>, SchemaError> {
        let template = match self.which {
            Which::Closure => "K{A|B}PHI",
            Which::SharedIntro => "[A>B]K{B}PHI",
        };
        let t = Template::parse(template)?;
        let instances = instantiate(&t, &pool(PoolKind::Primary, vocab), &vocab.agents)?;
        if instances.is_empty() {
            return Err(SchemaError::DomainTooSmall {
                agents: vocab.agents.len(),
                metas: 2,
            });
        }
        Ok(Box::new(Prepared {
            which: self.which,
            instances,
        }))
    }
}

struct Prepared {
    which: Which,
    instances: Vec<Formula>,
}

impl PreparedCheck for Prepared {
    fn instance_count(&self) -> usize {
        self.instances.len()
    }

    fn check(&self, m: &Model) -> Option<Falsifier> {
        let mut ev = Evaluator::new(m);
        let analysis = m.analysis();
        let idx = |a: &kpool_core::formula::Agent| m.agent_index(a).expect("vocabulary");
        self.instances.iter().find_map(|f| {
            let antecedent = ev.extension(f).expect("vocabulary");
            let (a, b, target, shown) = match (self.which, f) {
                (Which::Closure, Formula::Know { agent, deps, body }) => {
                    let body_ext = ev.extension(body).expect("vocabulary");
                    let shown = format!("{f} -> K{{{agent}}}psi & K{{{}}}(psi -> {body})", deps[0]);
                    (idx(agent), idx(&deps[0]), body_ext, shown)
                }
                (Which::SharedIntro, Formula::Share { sender, receiver, body }) => {
                    let Formula::Know { body: inner, .. } = &**body else {
                        unreachable!("template shape")
                    };
                    let boxed = Formula::share(sender.clone(), receiver.clone(), (**inner).clone());
                    let shown = format!(
                        "{f} -> K{{{receiver}}}[{sender}>{receiver}](psi -> {inner}) & K{{{sender}}}[{sender}>{receiver}]psi"
                    );
                    let ext = ev.extension(&boxed).expect("vocabulary");
                    (idx(sender), idx(receiver), ext, shown)
                }
                _ => unreachable!("template shape"),
            };
            antecedent.iter().find_map(|w| {
                let (psi, holds) = match self.which {
                    // K{a}psi with psi = cl_a(w); then K{b}(psi -> phi).
                    Which::Closure => {
                        let psi = analysis.closure(a, w);
                        (psi, (m.relation(b).cell(w) & psi).is_subset(target))
                    }
                    Which::SharedIntro => {
                        let psi = analysis.closure(a, w);
                        let knows_psi = m.relation(a).cell(w).is_subset(psi);
                        (psi, knows_psi && (m.relation(b).cell(w) & psi).is_subset(target))
                    }
                };
                (!holds).then(|| Falsifier {
                    instance: format!(
                        "{shown} with ||psi|| = {{{}}}",
                        psi.iter().map(|s| m.state_name(s)).collect::<Vec<_>>().join(",")
                    ),
                    state: w,
                })
            })
        })
    }
}
