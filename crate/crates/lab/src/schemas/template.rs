//! Schemata given as formula templates.

use kpool_core::formula::{instantiate, Schema as Template, SchemaError, VarGuard};
use kpool_core::semantics::Evaluator;
use kpool_core::{Formula, Model};

use crate::pool::{pool, PoolKind, Vocabulary};
use crate::registry::{Claim, Falsifier, Kind, PreparedCheck, Schema};

/// An axiom, or a rule when `conclusion` is set (then `template` is the
/// premise).
pub struct TemplateSchema {
    name: &'static str,
    template: &'static str,
    conclusion: Option<&'static str>,
    prop_plus: bool,
    atom_only: bool,
    distinct: Vec<(char, char)>,
    claim: Claim,
    deontic: bool,
    open: bool,
}

pub fn axiom(name: &'static str, template: &'static str) -> TemplateSchema {
    TemplateSchema {
        name,
        template,
        conclusion: None,
        prop_plus: false,
        atom_only: false,
        distinct: Vec::new(),
        claim: Claim::Valid,
        deontic: false,
        open: false,
    }
}

pub fn rule(name: &'static str, premise: &'static str, conclusion: &'static str) -> TemplateSchema {
    TemplateSchema {
        conclusion: Some(conclusion),
        ..axiom(name, premise)
    }
}

impl TemplateSchema {
    /// Every metavariable ranges over Boolean-positive formulas only.
    pub fn prop_plus(mut self) -> Self {
        self.prop_plus = true;
        self
    }

    pub fn atoms_only(mut self) -> Self {
        self.atom_only = true;
        self
    }

    pub fn distinct(mut self, x: char, y: char) -> Self {
        self.distinct.push((x, y));
        self
    }

    pub fn invalid(mut self) -> Self {
        self.claim = Claim::Invalid;
        self
    }

    pub fn deontic(mut self) -> Self {
        self.deontic = true;
        self
    }

    pub fn open(mut self) -> Self {
        self.open = true;
        self
    }

    fn text(&self) -> String {
        match self.conclusion {
            None => self.template.to_string(),
            Some(c) => format!("({}) -> ({})", self.template, c),
        }
    }

    fn compiled(&self) -> Result<Template, SchemaError> {
        let mut t = Template::parse(&self.text())?;
        for v in t.variables() {
            if self.prop_plus {
                t = t.guard(&v, VarGuard::BooleanPositive);
            } else if self.atom_only {
                t = t.guard(&v, VarGuard::AtomOnly);
            }
        }
        for &(x, y) in &self.distinct {
            t = t.distinct(x, y);
        }
        Ok(t)
    }

    fn pool_kind(&self, vars: usize) -> PoolKind {
        match () {
            _ if self.atom_only => PoolKind::Atoms,
            _ if self.prop_plus => PoolKind::BooleanPositive,
            _ if vars <= 1 => PoolKind::Primary,
            _ if vars == 2 => PoolKind::Secondary,
            _ => PoolKind::Small,
        }
    }
}

impl Schema for TemplateSchema {
    fn name(&self) -> &str {
        self.name
    }

    fn statement(&self) -> String {
        match self.conclusion {
            None => self.template.to_string(),
            Some(c) => format!("from {} infer {}", self.template, c),
        }
    }

    fn claim(&self) -> Claim {
        self.claim
    }

    fn kind(&self) -> Kind {
        match self.conclusion {
            None => Kind::Axiom,
            Some(_) => Kind::Rule,
        }
    }

    fn deontic(&self) -> bool {
        self.deontic
    }

    fn open_question(&self) -> bool {
        self.open
    }

    fn prepare(&self, vocab: &Vocabulary) -> Result<Box<dyn PreparedCheck>, SchemaError> {
        let t = self.compiled()?;
        let metas = t.meta_agents().len();
        if metas > 0 && vocab.agents.is_empty() {
            return Err(SchemaError::DomainTooSmall { agents: 0, metas });
        }
        let phis = pool(self.pool_kind(t.variables().len()), vocab);
        let instances = instantiate(&t, &phis, &vocab.agents)?;
        if instances.is_empty() {
            return Err(SchemaError::DomainTooSmall {
                agents: vocab.agents.len(),
                metas,
            });
        }
        Ok(match self.conclusion {
            None => Box::new(Axioms { instances }),
            Some(_) => Box::new(Rules {
                pairs: instances
                    .into_iter()
                    .map(|f| match f {
                        Formula::Imp(p, c) => (*p, *c),
                        _ => unreachable!("rule templates are implications"),
                    })
                    .collect(),
            }),
        })
    }
}

struct Axioms {
    instances: Vec<Formula>,
}

impl PreparedCheck for Axioms {
    fn instance_count(&self) -> usize {
        self.instances.len()
    }

    fn check(&self, m: &Model) -> Option<Falsifier> {
        let mut ev = Evaluator::new(m);
        let all = m.all_states();
        self.instances.iter().find_map(|f| {
            let ext = ev.extension(f).expect("instances use the model's vocabulary");
            (ext != all).then(|| Falsifier {
                instance: f.to_string(),
                state: (all - ext).first().unwrap(),
            })
        })
    }
}

struct Rules {
    pairs: Vec<(Formula, Formula)>,
}

impl PreparedCheck for Rules {
    fn instance_count(&self) -> usize {
        self.pairs.len()
    }

    fn check(&self, m: &Model) -> Option<Falsifier> {
        let mut ev = Evaluator::new(m);
        let all = m.all_states();
        self.pairs.iter().find_map(|(premise, conclusion)| {
            if ev.extension(premise).expect("vocabulary") != all {
                return None;
            }
            let ext = ev.extension(conclusion).expect("vocabulary");
            (ext != all).then(|| Falsifier {
                instance: format!("from {premise} infer {conclusion}"),
                state: (all - ext).first().unwrap(),
            })
        })
    }
}
