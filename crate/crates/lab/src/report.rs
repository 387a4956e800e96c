//! Running a schema over model tiers and rendering the outcome.

use kpool_core::formula::SchemaError;
use kpool_core::kripke::save;
use kpool_core::Model;
use rayon::prelude::*;

use crate::enumerate::{self, EnumConfig};
use crate::gen::{gen_model, GenConfig};
use crate::pool::Vocabulary;
use crate::registry::{Claim, Falsifier, Kind, PreparedCheck, Registry, Schema};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LabError {
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("schema `{name}`: {source}")]
    Schema { name: String, source: SchemaError },
    #[error("schema `{0}` cannot be instantiated in any configured tier")]
    NoApplicableTier(String),
}

/// A source of models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tier {
    Exhaustive(EnumConfig),
    Random(GenConfig),
}

impl Tier {
    fn vocabulary(&self) -> Vocabulary {
        match self {
            Tier::Exhaustive(c) => Vocabulary::new(c.agents, c.atoms, c.deontic),
            Tier::Random(c) => Vocabulary::new(c.agents, c.atoms, c.deontic),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Tier::Exhaustive(c) => format!(
                "exhaustive states<={} agents={} atoms={}{}",
                c.max_states,
                c.agents,
                c.atoms,
                if c.deontic { " deontic" } else { "" }
            ),
            Tier::Random(c) => format!(
                "random seed={} samples={} states<={} agents={} atoms={}{}",
                c.seed,
                c.samples,
                c.max_states,
                c.agents,
                c.atoms,
                if c.deontic { " deontic" } else { "" }
            ),
        }
    }
}

/// Tiers are searched in order; the first countermodel ends the run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabConfig {
    pub tiers: Vec<Tier>,
}

impl LabConfig {
    /// All models up to isomorphism with at most three states (four for
    /// schemata claimed invalid), two agents and two atoms, then 500 random
    /// models with at most five states, three agents and three atoms.
    pub fn default_for(schema: &dyn Schema) -> LabConfig {
        Self::with_random(schema, GenConfig::default())
    }

    /// The default exhaustive tier followed by the given random tier; its
    /// `deontic` flag is taken from the schema.
    pub fn with_random(schema: &dyn Schema, random: GenConfig) -> LabConfig {
        let deontic = schema.deontic();
        let exhaustive = EnumConfig {
            max_states: match schema.claim() {
                Claim::Valid => 3,
                Claim::Invalid => 4,
            },
            agents: 2,
            atoms: 2,
            deontic,
        };
        LabConfig {
            tiers: vec![
                Tier::Exhaustive(exhaustive),
                Tier::Random(GenConfig { deontic, ..random }),
            ],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ValidOnSample,
    Countermodel,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ValidOnSample => "valid-on-sample",
            Verdict::Countermodel => "countermodel",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Countermodel {
    pub model: Model,
    pub instance: String,
    pub state: String,
    pub tier: String,
}

/// Whether the outcome agrees with the claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A countermodel for a schema whose validity is an open question.
    Finding,
}

#[derive(Clone, Debug)]
pub struct LabReport {
    pub name: String,
    pub statement: String,
    pub claim: Claim,
    pub kind: Kind,
    pub open_question: bool,
    /// Instances in the last tier searched.
    pub instances: usize,
    /// Models examined across all tiers, up to and including a countermodel.
    pub models: usize,
    pub verdict: Verdict,
    pub countermodel: Option<Countermodel>,
}

impl LabReport {
    pub fn status(&self) -> Status {
        match (self.claim, self.verdict) {
            (Claim::Valid, Verdict::ValidOnSample) | (Claim::Invalid, Verdict::Countermodel) => Status::Pass,
            (Claim::Valid, Verdict::Countermodel) if self.open_question => Status::Finding,
            _ => Status::Fail,
        }
    }

    /// The schema line, any countermodel block, and a status line.
    pub fn render(&self) -> String {
        let mut out = format!(
            "SCHEMA {} models={} instances={} verdict={}\n",
            self.name,
            self.models,
            self.instances,
            self.verdict.as_str()
        );
        if let Some(c) = &self.countermodel {
            out.push_str(&save(&c.model));
            out.push('\n');
            out.push_str(&format!("instance={} state={}\n", c.instance, c.state));
        }
        let status = match self.status() {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Finding => "open-question",
        };
        out.push_str(&format!("STATUS {} claim={} result={}", self.name, self.claim, status));
        if self.status() == Status::Fail && self.kind == Kind::Rule {
            out.push_str(" note=\"rule-form failure (per-model)\"");
        }
        if let Some(c) = &self.countermodel {
            out.push_str(&format!(" tier=\"{}\"", c.tier));
        }
        out.push('\n');
        out
    }
}

/// Models are checked in parallel chunks; within a chunk the lowest index
/// wins, so the reported countermodel does not depend on scheduling.
const CHUNK: usize = 2048;

fn search(
    check: &dyn PreparedCheck,
    models: impl Iterator<Item = Model>,
) -> (usize, Option<(Model, Falsifier)>) {
    let mut models = models.peekable();
    let mut seen = 0;
    while models.peek().is_some() {
        let chunk: Vec<Model> = models.by_ref().take(CHUNK).collect();
        let hit = chunk
            .par_iter()
            .enumerate()
            .find_map_first(|(i, m)| check.check(m).map(|f| (i, f)));
        if let Some((i, f)) = hit {
            return (seen + i + 1, Some((chunk[i].clone(), f)));
        }
        seen += chunk.len();
    }
    (seen, None)
}

fn search_random(check: &dyn PreparedCheck, cfg: &GenConfig) -> (usize, Option<(Model, Falsifier)>) {
    let hit = (0..cfg.samples as u64)
        .into_par_iter()
        .find_map_first(|i| {
            let m = gen_model(cfg, i);
            check.check(&m).map(|f| (i, m, f))
        });
    match hit {
        Some((i, m, f)) => (i as usize + 1, Some((m, f))),
        None => (cfg.samples, None),
    }
}

pub fn check_schema(schema: &dyn Schema, cfg: &LabConfig) -> Result<LabReport, LabError> {
    let mut models = 0;
    let mut instances = None;
    let mut found = None;
    for tier in &cfg.tiers {
        let prepared = match schema.prepare(&tier.vocabulary()) {
            Ok(p) => p,
            // Too few agents for this tier; later tiers may have more.
            Err(SchemaError::DomainTooSmall { .. }) => continue,
            Err(source) => {
                return Err(LabError::Schema {
                    name: schema.name().to_string(),
                    source,
                })
            }
        };
        instances = Some(prepared.instance_count());
        let (seen, hit) = match tier {
            // Small exhaustive tiers are shared by many schemata.
            Tier::Exhaustive(c) if c.max_states <= 3 => {
                let list = enumerate::cached(*c);
                search(&*prepared, list.iter().cloned())
            }
            Tier::Exhaustive(c) => search(&*prepared, enumerate::models(*c)),
            Tier::Random(c) => search_random(&*prepared, c),
        };
        models += seen;
        if let Some((m, f)) = hit {
            found = Some(Countermodel {
                state: m.state_name(f.state).to_string(),
                instance: f.instance,
                model: m,
                tier: tier.describe(),
            });
            break;
        }
    }
    let instances = instances.ok_or_else(|| LabError::NoApplicableTier(schema.name().to_string()))?;
    Ok(LabReport {
        name: schema.name().to_string(),
        statement: schema.statement(),
        claim: schema.claim(),
        kind: schema.kind(),
        open_question: schema.open_question(),
        instances,
        models,
        verdict: match found {
            Some(_) => Verdict::Countermodel,
            None => Verdict::ValidOnSample,
        },
        countermodel: found,
    })
}

/// [`check_schema`] by name, at the default configuration with the random
/// tier replaced by `random`.
pub fn check_named(registry: &Registry, name: &str, random: &GenConfig) -> Result<LabReport, LabError> {
    let schema = registry
        .get(name)
        .ok_or_else(|| LabError::UnknownSchema(name.to_string()))?;
    check_schema(schema, &LabConfig::with_random(schema, random.clone()))
}
