//! Axiom schemata: formula templates over metavariables `PHI`, `PSI`, `CHI`
//! and meta-agents `A`, `B`, `C`, instantiated from finite domains.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{parse_template, Agent, Formula, ParseError};

/// Which formulas a metavariable may stand for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VarGuard {
    #[default]
    Any,
    /// Atoms, negation and conjunction only.
    BooleanPositive,
    AtomOnly,
}

impl VarGuard {
    pub fn admits(self, f: &Formula) -> bool {
        match self {
            VarGuard::Any => true,
            VarGuard::BooleanPositive => f.is_boolean_positive(),
            VarGuard::AtomOnly => matches!(f, Formula::Atom(_)),
        }
    }
}

/// A meta-agent letter such as `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaAgent(pub char);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub template: Formula,
    /// Guards per metavariable; unlisted variables are unrestricted.
    pub guards: BTreeMap<String, VarGuard>,
    /// Meta-agent pairs that must be instantiated by different agents.
    /// Meta-agents are otherwise free to coincide.
    pub distinct: Vec<(MetaAgent, MetaAgent)>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SchemaError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("metavariable `{0}` has an empty domain")]
    EmptyFormulaDomain(String),
    #[error("{agents} agent(s) cannot instantiate the {metas} meta-agents of the schema")]
    DomainTooSmall { agents: usize, metas: usize },
}

impl Schema {
    pub fn parse(template: &str) -> Result<Schema, SchemaError> {
        Ok(Schema {
            template: parse_template(template)?,
            guards: BTreeMap::new(),
            distinct: Vec::new(),
        })
    }

    pub fn guard(mut self, var: &str, guard: VarGuard) -> Schema {
        self.guards.insert(var.to_string(), guard);
        self
    }

    pub fn distinct(mut self, x: char, y: char) -> Schema {
        self.distinct.push((MetaAgent(x), MetaAgent(y)));
        self
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect(&self.template, &mut out, &mut BTreeSet::new());
        out
    }

    pub fn meta_agents(&self) -> BTreeSet<MetaAgent> {
        let mut out = BTreeSet::new();
        collect(&self.template, &mut BTreeSet::new(), &mut out);
        out
    }
}

fn collect(f: &Formula, vars: &mut BTreeSet<String>, metas: &mut BTreeSet<MetaAgent>) {
    if let Formula::Var(v) = f {
        vars.insert(v.clone());
    }
    for a in f.agents() {
        if a.is_meta() {
            metas.insert(MetaAgent(a.as_str().chars().next().unwrap()));
        }
    }
    for c in f.children() {
        collect(c, vars, metas);
    }
}

/// Replaces metavariables and meta-agents. Unmapped names are kept.
pub fn substitute(
    f: &Formula,
    vars: &BTreeMap<String, Formula>,
    agents: &BTreeMap<MetaAgent, Agent>,
) -> Formula {
    let ag = |a: &Agent| -> Agent {
        if a.is_meta() {
            let m = MetaAgent(a.as_str().chars().next().unwrap());
            agents.get(&m).cloned().unwrap_or_else(|| a.clone())
        } else {
            a.clone()
        }
    };
    let group = |g: &[Agent]| g.iter().map(ag).collect::<Vec<_>>();
    let sub = |g: &Formula| Box::new(substitute(g, vars, agents));
    use Formula::*;
    match f {
        Var(v) => vars.get(v).cloned().unwrap_or_else(|| f.clone()),
        Atom(_) | Top | Bot | Ideal => f.clone(),
        Ok(a) => Ok(ag(a)),
        Not(g) => Not(sub(g)),
        And(l, r) => And(sub(l), sub(r)),
        Or(l, r) => Or(sub(l), sub(r)),
        Imp(l, r) => Imp(sub(l), sub(r)),
        Iff(l, r) => Iff(sub(l), sub(r)),
        Know { agent, deps, body } => Know {
            agent: ag(agent),
            deps: group(deps),
            body: sub(body),
        },
        Dist { group: g, body } => Dist {
            group: group(g),
            body: sub(body),
        },
        ResolveInfo { group: g, body } => ResolveInfo {
            group: group(g),
            body: sub(body),
        },
        Everybody { group: g, body } => Everybody {
            group: group(g),
            body: sub(body),
        },
        KnowRes { order, body } => KnowRes {
            order: group(order),
            body: sub(body),
        },
        KnowResFrom {
            first,
            group: g,
            body,
        } => KnowResFrom {
            first: ag(first),
            group: group(g),
            body: sub(body),
        },
        Share {
            sender,
            receiver,
            body,
        } => Share {
            sender: ag(sender),
            receiver: ag(receiver),
            body: sub(body),
        },
        Permitted { agent, body } => Permitted {
            agent: ag(agent),
            body: sub(body),
        },
        Ought { agent, body } => Ought {
            agent: ag(agent),
            body: sub(body),
        },
        PermShare { sender, receiver } => PermShare {
            sender: ag(sender),
            receiver: ag(receiver),
        },
    }
}

/// Every assignment of meta-agents to `agents`, in lexicographic order.
pub fn agent_assignments(
    schema: &Schema,
    agents: &[Agent],
) -> Vec<BTreeMap<MetaAgent, Agent>> {
    let metas: Vec<MetaAgent> = schema.meta_agents().into_iter().collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; metas.len()];
    if !metas.is_empty() && agents.is_empty() {
        return out;
    }
    loop {
        let map: BTreeMap<MetaAgent, Agent> = metas
            .iter()
            .zip(&idx)
            .map(|(&m, &i)| (m, agents[i].clone()))
            .collect();
        if schema.distinct.iter().all(|(x, y)| map.get(x) != map.get(y)) {
            out.push(map);
        }
        // Odometer with the first meta-agent most significant.
        let mut k = metas.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < agents.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// All instances of `schema` with metavariables drawn from `phis` (subject to
/// their guards) and meta-agents from `agents`. Meta-agents may coincide
/// unless the schema requires them to differ; instances that are not
/// well-formed (such as `K{a|a}p`) are skipped. The result is deduplicated
/// and keeps first-occurrence order.
pub fn instantiate(
    schema: &Schema,
    phis: &[Formula],
    agents: &[Agent],
) -> Result<Vec<Formula>, SchemaError> {
    let vars: Vec<String> = schema.variables().into_iter().collect();
    let domains: Vec<Vec<&Formula>> = vars
        .iter()
        .map(|v| {
            let guard = schema.guards.get(v).copied().unwrap_or_default();
            phis.iter().filter(|f| guard.admits(f)).collect::<Vec<_>>()
        })
        .collect();
    if let Some(i) = domains.iter().position(Vec::is_empty) {
        return Err(SchemaError::EmptyFormulaDomain(vars[i].clone()));
    }

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for agent_map in agent_assignments(schema, agents) {
        let mut idx = vec![0usize; vars.len()];
        'vars: loop {
            let var_map: BTreeMap<String, Formula> = vars
                .iter()
                .zip(&idx)
                .zip(&domains)
                .map(|((v, &i), d)| (v.clone(), d[i].clone()))
                .collect();
            let f = substitute(&schema.template, &var_map, &agent_map);
            if f.validate().is_ok() && seen.insert(f.clone()) {
                out.push(f);
            }
            let mut k = vars.len();
            loop {
                if k == 0 {
                    break 'vars;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < domains[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
    let metas = schema.meta_agents().len();
    if out.is_empty() && metas > 0 {
        return Err(SchemaError::DomainTooSmall {
            agents: agents.len(),
            metas,
        });
    }
    Ok(out)
}
