//! Formulas of the pooling language: individual, agent-dependent and
//! distributed knowledge, the directed sharing box, information resolution,
//! the ideal-transition constants, and the macro operators that expand into
//! them.
//!
//! Concrete syntax:
//!
//! ```text
//! formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)? ;
//! or := and ("|" and)* ; and := unary ("&" unary)* ;
//! unary := "~" unary | modal ;
//! modal := "K{" AGENT ("|" AGENTLIST)? "}" unary
//!        | "D{" AGENTLIST "}" unary | "E{" AGENTLIST "}" unary
//!        | "[" AGENT ">" AGENT "]" unary
//!        | "Ri{" AGENTLIST "}" unary | "Rk{" AGENTLIST "}" unary
//!        | "Rk{" AGENT ";" AGENTLIST "}" unary
//!        | "P{" AGENT "}" unary | "Ob{" AGENT "}" unary | "Perm(" AGENT ">" AGENT ")"
//!        | "O" | "Ok{" AGENT "}" | "true" | "false" | ATOM | "(" formula ")"
//! ```

mod expand;
mod parser;
mod print;
pub mod schema;

use std::collections::BTreeSet;
use std::fmt;

pub use expand::{degenerate_macros, expand};
pub use parser::{parse, parse_template, ParseError};
pub use schema::{instantiate, MetaAgent, Schema, SchemaError, VarGuard};

/// An agent name: `[a-z][a-zA-Z0-9_]*`. Schema templates additionally use the
/// single upper-case letters `A`..`Z` as meta-agents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Agent(String);

impl Agent {
    pub fn new(name: impl Into<String>) -> Result<Self, InvalidName> {
        let name = name.into();
        if is_lower_token(&name) {
            Ok(Agent(name))
        } else {
            Err(InvalidName(name))
        }
    }

    pub(crate) fn meta(letter: char) -> Self {
        debug_assert!(letter.is_ascii_uppercase());
        Agent(letter.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for schema meta-agents (`A`, `B`, ...).
    pub fn is_meta(&self) -> bool {
        self.0.len() == 1 && self.0.as_bytes()[0].is_ascii_uppercase()
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid name `{0}`: expected [a-z][a-zA-Z0-9_]*")]
pub struct InvalidName(pub String);

/// `[a-z][a-zA-Z0-9_]*`
pub fn is_lower_token(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Reserved words that cannot name an atom.
pub(crate) const RESERVED_ATOMS: [&str; 2] = ["true", "false"];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `K{agent|deps}body`: `agent` knows `body` once its accessibility is cut
    /// down by the knowledge of every agent in `deps`. Empty `deps` is plain
    /// individual knowledge.
    Know {
        agent: Agent,
        deps: Vec<Agent>,
        body: Box<Formula>,
    },
    /// `D{G}body`, distributed knowledge.
    Dist { group: Vec<Agent>, body: Box<Formula> },
    /// `[sender>receiver]body`
    Share {
        sender: Agent,
        receiver: Agent,
        body: Box<Formula>,
    },
    /// `Ri{G}body`, information resolution.
    ResolveInfo { group: Vec<Agent>, body: Box<Formula> },
    /// The constant `O`: some ideal transition leaves the current state.
    Ideal,
    /// `Ok{a}`: some ideal transition from the current state stays inside the
    /// agent's information cell.
    Ok(Agent),

    // Macros, removed by `expand`.
    /// `E{G}body`
    Everybody { group: Vec<Agent>, body: Box<Formula> },
    /// `Rk{G}body`, knowledge resolution: forward then backward share chain.
    KnowRes { order: Vec<Agent>, body: Box<Formula> },
    /// `Rk{first;G}body`, forward share chain starting at `first`.
    KnowResFrom {
        first: Agent,
        group: Vec<Agent>,
        body: Box<Formula>,
    },
    /// `P{a}body`, permission to know.
    Permitted { agent: Agent, body: Box<Formula> },
    /// `Ob{a}body`, ought to know.
    Ought { agent: Agent, body: Box<Formula> },
    /// `Perm(a>b)`, permission to share.
    PermShare { sender: Agent, receiver: Agent },

    /// Schema metavariable (`PHI`, `PSI`, `CHI`); only produced by
    /// [`parse_template`].
    Var(String),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("agent `{0}` appears twice in a group")]
    DuplicateAgent(Agent),
    #[error("empty agent group")]
    EmptyGroup,
    #[error("`{agent}` cannot depend on itself")]
    SelfDependence { agent: Agent },
    #[error("`Rk{{{first};...}}` requires {first} to be in the group")]
    ChainStartOutsideGroup { first: Agent },
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn know(agent: Agent, body: Formula) -> Formula {
        Formula::Know {
            agent,
            deps: Vec::new(),
            body: Box::new(body),
        }
    }

    pub fn know_dep(agent: Agent, deps: Vec<Agent>, body: Formula) -> Formula {
        Formula::Know {
            agent,
            deps,
            body: Box::new(body),
        }
    }

    pub fn dist(group: Vec<Agent>, body: Formula) -> Formula {
        Formula::Dist {
            group,
            body: Box::new(body),
        }
    }

    pub fn share(sender: Agent, receiver: Agent, body: Formula) -> Formula {
        Formula::Share {
            sender,
            receiver,
            body: Box::new(body),
        }
    }

    pub fn resolve_info(group: Vec<Agent>, body: Formula) -> Formula {
        Formula::ResolveInfo {
            group,
            body: Box::new(body),
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Atom(_) | Top | Bot | Ideal | Ok(_) | PermShare { .. } | Var(_) => vec![],
            Not(f) => vec![f],
            And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r) => vec![l, r],
            Know { body, .. }
            | Dist { body, .. }
            | Share { body, .. }
            | ResolveInfo { body, .. }
            | Everybody { body, .. }
            | KnowRes { body, .. }
            | KnowResFrom { body, .. }
            | Permitted { body, .. }
            | Ought { body, .. } => vec![body],
        }
    }

    /// Agents named directly by this node (not its children).
    fn own_agents(&self) -> Vec<&Agent> {
        use Formula::*;
        match self {
            Know { agent, deps, .. } => std::iter::once(agent).chain(deps).collect(),
            Dist { group, .. }
            | ResolveInfo { group, .. }
            | Everybody { group, .. }
            | KnowRes { order: group, .. } => group.iter().collect(),
            KnowResFrom { first, group, .. } => std::iter::once(first).chain(group).collect(),
            Share {
                sender, receiver, ..
            }
            | PermShare { sender, receiver } => vec![sender, receiver],
            Ok(a) | Permitted { agent: a, .. } | Ought { agent: a, .. } => vec![a],
            _ => vec![],
        }
    }

    fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for child in self.children() {
            child.walk(visit);
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Atom(p) = f {
                out.insert(p.as_str());
            }
        });
        out
    }

    pub fn agents(&self) -> BTreeSet<&Agent> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| out.extend(f.own_agents()));
        out
    }

    pub fn is_macro(&self) -> bool {
        use Formula::*;
        matches!(
            self,
            Everybody { .. }
                | KnowRes { .. }
                | KnowResFrom { .. }
                | Permitted { .. }
                | Ought { .. }
                | PermShare { .. }
        )
    }

    /// No macro constructor anywhere in the tree.
    pub fn is_expanded(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |f| ok &= !f.is_macro());
        ok
    }

    pub fn has_vars(&self) -> bool {
        let mut found = false;
        self.walk(&mut |f| found |= matches!(f, Formula::Var(_)));
        found
    }

    pub fn is_modal(&self) -> bool {
        use Formula::*;
        !matches!(
            self,
            Atom(_) | Top | Bot | Not(_) | And(..) | Or(..) | Imp(..) | Iff(..) | Var(_)
        )
    }

    /// Member of the Boolean fragment built from atoms with negation and
    /// conjunction only. Other connectives are rejected even when definable.
    pub fn is_boolean_positive(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => f.is_boolean_positive(),
            Formula::And(l, r) => l.is_boolean_positive() && r.is_boolean_positive(),
            _ => false,
        }
    }

    /// Nesting depth of the tree; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Checks the structural invariants: groups non-empty and duplicate-free,
    /// dependency lists duplicate-free and never containing the knower.
    pub fn validate(&self) -> Result<(), FormulaError> {
        self.validate_node()?;
        self.children().into_iter().try_for_each(Formula::validate)
    }

    /// [`Formula::validate`] for this node only.
    pub(crate) fn validate_node(&self) -> Result<(), FormulaError> {
        use Formula::{Dist, Everybody, Know, KnowRes, KnowResFrom, ResolveInfo};
        fn distinct(agents: &[Agent]) -> Result<(), FormulaError> {
            let mut seen = BTreeSet::new();
            for a in agents {
                if !seen.insert(a) {
                    return Err(FormulaError::DuplicateAgent(a.clone()));
                }
            }
            Ok(())
        }
        fn group(agents: &[Agent]) -> Result<(), FormulaError> {
            if agents.is_empty() {
                return Err(FormulaError::EmptyGroup);
            }
            distinct(agents)
        }
        match self {
            Know { agent, deps, .. } => {
                distinct(deps)?;
                if deps.contains(agent) {
                    return Err(FormulaError::SelfDependence {
                        agent: agent.clone(),
                    });
                }
            }
            Dist { group: g, .. }
            | ResolveInfo { group: g, .. }
            | Everybody { group: g, .. }
            | KnowRes { order: g, .. } => group(g)?,
            KnowResFrom { first, group: g, .. } => {
                group(g)?;
                if !g.contains(first) {
                    return Err(FormulaError::ChainStartOutsideGroup {
                        first: first.clone(),
                    });
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ag(s: &str) -> Agent {
        Agent::new(s).unwrap()
    }

    #[test]
    fn agent_names() {
        assert!(Agent::new("a").is_ok());
        assert!(Agent::new("server_2").is_ok());
        assert!(Agent::new("A").is_err());
        assert!(Agent::new("").is_err());
        assert!(Agent::new("2a").is_err());
    }

    #[test]
    fn boolean_positive_fragment() {
        let f = parse("~(p & ~q)").unwrap();
        assert!(f.is_boolean_positive());
        assert!(!parse("p -> q").unwrap().is_boolean_positive());
        assert!(!parse("K{a}p").unwrap().is_boolean_positive());
        assert!(!parse("true").unwrap().is_boolean_positive());
        assert!(!parse("p | q").unwrap().is_boolean_positive());
    }

    #[test]
    fn validation_catches_bad_groups() {
        let f = Formula::know_dep(ag("a"), vec![ag("a")], Formula::atom("p"));
        assert_eq!(
            f.validate(),
            Err(FormulaError::SelfDependence { agent: ag("a") })
        );
        let f = Formula::dist(vec![], Formula::Top);
        assert_eq!(f.validate(), Err(FormulaError::EmptyGroup));
        let f = Formula::dist(vec![ag("a"), ag("a")], Formula::Top);
        assert_eq!(f.validate(), Err(FormulaError::DuplicateAgent(ag("a"))));
    }

    #[test]
    fn atoms_and_agents() {
        let f = parse("K{c|a,b}(p -> r) & [a>b]q").unwrap();
        assert_eq!(f.atoms().into_iter().collect::<Vec<_>>(), ["p", "q", "r"]);
        let names: Vec<_> = f.agents().into_iter().map(|a| a.as_str()).collect();
        assert_eq!(names, ["a", "b", "c"]);
    }
}
