//! Finite multi-agent S5 models with an optional ideal relation.
//!
//! Each agent's accessibility relation is stored as a partition (the cell of
//! every state), so reflexivity, symmetry and transitivity hold by
//! construction. Valuations and the ideal relation are fixed by updates and
//! live in a shared [`Frame`]; only the relations change.

mod fingerprint;
mod io;
mod partition;
mod stateset;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::formula::{is_lower_token, Agent, RESERVED_ATOMS};

pub use fingerprint::{fingerprint, Fingerprint};
pub use io::{load, load_strict, save, to_json_value};
pub use partition::{atoms_partition, dep_closure, dependence_classes, Analysis};
pub use stateset::{StateSet, MAX_STATES};

/// Upper bound on the number of agents in a model.
pub const MAX_AGENTS: usize = 64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid model JSON: {0}")]
    Json(String),
    #[error("model has no states")]
    NoStates,
    #[error("model has {0} states; at most {MAX_STATES} are supported")]
    TooManyStates(usize),
    #[error("model has {0} agents; at most {MAX_AGENTS} are supported")]
    TooManyAgents(usize),
    #[error("invalid {kind} name `{name}`")]
    InvalidName { kind: &'static str, name: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("relation of agent `{agent}` is not a partition of the states")]
    NotPartition { agent: String },
    #[error("relation of agent `{agent}` is not an equivalence relation: ({from}, {to}) is implied by transitivity but not listed")]
    NotTransitive {
        agent: String,
        from: String,
        to: String,
    },
    #[error("valuation of atom `{0}` mentions states outside the model")]
    ValuationOutOfRange(String),
    #[error("ideal relation is empty")]
    EmptyIdeal,
    #[error("ideal relation is not symmetric")]
    IdealNotSymmetric,
    #[error("ideal pair ({0}, {1}) is not in any agent's relation")]
    IdealOutsideRelations(String, String),
    #[error("point index {0} out of range")]
    PointOutOfRange(usize),
}

/// An equivalence relation on `{0, .., n-1}` stored as the cell of each state.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    cells: Vec<StateSet>,
}

impl Relation {
    pub fn identity(n: usize) -> Self {
        Relation {
            cells: (0..n).map(StateSet::singleton).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Relation {
            cells: vec![StateSet::full(n); n],
        }
    }

    /// Builds a relation from disjoint blocks covering `{0, .., n-1}`.
    pub fn from_blocks(n: usize, blocks: &[StateSet]) -> Option<Self> {
        let mut cells = vec![StateSet::EMPTY; n];
        let mut seen = StateSet::EMPTY;
        for &block in blocks {
            if block.is_empty() || block.intersects(seen) || !block.is_subset(StateSet::full(n)) {
                return None;
            }
            seen |= block;
            for s in block {
                cells[s] = block;
            }
        }
        (seen == StateSet::full(n)).then_some(Relation { cells })
    }

    /// Smallest equivalence relation containing the given pairs.
    pub fn closure_of_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (s, u) in pairs {
            let (rs, ru) = (find(&mut parent, s), find(&mut parent, u));
            if rs != ru {
                parent[rs.max(ru)] = rs.min(ru);
            }
        }
        let mut by_root = vec![StateSet::EMPTY; n];
        for s in 0..n {
            let r = find(&mut parent, s);
            by_root[r].insert(s);
        }
        let cells = (0..n).map(|s| by_root[find(&mut parent, s)]).collect();
        Relation { cells }
    }

    /// Wraps per-state cells without checking that they form a partition.
    pub(crate) fn from_cells_unchecked(cells: Vec<StateSet>) -> Self {
        Relation { cells }
    }

    pub fn is_partition(&self) -> bool {
        let n = self.cells.len();
        self.cells.iter().enumerate().all(|(s, &cell)| {
            cell.contains(s)
                && cell.is_subset(StateSet::full(n))
                && cell.iter().all(|u| self.cells[u] == cell)
        })
    }

    pub fn num_states(&self) -> usize {
        self.cells.len()
    }

    /// `R[s]`
    pub fn cell(&self, s: usize) -> StateSet {
        self.cells[s]
    }

    pub fn cells(&self) -> &[StateSet] {
        &self.cells
    }

    pub fn contains(&self, s: usize, u: usize) -> bool {
        self.cells[s].contains(u)
    }

    /// Distinct cells, ordered by their smallest member.
    pub fn blocks(&self) -> Vec<StateSet> {
        let mut out = Vec::new();
        let mut seen = StateSet::EMPTY;
        for (s, &cell) in self.cells.iter().enumerate() {
            if !seen.contains(s) {
                seen |= cell;
                out.push(cell);
            }
        }
        out
    }

    pub fn intersect(&self, other: &Relation) -> Relation {
        Relation {
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(&a, &b)| a & b)
                .collect(),
        }
    }

    /// Pair-set inclusion.
    pub fn is_subset(&self, other: &Relation) -> bool {
        self.cells
            .iter()
            .zip(&other.cells)
            .all(|(&a, &b)| a.is_subset(b))
    }

    /// Number of ordered pairs, including reflexive ones.
    pub fn pair_count(&self) -> usize {
        self.cells.iter().map(|c| c.len()).sum()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.blocks()).finish()
    }
}

/// The parts of a model that updates never change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    states: Vec<String>,
    agents: Vec<Agent>,
    atoms: Vec<String>,
    /// Extension of each atom, indexed like `atoms`.
    valuation: Vec<StateSet>,
    /// `O[s]` for every state, if the model is deontic.
    ideal: Option<Vec<StateSet>>,
}

/// A finite model, optionally with a designated point.
///
/// Cloning is cheap: the frame is shared and the derived [`Analysis`] is
/// reference counted.
#[derive(Clone)]
pub struct Model {
    frame: Arc<Frame>,
    rel: Vec<Relation>,
    point: Option<usize>,
    analysis: OnceLock<Arc<Analysis>>,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.frame, &other.frame) || self.frame == other.frame)
            && self.rel == other.rel
            && self.point == other.point
    }
}

impl Eq for Model {}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model")
            .field("states", &self.frame.states)
            .field("agents", &self.frame.agents)
            .field("atoms", &self.frame.atoms)
            .field("valuation", &self.frame.valuation)
            .field("rel", &self.rel)
            .field("ideal", &self.frame.ideal)
            .field("point", &self.point)
            .finish()
    }
}

/// Ordered pairs whose both members lie in one of `rel`'s cells, as a
/// per-state neighbourhood.
fn union_of(rel: &[Relation], n: usize) -> Vec<StateSet> {
    (0..n)
        .map(|s| rel.iter().fold(StateSet::EMPTY, |acc, r| acc | r.cell(s)))
        .collect()
}

fn check_names<'a>(
    kind: &'static str,
    names: impl IntoIterator<Item = &'a str>,
    valid: impl Fn(&str) -> bool,
) -> Result<(), ModelError> {
    let mut seen = std::collections::HashSet::new();
    for name in names {
        if !valid(name) {
            return Err(ModelError::InvalidName {
                kind,
                name: name.to_string(),
            });
        }
        if !seen.insert(name) {
            return Err(ModelError::Duplicate {
                kind,
                name: name.to_string(),
            });
        }
    }
    Ok(())
}

impl Model {
    /// Assembles and fully validates a model. `valuation` is indexed like
    /// `atoms`, `rel` like `agents`, and `ideal` (if present) gives `O[s]`
    /// for every state.
    pub fn new(
        states: Vec<String>,
        agents: Vec<Agent>,
        atoms: Vec<String>,
        rel: Vec<Relation>,
        valuation: Vec<StateSet>,
        ideal: Option<Vec<StateSet>>,
        point: Option<usize>,
    ) -> Result<Model, ModelError> {
        let model = Model {
            frame: Arc::new(Frame {
                states,
                agents,
                atoms,
                valuation,
                ideal,
            }),
            rel,
            point,
            analysis: OnceLock::new(),
        };
        model.validate()?;
        Ok(model)
    }

    /// Checks every model invariant: unique well-formed names, relations that
    /// partition the states, a valuation inside the state set, and (for
    /// deontic models) a non-empty symmetric ideal relation contained in the
    /// union of the agents' relations.
    pub fn validate(&self) -> Result<(), ModelError> {
        self.validate_structure()?;
        self.validate_ideal_support()
    }

    /// Every invariant except ideal support. Share updates delete links, so
    /// an updated deontic model can lose the support of an ideal pair while
    /// remaining a perfectly good structure to evaluate formulas on.
    pub fn validate_structure(&self) -> Result<(), ModelError> {
        let f = &*self.frame;
        let n = f.states.len();
        if n == 0 {
            return Err(ModelError::NoStates);
        }
        if n > MAX_STATES {
            return Err(ModelError::TooManyStates(n));
        }
        if f.agents.len() > MAX_AGENTS {
            return Err(ModelError::TooManyAgents(f.agents.len()));
        }
        check_names("state", f.states.iter().map(String::as_str), |s| {
            !s.is_empty() && !s.chars().any(char::is_whitespace)
        })?;
        check_names("agent", f.agents.iter().map(Agent::as_str), |_| true)?;
        check_names("atom", f.atoms.iter().map(String::as_str), |s| {
            is_lower_token(s) && !RESERVED_ATOMS.contains(&s)
        })?;
        assert_eq!(self.rel.len(), f.agents.len(), "one relation per agent");
        assert_eq!(f.valuation.len(), f.atoms.len(), "one extension per atom");
        for (agent, r) in f.agents.iter().zip(&self.rel) {
            if r.num_states() != n || !r.is_partition() {
                return Err(ModelError::NotPartition {
                    agent: agent.to_string(),
                });
            }
        }
        for (atom, &ext) in f.atoms.iter().zip(&f.valuation) {
            if !ext.is_subset(StateSet::full(n)) {
                return Err(ModelError::ValuationOutOfRange(atom.clone()));
            }
        }
        if let Some(p) = self.point {
            if p >= n {
                return Err(ModelError::PointOutOfRange(p));
            }
        }
        if let Some(ideal) = &f.ideal {
            assert_eq!(ideal.len(), n, "one ideal neighbourhood per state");
            if ideal.iter().all(|o| o.is_empty()) {
                return Err(ModelError::EmptyIdeal);
            }
            for (s, &o) in ideal.iter().enumerate() {
                if !o.is_subset(StateSet::full(n)) || o.iter().any(|u| !ideal[u].contains(s)) {
                    return Err(ModelError::IdealNotSymmetric);
                }
            }
        }
        Ok(())
    }

    /// `O ⊆ ∪_a R_a`
    pub fn validate_ideal_support(&self) -> Result<(), ModelError> {
        let Some(ideal) = &self.frame.ideal else {
            return Ok(());
        };
        let n = self.num_states();
        let union = union_of(&self.rel, n);
        for s in 0..n {
            if let Some(u) = (ideal[s] - union[s]).first() {
                return Err(ModelError::IdealOutsideRelations(
                    self.state_name(s).to_string(),
                    self.state_name(u).to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Same frame and point, new relations. The caller guarantees that each
    /// relation is a partition of the same state set.
    pub(crate) fn with_relations(&self, rel: Vec<Relation>) -> Model {
        debug_assert!(rel.iter().all(Relation::is_partition));
        Model {
            frame: Arc::clone(&self.frame),
            rel,
            point: self.point,
            analysis: OnceLock::new(),
        }
    }

    pub fn with_point(&self, point: Option<usize>) -> Model {
        if let Some(p) = point {
            assert!(p < self.num_states(), "point out of range");
        }
        Model {
            frame: Arc::clone(&self.frame),
            rel: self.rel.clone(),
            point,
            analysis: self.analysis.clone(),
        }
    }

    /// Drops or replaces the ideal relation, keeping everything else.
    pub fn with_ideal(&self, ideal: Option<Vec<StateSet>>) -> Result<Model, ModelError> {
        let mut frame = (*self.frame).clone();
        frame.ideal = ideal;
        let model = Model {
            frame: Arc::new(frame),
            rel: self.rel.clone(),
            point: self.point,
            analysis: OnceLock::new(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn num_states(&self) -> usize {
        self.frame.states.len()
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.num_states())
    }

    pub fn states(&self) -> &[String] {
        &self.frame.states
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.frame.states[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.frame.states.iter().position(|s| s == name)
    }

    pub fn agents(&self) -> &[Agent] {
        &self.frame.agents
    }

    pub fn agent_index(&self, agent: &Agent) -> Option<usize> {
        self.frame.agents.iter().position(|a| a == agent)
    }

    pub fn agent_by_name(&self, name: &str) -> Option<usize> {
        self.frame.agents.iter().position(|a| a.as_str() == name)
    }

    pub fn atoms(&self) -> &[String] {
        &self.frame.atoms
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.frame.atoms.iter().position(|p| p == name)
    }

    /// `||p||`
    pub fn extension_of_atom(&self, p: usize) -> StateSet {
        self.frame.valuation[p]
    }

    pub fn valuation(&self) -> &[StateSet] {
        &self.frame.valuation
    }

    /// Atoms true at `s`, by index.
    pub fn atoms_at(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.frame.atoms.len()).filter(move |&p| self.frame.valuation[p].contains(s))
    }

    pub fn relations(&self) -> &[Relation] {
        &self.rel
    }

    pub fn relation(&self, agent: usize) -> &Relation {
        &self.rel[agent]
    }

    /// `D_G[s]` for a group given by agent indices.
    pub fn group_cell(&self, group: &[usize], s: usize) -> StateSet {
        group
            .iter()
            .fold(self.all_states(), |acc, &a| acc & self.rel[a].cell(s))
    }

    /// `∩_{a∈G} R_a`
    pub fn group_relation(&self, group: &[usize]) -> Relation {
        let n = self.num_states();
        Relation::from_cells_unchecked((0..n).map(|s| self.group_cell(group, s)).collect())
    }

    pub fn is_deontic(&self) -> bool {
        self.frame.ideal.is_some()
    }

    /// `O[s]` for every state.
    pub fn ideal(&self) -> Option<&[StateSet]> {
        self.frame.ideal.as_deref()
    }

    pub fn point(&self) -> Option<usize> {
        self.point
    }

    /// Derived definability data, computed on first use.
    pub fn analysis(&self) -> &Analysis {
        self.analysis
            .get_or_init(|| Arc::new(partition::analyse(self)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> StateSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn closure_of_pairs_builds_equivalence_classes() {
        let r = Relation::closure_of_pairs(4, [(0, 1), (2, 1)]);
        assert_eq!(r.blocks(), vec![set(&[0, 1, 2]), set(&[3])]);
        assert!(r.is_partition());
        assert_eq!(r.pair_count(), 10);
    }

    #[test]
    fn from_blocks_rejects_overlap_and_gaps() {
        assert!(Relation::from_blocks(3, &[set(&[0, 1]), set(&[1, 2])]).is_none());
        assert!(Relation::from_blocks(3, &[set(&[0, 1])]).is_none());
        assert!(Relation::from_blocks(3, &[set(&[0, 2]), set(&[1])]).is_some());
    }

    #[test]
    fn intersection_and_inclusion() {
        let a = Relation::from_blocks(4, &[set(&[0, 1, 2]), set(&[3])]).unwrap();
        let b = Relation::from_blocks(4, &[set(&[0, 3]), set(&[1, 2])]).unwrap();
        let ab = a.intersect(&b);
        assert!(ab.is_partition());
        assert_eq!(ab.blocks(), vec![set(&[0]), set(&[1, 2]), set(&[3])]);
        assert!(ab.is_subset(&a) && ab.is_subset(&b));
        assert!(!a.is_subset(&b));
    }

    fn tiny(ideal: Option<Vec<StateSet>>) -> Result<Model, ModelError> {
        Model::new(
            vec!["s0".into(), "s1".into()],
            vec![Agent::new("a").unwrap()],
            vec!["p".into()],
            vec![Relation::identity(2)],
            vec![set(&[0])],
            ideal,
            Some(0),
        )
    }

    #[test]
    fn validation_errors() {
        assert!(tiny(None).is_ok());
        assert_eq!(
            tiny(Some(vec![StateSet::EMPTY; 2])).unwrap_err(),
            ModelError::EmptyIdeal
        );
        assert_eq!(
            tiny(Some(vec![set(&[1]), StateSet::EMPTY])).unwrap_err(),
            ModelError::IdealNotSymmetric
        );
        assert_eq!(
            tiny(Some(vec![set(&[1]), set(&[0])])).unwrap_err(),
            ModelError::IdealOutsideRelations("s0".into(), "s1".into())
        );
        assert!(tiny(Some(vec![set(&[0]), StateSet::EMPTY])).is_ok());
    }
}
