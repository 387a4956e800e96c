//! Definability atoms and the dependence relation.
//!
//! Two states are in the same atom when no formula of the static language
//! (atoms, Boolean connectives, `K`, `K{b|deps}`, `D`, `O`, `Ok`) separates
//! them. On a finite model the definable sets are exactly the unions of
//! atoms, so "the formulas an agent knows at w" correspond to the unions of
//! atoms containing its information cell.

use std::collections::HashMap;

use super::{Model, StateSet};

/// Derived data cached on every model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    blocks: Vec<StateSet>,
    block_of: Vec<usize>,
    /// `closures[a][s]` = union of the blocks meeting `R_a[s]`.
    closures: Vec<Vec<StateSet>>,
}

impl Analysis {
    /// Modal-equivalence classes, ordered by smallest member.
    pub fn blocks(&self) -> &[StateSet] {
        &self.blocks
    }

    pub fn block_of(&self, s: usize) -> usize {
        self.block_of[s]
    }

    /// `cl_a(s)`, the smallest definable set containing `R_a[s]`.
    pub fn closure(&self, agent: usize, s: usize) -> StateSet {
        self.closures[agent][s]
    }
}

/// Relabels states by first occurrence of their key, so block ids follow
/// state order.
fn number_by_key<K: std::hash::Hash + Eq>(keys: Vec<K>) -> (Vec<usize>, usize) {
    let mut ids = HashMap::new();
    let block_of = keys
        .into_iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect();
    (block_of, ids.len())
}

fn blocks_from(block_of: &[usize], count: usize) -> Vec<StateSet> {
    let mut blocks = vec![StateSet::EMPTY; count];
    for (s, &b) in block_of.iter().enumerate() {
        blocks[b].insert(s);
    }
    blocks
}

fn closures_from(model: &Model, block_of: &[usize], blocks: &[StateSet]) -> Vec<Vec<StateSet>> {
    let n = model.num_states();
    model
        .relations()
        .iter()
        .map(|r| {
            (0..n)
                .map(|s| {
                    r.cell(s)
                        .iter()
                        .fold(StateSet::EMPTY, |acc, u| acc | blocks[block_of[u]])
                })
                .collect()
        })
        .collect()
}

/// Keeps only the masks not strictly below another one; sorted.
fn maximal(mut masks: Vec<u64>) -> Vec<u64> {
    masks.sort_unstable();
    masks.dedup();
    let keep: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && m & o == m))
        .collect();
    keep
}

#[derive(Hash, PartialEq, Eq)]
struct Signature {
    block: usize,
    /// Per target block: maximal sets of agents whose relations all reach it.
    reach: Vec<(usize, Vec<u64>)>,
    /// Per knower and target block: maximal sets of other agents whose
    /// closures contain some state the knower reaches in that block.
    dependent: Vec<(usize, usize, Vec<u64>)>,
}

pub(super) fn analyse(model: &Model) -> Analysis {
    let n = model.num_states();
    let k = model.agents().len();
    let rel = model.relations();

    let initial: Vec<(Vec<bool>, bool, Vec<bool>)> = (0..n)
        .map(|s| {
            let val = model.valuation().iter().map(|v| v.contains(s)).collect();
            match model.ideal() {
                Some(o) => (
                    val,
                    !o[s].is_empty(),
                    rel.iter().map(|r| r.cell(s).intersects(o[s])).collect(),
                ),
                None => (val, false, Vec::new()),
            }
        })
        .collect();
    let (mut block_of, mut count) = number_by_key(initial);

    loop {
        let blocks = blocks_from(&block_of, count);
        let closures = closures_from(model, &block_of, &blocks);
        let signatures: Vec<Signature> = (0..n)
            .map(|s| {
                let reach_mask = |u: usize| -> u64 {
                    (0..k).fold(0, |m, a| m | (rel[a].contains(s, u) as u64) << a)
                };
                let closure_mask = |u: usize| -> u64 {
                    (0..k).fold(0, |m, a| m | (closures[a][s].contains(u) as u64) << a)
                };
                let mut reach = Vec::new();
                let mut dependent = Vec::new();
                for (b, &block) in blocks.iter().enumerate() {
                    let masks: Vec<u64> = block.iter().map(reach_mask).filter(|&m| m != 0).collect();
                    if masks.is_empty() {
                        continue;
                    }
                    for knower in 0..k {
                        let deps: Vec<u64> = block
                            .iter()
                            .filter(|&u| rel[knower].contains(s, u))
                            .map(|u| closure_mask(u) & !(1 << knower))
                            .collect();
                        if !deps.is_empty() {
                            dependent.push((knower, b, maximal(deps)));
                        }
                    }
                    reach.push((b, maximal(masks)));
                }
                Signature {
                    block: block_of[s],
                    reach,
                    dependent,
                }
            })
            .collect();
        let (next, next_count) = number_by_key(signatures);
        if next_count == count {
            return Analysis {
                blocks,
                block_of,
                closures,
            };
        }
        block_of = next;
        count = next_count;
    }
}

/// The modal-equivalence classes of the static language.
pub fn atoms_partition(model: &Model) -> Vec<StateSet> {
    model.analysis().blocks().to_vec()
}

/// `cl_a(w)`: the union of the definability atoms meeting `R_a[w]`. This is
/// the class of `w` under `≡_{a:w}`.
pub fn dep_closure(model: &Model, agent: usize, w: usize) -> StateSet {
    model.analysis().closure(agent, w)
}

/// The classes of `≡_{a:w}`.
///
/// Two states are equivalent when every formula the agent knows at `w` is
/// known by the agent at both or at neither. With known extensions ranging
/// over the definable supersets `X ⊇ cl_a(w)`, that comes down to
/// `cl_a(s) \ cl_a(w) = cl_a(u) \ cl_a(w)`. The class of `w` itself is
/// `cl_a(w)`. Classes are ordered by smallest member.
pub fn dependence_classes(model: &Model, agent: usize, w: usize) -> Vec<StateSet> {
    let an = model.analysis();
    let base = an.closure(agent, w);
    let mut classes: Vec<(StateSet, StateSet)> = Vec::new();
    for s in 0..model.num_states() {
        let sig = an.closure(agent, s) - base;
        match classes.iter_mut().find(|(k, _)| *k == sig) {
            Some((_, class)) => class.insert(s),
            None => classes.push((sig, StateSet::singleton(s))),
        }
    }
    classes.into_iter().map(|(_, c)| c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::kripke::Relation;
    use crate::formula::Agent;

    fn set(xs: &[usize]) -> StateSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn distinct_valuations_give_singletons() {
        let m = builtin::servers();
        assert_eq!(atoms_partition(&m).len(), 5);
        let m = builtin::pooling_gap();
        assert_eq!(atoms_partition(&m).len(), 4);
    }

    #[test]
    fn duplicate_isolated_states_merge() {
        let m = Model::new(
            vec!["x".into(), "y".into()],
            vec![Agent::new("a").unwrap()],
            vec!["p".into()],
            vec![Relation::identity(2)],
            vec![set(&[0, 1])],
            None,
            None,
        )
        .unwrap();
        assert_eq!(atoms_partition(&m), vec![set(&[0, 1])]);
    }

    #[test]
    fn relations_split_equal_valuations() {
        // x and y agree on atoms, but only x sees a p-state.
        let m = Model::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![Agent::new("a").unwrap()],
            vec!["p".into()],
            vec![Relation::from_blocks(3, &[set(&[0, 2]), set(&[1])]).unwrap()],
            vec![set(&[2])],
            None,
            None,
        )
        .unwrap();
        assert_eq!(atoms_partition(&m), vec![set(&[0]), set(&[1]), set(&[2])]);
    }

    #[test]
    fn closures_on_servers_model() {
        let m = builtin::servers();
        assert_eq!(dep_closure(&m, 0, 0), set(&[0, 1, 2]));
        assert_eq!(dep_closure(&m, 1, 0), set(&[0, 3, 4]));
        assert_eq!(dep_closure(&m, 2, 0), set(&[0, 1, 2, 3, 4]));
    }

    #[test]
    fn dependence_classes_contain_sender_links() {
        // w:p, s:q, u:∅; a links s and u; b is total.
        let m = Model::new(
            vec!["w".into(), "s".into(), "u".into()],
            vec![Agent::new("a").unwrap(), Agent::new("b").unwrap()],
            vec!["p".into(), "q".into()],
            vec![
                Relation::from_blocks(3, &[set(&[0]), set(&[1, 2])]).unwrap(),
                Relation::total(3),
            ],
            vec![set(&[0]), set(&[1])],
            None,
            None,
        )
        .unwrap();
        assert_eq!(dependence_classes(&m, 0, 0), vec![set(&[0]), set(&[1, 2])]);
    }
}
