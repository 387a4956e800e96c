//! Canonical forms of pointed models up to renaming of states.
//!
//! Colour refinement with agent-labelled edges gives an ordered partition of
//! the states; remaining ties are broken by individualising each candidate in
//! turn and keeping the lexicographically smallest encoding. Candidates that
//! are swapped by a transposition automorphism are skipped.

use std::collections::BTreeMap;

use super::{Model, StateSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(Vec<u8>);

impl Fingerprint {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Equal exactly when the two models are isomorphic by a bijection on states
/// preserving valuation, every relation, the ideal relation and the point.
/// Agent and atom names must match; their order in the model does not matter.
pub fn fingerprint(model: &Model) -> Fingerprint {
    let ctx = Ctx::new(model);
    let initial = ctx.refine(ctx.initial_colours());
    let mut best = None;
    ctx.search(initial, &mut best);
    Fingerprint(best.expect("search visits at least one leaf"))
}

struct Ctx<'a> {
    model: &'a Model,
    n: usize,
    /// Agent indices sorted by name.
    agents: Vec<usize>,
    /// Atom indices sorted by name.
    atoms: Vec<usize>,
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    let index: BTreeMap<&K, u32> = sorted.into_iter().zip(0..).collect();
    keys.iter().map(|k| index[k]).collect()
}

fn distinct(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

impl<'a> Ctx<'a> {
    fn new(model: &'a Model) -> Self {
        let mut agents: Vec<usize> = (0..model.agents().len()).collect();
        agents.sort_by_key(|&a| model.agents()[a].as_str());
        let mut atoms: Vec<usize> = (0..model.atoms().len()).collect();
        atoms.sort_by_key(|&p| model.atoms()[p].as_str());
        Ctx {
            model,
            n: model.num_states(),
            agents,
            atoms,
        }
    }

    fn initial_colours(&self) -> Vec<u32> {
        let keys: Vec<(bool, Vec<bool>)> = (0..self.n)
            .map(|s| {
                (
                    self.model.point() != Some(s),
                    self.atoms
                        .iter()
                        .map(|&p| self.model.extension_of_atom(p).contains(s))
                        .collect(),
                )
            })
            .collect();
        rank(&keys)
    }

    fn sorted_colours(set: StateSet, colours: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = set.iter().map(|u| colours[u]).collect();
        v.sort_unstable();
        v
    }

    fn refine(&self, mut colours: Vec<u32>) -> Vec<u32> {
        let mut count = distinct(&colours);
        loop {
            let keys: Vec<(u32, Vec<Vec<u32>>, Vec<u32>)> = (0..self.n)
                .map(|s| {
                    let cells = self
                        .agents
                        .iter()
                        .map(|&a| Self::sorted_colours(self.model.relation(a).cell(s), &colours))
                        .collect();
                    let ideal = self
                        .model
                        .ideal()
                        .map(|o| Self::sorted_colours(o[s], &colours))
                        .unwrap_or_default();
                    (colours[s], cells, ideal)
                })
                .collect();
            colours = rank(&keys);
            let next = distinct(&colours);
            if next == count {
                return colours;
            }
            count = next;
        }
    }

    fn swaps_to_automorphism(&self, u: usize, v: usize) -> bool {
        let m = self.model;
        let swap = |s: usize| if s == u { v } else if s == v { u } else { s };
        let swap_set = |set: StateSet| -> StateSet { set.iter().map(swap).collect() };
        if m.point() == Some(u) || m.point() == Some(v) {
            return false;
        }
        if m.valuation().iter().any(|ext| ext.contains(u) != ext.contains(v)) {
            return false;
        }
        let cells_ok = |cells: &[StateSet]| (0..self.n).all(|s| swap_set(cells[s]) == cells[swap(s)]);
        m.relations().iter().all(|r| cells_ok(r.cells())) && m.ideal().map_or(true, cells_ok)
    }

    fn search(&self, colours: Vec<u32>, best: &mut Option<Vec<u8>>) {
        let mut by_colour: BTreeMap<u32, StateSet> = BTreeMap::new();
        for (s, &c) in colours.iter().enumerate() {
            by_colour.entry(c).or_default().insert(s);
        }
        let Some(&target) = by_colour.values().find(|cell| cell.len() > 1) else {
            let leaf = self.encode(&colours);
            if best.as_ref().map_or(true, |b| leaf < *b) {
                *best = Some(leaf);
            }
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for v in target {
            if explored.iter().any(|&u| self.swaps_to_automorphism(u, v)) {
                continue;
            }
            explored.push(v);
            let individualised: Vec<u32> = colours
                .iter()
                .enumerate()
                .map(|(s, &c)| 2 * c + u32::from(target.contains(s) && s != v))
                .collect();
            self.search(self.refine(individualised), best);
        }
    }

    /// Serialises the model with state `s` renamed to `colours[s]`, which
    /// must be a permutation of `0..n`.
    fn encode(&self, colours: &[u32]) -> Vec<u8> {
        let m = self.model;
        let pos = |s: usize| colours[s] as usize;
        let permute = |set: StateSet| -> u128 { set.iter().fold(0u128, |acc, s| acc | 1 << pos(s)) };
        let mut at = vec![0usize; self.n];
        for s in 0..self.n {
            at[pos(s)] = s;
        }
        let mut out = Vec::new();
        out.push(self.n as u8);
        out.push(m.point().map_or(u8::MAX, |p| pos(p) as u8));
        out.push(self.atoms.len() as u8);
        for &p in &self.atoms {
            out.extend(m.atoms()[p].as_bytes());
            out.push(0);
            out.extend(permute(m.extension_of_atom(p)).to_le_bytes());
        }
        out.push(self.agents.len() as u8);
        for &a in &self.agents {
            out.extend(m.agents()[a].as_str().as_bytes());
            out.push(0);
            for &s in &at {
                let cell = m.relation(a).cell(s);
                out.push(cell.iter().map(pos).min().unwrap() as u8);
            }
        }
        match m.ideal() {
            Some(o) => {
                out.push(1);
                for &s in &at {
                    out.extend(permute(o[s]).to_le_bytes());
                }
            }
            None => out.push(0),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::formula::Agent;
    use crate::kripke::Relation;

    fn set(xs: &[usize]) -> StateSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn renaming_states_keeps_fingerprint() {
        let m = builtin::servers();
        let mut json = crate::kripke::save(&m);
        for i in 0..5 {
            json = json.replace(&format!("\"s{i}\""), &format!("\"t{}\"", 4 - i));
        }
        let renamed = crate::kripke::load(json.as_bytes()).unwrap();
        assert_eq!(fingerprint(&m), fingerprint(&renamed));
    }

    #[test]
    fn point_matters() {
        let m = builtin::servers();
        assert_ne!(fingerprint(&m), fingerprint(&m.with_point(Some(1))));
        assert_ne!(fingerprint(&m), fingerprint(&m.with_point(None)));
    }

    #[test]
    fn single_state_is_stable() {
        let m = Model::new(
            vec!["only".into()],
            vec![Agent::new("a").unwrap()],
            vec![],
            vec![Relation::identity(1)],
            vec![],
            None,
            Some(0),
        )
        .unwrap();
        let f = fingerprint(&m);
        assert_eq!(f, fingerprint(&m.clone()));
        assert_eq!(f.as_bytes()[..2], [1, 0]);
    }

    #[test]
    fn symmetric_models_terminate_quickly() {
        let n = 12;
        let m = Model::new(
            (0..n).map(|i| format!("s{i}")).collect(),
            vec![Agent::new("a").unwrap()],
            vec![],
            vec![Relation::identity(n)],
            vec![],
            None,
            None,
        )
        .unwrap();
        let total = m.with_relations(vec![Relation::total(n)]);
        assert_ne!(fingerprint(&m), fingerprint(&total));
    }

    #[test]
    fn distinguishes_non_isomorphic_relations() {
        let base = Model::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![Agent::new("a").unwrap(), Agent::new("b").unwrap()],
            vec![],
            vec![Relation::identity(3), Relation::identity(3)],
            vec![],
            None,
            Some(0),
        )
        .unwrap();
        let xy = Relation::from_blocks(3, &[set(&[0, 1]), set(&[2])]).unwrap();
        let yz = Relation::from_blocks(3, &[set(&[0]), set(&[1, 2])]).unwrap();
        let m1 = base.with_relations(vec![xy.clone(), Relation::identity(3)]);
        let m2 = base.with_relations(vec![yz.clone(), Relation::identity(3)]);
        let m3 = base.with_relations(vec![Relation::identity(3), xy]);
        assert_ne!(fingerprint(&m1), fingerprint(&m2));
        assert_ne!(fingerprint(&m1), fingerprint(&m3));
        let swapped = base.with_relations(vec![
            Relation::from_blocks(3, &[set(&[0, 2]), set(&[1])]).unwrap(),
            Relation::identity(3),
        ]);
        assert_eq!(fingerprint(&m1), fingerprint(&swapped));
    }
}
