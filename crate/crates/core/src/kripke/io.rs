//! JSON model files.
//!
//! ```json
//! { "states": ["s0", "s1"], "agents": ["a"], "atoms": ["p"],
//!   "relations": { "a": [["s0", "s1"]] },
//!   "valuation": { "s0": ["p"] },
//!   "ideal": [["s0", "s1"]],
//!   "point": "s0" }
//! ```
//!
//! Relation pair lists are closed to equivalence relations, ideal pairs to a
//! symmetric relation. Agents without an entry in `relations` get the
//! identity relation; states without a valuation entry satisfy no atom.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Model, ModelError, Relation, StateSet};
use crate::formula::Agent;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    states: Vec<String>,
    agents: Vec<String>,
    atoms: Vec<String>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ideal: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point: Option<String>,
}

/// Parses a model file, closing relation pairs under reflexivity, symmetry
/// and transitivity.
pub fn load(text: &[u8]) -> Result<Model, ModelError> {
    build(parse(text)?, false)
}

/// Like [`load`], but the listed pairs must already be transitive: closure
/// may only add reflexive and symmetric pairs.
pub fn load_strict(text: &[u8]) -> Result<Model, ModelError> {
    build(parse(text)?, true)
}

fn parse(text: &[u8]) -> Result<ModelFile, ModelError> {
    serde_json::from_slice(text).map_err(|e| ModelError::Json(e.to_string()))
}

fn build(file: ModelFile, strict: bool) -> Result<Model, ModelError> {
    let n = file.states.len();
    if n == 0 {
        return Err(ModelError::NoStates);
    }
    if n > super::MAX_STATES {
        return Err(ModelError::TooManyStates(n));
    }
    let index: BTreeMap<&str, usize> = file
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let state = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    };
    let agents = file
        .agents
        .iter()
        .map(|a| {
            Agent::new(a.clone()).map_err(|_| ModelError::InvalidName {
                kind: "agent",
                name: a.clone(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    for name in file.relations.keys() {
        if !file.agents.contains(name) {
            return Err(ModelError::UnknownAgent(name.clone()));
        }
    }
    let mut rel = Vec::with_capacity(agents.len());
    for agent in &file.agents {
        let pairs = match file.relations.get(agent) {
            Some(pairs) => pairs
                .iter()
                .map(|(s, u)| Ok((state(s)?, state(u)?)))
                .collect::<Result<Vec<_>, ModelError>>()?,
            None => Vec::new(),
        };
        let r = Relation::closure_of_pairs(n, pairs.iter().copied());
        if strict {
            check_transitive(&file, agent, &pairs, &r)?;
        }
        rel.push(r);
    }

    let mut valuation = vec![StateSet::EMPTY; file.atoms.len()];
    for (s, atoms) in &file.valuation {
        let s = state(s)?;
        for p in atoms {
            let i = file
                .atoms
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| ModelError::UnknownAtom(p.clone()))?;
            valuation[i].insert(s);
        }
    }

    let ideal = match &file.ideal {
        Some(pairs) => {
            let mut o = vec![StateSet::EMPTY; n];
            for (s, u) in pairs {
                let (s, u) = (state(s)?, state(u)?);
                o[s].insert(u);
                o[u].insert(s);
            }
            Some(o)
        }
        None => None,
    };
    let point = file.point.as_deref().map(state).transpose()?;
    Model::new(file.states, agents, file.atoms, rel, valuation, ideal, point)
}

/// Every pair of the closure must be listed, up to reflexivity and symmetry.
fn check_transitive(
    file: &ModelFile,
    agent: &str,
    pairs: &[(usize, usize)],
    closed: &Relation,
) -> Result<(), ModelError> {
    let n = closed.num_states();
    let direct = Relation::from_cells_unchecked({
        let mut cells: Vec<StateSet> = (0..n).map(StateSet::singleton).collect();
        for &(s, u) in pairs {
            cells[s].insert(u);
            cells[u].insert(s);
        }
        cells
    });
    for s in 0..n {
        if let Some(u) = (closed.cell(s) - direct.cell(s)).first() {
            return Err(ModelError::NotTransitive {
                agent: agent.to_string(),
                from: file.states[s].clone(),
                to: file.states[u].clone(),
            });
        }
    }
    Ok(())
}

fn to_file(m: &Model) -> ModelFile {
    let name = |s: usize| m.state_name(s).to_string();
    let relations = m
        .agents()
        .iter()
        .zip(m.relations())
        .map(|(a, r)| {
            let pairs = (0..m.num_states())
                .flat_map(|s| {
                    r.cell(s)
                        .iter()
                        .filter(move |&u| u > s)
                        .map(move |u| (name(s), name(u)))
                })
                .collect();
            (a.to_string(), pairs)
        })
        .collect();
    let valuation = (0..m.num_states())
        .map(|s| {
            let atoms = m.atoms_at(s).map(|p| m.atoms()[p].clone()).collect();
            (name(s), atoms)
        })
        .collect();
    let ideal = m.ideal().map(|o| {
        (0..m.num_states())
            .flat_map(|s| o[s].iter().filter(move |&u| u >= s).map(move |u| (name(s), name(u))))
            .collect()
    });
    ModelFile {
        states: m.states().to_vec(),
        agents: m.agents().iter().map(|a| a.to_string()).collect(),
        atoms: m.atoms().to_vec(),
        relations,
        valuation,
        ideal,
        point: m.point().map(name),
    }
}

pub fn to_json_value(m: &Model) -> serde_json::Value {
    serde_json::to_value(to_file(m)).expect("model file serialises")
}

/// Pretty-printed model file. Relations are written as the unordered pairs
/// inside each cell.
pub fn save(m: &Model) -> String {
    serde_json::to_string_pretty(&to_file(m)).expect("model file serialises")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn set(xs: &[usize]) -> StateSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn closure_of_listed_pair() {
        let m = load(
            br#"{"states":["s0","s1","s2"],"agents":["a"],"atoms":[],
                 "relations":{"a":[["s0","s1"]]}}"#,
        )
        .unwrap();
        let r = m.relation(0);
        assert!(r.contains(1, 0) && r.contains(0, 0) && r.contains(1, 1));
        assert_eq!(r.cell(2), set(&[2]));
    }

    #[test]
    fn ideal_is_closed_under_symmetry() {
        let m = builtin::servers_ideal();
        let o = m.ideal().unwrap();
        let pairs: usize = o.iter().map(|c| c.len()).sum();
        assert_eq!(pairs, 4);
        assert!(o[0].contains(1) && o[1].contains(0) && o[0].contains(3) && o[3].contains(0));
    }

    #[test]
    fn round_trips() {
        for m in [builtin::servers(), builtin::pooling_gap(), builtin::servers_ideal()] {
            let back = load(save(&m).as_bytes()).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn errors() {
        let bad = |s: &str| load(s.as_bytes()).unwrap_err();
        assert!(matches!(
            bad(r#"{"states":["s0"],"agents":["a"],"atoms":[],"extra":1}"#),
            ModelError::Json(_)
        ));
        assert_eq!(
            bad(r#"{"states":["s0"],"agents":["a"],"atoms":[],"relations":{"a":[["s0","s9"]]}}"#),
            ModelError::UnknownState("s9".into())
        );
        assert_eq!(
            bad(r#"{"states":["s0"],"agents":["a"],"atoms":[],"relations":{"b":[]}}"#),
            ModelError::UnknownAgent("b".into())
        );
        assert_eq!(
            bad(r#"{"states":["s0"],"agents":["a"],"atoms":["p"],"valuation":{"s0":["q"]}}"#),
            ModelError::UnknownAtom("q".into())
        );
        assert_eq!(
            bad(r#"{"states":["s0"],"agents":["a"],"atoms":[],"ideal":[]}"#),
            ModelError::EmptyIdeal
        );
        assert_eq!(
            bad(r#"{"states":["s0","s1"],"agents":["a"],"atoms":[],"ideal":[["s0","s1"]]}"#),
            ModelError::IdealOutsideRelations("s0".into(), "s1".into())
        );
        assert_eq!(
            bad(r#"{"states":["s0"],"agents":["A"],"atoms":[]}"#),
            ModelError::InvalidName {
                kind: "agent",
                name: "A".into()
            }
        );
        assert_eq!(
            bad(r#"{"states":[],"agents":[],"atoms":[]}"#),
            ModelError::NoStates
        );
    }

    #[test]
    fn strict_mode_rejects_missing_transitive_pairs() {
        let text = br#"{"states":["s0","s1","s2"],"agents":["a"],"atoms":[],
                        "relations":{"a":[["s0","s1"],["s1","s2"]]}}"#;
        assert!(load(text).is_ok());
        assert_eq!(
            load_strict(text).unwrap_err(),
            ModelError::NotTransitive {
                agent: "a".into(),
                from: "s0".into(),
                to: "s2".into()
            }
        );
        let ok = br#"{"states":["s0","s1","s2"],"agents":["a"],"atoms":[],
                      "relations":{"a":[["s0","s1"],["s2","s1"],["s0","s2"]]}}"#;
        assert!(load_strict(ok).is_ok());
    }
}
