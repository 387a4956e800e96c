//! Exhaustive enumeration of small models.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use kpool_core::kripke::{fingerprint, Model, Relation, StateSet};

use crate::gen::{agent_names, atom_names, ideal_from_pairs, state_names, support_pairs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnumConfig {
    pub max_states: usize,
    pub agents: usize,
    pub atoms: usize,
    pub deontic: bool,
}

/// Every partition of `0..n`, via restricted growth strings.
pub fn partitions(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn go(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Relation>) {
        let n = labels.len();
        if i == n {
            let mut blocks = vec![StateSet::EMPTY; max + 1];
            for (s, &l) in labels.iter().enumerate() {
                blocks[l].insert(s);
            }
            out.push(Relation::from_blocks(n, &blocks).unwrap());
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            go(i + 1, max.max(l), labels, out);
        }
    }
    match n {
        0 => {}
        _ => go(1, 0, &mut labels, &mut out),
    }
    out
}

/// One partition per block-size profile: blocks of non-increasing size laid
/// out on consecutive states.
pub fn partition_shapes(n: usize) -> Vec<Relation> {
    fn go(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rest.min(cap)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut profiles = Vec::new();
    go(n, n, &mut Vec::new(), &mut profiles);
    profiles
        .into_iter()
        .map(|sizes| {
            let mut start = 0;
            let blocks: Vec<StateSet> = sizes
                .iter()
                .map(|&k| {
                    let b = (start..start + k).collect();
                    start += k;
                    b
                })
                .collect();
            Relation::from_blocks(n, &blocks).unwrap()
        })
        .collect()
}

fn build(n: usize, cfg: &EnumConfig, rel: Vec<Relation>, val: u64, ideal: Option<Vec<StateSet>>) -> Model {
    let valuation = (0..cfg.atoms)
        .map(|p| (0..n).filter(|s| val >> (p * n + s) & 1 == 1).collect())
        .collect();
    Model::new(
        state_names(n),
        agent_names(cfg.agents),
        atom_names(cfg.atoms),
        rel,
        valuation,
        ideal,
        None,
    )
    .expect("enumerated models are valid by construction")
}

/// Every model with exactly `n` states, including isomorphic copies, with
/// the first agent's relation drawn from `first` and the others from all
/// partitions. Models carry no point.
fn raw_models(cfg: EnumConfig, n: usize, first: Vec<Relation>) -> impl Iterator<Item = Model> {
    let all = Arc::new(partitions(n));
    let first = Arc::new(first);
    let others = all.len().pow(cfg.agents.saturating_sub(1) as u32);
    let combos = match cfg.agents {
        0 => 1,
        _ => first.len() * others,
    };
    let valuations = 1u64 << (n * cfg.atoms);
    (0..combos).flat_map(move |mut c| {
        let mut rel = Vec::with_capacity(cfg.agents);
        if cfg.agents > 0 {
            rel.push(first[c % first.len()].clone());
            c /= first.len();
            for _ in 1..cfg.agents {
                rel.push(all[c % all.len()].clone());
                c /= all.len();
            }
        }
        let support = support_pairs(&rel, n);
        (0..valuations).flat_map(move |val| {
            let rel = rel.clone();
            let support = support.clone();
            let ideals: Box<dyn Iterator<Item = Option<Vec<StateSet>>>> = match cfg.deontic {
                false => Box::new(std::iter::once(None)),
                true => Box::new((1u32..1 << support.len()).map(move |mask| {
                    let pairs: Vec<(usize, usize)> = support
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &p)| p)
                        .collect();
                    Some(ideal_from_pairs(n, &pairs))
                })),
            };
            ideals.map(move |ideal| build(n, &cfg, rel.clone(), val, ideal))
        })
    })
}

/// All models with `1..=max_states` states up to isomorphism, smallest
/// first. Lazy, so a search can stop at the first hit without paying for
/// the rest of the tier.
pub fn models(cfg: EnumConfig) -> impl Iterator<Item = Model> {
    assert!(cfg.agents > 0, "enumeration needs at least one agent");
    let mut seen = HashSet::new();
    (1..=cfg.max_states)
        .flat_map(move |n| raw_models(cfg, n, partitions(n)))
        .filter(move |m| seen.insert(fingerprint(m)))
}

/// [`models`] collected once per configuration and shared.
pub fn cached(cfg: EnumConfig) -> Arc<Vec<Model>> {
    static CACHE: OnceLock<Mutex<HashMap<EnumConfig, Arc<Vec<Model>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&cfg) {
        return v.clone();
    }
    let list = Arc::new(models(cfg).collect::<Vec<_>>());
    cache.lock().unwrap().entry(cfg).or_insert(list).clone()
}

/// A superset of the isomorphism classes with `1..=max_states` states,
/// cheaper than [`models`]: the first agent's relation ranges over one
/// partition per shape, which already meets every class, and nothing is
/// deduplicated.
pub fn covering_models(cfg: EnumConfig) -> impl Iterator<Item = Model> {
    assert!(cfg.agents > 0, "enumeration needs at least one agent");
    (1..=cfg.max_states).flat_map(move |n| raw_models(cfg, n, partition_shapes(n)))
}
