//! Seeded random models and formulas.

use kpool_core::formula::Agent;
use kpool_core::kripke::{Model, Relation, StateSet};
use kpool_core::Formula;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_states: usize,
    pub agents: usize,
    pub atoms: usize,
    pub deontic: bool,
    pub seed: u64,
    pub samples: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_states: 5,
            agents: 3,
            atoms: 3,
            deontic: false,
            seed: 0,
            samples: 500,
        }
    }
}

const AGENT_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
const ATOM_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

/// `a`, `b`, `c`, ... then `a6`, `a7`, ...
pub fn agent_names(n: usize) -> Vec<Agent> {
    (0..n)
        .map(|i| match AGENT_NAMES.get(i) {
            Some(s) => Agent::new(*s).unwrap(),
            None => Agent::new(format!("a{i}")).unwrap(),
        })
        .collect()
}

/// `p`, `q`, `r`, ... then `p6`, `p7`, ...
pub fn atom_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match ATOM_NAMES.get(i) {
            Some(s) => s.to_string(),
            None => format!("p{i}"),
        })
        .collect()
}

pub fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

/// Stream of the `index`-th model for `seed`, independent of every other
/// index so samples can be drawn in parallel.
fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_partition(rng: &mut impl Rng, n: usize) -> Relation {
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let mut blocks: Vec<StateSet> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (s, l) in labels.iter().enumerate() {
        match seen.iter().position(|x| x == l) {
            Some(i) => blocks[i].insert(s),
            None => {
                seen.push(*l);
                blocks.push(StateSet::singleton(s));
            }
        }
    }
    Relation::from_blocks(n, &blocks).expect("labels induce a partition")
}

/// Pairs `(s, u)` with `s <= u` linked by some agent.
pub fn support_pairs(rel: &[Relation], n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|s| (s..n).map(move |u| (s, u)))
        .filter(|&(s, u)| rel.iter().any(|r| r.contains(s, u)))
        .collect()
}

/// Symmetric ideal relation as cells, from unordered pairs.
pub fn ideal_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Vec<StateSet> {
    let mut o = vec![StateSet::EMPTY; n];
    for &(s, u) in pairs {
        o[s].insert(u);
        o[u].insert(s);
    }
    o
}

/// Deterministic in `(cfg.seed, index)`. The number of states is uniform in
/// `1..=max_states`, relations are uniform random labellings, each atom
/// holds at each state with probability one half, and the point is random.
/// Deontic models get an ideal relation keeping each supported pair with
/// probability one half, never empty.
pub fn gen_model(cfg: &GenConfig, index: u64) -> Model {
    assert!(cfg.max_states >= 1 && cfg.max_states <= 128);
    let mut rng = rng_for(cfg.seed, index);
    let n = rng.gen_range(1..=cfg.max_states);
    let rel: Vec<Relation> = (0..cfg.agents).map(|_| random_partition(&mut rng, n)).collect();
    let valuation: Vec<StateSet> = (0..cfg.atoms)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let ideal = cfg.deontic.then(|| {
        let support = support_pairs(&rel, n);
        let mut kept: Vec<(usize, usize)> =
            support.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if kept.is_empty() {
            kept.push(*support.choose(&mut rng).expect("reflexive pairs are always supported"));
        }
        ideal_from_pairs(n, &kept)
    });
    let point = rng.gen_range(0..n);
    Model::new(
        state_names(n),
        agent_names(cfg.agents),
        atom_names(cfg.atoms),
        rel,
        valuation,
        ideal,
        Some(point),
    )
    .expect("generated models are valid by construction")
}

/// Random formula over the given vocabulary, at most `depth` connectives
/// deep. Deontic constants appear only when `deontic` is set.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    depth: usize,
    atoms: &[String],
    agents: &[Agent],
    deontic: bool,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            8 if deontic => Formula::Ideal,
            9 if deontic => Formula::Ok(agents.choose(rng).unwrap().clone()),
            _ => Formula::atom(atoms.choose(rng).unwrap()),
        };
    }
    let d = depth - 1;
    let sub = |rng: &mut R| random_formula(rng, d, atoms, agents, deontic);
    let one = agents.choose(rng).unwrap().clone();
    let other = agents.choose(rng).unwrap().clone();
    match rng.gen_range(0..11) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::imp(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 | 6 => Formula::know(one, sub(rng)),
        7 if one != other => Formula::know_dep(one, vec![other], sub(rng)),
        8 if one != other => Formula::dist(vec![one, other], sub(rng)),
        7 | 8 => Formula::dist(vec![one], sub(rng)),
        9 => Formula::share(one, other, sub(rng)),
        _ => {
            let size = rng.gen_range(1..=agents.len());
            let mut g: Vec<Agent> = agents.choose_multiple(rng, size).cloned().collect();
            g.sort();
            Formula::resolve_info(g, sub(rng))
        }
    }
}
