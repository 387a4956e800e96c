//! Formula pools that schema metavariables range over.

use kpool_core::formula::Agent;
use kpool_core::{parse, Formula};

/// Names available to instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    pub agents: Vec<Agent>,
    pub atoms: Vec<String>,
    pub deontic: bool,
}

impl Vocabulary {
    pub fn new(agents: usize, atoms: usize, deontic: bool) -> Self {
        Vocabulary {
            agents: crate::gen::agent_names(agents),
            atoms: crate::gen::atom_names(atoms),
            deontic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoolKind {
    Atoms,
    /// Atoms, negation and conjunction to depth two.
    BooleanPositive,
    /// Boolean formulas to depth two plus hand-picked modal ones; used for
    /// single-variable schemata.
    Primary,
    /// A smaller mixed pool for schemata with two variables.
    Secondary,
    /// Half a dozen formulas for schemata with three variables.
    Small,
}

fn dedup(v: Vec<Formula>) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for f in v {
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

fn atoms(v: &Vocabulary) -> Vec<Formula> {
    v.atoms.iter().map(|p| Formula::atom(p)).collect()
}

/// Literals, then every conjunction of two distinct literals and the
/// negation of every conjunction of two distinct atoms.
pub fn boolean_positive(v: &Vocabulary) -> Vec<Formula> {
    let ats = atoms(v);
    let mut out = ats.clone();
    out.extend(ats.iter().map(|p| Formula::not(p.clone())));
    for (i, p) in ats.iter().enumerate() {
        for q in &ats[i + 1..] {
            out.push(Formula::and(p.clone(), q.clone()));
            out.push(Formula::and(p.clone(), Formula::not(q.clone())));
            out.push(Formula::and(Formula::not(p.clone()), q.clone()));
            out.push(Formula::not(Formula::and(p.clone(), q.clone())));
        }
    }
    dedup(out)
}

fn boolean(v: &Vocabulary) -> Vec<Formula> {
    let ats = atoms(v);
    let mut out = vec![Formula::Top, Formula::Bot];
    out.extend(ats.iter().cloned());
    out.extend(ats.iter().map(|p| Formula::not(p.clone())));
    for (i, p) in ats.iter().enumerate() {
        for q in &ats[i + 1..] {
            out.push(Formula::and(p.clone(), q.clone()));
            out.push(Formula::or(p.clone(), q.clone()));
            out.push(Formula::imp(p.clone(), q.clone()));
            out.push(Formula::iff(p.clone(), q.clone()));
        }
    }
    if let Some(p) = ats.first() {
        out.push(Formula::or(p.clone(), Formula::not(p.clone())));
    }
    dedup(out)
}

/// Instantiates templates in which `$x` and `$y` stand for agents (`$y`
/// distinct from `$x`), `$p` and `$q` for the first two atoms. Returns the
/// instances of each template separately.
fn from_templates(v: &Vocabulary, templates: &[&str]) -> Vec<Vec<Formula>> {
    let p = v.atoms.first().map_or("true", String::as_str);
    let q = v.atoms.get(1).map_or(p, String::as_str);
    let mut out = Vec::new();
    for t in templates {
        let two_agents = t.contains("$y");
        let mut group = Vec::new();
        for x in &v.agents {
            for y in &v.agents {
                if (two_agents && x == y) || (!two_agents && y != &v.agents[0]) {
                    continue;
                }
                let text = t
                    .replace("$x", x.as_str())
                    .replace("$y", y.as_str())
                    .replace("$p", p)
                    .replace("$q", q);
                group.push(parse(&text).unwrap_or_else(|e| panic!("pool template {text}: {e}")));
            }
        }
        out.push(group);
    }
    out
}

const MODAL: &[&str] = &[
    "K{$x}$p",
    "~K{$x}$p",
    "K{$x}~$p",
    "K{$x}($p -> $q)",
    "~K{$x}~$p & $p",
    "$p & ~K{$x}$p",
    "K{$x}K{$x}$p | K{$x}~K{$x}$p",
    "K{$x|$y}$p",
    "K{$x|$y}($p -> $q)",
    "D{$x,$y}$q",
    "K{$x}$p & ~K{$y}$p",
    "[$x>$y]K{$y}$p",
    "[$x>$y]~K{$y}$q",
    "Ri{$x,$y}K{$x}$q",
];

const DEONTIC: &[&str] = &["O", "~O", "Ok{$x}", "P{$x}$p", "K{$x}$p & ~Ok{$x}"];

const SECONDARY_MODAL: &[&str] = &["K{$x}$p", "~K{$x}$q", "K{$x|$y}$p", "[$x>$y]K{$y}$q", "D{$x,$y}$p"];

pub fn pool(kind: PoolKind, v: &Vocabulary) -> Vec<Formula> {
    match kind {
        PoolKind::Atoms => atoms(v),
        PoolKind::BooleanPositive => boolean_positive(v),
        PoolKind::Primary => {
            let mut out = boolean(v);
            out.extend(from_templates(v, MODAL).into_iter().flatten());
            if v.deontic {
                out.extend(from_templates(v, DEONTIC).into_iter().flatten());
            }
            dedup(out)
        }
        PoolKind::Secondary => {
            let ats = atoms(v);
            let p = ats.first().cloned().unwrap_or(Formula::Top);
            let q = ats.get(1).cloned().unwrap_or_else(|| p.clone());
            let mut out = vec![
                p.clone(),
                q.clone(),
                Formula::not(p.clone()),
                Formula::and(p.clone(), q.clone()),
                Formula::imp(p.clone(), q.clone()),
                Formula::Bot,
            ];
            // One instance per template keeps the pool small.
            let first = |groups: Vec<Vec<Formula>>| {
                groups
                    .into_iter()
                    .filter_map(|g| g.into_iter().next())
                    .collect::<Vec<_>>()
            };
            out.extend(first(from_templates(v, SECONDARY_MODAL)));
            if v.deontic {
                out.extend(first(from_templates(v, &["O", "Ok{$x}"])));
            }
            dedup(out)
        }
        PoolKind::Small => {
            let ats = atoms(v);
            let p = ats.first().cloned().unwrap_or(Formula::Top);
            let q = ats.get(1).cloned().unwrap_or_else(|| p.clone());
            let mut out = vec![
                p.clone(),
                Formula::not(p.clone()),
                Formula::and(p.clone(), q.clone()),
                Formula::imp(p.clone(), q),
                Formula::Bot,
            ];
            if let Some(a) = v.agents.first() {
                out.push(Formula::know(a.clone(), p));
            }
            dedup(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let v = Vocabulary::new(3, 3, true);
        assert_eq!(pool(PoolKind::Atoms, &v).len(), 3);
        assert_eq!(pool(PoolKind::BooleanPositive, &v).len(), 18);
        assert!(pool(PoolKind::BooleanPositive, &v).iter().all(Formula::is_boolean_positive));
        let primary = pool(PoolKind::Primary, &v);
        assert!(primary.len() > 50, "{}", primary.len());
        let secondary = pool(PoolKind::Secondary, &v);
        assert!((8..=16).contains(&secondary.len()), "{}", secondary.len());
    }

    #[test]
    fn small_vocabularies() {
        let v = Vocabulary::new(1, 1, false);
        for kind in [
            PoolKind::Atoms,
            PoolKind::BooleanPositive,
            PoolKind::Primary,
            PoolKind::Secondary,
            PoolKind::Small,
        ] {
            let p = pool(kind, &v);
            assert!(!p.is_empty());
            for f in p {
                f.validate().unwrap();
                assert!(f.agents().iter().all(|a| a.as_str() == "a"));
            }
        }
    }
}
