use kpool_core::formula::{expand, parse, Agent, Formula};
use kpool_core::kripke::{
    atoms_partition, dep_closure, fingerprint, load, save, Model, Relation, StateSet,
};
use kpool_core::semantics::{extension, Evaluator};
use kpool_core::update::{mixed_pairs, resolve_update, share_update};
use proptest::prelude::*;

const AGENTS: [&str; 3] = ["a", "b", "c"];
const ATOMS: [&str; 3] = ["p", "q", "r"];

fn ag(i: usize) -> Agent {
    Agent::new(AGENTS[i]).unwrap()
}

/// Relation from a block label per state.
fn relation(labels: &[usize]) -> Relation {
    let n = labels.len();
    let pairs = (0..n).flat_map(|s| (0..n).filter(move |&u| labels[s] == labels[u]).map(move |u| (s, u)));
    Relation::closure_of_pairs(n, pairs)
}

fn model_strategy(max_states: usize, deontic: bool) -> impl Strategy<Value = Model> {
    (1..=max_states).prop_flat_map(move |n| {
        (
            prop::collection::vec(prop::collection::vec(0..n, n), 3),
            prop::collection::vec(any::<u128>(), 3),
            any::<u128>(),
            0..n,
        )
            .prop_map(move |(labels, vals, ideal_bits, point)| {
                let rel: Vec<Relation> = labels.iter().map(|l| relation(l)).collect();
                let full = StateSet::full(n);
                let valuation = vals.iter().map(|&v| StateSet::from_bits(v) & full).collect();
                let ideal = deontic.then(|| {
                    // Pick pairs (s, u) with s <= u inside the union of relations.
                    let mut o = vec![StateSet::EMPTY; n];
                    let mut bit = 0;
                    for s in 0..n {
                        for u in s..n {
                            if rel.iter().any(|r| r.contains(s, u)) {
                                if ideal_bits >> (bit % 128) & 1 == 1 {
                                    o[s].insert(u);
                                    o[u].insert(s);
                                }
                                bit += 1;
                            }
                        }
                    }
                    if o.iter().all(|x| x.is_empty()) {
                        o[point].insert(point);
                    }
                    o
                });
                Model::new(
                    (0..n).map(|i| format!("s{i}")).collect(),
                    (0..3).map(ag).collect(),
                    ATOMS.iter().map(|p| p.to_string()).collect(),
                    rel,
                    valuation,
                    ideal,
                    Some(point),
                )
                .unwrap()
            })
    })
}

fn group_strategy() -> impl Strategy<Value = Vec<Agent>> {
    prop::sample::subsequence(vec![0usize, 1, 2], 1..=3)
        .prop_shuffle()
        .prop_map(|g| g.into_iter().map(ag).collect())
}

fn agent_strategy() -> impl Strategy<Value = Agent> {
    (0usize..3).prop_map(ag)
}

/// Primitive formulas; `deontic` adds `O` and `Ok{a}`.
fn formula_strategy(depth: u32, deontic: bool) -> impl Strategy<Value = Formula> {
    let mut leaves = vec![
        prop::sample::select(ATOMS.to_vec()).prop_map(Formula::atom).boxed(),
        Just(Formula::Top).boxed(),
        Just(Formula::Bot).boxed(),
    ];
    if deontic {
        leaves.push(Just(Formula::Ideal).boxed());
        leaves.push(agent_strategy().prop_map(Formula::Ok).boxed());
    }
    let leaf = prop::strategy::Union::new(leaves);
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::imp(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::iff(l, r)),
            (agent_strategy(), group_strategy(), inner.clone()).prop_map(|(a, mut deps, f)| {
                deps.retain(|d| *d != a);
                Formula::know_dep(a, deps, f)
            }),
            (group_strategy(), inner.clone()).prop_map(|(g, f)| Formula::dist(g, f)),
            (agent_strategy(), agent_strategy(), inner.clone())
                .prop_map(|(a, b, f)| Formula::share(a, b, f)),
            (group_strategy(), inner).prop_map(|(g, f)| Formula::resolve_info(g, f)),
        ]
    })
}

/// Formulas that may also contain macros (non-degenerate `Rk` only).
fn macro_formula_strategy(depth: u32) -> impl Strategy<Value = Formula> {
    formula_strategy(1, true).prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::imp(l, r)),
            (group_strategy(), inner.clone()).prop_map(|(group, f)| Formula::Everybody {
                group,
                body: Box::new(f)
            }),
            (group_strategy(), inner.clone())
                .prop_filter("Rk needs two agents", |(g, _)| g.len() > 1)
                .prop_map(|(order, f)| Formula::KnowRes {
                    order,
                    body: Box::new(f)
                }),
            (group_strategy(), inner.clone())
                .prop_filter("Rk needs two agents", |(g, _)| g.len() > 1)
                .prop_map(|(group, f)| Formula::KnowResFrom {
                    first: group[1].clone(),
                    group,
                    body: Box::new(f)
                }),
            (agent_strategy(), inner.clone()).prop_map(|(agent, f)| Formula::Permitted {
                agent,
                body: Box::new(f)
            }),
            (agent_strategy(), inner).prop_map(|(agent, f)| Formula::Ought {
                agent,
                body: Box::new(f)
            }),
            (agent_strategy(), agent_strategy())
                .prop_map(|(sender, receiver)| Formula::PermShare { sender, receiver }),
        ]
    })
}

fn boolean_positive_strategy() -> impl Strategy<Value = Formula> {
    prop::sample::select(ATOMS.to_vec())
        .prop_map(Formula::atom)
        .prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner).prop_map(|(l, r)| Formula::and(l, r)),
            ]
        })
}

fn permute(m: &Model, perm: &[usize]) -> Model {
    // State s of `m` becomes state perm[s].
    let n = m.num_states();
    let map = |set: StateSet| -> StateSet { set.iter().map(|s| perm[s]).collect() };
    let rel = m
        .relations()
        .iter()
        .map(|r| Relation::from_blocks(n, &r.blocks().into_iter().map(map).collect::<Vec<_>>()).unwrap())
        .collect();
    let mut names = vec![String::new(); n];
    for s in 0..n {
        names[perm[s]] = format!("t{}", perm[s]);
    }
    let ideal = m.ideal().map(|o| {
        let mut out = vec![StateSet::EMPTY; n];
        for s in 0..n {
            out[perm[s]] = map(o[s]);
        }
        out
    });
    Model::new(
        names,
        m.agents().to_vec(),
        m.atoms().to_vec(),
        rel,
        m.valuation().iter().map(|&v| map(v)).collect(),
        ideal,
        m.point().map(|p| perm[p]),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(f in macro_formula_strategy(5)) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f.clone());
        let e = expand(&f);
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn expansion_is_idempotent_and_complete(f in macro_formula_strategy(4)) {
        let e = expand(&f);
        prop_assert!(e.is_expanded());
        prop_assert_eq!(expand(&e), e.clone());
        prop_assert_eq!(e.atoms(), f.atoms());
        prop_assert_eq!(e.agents(), f.agents());
    }

    #[test]
    fn boolean_positive_has_no_modalities(f in macro_formula_strategy(4)) {
        let e = expand(&f);
        if e.is_boolean_positive() {
            fn modal_free(f: &Formula) -> bool {
                !f.is_modal() && f.children().into_iter().all(modal_free)
            }
            prop_assert!(modal_free(&e));
        }
    }

    #[test]
    fn extensions_are_unions_of_atoms(m in model_strategy(5, true), f in formula_strategy(3, true)) {
        // Static formulas only: updates may separate states of one atom.
        fn is_static(f: &Formula) -> bool {
            !matches!(f, Formula::Share { .. } | Formula::ResolveInfo { .. })
                && f.children().into_iter().all(is_static)
        }
        prop_assume!(is_static(&f));
        let ext = extension(&m, &f).unwrap();
        for block in atoms_partition(&m) {
            prop_assert!(block.is_subset(ext) || !block.intersects(ext));
        }
    }

    #[test]
    fn closure_contains_cell_and_is_union_of_atoms(m in model_strategy(6, false)) {
        let blocks = atoms_partition(&m);
        for a in 0..3 {
            for w in 0..m.num_states() {
                let cl = dep_closure(&m, a, w);
                prop_assert!(m.relation(a).cell(w).is_subset(cl));
                for &b in &blocks {
                    prop_assert!(b.is_subset(cl) || !b.intersects(cl));
                }
            }
        }
    }

    #[test]
    fn s5_laws(m in model_strategy(5, false), f in formula_strategy(2, false), a in 0usize..3, b in 0usize..3) {
        let phi = f.to_string();
        let mut boxes = vec![format!("K{{{}}}", AGENTS[a]), format!("D{{{},{}}}", AGENTS[a], AGENTS[(a + 1) % 3])];
        if a != b {
            boxes.push(format!("K{{{}|{}}}", AGENTS[a], AGENTS[b]));
        }
        let mut ev = Evaluator::new(&m);
        for k in boxes {
            for law in [
                format!("{k}({phi}) -> ({phi})"),
                format!("{k}({phi}) -> {k}{k}({phi})"),
                format!("~{k}({phi}) -> {k}~{k}({phi})"),
                format!("{k}(({phi}) -> p) -> {k}({phi}) -> {k}p"),
            ] {
                prop_assert_eq!(ev.extension(&parse(&law).unwrap()).unwrap(), m.all_states(), "{}", law);
            }
        }
    }

    #[test]
    fn knowledge_chain(m in model_strategy(5, false), f in formula_strategy(2, false), a in 0usize..3, b in 0usize..3) {
        prop_assume!(a != b);
        let (a, b, phi) = (AGENTS[a], AGENTS[b], f.to_string());
        let mut ev = Evaluator::new(&m);
        for law in [
            format!("K{{{b}}}({phi}) -> K{{{b}|{a}}}({phi})"),
            format!("K{{{b}|{a}}}({phi}) -> D{{{a},{b}}}({phi})"),
        ] {
            prop_assert_eq!(ev.extension(&parse(&law).unwrap()).unwrap(), m.all_states(), "{}", law);
        }
    }

    #[test]
    fn share_update_keeps_model_laws(m in model_strategy(6, false), w in 0usize..6, a in 0usize..3, b in 0usize..3) {
        let w = w % m.num_states();
        let out = share_update(&m, w, a, b);
        prop_assert!(out.validate().is_ok());
        prop_assert!(mixed_pairs(&m, w, b).is_empty());
        let ab = m.relation(a).intersect(m.relation(b));
        prop_assert!(ab.is_subset(out.relation(b)));
        prop_assert!(out.relation(b).is_subset(m.relation(b)));
        for i in 0..3 {
            if i != b {
                prop_assert_eq!(out.relation(i), m.relation(i));
            }
        }
        prop_assert_eq!(out.valuation(), m.valuation());
        if a == b {
            prop_assert_eq!(&out, &m);
        }
        // Groups containing the sender, or not containing the receiver, keep
        // their distributed knowledge.
        for mask in 1u8..8 {
            let g: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
            if g.contains(&a) || !g.contains(&b) {
                prop_assert_eq!(out.group_relation(&g), m.group_relation(&g));
            }
        }
    }

    #[test]
    fn boolean_formulas_survive_sharing(m in model_strategy(5, false), f in boolean_positive_strategy(), a in 0usize..3, b in 0usize..3) {
        let before = extension(&m, &f).unwrap();
        for w in 0..m.num_states() {
            let after = extension(&share_update(&m, w, a, b), &f).unwrap();
            prop_assert_eq!(before, after);
        }
        let boxed = Formula::iff(f.clone(), Formula::share(ag(a), ag(b), f));
        prop_assert_eq!(extension(&m, &boxed).unwrap(), m.all_states());
    }

    #[test]
    fn resolution_is_idempotent_and_order_free(m in model_strategy(5, false), g in group_strategy()) {
        let idx: Vec<usize> = g.iter().map(|x| m.agent_index(x).unwrap()).collect();
        let once = resolve_update(&m, &idx);
        prop_assert_eq!(&resolve_update(&once, &idx), &once);
        let mut rev = idx.clone();
        rev.reverse();
        prop_assert_eq!(&resolve_update(&m, &rev), &once);
    }

    #[test]
    fn memoised_and_plain_evaluation_agree(m in model_strategy(4, true), f in formula_strategy(4, true)) {
        let memo = Evaluator::new(&m).extension(&f).unwrap();
        let plain = Evaluator::without_memo(&m).extension(&f).unwrap();
        prop_assert_eq!(memo, plain);
    }

    #[test]
    fn fingerprint_ignores_state_names(m in model_strategy(6, true), perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let n = m.num_states();
        let perm: Vec<usize> = perm.into_iter().filter(|&i| i < n).collect();
        let renamed = permute(&m, &perm);
        prop_assert_eq!(fingerprint(&m), fingerprint(&renamed));
    }

    #[test]
    fn save_then_load_round_trips(m in model_strategy(6, true)) {
        prop_assert_eq!(load(save(&m).as_bytes()).unwrap(), m);
    }
}
