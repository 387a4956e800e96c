//! Cross-module checks of the public entry points.

use crate::enumerate::EnumConfig;
use crate::gen::random_formula;
use crate::pool::Vocabulary;
use crate::{
    check_named, check_schema, gen_model, run_golden, GenConfig, LabConfig, LabError, Registry, Status, Tier,
    Verdict,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_random() -> GenConfig {
    GenConfig {
        samples: 100,
        ..GenConfig::default()
    }
}

#[test]
fn sharing_is_valid_on_sample() {
    let r = check_named(&Registry::standard(), "Sharing", &GenConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::ValidOnSample, "{}", r.render());
    assert_eq!(r.status(), Status::Pass);
}

#[test]
fn int_is_valid_on_sample() {
    let r = check_named(&Registry::standard(), "Int", &GenConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::ValidOnSample, "{}", r.render());
}

#[test]
fn fcp1_has_a_single_agent_countermodel() {
    let registry = Registry::standard();
    let schema = registry.get("FCP1").unwrap();
    let cfg = LabConfig {
        tiers: vec![Tier::Exhaustive(EnumConfig {
            max_states: 4,
            agents: 1,
            atoms: 2,
            deontic: true,
        })],
    };
    let r = check_schema(schema, &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Countermodel);
    let c = r.countermodel.as_ref().unwrap();
    assert!(c.model.is_deontic());
    assert!(c.model.num_states() <= 4);
    assert!(r.render().contains("instance="));
}

#[test]
fn reports_are_deterministic() {
    let registry = Registry::standard();
    for name in ["Int^-", "Sharing", "P-5"] {
        let a = check_named(&registry, name, &small_random()).unwrap().render();
        let b = check_named(&registry, name, &small_random()).unwrap().render();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn unknown_schema_is_an_error() {
    let err = check_named(&Registry::standard(), "NoSuchAxiom", &small_random()).unwrap_err();
    assert_eq!(err, LabError::UnknownSchema("NoSuchAxiom".into()));
}

#[test]
fn report_lines_follow_the_format() {
    let r = check_named(&Registry::standard(), "K-T", &small_random()).unwrap();
    let text = r.render();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("SCHEMA K-T models="), "{first}");
    assert!(first.ends_with("verdict=valid-on-sample"), "{first}");
    assert!(text.lines().last().unwrap().starts_with("STATUS K-T claim=valid result=pass"));
}

#[test]
fn every_schema_prepares_on_the_default_vocabularies() {
    let registry = Registry::standard();
    assert!(registry.names().len() >= 50);
    let random = GenConfig::default();
    for schema in registry.iter() {
        let vocab = Vocabulary::new(random.agents, random.atoms, schema.deontic());
        let prepared = schema
            .prepare(&vocab)
            .unwrap_or_else(|e| panic!("{}: {e}", schema.name()));
        assert!(prepared.instance_count() > 0, "{}", schema.name());
    }
}

#[test]
fn golden_facts_evaluate_without_errors() {
    for g in run_golden() {
        assert!(g.actual.is_ok(), "{}", g.render());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_models_validate(seed in any::<u64>(), index in 0u64..1000, deontic in any::<bool>()) {
        let cfg = GenConfig { seed, deontic, ..GenConfig::default() };
        let m = gen_model(&cfg, index);
        prop_assert!(m.validate().is_ok());
        prop_assert_eq!(m.is_deontic(), deontic);
        prop_assert!(m.num_states() <= cfg.max_states);
    }

    #[test]
    fn random_formulas_print_and_reparse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let agents = crate::gen::agent_names(3);
        let atoms = crate::gen::atom_names(3);
        let f = random_formula(&mut rng, 3, &atoms, &agents, true);
        let again = kpool_core::parse(&f.to_string()).unwrap();
        prop_assert_eq!(again, f);
    }
}
