//! Known truth values on the built-in models, plus the whole schema library.

use kpool_core::{builtin, parse, semantics::holds_at};

use crate::gen::GenConfig;
use crate::registry::{Claim, Registry};
use crate::report::{check_schema, LabConfig, LabReport, Verdict};

/// A formula with a known truth value at a state of a built-in model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenFact {
    pub group: &'static str,
    pub model: &'static str,
    pub state: &'static str,
    pub formula: &'static str,
    pub expected: bool,
}

const fn fact(group: &'static str, model: &'static str, formula: &'static str, expected: bool) -> GoldenFact {
    GoldenFact {
        group,
        model,
        state: "s0",
        formula,
        expected,
    }
}

pub const GOLDEN: &[GoldenFact] = &[
    fact("individual knowledge", "servers", "K{a}(p -> q)", true),
    fact("individual knowledge", "servers", "K{a}(q -> r)", false),
    fact("individual knowledge", "servers", "K{a}(p -> r)", false),
    fact("individual knowledge", "servers", "K{b}(p -> q)", false),
    fact("individual knowledge", "servers", "K{b}(q -> r)", true),
    fact("individual knowledge", "servers", "K{b}(p -> r)", false),
    fact("individual knowledge", "servers", "K{c}(p -> q)", false),
    fact("individual knowledge", "servers", "K{c}(q -> r)", false),
    fact("individual knowledge", "servers", "K{c}(p -> r)", false),
    fact("agent-dependent knowledge", "servers", "K{a|c}(p -> q)", true),
    fact("agent-dependent knowledge", "servers", "K{a|c}(q -> r)", false),
    fact("agent-dependent knowledge", "servers", "K{a|c}(p -> r)", false),
    fact("agent-dependent knowledge", "servers", "K{c|a}(p -> q)", true),
    fact("agent-dependent knowledge", "servers", "K{c|a}(q -> r)", false),
    fact("agent-dependent knowledge", "servers", "K{c|a}(p -> r)", false),
    fact("knowledge dependent on two agents", "servers", "K{c|a,b}(p -> q)", true),
    fact("knowledge dependent on two agents", "servers", "K{c|a,b}(q -> r)", true),
    fact("knowledge dependent on two agents", "servers", "K{c|a,b}(p -> r)", true),
    fact("knowledge dependent on two agents", "servers", "K{c|a,b}p", false),
    fact("distributed knowledge", "servers", "D{a,b,c}(p -> q)", true),
    fact("distributed knowledge", "servers", "D{a,b,c}(q -> r)", true),
    fact("distributed knowledge", "servers", "D{a,b,c}(p -> r)", true),
    fact("distributed knowledge", "servers", "D{a,b,c}p", true),
    fact("distributed knowledge", "servers", "D{a,b,c}q", true),
    fact("distributed knowledge", "servers", "D{a,b,c}r", true),
    fact("Moore sentences", "servers", "K{c|a}((p -> q) & ~K{c}(p -> q))", true),
    fact("Moore sentences", "servers", "[a>c]K{c|a}((p -> q) & ~K{c}(p -> q))", false),
    fact("Moore sentences", "servers", "[a>c]K{c|a}((p -> q) & K{c}(p -> q))", true),
    fact("information versus knowledge resolution", "pooling_gap", "Ri{a,b}E{a,b}(p & q & r)", true),
    fact("information versus knowledge resolution", "pooling_gap", "Rk{a,b}E{a,b}p", true),
    fact("information versus knowledge resolution", "pooling_gap", "Rk{a,b}E{a,b}q", false),
    fact("information versus knowledge resolution", "pooling_gap", "Rk{a,b}E{a,b}r", false),
    fact("direction of sharing", "servers", "[a>c]K{c}(p -> q)", true),
    fact("direction of sharing", "servers", "[b>c]K{c}(q -> r)", true),
    fact("knowledge resolution", "servers", "Rk{a;a,b,c}E{a,b,c}(p -> q)", true),
    fact("knowledge resolution", "servers", "Rk{a;a,b,c}E{a,b,c}(q -> r)", false),
    fact("knowledge resolution", "servers", "Rk{b;a,b,c}E{a,b,c}(q -> r)", true),
    fact("knowledge resolution", "servers", "Rk{b;a,b,c}E{a,b,c}(p -> q)", false),
    fact(
        "knowledge resolution",
        "servers",
        "Rk{a,b,c}(E{a,b,c}(p -> q) & E{a,b,c}(q -> r) & E{a,b,c}(p -> r))",
        true,
    ),
    fact("permission to know", "servers_ideal", "[a>c]P{c}(p -> q)", true),
    fact("permission to know", "servers_ideal", "[b>c]P{c}(q -> r)", true),
    fact("permission to know", "servers_ideal", "[a>c][b>c]P{c}(p -> r)", false),
    fact("permission to share", "servers_ideal", "[a>c][b>c]Ok{c}", false),
    fact("permission to share", "servers_ideal", "[a>c]Perm(b>c)", false),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenResult {
    pub fact: GoldenFact,
    /// The computed value, or the error that prevented computing it.
    pub actual: Result<bool, String>,
}

impl GoldenResult {
    pub fn passed(&self) -> bool {
        self.actual == Ok(self.fact.expected)
    }

    pub fn render(&self) -> String {
        let actual = match &self.actual {
            Ok(v) => v.to_string(),
            Err(e) => format!("error({e})"),
        };
        format!(
            "GOLDEN {} model={} state={} formula={} expected={} actual={}",
            if self.passed() { "pass" } else { "FAIL" },
            self.fact.model,
            self.fact.state,
            self.fact.formula,
            self.fact.expected,
            actual
        )
    }
}

fn evaluate(fact: &GoldenFact) -> Result<bool, String> {
    let m = builtin::by_name(fact.model).ok_or_else(|| format!("no built-in model `{}`", fact.model))?;
    let f = parse(fact.formula).map_err(|e| e.to_string())?;
    let w = m
        .state_index(fact.state)
        .ok_or_else(|| format!("no state `{}`", fact.state))?;
    holds_at(&m, &f, w).map_err(|e| e.to_string())
}

pub fn run_golden() -> Vec<GoldenResult> {
    GOLDEN
        .iter()
        .map(|fact| GoldenResult {
            fact: fact.clone(),
            actual: evaluate(fact),
        })
        .collect()
}

/// The two readings of "some accessible state is ideal" inside `P{a}`:
/// the agent-indexed constant `Ok{a}` and the modal `~K{a}~O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadingComparison {
    pub formula: &'static str,
    pub ok_reading: bool,
    pub modal_reading: bool,
}

pub fn compare_permission_readings() -> Vec<ReadingComparison> {
    let m = builtin::servers_ideal();
    let cases = [
        ("[a>c]P{c}(p -> q)", "[a>c](K{c}(p -> q) & ~K{c}~O)"),
        ("[b>c]P{c}(q -> r)", "[b>c](K{c}(q -> r) & ~K{c}~O)"),
        ("[a>c][b>c]P{c}(p -> r)", "[a>c][b>c](K{c}(p -> r) & ~K{c}~O)"),
        ("[a>c]Perm(b>c)", "[a>c][b>c]~K{c}~O"),
    ];
    cases
        .iter()
        .map(|&(ok, modal)| ReadingComparison {
            formula: ok,
            ok_reading: holds_at(&m, &parse(ok).unwrap(), 0).unwrap(),
            modal_reading: holds_at(&m, &parse(modal).unwrap(), 0).unwrap(),
        })
        .collect()
}

pub struct SuiteReport {
    pub golden: Vec<GoldenResult>,
    pub readings: Vec<ReadingComparison>,
    pub schemas: Vec<LabReport>,
}

impl SuiteReport {
    pub fn golden_ok(&self) -> bool {
        self.golden.iter().all(GoldenResult::passed)
    }

    /// No schema claimed valid has a countermodel, open questions aside.
    pub fn valid_schemas_ok(&self) -> bool {
        self.schemas.iter().all(|r| {
            r.claim != Claim::Valid || r.open_question || r.verdict == Verdict::ValidOnSample
        })
    }

    pub fn success(&self) -> bool {
        self.golden_ok() && self.valid_schemas_ok()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for g in &self.golden {
            out.push_str(&g.render());
            out.push('\n');
        }
        for r in &self.readings {
            out.push_str(&format!(
                "READING model=servers_ideal state=s0 formula={} ok-reading={} modal-reading={}\n",
                r.formula, r.ok_reading, r.modal_reading
            ));
        }
        for r in &self.schemas {
            out.push_str(&r.render());
        }
        let passed = self.golden.iter().filter(|g| g.passed()).count();
        out.push_str(&format!(
            "SUMMARY golden={}/{} schemas-valid-ok={} success={}\n",
            passed,
            self.golden.len(),
            self.valid_schemas_ok(),
            self.success()
        ));
        out
    }
}

/// Golden facts, the permission readings, and every registered schema at
/// its default configuration with the given random tier.
pub fn run_suite(registry: &Registry, random: &GenConfig) -> SuiteReport {
    let schemas = registry
        .iter()
        .map(|s| {
            check_schema(s, &LabConfig::with_random(s, random.clone()))
                .unwrap_or_else(|e| panic!("built-in schema failed to prepare: {e}"))
        })
        .collect();
    SuiteReport {
        golden: run_golden(),
        readings: compare_permission_readings(),
        schemas,
    }
}

pub fn run_full_suite() -> SuiteReport {
    run_suite(&Registry::standard(), &GenConfig::default())
}
