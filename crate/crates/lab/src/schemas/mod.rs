//! The schema library.

mod replace;
mod template;
mod witness;

pub use template::{axiom, rule, TemplateSchema};

use crate::registry::Schema;

/// Every built-in schema, grouped by topic.
pub fn all() -> Vec<Box<dyn Schema>> {
    let mut out: Vec<Box<dyn Schema>> = Vec::new();
    let mut add = |s: TemplateSchema| out.push(Box::new(s));

    // Individual and agent-dependent knowledge.
    add(axiom("K-K", "K{A}(PHI -> PSI) -> (K{A}PHI -> K{A}PSI)"));
    add(axiom("K-T", "K{A}PHI -> PHI"));
    add(axiom("K-4", "K{A}PHI -> K{A}K{A}PHI"));
    add(axiom("K-5", "~K{A}PHI -> K{A}~K{A}PHI"));
    add(axiom("AK-K", "K{A|B}(PHI -> PSI) -> (K{A|B}PHI -> K{A|B}PSI)"));
    add(axiom("AK-T", "K{A|B}PHI -> PHI"));
    add(axiom("AK-4", "K{A|B}PHI -> K{A|B}K{A|B}PHI"));
    add(axiom("AK-5", "~K{A|B}PHI -> K{A|B}~K{A|B}PHI"));
    add(rule("NEC_A", "PHI", "K{A|B}PHI"));
    add(axiom("Int", "K{A}PHI -> K{A|B}PHI"));
    add(axiom("DepDist", "K{B|A}PHI -> D{A,B}PHI"));

    // Knowledge sharing.
    add(axiom("Inv", "(PHI -> [A>B]PHI) & (~PHI -> [A>B]~PHI)").atoms_only());
    add(axiom("Rev", "~[A>B]PHI -> [A>B]~PHI"));
    add(axiom("D_share", "[A>B]~PHI -> ~[A>B]PHI"));
    add(axiom("Int_+", "K{B}[A>B]PHI -> [A>B]K{B}PHI"));
    add(axiom("Int^-", "[A>B]K{C}PHI <-> K{C}[A>B]PHI").distinct('B', 'C'));
    add(axiom("K_share", "[A>B](PHI -> PSI) -> ([A>B]PHI -> [A>B]PSI)"));
    add(axiom("Rep", "[A>B]PHI <-> [A>B][A>B]PHI").open());
    add(rule("N_s", "PHI", "[A>B]PHI"));
    add(rule("Inc_share", "PHI -> [A>B]PSI", "K{A}PHI -> [A>B]K{B}PSI"));
    add(axiom("C", "[A>B]PHI & [A>B]PSI -> [A>B](PHI & PSI)"));
    add(rule("RK", "PHI & CHI -> PSI", "[A>B]PHI & [A>B]CHI -> [A>B]PSI"));
    add(rule("RM_share", "PHI -> [A>B]PSI", "K{C}PHI -> [A>B]K{C}PSI"));
    add(axiom("Boolean", "PHI <-> [A>B]PHI").prop_plus());
    add(axiom("Remain", "K{C}PHI -> [A>B]K{C}PHI").prop_plus());
    add(axiom("Sharing", "K{A}PHI -> [A>B]K{B}PHI").prop_plus());
    add(axiom("Step", "[A>B]K{B}PHI -> [A>B][B>C]K{C}PHI").prop_plus());
    add(axiom("Dist", "[A>B]K{B}PHI -> D{A,B}[A>B]PHI").prop_plus());

    // Resolution.
    add(axiom("Int^R", "Rk{A,B}K{C}PHI -> Ri{A,B}K{C}PHI").distinct('A', 'B'));
    add(axiom("Int^R-3", "Rk{A,B,C}K{A}PHI -> Ri{A,B,C}K{A}PHI")
        .distinct('A', 'B')
        .distinct('A', 'C')
        .distinct('B', 'C'));
    add(axiom("E-K", "E{A,B}PHI -> K{A}PHI").distinct('A', 'B').prop_plus());
    add(axiom("K-RkFrom", "K{A}PHI -> Rk{A;A,B}E{A,B}PHI").distinct('A', 'B').prop_plus());
    add(axiom("RkFrom-Rk", "Rk{A;A,B}E{A,B}PHI -> Rk{A,B}E{A,B}PHI").distinct('A', 'B').prop_plus());
    add(axiom("E-Rk", "E{A,B}PHI -> Rk{A,B}E{A,B}PHI").distinct('A', 'B').prop_plus());
    add(axiom("Rk-Ri", "Rk{A,B}E{A,B}PHI -> Ri{A,B}E{A,B}PHI").distinct('A', 'B').prop_plus());
    add(axiom("Ri-D", "Ri{A,B}E{A,B}PHI <-> D{A,B}Ri{A,B}PHI").distinct('A', 'B').prop_plus());
    let three = |s: TemplateSchema| s.distinct('A', 'B').distinct('A', 'C').distinct('B', 'C').prop_plus();
    add(three(axiom("K-RkFrom-3", "K{A}PHI -> Rk{A;A,B,C}E{A,B,C}PHI")));
    add(three(axiom("RkFrom-Rk-3", "Rk{A;A,B,C}E{A,B,C}PHI -> Rk{A,B,C}E{A,B,C}PHI")));
    add(three(axiom("E-Rk-3", "E{A,B,C}PHI -> Rk{A,B,C}E{A,B,C}PHI")));
    add(three(axiom("Rk-Ri-3", "Rk{A,B,C}E{A,B,C}PHI -> Ri{A,B,C}E{A,B,C}PHI")));

    // Permission to know.
    add(axiom("O-visible", "O -> ~K{A}~O").deontic());
    add(axiom("P-RFC", "P{A}PHI & P{A}PSI -> P{A}(PHI | PSI)").deontic());
    add(axiom("P-MC", "P{A}(PHI & PSI) <-> P{A}PHI & P{A}PSI").deontic());
    add(axiom("P-K", "P{A}(PHI -> PSI) -> (P{A}PHI -> P{A}PSI)").deontic());
    add(axiom("P-D", "~P{A}false").deontic());
    add(axiom("P-T", "P{A}PHI -> PHI").deontic());
    add(axiom("P-4", "P{A}PHI -> P{A}P{A}PHI").deontic());
    add(rule("P-RE", "PHI -> PSI", "P{A}PHI -> P{A}PSI").deontic());
    add(rule("P-NEC", "PHI", "P{A}PHI").deontic());
    add(axiom("FCP1", "P{A}(PHI | PSI) -> P{A}PHI & P{A}PSI").deontic().invalid());
    add(axiom("FCP2", "P{A}PHI -> P{A}(PHI & PSI)").deontic().invalid());
    add(axiom("P-5", "~P{A}~PHI -> P{A}~P{A}~PHI").deontic().invalid());

    // Permission to share.
    add(axiom("PermTransfer", "[A>B]Perm(B>C) -> Perm(A>C)").deontic());

    out.push(Box::new(witness::closure()));
    out.push(Box::new(witness::shared_intro()));
    out.push(Box::new(replace::sender()));
    out.push(Box::new(replace::receiver()));
    out
}
