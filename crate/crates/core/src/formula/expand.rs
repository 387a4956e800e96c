use super::{Agent, Formula};

fn chain(pairs: impl DoubleEndedIterator<Item = (Agent, Agent)>, body: Formula) -> Formula {
    pairs
        .rev()
        .fold(body, |inner, (s, r)| Formula::share(s, r, inner))
}

/// Rewrites every macro operator into primitive constructors.
///
/// * `E{a1,..,an}f` is `K{a1}f & .. & K{an}f`, left-nested, in listed order.
/// * `Rk{a1,..,an}f` is `[a1>a2]..[a(n-1)>an][an>a(n-1)]..[a2>a1]f`.
/// * `Rk{a;G}f` is the forward chain only, starting at `a` and continuing
///   through the rest of `G` in listed order.
/// * `P{a}f` is `K{a}f & Ok{a}`, `Ob{a}f` is `~P{a}~f`, and `Perm(a>b)` is
///   `[a>b]Ok{b}`.
///
/// A one-agent `Rk` has no pair to share and expands to its body.
pub fn expand(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Atom(_) | Top | Bot | Ideal | Ok(_) | Var(_) => f.clone(),
        Not(g) => Formula::not(expand(g)),
        And(l, r) => Formula::and(expand(l), expand(r)),
        Or(l, r) => Formula::or(expand(l), expand(r)),
        Imp(l, r) => Formula::imp(expand(l), expand(r)),
        Iff(l, r) => Formula::iff(expand(l), expand(r)),
        Know { agent, deps, body } => Formula::know_dep(agent.clone(), deps.clone(), expand(body)),
        Dist { group, body } => Formula::dist(group.clone(), expand(body)),
        ResolveInfo { group, body } => Formula::resolve_info(group.clone(), expand(body)),
        Share {
            sender,
            receiver,
            body,
        } => Formula::share(sender.clone(), receiver.clone(), expand(body)),
        Everybody { group, body } => {
            let body = expand(body);
            group
                .iter()
                .map(|a| Formula::know(a.clone(), body.clone()))
                .reduce(Formula::and)
                .expect("groups are non-empty")
        }
        KnowRes { order, body } => {
            let forward = order.windows(2).map(|w| (w[0].clone(), w[1].clone()));
            let backward = order.windows(2).rev().map(|w| (w[1].clone(), w[0].clone()));
            let pairs: Vec<_> = forward.chain(backward).collect();
            chain(pairs.into_iter(), expand(body))
        }
        KnowResFrom { first, group, body } => {
            let order: Vec<Agent> = std::iter::once(first.clone())
                .chain(group.iter().filter(|a| *a != first).cloned())
                .collect();
            let pairs: Vec<_> = order
                .windows(2)
                .map(|w| (w[0].clone(), w[1].clone()))
                .collect();
            chain(pairs.into_iter(), expand(body))
        }
        Permitted { agent, body } => {
            Formula::and(Formula::know(agent.clone(), expand(body)), Ok(agent.clone()))
        }
        Ought { agent, body } => Formula::not(expand(&Permitted {
            agent: agent.clone(),
            body: Box::new(Formula::not((**body).clone())),
        })),
        PermShare { sender, receiver } => {
            Formula::share(sender.clone(), receiver.clone(), Ok(receiver.clone()))
        }
    }
}

/// Warnings for macros that expand to something trivial.
pub fn degenerate_macros(f: &Formula) -> Vec<String> {
    let mut out = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Formula::KnowRes { order, .. } if order.len() == 1 => out.push(format!(
                "Rk{{{}}} has a single agent and no share to perform; it expands to its body",
                order[0]
            )),
            Formula::KnowResFrom { group, .. } if group.len() == 1 => out.push(format!(
                "Rk{{{0};{0}}} has a single agent and no share to perform; it expands to its body",
                group[0]
            )),
            _ => {}
        }
        stack.extend(g.children());
    }
    out
}
