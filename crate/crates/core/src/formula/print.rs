//! Concrete syntax output. Parentheses are inserted only where the grammar
//! needs them, so `parse(&f.to_string()) == Ok(f)`.

use std::fmt::{self, Display, Write};

use super::{Agent, Formula};

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn list(agents: &[Agent]) -> String {
    agents
        .iter()
        .map(Agent::as_str)
        .collect::<Vec<_>>()
        .join(",")
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Imp(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write(out: &mut fmt::Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    if precedence(f) < min {
        out.write_char('(')?;
        write(out, f, 0)?;
        return out.write_char(')');
    }
    let binary = |out: &mut fmt::Formatter<'_>, l, op, r, lmin, rmin| {
        write(out, l, lmin)?;
        write!(out, " {op} ")?;
        write(out, r, rmin)
    };
    use Formula::*;
    match f {
        Atom(p) => out.write_str(p),
        Var(v) => out.write_str(v),
        Top => out.write_str("true"),
        Bot => out.write_str("false"),
        Ideal => out.write_str("O"),
        Ok(a) => write!(out, "Ok{{{a}}}"),
        PermShare { sender, receiver } => write!(out, "Perm({sender}>{receiver})"),
        Iff(l, r) => binary(out, l, "<->", r, IFF, IMP),
        Imp(l, r) => binary(out, l, "->", r, OR, IMP),
        Or(l, r) => binary(out, l, "|", r, OR, AND),
        And(l, r) => binary(out, l, "&", r, AND, UNARY),
        Not(body) => {
            out.write_char('~')?;
            write(out, body, UNARY)
        }
        Know { agent, deps, body } => {
            if deps.is_empty() {
                write!(out, "K{{{agent}}}")?;
            } else {
                write!(out, "K{{{agent}|{}}}", list(deps))?;
            }
            write(out, body, UNARY)
        }
        Dist { group, body } => {
            write!(out, "D{{{}}}", list(group))?;
            write(out, body, UNARY)
        }
        Everybody { group, body } => {
            write!(out, "E{{{}}}", list(group))?;
            write(out, body, UNARY)
        }
        ResolveInfo { group, body } => {
            write!(out, "Ri{{{}}}", list(group))?;
            write(out, body, UNARY)
        }
        KnowRes { order, body } => {
            write!(out, "Rk{{{}}}", list(order))?;
            write(out, body, UNARY)
        }
        KnowResFrom { first, group, body } => {
            write!(out, "Rk{{{first};{}}}", list(group))?;
            write(out, body, UNARY)
        }
        Share {
            sender,
            receiver,
            body,
        } => {
            write!(out, "[{sender}>{receiver}]")?;
            write(out, body, UNARY)
        }
        Permitted { agent, body } => {
            write!(out, "P{{{agent}}}")?;
            write(out, body, UNARY)
        }
        Ought { agent, body } => {
            write!(out, "Ob{{{agent}}}")?;
            write(out, body, UNARY)
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(f, self, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, parse_template};

    #[test]
    fn prints_minimal_parentheses() {
        for text in [
            "K{a}(p -> q)",
            "K{c|a,b}(p -> r)",
            "[a>b]~K{b}p",
            "p -> q -> r",
            "(p -> q) -> r",
            "p <-> q <-> r",
            "p <-> (q <-> r)",
            "(p | q) & r",
            "p | q & r",
            "~(p & ~q)",
            "Rk{a;a,b,c}E{a,b,c}(p -> q)",
            "Perm(a>b) & O | Ok{c}",
            "Ob{a}~P{b}true",
            "Ri{a,b}D{a,b}false",
        ] {
            assert_eq!(parse(text).unwrap().to_string(), text);
        }
        assert_eq!(parse_template("K{A|B}PHI").unwrap().to_string(), "K{A|B}PHI");
    }
}
