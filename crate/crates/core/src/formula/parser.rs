use super::{is_lower_token, Agent, Formula, FormulaError};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown operator `{name}` at {line}:{col}")]
    UnknownOperator { line: usize, col: usize, name: String },
    #[error("empty agent group at {line}:{col}")]
    EmptyGroup { line: usize, col: usize },
    #[error("{source} at {line}:{col}")]
    Invalid {
        line: usize,
        col: usize,
        source: FormulaError,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Tilde,
    Amp,
    Pipe,
    Comma,
    Semi,
    Gt,
    Arrow,
    DArrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: pos.line,
        col: pos.col,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            '~' => (Tok::Tilde, 1),
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Pipe, 1),
            ',' => (Tok::Comma, 1),
            ';' => (Tok::Semi, 1),
            '>' => (Tok::Gt, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                (Tok::DArrow, 3)
            }
            c if c.is_ascii_alphabetic() => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                (Tok::Ident(chars[i..i + len].iter().collect()), len)
            }
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        out.push((tok, pos));
        i += len;
        col += len;
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

const KEYWORDS: [&str; 10] = ["K", "D", "E", "Ri", "Rk", "P", "Ob", "Ok", "Perm", "O"];
const METAVARIABLES: [&str; 3] = ["PHI", "PSI", "CHI"];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    template: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {}, found {}", tok.describe(), self.peek().describe()),
            ))
        }
    }

    fn agent(&mut self) -> Result<Agent, ParseError> {
        let pos = self.pos();
        match self.bump().0 {
            Tok::Ident(name) if is_lower_token(&name) => Ok(Agent::new(name).expect("checked")),
            Tok::Ident(name)
                if self.template && name.len() == 1 && name.as_bytes()[0].is_ascii_uppercase() =>
            {
                Ok(Agent::meta(name.chars().next().unwrap()))
            }
            other => Err(syntax(pos, format!("expected agent name, found {}", other.describe()))),
        }
    }

    /// AGENT ("," AGENT)* "}" with the opening brace already consumed.
    fn group_rest(&mut self, open: Pos, mut group: Vec<Agent>) -> Result<Vec<Agent>, ParseError> {
        if group.is_empty() {
            if self.peek() == &Tok::RBrace {
                return Err(ParseError::EmptyGroup {
                    line: open.line,
                    col: open.col,
                });
            }
            group.push(self.agent()?);
        }
        while self.eat(&Tok::Comma) {
            group.push(self.agent()?);
        }
        self.expect(Tok::RBrace)?;
        Ok(group)
    }

    fn group(&mut self) -> Result<Vec<Agent>, ParseError> {
        let open = self.pos();
        self.expect(Tok::LBrace)?;
        self.group_rest(open, Vec::new())
    }

    fn single(&mut self) -> Result<Agent, ParseError> {
        self.expect(Tok::LBrace)?;
        let a = self.agent()?;
        self.expect(Tok::RBrace)?;
        Ok(a)
    }

    fn checked(f: Formula, pos: Pos) -> Result<Formula, ParseError> {
        f.validate_node().map_err(|source| match source {
            FormulaError::EmptyGroup => ParseError::EmptyGroup {
                line: pos.line,
                col: pos.col,
            },
            source => ParseError::Invalid {
                line: pos.line,
                col: pos.col,
                source,
            },
        })?;
        Ok(f)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.imp()?;
        while self.eat(&Tok::DArrow) {
            left = Formula::iff(left, self.imp()?);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::imp(left, self.imp()?))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while self.eat(&Tok::Pipe) {
            left = Formula::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::Amp) {
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        let (tok, _) = self.bump();
        let f = match tok {
            Tok::Tilde => Formula::not(self.unary()?),
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                f
            }
            Tok::LBracket => {
                let sender = self.agent()?;
                self.expect(Tok::Gt)?;
                let receiver = self.agent()?;
                self.expect(Tok::RBracket)?;
                Formula::share(sender, receiver, self.unary()?)
            }
            Tok::Ident(name) => return self.word(name, pos),
            other => {
                return Err(syntax(
                    pos,
                    format!("expected a formula, found {}", other.describe()),
                ))
            }
        };
        Ok(f)
    }

    fn word(&mut self, name: String, pos: Pos) -> Result<Formula, ParseError> {
        let boxed = |f| Box::new(f);
        let f = match name.as_str() {
            "true" => Formula::Top,
            "false" => Formula::Bot,
            _ if is_lower_token(&name) => Formula::Atom(name),
            "O" => Formula::Ideal,
            "Ok" => Formula::Ok(self.single()?),
            "K" => {
                let open = self.pos();
                self.expect(Tok::LBrace)?;
                let agent = self.agent()?;
                let deps = if self.eat(&Tok::Pipe) {
                    self.group_rest(open, Vec::new())?
                } else {
                    self.expect(Tok::RBrace)?;
                    Vec::new()
                };
                Formula::Know {
                    agent,
                    deps,
                    body: boxed(self.unary()?),
                }
            }
            "D" => {
                let group = self.group()?;
                Formula::Dist {
                    group,
                    body: boxed(self.unary()?),
                }
            }
            "E" => {
                let group = self.group()?;
                Formula::Everybody {
                    group,
                    body: boxed(self.unary()?),
                }
            }
            "Ri" => {
                let group = self.group()?;
                Formula::ResolveInfo {
                    group,
                    body: boxed(self.unary()?),
                }
            }
            "Rk" => {
                let open = self.pos();
                self.expect(Tok::LBrace)?;
                if self.peek() == &Tok::RBrace {
                    return Err(ParseError::EmptyGroup {
                        line: open.line,
                        col: open.col,
                    });
                }
                let first = self.agent()?;
                if self.eat(&Tok::Semi) {
                    let group = self.group_rest(open, Vec::new())?;
                    Formula::KnowResFrom {
                        first,
                        group,
                        body: boxed(self.unary()?),
                    }
                } else {
                    let order = self.group_rest(open, vec![first])?;
                    Formula::KnowRes {
                        order,
                        body: boxed(self.unary()?),
                    }
                }
            }
            "P" => {
                let agent = self.single()?;
                Formula::Permitted {
                    agent,
                    body: boxed(self.unary()?),
                }
            }
            "Ob" => {
                let agent = self.single()?;
                Formula::Ought {
                    agent,
                    body: boxed(self.unary()?),
                }
            }
            "Perm" => {
                self.expect(Tok::LParen)?;
                let sender = self.agent()?;
                self.expect(Tok::Gt)?;
                let receiver = self.agent()?;
                self.expect(Tok::RParen)?;
                Formula::PermShare { sender, receiver }
            }
            _ if self.template && METAVARIABLES.contains(&name.as_str()) => Formula::Var(name),
            _ => {
                debug_assert!(!KEYWORDS.contains(&name.as_str()));
                return Err(ParseError::UnknownOperator {
                    line: pos.line,
                    col: pos.col,
                    name,
                });
            }
        };
        Self::checked(f, pos)
    }
}

fn run(text: &str, template: bool) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
        template,
    };
    let f = p.formula()?;
    if p.peek() != &Tok::End {
        return Err(syntax(
            p.pos(),
            format!("unexpected {} after formula", p.peek().describe()),
        ));
    }
    Ok(f)
}

/// Parses a formula. Macro operators are kept; see [`super::expand`].
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    run(text, false)
}

/// Parses a schema template: additionally accepts the metavariables `PHI`,
/// `PSI`, `CHI` and single upper-case letters as meta-agents.
pub fn parse_template(text: &str) -> Result<Formula, ParseError> {
    run(text, true)
}
