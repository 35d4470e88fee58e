//! Text syntax.
//!
//! ```text
//! formula := ('mu' | 'nu') IDENT '.' formula | disj ('->' formula)?
//! disj    := conj ('|' conj)*
//! conj    := unary ('&' unary)*
//! unary   := '!' unary | MODAL unary | ('mu' | 'nu') IDENT '.' formula | atom
//! atom    := 'true' | 'false' | IDENT | '(' formula ')'
//! MODAL   := '<>' | '[]' | '<' N '>' | '[' N ']' | '<{' agents '}>' | '[{' agents '}]'
//! ```
//!
//! Identifiers bound by an enclosing `mu`/`nu` are variables; other
//! identifiers are atoms and must start with a lowercase letter or digit.

use crate::error::{Error, Result};
use crate::formula::{and, modal, or, AgentSet, FixKind, Formula, ModalOp};
use crate::logic::Logic;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Mu,
    Nu,
    Dot,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Modal(ModalOp),
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Syntax { pos, msg: msg.to_string() };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            '!' | '~' => {
                i += 1;
                Tok::Not
            }
            '&' => {
                i += 1;
                Tok::And
            }
            '|' => {
                i += 1;
                Tok::Or
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Arrow
                } else {
                    return Err(err(i, "expected '->'"));
                }
            }
            '<' | '[' => {
                let close = if c == '<' { b'>' } else { b']' };
                i += 1;
                let op = if bytes.get(i) == Some(&close) {
                    i += 1;
                    if c == '<' {
                        ModalOp::Diamond
                    } else {
                        ModalOp::Box
                    }
                } else if bytes.get(i) == Some(&b'{') {
                    i += 1;
                    let mut agents = Vec::new();
                    loop {
                        while i < bytes.len() && (bytes[i] as char).is_whitespace() {
                            i += 1;
                        }
                        match bytes.get(i) {
                            Some(b'}') => {
                                i += 1;
                                break;
                            }
                            Some(b',') if !agents.is_empty() => i += 1,
                            Some(d) if d.is_ascii_digit() => {
                                let s = i;
                                while i < bytes.len() && bytes[i].is_ascii_digit() {
                                    i += 1;
                                }
                                let a: u32 = text[s..i]
                                    .parse()
                                    .map_err(|_| err(s, "agent index too large"))?;
                                if a == 0 || a > 32 {
                                    return Err(Error::AgentOutOfRange { agent: a, max: 32, pos: s });
                                }
                                agents.push((a, s));
                            }
                            _ => return Err(err(i, "malformed coalition")),
                        }
                    }
                    if bytes.get(i) != Some(&close) {
                        return Err(err(i, "unterminated coalition modality"));
                    }
                    i += 1;
                    let set = AgentSet::from_agents(agents.iter().map(|&(a, _)| a));
                    if c == '<' {
                        ModalOp::Enforce(set)
                    } else {
                        ModalOp::Allow(set)
                    }
                } else if bytes.get(i).is_some_and(|d| d.is_ascii_digit()) {
                    let s = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let n: u32 = text[s..i].parse().map_err(|_| err(s, "grade too large"))?;
                    if bytes.get(i) != Some(&close) {
                        return Err(err(i, "unterminated graded modality"));
                    }
                    i += 1;
                    if c == '<' {
                        ModalOp::AtLeast(n)
                    } else {
                        ModalOp::AllBut(n)
                    }
                } else {
                    return Err(err(i, "malformed modality"));
                };
                Tok::Modal(op)
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "mu" => Tok::Mu,
                    "nu" => Tok::Nu,
                    w => Tok::Ident(w.to_string()),
                }
            }
            _ => return Err(err(i, &format!("unexpected character '{c}'"))),
        };
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

#[derive(Debug)]
enum Raw {
    True,
    False,
    Ident(String, usize),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Implies(Box<Raw>, Box<Raw>),
    Modal(ModalOp, usize, Box<Raw>),
    Fix(FixKind, String, Box<Raw>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax { pos: self.pos(), msg: format!("expected {what}") })
        }
    }

    fn formula(&mut self) -> Result<Raw> {
        if matches!(self.peek(), Tok::Mu | Tok::Nu) {
            return self.binder();
        }
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Raw::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn binder(&mut self) -> Result<Raw> {
        let kind = match self.bump() {
            Tok::Mu => FixKind::Mu,
            _ => FixKind::Nu,
        };
        let pos = self.pos();
        let name = match self.bump() {
            Tok::Ident(x) => x,
            _ => return Err(Error::Syntax { pos, msg: "expected variable after binder".into() }),
        };
        self.expect(Tok::Dot, "'.'")?;
        let body = self.formula()?;
        Ok(Raw::Fix(kind, name, Box::new(body)))
    }

    fn disj(&mut self) -> Result<Raw> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conj()?;
            lhs = Raw::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Raw> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Raw::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Raw::Not(Box::new(self.unary()?)))
            }
            Tok::Modal(op) => {
                self.bump();
                Ok(Raw::Modal(op, pos, Box::new(self.unary()?)))
            }
            Tok::Mu | Tok::Nu => self.binder(),
            Tok::True => {
                self.bump();
                Ok(Raw::True)
            }
            Tok::False => {
                self.bump();
                Ok(Raw::False)
            }
            Tok::Ident(x) => {
                self.bump();
                Ok(Raw::Ident(x, pos))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Eof => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            t => Err(Error::Syntax { pos, msg: format!("unexpected token {t:?}") }),
        }
    }
}

struct Lower<'a> {
    logic: Logic,
    agents: Option<u32>,
    text: &'a str,
}

impl Lower<'_> {
    fn check_op(&self, op: ModalOp, pos: usize) -> Result<()> {
        if !self.logic.admits(op) {
            let end = self.text[pos..]
                .find(['>', ']'])
                .map(|e| pos + e + 1)
                .unwrap_or(self.text.len());
            return Err(Error::OperatorNotInLogic {
                op: self.text[pos..end].to_string(),
                logic: self.logic.to_string(),
                pos,
            });
        }
        if let (ModalOp::Enforce(d) | ModalOp::Allow(d), Some(n)) = (op, self.agents) {
            if d.max_agent() > n {
                return Err(Error::AgentOutOfRange { agent: d.max_agent(), max: n, pos });
            }
        }
        Ok(())
    }

    /// Pushes negation inwards; `neg` is the current polarity and `env`
    /// records the polarity at which each enclosing binder was seen.
    fn nnf(&self, raw: &Raw, neg: bool, env: &mut Vec<(String, bool)>) -> Result<Formula> {
        Ok(match raw {
            Raw::True => {
                if neg {
                    Formula::False
                } else {
                    Formula::True
                }
            }
            Raw::False => {
                if neg {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            Raw::Ident(x, pos) => {
                if let Some((_, bneg)) = env.iter().rev().find(|(y, _)| y == x) {
                    if *bneg != neg {
                        return Err(Error::NegativeVariable { name: x.clone(), pos: *pos });
                    }
                    Formula::Var(x.clone())
                } else if x.starts_with(|c: char| c.is_ascii_uppercase()) {
                    return Err(Error::UnboundVariable { name: x.clone(), pos: *pos });
                } else if neg {
                    Formula::NegAtom(x.clone())
                } else {
                    Formula::Atom(x.clone())
                }
            }
            Raw::Not(a) => self.nnf(a, !neg, env)?,
            Raw::And(a, b) | Raw::Or(a, b) => {
                let l = self.nnf(a, neg, env)?;
                let r = self.nnf(b, neg, env)?;
                if matches!(raw, Raw::And(..)) != neg {
                    and(l, r)
                } else {
                    or(l, r)
                }
            }
            Raw::Implies(a, b) => {
                let l = self.nnf(a, !neg, env)?;
                let r = self.nnf(b, neg, env)?;
                if neg {
                    and(l, r)
                } else {
                    or(l, r)
                }
            }
            Raw::Modal(op, pos, a) => {
                self.check_op(*op, *pos)?;
                let op = if neg { op.dual() } else { *op };
                modal(op, self.nnf(a, neg, env)?)
            }
            Raw::Fix(k, x, body) => {
                env.push((x.clone(), neg));
                let b = self.nnf(body, neg, env);
                env.pop();
                let k = if neg { k.dual() } else { *k };
                Formula::Fix(k, x.clone(), Box::new(b?))
            }
        })
    }
}

/// Parses `text` as a formula of `logic`.
///
/// The result is closed, clean and in negation normal form. For the
/// coalition logic, `agents` bounds the admissible agent indices.
pub fn parse(text: &str, logic: Logic, agents: Option<u32>) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0 };
    let raw = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(Error::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    let lower = Lower { logic, agents, text };
    let f = lower.nnf(&raw, false, &mut Vec::new())?;
    Ok(f.clean())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::*;

    #[test]
    fn parses_least_fixpoint() {
        let f = parse("mu X. (p | <> X)", Logic::K, None).unwrap();
        assert_eq!(f, mu("X", or(atom("p"), modal(ModalOp::Diamond, var("X")))));
    }

    #[test]
    fn graded_operator_is_logic_specific() {
        assert_eq!(
            parse("<2> p", Logic::Graded, None).unwrap(),
            modal(ModalOp::AtLeast(2), atom("p"))
        );
        assert!(matches!(
            parse("<2> p", Logic::K, None),
            Err(Error::OperatorNotInLogic { .. })
        ));
        assert!(matches!(
            parse("<> p", Logic::Graded, None),
            Err(Error::OperatorNotInLogic { .. })
        ));
    }

    #[test]
    fn errors_are_reported() {
        assert!(matches!(parse("p &", Logic::K, None), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("<> X", Logic::K, None), Err(Error::UnboundVariable { .. })));
        assert!(matches!(
            parse("<{3}> p", Logic::Amc, Some(2)),
            Err(Error::AgentOutOfRange { agent: 3, max: 2, .. })
        ));
        assert!(matches!(
            parse("mu X. !X", Logic::K, None),
            Err(Error::NegativeVariable { .. })
        ));
        assert!(parse("(p", Logic::K, None).is_err());
    }

    #[test]
    fn negation_is_pushed_inwards() {
        let f = parse("!(mu X. p | <> X)", Logic::K, None).unwrap();
        assert_eq!(f, nu("X", and(neg_atom("p"), modal(ModalOp::Box, var("X")))));
        let g = parse("p -> q", Logic::K, None).unwrap();
        assert_eq!(g, or(neg_atom("p"), atom("q")));
    }

    #[test]
    fn binders_extend_right_and_unary_binds_tight() {
        let f = parse("nu X. mu Y. (p & <> X) | <> Y", Logic::K, None).unwrap();
        let expected = nu(
            "X",
            mu(
                "Y",
                or(and(atom("p"), modal(ModalOp::Diamond, var("X"))), modal(ModalOp::Diamond, var("Y"))),
            ),
        );
        assert_eq!(f, expected);
        let g = parse("<> p & q", Logic::K, None).unwrap();
        assert_eq!(g, and(modal(ModalOp::Diamond, atom("p")), atom("q")));
    }

    #[test]
    fn reused_names_are_renamed() {
        let f = parse("(mu X. <> X) & (mu X. [] X)", Logic::K, None).unwrap();
        assert!(f.is_clean());
        assert_eq!(f.to_string(), "((mu X. <>X) & (mu X_1. []X_1))");
    }

    #[test]
    fn coalition_syntax_round_trips() {
        let f = parse("<{1,2}> p & [{}] q", Logic::Amc, None).unwrap();
        assert_eq!(parse(&f.to_string(), Logic::Amc, None).unwrap(), f);
        assert_eq!(f.max_agent(), 2);
    }
}
