//! Formula syntax for the coalgebraic μ-calculus instances.
//!
//! Formulas are kept in negation normal form: negation only appears on
//! atoms. Full negation is available through [`Formula::negate`], which
//! dualises operators and fixpoints.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// A set of agents `{1..=32}` stored as a bitmask (bit `i-1` is agent `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AgentSet(pub u32);

impl AgentSet {
    pub const EMPTY: AgentSet = AgentSet(0);

    pub fn from_agents<I: IntoIterator<Item = u32>>(agents: I) -> AgentSet {
        AgentSet(agents.into_iter().fold(0, |m, a| m | (1 << (a - 1))))
    }

    /// The grand coalition `{1..=n}`.
    pub fn all(n: u32) -> AgentSet {
        if n >= 32 {
            AgentSet(u32::MAX)
        } else {
            AgentSet((1u32 << n) - 1)
        }
    }

    pub fn contains(self, agent: u32) -> bool {
        (1..=32).contains(&agent) && self.0 & (1 << (agent - 1)) != 0
    }

    pub fn is_subset(self, other: AgentSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: AgentSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn agents(self) -> impl Iterator<Item = u32> {
        (1..=32).filter(move |&a| self.contains(a))
    }

    pub fn max_agent(self) -> u32 {
        32 - self.0.leading_zeros()
    }
}

impl fmt::Debug for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.agents().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Unary modal operators of the supported similarity types.
///
/// Atoms are not modal operators here; they are [`Formula::Atom`] and
/// [`Formula::NegAtom`] and behave as nullary operators downstream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalOp {
    /// `<>`: some successor.
    Diamond,
    /// `[]`: all successors.
    Box,
    /// `<n>`: more than `n` successors (counted with multiplicity).
    AtLeast(u32),
    /// `[n]`: all but at most `n` successors.
    AllBut(u32),
    /// `<{D}>`: coalition `D` can enforce.
    Enforce(AgentSet),
    /// `[{D}]`: coalition `D` cannot prevent.
    Allow(AgentSet),
}

impl ModalOp {
    pub fn dual(self) -> ModalOp {
        match self {
            ModalOp::Diamond => ModalOp::Box,
            ModalOp::Box => ModalOp::Diamond,
            ModalOp::AtLeast(n) => ModalOp::AllBut(n),
            ModalOp::AllBut(n) => ModalOp::AtLeast(n),
            ModalOp::Enforce(d) => ModalOp::Allow(d),
            ModalOp::Allow(d) => ModalOp::Enforce(d),
        }
    }

    /// Diamond-like operators: `<>`, `<n>`, `<{D}>`.
    pub fn is_existential(self) -> bool {
        matches!(
            self,
            ModalOp::Diamond | ModalOp::AtLeast(_) | ModalOp::Enforce(_)
        )
    }
}

impl fmt::Display for ModalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModalOp::Diamond => write!(f, "<>"),
            ModalOp::Box => write!(f, "[]"),
            ModalOp::AtLeast(n) => write!(f, "<{n}>"),
            ModalOp::AllBut(n) => write!(f, "[{n}]"),
            ModalOp::Enforce(d) => write!(f, "<{d:?}>"),
            ModalOp::Allow(d) => write!(f, "[{d:?}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixKind {
    Mu,
    Nu,
}

impl FixKind {
    pub fn dual(self) -> FixKind {
        match self {
            FixKind::Mu => FixKind::Nu,
            FixKind::Nu => FixKind::Mu,
        }
    }
}

/// A μ-calculus formula in negation normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    False,
    True,
    Atom(String),
    NegAtom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Modal(ModalOp, Box<Formula>),
    Var(String),
    Fix(FixKind, String, Box<Formula>),
}

pub fn atom(name: &str) -> Formula {
    Formula::Atom(name.to_string())
}

pub fn neg_atom(name: &str) -> Formula {
    Formula::NegAtom(name.to_string())
}

pub fn var(name: &str) -> Formula {
    Formula::Var(name.to_string())
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn modal(op: ModalOp, f: Formula) -> Formula {
    Formula::Modal(op, Box::new(f))
}

pub fn mu(x: &str, body: Formula) -> Formula {
    Formula::Fix(FixKind::Mu, x.to_string(), Box::new(body))
}

pub fn nu(x: &str, body: Formula) -> Formula {
    Formula::Fix(FixKind::Nu, x.to_string(), Box::new(body))
}

/// Left-nested conjunction; `True` for an empty iterator.
pub fn conj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
    parts.into_iter().reduce(and).unwrap_or(Formula::True)
}

/// Left-nested disjunction; `False` for an empty iterator.
pub fn disj<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
    parts.into_iter().reduce(or).unwrap_or(Formula::False)
}

impl Formula {
    /// Negation pushed to the atoms: `¬♥ψ = ♥̄¬ψ`, `¬μX.ψ = νX.¬ψ[¬X/X]`.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::False => Formula::True,
            Formula::True => Formula::False,
            Formula::Atom(a) => Formula::NegAtom(a.clone()),
            Formula::NegAtom(a) => Formula::Atom(a.clone()),
            Formula::And(a, b) => or(a.negate(), b.negate()),
            Formula::Or(a, b) => and(a.negate(), b.negate()),
            Formula::Modal(op, a) => modal(op.dual(), a.negate()),
            Formula::Var(x) => Formula::Var(x.clone()),
            Formula::Fix(k, x, body) => Formula::Fix(k.dual(), x.clone(), Box::new(body.negate())),
        }
    }

    /// `a -> b` as `¬a ∨ b`.
    pub fn implies(&self, other: &Formula) -> Formula {
        or(self.negate(), other.clone())
    }

    pub fn is_fixpoint_free(&self) -> bool {
        match self {
            Formula::Fix(..) | Formula::Var(_) => false,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_fixpoint_free() && b.is_fixpoint_free(),
            Formula::Modal(_, a) => a.is_fixpoint_free(),
            _ => true,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Modal(_, a) => go(a, bound, out),
                Formula::Fix(_, x, body) => {
                    bound.push(x.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable is bound at most once.
    pub fn is_clean(&self) -> bool {
        let mut seen = BTreeSet::new();
        let mut ok = true;
        self.visit(&mut |f| {
            if let Formula::Fix(_, x, _) = f {
                ok &= seen.insert(x.clone());
            }
        });
        ok
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Modal(_, a) | Formula::Fix(_, _, a) => a.visit(f),
            _ => {}
        }
    }

    /// Number of syntax tree nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Renames bound variables so that each is bound exactly once.
    ///
    /// The first binder of a name keeps it; later ones get a numeric suffix.
    pub fn clean(&self) -> Formula {
        let mut used: BTreeSet<String> = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Var(x) = f {
                used.insert(x.clone());
            }
        });
        let mut taken = BTreeSet::new();
        let mut env: Vec<(String, String)> = Vec::new();
        clean_rec(self, &mut taken, &used, &mut env)
    }

    /// Substitutes `replacement` for free occurrences of `x`.
    ///
    /// Capture is not checked; callers substitute closed formulas.
    pub fn substitute(&self, x: &str, replacement: &Formula) -> Formula {
        match self {
            Formula::Var(y) if y == x => replacement.clone(),
            Formula::And(a, b) => and(a.substitute(x, replacement), b.substitute(x, replacement)),
            Formula::Or(a, b) => or(a.substitute(x, replacement), b.substitute(x, replacement)),
            Formula::Modal(op, a) => modal(*op, a.substitute(x, replacement)),
            Formula::Fix(k, y, body) if y != x => {
                Formula::Fix(*k, y.clone(), Box::new(body.substitute(x, replacement)))
            }
            other => other.clone(),
        }
    }

    /// Structural equality up to consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn go(a: &Formula, b: &Formula, env: &mut Vec<(String, String)>) -> bool {
            match (a, b) {
                (Formula::Var(x), Formula::Var(y)) => {
                    match env.iter().rev().find(|(l, r)| l == x || r == y) {
                        Some((l, r)) => l == x && r == y,
                        None => x == y,
                    }
                }
                (Formula::And(a1, a2), Formula::And(b1, b2))
                | (Formula::Or(a1, a2), Formula::Or(b1, b2)) => go(a1, b1, env) && go(a2, b2, env),
                (Formula::Modal(o1, a1), Formula::Modal(o2, b1)) => o1 == o2 && go(a1, b1, env),
                (Formula::Fix(k1, x, a1), Formula::Fix(k2, y, b1)) => {
                    if k1 != k2 {
                        return false;
                    }
                    env.push((x.clone(), y.clone()));
                    let r = go(a1, b1, env);
                    env.pop();
                    r
                }
                _ => a == b,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Atoms occurring (positively or negatively).
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) | Formula::NegAtom(a) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    /// Largest agent index mentioned by a coalition operator.
    pub fn max_agent(&self) -> u32 {
        let mut m = 0;
        self.visit(&mut |f| {
            if let Formula::Modal(ModalOp::Enforce(d) | ModalOp::Allow(d), _) = f {
                m = m.max(d.max_agent());
            }
        });
        m
    }

    pub fn modal_ops(&self) -> BTreeSet<ModalOp> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Modal(op, _) = f {
                out.insert(*op);
            }
        });
        out
    }
}

fn fresh(base: &str, taken: &BTreeSet<String>, used: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|c| !taken.contains(c) && !used.contains(c))
        .expect("unbounded supply of names")
}

fn clean_rec(
    f: &Formula,
    taken: &mut BTreeSet<String>,
    used: &BTreeSet<String>,
    env: &mut Vec<(String, String)>,
) -> Formula {
    match f {
        Formula::Var(x) => match env.iter().rev().find(|(orig, _)| orig == x) {
            Some((_, new)) => Formula::Var(new.clone()),
            None => f.clone(),
        },
        Formula::And(a, b) => and(clean_rec(a, taken, used, env), clean_rec(b, taken, used, env)),
        Formula::Or(a, b) => or(clean_rec(a, taken, used, env), clean_rec(b, taken, used, env)),
        Formula::Modal(op, a) => modal(*op, clean_rec(a, taken, used, env)),
        Formula::Fix(k, x, body) => {
            let name = fresh(x, taken, used);
            taken.insert(name.clone());
            env.push((x.clone(), name.clone()));
            let body = clean_rec(body, taken, used, env);
            env.pop();
            Formula::Fix(*k, name, Box::new(body))
        }
        other => other.clone(),
    }
}

/// Prints in the input grammar accepted by [`crate::parse`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::False => write!(f, "false"),
            Formula::True => write!(f, "true"),
            Formula::Atom(a) | Formula::Var(a) => write!(f, "{a}"),
            Formula::NegAtom(a) => write!(f, "!{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Modal(op, a) => write!(f, "{op}{a}"),
            Formula::Fix(FixKind::Mu, x, body) => write!(f, "(mu {x}. {body})"),
            Formula::Fix(FixKind::Nu, x, body) => write!(f, "(nu {x}. {body})"),
        }
    }
}

/// Variable name → binder formula, for a clean formula.
pub fn binders(f: &Formula) -> HashMap<String, Formula> {
    let mut out = HashMap::new();
    f.visit(&mut |g| {
        if let Formula::Fix(_, x, _) = g {
            out.insert(x.clone(), g.clone());
        }
    });
    out
}
