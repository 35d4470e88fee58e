//! The nondeterministic tracking automaton `A_χ`.
//!
//! States are closure nodes. Letters are node-addressed propositional
//! manipulations (choose a disjunct, split a conjunction, unfold a
//! fixpoint) or modal steps. A state not addressed by a propositional
//! letter stays where it is. The automaton accepts a word iff some trace
//! unfolds a least fixpoint as its outermost infinitely often unfolded
//! fixpoint; priorities are attached to unfolding transitions.

use std::fmt;

use crate::closure::{Closure, NodeId, NodeKind, SatClass};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// Pick disjunct `branch` (1 or 2) of the disjunction `node`.
    Choose { node: NodeId, branch: u8 },
    Split { node: NodeId },
    Unfold { node: NodeId },
    /// A modal step; `κ` lists the modal formulas (and possibly atom
    /// literals) taken along to the successor.
    Modal(Vec<NodeId>),
}

impl Letter {
    pub fn is_modal(&self) -> bool {
        matches!(self, Letter::Modal(_))
    }

    /// Whether the letter addresses a node of the right shape.
    pub fn is_valid(&self, cl: &Closure) -> bool {
        match self {
            Letter::Choose { node, branch } => {
                (*branch == 1 || *branch == 2) && matches!(cl.kind(*node), NodeKind::Or(..))
            }
            Letter::Split { node } => matches!(cl.kind(*node), NodeKind::And(..)),
            Letter::Unfold { node } => matches!(cl.kind(*node), NodeKind::Fix(..)),
            Letter::Modal(k) => k.iter().all(|&v| cl.class(v) == SatClass::Modal),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Choose { node, branch } => write!(f, "choose({node},{branch})"),
            Letter::Split { node } => write!(f, "split({node})"),
            Letter::Unfold { node } => write!(f, "unfold({node})"),
            Letter::Modal(k) => {
                write!(f, "modal{{")?;
                for (i, v) in k.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Successors of a single state; at most two, sorted.
pub fn delta(cl: &Closure, state: NodeId, letter: &Letter) -> Vec<NodeId> {
    match letter {
        Letter::Modal(kappa) => match cl.kind(state) {
            NodeKind::Modal(_, arg) if kappa.contains(&state) => vec![*arg],
            _ => vec![],
        },
        Letter::Choose { node, branch } if *node == state => match *cl.kind(state) {
            NodeKind::Or(a, b) => vec![if *branch == 1 { a } else { b }],
            _ => vec![state],
        },
        Letter::Split { node } if *node == state => match *cl.kind(state) {
            NodeKind::And(a, b) if a == b => vec![a],
            NodeKind::And(a, b) => vec![a.min(b), a.max(b)],
            _ => vec![state],
        },
        Letter::Unfold { node } if *node == state => match *cl.kind(state) {
            NodeKind::Fix(_, body) => vec![body],
            _ => vec![state],
        },
        _ => vec![state],
    }
}

/// State priority: `Ω'` of the closure.
pub fn priority(cl: &Closure, state: NodeId) -> u32 {
    cl.omega(state)
}

/// Priority charged to a transition: the state priority when the letter
/// unfolds that very fixpoint, 0 otherwise.
pub fn transition_priority(cl: &Closure, state: NodeId, letter: &Letter) -> u32 {
    match letter {
        Letter::Unfold { node } if *node == state => cl.omega(state),
        _ => 0,
    }
}

/// Image of a set of states, sorted and deduplicated.
pub fn step_set(cl: &Closure, set: &[NodeId], letter: &Letter) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = set.iter().flat_map(|&v| delta(cl, v, letter)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// All members are modal formulas, atom literals or `⊤`.
pub fn is_saturated(cl: &Closure, label: &[NodeId]) -> bool {
    label.iter().all(|&v| cl.class(v) != SatClass::Other)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Logic;
    use crate::parse::parse;

    #[test]
    fn delta_cases() {
        let f = parse("(a | b) & (<> a & [] b)", Logic::K, None).unwrap();
        let cl = Closure::new(&f);
        let find = |s: &str| (0..cl.len() as NodeId).find(|&v| cl.node_formula(v).to_string() == s).unwrap();
        let or = find("(a | b)");
        let conj = find("(<>a & []b)");
        let (a, b, da, bb) = (find("a"), find("b"), find("<>a"), find("[]b"));
        assert_eq!(delta(&cl, or, &Letter::Choose { node: or, branch: 1 }), vec![a]);
        assert_eq!(delta(&cl, or, &Letter::Choose { node: or, branch: 2 }), vec![b]);
        let mut both = vec![da, bb];
        both.sort();
        assert_eq!(delta(&cl, conj, &Letter::Split { node: conj }), both);
        assert_eq!(delta(&cl, da, &Letter::Modal(vec![bb])), Vec::<NodeId>::new());
        assert_eq!(delta(&cl, da, &Letter::Modal(vec![da, bb])), vec![a]);
        // Letters addressing another node leave the state alone.
        assert_eq!(delta(&cl, da, &Letter::Split { node: conj }), vec![da]);
        assert!(delta(&cl, a, &Letter::Modal(vec![a])).is_empty());
    }

    #[test]
    fn unfolding_priorities() {
        let f = parse("mu X. (p | <> X)", Logic::K, None).unwrap();
        let cl = Closure::new(&f);
        let chi = cl.root();
        let p = (0..cl.len() as NodeId).find(|&v| cl.node_formula(v).to_string() == "p").unwrap();
        assert_eq!(priority(&cl, p), 0);
        assert_eq!(priority(&cl, chi) % 2, 0);
        assert!((0..cl.len() as NodeId).all(|v| v == chi || priority(&cl, v) < priority(&cl, chi)));
        assert_eq!(transition_priority(&cl, chi, &Letter::Unfold { node: chi }), 2);
        assert_eq!(transition_priority(&cl, p, &Letter::Unfold { node: chi }), 0);
    }
}
