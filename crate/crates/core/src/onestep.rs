//! One-step satisfiability and modal tableau rules for each logic instance.
//!
//! A one-step pair consists of modal atoms `♥a` over variables `a < 64` and
//! a set `Θ` of valuations, each a bitmask of the variables true at one
//! successor.

use std::collections::BTreeSet;

use crate::closure::{Closure, NodeId, NodeKind};
use crate::error::{Error, Result};
use crate::formula::{AgentSet, ModalOp};
use crate::logic::Logic;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OneStepPair {
    pub gamma: Vec<(ModalOp, usize)>,
    pub theta: Vec<u64>,
}

impl OneStepPair {
    pub fn new(gamma: Vec<(ModalOp, usize)>, theta: Vec<u64>) -> Self {
        OneStepPair { gamma, theta }
    }
}

/// False iff the set contains `⊥` or both `a` and `¬a` for some atom.
pub fn literal_consistent<I: IntoIterator<Item = NodeId>>(cl: &Closure, label: I) -> bool {
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for v in label {
        match cl.kind(v) {
            NodeKind::False => return false,
            NodeKind::Atom(a) => {
                if neg.contains(a) {
                    return false;
                }
                pos.insert(*a);
            }
            NodeKind::NegAtom(a) => {
                if pos.contains(a) {
                    return false;
                }
                neg.insert(*a);
            }
            _ => {}
        }
    }
    true
}

fn bit(a: usize) -> u64 {
    1u64 << a
}

/// Relational one-step satisfiability: every `◇a` has a witness in `Θ`
/// that also satisfies all boxes. On serial frames a pure-box pair needs
/// one such element as well.
pub fn one_step_sat_relational(pair: &OneStepPair, serial: bool) -> bool {
    let boxes = pair
        .gamma
        .iter()
        .filter(|(op, _)| *op == ModalOp::Box)
        .fold(0u64, |m, &(_, a)| m | bit(a));
    let mut has_diamond = false;
    for &(op, a) in &pair.gamma {
        if op == ModalOp::Diamond {
            has_diamond = true;
            let need = boxes | bit(a);
            if !pair.theta.iter().any(|&u| u & need == need) {
                return false;
            }
        }
    }
    if serial && !has_diamond {
        return pair.theta.iter().any(|&u| u & boxes == boxes);
    }
    true
}

/// Elements of `theta` not strictly contained in another element.
fn maximal_elements(theta: &[u64]) -> Vec<u64> {
    let mut set: Vec<u64> = theta.to_vec();
    set.sort_unstable();
    set.dedup();
    set.iter()
        .copied()
        .filter(|&u| !set.iter().any(|&w| w != u && w & u == u))
        .collect()
}

struct Graded<'a> {
    dia: Vec<(u32, u64)>,
    boxes: Vec<(u32, u64)>,
    theta: &'a [u64],
    cap: u64,
}

impl Graded<'_> {
    /// `dcount[i]`: weight so far on the variable of diamond `i`;
    /// `bcount[j]`: weight so far outside the variable of box `j`.
    fn search(&self, k: usize, dcount: &mut [u64], bcount: &mut [u64]) -> bool {
        let remaining = &self.theta[k..];
        // Every unsatisfied diamond must still be reachable.
        for (i, &(g, mask)) in self.dia.iter().enumerate() {
            if dcount[i] <= g as u64 {
                let avail = remaining.iter().filter(|&&u| u & mask != 0).count() as u64 * self.cap;
                if dcount[i] + avail <= g as u64 {
                    return false;
                }
            }
        }
        if k + 1 >= self.theta.len() {
            if k == self.theta.len() {
                return self.dia.iter().enumerate().all(|(i, &(g, _))| dcount[i] > g as u64);
            }
            // Last element: the least weight meeting the open diamonds is best.
            let u = self.theta[k];
            let mut w = 0u64;
            for (i, &(g, mask)) in self.dia.iter().enumerate() {
                if dcount[i] <= g as u64 {
                    if u & mask == 0 {
                        return false;
                    }
                    w = w.max(g as u64 + 1 - dcount[i]);
                }
            }
            return self
                .boxes
                .iter()
                .enumerate()
                .all(|(j, &(g, mask))| u & mask != 0 || bcount[j] + w <= g as u64);
        }
        let u = self.theta[k];
        for w in (0..=self.cap).rev() {
            let mut ok = true;
            for (j, &(g, mask)) in self.boxes.iter().enumerate() {
                if u & mask == 0 && bcount[j] + w > g as u64 {
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            for (i, &(_, mask)) in self.dia.iter().enumerate() {
                if u & mask != 0 {
                    dcount[i] += w;
                }
            }
            for (j, &(_, mask)) in self.boxes.iter().enumerate() {
                if u & mask == 0 {
                    bcount[j] += w;
                }
            }
            let found = self.search(k + 1, dcount, bcount);
            for (i, &(_, mask)) in self.dia.iter().enumerate() {
                if u & mask != 0 {
                    dcount[i] -= w;
                }
            }
            for (j, &(_, mask)) in self.boxes.iter().enumerate() {
                if u & mask == 0 {
                    bcount[j] -= w;
                }
            }
            if found {
                return true;
            }
        }
        false
    }
}

/// Graded one-step satisfiability: is there a multiset over `Θ` giving each
/// `⟨g⟩a` weight above `g` on `a` and each `[g]a` weight at most `g` off `a`?
///
/// Depth-first search over multiplicities `0..=m+1` (with `m` the largest
/// diamond grade), restricted to maximal elements of `Θ`.
pub fn one_step_sat_graded(pair: &OneStepPair) -> bool {
    let mut dia = Vec::new();
    let mut boxes = Vec::new();
    for &(op, a) in &pair.gamma {
        match op {
            ModalOp::AtLeast(g) => dia.push((g, bit(a))),
            ModalOp::AllBut(g) => boxes.push((g, bit(a))),
            _ => panic!("non-graded operator {op} in graded one-step pair"),
        }
    }
    if dia.is_empty() {
        return true;
    }
    let m = dia.iter().map(|&(g, _)| g).max().unwrap_or(0) as u64;
    let mut theta = maximal_elements(&pair.theta);
    // Fail fast: elements that serve more diamonds first.
    theta.sort_by_key(|&u| std::cmp::Reverse(dia.iter().filter(|&&(_, mask)| u & mask != 0).count()));
    let g = Graded { dia, boxes, theta: &theta, cap: m + 1 };
    let mut dcount = vec![0; g.dia.len()];
    let mut bcount = vec![0; g.boxes.len()];
    g.search(0, &mut dcount, &mut bcount)
}

/// Coalition literals after normalisation: `[N]b` becomes `⟨∅⟩b` and
/// `[∅]b` becomes `⟨N⟩b`.
fn coalition_literals(gamma: &[(ModalOp, usize)], agents: u32) -> (Vec<(AgentSet, usize, usize)>, Vec<(AgentSet, usize, usize)>) {
    let all = AgentSet::all(agents);
    let mut dia = Vec::new();
    let mut boxes = Vec::new();
    for (pos, &(op, a)) in gamma.iter().enumerate() {
        match op {
            ModalOp::Enforce(d) => dia.push((d, a, pos)),
            ModalOp::Allow(c) if c == all => dia.push((AgentSet::EMPTY, a, pos)),
            ModalOp::Allow(c) if c.is_empty() => dia.push((all, a, pos)),
            ModalOp::Allow(c) => boxes.push((c, a, pos)),
            _ => panic!("non-coalition operator {op} in coalition one-step pair"),
        }
    }
    (dia, boxes)
}

/// Maximal families of pairwise disjoint coalitions among `dia` (indices),
/// restricted to coalitions inside `within`.
fn disjoint_families(dia: &[(AgentSet, usize, usize)], within: AgentSet) -> Vec<Vec<usize>> {
    let eligible: Vec<usize> = (0..dia.len()).filter(|&i| dia[i].0.is_subset(within)).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        dia: &[(AgentSet, usize, usize)],
        eligible: &[usize],
        k: usize,
        used: AgentSet,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == eligible.len() {
            let maximal = eligible
                .iter()
                .all(|i| cur.contains(i) || !dia[*i].0.is_disjoint(used));
            if maximal {
                out.push(cur.clone());
            }
            return;
        }
        let i = eligible[k];
        if dia[i].0.is_disjoint(used) {
            cur.push(i);
            go(dia, eligible, k + 1, used.union(dia[i].0), cur, out);
            cur.pop();
        }
        go(dia, eligible, k + 1, used, cur, out);
    }
    go(dia, &eligible, 0, AgentSet::EMPTY, &mut cur, &mut out);
    out
}

/// Clauses (as positions into `gamma`) that must each be jointly satisfiable.
fn coalition_clauses(gamma: &[(ModalOp, usize)], agents: u32) -> Vec<Vec<usize>> {
    let (dia, boxes) = coalition_literals(gamma, agents);
    let mut clauses: BTreeSet<Vec<usize>> = BTreeSet::new();
    for fam in disjoint_families(&dia, AgentSet(u32::MAX)) {
        let mut c: Vec<usize> = fam.iter().map(|&i| dia[i].2).collect();
        c.sort_unstable();
        clauses.insert(c);
    }
    for &(cset, _, pos) in &boxes {
        for fam in disjoint_families(&dia, cset) {
            let mut c: Vec<usize> = fam.iter().map(|&i| dia[i].2).collect();
            c.push(pos);
            c.sort_unstable();
            clauses.insert(c);
        }
    }
    clauses.into_iter().collect()
}

/// Coalition one-step satisfiability over concurrent game frames with
/// `agents` players.
///
/// Decided by the coalition-logic rule criterion: for every family of
/// pairwise disjoint enforcing coalitions, optionally together with one
/// cannot-prevent literal whose coalition contains all of them, the goals
/// involved must hold together in some element of `Θ`; and `Θ` must be
/// nonempty since every agent has a move.
pub fn one_step_sat_coalition(pair: &OneStepPair, agents: u32) -> bool {
    if pair.theta.is_empty() {
        return false;
    }
    coalition_clauses(&pair.gamma, agents).iter().all(|c| {
        let need = c.iter().fold(0u64, |m, &pos| m | bit(pair.gamma[pos].1));
        pair.theta.iter().any(|&u| u & need == need)
    })
}

pub fn one_step_sat(logic: Logic, agents: u32, pair: &OneStepPair) -> bool {
    match logic {
        Logic::K => one_step_sat_relational(pair, false),
        Logic::KD => one_step_sat_relational(pair, true),
        Logic::Graded => one_step_sat_graded(pair),
        Logic::Amc => one_step_sat_coalition(pair, agents),
    }
}

/// A modal rule matched against a label: the premiss is a set of modal
/// formulas of the label, the conclusion a single conjunctive clause of
/// their arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RuleApplication {
    pub premiss: Vec<NodeId>,
    pub clause: Vec<NodeId>,
}

/// All modal rule applications matching the modal formulas in `label`.
///
/// For the relational logics there is one application per diamond (plus
/// the pure-box application on serial frames when there is no diamond).
/// For the coalition logic the applications are the rule instances of the
/// one-step criterion above. An empty list means the modal part is
/// vacuously satisfiable.
pub fn tableau_applications(
    cl: &Closure,
    label: &[NodeId],
    logic: Logic,
    agents: u32,
) -> Result<Vec<RuleApplication>> {
    let modals: Vec<(NodeId, ModalOp, NodeId)> = label
        .iter()
        .filter_map(|&v| match *cl.kind(v) {
            NodeKind::Modal(op, arg) => Some((v, op, arg)),
            _ => None,
        })
        .collect();
    let make = |ix: &[usize]| {
        let mut premiss: Vec<NodeId> = ix.iter().map(|&i| modals[i].0).collect();
        premiss.sort_unstable();
        premiss.dedup();
        let mut clause: Vec<NodeId> = ix.iter().map(|&i| modals[i].2).collect();
        clause.sort_unstable();
        clause.dedup();
        RuleApplication { premiss, clause }
    };
    let mut apps = BTreeSet::new();
    match logic {
        Logic::Graded => return Err(Error::UnsupportedEngine(logic.to_string())),
        Logic::K | Logic::KD => {
            let boxes: Vec<usize> = (0..modals.len()).filter(|&i| modals[i].1 == ModalOp::Box).collect();
            let mut any = false;
            for i in 0..modals.len() {
                if modals[i].1 == ModalOp::Diamond {
                    any = true;
                    let mut ix = boxes.clone();
                    ix.push(i);
                    apps.insert(make(&ix));
                }
            }
            if logic == Logic::KD && !any {
                apps.insert(make(&boxes));
            }
        }
        Logic::Amc => {
            if modals.is_empty() {
                apps.insert(make(&[]));
            } else {
                let gamma: Vec<(ModalOp, usize)> = modals.iter().enumerate().map(|(i, m)| (m.1, i)).collect();
                for c in coalition_clauses(&gamma, agents) {
                    apps.insert(make(&c));
                }
            }
        }
    }
    Ok(apps.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    const A: usize = 0;
    const B: usize = 1;

    #[test]
    fn literal_consistency() {
        let f = parse("(p & !q) & (!p & false)", Logic::K, None).unwrap();
        let cl = Closure::new(&f);
        let find = |s: &str| (0..cl.len() as NodeId).find(|&v| cl.node_formula(v).to_string() == s).unwrap();
        let (p, nq, np, bot) = (find("p"), find("!q"), find("!p"), find("false"));
        assert!(literal_consistent(&cl, [p, nq]));
        assert!(!literal_consistent(&cl, [p, np]));
        assert!(!literal_consistent(&cl, [bot]));
    }

    #[test]
    fn relational_examples() {
        let pair = OneStepPair::new(vec![(ModalOp::Diamond, A), (ModalOp::Box, B)], vec![0b11]);
        assert!(one_step_sat_relational(&pair, false));
        let pair = OneStepPair::new(vec![(ModalOp::Diamond, A)], vec![]);
        assert!(!one_step_sat_relational(&pair, false));
        let pair = OneStepPair::new(vec![(ModalOp::Box, B)], vec![]);
        assert!(one_step_sat_relational(&pair, false));
        assert!(!one_step_sat_relational(&pair, true));
    }

    #[test]
    fn graded_examples() {
        let pair = OneStepPair::new(vec![(ModalOp::AtLeast(1), A)], vec![0b1]);
        assert!(one_step_sat_graded(&pair));
        assert!(one_step_sat_graded(&OneStepPair::new(vec![], vec![0b1, 0b10])));
        // More than one a-successor but all but at most zero successors are b.
        let pair = OneStepPair::new(vec![(ModalOp::AtLeast(1), A), (ModalOp::AllBut(0), B)], vec![0b01, 0b10]);
        assert!(!one_step_sat_graded(&pair));
    }

    #[test]
    fn graded_counterexample_is_unsatisfiable() {
        // Variables p_A for A ⊆ {a,b,c,d}, indexed by the bitmask of A; the
        // successor for element x makes exactly the p_A with x ∈ A true.
        let theta: Vec<u64> = (0..4)
            .map(|x| (0..16u64).filter(|s| s & (1 << x) != 0).fold(0, |m, s| m | (1 << s)))
            .collect();
        let mut gamma: Vec<(ModalOp, usize)> = (0..16usize)
            .filter(|s| s.count_ones() == 2)
            .map(|s| (ModalOp::AtLeast(2), s))
            .collect();
        // ¬⟨6⟩p_X, i.e. at most 6 successors outside the empty set's variable.
        gamma.push((ModalOp::AllBut(6), 0));
        assert!(!one_step_sat_graded(&OneStepPair::new(gamma.clone(), theta.clone())));
        gamma.pop();
        gamma.push((ModalOp::AllBut(7), 0));
        assert!(one_step_sat_graded(&OneStepPair::new(gamma, theta)));
    }

    #[test]
    fn coalition_examples() {
        let one = AgentSet::from_agents([1]);
        let two = AgentSet::from_agents([2]);
        let pair = OneStepPair::new(vec![(ModalOp::Enforce(AgentSet::all(2)), A)], vec![0b1]);
        assert!(one_step_sat_coalition(&pair, 2));
        let pair = OneStepPair::new(vec![(ModalOp::Enforce(one), A), (ModalOp::Enforce(one), B)], vec![0b01, 0b10]);
        assert!(one_step_sat_coalition(&pair, 2));
        let pair = OneStepPair::new(vec![(ModalOp::Enforce(one), A), (ModalOp::Enforce(two), B)], vec![0b01, 0b10]);
        assert!(!one_step_sat_coalition(&pair, 2));
        // Matching pennies: neither agent can prevent its outcome.
        let pair = OneStepPair::new(vec![(ModalOp::Allow(one), A), (ModalOp::Allow(two), B)], vec![0b01, 0b10]);
        assert!(one_step_sat_coalition(&pair, 2));
        assert!(!one_step_sat_coalition(&OneStepPair::new(vec![], vec![]), 2));
    }

    #[test]
    fn relational_applications() {
        let f = parse("(<> a & [] b) & (<> c | true)", Logic::K, None).unwrap();
        let cl = Closure::new(&f);
        let find = |s: &str| (0..cl.len() as NodeId).find(|&v| cl.node_formula(v).to_string() == s).unwrap();
        let (da, bb, dc) = (find("<>a"), find("[]b"), find("<>c"));
        let (a, b, c) = (find("a"), find("b"), find("c"));
        let apps = tableau_applications(&cl, &[da, bb], Logic::K, 0).unwrap();
        assert_eq!(apps.len(), 1);
        let mut clause = vec![a, b];
        clause.sort();
        assert_eq!(apps[0].clause, clause);
        assert!(tableau_applications(&cl, &[bb], Logic::K, 0).unwrap().is_empty());
        assert_eq!(tableau_applications(&cl, &[bb], Logic::KD, 0).unwrap().len(), 1);
        let apps = tableau_applications(&cl, &[da, dc, bb], Logic::K, 0).unwrap();
        let mut clauses: Vec<Vec<NodeId>> = apps.into_iter().map(|a| a.clause).collect();
        clauses.sort();
        let mut expected = vec![vec![a.min(b), a.max(b)], vec![b.min(c), b.max(c)]];
        expected.sort();
        assert_eq!(clauses, expected);
        assert!(matches!(
            tableau_applications(&cl, &[da], Logic::Graded, 0),
            Err(Error::UnsupportedEngine(_))
        ));
    }
}
