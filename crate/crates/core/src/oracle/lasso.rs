//! Acceptance of ultimately periodic words `prefix · loop^ω`.

use std::collections::HashMap;

use rand::Rng;

use crate::closure::{Closure, NodeId, NodeKind, SatClass};
use crate::formula::{FixKind, Formula};
use crate::tracking::Letter;

/// Runs a deterministic parity automaton on a lasso. `step` returns the
/// successor and the priority of the transition; the word is accepted iff
/// the largest priority seen infinitely often is even.
pub fn det_lasso_accepts<S, F>(init: S, mut step: F, prefix: &[Letter], lp: &[Letter]) -> bool
where
    S: Clone + Eq + std::hash::Hash,
    F: FnMut(&S, &Letter) -> (S, u32),
{
    assert!(!lp.is_empty(), "empty loop");
    let mut q = init;
    for a in prefix {
        q = step(&q, a).0;
    }
    // Iterate the loop until the state at its start repeats.
    let mut seen: HashMap<S, usize> = HashMap::new();
    let mut maxima: Vec<u32> = Vec::new();
    loop {
        if let Some(&i) = seen.get(&q) {
            return maxima[i..].iter().max().copied().unwrap_or(0) % 2 == 0;
        }
        seen.insert(q.clone(), maxima.len());
        let mut m = 0;
        for a in lp {
            let (next, p) = step(&q, a);
            m = m.max(p);
            q = next;
        }
        maxima.push(m);
    }
}

/// Whether the tracking automaton of `cl` accepts `prefix · loop^ω`, i.e.
/// whether some trace from the root has a least fixpoint as its outermost
/// infinitely often unfolded fixpoint.
///
/// This works on closed formulas directly: an unfolding of `μX.ψ` yields
/// `ψ[μX.ψ/X]`, and the outermost fixpoint of a trace is the one that is a
/// subformula of all others unfolded infinitely often.
pub fn tracking_accepts(cl: &Closure, prefix: &[Letter], lp: &[Letter]) -> bool {
    assert!(!lp.is_empty(), "empty loop");
    let word: Vec<&Letter> = prefix.iter().chain(lp).collect();
    let len = word.len();
    let next_pos = |i: usize| if i + 1 == len { prefix.len() } else { i + 1 };
    // Closed formulas addressed by each letter.
    let targets: Vec<Vec<Formula>> = word
        .iter()
        .map(|a| match a {
            Letter::Choose { node, .. } | Letter::Split { node } | Letter::Unfold { node } => {
                vec![cl.node_formula(*node)]
            }
            Letter::Modal(k) => k.iter().map(|&v| cl.node_formula(v)).collect(),
        })
        .collect();

    let mut states: Vec<Formula> = vec![cl.node_formula(cl.root())];
    let mut index: HashMap<Formula, usize> = HashMap::from([(states[0].clone(), 0)]);
    // Edges (from (state, pos)) to (state, pos) with the unfolded fixpoint.
    let mut edges: HashMap<(usize, usize), Vec<((usize, usize), Option<usize>)>> = HashMap::new();
    let mut stack = vec![(0usize, 0usize)];
    let mut visited = std::collections::HashSet::new();
    visited.insert((0, 0));
    while let Some((s, i)) = stack.pop() {
        let phi = states[s].clone();
        let addressed = targets[i].contains(&phi);
        let mut succ: Vec<(Formula, Option<usize>)> = Vec::new();
        match word[i] {
            Letter::Modal(_) => {
                if addressed {
                    if let Formula::Modal(_, arg) = &phi {
                        succ.push(((**arg).clone(), None));
                    }
                }
            }
            _ if !addressed => succ.push((phi.clone(), None)),
            Letter::Choose { branch, .. } => {
                if let Formula::Or(a, b) = &phi {
                    succ.push((if *branch == 1 { (**a).clone() } else { (**b).clone() }, None));
                }
            }
            Letter::Split { .. } => {
                if let Formula::And(a, b) = &phi {
                    succ.push(((**a).clone(), None));
                    succ.push(((**b).clone(), None));
                }
            }
            Letter::Unfold { .. } => {
                if let Formula::Fix(_, x, body) = &phi {
                    succ.push((body.substitute(x, &phi), Some(s)));
                }
            }
        }
        let j = next_pos(i);
        for (g, unfolded) in succ {
            let t = *index.entry(g.clone()).or_insert_with(|| {
                states.push(g);
                states.len() - 1
            });
            edges.entry((s, i)).or_default().push(((t, j), unfolded));
            if visited.insert((t, j)) {
                stack.push((t, j));
            }
        }
    }

    let unfolded: Vec<usize> = {
        let mut u: Vec<usize> = edges.values().flatten().filter_map(|e| e.1).collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    for &f in &unfolded {
        let Formula::Fix(FixKind::Mu, ..) = &states[f] else { continue };
        let allowed = |e: &Option<usize>| match e {
            None => true,
            Some(g) => contains_subformula(&states[*g], &states[f]),
        };
        // An f-unfolding edge u → v on a cycle of allowed edges.
        for (&u, out) in &edges {
            for (v, e) in out {
                if *e != Some(f) {
                    continue;
                }
                let mut seen = std::collections::HashSet::from([*v]);
                let mut st = vec![*v];
                while let Some(w) = st.pop() {
                    if w == u {
                        return true;
                    }
                    for (z, e2) in edges.get(&w).into_iter().flatten() {
                        if allowed(e2) && seen.insert(*z) {
                            st.push(*z);
                        }
                    }
                }
            }
        }
    }
    false
}

fn contains_subformula(g: &Formula, f: &Formula) -> bool {
    let mut found = false;
    g.visit(&mut |h| {
        if !found && h == f {
            found = true;
        }
    });
    found
}

/// A random lasso whose letters only address formulas the tracking
/// automaton can currently be in, so that words make progress.
///
/// Modal letters pick a random subset of the modal formulas of the current
/// reachable set. The loop always contains a modal letter, as every play of
/// the satisfiability game does; without one a trace could idle on an
/// unaddressed formula forever.
pub fn random_progressive_lasso<R: Rng>(cl: &Closure, rng: &mut R, prefix_len: usize, loop_len: usize) -> (Vec<Letter>, Vec<Letter>) {
    let mut cur: Vec<NodeId> = vec![cl.root()];
    let mut word = Vec::new();
    let total = prefix_len + loop_len.max(1);
    for i in 0..total {
        let force_modal = i + 1 == total && !word[prefix_len..].iter().any(Letter::is_modal);
        let props: Vec<NodeId> = cur
            .iter()
            .copied()
            .filter(|&v| cl.class(v) == SatClass::Other && *cl.kind(v) != NodeKind::False)
            .collect();
        let letter = if !force_modal && !props.is_empty() && (rng.gen_bool(0.8) || cur.iter().all(|&v| !cl.is_modal(v))) {
            let v = props[rng.gen_range(0..props.len())];
            match cl.kind(v) {
                NodeKind::Or(..) => Letter::Choose { node: v, branch: rng.gen_range(1..=2) },
                NodeKind::And(..) => Letter::Split { node: v },
                NodeKind::Fix(..) => Letter::Unfold { node: v },
                _ => unreachable!(),
            }
        } else {
            let modals: Vec<NodeId> = cur.iter().copied().filter(|&v| cl.is_modal(v)).collect();
            let mut k: Vec<NodeId> = modals.into_iter().filter(|_| rng.gen_bool(0.6)).collect();
            k.sort_unstable();
            Letter::Modal(k)
        };
        let mut next: Vec<NodeId> = Vec::new();
        for &v in &cur {
            next.extend(crate::tracking::delta(cl, v, &letter));
        }
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            next.push(cl.root());
        }
        cur = next;
        word.push(letter);
    }
    let lp = word.split_off(prefix_len);
    (word, lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Logic;
    use crate::parse::parse;

    fn modal_node(cl: &Closure) -> NodeId {
        (0..cl.len() as NodeId).find(|&v| cl.is_modal(v)).unwrap()
    }

    #[test]
    fn least_fixpoint_loop_is_accepted() {
        let f = parse("mu X. <> X", Logic::K, None).unwrap();
        let cl = Closure::new(&f);
        let x = cl.root();
        let d = modal_node(&cl);
        let lp = vec![Letter::Unfold { node: x }, Letter::Modal(vec![d])];
        assert!(tracking_accepts(&cl, &[], &lp));
        // Dropping the diamond kills the trace.
        let lp = vec![Letter::Unfold { node: x }, Letter::Modal(vec![])];
        assert!(!tracking_accepts(&cl, &[], &lp));
    }

    #[test]
    fn greatest_fixpoint_loop_is_rejected() {
        let f = parse("nu X. <> X", Logic::K, None).unwrap();
        let cl = Closure::new(&f);
        let d = modal_node(&cl);
        let lp = vec![Letter::Unfold { node: cl.root() }, Letter::Modal(vec![d])];
        assert!(!tracking_accepts(&cl, &[], &lp));
    }

    #[test]
    fn deterministic_runs() {
        // Counter mod 2 with priority 1 on odd steps and 2 on even ones.
        let a = Letter::Modal(vec![]);
        let step = |q: &u8, _: &Letter| ((q + 1) % 2, if *q == 0 { 1 } else { 2 });
        assert!(det_lasso_accepts(0u8, step, &[], std::slice::from_ref(&a)));
        let step = |_: &u8, _: &Letter| (0, 3);
        assert!(!det_lasso_accepts(0u8, step, &[a.clone()], &[a]));
    }
}
