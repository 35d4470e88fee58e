//! On-the-fly co-determinization of the tracking automaton.
//!
//! The deterministic parity automaton `B_χ` accepts exactly the words on
//! which no trace of `A_χ` is bad. Three constructions are available:
//!
//! * [`Mode::Mh`]: Miyano-Hayashi breakpoints, for alternation depth ≤ 1.
//! * [`Mode::Perm`]: a permutation of single-trace trackers, one per pair
//!   `(node, X)` with the node in the scope of the least fixpoint `X`. Valid
//!   when every conjunction splits each such scope at most one way.
//! * [`Mode::Safra`]: Safra trees with Piterman's naming over the Büchi
//!   automaton that guesses the pair `(node, X)` of a bad trace. Used for
//!   everything else.
//!
//! Priorities are attached to transitions, with even meaning "no bad
//! trace".

use std::collections::BTreeSet;
use std::fmt;

use crate::closure::{Closure, NodeId, NodeKind};
use crate::error::{Error, Result};
use crate::tracking::{self, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Mh,
    Perm,
    Safra,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Mh => "mh",
            Mode::Perm => "perm",
            Mode::Safra => "safra",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SafraNode {
    pub name: u32,
    /// Name of the parent; 0 for the root.
    pub parent: u32,
    /// States of the Büchi automaton, sorted.
    pub label: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MacroState {
    /// `s` is the set of live trace endpoints, `b ⊆ s` the pending
    /// obligations.
    Mh { s: Vec<NodeId>, b: Vec<NodeId> },
    /// Trackers `(node, X)` by decreasing seniority.
    Perm { s: Vec<NodeId>, entries: Vec<(NodeId, NodeId)> },
    /// Nodes sorted by name; the root has name 1.
    Safra { s: Vec<NodeId>, tree: Vec<SafraNode> },
}

impl MacroState {
    /// The closure formulas occurring in the macro-state.
    pub fn label(&self) -> &[NodeId] {
        match self {
            MacroState::Mh { s, .. } | MacroState::Perm { s, .. } | MacroState::Safra { s, .. } => s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Core,
    State,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepResult {
    pub state: MacroState,
    pub priority: u32,
}

#[derive(Clone, Debug)]
pub struct Determinizer {
    cl: Closure,
    mode: Mode,
    /// Per node: index of its first pair; pairs of node `v` are
    /// `pair_base[v]..pair_base[v] + mu_scopes(v).len()`.
    pair_base: Vec<u32>,
    pairs: Vec<(NodeId, NodeId)>,
}

/// Every conjunction sends each least-fixpoint scope it lies in to at most
/// one conjunct, so single traces within a scope are deterministic.
pub fn scopes_split_deterministically(cl: &Closure) -> bool {
    (0..cl.len() as NodeId).all(|v| match *cl.kind(v) {
        NodeKind::And(a, b) => cl
            .mu_scopes(v)
            .iter()
            .all(|&x| !(cl.in_mu_scope(a, x) && cl.in_mu_scope(b, x))),
        _ => true,
    })
}

impl Determinizer {
    pub fn new(cl: Closure, mode: Mode) -> Result<Self> {
        match mode {
            Mode::Mh if cl.depth() > 1 => {
                return Err(Error::UnsupportedFragment(format!(
                    "Miyano-Hayashi construction (alternation depth {})",
                    cl.depth()
                )))
            }
            Mode::Perm if !scopes_split_deterministically(&cl) => {
                return Err(Error::UnsupportedFragment("permutation construction (not aconjunctive)".into()))
            }
            _ => {}
        }
        let mut pair_base = Vec::with_capacity(cl.len());
        let mut pairs = Vec::new();
        for v in 0..cl.len() as NodeId {
            pair_base.push(pairs.len() as u32);
            for &x in cl.mu_scopes(v) {
                pairs.push((v, x));
            }
        }
        Ok(Determinizer { cl, mode, pair_base, pairs })
    }

    /// Picks the cheapest construction that is correct for the formula.
    pub fn auto_mode(cl: &Closure) -> Mode {
        if cl.depth() <= 1 {
            Mode::Mh
        } else if scopes_split_deterministically(cl) {
            Mode::Perm
        } else {
            Mode::Safra
        }
    }

    pub fn closure(&self) -> &Closure {
        &self.cl
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Largest priority that can be emitted.
    pub fn max_priority(&self) -> u32 {
        match self.mode {
            Mode::Mh => 2,
            Mode::Perm => 2 * self.pairs.len() as u32 + 2,
            Mode::Safra => 2 * self.safra_states() + 2,
        }
    }

    fn is_mu_node(&self, v: NodeId) -> bool {
        !self.cl.mu_scopes(v).is_empty()
    }

    fn pairs_of(&self, v: NodeId) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.cl.mu_scopes(v).iter().map(move |&x| (v, x))
    }

    fn safra_states(&self) -> u32 {
        (self.cl.len() + self.pairs.len()) as u32
    }

    pub fn initial(&self) -> MacroState {
        let s = vec![self.cl.root()];
        match self.mode {
            Mode::Mh => {
                let b = s.iter().copied().filter(|&v| self.is_mu_node(v)).collect();
                MacroState::Mh { s, b }
            }
            Mode::Perm => {
                let entries = self.pairs_of(self.cl.root()).collect();
                MacroState::Perm { s, entries }
            }
            Mode::Safra => {
                let label = self.nba_closure(&s);
                let tree = if label.is_empty() {
                    vec![]
                } else {
                    vec![SafraNode { name: 1, parent: 0, label }]
                };
                MacroState::Safra { s, tree }
            }
        }
    }

    pub fn classify(&self, v: &MacroState) -> Class {
        if tracking::is_saturated(&self.cl, v.label()) {
            Class::State
        } else {
            Class::Core
        }
    }

    pub fn successor(&self, v: &MacroState, a: &Letter) -> StepResult {
        match v {
            MacroState::Mh { s, b } => self.step_mh(s, b, a),
            MacroState::Perm { s, entries } => self.step_perm(s, entries, a),
            MacroState::Safra { s, tree } => self.step_safra(s, tree, a),
        }
    }

    fn step_mh(&self, s: &[NodeId], b: &[NodeId], a: &Letter) -> StepResult {
        let s2 = tracking::step_set(&self.cl, s, a);
        let mut b2: Vec<NodeId> = tracking::step_set(&self.cl, b, a);
        b2.retain(|&v| self.is_mu_node(v));
        let priority = if b2.is_empty() {
            b2 = s2.iter().copied().filter(|&v| self.is_mu_node(v)).collect();
            2
        } else {
            1
        };
        StepResult { state: MacroState::Mh { s: s2, b: b2 }, priority }
    }

    fn step_perm(&self, s: &[NodeId], entries: &[(NodeId, NodeId)], a: &Letter) -> StepResult {
        let m = self.pairs.len() as u32;
        let s2 = tracking::step_set(&self.cl, s, a);
        let mut best = 2 * m + 1;
        let mut next: Vec<(NodeId, NodeId)> = Vec::with_capacity(entries.len());
        for (i, &(v, x)) in entries.iter().enumerate() {
            let rank = i as u32 + 1;
            let succ: Vec<NodeId> = tracking::delta(&self.cl, v, a)
                .into_iter()
                .filter(|&w| self.cl.in_mu_scope(w, x))
                .collect();
            debug_assert!(succ.len() <= 1);
            match succ.first() {
                None => best = best.min(2 * rank - 1),
                Some(&w) => {
                    if next.contains(&(w, x)) {
                        best = best.min(2 * rank - 1);
                    } else {
                        if v == x && *a == (Letter::Unfold { node: x }) {
                            best = best.min(2 * rank);
                        }
                        next.push((w, x));
                    }
                }
            }
        }
        for &w in &s2 {
            for p in self.pairs_of(w) {
                if !next.contains(&p) {
                    next.push(p);
                }
            }
        }
        StepResult {
            state: MacroState::Perm { s: s2, entries: next },
            priority: 2 * m + 3 - best,
        }
    }

    /// Büchi state id of a plain closure node or of a pair.
    fn plain(&self, v: NodeId) -> u32 {
        v
    }

    fn pair_id(&self, v: NodeId, x: NodeId) -> u32 {
        let base = self.pair_base[v as usize];
        let off = self.cl.mu_scopes(v).iter().position(|&y| y == x).expect("pair out of scope");
        self.cl.len() as u32 + base + off as u32
    }

    fn decode(&self, q: u32) -> (NodeId, Option<NodeId>) {
        let n = self.cl.len() as u32;
        if q < n {
            (q, None)
        } else {
            let (v, x) = self.pairs[(q - n) as usize];
            (v, Some(x))
        }
    }

    /// All Büchi states reachable for the given trace endpoints: the plain
    /// nodes plus every pair they may commit to.
    fn nba_closure(&self, s: &[NodeId]) -> Vec<u32> {
        let mut out: Vec<u32> = s.iter().map(|&v| self.plain(v)).collect();
        for &v in s {
            for (w, x) in self.pairs_of(v) {
                out.push(self.pair_id(w, x));
            }
        }
        out.sort_unstable();
        out
    }

    /// Successors of a set of Büchi states, and those reached through
    /// accepting transitions.
    fn nba_step(&self, label: &[u32], a: &Letter) -> (Vec<u32>, Vec<u32>) {
        let mut all = BTreeSet::new();
        let mut acc = BTreeSet::new();
        for &q in label {
            let (v, x) = self.decode(q);
            for w in tracking::delta(&self.cl, v, a) {
                match x {
                    None => {
                        all.insert(self.plain(w));
                        for (w2, y) in self.pairs_of(w) {
                            all.insert(self.pair_id(w2, y));
                        }
                    }
                    Some(x) => {
                        if self.cl.in_mu_scope(w, x) {
                            let id = self.pair_id(w, x);
                            all.insert(id);
                            if v == x && *a == (Letter::Unfold { node: x }) {
                                acc.insert(id);
                            }
                        }
                    }
                }
            }
        }
        (all.into_iter().collect(), acc.into_iter().collect())
    }

    fn step_safra(&self, s: &[NodeId], tree: &[SafraNode], a: &Letter) -> StepResult {
        let k = self.safra_states();
        let s2 = tracking::step_set(&self.cl, s, a);
        let mut t = SafraTree::from_nodes(tree);
        let old_count = t.nodes.len();
        // Update labels and spawn children from accepting successors.
        let mut fresh = t.nodes.iter().map(|n| n.name).max().unwrap_or(0);
        let mut spawned = Vec::new();
        for i in 0..old_count {
            let (all, acc) = self.nba_step(&t.nodes[i].label, a);
            t.nodes[i].label = all;
            if !acc.is_empty() {
                fresh += 1;
                spawned.push(TNode { name: fresh, parent: Some(i), label: acc, children: vec![], alive: true });
            }
        }
        for node in spawned {
            let ix = t.nodes.len();
            let p = node.parent.unwrap();
            t.nodes.push(node);
            t.nodes[p].children.push(ix);
        }
        // Horizontal merge: older branches keep shared states.
        if !t.nodes.is_empty() {
            let root_label = t.nodes[0].label.clone();
            t.horizontal(0, &root_label);
        }
        // Remove emptied nodes.
        let mut removed = u32::MAX;
        for i in 0..t.nodes.len() {
            if t.nodes[i].alive && t.nodes[i].label.is_empty() {
                if i < old_count {
                    removed = removed.min(t.nodes[i].name);
                }
                t.kill_subtree(i);
            }
        }
        // Vertical merge.
        let mut marked = u32::MAX;
        for i in t.preorder() {
            if !t.nodes[i].alive {
                continue;
            }
            let kids: Vec<usize> = t.nodes[i].children.iter().copied().filter(|&c| t.nodes[c].alive).collect();
            if kids.is_empty() {
                continue;
            }
            let mut union: Vec<u32> = kids.iter().flat_map(|&c| t.nodes[c].label.iter().copied()).collect();
            union.sort_unstable();
            union.dedup();
            if union == t.nodes[i].label {
                marked = marked.min(t.nodes[i].name);
                for c in kids {
                    if c < old_count {
                        removed = removed.min(t.nodes[c].name);
                    }
                    t.kill_subtree(c);
                }
            }
        }
        let p = if marked < removed {
            2 * marked
        } else if removed != u32::MAX {
            2 * removed - 1
        } else {
            2 * k + 1
        };
        StepResult {
            state: MacroState::Safra { s: s2, tree: t.into_nodes() },
            priority: 2 * k + 3 - p,
        }
    }
}

struct TNode {
    name: u32,
    parent: Option<usize>,
    label: Vec<u32>,
    /// Oldest first.
    children: Vec<usize>,
    alive: bool,
}

struct SafraTree {
    nodes: Vec<TNode>,
}

fn subtract(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

impl SafraTree {
    fn from_nodes(tree: &[SafraNode]) -> Self {
        let mut nodes: Vec<TNode> = Vec::with_capacity(tree.len());
        for n in tree {
            let parent = if n.parent == 0 {
                None
            } else {
                Some(tree.iter().position(|m| m.name == n.parent).expect("dangling parent"))
            };
            nodes.push(TNode { name: n.name, parent, label: n.label.clone(), children: vec![], alive: true });
        }
        // Names grow with age, and `tree` is sorted by name.
        for i in 0..nodes.len() {
            if let Some(p) = nodes[i].parent {
                nodes[p].children.push(i);
            }
        }
        SafraTree { nodes }
    }

    fn horizontal(&mut self, i: usize, avail: &[u32]) {
        let label = intersect(&self.nodes[i].label, avail);
        self.nodes[i].label = label.clone();
        let mut remaining = label;
        for c in self.nodes[i].children.clone() {
            self.horizontal(c, &remaining);
            remaining = subtract(&remaining, &self.nodes[c].label);
        }
    }

    fn kill_subtree(&mut self, i: usize) {
        self.nodes[i].alive = false;
        for c in self.nodes[i].children.clone() {
            self.kill_subtree(c);
        }
    }

    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            out.push(i);
            for &c in self.nodes[i].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Compacts names to `1..` preserving their order.
    fn into_nodes(self) -> Vec<SafraNode> {
        let mut live: Vec<usize> = (0..self.nodes.len()).filter(|&i| self.nodes[i].alive).collect();
        live.sort_by_key(|&i| self.nodes[i].name);
        let mut rename = vec![0u32; self.nodes.len()];
        for (k, &i) in live.iter().enumerate() {
            rename[i] = k as u32 + 1;
        }
        live.iter()
            .map(|&i| SafraNode {
                name: rename[i],
                parent: self.nodes[i].parent.map_or(0, |p| rename[p]),
                label: self.nodes[i].label.clone(),
            })
            .collect()
    }
}
