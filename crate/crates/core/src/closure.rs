//! Fischer-Ladner closure as an indexed decomposition graph.
//!
//! Nodes are hash-consed open subformulas in which every variable
//! occurrence is identified with the node of its binding fixpoint. The
//! closed formula a node stands for is obtained by substituting binders for
//! free variables ([`Closure::node_formula`]).

use std::collections::{BTreeSet, HashMap};

use crate::analysis;
use crate::formula::{FixKind, Formula, ModalOp};

pub type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    False,
    True,
    Atom(u32),
    NegAtom(u32),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Modal(ModalOp, NodeId),
    /// Fixpoint with its body.
    Fix(FixKind, NodeId),
}

/// Coarse classification used for saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatClass {
    /// Modal formulas and atom literals.
    Modal,
    True,
    Other,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub kind: NodeKind,
    /// The open subformula this node stands for.
    pub open: Formula,
    /// Binder nodes of the free variables.
    pub free: Vec<NodeId>,
}

#[derive(Clone, Debug)]
pub struct Closure {
    nodes: Vec<Node>,
    root: NodeId,
    atoms: Vec<String>,
    level: Vec<u32>,
    omega: Vec<u32>,
    /// μ-binders `X` such that the node lies in the scope of `X`.
    mu_scopes: Vec<Vec<NodeId>>,
    depth: u32,
}

struct Builder {
    nodes: Vec<Node>,
    table: HashMap<NodeKind, NodeId>,
    atoms: Vec<String>,
    atom_ix: HashMap<String, u32>,
    binder_names: HashMap<NodeId, String>,
}

impl Builder {
    fn atom(&mut self, a: &str) -> u32 {
        if let Some(&i) = self.atom_ix.get(a) {
            return i;
        }
        let i = self.atoms.len() as u32;
        self.atoms.push(a.to_string());
        self.atom_ix.insert(a.to_string(), i);
        i
    }

    /// Nodes with equal kinds denote the same closed formula. Occurrences
    /// inside a binder are built before those outside it, so the first
    /// representative is the one with the most free variables; the free
    /// sets are merged anyway.
    fn intern(&mut self, kind: NodeKind, free: BTreeSet<NodeId>, open: &Formula) -> NodeId {
        if let Some(&id) = self.table.get(&kind) {
            let node = &mut self.nodes[id as usize];
            for z in free {
                if !node.free.contains(&z) {
                    node.free.push(z);
                }
            }
            node.free.sort_unstable();
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node { kind: kind.clone(), open: open.clone(), free: free.into_iter().collect() });
        self.table.insert(kind, id);
        id
    }

    /// Returns the node and the binders of its free variables.
    fn build(&mut self, f: &Formula, env: &mut Vec<(String, NodeId)>) -> (NodeId, BTreeSet<NodeId>) {
        match f {
            Formula::Var(x) => {
                let b = env
                    .iter()
                    .rev()
                    .find(|(y, _)| y == x)
                    .map(|&(_, b)| b)
                    .unwrap_or_else(|| panic!("closure of an open formula (free {x})"));
                (b, BTreeSet::from([b]))
            }
            Formula::Fix(k, x, body) => {
                let id = self.nodes.len() as NodeId;
                self.nodes.push(Node { kind: NodeKind::Fix(*k, NodeId::MAX), open: f.clone(), free: vec![] });
                self.binder_names.insert(id, x.clone());
                env.push((x.clone(), id));
                let (b, mut free) = self.build(body, env);
                env.pop();
                free.remove(&id);
                self.nodes[id as usize].kind = NodeKind::Fix(*k, b);
                self.nodes[id as usize].free = free.iter().copied().collect();
                (id, free)
            }
            Formula::False => (self.intern(NodeKind::False, BTreeSet::new(), f), BTreeSet::new()),
            Formula::True => (self.intern(NodeKind::True, BTreeSet::new(), f), BTreeSet::new()),
            Formula::Atom(a) => {
                let i = self.atom(a);
                (self.intern(NodeKind::Atom(i), BTreeSet::new(), f), BTreeSet::new())
            }
            Formula::NegAtom(a) => {
                let i = self.atom(a);
                (self.intern(NodeKind::NegAtom(i), BTreeSet::new(), f), BTreeSet::new())
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let (l, mut fl) = self.build(a, env);
                let (r, fr) = self.build(b, env);
                fl.extend(fr);
                let kind = if matches!(f, Formula::And(..)) {
                    NodeKind::And(l, r)
                } else {
                    NodeKind::Or(l, r)
                };
                (self.intern(kind, fl.clone(), f), fl)
            }
            Formula::Modal(op, a) => {
                let (c, fc) = self.build(a, env);
                (self.intern(NodeKind::Modal(*op, c), fc.clone(), f), fc)
            }
        }
    }
}

impl Closure {
    /// Builds the closure of a closed formula in negation normal form.
    pub fn new(f: &Formula) -> Closure {
        let cleaned;
        let f = if f.is_clean() {
            f
        } else {
            cleaned = f.clean();
            &cleaned
        };
        let mut b = Builder {
            nodes: Vec::new(),
            table: HashMap::new(),
            atoms: Vec::new(),
            atom_ix: HashMap::new(),
            binder_names: HashMap::new(),
        };
        let (root, free) = b.build(f, &mut Vec::new());
        assert!(free.is_empty(), "closure of an open formula");
        let n = b.nodes.len();

        // Active variables; binders are allocated before anything they enclose.
        let mut active: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
        for v in 0..n {
            if let NodeKind::Fix(..) = b.nodes[v].kind {
                let mut act: BTreeSet<NodeId> = b.nodes[v].free.iter().copied().collect();
                for &z in &b.nodes[v].free {
                    act.extend(active[z as usize].iter().copied());
                }
                active[v] = act;
            }
        }
        let mut mu_scopes = vec![Vec::new(); n];
        for v in 0..n {
            let mut act: BTreeSet<NodeId> = b.nodes[v].free.iter().copied().collect();
            for &z in &b.nodes[v].free {
                act.extend(active[z as usize].iter().copied());
            }
            if let NodeKind::Fix(FixKind::Mu, _) = b.nodes[v].kind {
                act.insert(v as NodeId);
            }
            mu_scopes[v] = act
                .into_iter()
                .filter(|&x| matches!(b.nodes[x as usize].kind, NodeKind::Fix(FixKind::Mu, _)))
                .collect();
        }

        let levels = analysis::alternation_levels(f);
        let mut level = vec![0; n];
        let mut omega = vec![0; n];
        for v in 0..n {
            if let NodeKind::Fix(k, _) = b.nodes[v].kind {
                let l = levels[&b.binder_names[&(v as NodeId)]];
                level[v] = l;
                omega[v] = match k {
                    FixKind::Mu => l + (l % 2),
                    FixKind::Nu => l + 1 - (l % 2),
                };
            }
        }
        let depth = level.iter().copied().max().unwrap_or(0);
        Closure { nodes: b.nodes, root, atoms: b.atoms, level, omega, mu_scopes, depth }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, v: NodeId) -> &Node {
        &self.nodes[v as usize]
    }

    pub fn kind(&self, v: NodeId) -> &NodeKind {
        &self.nodes[v as usize].kind
    }

    pub fn atom_name(&self, i: u32) -> &str {
        &self.atoms[i as usize]
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn children(&self, v: NodeId) -> Vec<NodeId> {
        match *self.kind(v) {
            NodeKind::And(a, b) | NodeKind::Or(a, b) => vec![a, b],
            NodeKind::Modal(_, a) | NodeKind::Fix(_, a) => vec![a],
            _ => vec![],
        }
    }

    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        (0..self.len() as NodeId)
            .flat_map(|v| self.children(v).into_iter().map(move |c| (v, c)))
            .collect()
    }

    /// Alternation depth of the root formula.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Alternation level of a fixpoint node; 0 for other nodes.
    pub fn level(&self, v: NodeId) -> u32 {
        self.level[v as usize]
    }

    /// Priority of the tracking automaton: least fixpoints get the
    /// smallest even number at least their level, greatest fixpoints the
    /// smallest odd one; other nodes get 0.
    pub fn omega(&self, v: NodeId) -> u32 {
        self.omega[v as usize]
    }

    pub fn fix_kind(&self, v: NodeId) -> Option<FixKind> {
        match self.kind(v) {
            NodeKind::Fix(k, _) => Some(*k),
            _ => None,
        }
    }

    /// μ-binders in whose scope `v` lies.
    pub fn mu_scopes(&self, v: NodeId) -> &[NodeId] {
        &self.mu_scopes[v as usize]
    }

    pub fn in_mu_scope(&self, v: NodeId, x: NodeId) -> bool {
        self.mu_scopes[v as usize].binary_search(&x).is_ok()
    }

    pub fn mu_binders(&self) -> Vec<NodeId> {
        (0..self.len() as NodeId)
            .filter(|&v| self.fix_kind(v) == Some(FixKind::Mu))
            .collect()
    }

    pub fn class(&self, v: NodeId) -> SatClass {
        match self.kind(v) {
            NodeKind::Modal(..) | NodeKind::Atom(_) | NodeKind::NegAtom(_) => SatClass::Modal,
            NodeKind::True => SatClass::True,
            _ => SatClass::Other,
        }
    }

    pub fn is_modal(&self, v: NodeId) -> bool {
        matches!(self.kind(v), NodeKind::Modal(..))
    }

    /// The closed formula represented by `v`.
    pub fn node_formula(&self, v: NodeId) -> Formula {
        let node = self.node(v);
        let mut f = node.open.clone();
        for &z in &node.free {
            let Formula::Fix(_, x, _) = &self.node(z).open else { unreachable!() };
            f = f.substitute(x, &self.node_formula(z));
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Logic;
    use crate::parse::parse;

    #[test]
    fn least_fixpoint_example() {
        let f = parse("mu X. (p | <> X)", Logic::K, None).unwrap();
        let c = Closure::new(&f);
        assert_eq!(c.len(), 4);
        let mut e = c.edges();
        e.sort();
        let chi = c.root();
        let NodeKind::Fix(_, body) = *c.kind(chi) else { panic!() };
        let NodeKind::Or(p, dia) = *c.kind(body) else { panic!() };
        assert_eq!(*c.kind(dia), NodeKind::Modal(ModalOp::Diamond, chi));
        let mut expected = vec![(chi, body), (body, p), (body, dia), (dia, chi)];
        expected.sort();
        assert_eq!(e, expected);
        assert_eq!(c.depth(), 1);
        assert_eq!(c.omega(chi), 2);
        assert_eq!(c.omega(p), 0);
        assert_eq!(c.node_formula(dia).to_string(), "<>(mu X. (p | <>X))");
        assert_eq!(c.mu_scopes(dia), &[chi]);
        assert!(c.mu_scopes(p).is_empty());
    }

    #[test]
    fn trivial_and_graded_examples() {
        let t = Closure::new(&Formula::True);
        assert_eq!((t.len(), t.edges().len()), (1, 0));
        let g = parse("<1> p & [0] q", Logic::Graded, None).unwrap();
        let c = Closure::new(&g);
        let mut names: Vec<String> = (0..c.len() as NodeId).map(|v| c.node_formula(v).to_string()).collect();
        names.sort();
        assert_eq!(names, vec!["(<1>p & [0]q)", "<1>p", "[0]q", "p", "q"]);
    }

    #[test]
    fn priorities_follow_alternation() {
        let f = parse("nu X. mu Y. (p & <> X) | <> Y", Logic::K, None).unwrap();
        let c = Closure::new(&f);
        let x = c.root();
        let NodeKind::Fix(_, y) = *c.kind(x) else { panic!() };
        assert_eq!((c.level(x), c.level(y)), (2, 1));
        assert_eq!((c.omega(x), c.omega(y)), (3, 2));
    }
}
