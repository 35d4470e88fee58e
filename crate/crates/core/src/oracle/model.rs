//! Explicit finite models, direct evaluation and exhaustive model search.

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::{FixKind, Formula, ModalOp};
use crate::logic::Logic;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("operator {op} cannot be evaluated on a {model} model")]
    KindMismatch { op: String, model: &'static str },
    #[error("free variable {0}")]
    FreeVariable(String),
}

/// Sets of states are bitmasks, so models have at most 64 states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Kripke {
        n: usize,
        val: HashMap<String, u64>,
        succ: Vec<u64>,
    },
    Multigraph {
        n: usize,
        val: HashMap<String, u64>,
        /// `mult[s][t]`: number of edges from `s` to `t`.
        mult: Vec<Vec<u32>>,
    },
    /// Concurrent game structure. `moves[s][a - 1]` is the number of moves
    /// of agent `a` at `s`; `outcome[s]` is indexed by move profiles in
    /// mixed radix, agent 1 least significant.
    Cgs {
        n: usize,
        val: HashMap<String, u64>,
        agents: u32,
        moves: Vec<Vec<u32>>,
        outcome: Vec<Vec<usize>>,
    },
}

impl Model {
    pub fn states(&self) -> usize {
        match self {
            Model::Kripke { n, .. } | Model::Multigraph { n, .. } | Model::Cgs { n, .. } => *n,
        }
    }

    fn val(&self) -> &HashMap<String, u64> {
        match self {
            Model::Kripke { val, .. } | Model::Multigraph { val, .. } | Model::Cgs { val, .. } => val,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Model::Kripke { .. } => "Kripke",
            Model::Multigraph { .. } => "multigraph",
            Model::Cgs { .. } => "concurrent game",
        }
    }

    fn all(&self) -> u64 {
        let n = self.states();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    fn modal(&self, op: ModalOp, set: u64) -> Result<u64, OracleError> {
        let n = self.states();
        let mut out = 0u64;
        match (self, op) {
            (Model::Kripke { succ, .. }, ModalOp::Diamond) => {
                for s in 0..n {
                    if succ[s] & set != 0 {
                        out |= 1 << s;
                    }
                }
            }
            (Model::Kripke { succ, .. }, ModalOp::Box) => {
                for s in 0..n {
                    if succ[s] & !set == 0 {
                        out |= 1 << s;
                    }
                }
            }
            (Model::Multigraph { mult, .. }, ModalOp::AtLeast(g)) => {
                for s in 0..n {
                    let w: u64 = (0..n).filter(|t| set & (1 << t) != 0).map(|t| mult[s][t] as u64).sum();
                    if w > g as u64 {
                        out |= 1 << s;
                    }
                }
            }
            (Model::Multigraph { mult, .. }, ModalOp::AllBut(g)) => {
                for s in 0..n {
                    let w: u64 = (0..n).filter(|t| set & (1 << t) == 0).map(|t| mult[s][t] as u64).sum();
                    if w <= g as u64 {
                        out |= 1 << s;
                    }
                }
            }
            (Model::Cgs { agents, moves, outcome, .. }, ModalOp::Enforce(d) | ModalOp::Allow(d)) => {
                let enforce = matches!(op, ModalOp::Enforce(_));
                for s in 0..n {
                    // Group the profiles by the moves of the coalition,
                    // indexed in mixed radix.
                    let groups_len: u32 =
                        (1..=*agents).filter(|&a| d.contains(a)).map(|a| moves[s][a as usize - 1]).product();
                    let mut groups = vec![(true, false); groups_len as usize];
                    for (idx, &t) in outcome[s].iter().enumerate() {
                        let mut rest = idx as u32;
                        let (mut key, mut radix) = (0u32, 1u32);
                        for a in 1..=*agents {
                            let m = moves[s][a as usize - 1];
                            if d.contains(a) {
                                key += radix * (rest % m);
                                radix *= m;
                            }
                            rest /= m;
                        }
                        let inside = set & (1 << t) != 0;
                        let e = &mut groups[key as usize];
                        e.0 &= inside;
                        e.1 |= inside;
                    }
                    let holds = if enforce {
                        groups.iter().any(|&(all, _)| all)
                    } else {
                        groups.iter().all(|&(_, any)| any)
                    };
                    if holds {
                        out |= 1 << s;
                    }
                }
            }
            _ => return Err(OracleError::KindMismatch { op: op.to_string(), model: self.kind() }),
        }
        Ok(out)
    }
}

/// States satisfying a closed formula, as a bitmask.
pub fn eval(model: &Model, f: &Formula) -> Result<u64, OracleError> {
    eval_env(model, f, &mut Vec::new())
}

fn eval_env(model: &Model, f: &Formula, env: &mut Vec<(String, u64)>) -> Result<u64, OracleError> {
    Ok(match f {
        Formula::False => 0,
        Formula::True => model.all(),
        Formula::Atom(a) => model.val().get(a).copied().unwrap_or(0),
        Formula::NegAtom(a) => model.all() & !model.val().get(a).copied().unwrap_or(0),
        Formula::And(a, b) => eval_env(model, a, env)? & eval_env(model, b, env)?,
        Formula::Or(a, b) => eval_env(model, a, env)? | eval_env(model, b, env)?,
        Formula::Modal(op, a) => {
            let s = eval_env(model, a, env)?;
            model.modal(*op, s)?
        }
        Formula::Var(x) => env
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|&(_, s)| s)
            .ok_or_else(|| OracleError::FreeVariable(x.clone()))?,
        Formula::Fix(k, x, body) => {
            let mut cur = match k {
                FixKind::Mu => 0,
                FixKind::Nu => model.all(),
            };
            loop {
                env.push((x.clone(), cur));
                let next = eval_env(model, body, env);
                env.pop();
                let next = next?;
                if next == cur {
                    break cur;
                }
                cur = next;
            }
        }
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBounds {
    pub max_states: usize,
    /// Moves per agent and state in concurrent game structures.
    pub max_moves: u32,
    /// Sizes whose model count exceeds this are skipped.
    pub budget: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_states: 4, max_moves: 2, budget: 8_000_000 }
    }
}

fn max_grade(f: &Formula) -> u32 {
    f.modal_ops()
        .into_iter()
        .map(|op| match op {
            ModalOp::AtLeast(g) | ModalOp::AllBut(g) => g,
            _ => 0,
        })
        .max()
        .unwrap_or(0)
}

/// Local structure choices of one state, per logic.
fn local_choices(logic: Logic, n: usize, cap: u32, agents: u32, max_moves: u32) -> Vec<Local> {
    match logic {
        Logic::K | Logic::KD => {
            let lo = if logic == Logic::KD { 1 } else { 0 };
            (lo..(1u64 << n)).map(Local::Succ).collect()
        }
        Logic::Graded => {
            let mut out = Vec::new();
            let mut v = vec![0u32; n];
            loop {
                out.push(Local::Mult(v.clone()));
                let mut i = 0;
                while i < n && v[i] == cap {
                    v[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                v[i] += 1;
            }
            out
        }
        Logic::Amc => {
            let mut out = Vec::new();
            let mut counts = vec![1u32; agents as usize];
            loop {
                let profiles: usize = counts.iter().map(|&c| c as usize).product();
                let mut table = vec![0usize; profiles];
                loop {
                    out.push(Local::Game(counts.clone(), table.clone()));
                    let mut i = 0;
                    while i < profiles && table[i] == n - 1 {
                        table[i] = 0;
                        i += 1;
                    }
                    if i == profiles {
                        break;
                    }
                    table[i] += 1;
                }
                let mut i = 0;
                while i < counts.len() && counts[i] == max_moves {
                    counts[i] = 1;
                    i += 1;
                }
                if i == counts.len() {
                    break;
                }
                counts[i] += 1;
            }
            out
        }
    }
}

#[derive(Clone, Debug)]
enum Local {
    Succ(u64),
    Mult(Vec<u32>),
    Game(Vec<u32>, Vec<usize>),
}

/// Number of models with `n` states the search would enumerate.
fn model_count(logic: Logic, n: usize, atoms: usize, cap: u32, agents: u32, max_moves: u32) -> f64 {
    let local = match logic {
        Logic::K => 2f64.powi(n as i32),
        Logic::KD => 2f64.powi(n as i32) - 1.0,
        Logic::Graded => (cap as f64 + 1.0).powi(n as i32),
        Logic::Amc => {
            // Sum over move-count vectors of n^(profiles).
            let mut total = 0.0;
            let mut counts = vec![1u32; agents as usize];
            loop {
                let profiles: u32 = counts.iter().product();
                total += (n as f64).powi(profiles as i32);
                let mut i = 0;
                while i < counts.len() && counts[i] == max_moves {
                    counts[i] = 1;
                    i += 1;
                }
                if i == counts.len() {
                    break;
                }
                counts[i] += 1;
            }
            total
        }
    };
    // Valuations: state 0 is free, the other n - 1 form a multiset.
    let k = 2f64.powi(atoms as i32);
    let multisets = (1..n).fold(1.0, |acc, i| acc * (k + i as f64 - 1.0) / i as f64);
    local.powi(n as i32) * k * multisets
}

/// Largest state count the search covers for `f` within `bounds`.
pub fn searched_states(f: &Formula, logic: Logic, agents: u32, bounds: &SearchBounds) -> usize {
    let atoms = f.atoms().len();
    let cap = max_grade(f) + 1;
    (1..=bounds.max_states)
        .take_while(|&n| model_count(logic, n, atoms, cap, agents.max(1), bounds.max_moves) <= bounds.budget as f64)
        .last()
        .unwrap_or(0)
}

/// Exhaustively searches models (state 0 is the evaluation point) of up to
/// [`searched_states`] states, with edge multiplicities up to the largest
/// grade plus one and at most `bounds.max_moves` moves per agent.
pub fn bounded_model_search(f: &Formula, logic: Logic, agents: u32, bounds: &SearchBounds) -> Option<Model> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let cap = max_grade(f) + 1;
    let agents = agents.max(1);
    let top = searched_states(f, logic, agents, bounds);
    for n in 1..=top {
        if let Some(m) = search_size(f, logic, agents, n, &atoms, cap, bounds.max_moves) {
            return Some(m);
        }
    }
    None
}

fn search_size(f: &Formula, logic: Logic, agents: u32, n: usize, atoms: &[String], cap: u32, max_moves: u32) -> Option<Model> {
    let locals = local_choices(logic, n, cap, agents, max_moves);
    let vals_per_state = 1usize << atoms.len();
    // Valuations: state 0 is free, the others are interchangeable and so
    // only non-decreasing sequences are tried.
    let mut valuations: Vec<Vec<usize>> = Vec::new();
    fn fill(v: &mut Vec<usize>, n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if v.len() == n {
            out.push(v.clone());
            return;
        }
        let lo = if v.len() >= 2 { v[v.len() - 1] } else { 0 };
        for x in lo..k {
            v.push(x);
            fill(v, n, k, out);
            v.pop();
        }
    }
    fill(&mut Vec::new(), n, vals_per_state, &mut valuations);

    for valv in &valuations {
        let mut val: HashMap<String, u64> = HashMap::new();
        for (ai, a) in atoms.iter().enumerate() {
            let mask = valv.iter().enumerate().filter(|(_, &vs)| vs & (1 << ai) != 0).fold(0u64, |m, (s, _)| m | 1 << s);
            val.insert(a.clone(), mask);
        }
        let mut idx = vec![0usize; n];
        let mut model = build(logic, n, agents, val, &idx, &locals);
        loop {
            if eval(&model, f).is_ok_and(|s| s & 1 != 0) {
                return Some(model);
            }
            let mut i = 0;
            while i < n && idx[i] + 1 == locals.len() {
                idx[i] = 0;
                set_local(&mut model, i, &locals[0]);
                i += 1;
            }
            if i == n {
                break;
            }
            idx[i] += 1;
            set_local(&mut model, i, &locals[idx[i]]);
        }
    }
    None
}

fn set_local(model: &mut Model, s: usize, local: &Local) {
    match (model, local) {
        (Model::Kripke { succ, .. }, Local::Succ(m)) => succ[s] = *m,
        (Model::Multigraph { mult, .. }, Local::Mult(m)) => mult[s].clone_from(m),
        (Model::Cgs { moves, outcome, .. }, Local::Game(c, t)) => {
            moves[s].clone_from(c);
            outcome[s].clone_from(t);
        }
        _ => unreachable!("local structure of another model kind"),
    }
}

fn build(logic: Logic, n: usize, agents: u32, val: HashMap<String, u64>, idx: &[usize], locals: &[Local]) -> Model {
    let mut model = match logic {
        Logic::K | Logic::KD => Model::Kripke { n, val, succ: vec![0; n] },
        Logic::Graded => Model::Multigraph { n, val, mult: vec![Vec::new(); n] },
        Logic::Amc => Model::Cgs { n, val, agents, moves: vec![Vec::new(); n], outcome: vec![Vec::new(); n] },
    };
    for (s, &i) in idx.iter().enumerate() {
        set_local(&mut model, s, &locals[i]);
    }
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn eval_examples() {
        let single_p = Model::Kripke { n: 1, val: HashMap::from([("p".to_string(), 1)]), succ: vec![0] };
        assert_eq!(eval(&single_p, &Formula::False).unwrap(), 0);
        let f = parse("mu X. (p | <> X)", Logic::K, None).unwrap();
        assert_eq!(eval(&single_p, &f).unwrap(), 1);
        let mg = Model::Multigraph { n: 2, val: HashMap::from([("p".to_string(), 0b10)]), mult: vec![vec![0, 2], vec![0, 0]] };
        let g = parse("<1> p", Logic::Graded, None).unwrap();
        assert_eq!(eval(&mg, &g).unwrap() & 1, 1);
        assert!(eval(&single_p, &g).is_err());
    }

    #[test]
    fn search_examples() {
        let b = SearchBounds::default();
        assert_eq!(bounded_model_search(&Formula::True, Logic::K, 0, &b).unwrap().states(), 1);
        let c = parse("p & !p", Logic::K, None).unwrap();
        assert!(bounded_model_search(&c, Logic::K, 0, &b).is_none());
        let g = parse("nu X. (p & <> X)", Logic::K, None).unwrap();
        let one = SearchBounds { max_states: 1, ..b };
        let m = bounded_model_search(&g, Logic::K, 0, &one).unwrap();
        assert_eq!(m, Model::Kripke { n: 1, val: HashMap::from([("p".to_string(), 1)]), succ: vec![1] });
        let kd = parse("[] false", Logic::KD, None).unwrap();
        assert!(bounded_model_search(&kd, Logic::KD, 0, &b).is_none());
        assert!(bounded_model_search(&kd, Logic::K, 0, &b).is_some());
    }

    #[test]
    fn coalition_models() {
        let b = SearchBounds::default();
        let f = parse("<{1}> p & <{2}> !p", Logic::Amc, Some(2)).unwrap();
        assert!(bounded_model_search(&f, Logic::Amc, 2, &b).is_none());
        let f = parse("[{1}] p & [{2}] !p", Logic::Amc, Some(2)).unwrap();
        assert!(bounded_model_search(&f, Logic::Amc, 2, &b).is_some());
    }
}
