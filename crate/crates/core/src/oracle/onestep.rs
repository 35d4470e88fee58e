//! Brute-force one-step satisfiability by enumerating one-step models
//! over `Θ`.

use crate::formula::ModalOp;
use crate::logic::Logic;
use crate::onestep::OneStepPair;

fn holds(u: u64, a: usize) -> bool {
    u & (1 << a) != 0
}

/// Relational: some subset of `Θ` as successor set (nonempty when
/// `serial`).
pub fn brute_relational(pair: &OneStepPair, serial: bool) -> bool {
    let t = &pair.theta;
    assert!(t.len() < 24, "Θ too large for brute force");
    (0u64..1 << t.len()).any(|sub| {
        if serial && sub == 0 {
            return false;
        }
        let succ: Vec<u64> = (0..t.len()).filter(|i| sub & (1 << i) != 0).map(|i| t[i]).collect();
        pair.gamma.iter().all(|&(op, a)| match op {
            ModalOp::Diamond => succ.iter().any(|&u| holds(u, a)),
            ModalOp::Box => succ.iter().all(|&u| holds(u, a)),
            _ => false,
        })
    })
}

/// Graded: multiplicity vectors over `Θ` with entries up to the largest
/// grade plus one.
pub fn brute_graded(pair: &OneStepPair) -> bool {
    let t = &pair.theta;
    let cap = pair
        .gamma
        .iter()
        .map(|&(op, _)| match op {
            ModalOp::AtLeast(g) | ModalOp::AllBut(g) => g,
            _ => 0,
        })
        .max()
        .unwrap_or(0)
        + 1;
    let mut w = vec![0u32; t.len()];
    loop {
        let ok = pair.gamma.iter().all(|&(op, a)| {
            let inside: u32 = t.iter().zip(&w).filter(|(u, _)| holds(**u, a)).map(|(_, &k)| k).sum();
            let outside: u32 = t.iter().zip(&w).filter(|(u, _)| !holds(**u, a)).map(|(_, &k)| k).sum();
            match op {
                ModalOp::AtLeast(g) => inside > g,
                ModalOp::AllBut(g) => outside <= g,
                _ => false,
            }
        });
        if ok {
            return true;
        }
        let mut i = 0;
        while i < w.len() && w[i] == cap {
            w[i] = 0;
            i += 1;
        }
        if i == w.len() {
            return false;
        }
        w[i] += 1;
    }
}

/// Coalition: every agent gets between one and `max_moves` moves, and each
/// move profile an outcome in `Θ`.
pub fn brute_coalition(pair: &OneStepPair, agents: u32, max_moves: u32) -> bool {
    let t = &pair.theta;
    if t.is_empty() {
        return false;
    }
    let n = agents as usize;
    let mut counts = vec![1u32; n];
    loop {
        let profiles: usize = counts.iter().map(|&c| c as usize).product();
        let mut table = vec![0usize; profiles];
        loop {
            if coalition_model_satisfies(pair, &counts, &table) {
                return true;
            }
            let mut i = 0;
            while i < profiles && table[i] + 1 == t.len() {
                table[i] = 0;
                i += 1;
            }
            if i == profiles {
                break;
            }
            table[i] += 1;
        }
        let mut i = 0;
        while i < n && counts[i] == max_moves {
            counts[i] = 1;
            i += 1;
        }
        if i == n {
            return false;
        }
        counts[i] += 1;
    }
}

fn coalition_model_satisfies(pair: &OneStepPair, counts: &[u32], table: &[usize]) -> bool {
    pair.gamma.iter().all(|&(op, a)| {
        let (d, enforce) = match op {
            ModalOp::Enforce(d) => (d, true),
            ModalOp::Allow(d) => (d, false),
            _ => return false,
        };
        let mut groups: std::collections::HashMap<Vec<u32>, (bool, bool)> = Default::default();
        for (idx, &o) in table.iter().enumerate() {
            let mut rest = idx as u32;
            let mut key = Vec::new();
            for (ag, &c) in counts.iter().enumerate() {
                if d.contains(ag as u32 + 1) {
                    key.push(rest % c);
                }
                rest /= c;
            }
            let inside = holds(pair.theta[o], a);
            let e = groups.entry(key).or_insert((true, false));
            e.0 &= inside;
            e.1 |= inside;
        }
        if enforce {
            groups.values().any(|g| g.0)
        } else {
            groups.values().all(|g| g.1)
        }
    })
}

pub fn brute_one_step(logic: Logic, agents: u32, pair: &OneStepPair, max_moves: u32) -> bool {
    match logic {
        Logic::K => brute_relational(pair, false),
        Logic::KD => brute_relational(pair, true),
        Logic::Graded => brute_graded(pair),
        Logic::Amc => brute_coalition(pair, agents, max_moves),
    }
}
