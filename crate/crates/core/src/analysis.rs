//! Fragment classification and structural transformations.

use std::collections::{BTreeSet, HashMap};

use crate::formula::{and, modal, or, FixKind, Formula};

/// Binder table of a clean formula.
struct Binders<'a> {
    kind: HashMap<&'a str, FixKind>,
    fix: HashMap<&'a str, &'a Formula>,
    /// Variables active in the binding fixpoint formula of each variable.
    active: HashMap<&'a str, BTreeSet<String>>,
}

impl<'a> Binders<'a> {
    fn new(f: &'a Formula) -> Self {
        let mut kind = HashMap::new();
        let mut fix = HashMap::new();
        let mut order = Vec::new();
        collect(f, &mut kind, &mut fix, &mut order);
        let mut active: HashMap<&'a str, BTreeSet<String>> = HashMap::new();
        // `order` is pre-order, so enclosing binders come first.
        for x in order {
            let free = fix[x].free_vars();
            let mut act = free.clone();
            for z in &free {
                if let Some(a) = active.get(z.as_str()) {
                    act.extend(a.iter().cloned());
                }
            }
            active.insert(x, act);
        }
        Binders { kind, fix, active }
    }

    /// Variables active in `f`: free ones and those active in the binders
    /// of free ones.
    fn active_in(&self, f: &Formula) -> BTreeSet<String> {
        let free = f.free_vars();
        let mut act = free.clone();
        for z in &free {
            if let Some(a) = self.active.get(z.as_str()) {
                act.extend(a.iter().cloned());
            }
        }
        act
    }
}

fn collect<'a>(
    f: &'a Formula,
    kind: &mut HashMap<&'a str, FixKind>,
    fix: &mut HashMap<&'a str, &'a Formula>,
    order: &mut Vec<&'a str>,
) {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect(a, kind, fix, order);
            collect(b, kind, fix, order);
        }
        Formula::Modal(_, a) => collect(a, kind, fix, order),
        Formula::Fix(k, x, body) => {
            kind.insert(x, *k);
            fix.insert(x, f);
            order.push(x);
            collect(body, kind, fix, order);
        }
        _ => {}
    }
}

fn fixpoints_below<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) => {
            fixpoints_below(a, out);
            fixpoints_below(b, out);
        }
        Formula::Modal(_, a) => fixpoints_below(a, out),
        Formula::Fix(_, _, body) => {
            out.push(f);
            fixpoints_below(body, out);
        }
        _ => {}
    }
}

/// Alternation depth of every fixpoint subformula, keyed by its variable.
///
/// `ad(ηX.ψ)` is 1 plus the number of type changes along the longest chain
/// of nested fixpoints in which each outer variable is active in the inner
/// fixpoint.
pub fn alternation_levels(f: &Formula) -> HashMap<String, u32> {
    let binders = Binders::new(f);
    let mut memo: HashMap<String, u32> = HashMap::new();
    let mut all = Vec::new();
    fixpoints_below(f, &mut all);
    // Innermost first: a fixpoint's level depends only on those below it.
    for fx in all.iter().rev() {
        let Formula::Fix(k, x, body) = fx else { unreachable!() };
        let mut inner = Vec::new();
        fixpoints_below(body, &mut inner);
        let mut level = 1;
        for g in inner {
            let Formula::Fix(k2, y, _) = g else { unreachable!() };
            if binders.active[y.as_str()].contains(x) {
                let l = memo[y] + u32::from(k2 != k);
                level = level.max(l);
            }
        }
        memo.insert(x.clone(), level);
    }
    memo
}

/// 0 for fixpoint-free formulas, 1 for alternation-free ones.
pub fn alternation_depth(f: &Formula) -> u32 {
    alternation_levels(f).into_values().max().unwrap_or(0)
}

/// Every conjunction has at most one conjunct in which a μ-variable is active.
pub fn is_aconjunctive(f: &Formula) -> bool {
    let binders = Binders::new(f);
    let mut ok = true;
    f.visit(&mut |g| {
        if let Formula::And(a, b) = g {
            let has_mu = |h: &Formula| {
                binders
                    .active_in(h)
                    .iter()
                    .any(|x| binders.kind.get(x.as_str()) == Some(&FixKind::Mu))
            };
            if has_mu(a) && has_mu(b) {
                ok = false;
            }
        }
    });
    ok
}

/// Makes every variable occurrence guarded by a modal operator inside its
/// binder, preserving semantics.
///
/// Unguarded occurrences of `X` in `μX.ψ` (resp. `νX.ψ`) are replaced by
/// `⊥` (resp. `⊤`). Occurrences reaching the surface only through an inner
/// fixpoint are first exposed by unfolding that fixpoint once. The result is
/// re-cleaned.
pub fn guard(f: &Formula) -> Formula {
    let g = guard_rec(f);
    if g.is_clean() {
        g
    } else {
        g.clean()
    }
}

fn guard_rec(f: &Formula) -> Formula {
    match f {
        Formula::And(a, b) => and(guard_rec(a), guard_rec(b)),
        Formula::Or(a, b) => or(guard_rec(a), guard_rec(b)),
        Formula::Modal(op, a) => modal(*op, guard_rec(a)),
        Formula::Fix(k, x, body) => {
            let body = guard_rec(body);
            let repl = match k {
                FixKind::Mu => Formula::False,
                FixKind::Nu => Formula::True,
            };
            Formula::Fix(*k, x.clone(), Box::new(strip_unguarded(&body, x, &repl)))
        }
        other => other.clone(),
    }
}

fn occurs_unguarded(f: &Formula, x: &str) -> bool {
    match f {
        Formula::Var(y) => y == x,
        Formula::And(a, b) | Formula::Or(a, b) => occurs_unguarded(a, x) || occurs_unguarded(b, x),
        Formula::Fix(_, y, body) => y != x && occurs_unguarded(body, x),
        _ => false,
    }
}

fn strip_unguarded(f: &Formula, x: &str, repl: &Formula) -> Formula {
    if !occurs_unguarded(f, x) {
        return f.clone();
    }
    match f {
        Formula::Var(_) => repl.clone(),
        Formula::And(a, b) => and(strip_unguarded(a, x, repl), strip_unguarded(b, x, repl)),
        Formula::Or(a, b) => or(strip_unguarded(a, x, repl), strip_unguarded(b, x, repl)),
        Formula::Fix(_, y, body) => {
            // The inner body has its own variable guarded already, so the
            // copies introduced by unfolding sit below a modality.
            let unfolded = body.substitute(y, f);
            strip_unguarded(&unfolded, x, repl)
        }
        other => other.clone(),
    }
}

/// Whether every variable occurrence is below a modality within its binder.
pub fn is_guarded(f: &Formula) -> bool {
    let mut ok = true;
    f.visit(&mut |g| {
        if let Formula::Fix(_, x, body) = g {
            ok &= !occurs_unguarded(body, x);
        }
    });
    ok
}

/// Variables that are bound by `mu`.
pub fn mu_variables(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    f.visit(&mut |g| {
        if let Formula::Fix(FixKind::Mu, x, _) = g {
            out.insert(x.clone());
        }
    });
    out
}

/// Looks up the fixpoint formula binding `x` in a clean formula.
pub fn binder_of<'a>(f: &'a Formula, x: &str) -> Option<&'a Formula> {
    let b = Binders::new(f);
    b.fix.get(x).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Logic;
    use crate::parse::parse;

    fn k(s: &str) -> Formula {
        parse(s, Logic::K, None).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(alternation_depth(&k("p")), 0);
        assert_eq!(alternation_depth(&k("mu X. <> X")), 1);
        assert_eq!(alternation_depth(&k("nu X. mu Y. (p & <> X) | <> Y")), 2);
        // Independent nesting does not alternate.
        assert_eq!(alternation_depth(&k("nu X. (<> X & mu Y. <> Y)")), 1);
        // Dependence through an intermediate variable.
        assert_eq!(alternation_depth(&k("mu X. nu Y. mu Z. (<> X | <> Z) & <> Y")), 3);
    }

    #[test]
    fn aconjunctive_examples() {
        assert!(!is_aconjunctive(&k("mu Y. (<> Y & <> Y)")));
        assert!(is_aconjunctive(&k("nu X. mu Y. (p & <> X) | <> Y")));
        assert!(is_aconjunctive(&k("nu X. (<> X & <> X)")));
        // The right conjunct reaches Y through the ν-variable Z.
        assert!(!is_aconjunctive(&k("mu Y. nu Z. (p | <> Y) & <> Z")));
    }

    #[test]
    fn guard_removes_unguarded_occurrences() {
        let f = guard(&k("mu X. X | <> X"));
        assert_eq!(f, k("mu X. false | <> X"));
        let g = guard(&k("nu X. (p & X)"));
        assert_eq!(g, k("nu X. p & true"));
        let h = guard(&k("mu X. nu Y. (X | <> Y)"));
        assert!(is_guarded(&h));
        assert!(h.is_clean() && h.is_closed());
        assert!(is_guarded(&guard(&k("nu X. mu Y. (X & Y) | <> (X | Y)"))));
    }
}
