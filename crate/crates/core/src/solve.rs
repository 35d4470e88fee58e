//! Nested fixpoint iteration and the solving schedule.

use std::collections::BTreeMap;

use crate::game::Schedule;

/// Evaluates `η_r X_r. … η_1 X_1. F(X_1, …, X_r)` over subsets of a carrier
/// of `n` elements, with `η_i = μ` for odd `i` and `ν` for even `i`.
///
/// Naive iteration: every time an outer variable changes, the inner ones
/// are restarted from their bottom or top. `xs[i - 1]` is `X_i`.
pub fn nested_fixpoint<F>(r: usize, n: usize, mut f: F) -> Vec<bool>
where
    F: FnMut(&[Vec<bool>]) -> Vec<bool>,
{
    try_nested_fixpoint(r, n, |xs| Some(f(xs))).expect("infallible")
}

/// As [`nested_fixpoint`], but `f` may abort the computation by returning
/// `None`.
pub fn try_nested_fixpoint<F>(r: usize, n: usize, mut f: F) -> Option<Vec<bool>>
where
    F: FnMut(&[Vec<bool>]) -> Option<Vec<bool>>,
{
    let mut xs = vec![vec![false; n]; r];
    level(r, n, &mut xs, &mut f)
}

fn level<F>(i: usize, n: usize, xs: &mut Vec<Vec<bool>>, f: &mut F) -> Option<Vec<bool>>
where
    F: FnMut(&[Vec<bool>]) -> Option<Vec<bool>>,
{
    if i == 0 {
        return f(xs);
    }
    xs[i - 1] = vec![i.is_multiple_of(2); n];
    loop {
        let v = level(i - 1, n, xs, f)?;
        if v == xs[i - 1] {
            return Some(v);
        }
        xs[i - 1] = v;
    }
}

/// Maps the priorities in use onto `1..=r`, preserving order and parity
/// and leaving no gaps of more than one step.
pub fn compress_priorities<I: IntoIterator<Item = u32>>(pris: I) -> (BTreeMap<u32, usize>, usize) {
    let mut sorted: Vec<u32> = pris.into_iter().collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut map = BTreeMap::new();
    let mut cur = 0usize;
    let mut last_parity = None;
    for p in sorted {
        let parity = p % 2;
        if last_parity != Some(parity) {
            cur += 1;
            if cur % 2 != parity as usize % 2 {
                cur += 1;
            }
            last_parity = Some(parity);
        }
        map.insert(p, cur);
    }
    (map, cur)
}

/// Whether to run an intermediate solving step now. `last_solve_at` is the
/// node count at the previous solve, or `None` if there was none.
pub fn schedule_should_solve(
    _expansions_done: usize,
    nodes: usize,
    last_solve_at: Option<usize>,
    mode: Schedule,
) -> bool {
    match mode {
        Schedule::Once => false,
        Schedule::Adaptive => match last_solve_at {
            None => true,
            Some(last) => nodes >= 2 * last.max(1),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_function() {
        let c = vec![true, false, true];
        assert_eq!(nested_fixpoint(2, 3, |_| c.clone()), c);
        assert_eq!(nested_fixpoint(0, 3, |_| c.clone()), c);
    }

    #[test]
    fn least_and_greatest() {
        // X ↦ X: μ gives ∅, ν gives everything.
        assert_eq!(nested_fixpoint(1, 2, |xs| xs[0].clone()), vec![false, false]);
        assert_eq!(nested_fixpoint(2, 2, |xs| xs[1].clone()), vec![true, true]);
    }

    #[test]
    fn compression_keeps_parity_and_order() {
        let (m, r) = compress_priorities([2, 5, 6, 9, 11, 2]);
        assert_eq!(m[&2], 2);
        assert_eq!(m[&5], 3);
        assert_eq!(m[&6], 4);
        assert_eq!(m[&9], 5);
        assert_eq!(m[&11], 5);
        assert_eq!(r, 5);
        let (m, r) = compress_priorities([1, 3]);
        assert_eq!((m[&1], m[&3], r), (1, 1, 1));
        assert_eq!(compress_priorities(std::iter::empty()).1, 0);
    }

    #[test]
    fn schedules() {
        assert!(!schedule_should_solve(5, 5, None, Schedule::Once));
        assert!(schedule_should_solve(1, 1, None, Schedule::Adaptive));
        assert!(schedule_should_solve(8, 8, Some(4), Schedule::Adaptive));
        assert!(!schedule_should_solve(7, 7, Some(4), Schedule::Adaptive));
    }
}
