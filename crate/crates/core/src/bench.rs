//! Benchmark formula families with their expected status.
//!
//! Graded families use the graded μ-calculus; the ATL families use the
//! alternating-time μ-calculus with the temporal operators expanded into
//! fixpoints:
//!
//! * `⟪D⟫X φ = ⟨D⟩φ`
//! * `⟪D⟫G φ = νX.(φ ∧ ⟨D⟩X)`
//! * `⟪D⟫F φ = μX.(φ ∨ ⟨D⟩X)`
//! * `⟪D⟫φ U ψ = μX.(ψ ∨ (φ ∧ ⟨D⟩X))`

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::{and, atom, conj, disj, modal, mu, neg_atom, nu, or, var, AgentSet, Formula, ModalOp};
use crate::logic::Logic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expected {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::Sat => "SAT",
            Expected::Unsat => "UNSAT",
            Expected::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug)]
pub struct BenchCase {
    pub name: String,
    pub params: Vec<u32>,
    pub formula: Formula,
    pub logic: Logic,
    /// Agent count for the coalition logic; 0 otherwise.
    pub agents: u32,
    pub expected: Expected,
}

impl BenchCase {
    fn new(name: &str, params: &[u32], formula: Formula, logic: Logic, expected: Expected) -> Self {
        let agents = if logic == Logic::Amc { formula.max_agent().max(1) } else { 0 };
        BenchCase { name: name.to_string(), params: params.to_vec(), formula: formula.clean(), logic, agents, expected }
    }

    pub fn params_string(&self) -> String {
        self.params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn at_least(n: u32, f: Formula) -> Formula {
    modal(ModalOp::AtLeast(n), f)
}

fn all_but(n: u32, f: Formula) -> Formula {
    modal(ModalOp::AllBut(n), f)
}

/// `⟨n−1⟩¬p ∧ ⟨n−1⟩p ∧ [n]¬q ∧ [n]q`; satisfiable.
pub fn cardinality(n: u32) -> BenchCase {
    assert!(n >= 1);
    let f = conj([
        at_least(n - 1, neg_atom("p")),
        at_least(n - 1, atom("p")),
        all_but(n, neg_atom("q")),
        all_but(n, atom("q")),
    ]);
    BenchCase::new("cardinality", &[n], f, Logic::Graded, Expected::Sat)
}

/// As [`cardinality`] with the last grade lowered to `n−1`; unsatisfiable.
pub fn cardinality_u(n: u32) -> BenchCase {
    assert!(n >= 1);
    let f = conj([
        at_least(n - 1, neg_atom("p")),
        at_least(n - 1, atom("p")),
        all_but(n, neg_atom("q")),
        all_but(n - 1, atom("q")),
    ]);
    BenchCase::new("cardinalityU", &[n], f, Logic::Graded, Expected::Unsat)
}

/// An everywhere-`p` tree of branching `n+1` that must contain a state with
/// `n+2` `p`-successors; unsatisfiable.
pub fn tree_u(n: u32) -> BenchCase {
    assert!(n >= 1);
    let left = nu("X", and(at_least(n, and(atom("p"), var("X"))), all_but(n + 1, neg_atom("p"))));
    let right = mu("Y", or(at_least(n + 1, atom("p")), at_least(n, and(atom("p"), var("Y")))));
    BenchCase::new("treeU", &[n], and(left, right), Logic::Graded, Expected::Unsat)
}

fn p(i: u32) -> Formula {
    atom(&format!("p{i}"))
}

/// Parity acceptance with priorities `p1..pk`: `X_i` is a least fixpoint
/// for odd `i`, outermost `X_k`.
pub fn parity(n: u32, k: u32) -> Formula {
    let body = disj((1..=k).map(|i| and(p(i), at_least(n, var(&format!("X{i}"))))));
    (1..=k).fold(body, |acc, i| {
        let x = format!("X{i}");
        if i % 2 == 1 {
            mu(&x, acc)
        } else {
            nu(&x, acc)
        }
    })
}

/// Büchi acceptance guessing the largest even priority seen infinitely often.
pub fn buechi_nk(n: u32, k: u32) -> Formula {
    let mut parts = vec![at_least(n, var("X"))];
    for i in (2..=k).step_by(2) {
        let y = format!("Y{i}");
        let z = format!("Z{i}");
        let guard = conj((i + 1..=k).map(|j| p(j).negate()));
        let inner = or(and(p(i), at_least(n, var(&y))), at_least(n, var(&z)));
        let body = if i < k { and(guard, inner) } else { inner };
        parts.push(nu(&y, mu(&z, body)));
    }
    mu("X", disj(parts))
}

/// `¬(Parity(n,k) → Buechi(n,k))`; unsatisfiable.
pub fn parity_to_buechi(n: u32, k: u32) -> BenchCase {
    assert!(n >= 1 && k >= 1);
    let f = parity(n, k).implies(&buechi_nk(n, k)).negate();
    BenchCase::new("parityToBuechi", &[n, k], f, Logic::Graded, Expected::Unsat)
}

/// One-step property `ψ(X)` used by the automaton and game families.
pub type Step<'a> = &'a dyn Fn(Formula) -> Formula;

fn fj(j: u32) -> Formula {
    atom(&format!("f{j}"))
}

fn ij(j: u32) -> Formula {
    atom(&format!("i{j}"))
}

/// Infinitely many visits to `f`: `νX.μY.((f ∧ ψ(X)) ∨ (¬f ∧ ψ(Y)))`.
pub fn buechi(f: &Formula, psi: Step, tag: &str) -> Formula {
    let x = format!("B{tag}");
    let y = format!("C{tag}");
    nu(&x, mu(&y, or(and(f.clone(), psi(var(&x))), and(f.negate(), psi(var(&y))))))
}

/// Single Rabin pair: `i` infinitely often and `f` finitely often.
pub fn rabin_pair(i: &Formula, f: &Formula, psi: Step, tag: &str) -> Formula {
    let (x, y, z) = (format!("R{tag}"), format!("S{tag}"), format!("T{tag}"));
    mu(
        &x,
        nu(
            &y,
            mu(
                &z,
                disj([
                    and(f.clone(), psi(var(&x))),
                    conj([f.negate(), i.clone(), psi(var(&y))]),
                    conj([f.negate(), i.negate(), psi(var(&z))]),
                ]),
            ),
        ),
    )
}

fn perm_var(c: u32, perm: &[u32]) -> String {
    let digits: Vec<String> = perm.iter().map(|j| j.to_string()).collect();
    format!("X{c}_{}", digits.join("_"))
}

fn disj_rec(k: u32, c: u32, perm: &mut Vec<u32>, psi: Step) -> Formula {
    if c == 0 {
        let all_f = and(conj((1..=k).map(fj)), psi(var("X")));
        let mut parts = vec![all_f];
        for j in 1..=k {
            let not_f = conj(perm[..j as usize].iter().map(|&q| fj(q).negate()));
            let pj = perm[j as usize - 1];
            let prefix = &perm[..j as usize];
            parts.push(or(
                conj([not_f.clone(), ij(pj), psi(var(&perm_var(2 * (k - j) + 2, prefix)))]),
                conj([not_f, ij(pj).negate(), psi(var(&perm_var(2 * (k - j) + 1, prefix)))]),
            ));
        }
        return disj(parts);
    }
    let mut parts = Vec::new();
    for j in 1..=k {
        if perm.contains(&j) {
            continue;
        }
        perm.push(j);
        let inner = disj_rec(k, c - 2, perm, psi);
        let f = nu(&perm_var(c, perm), mu(&perm_var(c - 1, perm), inner));
        perm.pop();
        parts.push(f);
    }
    disj(parts)
}

/// Rabin acceptance with pairs `(i_j, f_j)`, `j ≤ k`:
/// `μX.Disj(2k, [], ψ)` over partial permutations of `1..=k`.
pub fn rabin(k: u32, psi: Step) -> Formula {
    mu("X", disj_rec(k, 2 * k, &mut Vec::new(), psi))
}

fn any_i(k: u32) -> Formula {
    disj((1..=k).map(ij))
}

fn diamond_n(n: u32) -> impl Fn(Formula) -> Formula {
    move |x| at_least(n, x)
}

/// `¬(Rabin(k, ⟨n⟩) → Buechi(i_1 ∨ … ∨ i_k, ⟨0⟩))`; unsatisfiable.
pub fn rabin_to_buechi(k: u32, n: u32) -> BenchCase {
    assert!(k >= 1 && n >= 1);
    let lhs = rabin(k, &diamond_n(n));
    let rhs = buechi(&any_i(k), &diamond_n(0), "");
    BenchCase::new("rabinToBuechi", &[k, n], lhs.implies(&rhs).negate(), Logic::Graded, Expected::Unsat)
}

/// `¬(Rabin(k, ⟨n⟩) → ⋁_j RabinPair(i_j, f_j, ⟨0⟩))`; unsatisfiable.
pub fn rabin_to_rpair(k: u32, n: u32) -> BenchCase {
    assert!(k >= 1 && n >= 1);
    let lhs = rabin(k, &diamond_n(n));
    let rhs = disj((1..=k).map(|j| rabin_pair(&ij(j), &fj(j), &diamond_n(0), &j.to_string())));
    BenchCase::new("rabinToRPair", &[k, n], lhs.implies(&rhs).negate(), Logic::Graded, Expected::Unsat)
}

/// Every node belongs to exactly one player: `νZ.(exactly one of ve, va) ∧ [0]Z`.
pub fn players(tag: &str) -> Formula {
    let z = format!("Z{tag}");
    let one = or(and(atom("ve"), neg_atom("va")), and(neg_atom("ve"), atom("va")));
    nu(&z, and(one, all_but(0, var(&z))))
}

/// `(ve ∧ ⟨n⟩X) ∨ (va ∧ [n]X)`.
pub fn cpre_exists(n: u32) -> impl Fn(Formula) -> Formula {
    move |x| or(and(atom("ve"), at_least(n, x.clone())), and(atom("va"), all_but(n, x)))
}

pub fn buechi_game(f: &Formula, n: u32) -> Formula {
    and(players("b"), buechi(f, &cpre_exists(n), "g"))
}

pub fn rabin_game_region(k: u32, n: u32) -> Formula {
    and(players("r"), rabin(k, &cpre_exists(n)))
}

/// `¬(RabinG(k,n) → BuechiG(i_1 ∨ … ∨ i_k, n))`; unsatisfiable.
pub fn rabin_game(k: u32, n: u32) -> BenchCase {
    assert!(k >= 1 && n >= 1);
    let f = rabin_game_region(k, n).implies(&buechi_game(&any_i(k), n)).negate();
    BenchCase::new("rabinGame", &[k, n], f, Logic::Graded, Expected::Unsat)
}

/// Builder for the expanded ATL operators with fresh variable names.
pub struct Atl {
    fresh: Cell<u32>,
}

impl Default for Atl {
    fn default() -> Self {
        Self::new()
    }
}

impl Atl {
    pub fn new() -> Self {
        Atl { fresh: Cell::new(0) }
    }

    fn name(&self) -> String {
        let i = self.fresh.get();
        self.fresh.set(i + 1);
        format!("A{i}")
    }

    fn coal(d: &[u32]) -> ModalOp {
        ModalOp::Enforce(AgentSet::from_agents(d.iter().copied()))
    }

    pub fn next(&self, d: &[u32], f: Formula) -> Formula {
        modal(Self::coal(d), f)
    }

    pub fn globally(&self, d: &[u32], f: Formula) -> Formula {
        let x = self.name();
        nu(&x, and(f, modal(Self::coal(d), var(&x))))
    }

    pub fn finally(&self, d: &[u32], f: Formula) -> Formula {
        let x = self.name();
        mu(&x, or(f, modal(Self::coal(d), var(&x))))
    }

    pub fn until(&self, d: &[u32], f: Formula, g: Formula) -> Formula {
        let x = self.name();
        mu(&x, or(g, and(f, modal(Self::coal(d), var(&x)))))
    }
}

fn not(f: Formula) -> Formula {
    f.negate()
}

fn chi(a: &Atl, i: u32) -> Formula {
    if i == 0 {
        atom("p")
    } else {
        not(a.finally(&[2], a.globally(&[1], chi(a, i - 1))))
    }
}

/// `⟪1⟫G p ∧ χ(n)` with `χ(0) = p` and `χ(i+1) = ¬⟪2⟫F⟪1⟫G χ(i)`;
/// satisfiable exactly for even `n`.
pub fn atl_nest(n: u32) -> BenchCase {
    let a = Atl::new();
    let f = and(a.globally(&[1], atom("p")), chi(&a, n));
    let expected = if n.is_multiple_of(2) { Expected::Sat } else { Expected::Unsat };
    BenchCase::new("nest", &[n], f, Logic::Amc, expected)
}

fn nested_psi(a: &Atl, i: u32) -> Formula {
    if i == 0 {
        not(a.until(&[2], atom("q"), atom("r")))
    } else {
        let m = (i - 1) % 2;
        not(a.until(&[m + 1], atom(&format!("p{m}")), nested_psi(a, i - 1)))
    }
}

/// `ψ(0) = ¬⟪2⟫q U r`, `ψ(i+1) = ¬⟪(i mod 2)+1⟫ p_(i mod 2) U ψ(i)`.
pub fn atl_nested_u(n: u32) -> BenchCase {
    let a = Atl::new();
    BenchCase::new("nestedU", &[n], nested_psi(&a, n), Logic::Amc, Expected::Unknown)
}

/// The 42 ATL example formulas, numbered from 1.
pub fn atl_suite() -> Vec<BenchCase> {
    let a = Atl::new();
    let (p, q, r) = (atom("p"), atom("q"), atom("r"));
    let np = neg_atom("p");
    let x = |d: &[u32], f: Formula| a.next(d, f);
    let g = |d: &[u32], f: Formula| a.globally(d, f);
    let fi = |d: &[u32], f: Formula| a.finally(d, f);
    let u = |d: &[u32], f: Formula, h: Formula| a.until(d, f, h);
    let list: Vec<Formula> = vec![
        p.clone(),
        and(p.clone(), q.clone()),
        or(p.clone(), q.clone()),
        p.implies(&q),
        x(&[1], p.clone()),
        fi(&[1], p.clone()),
        g(&[1], p.clone()),
        u(&[1], p.clone(), q.clone()),
        not(u(&[1], p.clone(), q.clone())),
        not(fi(&[1], p.clone())),
        and(u(&[1, 2], p.clone(), q.clone()), x(&[1, 2], r.clone())),
        and(u(&[1, 2], p.clone(), q.clone()), x(&[3, 4], r.clone())),
        and(u(&[1, 2], p.clone(), q.clone()), x(&[2, 3], r.clone())),
        and(u(&[2, 1], p.clone(), q.clone()), x(&[3, 2], r.clone())),
        and(u(&[], p.clone(), q.clone()), x(&[1, 2], r.clone())),
        and(not(x(&[1, 2], p.clone())), g(&[1], p.clone())),
        and(not(x(&[1, 2], p.clone())), g(&[1, 2, 3], p.clone())),
        or(np.clone(), fi(&[1], p.clone())),
        and(p.clone(), np.clone()),
        and(and(p.clone(), q.clone()), g(&[1], not(and(p.clone(), q.clone())))),
        and(g(&[1], p.clone()), not(fi(&[2], g(&[1], p.clone())))),
        and(x(&[1], p.clone()), not(x(&[1], p.clone()))),
        or(u(&[1], p.clone(), q.clone()), not(g(&[1], q.clone()))),
        u(&[1, 2], p.clone(), not(g(&[1], p.clone()))),
        u(&[1], not(g(&[1, 2], p.clone())), q.clone()),
        g(&[], u(&[], p.clone(), q.clone())),
        conj([not(g(&[1], p.clone())), x(&[1, 2], p.clone()), not(x(&[2], np.clone()))]),
        conj([
            x(&[1], p.clone()),
            x(&[2], q.clone()),
            x(&[1, 2], r.clone()),
            not(x(&[1], r.clone())),
            not(x(&[3], q.clone())),
        ]),
        conj([
            not(x(&[1], r.clone())),
            not(x(&[3], q.clone())),
            x(&[1], p.clone()),
            x(&[2], q.clone()),
            x(&[1, 2], r.clone()),
        ]),
        conj([
            not(x(&[1], r.clone())),
            x(&[1], p.clone()),
            x(&[2], q.clone()),
            not(x(&[3], q.clone())),
            x(&[1, 2], r.clone()),
        ]),
        g(&[1, 2, 3], g(&[2, 3, 4], and(p.clone(), q.clone()))),
        and(g(&[1, 2, 3], g(&[2, 3], and(p.clone(), q.clone()))), x(&[4], np.clone())),
        not(not(u(&[1], p.clone(), q.clone()))),
        not(or(g(&[1], p.clone()), g(&[1], np.clone()))),
        not(and(g(&[1], p.clone()), g(&[1], np.clone()))),
        not(u(&[1], p.clone(), not(u(&[2], q.clone(), r.clone())))),
        and(g(&[1], neg_atom("q")), u(&[2], p.clone(), q.clone())),
        and(g(&[1], p.clone()), not(g(&[1, 2], p.clone()))),
        and(not(x(&[1], p.clone())), x(&[2], np.clone())),
        and(x(&[1], p.clone()), x(&[2], np.clone())),
        conj([u(&[1], p.clone(), q.clone()), u(&[2], q.clone(), r.clone()), g(&[2], neg_atom("r"))]),
        conj([u(&[1], p.clone(), q.clone()), u(&[2], q.clone(), r.clone()), g(&[1], neg_atom("r"))]),
    ];
    list.into_iter()
        .enumerate()
        .map(|(i, f)| BenchCase::new("atl", &[i as u32 + 1], f, Logic::Amc, Expected::Unknown))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Cardinality,
    CardinalityU,
    TreeU,
    ParityToBuechi,
    RabinToBuechi,
    RabinToRPair,
    RabinGame,
    Nest,
    NestedU,
    Atl,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Cardinality,
        Family::CardinalityU,
        Family::TreeU,
        Family::ParityToBuechi,
        Family::RabinToBuechi,
        Family::RabinToRPair,
        Family::RabinGame,
        Family::Nest,
        Family::NestedU,
        Family::Atl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Cardinality => "cardinality",
            Family::CardinalityU => "cardinalityU",
            Family::TreeU => "treeU",
            Family::ParityToBuechi => "parityToBuechi",
            Family::RabinToBuechi => "rabinToBuechi",
            Family::RabinToRPair => "rabinToRPair",
            Family::RabinGame => "rabinGame",
            Family::Nest => "nest",
            Family::NestedU => "nestedU",
            Family::Atl => "atl",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::ParityToBuechi => &["n", "k"],
            Family::RabinToBuechi | Family::RabinToRPair | Family::RabinGame => &["k", "n"],
            Family::Atl => &["index"],
            _ => &["n"],
        }
    }

    pub fn generate(self, params: &[u32]) -> Result<BenchCase> {
        let want = self.param_names().len();
        if params.len() != want {
            return Err(Error::Unknown {
                kind: "parameter list",
                value: format!("{} expects {} parameter(s), got {}", self.name(), want, params.len()),
            });
        }
        let bad = |min: u32| params.iter().any(|&v| v < min);
        let low = match self {
            Family::Nest | Family::NestedU => bad(0),
            _ => bad(1),
        };
        if low || (self == Family::Atl && params[0] > 42) {
            return Err(Error::Unknown { kind: "parameter value", value: format!("{params:?} for {}", self.name()) });
        }
        Ok(match self {
            Family::Cardinality => cardinality(params[0]),
            Family::CardinalityU => cardinality_u(params[0]),
            Family::TreeU => tree_u(params[0]),
            Family::ParityToBuechi => parity_to_buechi(params[0], params[1]),
            Family::RabinToBuechi => rabin_to_buechi(params[0], params[1]),
            Family::RabinToRPair => rabin_to_rpair(params[0], params[1]),
            Family::RabinGame => rabin_game(params[0], params[1]),
            Family::Nest => atl_nest(params[0]),
            Family::NestedU => atl_nested_u(params[0]),
            Family::Atl => atl_suite().swap_remove(params[0] as usize - 1),
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unknown { kind: "family", value: s.to_string() })
    }
}

/// Parses a comma-separated parameter list in which each entry is a number
/// or an inclusive range `lo..hi`, and returns the cartesian product.
pub fn parse_params(s: &str) -> Result<Vec<Vec<u32>>> {
    let err = || Error::Unknown { kind: "parameters", value: s.to_string() };
    let mut axes: Vec<Vec<u32>> = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let axis = if let Some((lo, hi)) = part.split_once("..") {
            let lo: u32 = lo.trim().parse().map_err(|_| err())?;
            let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| err())?;
            if lo > hi {
                return Err(err());
            }
            (lo..=hi).collect()
        } else {
            vec![part.parse().map_err(|_| err())?]
        };
        axes.push(axis);
    }
    let mut out = vec![vec![]];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    Ok(out)
}

/// The benchmark corpus at test scale.
pub fn corpus() -> Vec<BenchCase> {
    let mut out = Vec::new();
    for n in [1, 2, 4, 8, 16] {
        out.push(cardinality(n));
    }
    for n in [1, 2, 4, 8] {
        out.push(cardinality_u(n));
    }
    for j in 0..=6 {
        out.push(tree_u(1 << j));
    }
    for n in [1, 2, 4] {
        out.push(parity_to_buechi(n, 1));
    }
    out.push(parity_to_buechi(1, 2));
    out.push(rabin_to_buechi(1, 1));
    out.push(rabin_to_rpair(1, 1));
    out.push(rabin_game(1, 1));
    for n in 0..=5 {
        out.push(atl_nest(n));
    }
    for n in 0..=6 {
        out.push(atl_nested_u(n));
    }
    out.extend(atl_suite());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn cardinality_shapes() {
        assert_eq!(cardinality(1).formula.to_string(), "(((<0>!p & <0>p) & [1]!q) & [1]q)");
        assert_eq!(cardinality_u(1).formula.to_string(), "(((<0>!p & <0>p) & [1]!q) & [0]q)");
        assert!(cardinality(7).formula.is_fixpoint_free());
    }

    #[test]
    fn nest_one_matches_suite_entry() {
        let nest = atl_nest(1).formula;
        let suite = &atl_suite()[20].formula;
        assert!(nest.alpha_eq(suite), "{nest} vs {suite}");
    }

    #[test]
    fn printed_cases_parse_back() {
        for case in corpus() {
            let text = case.formula.to_string();
            let back = parse(&text, case.logic, Some(case.agents.max(1))).unwrap();
            assert!(back.alpha_eq(&case.formula), "{}({})", case.name, case.params_string());
        }
    }

    #[test]
    fn rabin_one_pair_expansion() {
        let psi = |x: Formula| at_least(1, x);
        let text = "mu X. nu X2_1. mu X1_1. (f1 & <1>X) | ((!f1 & i1 & <1>X2_1) | (!f1 & !i1 & <1>X1_1))";
        let hand = parse(text, Logic::Graded, None).unwrap();
        let r = rabin(1, &psi);
        assert!(r.alpha_eq(&hand), "{r}");
    }

    #[test]
    fn parameter_ranges() {
        assert_eq!(parse_params("1..3").unwrap(), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(parse_params("2,1..2").unwrap(), vec![vec![2, 1], vec![2, 2]]);
        assert!(parse_params("3..1").is_err());
        assert_eq!("treeu".parse::<Family>().unwrap(), Family::TreeU);
        assert_eq!(atl_suite().len(), 42);
    }
}
