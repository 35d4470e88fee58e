use std::collections::{HashMap, HashSet};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coalmu::analysis::{alternation_depth, guard, is_guarded};
use coalmu::determinize::Mode;
use coalmu::onestep::{one_step_sat, tableau_applications, OneStepPair};
use coalmu::oracle::model::Model;
use coalmu::oracle::onestep::brute_one_step;
use coalmu::oracle::random::FormulaGen;
use coalmu::oracle::{bounded_model_search, eval, SearchBounds};
use coalmu::{parse, run, AgentSet, Closure, Engine, Formula, Logic, ModalOp, RunConfig, Schedule, Verdict};

const LOGICS: [Logic; 4] = [Logic::K, Logic::KD, Logic::Graded, Logic::Amc];

fn formula(seed: u64, logic: Logic, depth: u32) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FormulaGen { depth, ..FormulaGen::new(logic) }.generate(&mut rng)
}

fn random_model(rng: &mut ChaCha8Rng, logic: Logic, agents: u32) -> Model {
    let n = rng.gen_range(1..=4);
    let val: HashMap<String, u64> = (0..2).map(|i| (format!("p{i}"), rng.gen_range(0..1u64 << n))).collect();
    match logic {
        Logic::K | Logic::KD => Model::Kripke {
            n,
            val,
            succ: (0..n).map(|_| rng.gen_range(u64::from(logic == Logic::KD)..1u64 << n)).collect(),
        },
        Logic::Graded => {
            Model::Multigraph { n, val, mult: (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect() }
        }
        Logic::Amc => {
            let moves: Vec<Vec<u32>> = (0..n).map(|_| (0..agents).map(|_| rng.gen_range(1..=2)).collect()).collect();
            let outcome = moves
                .iter()
                .map(|m| (0..m.iter().product::<u32>()).map(|_| rng.gen_range(0..n)).collect())
                .collect();
            Model::Cgs { n, val, agents, moves, outcome }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn negation_is_an_involution(seed in any::<u64>(), li in 0usize..4) {
        let f = formula(seed, LOGICS[li], 5);
        prop_assert_eq!(f.negate().negate(), f.clone());
        prop_assert_eq!(alternation_depth(&f.negate()), alternation_depth(&f));
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>(), li in 0usize..4) {
        let logic = LOGICS[li];
        let f = formula(seed, logic, 5);
        let agents = (logic == Logic::Amc).then_some(2);
        let g = parse(&f.to_string(), logic, agents).unwrap();
        prop_assert!(g.alpha_eq(&f), "{} vs {}", f, g);
    }

    #[test]
    fn semantics_of_negation_and_guarding(seed in any::<u64>(), li in 0usize..4) {
        let logic = LOGICS[li];
        let f = formula(seed, logic, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let m = random_model(&mut rng, logic, 2);
        let all = (1u64 << m.states()) - 1;
        let s = eval(&m, &f).unwrap();
        prop_assert_eq!(eval(&m, &f.negate()).unwrap(), all & !s);
        let g = guard(&f);
        prop_assert!(is_guarded(&g));
        prop_assert_eq!(eval(&m, &g).unwrap(), s);
    }

    #[test]
    fn closure_nodes_are_distinct_formulas(seed in any::<u64>(), li in 0usize..4) {
        let f = guard(&formula(seed, LOGICS[li], 5));
        let cl = Closure::new(&f);
        prop_assert_eq!(cl.node_formula(cl.root()), f.clean());
        let forms: HashSet<Formula> = (0..cl.len() as u32).map(|v| cl.node_formula(v)).collect();
        prop_assert_eq!(forms.len(), cl.len());
    }
}

fn random_pair(rng: &mut ChaCha8Rng, logic: Logic, agents: u32) -> OneStepPair {
    let vars = rng.gen_range(1..=4);
    let gamma = (0..rng.gen_range(0..=4))
        .map(|_| {
            let a = rng.gen_range(0..vars);
            let ex = rng.gen_bool(0.5);
            let op = match logic {
                Logic::K | Logic::KD => {
                    if ex {
                        ModalOp::Diamond
                    } else {
                        ModalOp::Box
                    }
                }
                Logic::Graded => {
                    let g = rng.gen_range(0..=2);
                    if ex {
                        ModalOp::AtLeast(g)
                    } else {
                        ModalOp::AllBut(g)
                    }
                }
                Logic::Amc => {
                    let d = AgentSet::from_agents((1..=agents).filter(|_| rng.gen_bool(0.5)));
                    if ex {
                        ModalOp::Enforce(d)
                    } else {
                        ModalOp::Allow(d)
                    }
                }
            };
            (op, a)
        })
        .collect();
    let mut theta: Vec<u64> = (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(0..1u64 << vars)).collect();
    theta.sort_unstable();
    theta.dedup();
    OneStepPair::new(gamma, theta)
}

#[test]
fn one_step_solvers_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for logic in LOGICS {
        for _ in 0..400 {
            let agents = rng.gen_range(1..=2);
            let pair = random_pair(&mut rng, logic, agents);
            // Three moves per agent suffice for at most four literals here.
            let moves = if agents == 1 { 4 } else { 3 };
            assert_eq!(
                one_step_sat(logic, agents, &pair),
                brute_one_step(logic, agents, &pair, moves),
                "{logic} agents={agents} {pair:?}"
            );
        }
    }
}

#[test]
fn matching_pennies_needs_more_than_one_move_each() {
    // Neither agent alone can avoid a or b, but together they can force a.
    let one = AgentSet::from_agents([1]);
    let two = AgentSet::from_agents([2]);
    let both = AgentSet::from_agents([1, 2]);
    let pair = OneStepPair::new(
        vec![(ModalOp::Allow(one), 0), (ModalOp::Allow(one), 1), (ModalOp::Allow(two), 0), (ModalOp::Allow(two), 1), (ModalOp::Enforce(both), 0)],
        vec![0b01, 0b10],
    );
    assert_eq!(one_step_sat(Logic::Amc, 2, &pair), brute_one_step(Logic::Amc, 2, &pair, 2));
    assert!(one_step_sat(Logic::Amc, 2, &pair));
}

#[test]
fn coalition_tableau_rules() {
    let f = parse("<{1}> p & [{1}] q", Logic::Amc, Some(2)).unwrap();
    let cl = Closure::new(&f);
    let label: Vec<u32> = (0..cl.len() as u32).filter(|&v| cl.is_modal(v)).collect();
    let apps = tableau_applications(&cl, &label, Logic::Amc, 2).unwrap();
    assert!(!apps.is_empty());
    assert!(tableau_applications(&cl, &label, Logic::Graded, 2).is_err());
}

fn verdict(f: &Formula, logic: Logic, agents: u32, tweak: impl FnOnce(&mut RunConfig)) -> Verdict {
    let mut cfg = RunConfig::new(logic);
    cfg.agents = agents;
    tweak(&mut cfg);
    run(f, &cfg).unwrap().verdict
}

#[test]
fn contradictions_are_unsatisfiable() {
    for logic in LOGICS {
        for seed in 0..60 {
            let f = formula(seed, logic, 4);
            let both = Formula::And(Box::new(f.clone()), Box::new(f.negate()));
            let agents = if logic == Logic::Amc { 2 } else { 0 };
            assert_eq!(verdict(&both, logic, agents, |_| {}), Verdict::Unsat, "{logic}: {f}");
            let either = Formula::Or(Box::new(f.clone()), Box::new(f.negate()));
            assert_eq!(verdict(&either, logic, agents, |_| {}), Verdict::Sat, "{logic}: {f}");
        }
    }
}

#[test]
fn configurations_agree() {
    for logic in LOGICS {
        for seed in 100..160 {
            let f = formula(seed, logic, 5);
            let agents = if logic == Logic::Amc { 2 } else { 0 };
            let base = verdict(&f, logic, agents, |_| {});
            assert_eq!(verdict(&f, logic, agents, |c| c.schedule = Schedule::Once), base, "{logic} once: {f}");
            assert_eq!(verdict(&f, logic, agents, |c| c.mode = Some(Mode::Safra)), base, "{logic} safra: {f}");
            if logic.has_tableau() {
                let other = if Engine::default_for(logic) == Engine::Tableau { Engine::OneStep } else { Engine::Tableau };
                assert_eq!(verdict(&f, logic, agents, |c| c.engine = Some(other)), base, "{logic} {other}: {f}");
            }
        }
    }
}

#[test]
fn unsatisfiable_formulas_have_no_small_models() {
    let bounds = SearchBounds { max_states: 3, ..SearchBounds::default() };
    for logic in LOGICS {
        let agents = if logic == Logic::Amc { 2 } else { 0 };
        for seed in 200..260 {
            let f = formula(seed, logic, 4);
            if verdict(&f, logic, agents, |_| {}) == Verdict::Unsat {
                assert!(bounded_model_search(&f, logic, agents, &bounds).is_none(), "{logic}: {f}");
            }
        }
    }
}

#[test]
fn known_verdicts() {
    let cases = [
        ("mu X. (p | <> X)", Logic::K, Verdict::Sat),
        ("nu X. (p & <> X) & mu Y. (!p | [] Y)", Logic::K, Verdict::Unsat),
        ("mu X. [] X", Logic::K, Verdict::Sat),
        ("mu X. [] X", Logic::KD, Verdict::Unsat),
        ("nu X. <> X", Logic::KD, Verdict::Sat),
        ("mu X. <> X", Logic::K, Verdict::Unsat),
        ("nu X. mu Y. (<> X & p | <> Y & !p)", Logic::K, Verdict::Sat),
        ("nu X. mu Y. ((p & <> X) | <> Y) & mu Z. nu W. ((p & [] Z) | (!p & [] W))", Logic::KD, Verdict::Unsat),
        ("<1> p & [1] !p", Logic::Graded, Verdict::Unsat),
        ("<1> p & [2] !p", Logic::Graded, Verdict::Sat),
    ];
    for (text, logic, want) in cases {
        let f = parse(text, logic, None).unwrap();
        assert_eq!(verdict(&f, logic, 0, |_| {}), want, "{text}");
    }
}

#[test]
fn graded_tableau_is_rejected() {
    let f = parse("<1> p", Logic::Graded, None).unwrap();
    let mut cfg = RunConfig::new(Logic::Graded);
    cfg.engine = Some(Engine::Tableau);
    assert!(run(&f, &cfg).is_err());
}
