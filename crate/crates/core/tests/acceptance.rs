//! Acceptance criteria 1–13. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coalmu::analysis::guard;
use coalmu::bench::{self, BenchCase, Expected};
use coalmu::determinize::{Determinizer, MacroState};
use coalmu::oracle::lasso::{det_lasso_accepts, random_progressive_lasso, tracking_accepts};
use coalmu::oracle::random::FormulaGen;
use coalmu::oracle::zielonka::{zielonka, EdgeGame};
use coalmu::oracle::{bounded_model_search, SearchBounds};
use coalmu::onestep::{one_step_sat_graded, OneStepPair};
use coalmu::solve::{compress_priorities, nested_fixpoint};
use coalmu::{run, Closure, Engine, Formula, Logic, ModalOp, RunConfig, Schedule, Verdict};

const LIMIT: Duration = Duration::from_secs(60);

fn config(case: &BenchCase) -> RunConfig {
    let mut cfg = RunConfig::new(case.logic);
    cfg.agents = case.agents;
    cfg.timeout = LIMIT;
    cfg
}

/// Runs a case and checks the verdict against `want` and the time limit.
fn check_case(case: &BenchCase, want: Verdict, log: &mut Vec<String>) -> bool {
    let start = Instant::now();
    let r = run(&case.formula, &config(case));
    let t = start.elapsed();
    match r {
        Ok(rep) => {
            log.push(format!("{}({})={} in {:.1?}", case.name, case.params_string(), rep.verdict, t));
            rep.verdict == want && t <= LIMIT
        }
        Err(e) => {
            log.push(format!("{}({}) failed: {e}", case.name, case.params_string()));
            false
        }
    }
}

fn check_all(cases: Vec<BenchCase>, want: Verdict) -> (bool, String) {
    let mut log = Vec::new();
    let ok = cases.iter().fold(true, |ok, c| check_case(c, want, &mut log) && ok);
    (ok, log.join("; "))
}

fn c1() -> (bool, String) {
    check_all([1, 2, 4, 8, 16].map(bench::cardinality).to_vec(), Verdict::Sat)
}

fn c2() -> (bool, String) {
    check_all([1, 2, 4, 8].map(bench::cardinality_u).to_vec(), Verdict::Unsat)
}

fn c3() -> (bool, String) {
    check_all((0..=6).map(|j| bench::tree_u(1 << j)).collect(), Verdict::Unsat)
}

fn c4() -> (bool, String) {
    check_all([2, 4].map(|n| bench::parity_to_buechi(n, 1)).to_vec(), Verdict::Unsat)
}

fn c5() -> (bool, String) {
    check_all(vec![bench::rabin_to_buechi(1, 1), bench::rabin_game(1, 1)], Verdict::Unsat)
}

fn c6() -> (bool, String) {
    let mut log = Vec::new();
    let mut ok = true;
    for n in 0..=5 {
        let want = if n % 2 == 0 { Verdict::Sat } else { Verdict::Unsat };
        ok &= check_case(&bench::atl_nest(n), want, &mut log);
    }
    (ok, log.join("; "))
}

/// Near-flat: every instance finishes within five times the slower of the
/// first instance and 20 ms.
fn c7() -> (bool, String) {
    let mut times = Vec::new();
    let mut log = Vec::new();
    let mut ok = true;
    for n in 0..=6 {
        let case = bench::atl_nested_u(n);
        let start = Instant::now();
        match run(&case.formula, &config(&case)) {
            Ok(rep) => log.push(format!("n={n}:{} {:.1?}", rep.verdict, start.elapsed())),
            Err(e) => {
                log.push(format!("n={n}: {e}"));
                ok = false;
            }
        }
        times.push(start.elapsed());
    }
    let cap = 5 * times[0].max(Duration::from_millis(20));
    ok &= times.iter().all(|&t| t <= cap);
    (ok, log.join("; "))
}

fn c8() -> (bool, String) {
    let theta: Vec<u64> =
        (0..4).map(|x| (0..16u64).filter(|s| s & (1 << x) != 0).fold(0, |m, s| m | (1 << s))).collect();
    let mut gamma: Vec<(ModalOp, usize)> =
        (0..16usize).filter(|s| s.count_ones() == 2).map(|s| (ModalOp::AtLeast(2), s)).collect();
    // At most six successors in total.
    gamma.push((ModalOp::AllBut(6), 0));
    let sat = one_step_sat_graded(&OneStepPair::new(gamma, theta));
    (!sat, format!("one_step_sat_graded = {sat}"))
}

fn random_formula(rng: &mut ChaCha8Rng, g: &FormulaGen, max_closure: usize) -> Formula {
    loop {
        let f = g.generate(rng);
        let n = Closure::new(&guard(&f)).len();
        if n <= max_closure && n >= 3 {
            return f;
        }
    }
}

fn c9() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut disagree = Vec::new();
    let mut errors = 0;
    let mut sat = 0;
    for i in 0..200 {
        let logic = if i % 2 == 0 { Logic::K } else { Logic::KD };
        let g = FormulaGen { depth: 5, ..FormulaGen::new(logic) };
        let f = random_formula(&mut rng, &g, 12);
        let mut verdicts = Vec::new();
        for engine in [Engine::OneStep, Engine::Tableau] {
            let mut cfg = RunConfig::new(logic);
            cfg.engine = Some(engine);
            match run(&f, &cfg) {
                Ok(r) => verdicts.push(r.verdict),
                Err(_) => errors += 1,
            }
        }
        if verdicts.len() == 2 {
            if verdicts[0] != verdicts[1] {
                disagree.push(format!("{logic}: {f}"));
            }
            if verdicts[0] == Verdict::Sat {
                sat += 1;
            }
        }
    }
    (
        disagree.is_empty() && errors == 0,
        format!("{} disagreements, {errors} errors, {sat}/200 sat {:?}", disagree.len(), disagree.first()),
    )
}

fn c10() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let g = FormulaGen { depth: 4, atoms: 1, ..FormulaGen::new(Logic::K) };
    let mut total = 0;
    let mut wrong = Vec::new();
    let mut accepted = 0;
    let mut formulas = 0;
    while formulas < 20 {
        let f = guard(&random_formula(&mut rng, &g, 6));
        if f.is_fixpoint_free() {
            continue;
        }
        formulas += 1;
        let cl = Closure::new(&f);
        let det = Determinizer::new(cl.clone(), Determinizer::auto_mode(&cl)).expect("auto mode");
        for _ in 0..500 {
            let (plen, llen) = (rng.gen_range(0..6), rng.gen_range(1..8));
            let (prefix, lp) = random_progressive_lasso(&cl, &mut rng, plen, llen);
            let b = det_lasso_accepts(
                det.initial(),
                |q: &MacroState, a| {
                    let r = det.successor(q, a);
                    (r.state, r.priority)
                },
                &prefix,
                &lp,
            );
            let a = tracking_accepts(&cl, &prefix, &lp);
            total += 1;
            if a {
                accepted += 1;
            }
            if a == b {
                wrong.push(format!("{f} [{}]", det.mode()));
            }
        }
    }
    (
        wrong.is_empty(),
        format!("{}/{total} disagreements, A accepted {accepted} {:?}", wrong.len(), wrong.first()),
    )
}

fn c11() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = 0;
    for _ in 0..300 {
        let nodes = rng.gen_range(1..=50);
        let g = EdgeGame::random(&mut rng, nodes, 5, 3);
        let expected = zielonka(&g);
        let (map, r) = compress_priorities(g.edges.iter().flatten().map(|e| e.1));
        let got = nested_fixpoint(r, nodes, |xs| {
            (0..nodes)
                .map(|v| {
                    let good = |&(w, p): &(usize, u32)| {
                        let i = map[&p];
                        if i == 0 {
                            false
                        } else {
                            xs[i - 1][w]
                        }
                    };
                    if g.eloise[v] {
                        g.edges[v].iter().any(good)
                    } else {
                        g.edges[v].iter().all(good)
                    }
                })
                .collect()
        });
        if got != expected {
            bad += 1;
        }
    }
    (bad == 0, format!("{bad}/300 mismatches"))
}

fn c12() -> (bool, String) {
    let mut problems = Vec::new();
    let corpus = bench::corpus();
    for case in &corpus {
        let mut reports = HashMap::new();
        for schedule in [Schedule::Once, Schedule::Adaptive] {
            let mut cfg = config(case);
            cfg.schedule = schedule;
            cfg.record_marks = true;
            match run(&case.formula, &cfg) {
                Ok(r) => {
                    reports.insert(schedule, r);
                }
                Err(e) => problems.push(format!("{}({}) {schedule}: {e}", case.name, case.params_string())),
            }
        }
        let (Some(once), Some(adaptive)) = (reports.get(&Schedule::Once), reports.get(&Schedule::Adaptive)) else {
            continue;
        };
        if once.verdict != adaptive.verdict {
            problems.push(format!("{}({}) verdicts differ", case.name, case.params_string()));
        }
        let finals: HashMap<&MacroState, Verdict> = once.decided.iter().map(|(s, v)| (s, *v)).collect();
        let own: HashMap<&MacroState, Verdict> = adaptive.decided.iter().map(|(s, v)| (s, *v)).collect();
        for (s, v) in &adaptive.marks {
            if finals.get(s).is_some_and(|f| f != v) || own.get(s).is_some_and(|f| f != v) {
                problems.push(format!("{}({}) mark contradicts final verdict", case.name, case.params_string()));
                break;
            }
        }
        let exp = match case.expected {
            Expected::Sat => Some(Verdict::Sat),
            Expected::Unsat => Some(Verdict::Unsat),
            Expected::Unknown => None,
        };
        if exp.is_some_and(|e| e != once.verdict) {
            problems.push(format!("{}({}) expected {}", case.name, case.params_string(), case.expected));
        }
    }
    (problems.is_empty(), format!("{} cases, {} problems {:?}", corpus.len(), problems.len(), problems.first()))
}

fn c13() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let bounds = SearchBounds::default();
    let mut violations = Vec::new();
    let mut summary = Vec::new();
    for logic in [Logic::K, Logic::KD, Logic::Graded, Logic::Amc] {
        let g = FormulaGen { depth: 3, ..FormulaGen::new(logic) };
        let agents = if logic == Logic::Amc { g.agents } else { 0 };
        let mut found = 0;
        let mut searching = Duration::ZERO;
        for _ in 0..100 {
            let f = g.generate(&mut rng);
            let mut cfg = RunConfig::new(logic);
            cfg.agents = agents;
            let verdict = match run(&f, &cfg) {
                Ok(r) => r.verdict,
                Err(e) => {
                    violations.push(format!("{logic}: {f}: {e}"));
                    continue;
                }
            };
            let t = Instant::now();
            let found_model = bounded_model_search(&f, logic, agents, &bounds).is_some();
            searching += t.elapsed();
            if found_model {
                found += 1;
                if verdict != Verdict::Sat {
                    violations.push(format!("{logic}: {f}"));
                }
            }
        }
        summary.push(format!("{logic}: {found}/100 with models, search {searching:.1?}"));
    }
    (violations.is_empty(), format!("{}; {} violations {:?}", summary.join(", "), violations.len(), violations.first()))
}

fn main() {
    let criteria: [(&str, fn() -> (bool, String)); 13] = [
        ("cardinality sat", c1),
        ("cardinalityU unsat", c2),
        ("treeU unsat", c3),
        ("parityToBuechi unsat", c4),
        ("rabin unsat", c5),
        ("nest alternates", c6),
        ("nestedU flat", c7),
        ("graded counterexample", c8),
        ("engine agreement", c9),
        ("complement property", c10),
        ("nested fixpoint vs zielonka", c11),
        ("partial solving", c12),
        ("bounded models", c13),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = f();
        println!("{} {:>2} {name} ({:.1?}): {detail}", if ok { "PASS" } else { "FAIL" }, i + 1, start.elapsed());
        if !ok {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
