//! The satisfiability game, explored by global caching.
//!
//! Existential positions are macro-states of `B_χ`. A core (unsaturated
//! macro-state) moves to the saturated macro-states reachable by a
//! propositional word; a state moves by modal steps. Universal positions
//! are never materialised: the modal step is decided inside solving by a
//! one-step satisfiability check (one-step engine) or by modal rule
//! applications (tableau engine).

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};
use std::rc::Rc;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::analysis;
use crate::closure::{Closure, NodeId, NodeKind, SatClass};
use crate::determinize::{Class, Determinizer, MacroState, Mode};
use crate::error::{Error, Result};
use crate::formula::{Formula, ModalOp};
use crate::logic::Logic;
use crate::onestep::{self, OneStepPair};
use crate::solve;
use crate::tracking::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    OneStep,
    Tableau,
}

impl Engine {
    /// Tableau rules where they exist, one-step solving otherwise.
    pub fn default_for(logic: Logic) -> Engine {
        if logic.has_tableau() {
            Engine::Tableau
        } else {
            Engine::OneStep
        }
    }
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Engine> {
        match s.to_ascii_lowercase().as_str() {
            "onestep" | "one-step" => Ok(Engine::OneStep),
            "tableau" => Ok(Engine::Tableau),
            _ => Err(Error::Unknown { kind: "engine", value: s.to_string() }),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::OneStep => "onestep",
            Engine::Tableau => "tableau",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// Build the whole game, then solve.
    Once,
    /// Also solve whenever the game has doubled in size.
    Adaptive,
}

impl FromStr for Schedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Schedule> {
        match s.to_ascii_lowercase().as_str() {
            "once" => Ok(Schedule::Once),
            "adaptive" => Ok(Schedule::Adaptive),
            _ => Err(Error::Unknown { kind: "schedule", value: s.to_string() }),
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schedule::Once => "once",
            Schedule::Adaptive => "adaptive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub logic: Logic,
    /// Number of agents for the coalition logic; 0 means "as many as the
    /// formula mentions, at least one".
    pub agents: u32,
    /// `None` picks [`Engine::default_for`].
    pub engine: Option<Engine>,
    pub schedule: Schedule,
    pub timeout: Duration,
    pub max_nodes: usize,
    /// `None` picks [`Determinizer::auto_mode`].
    pub mode: Option<Mode>,
    /// Keep the verdicts of all decided positions in the report.
    pub record_marks: bool,
}

impl RunConfig {
    pub fn new(logic: Logic) -> Self {
        RunConfig {
            logic,
            agents: 0,
            engine: None,
            schedule: Schedule::Adaptive,
            timeout: Duration::from_secs(60),
            max_nodes: 2_000_000,
            mode: None,
            record_marks: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub nodes_expanded: usize,
    pub solve_steps: usize,
    pub peak_nodes: usize,
    pub wall: Duration,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    pub stats: Stats,
    pub mode: Mode,
    pub engine: Engine,
    /// Positions decided by intermediate solving steps, in order.
    pub marks: Vec<(MacroState, Verdict)>,
    /// All positions decided when the run ended.
    pub decided: Vec<(MacroState, Verdict)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Unexpanded,
    Undecided,
    Sat,
    Unsat,
}

#[derive(Clone, Debug)]
pub enum Moves {
    None,
    /// Saturation targets with the priority of the propositional word.
    Core(Rc<Vec<(u32, u32)>>),
    /// A saturated label with contradictory literals.
    Dead,
    /// Modal positions and, for every subset `κ` of them (as a bitmask),
    /// the successor and priority of the step `κ`.
    OneStep { gamma: Vec<(ModalOp, usize)>, succ: Vec<(u32, u32)> },
    /// One successor per rule application; all must be won.
    Tableau(Vec<(u32, u32)>),
}

#[derive(Clone, Debug)]
pub struct GameNode {
    pub state: MacroState,
    pub status: Status,
    pub moves: Moves,
}

/// Largest number of modal formulas in a label for the one-step engine.
const MAX_ONESTEP_MODALS: usize = 16;

pub struct Game {
    det: Determinizer,
    logic: Logic,
    agents: u32,
    engine: Engine,
    nodes: Vec<GameNode>,
    index: HashMap<MacroState, u32>,
    frontier: VecDeque<u32>,
    sat_memo: HashMap<MacroState, Rc<Vec<(u32, u32)>>>,
    onestep_cache: HashMap<(u32, Vec<u64>), bool>,
    root: u32,
    deadline: Option<Instant>,
    pub stats: Stats,
}

impl Game {
    pub fn new(det: Determinizer, logic: Logic, agents: u32, engine: Engine) -> Result<Game> {
        if engine == Engine::Tableau && !logic.has_tableau() {
            return Err(Error::UnsupportedEngine(logic.to_string()));
        }
        let mut g = Game {
            det,
            logic,
            agents,
            engine,
            nodes: Vec::new(),
            index: HashMap::new(),
            frontier: VecDeque::new(),
            sat_memo: HashMap::new(),
            onestep_cache: HashMap::new(),
            root: 0,
            deadline: None,
            stats: Stats::default(),
        };
        let init = g.det.initial();
        g.root = g.intern(init);
        Ok(g)
    }

    pub fn closure(&self) -> &Closure {
        self.det.closure()
    }

    pub fn determinizer(&self) -> &Determinizer {
        &self.det
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn nodes(&self) -> &[GameNode] {
        &self.nodes
    }

    pub fn frontier_is_empty(&self) -> bool {
        self.frontier.is_empty()
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    fn intern(&mut self, ms: MacroState) -> u32 {
        if let Some(&id) = self.index.get(&ms) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.index.insert(ms.clone(), id);
        self.nodes.push(GameNode { state: ms, status: Status::Unexpanded, moves: Moves::None });
        self.frontier.push_back(id);
        self.stats.peak_nodes = self.stats.peak_nodes.max(self.nodes.len());
        id
    }

    fn consistent(&self, label: &[NodeId]) -> bool {
        onestep::literal_consistent(self.closure(), label.iter().copied())
    }

    /// Saturated positions reachable from `ms` by propositional words, with
    /// the highest priority seen on the way. Unsaturated formulas are
    /// decomposed in increasing id order; inconsistent labels are pruned.
    pub fn saturate(&mut self, ms: &MacroState) -> Rc<Vec<(u32, u32)>> {
        if let Some(r) = self.sat_memo.get(ms) {
            return r.clone();
        }
        let label = ms.label();
        let result = if !self.consistent(label) {
            Vec::new()
        } else {
            let cl = self.det.closure();
            match label.iter().copied().find(|&v| cl.class(v) == SatClass::Other) {
                None => vec![(self.intern(ms.clone()), 0)],
                Some(v) => {
                    let letters = match *cl.kind(v) {
                        NodeKind::And(..) => vec![Letter::Split { node: v }],
                        NodeKind::Or(..) => vec![
                            Letter::Choose { node: v, branch: 1 },
                            Letter::Choose { node: v, branch: 2 },
                        ],
                        NodeKind::Fix(..) => vec![Letter::Unfold { node: v }],
                        _ => vec![],
                    };
                    let mut out = Vec::new();
                    for a in letters {
                        let step = self.det.successor(ms, &a);
                        for &(t, p) in self.saturate(&step.state).iter() {
                            out.push((t, p.max(step.priority)));
                        }
                    }
                    out.sort_unstable();
                    out.dedup();
                    out
                }
            }
        };
        let r = Rc::new(result);
        self.sat_memo.insert(ms.clone(), r.clone());
        r
    }

    fn modal_step(&mut self, ms: &MacroState, kappa: Vec<NodeId>) -> (u32, u32) {
        let step = self.det.successor(ms, &Letter::Modal(kappa));
        (self.intern(step.state), step.priority)
    }

    /// Expands an unexpanded position, adding its successors to the game.
    pub fn expand(&mut self, id: u32) -> Result<()> {
        assert_eq!(self.nodes[id as usize].status, Status::Unexpanded);
        let ms = self.nodes[id as usize].state.clone();
        let moves = match self.det.classify(&ms) {
            Class::Core => Moves::Core(self.saturate(&ms)),
            Class::State if !self.consistent(ms.label()) => Moves::Dead,
            Class::State => {
                let cl = self.det.closure();
                let modals: Vec<(NodeId, ModalOp)> = ms
                    .label()
                    .iter()
                    .filter_map(|&v| match *cl.kind(v) {
                        NodeKind::Modal(op, _) => Some((v, op)),
                        _ => None,
                    })
                    .collect();
                match self.engine {
                    Engine::OneStep => {
                        if modals.len() > MAX_ONESTEP_MODALS {
                            return Err(Error::Budget(format!(
                                "{} modal formulas in one label exceed the one-step engine limit",
                                modals.len()
                            )));
                        }
                        let k = modals.len();
                        let mut succ = Vec::with_capacity(1 << k);
                        for mask in 0u64..(1 << k) {
                            let kappa: Vec<NodeId> =
                                (0..k).filter(|i| mask & (1 << i) != 0).map(|i| modals[i].0).collect();
                            succ.push(self.modal_step(&ms, kappa));
                        }
                        let gamma = modals.iter().enumerate().map(|(i, &(_, op))| (op, i)).collect();
                        Moves::OneStep { gamma, succ }
                    }
                    Engine::Tableau => {
                        let apps = onestep::tableau_applications(cl, ms.label(), self.logic, self.agents)?;
                        let mut succ = Vec::with_capacity(apps.len());
                        for app in apps {
                            succ.push(self.modal_step(&ms, app.premiss));
                        }
                        Moves::Tableau(succ)
                    }
                }
            }
        };
        let node = &mut self.nodes[id as usize];
        node.moves = moves;
        node.status = Status::Undecided;
        self.stats.nodes_expanded += 1;
        Ok(())
    }

    /// Expands the oldest frontier position; false if there is none.
    pub fn expand_next(&mut self) -> Result<bool> {
        while let Some(id) = self.frontier.pop_front() {
            if self.nodes[id as usize].status == Status::Unexpanded {
                self.expand(id)?;
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn edges(&self, id: u32) -> Vec<(u32, u32)> {
        match &self.nodes[id as usize].moves {
            Moves::Core(t) => t.to_vec(),
            Moves::OneStep { succ, .. } => succ.clone(),
            Moves::Tableau(s) => s.clone(),
            Moves::None | Moves::Dead => vec![],
        }
    }

    /// Computes `E_G` and `A_G` on the expanded part and marks the decided
    /// positions. Unexpanded positions count as lost for `E_G` and as won
    /// for the complement of `A_G`. Returns the newly decided positions.
    pub fn solve(&mut self) -> Result<Vec<(u32, Verdict)>> {
        self.stats.solve_steps += 1;
        let carrier: Vec<u32> = (0..self.nodes.len() as u32)
            .filter(|&i| self.nodes[i as usize].status == Status::Undecided)
            .collect();
        let mut local = vec![usize::MAX; self.nodes.len()];
        for (k, &i) in carrier.iter().enumerate() {
            local[i as usize] = k;
        }
        let (cmap, r) = solve::compress_priorities(carrier.iter().flat_map(|&i| self.edges(i)).map(|(_, p)| p));
        // Edges with compressed priorities.
        let edges: Vec<Vec<(u32, usize)>> =
            carrier.iter().map(|&i| self.edges(i).into_iter().map(|(t, p)| (t, cmap[&p])).collect()).collect();
        let win = self.fixpoint(&carrier, &local, &edges, r, false)?;
        let not_lost = self.fixpoint(&carrier, &local, &edges, r, true)?;
        let mut decided = Vec::new();
        for (k, &i) in carrier.iter().enumerate() {
            let status = if win[k] {
                Status::Sat
            } else if !not_lost[k] {
                Status::Unsat
            } else {
                continue;
            };
            self.nodes[i as usize].status = status;
            decided.push((i, if status == Status::Sat { Verdict::Sat } else { Verdict::Unsat }));
        }
        Ok(decided)
    }

    fn fixpoint(
        &mut self,
        carrier: &[u32],
        local: &[usize],
        edges: &[Vec<(u32, usize)>],
        r: usize,
        optimistic: bool,
    ) -> Result<Vec<bool>> {
        let deadline = self.deadline;
        let mut timed_out = false;
        let status: Vec<Status> = self.nodes.iter().map(|n| n.status).collect();
        let logic = self.logic;
        let agents = self.agents;
        let nodes = &self.nodes;
        let cache = &mut self.onestep_cache;
        let res = solve::try_nested_fixpoint(r, carrier.len(), |xs| {
            if let Some(d) = deadline {
                if Instant::now() > d {
                    timed_out = true;
                    return None;
                }
            }
            let val = |t: u32, c: usize| match status[t as usize] {
                Status::Sat => true,
                Status::Unsat => false,
                Status::Unexpanded => optimistic,
                Status::Undecided => xs[c - 1][local[t as usize]],
            };
            let out = carrier
                .iter()
                .enumerate()
                .map(|(k, &i)| match &nodes[i as usize].moves {
                    Moves::Core(_) => edges[k].iter().any(|&(t, c)| val(t, c)),
                    Moves::Tableau(_) => edges[k].iter().all(|&(t, c)| val(t, c)),
                    Moves::OneStep { gamma, .. } => {
                        let theta_bits: Vec<bool> = edges[k].iter().map(|&(t, c)| val(t, c)).collect();
                        let mut key = vec![0u64; theta_bits.len().div_ceil(64)];
                        for (m, &b) in theta_bits.iter().enumerate() {
                            if b {
                                key[m / 64] |= 1 << (m % 64);
                            }
                        }
                        *cache.entry((i, key)).or_insert_with(|| {
                            let theta =
                                theta_bits.iter().enumerate().filter(|(_, &b)| b).map(|(m, _)| m as u64).collect();
                            onestep::one_step_sat(logic, agents, &OneStepPair::new(gamma.clone(), theta))
                        })
                    }
                    Moves::Dead | Moves::None => false,
                })
                .collect();
            Some(out)
        });
        match res {
            Some(v) => Ok(v),
            None if timed_out => Err(Error::Budget("timeout".into())),
            None => unreachable!(),
        }
    }

    pub fn status(&self, id: u32) -> Status {
        self.nodes[id as usize].status
    }

    /// Text edge list: `id kind label -> target priority` per move.
    pub fn dump(&self) -> String {
        let cl = self.closure();
        let mut out = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let label: Vec<String> = n.state.label().iter().map(|&v| cl.node_formula(v).to_string()).collect();
            let _ = writeln!(out, "{i} {:?} {{{}}}", n.status, label.join(", "));
            match &n.moves {
                Moves::Core(t) => {
                    for &(t, p) in t.iter() {
                        let _ = writeln!(out, "  {i} -word-> {t} pri {p}");
                    }
                }
                Moves::OneStep { succ, .. } => {
                    for (m, &(t, p)) in succ.iter().enumerate() {
                        let _ = writeln!(out, "  {i} -kappa:{m:b}-> {t} pri {p}");
                    }
                }
                Moves::Tableau(s) => {
                    for (a, &(t, p)) in s.iter().enumerate() {
                        let _ = writeln!(out, "  {i} -rule:{a}-> {t} pri {p}");
                    }
                }
                Moves::Dead => {
                    let _ = writeln!(out, "  {i} inconsistent");
                }
                Moves::None => {}
            }
        }
        out
    }

    /// Runs the exploration loop until the initial position is decided.
    pub fn run_loop(&mut self, schedule: Schedule, max_nodes: usize, marks: &mut Option<Vec<(MacroState, Verdict)>>) -> Result<Verdict> {
        let mut last_solve: Option<usize> = None;
        loop {
            match self.status(self.root) {
                Status::Sat => return Ok(Verdict::Sat),
                Status::Unsat => return Ok(Verdict::Unsat),
                _ => {}
            }
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Error::Budget("timeout".into()));
                }
            }
            if self.nodes.len() > max_nodes {
                return Err(Error::Budget(format!("more than {max_nodes} game nodes")));
            }
            if !self.expand_next()? {
                self.solve()?;
                return match self.status(self.root) {
                    Status::Sat => Ok(Verdict::Sat),
                    Status::Unsat => Ok(Verdict::Unsat),
                    s => unreachable!("fully expanded game leaves the root {s:?}"),
                };
            }
            let expanded = self.stats.nodes_expanded;
            if solve::schedule_should_solve(expanded, expanded, last_solve, schedule) {
                let decided = self.solve()?;
                if let Some(m) = marks.as_mut() {
                    m.extend(decided.into_iter().map(|(i, v)| (self.nodes[i as usize].state.clone(), v)));
                }
                last_solve = Some(expanded);
            }
        }
    }
}

fn check_logic(f: &Formula, logic: Logic, agents: u32) -> Result<()> {
    for op in f.modal_ops() {
        if !logic.admits(op) {
            return Err(Error::OperatorNotInLogic { op: op.to_string(), logic: logic.to_string(), pos: 0 });
        }
    }
    if logic == Logic::Amc {
        let max = f.max_agent();
        if max > agents {
            return Err(Error::AgentOutOfRange { agent: max, max: agents, pos: 0 });
        }
    }
    Ok(())
}

/// Agent count used for `f` under `cfg`.
pub fn effective_agents(f: &Formula, cfg: &RunConfig) -> u32 {
    if cfg.agents > 0 {
        cfg.agents
    } else {
        f.max_agent().max(1)
    }
}

/// Builds the game for a closed formula: guards it, computes the closure and
/// picks the determinization.
pub fn build(f: &Formula, cfg: &RunConfig) -> Result<Game> {
    let agents = effective_agents(f, cfg);
    check_logic(f, cfg.logic, agents)?;
    let engine = cfg.engine.unwrap_or(Engine::default_for(cfg.logic));
    if engine == Engine::Tableau && !cfg.logic.has_tableau() {
        return Err(Error::UnsupportedEngine(cfg.logic.to_string()));
    }
    let g = analysis::guard(f);
    let cl = Closure::new(&g);
    let mode = cfg.mode.unwrap_or_else(|| Determinizer::auto_mode(&cl));
    let det = Determinizer::new(cl, mode)?;
    Game::new(det, cfg.logic, agents, engine)
}

/// Decides satisfiability of a closed formula.
pub fn run(f: &Formula, cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut game = build(f, cfg)?;
    game.set_deadline(Some(start + cfg.timeout));
    let mut marks = cfg.record_marks.then(Vec::new);
    let verdict = game.run_loop(cfg.schedule, cfg.max_nodes, &mut marks)?;
    let mut stats = game.stats.clone();
    stats.wall = start.elapsed();
    let decided = if cfg.record_marks {
        game.nodes
            .iter()
            .filter_map(|n| match n.status {
                Status::Sat => Some((n.state.clone(), Verdict::Sat)),
                Status::Unsat => Some((n.state.clone(), Verdict::Unsat)),
                _ => None,
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(Report {
        verdict,
        stats,
        mode: game.det.mode(),
        engine: game.engine,
        marks: marks.unwrap_or_default(),
        decided,
    })
}
