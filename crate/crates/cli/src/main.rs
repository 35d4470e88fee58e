use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use coalmu::bench::{self, BenchCase, Expected, Family};
use coalmu::game::build;
use coalmu::{parse, run, Engine, Error, Logic, RunConfig, Schedule, Verdict};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 1;

#[derive(Parser)]
#[command(name = "coalmu", version, about = "Satisfiability checker for coalgebraic modal fixpoint logics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a formula.
    Solve(SolveArgs),
    /// Benchmark families.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Args, Clone)]
struct SolverOpts {
    /// onestep or tableau; defaults to tableau where the logic has one.
    #[arg(long)]
    engine: Option<String>,
    #[arg(long, default_value = "adaptive")]
    schedule: String,
    /// Timeout in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
}

#[derive(Copy, Clone, ValueEnum, PartialEq, Eq)]
enum Format {
    Human,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    /// k, kd, graded or amc.
    #[arg(long, default_value = "k")]
    logic: String,
    /// Number of agents (coalition logic); defaults to the largest agent mentioned.
    #[arg(long)]
    agents: Option<u32>,
    #[command(flatten)]
    opts: SolverOpts,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Read the formula from a file.
    #[arg(long, conflicts_with = "formula")]
    file: Option<PathBuf>,
    /// Print the explored game graph.
    #[arg(long)]
    dump: bool,
    formula: Option<String>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// List the families and their parameters.
    List,
    /// Print the formulas of a family.
    Emit { family: String, params: String },
    /// Solve a family (or `corpus` for the whole test corpus) and print CSV.
    Run {
        family: String,
        params: Option<String>,
        #[command(flatten)]
        opts: SolverOpts,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn config(logic: Logic, agents: u32, opts: &SolverOpts) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::new(logic);
    cfg.agents = agents;
    cfg.engine = opts.engine.as_deref().map(str::parse::<Engine>).transpose()?;
    cfg.schedule = opts.schedule.parse::<Schedule>()?;
    if !(opts.timeout > 0.0 && opts.timeout.is_finite()) {
        return Err(Error::Unknown { kind: "timeout", value: opts.timeout.to_string() });
    }
    cfg.timeout = Duration::from_secs_f64(opts.timeout);
    Ok(cfg)
}

const CSV_HEADER: [&str; 7] = ["name", "params", "status", "expected", "nodes", "solve_steps", "time_ms"];

struct Row {
    name: String,
    params: String,
    status: String,
    expected: Expected,
    nodes: usize,
    solve_steps: usize,
    time_ms: f64,
}

impl Row {
    fn write(&self, w: &mut csv::Writer<std::io::Stdout>) -> csv::Result<()> {
        w.write_record([
            self.name.as_str(),
            self.params.as_str(),
            self.status.as_str(),
            &self.expected.to_string(),
            &self.nodes.to_string(),
            &self.solve_steps.to_string(),
            &format!("{:.3}", self.time_ms),
        ])
    }

    fn violated(&self) -> bool {
        matches!(
            (self.expected, self.status.as_str()),
            (Expected::Sat, "UNSAT") | (Expected::Unsat, "SAT")
        )
    }
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::Budget(_) => "TIMEOUT",
        _ => "ERROR",
    }
}

fn solve(args: SolveArgs) -> Result<ExitCode, (u8, String)> {
    let usage = |e: Error| (EXIT_USAGE, e.to_string());
    let logic: Logic = args.logic.parse().map_err(usage)?;
    let text = match (&args.file, &args.formula) {
        (Some(p), None) => std::fs::read_to_string(p).map_err(|e| (EXIT_USAGE, format!("{}: {e}", p.display())))?,
        (None, Some(t)) => t.clone(),
        _ => return Err((EXIT_USAGE, "expected a formula or --file".into())),
    };
    let f = parse(&text, logic, args.agents).map_err(usage)?;
    let cfg = config(logic, args.agents.unwrap_or(0), &args.opts).map_err(usage)?;

    let start = Instant::now();
    let mut game = build(&f, &cfg).map_err(usage)?;
    game.set_deadline(Some(start + cfg.timeout));
    let outcome = game.run_loop(cfg.schedule, cfg.max_nodes, &mut None);
    let elapsed = start.elapsed();
    if args.dump {
        eprint!("{}", game.dump());
    }
    let stats = &game.stats;
    let status = match &outcome {
        Ok(v) => v.to_string(),
        Err(e) => status_of(e).to_string(),
    };
    match args.format {
        Format::Human => {
            match &outcome {
                Ok(v) => println!("{v}"),
                Err(e) => println!("{status}: {e}"),
            }
            println!(
                "logic {logic}, engine {}, mode {}, schedule {}",
                cfg.engine.unwrap_or(Engine::default_for(logic)),
                game.determinizer().mode(),
                cfg.schedule
            );
            println!(
                "{} nodes expanded, {} solve steps, {} positions, {:.3} ms",
                stats.nodes_expanded,
                stats.solve_steps,
                game.nodes().len(),
                elapsed.as_secs_f64() * 1e3
            );
        }
        Format::Csv => {
            let row = Row {
                name: "input".into(),
                params: String::new(),
                status,
                expected: Expected::Unknown,
                nodes: stats.nodes_expanded,
                solve_steps: stats.solve_steps,
                time_ms: elapsed.as_secs_f64() * 1e3,
            };
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(CSV_HEADER).and_then(|_| row.write(&mut w)).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            w.flush().map_err(|e| (EXIT_USAGE, e.to_string()))?;
        }
    }
    Ok(ExitCode::from(match outcome {
        Ok(Verdict::Sat) => EXIT_SAT,
        Ok(Verdict::Unsat) => EXIT_UNSAT,
        Err(Error::Budget(_)) => EXIT_BUDGET,
        Err(e) => return Err((EXIT_USAGE, e.to_string())),
    }))
}

fn cases(family: &str, params: Option<&str>) -> Result<Vec<BenchCase>, Error> {
    if family.eq_ignore_ascii_case("corpus") {
        return Ok(bench::corpus());
    }
    let fam: Family = family.parse()?;
    let params = match params {
        Some(p) => bench::parse_params(p)?,
        None if fam == Family::Atl => return Ok(bench::atl_suite()),
        None => return Err(Error::Unknown { kind: "parameters", value: format!("none given for {}", fam.name()) }),
    };
    params.iter().map(|p| fam.generate(p)).collect()
}

fn run_case(case: &BenchCase, opts: &SolverOpts) -> Row {
    let mut row = Row {
        name: case.name.clone(),
        params: case.params_string(),
        status: String::new(),
        expected: case.expected,
        nodes: 0,
        solve_steps: 0,
        time_ms: 0.0,
    };
    let start = Instant::now();
    let result = config(case.logic, case.agents, opts).and_then(|cfg| run(&case.formula, &cfg));
    row.time_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(rep) => {
            row.status = rep.verdict.to_string();
            row.nodes = rep.stats.nodes_expanded;
            row.solve_steps = rep.stats.solve_steps;
        }
        Err(e) => row.status = status_of(&e).to_string(),
    }
    row
}

fn bench_cmd(cmd: BenchCommand) -> Result<ExitCode, (u8, String)> {
    let usage = |e: Error| (EXIT_USAGE, e.to_string());
    match cmd {
        BenchCommand::List => {
            for fam in Family::ALL {
                println!("{} ({})", fam.name(), fam.param_names().join(", "));
            }
            println!("corpus (no parameters)");
            Ok(ExitCode::SUCCESS)
        }
        BenchCommand::Emit { family, params } => {
            for case in cases(&family, Some(&params)).map_err(usage)? {
                println!("{}({}) [{}, {}] {}", case.name, case.params_string(), case.logic, case.expected, case.formula);
            }
            Ok(ExitCode::SUCCESS)
        }
        BenchCommand::Run { family, params, opts, jobs } => {
            let cases = cases(&family, params.as_deref()).map_err(usage)?;
            config(Logic::K, 0, &opts).map_err(usage)?;
            let next = AtomicUsize::new(0);
            let rows: Mutex<Vec<Option<Row>>> = Mutex::new((0..cases.len()).map(|_| None).collect());
            std::thread::scope(|s| {
                for _ in 0..jobs.clamp(1, cases.len().max(1)) {
                    s.spawn(|| loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(case) = cases.get(i) else { break };
                        let row = run_case(case, &opts);
                        rows.lock().unwrap()[i] = Some(row);
                    });
                }
            });
            let rows: Vec<Row> = rows.into_inner().unwrap().into_iter().map(Option::unwrap).collect();
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let io = |e: csv::Error| (EXIT_USAGE, e.to_string());
            w.write_record(CSV_HEADER).map_err(io)?;
            for r in &rows {
                r.write(&mut w).map_err(io)?;
            }
            w.flush().map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let violations = rows.iter().filter(|r| r.violated()).count();
            if violations > 0 {
                eprintln!("{violations} case(s) contradict the expected status");
                return Ok(ExitCode::from(EXIT_USAGE));
            }
            if rows.iter().any(|r| r.status == "TIMEOUT") {
                return Ok(ExitCode::from(EXIT_BUDGET));
            }
            if rows.iter().any(|r| r.status == "ERROR") {
                return Ok(ExitCode::from(EXIT_USAGE));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Bench(cmd) => bench_cmd(cmd),
    };
    match result {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
