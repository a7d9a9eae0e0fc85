//! Command-line driver: pick a game, an opponent seat, and an algorithm;
//! emit a JSON report. `reproduce-tables` runs the whole benchmark matrix
//! and prints pass/fail lines against the pinned reference values.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use teamcor::cfr::SeedConfig;
use teamcor::correlation::{is_semi_randomized, CorrelationPlan, TeamMember};
use teamcor::games::{GameSpec, GAME_NAMES};
use teamcor::jsonfmt;
use teamcor::tmecor::{
    column_generation, direct_lp, direct_model, fixed_support_mip, fixed_support_model, CgConfig,
    TeamInstance, TmecorError, TmecorSolution, SUPPORT_EPS,
};

#[derive(Parser)]
#[command(
    name = "teamsolve",
    version,
    about = "Team-maxmin equilibrium solvers for two-seat teams with a coordination device"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the benchmark (game, seat, algorithm) matrix and print
    /// table-style pass/fail summaries.
    ReproduceTables {
        /// Parallel solver threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// One-shot LP; exact only on triangle-free instances, refused otherwise.
    DirectLp,
    /// Column generation with self-play seeding.
    Cg,
    /// Exact MIP over a fixed number of semi-randomized plan copies.
    FixedSupport,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::DirectLp => "direct-lp",
            Algorithm::Cg => "cg",
            Algorithm::FixedSupport => "fixed-support",
        }
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Built-in game name; see --list-games.
    #[arg(long)]
    game: Option<String>,
    /// JSON game file instead of a built-in game.
    #[arg(long, conflicts_with = "game")]
    game_file: Option<PathBuf>,
    /// Print the built-in game names and exit.
    #[arg(long)]
    list_games: bool,
    /// Opponent seat (1-based; the other two seats form the team).
    #[arg(long, default_value_t = 3)]
    opponent: usize,
    #[arg(long, value_enum, default_value_t = Algorithm::Cg)]
    algorithm: Algorithm,
    /// Plan copies for --algorithm fixed-support.
    #[arg(long)]
    n: Option<usize>,
    /// Self-play seeding iterations for column generation.
    #[arg(long, default_value_t = 1000)]
    seed_iterations: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Column-generation termination tolerance on the pricing reduced cost.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Solver backend name ("embedded" unless others are registered).
    #[arg(long, default_value = "embedded")]
    backend: String,
    /// Worker threads (only reproduce-tables parallelizes).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report instance structure (sizes, relevant pairs, triangle-freeness)
    /// without solving.
    #[arg(long)]
    report_structure: bool,
    /// Alternate the deterministic member between pricing rounds
    /// (experimental; default keeps the second seat deterministic).
    #[arg(long)]
    alternate_pricing: bool,
    /// Debug: dump the algorithm's one-shot model as LP-format text to this
    /// path before solving.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
}

/// Exit 2: configuration problems (including the direct LP's refusal of
/// non-triangle-free instances). Exit 3: solver failures.
const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Some(Command::ReproduceTables { jobs }) => reproduce_tables(jobs.max(1)),
        None => run_single(&cli.run),
    };
    match code {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("teamsolve: {msg}");
            ExitCode::from(code)
        }
    }
}

type RunResult = Result<(), (u8, String)>;

fn config_err(msg: impl Into<String>) -> (u8, String) {
    (EXIT_CONFIG, msg.into())
}

fn load_game(args: &RunArgs) -> Result<(String, teamcor::efg::Game), (u8, String)> {
    if let Some(path) = &args.game_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        let game = jsonfmt::load(&text).map_err(|e| config_err(format!("{e}")))?;
        return Ok((path.display().to_string(), game));
    }
    let name = args.game.as_deref().ok_or_else(|| config_err("--game or --game-file required"))?;
    let spec = GameSpec::from_name(name).map_err(|e| config_err(format!("{e}")))?;
    let game = spec.build().map_err(|e| config_err(format!("{e}")))?;
    Ok((spec.name(), game))
}

fn run_single(args: &RunArgs) -> RunResult {
    if args.list_games {
        for name in GAME_NAMES {
            println!("{name}");
        }
        return Ok(());
    }
    if args.opponent < 1 || args.opponent > 3 {
        return Err(config_err("--opponent must be 1, 2, or 3"));
    }
    let (game_name, game) = load_game(args)?;
    let t_build = Instant::now();
    let inst = TeamInstance::new(game, args.opponent - 1);
    let build_ms = t_build.elapsed().as_secs_f64() * 1e3;

    let structure = structure_json(&inst);
    if args.report_structure {
        let report = json!({
            "game": game_name,
            "opponent": args.opponent,
            "structure": structure,
        });
        return emit(args, &report);
    }

    let backend = linsolve::backend::backend(&args.backend)
        .map_err(|e| config_err(format!("{e}")))?;

    if args.algorithm == Algorithm::FixedSupport && args.n.is_none() {
        return Err(config_err("--algorithm fixed-support requires --n"));
    }
    if let Some(path) = &args.dump_lp {
        let model = match args.algorithm {
            Algorithm::FixedSupport => fixed_support_model(&inst, args.n.unwrap()),
            // The one-shot formulation doubles as the reference dump for
            // column generation, whose models change every iteration.
            _ => direct_model(&inst),
        };
        let mut file = std::fs::File::create(path)
            .map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))?;
        linsolve::text::write_lp(&model, &mut file)
            .map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))?;
    }

    let t_solve = Instant::now();
    let solved: Result<TmecorSolution, TmecorError> = match args.algorithm {
        Algorithm::DirectLp => direct_lp(&inst, backend.as_ref()),
        Algorithm::FixedSupport => fixed_support_mip(&inst, backend.as_ref(), args.n.unwrap()),
        Algorithm::Cg => column_generation(
            &inst,
            backend.as_ref(),
            &CgConfig {
                seed: SeedConfig { iterations: args.seed_iterations, rng_seed: args.rng_seed },
                tolerance: args.tolerance,
                max_iterations: 10_000,
                alternate_pricing: args.alternate_pricing,
            },
        ),
    };
    let solve_ms = t_solve.elapsed().as_secs_f64() * 1e3;

    let solution = solved.map_err(|e| match e {
        TmecorError::NotTriangleFree => (EXIT_CONFIG, format!("{e}")),
        other => (EXIT_SOLVER, format!("{other}")),
    })?;

    let support: Vec<serde_json::Value> = solution
        .support
        .iter()
        .map(|entry| {
            json!({
                "lambda": entry.weight,
                "deterministic_member": classify(&inst, &entry.plan),
                "nonzero": entry.plan.values.iter().filter(|&&v| v > SUPPORT_EPS).count(),
            })
        })
        .collect();
    let report = json!({
        "game": game_name,
        "opponent": args.opponent,
        "algorithm": args.algorithm.name(),
        "value": solution.value,
        "certificate": {
            "best_response": solution.best_response,
            "gap": solution.certificate_gap,
        },
        "support": support,
        "iterations": solution.iterations,
        "pricing": {
            "relaxation_count": solution.relaxation_count,
            "mip_count": solution.mip_count,
        },
        "seeded_columns": solution.seeded_columns,
        "structure": structure,
        "timings": { "build_ms": build_ms, "solve_ms": solve_ms },
    });
    emit(args, &report)
}

fn classify(inst: &TeamInstance, plan: &CorrelationPlan) -> &'static str {
    let one = is_semi_randomized(plan, TeamMember::TeamOne, &inst.pairs, 1e-6);
    let two = is_semi_randomized(plan, TeamMember::TeamTwo, &inst.pairs, 1e-6);
    match (one, two) {
        (true, true) => "both",
        (true, false) => "team_one",
        (false, true) => "team_two",
        (false, false) => "neither",
    }
}

fn structure_json(inst: &TeamInstance) -> serde_json::Value {
    let s = inst.structure();
    json!({
        "num_sequences": s.num_sequences,
        "num_leaves": s.num_leaves,
        "relevant_pairs": s.relevant_pairs,
        "triangle_free": s.triangle_free,
        "pairs_per_leaf": s.pairs_per_leaf,
        "product_per_pair": s.product_per_pair,
    })
}

fn emit(args: &RunArgs, report: &serde_json::Value) -> RunResult {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match &args.output {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| config_err(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// reproduce-tables

struct ValueTask {
    label: String,
    game: &'static str,
    opponent: usize,
    algorithm: &'static str,
    n: usize,
    expected: f64,
    tolerance: f64,
}

fn value_tasks() -> Vec<ValueTask> {
    let mut tasks = Vec::new();
    let mut push = |game: &'static str,
                    opponent: usize,
                    algorithm: &'static str,
                    n: usize,
                    expected: f64,
                    tolerance: f64| {
        let label = match algorithm {
            "fixed-support" => format!("{game} O={opponent} {algorithm} n={n}"),
            _ => format!("{game} O={opponent} {algorithm}"),
        };
        tasks.push(ValueTask { label, game, opponent, algorithm, n, expected, tolerance });
    };
    for o in 1..=3 {
        push("kuhn3", o, "cg", 0, 0.0, 1e-6);
    }
    push("kuhn4", 1, "cg", 0, 0.0378788, 1e-4);
    push("kuhn4", 2, "cg", 0, 0.0265152, 1e-4);
    push("kuhn4", 3, "cg", 0, -0.0416667, 1e-4);
    for o in 1..=3 {
        push("goofspiel-limited", o, "direct-lp", 0, 0.252422, 1e-4);
        push("goofspiel", o, "direct-lp", 0, 0.253439, 1e-4);
    }
    push("kuhn4", 1, "fixed-support", 1, 0.02083, 1e-4);
    push("kuhn4", 1, "fixed-support", 2, 0.03788, 1e-4);
    push("kuhn4", 2, "fixed-support", 1, 0.00181, 1e-4);
    push("kuhn4", 2, "fixed-support", 2, 0.02457, 1e-4);
    push("kuhn4", 2, "fixed-support", 3, 0.02652, 1e-4);
    push("kuhn4", 3, "fixed-support", 1, -0.04167, 1e-4);
    for o in 1..=3 {
        push("goofspiel-limited", o, "fixed-support", 1, 0.23889, 1e-4);
        push("goofspiel-limited", o, "fixed-support", 2, 0.25242, 1e-4);
    }
    tasks
}

fn run_value_task(task: &ValueTask) -> String {
    let backend = linsolve::backend::backend("embedded").expect("embedded backend");
    let game = GameSpec::from_name(task.game).unwrap().build().unwrap();
    let inst = TeamInstance::new(game, task.opponent - 1);
    let result = match task.algorithm {
        "direct-lp" => direct_lp(&inst, backend.as_ref()),
        "fixed-support" => fixed_support_mip(&inst, backend.as_ref(), task.n),
        _ => column_generation(&inst, backend.as_ref(), &CgConfig::default()),
    };
    match result {
        Ok(sol) => {
            let ok = (sol.value - task.expected).abs() <= task.tolerance;
            format!(
                "{} {:40} value {:>10.6} expected {:>10.6}",
                if ok { "PASS" } else { "FAIL" },
                task.label,
                sol.value,
                task.expected
            )
        }
        Err(e) => format!("FAIL {:40} error: {e}", task.label),
    }
}

fn reproduce_tables(jobs: usize) -> RunResult {
    println!("== structure ==");
    println!(
        "{:18} {:>7} {:>7} {:>8} {:>8} {:>8}  triangle-free (O=1/2/3)",
        "game", "seq", "leaves", "pairs", "p/leaf", "prod/p"
    );
    for name in GAME_NAMES {
        let game = GameSpec::from_name(name).unwrap().build().unwrap();
        let mut flags = String::new();
        let mut summary = None;
        for opp in 0..3 {
            let inst = TeamInstance::new(game.clone(), opp);
            let s = inst.structure();
            flags.push(if s.triangle_free { '+' } else { '-' });
            if opp == 2 {
                summary = Some(s);
            }
        }
        let s = summary.unwrap();
        println!(
            "{:18} {:>7} {:>7} {:>8} {:>8.4} {:>8.4}  {}",
            name, s.num_sequences[0], s.num_leaves, s.relevant_pairs, s.pairs_per_leaf,
            s.product_per_pair, flags
        );
    }

    println!("\n== values ==");
    let tasks = value_tasks();
    let lines: Vec<String> = if jobs <= 1 {
        tasks.iter().map(run_value_task).collect()
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let results: Vec<std::sync::Mutex<Option<String>>> =
            tasks.iter().map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..jobs.min(tasks.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= tasks.len() {
                        break;
                    }
                    *results[i].lock().unwrap() = Some(run_value_task(&tasks[i]));
                });
            }
        });
        results.into_iter().map(|m| m.into_inner().unwrap().unwrap()).collect()
    };
    let mut failures = 0usize;
    for line in &lines {
        if line.starts_with("FAIL") {
            failures += 1;
        }
        println!("{line}");
    }
    if failures > 0 {
        return Err((EXIT_SOLVER, format!("{failures} table entries failed")));
    }
    Ok(())
}
