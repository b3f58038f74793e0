use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bddl_cli::server;
use bddl_cli::source::{CliError, Game};
use bddl_core::bddl::{validate_instance, Severity};
use bddl_core::circuit::qbf::solve_qbf;
use bddl_core::circuit::qcir::parse_qcir;
use bddl_core::encoder::{encode, EncodedInstance};
use bddl_core::models;
use bddl_core::play::{render_board, Mode, PlayError, PlaySession, Status as PlayStatus};
use bddl_core::semantics::{self, check_sanity, Rules, SanityOutcome};
use bddl_core::solver::{
    depth_scan_with, solve_encoding, Format, ScanReport, SolverConfig, SolverVerdict, Status,
};

/// States the sanity check may expand before giving up.
const SANITY_BUDGET: usize = 200_000;

#[derive(Parser)]
#[command(name = "bddl", version, about = "Board games in BDDL: check, solve, encode to QBF and play")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Solver configuration file (key=value lines).
    #[arg(long, global = true, value_name = "FILE")]
    solver_config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// Bundled model name (see `bddl models`).
    #[arg(long, short, conflicts_with_all = ["domain", "problem"], required_unless_present = "domain")]
    model: Option<String>,
    #[arg(long, requires = "problem", value_name = "FILE")]
    domain: Option<PathBuf>,
    #[arg(long, requires = "domain", value_name = "FILE")]
    problem: Option<PathBuf>,
}

impl Source {
    fn load(&self, depth: Option<u32>) -> Result<Game, CliError> {
        if depth == Some(0) {
            return Err(CliError::Usage("depth must be at least 1".into()));
        }
        let game = match (&self.model, &self.domain, &self.problem) {
            (Some(m), _, _) => Game::bundled(m)?,
            (None, Some(d), Some(p)) => Game::from_files(d, p)?,
            _ => return Err(CliError::Usage("give --model or --domain with --problem".into())),
        };
        Ok(game.with_depth(depth))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    /// Explicit-state search.
    Oracle,
    /// The built-in QBF expansion solver.
    Expansion,
    /// A configured QCIR or QDIMACS solver.
    External,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Qcir,
    Qdimacs,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Qcir => Format::Qcir,
            FormatArg::Qdimacs => Format::Qdimacs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the bundled models.
    Models,
    /// Parse, validate and sanity-check an instance.
    Check {
        #[command(flatten)]
        source: Source,
    },
    /// Write the QBF encoding of an instance.
    Encode {
        #[command(flatten)]
        source: Source,
        #[arg(long, short)]
        depth: Option<u32>,
        #[arg(long, short, value_enum, default_value = "qcir")]
        format: FormatArg,
        /// Output file; standard output when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Decide the instance with the explicit-state oracle.
    Oracle {
        #[command(flatten)]
        source: Source,
        #[arg(long, short)]
        depth: Option<u32>,
        /// Use the single-threaded search.
        #[arg(long)]
        sequential: bool,
    },
    /// Decide one depth with a QBF engine.
    Solve {
        #[command(flatten)]
        source: Source,
        #[arg(long, short)]
        depth: Option<u32>,
        #[arg(long, value_enum, default_value = "external")]
        engine: Engine,
        #[arg(long, short, value_enum)]
        format: Option<FormatArg>,
    },
    /// Find the smallest winning depth, stepping by two.
    Scan {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[arg(long, value_enum, default_value = "oracle")]
        engine: Engine,
        #[arg(long, short, value_enum)]
        format: Option<FormatArg>,
    },
    /// Play White against Black's winning strategy in the terminal.
    Play {
        #[command(flatten)]
        source: Source,
        #[arg(long, short)]
        depth: Option<u32>,
        /// Let White retry after an illegal move instead of losing.
        #[arg(long)]
        interactive: bool,
        /// Write the transcript here as JSON when the play ends.
        #[arg(long, value_name = "FILE")]
        transcript: Option<PathBuf>,
    },
    /// Serve the JSON play API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
    },
    /// Solve a QCIR file with the built-in engine (exit 10 true, 20 false).
    #[command(hide = true)]
    EvalQcir { file: PathBuf },
}

struct Ctx {
    json: bool,
    solver_config: Option<PathBuf>,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) {
        if self.json {
            say(&serde_json::to_string_pretty(value).expect("serializable"));
        } else {
            say(&text());
        }
    }
}

/// Print a line, ignoring a closed pipe.
fn say(text: &str) {
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let ctx = Ctx {
        json: cli.json,
        solver_config: cli.solver_config,
    };
    match run(&ctx, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bddl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Result<u8, CliError> {
    match command {
        Command::Models => list_models(ctx),
        Command::Check { source } => check(ctx, &source.load(None)?),
        Command::Encode {
            source,
            depth,
            format,
            out,
        } => write_encoding(ctx, &source.load(depth)?, format.into(), out.as_deref()),
        Command::Oracle {
            source,
            depth,
            sequential,
        } => oracle(ctx, &source.load(depth)?, sequential),
        Command::Solve {
            source,
            depth,
            engine,
            format,
        } => {
            let game = source.load(depth)?;
            let d = game.instance.depth;
            let report = scan(ctx, &game, d, d, engine, format.map(Into::into))?;
            let v = &report.rows[0].verdict;
            ctx.emit(v, || format!("{} at depth {d}: {:?} in {:.3}s", game.name, v.status, v.wall_time.as_secs_f64()));
            Ok(0)
        }
        Command::Scan {
            source,
            from,
            to,
            engine,
            format,
        } => {
            let game = source.load(None)?;
            let report = scan(ctx, &game, from, to, engine, format.map(Into::into))?;
            ctx.emit(&report, || {
                let mut s = String::new();
                for row in &report.rows {
                    let v = &row.verdict;
                    s += &format!("depth {:>3}: {:?} ({:.3}s)\n", row.depth, v.status, v.wall_time.as_secs_f64());
                }
                s + &format!("{}: {}", game.name, report.summary())
            });
            Ok(0)
        }
        Command::Play {
            source,
            depth,
            interactive,
            transcript,
        } => {
            let mode = if interactive { Mode::Interactive } else { Mode::Validation };
            play(&source.load(depth)?, mode, transcript.as_deref())
        }
        Command::Serve { addr } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Internal(e.to_string()))?;
            rt.block_on(server::serve(&addr))
                .map_err(|e| CliError::Internal(format!("cannot serve on {addr}: {e}")))?;
            Ok(0)
        }
        Command::EvalQcir { file } => eval_qcir(&file),
    }
}

fn list_models(ctx: &Ctx) -> Result<u8, CliError> {
    let names: Vec<&str> = models::all().iter().map(|m| m.name).collect();
    ctx.emit(&names, || names.join("\n"));
    Ok(0)
}

fn rules(game: &Game) -> Result<Rules, CliError> {
    Rules::new(&game.domain, &game.instance).map_err(|e| CliError::Input(e.to_string()))
}

#[derive(Serialize)]
struct CheckReport {
    diagnostics: Vec<bddl_core::bddl::Diagnostic>,
    sanity: Option<semantics::SanityReport>,
}

fn check(ctx: &Ctx, game: &Game) -> Result<u8, CliError> {
    let diagnostics = validate_instance(&game.domain, &game.instance);
    let errors = diagnostics.iter().any(|d| d.severity == Severity::Error);
    let sanity = if errors {
        None
    } else {
        Some(check_sanity(&rules(game)?, SANITY_BUDGET))
    };
    let insane = matches!(&sanity, Some(r) if matches!(r.outcome, SanityOutcome::Violation(_)));
    let report = CheckReport { diagnostics, sanity };
    ctx.emit(&report, || {
        let mut lines: Vec<String> = report.diagnostics.iter().map(|d| d.to_string()).collect();
        match &report.sanity {
            Some(r) => lines.push(match &r.outcome {
                SanityOutcome::Pass => format!("sanity: pass ({} states)", r.states_explored),
                SanityOutcome::Violation(w) => format!("sanity: violated: {w}"),
                SanityOutcome::BudgetExhausted => {
                    format!("sanity: inconclusive after {} states", r.states_explored)
                }
            }),
            None => lines.push("sanity: skipped".into()),
        }
        lines.push(format!("{}: {}", game.name, if errors || insane { "invalid" } else { "ok" }));
        lines.join("\n")
    });
    Ok(if errors || insane { 2 } else { 0 })
}

fn encoding(game: &Game) -> Result<EncodedInstance, CliError> {
    encode(&game.domain, &game.instance).map_err(|e| CliError::Input(e.to_string()))
}

fn write_encoding(ctx: &Ctx, game: &Game, format: Format, out: Option<&Path>) -> Result<u8, CliError> {
    let enc = encoding(game)?;
    let text = format.render(&enc);
    let stats = enc.circuit.stats();
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
            ctx.emit(&stats, || format!("{}: {stats}", path.display()));
        }
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            eprintln!("{stats}");
        }
    }
    Ok(0)
}

fn oracle(ctx: &Ctx, game: &Game, sequential: bool) -> Result<u8, CliError> {
    let start = Instant::now();
    let r = Arc::new(rules(game)?);
    let result = if sequential {
        semantics::solve_sequential(&r)
    } else {
        semantics::solve(&game.domain, &game.instance).map_err(|e| CliError::Input(e.to_string()))?
    };
    let secs = start.elapsed().as_secs_f64();
    ctx.emit(&result, || {
        let first = result
            .principal_move
            .map(|m| format!(", first move {} ({},{})", r.action_names(m.side)[m.action], m.x, m.y))
            .unwrap_or_default();
        format!(
            "{} at depth {}: Black {}{first} [{} nodes, {secs:.3}s]",
            game.name,
            r.depth(),
            if result.black_wins { "wins" } else { "does not win" },
            result.nodes_expanded
        )
    });
    Ok(0)
}

fn expansion(enc: &EncodedInstance) -> SolverVerdict {
    let start = Instant::now();
    match solve_qbf(&enc.circuit) {
        Ok(b) => SolverVerdict::new(if b { Status::True } else { Status::False }, start.elapsed(), ""),
        Err(e) => SolverVerdict::new(Status::Error, start.elapsed(), e.to_string()),
    }
}

fn scan(
    ctx: &Ctx,
    game: &Game,
    from: u32,
    to: u32,
    engine: Engine,
    format: Option<Format>,
) -> Result<ScanReport, CliError> {
    let scan_err = |e: bddl_core::solver::ScanError| CliError::Usage(e.to_string());
    let (dom, inst) = (&game.domain, &game.instance);
    match engine {
        Engine::Expansion => depth_scan_with(dom, inst, from, to, expansion).map_err(scan_err),
        Engine::Oracle => {
            rules(game)?;
            depth_scan_with(dom, inst, from, to, |enc| {
                let start = Instant::now();
                let inst = inst.with_depth(enc.meta.depth);
                match semantics::solve(dom, &inst) {
                    Ok(r) => SolverVerdict::new(
                        if r.black_wins { Status::True } else { Status::False },
                        start.elapsed(),
                        "",
                    ),
                    Err(e) => SolverVerdict::new(Status::Error, start.elapsed(), e.to_string()),
                }
            })
            .map_err(scan_err)
        }
        Engine::External => {
            let config = SolverConfig::discover(ctx.solver_config.as_deref())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let spec = config.pick(format).ok_or_else(|| {
                CliError::SolverMissing(
                    "no QBF solver configured: set BDDL_QCIR_SOLVER, BDDL_QDIMACS_SOLVER or --solver-config".into(),
                )
            })?;
            let report = depth_scan_with(dom, inst, from, to, |enc| {
                solve_encoding(&spec, enc).unwrap_or_else(|e| {
                    SolverVerdict::new(Status::Error, Duration::ZERO, format!("cannot write formula: {e}"))
                })
            })
            .map_err(scan_err)?;
            if let Some(row) = report.rows.iter().find(|r| r.verdict.raw_output.contains("cannot start")) {
                return Err(CliError::SolverMissing(row.verdict.raw_output.trim().to_string()));
            }
            Ok(report)
        }
    }
}

fn play(game: &Game, mode: Mode, transcript: Option<&Path>) -> Result<u8, CliError> {
    let rules = Arc::new(rules(game)?);
    let mut session = PlaySession::start(rules, mode).map_err(|e| match e {
        PlayError::NoWinningStrategy { .. } => CliError::Input(e.to_string()),
        e => CliError::Internal(e.to_string()),
    })?;
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut out = std::io::stdout();
    println!("You are White. Enter '[action] x y', 'moves' to list legal moves, or 'quit'.");
    loop {
        if let Some(r) = session.history().last().filter(|r| r.mv.side == bddl_core::bddl::Side::Black) {
            println!("Black plays {}", session.describe_move(&r.mv));
        }
        println!("{}", render_board(&session));
        if session.status() != PlayStatus::AwaitingWhite {
            break;
        }
        let line = loop {
            print!("white> ");
            let _ = out.flush();
            match lines.next() {
                Some(Ok(l)) if l.trim() == "moves" => {
                    let all: Vec<String> = session.legal_white_moves().iter().map(|m| session.describe_move(m)).collect();
                    println!("{}", all.join("\n"));
                }
                Some(Ok(l)) if l.trim().is_empty() => {}
                Some(Ok(l)) => break Some(l),
                _ => break None,
            }
        };
        let Some(line) = line.filter(|l| l.trim() != "quit") else {
            println!("play abandoned");
            break;
        };
        let result = session
            .parse_move(&line)
            .and_then(|mv| session.submit_white_move(mv));
        if let Err(e) = result {
            println!("{e}");
        }
    }
    if let Some(path) = transcript {
        let t = serde_json::to_string_pretty(&session.transcript()).expect("serializable");
        std::fs::write(path, t).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(0)
}

fn eval_qcir(file: &Path) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
    let c = parse_qcir(&text).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
    let value = solve_qbf(&c).map_err(|e| CliError::Internal(e.to_string()))?;
    println!("s cnf {}", u8::from(value));
    Ok(if value { 10 } else { 20 })
}
