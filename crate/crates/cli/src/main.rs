//! Command-line front end: solve, cross-check, benchmark, and dump
//! subcommands over the `modalk` library.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modalk::automaton::{self, FormulaAutomaton};
use modalk::inverse::{self, SaturationConfig};
use modalk::oracle::{self, KripkeModel};
use modalk::{parse_nnf, Formula, PathTable, Satisfiability};

/// Meta-command success.
const EXIT_OK: u8 = 0;
/// Usage, parse, or engine error.
const EXIT_ERROR: u8 = 1;
/// Cross-check discrepancy.
const EXIT_DISCREPANCY: u8 = 2;
/// Definite verdicts, following solver tooling convention.
const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;

#[derive(Parser)]
#[command(
    name = "modalk",
    version,
    about = "Satisfiability solver for modal logic K"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one formula and print its verdict
    Solve(SolveArgs),
    /// Run every applicable engine and verify they agree
    Xcheck(XcheckArgs),
    /// Solve every `.k` file in a directory and tabulate the results
    Bench(BenchArgs),
    /// Print the path table of a formula
    DumpPaths(DumpPathsArgs),
    /// Print the formula automaton of a formula
    DumpAutomaton(DumpAutomatonArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Unrestricted saturation of the inverse calculus
    Inverse,
    /// Saturation with ordering restrictions and redundancy filtering
    InverseOpt,
    /// Explicit formula-automaton construction plus emptiness test
    Automata,
    /// Depth-first tableau oracle (no global axioms)
    Tableau,
    /// Type-elimination oracle (desk-scale inputs only)
    TypeElim,
}

impl Engine {
    fn name(self) -> &'static str {
        match self {
            Engine::Inverse => "inverse",
            Engine::InverseOpt => "inverse-opt",
            Engine::Automata => "automata",
            Engine::Tableau => "tableau",
            Engine::TypeElim => "type-elim",
        }
    }
}

/// Formula argument: inline text, or `file:<path>` to read from disk.
#[derive(Args)]
struct InputArgs {
    /// Formula to decide, inline or as `file:<path>`
    input: String,
}

#[derive(Args)]
struct AxiomArgs {
    /// Global axiom, inline (holds at every world)
    #[arg(long, conflicts_with = "axiom_file")]
    axiom: Option<String>,
    /// Read the global axiom from a file
    #[arg(long)]
    axiom_file: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Cap on kept sequents for the saturation engines
    #[arg(long, value_name = "N")]
    budget_seq: Option<usize>,
    /// Cap on attempted inferences for the saturation engines
    #[arg(long, value_name = "N")]
    budget_inf: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Decision engine
    #[arg(long, value_enum, default_value_t = Engine::InverseOpt)]
    engine: Engine,
    #[command(flatten)]
    axiom: AxiomArgs,
    /// Print the refutation trace (saturation engines, UNSAT only)
    #[arg(long)]
    trace: bool,
    /// Print a witness model (oracle engines, SAT only)
    #[arg(long)]
    model: bool,
    /// Suppress timing fields for byte-identical reruns
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct XcheckArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    axiom: AxiomArgs,
    /// Additionally compare the saturation closure with the automaton's
    /// inactive states, state for state (no global axiom only)
    #[arg(long)]
    deep: bool,
    /// Suppress timing fields for byte-identical reruns
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of `.k` formula files (optional sibling `.ax` axioms)
    dir: PathBuf,
    /// Decision engine
    #[arg(long, value_enum, default_value_t = Engine::InverseOpt)]
    engine: Engine,
    /// Exit 0 even when some rows error
    #[arg(long)]
    keep_going: bool,
    /// Suppress timing fields for byte-identical reruns
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct DumpPathsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    axiom: AxiomArgs,
}

#[derive(Args)]
struct DumpAutomatonArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    axiom: AxiomArgs,
    /// Build the reduced automaton instead of the full one
    #[arg(long)]
    reduced: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are successful meta-commands; everything else
            // is a usage error
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Xcheck(args) => cmd_xcheck(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::DumpPaths(args) => cmd_dump_paths(&args),
        Command::DumpAutomaton(args) => cmd_dump_automaton(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

/// Resolve an input argument: `file:<path>` reads the file, anything else is
/// the formula text itself. Returns the report name and the parsed formula.
fn read_input(spec: &str) -> Result<(String, Formula), String> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        let g = parse_formula(text.trim(), path)?;
        Ok((path.to_string(), g))
    } else {
        Ok(("-".to_string(), parse_formula(spec, "input")?))
    }
}

fn parse_formula(text: &str, what: &str) -> Result<Formula, String> {
    parse_nnf(text).map_err(|e| format!("{what}: {e}"))
}

fn read_axiom(args: &AxiomArgs) -> Result<Option<Formula>, String> {
    match (&args.axiom, &args.axiom_file) {
        (Some(text), None) => Ok(Some(parse_formula(text, "axiom")?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            Ok(Some(parse_formula(
                text.trim(),
                &path.display().to_string(),
            )?))
        }
        (None, None) => Ok(None),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    }
}

fn saturation_config(engine: Engine, t: &PathTable, budget: &BudgetArgs) -> SaturationConfig {
    let mut cfg = match engine {
        Engine::Inverse => SaturationConfig::plain(),
        Engine::InverseOpt => SaturationConfig::optimized(t),
        _ => unreachable!("only the saturation engines take a config"),
    };
    if let Some(n) = budget.budget_seq {
        cfg.max_kept = n;
    }
    if let Some(n) = budget.budget_inf {
        cfg.max_inferences = n;
    }
    cfg
}

/// What one engine produced, beyond the verdict itself.
struct EngineRun {
    verdict: &'static str,
    /// sequents kept or states built or worlds created, per engine
    seqs: usize,
    /// inferences attempted (saturation engines only)
    infs: usize,
    outcome: Option<Satisfiability>,
    trace: Option<String>,
    model: Option<(KripkeModel, usize)>,
}

impl EngineRun {
    fn verdict(v: Satisfiability) -> EngineRun {
        EngineRun {
            verdict: match v {
                Satisfiability::Sat => "SAT",
                Satisfiability::Unsat => "UNSAT",
            },
            seqs: 0,
            infs: 0,
            outcome: Some(v),
            trace: None,
            model: None,
        }
    }

    fn inconclusive() -> EngineRun {
        EngineRun {
            verdict: "INCONCLUSIVE",
            seqs: 0,
            infs: 0,
            outcome: None,
            trace: None,
            model: None,
        }
    }
}

/// Run one engine on a parsed problem. `Err` means the engine refused the
/// input (structural limits or unsupported mode), not that it crashed.
fn run_engine(
    engine: Engine,
    g: &Formula,
    h: Option<&Formula>,
    t: &PathTable,
    budget: &BudgetArgs,
) -> Result<EngineRun, String> {
    match engine {
        Engine::Inverse | Engine::InverseOpt => {
            let cfg = saturation_config(engine, t, budget);
            match inverse::decide(t, &cfg) {
                Ok(d) => {
                    let mut run = EngineRun::verdict(d.verdict);
                    run.seqs = d.closure.stats().kept;
                    run.infs = d.closure.stats().attempted;
                    run.trace = d.goal.map(|goal| d.closure.trace_lines(goal));
                    Ok(run)
                }
                Err(e) => {
                    eprintln!("note: {e}");
                    Ok(EngineRun::inconclusive())
                }
            }
        }
        Engine::Automata => {
            let a = automaton::build(t, false).map_err(|e| e.to_string())?;
            let verdict = if a.is_empty() {
                Satisfiability::Unsat
            } else {
                Satisfiability::Sat
            };
            let mut run = EngineRun::verdict(verdict);
            run.seqs = a.len();
            Ok(run)
        }
        Engine::Tableau => {
            if h.is_some() {
                return Err("engine tableau does not support global axioms".to_string());
            }
            let out = oracle::decide_tableau(g);
            let verdict = if out.satisfiable {
                Satisfiability::Sat
            } else {
                Satisfiability::Unsat
            };
            let mut run = EngineRun::verdict(verdict);
            run.seqs = out.model.as_ref().map_or(0, |(m, _)| m.worlds.len());
            run.model = out.model;
            Ok(run)
        }
        Engine::TypeElim => {
            let out = oracle::decide_type_elimination(g, h).map_err(|e| e.to_string())?;
            let verdict = if out.satisfiable {
                Satisfiability::Sat
            } else {
                Satisfiability::Unsat
            };
            let mut run = EngineRun::verdict(verdict);
            run.seqs = out.model.as_ref().map_or(0, |(m, _)| m.worlds.len());
            run.model = out.model;
            Ok(run)
        }
    }
}

fn report_line(
    name: &str,
    engine: &str,
    run: &EngineRun,
    started: Instant,
    no_timing: bool,
) -> String {
    let mut line = format!(
        "file={name} engine={engine} verdict={} seqs={} infs={}",
        run.verdict, run.seqs, run.infs
    );
    if !no_timing {
        let _ = write!(line, " ms={}", started.elapsed().as_millis());
    }
    line
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, String> {
    let (name, g) = read_input(&args.input.input)?;
    let h = read_axiom(&args.axiom)?;
    let t = PathTable::build(&g, h.as_ref());
    let started = Instant::now();
    let run = run_engine(args.engine, &g, h.as_ref(), &t, &args.budget)?;
    println!(
        "{}",
        report_line(&name, args.engine.name(), &run, started, args.no_timing)
    );
    if args.trace {
        match &run.trace {
            Some(trace) => print!("{trace}"),
            None => eprintln!("note: no refutation trace (saturation engines record one on UNSAT)"),
        }
    }
    if args.model {
        match &run.model {
            Some((m, root)) => {
                println!("model root={root}");
                print!("{}", m.dump());
            }
            None => eprintln!("note: no witness model (oracle engines produce one on SAT)"),
        }
    }
    Ok(match run.outcome {
        Some(Satisfiability::Sat) => EXIT_SAT,
        Some(Satisfiability::Unsat) => EXIT_UNSAT,
        None => EXIT_OK,
    })
}

fn cmd_xcheck(args: &XcheckArgs) -> Result<u8, String> {
    let (name, g) = read_input(&args.input.input)?;
    let h = read_axiom(&args.axiom)?;
    let t = PathTable::build(&g, h.as_ref());
    let engines: &[Engine] = if h.is_some() {
        &[Engine::Inverse, Engine::Automata, Engine::TypeElim]
    } else {
        &[
            Engine::Inverse,
            Engine::InverseOpt,
            Engine::Automata,
            Engine::Tableau,
        ]
    };
    let mut verdicts: Vec<(&'static str, Satisfiability)> = Vec::new();
    for &engine in engines {
        let started = Instant::now();
        match run_engine(engine, &g, h.as_ref(), &t, &args.budget) {
            Ok(run) => {
                println!(
                    "{}",
                    report_line(&name, engine.name(), &run, started, args.no_timing)
                );
                if let Some(v) = run.outcome {
                    verdicts.push((engine.name(), v));
                }
            }
            Err(e) => eprintln!("note: {} skipped: {e}", engine.name()),
        }
    }
    if verdicts.len() < 2 {
        return Err("fewer than two engines produced a verdict; nothing to cross-check".into());
    }
    let agreed = verdicts.iter().all(|&(_, v)| v == verdicts[0].1);
    if !agreed {
        let detail: Vec<String> = verdicts.iter().map(|(e, v)| format!("{e}={v}")).collect();
        println!("DISAGREE ({})", detail.join(" "));
        return Ok(EXIT_DISCREPANCY);
    }
    let mut deep_checks = 0;
    if args.deep {
        match deep_state_check(&t, h.is_some(), &args.budget) {
            Ok(Some(detail)) => {
                if !detail.is_empty() {
                    println!("DEEP MISMATCH {detail}");
                    return Ok(EXIT_DISCREPANCY);
                }
                deep_checks = 1;
            }
            Ok(None) => {}
            Err(e) => eprintln!("note: deep check skipped: {e}"),
        }
    }
    if deep_checks > 0 {
        println!(
            "AGREE ({} engines, deep: {deep_checks} state-set equality)",
            verdicts.len()
        );
    } else {
        println!("AGREE ({} engines)", verdicts.len());
    }
    Ok(EXIT_OK)
}

/// Compare the concretization of the full saturation closure against the
/// automaton's inactive states. `Ok(Some(""))` means they match; a nonempty
/// string carries the discrepancy; `Ok(None)` means the check does not apply.
fn deep_state_check(
    t: &PathTable,
    axiom_mode: bool,
    budget: &BudgetArgs,
) -> Result<Option<String>, String> {
    if axiom_mode {
        return Err("state-set equality holds for plain formulas only".to_string());
    }
    let a = automaton::build(t, false).map_err(|e| e.to_string())?;
    let cfg = saturation_config(Engine::Inverse, t, budget);
    let closure = inverse::saturate(t, &cfg);
    if !closure.complete() {
        return Err("saturation hit its budget before a fixpoint".to_string());
    }
    let lifted = inverse::concretization(closure.sequents(), &a);
    let inactive: BTreeSet<_> = a
        .state_ids()
        .filter(|&s| a.inactive_closure().contains(s))
        .collect();
    if lifted == inactive {
        Ok(Some(String::new()))
    } else {
        let only_closure: Vec<String> = lifted
            .difference(&inactive)
            .map(|s| s.to_string())
            .collect();
        let only_automaton: Vec<String> = inactive
            .difference(&lifted)
            .map(|s| s.to_string())
            .collect();
        Ok(Some(format!(
            "(closure-only states: [{}]; automaton-only states: [{}])",
            only_closure.join(","),
            only_automaton.join(",")
        )))
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<u8, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(&args.dir)
        .map_err(|e| format!("cannot read {}: {e}", args.dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "k"))
        .collect();
    files.sort();
    let mut tally = [0usize; 4]; // sat, unsat, error, inconclusive
    let started = Instant::now();
    for path in &files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let row_start = Instant::now();
        match bench_row(path, args) {
            Ok(run) => {
                println!(
                    "{}",
                    report_line(&name, args.engine.name(), &run, row_start, args.no_timing)
                );
                match run.outcome {
                    Some(Satisfiability::Sat) => tally[0] += 1,
                    Some(Satisfiability::Unsat) => tally[1] += 1,
                    None => tally[3] += 1,
                }
            }
            Err(e) => {
                eprintln!("note: {name}: {e}");
                let run = EngineRun {
                    verdict: "ERROR",
                    seqs: 0,
                    infs: 0,
                    outcome: None,
                    trace: None,
                    model: None,
                };
                println!(
                    "{}",
                    report_line(&name, args.engine.name(), &run, row_start, args.no_timing)
                );
                tally[2] += 1;
            }
        }
    }
    let mut summary = format!(
        "total={} sat={} unsat={} error={} inconclusive={}",
        files.len(),
        tally[0],
        tally[1],
        tally[2],
        tally[3]
    );
    if !args.no_timing {
        let _ = write!(summary, " ms={}", started.elapsed().as_millis());
    }
    println!("{summary}");
    if tally[2] > 0 && !args.keep_going {
        Ok(EXIT_ERROR)
    } else {
        Ok(EXIT_OK)
    }
}

fn bench_row(path: &Path, args: &BenchArgs) -> Result<EngineRun, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let g = parse_formula(text.trim(), &path.display().to_string())?;
    let axiom_path = path.with_extension("ax");
    let h = if axiom_path.exists() {
        let text = std::fs::read_to_string(&axiom_path)
            .map_err(|e| format!("cannot read {}: {e}", axiom_path.display()))?;
        Some(parse_formula(
            text.trim(),
            &axiom_path.display().to_string(),
        )?)
    } else {
        None
    };
    let t = PathTable::build(&g, h.as_ref());
    run_engine(args.engine, &g, h.as_ref(), &t, &args.budget)
}

fn cmd_dump_paths(args: &DumpPathsArgs) -> Result<u8, String> {
    let (_, g) = read_input(&args.input.input)?;
    let h = read_axiom(&args.axiom)?;
    let t = PathTable::build(&g, h.as_ref());
    print!("{}", t.dump());
    Ok(EXIT_OK)
}

fn cmd_dump_automaton(args: &DumpAutomatonArgs) -> Result<u8, String> {
    let (_, g) = read_input(&args.input.input)?;
    let h = read_axiom(&args.axiom)?;
    let t = PathTable::build(&g, h.as_ref());
    let a: FormulaAutomaton = automaton::build(&t, args.reduced).map_err(|e| e.to_string())?;
    print!("{}", a.dump());
    Ok(EXIT_OK)
}
