//! `ltlfmt`: satisfiability checking for LTL over finite traces modulo
//! theories.
//!
//! Exit codes: 0 SAT, 1 UNSAT, 2 UNKNOWN, 3 usage or input error, 4 backend
//! failure or engine disagreement.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use ltlfmt::bench::{gen_benchmark, gen_source, Family, TransitionSystem};
use ltlfmt::formula::{Signature, TemporalFormula};
use ltlfmt::parser::parse;
use ltlfmt::semantics::trace_to_json;
use ltlfmt::smt::SolverConfig;
use ltlfmt::solver::{solve, Engine, SolveError, SolveOptions, SolveOutcome, SolveReport, Verdict};

const SAT: u8 = 0;
const UNSAT: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;
const BACKEND: u8 = 4;

#[derive(Parser)]
#[command(name = "ltlfmt", version, about = "LTLf modulo theories satisfiability checker")]
struct Cli {
    /// Solver command line (default: $LTLFMT_SOLVER or `z3 -in`)
    #[arg(long, global = true)]
    solver: Option<String>,
    /// SMT-LIB logic; inferred from the formula when absent
    #[arg(long, global = true)]
    logic: Option<String>,
    /// Largest unraveling depth; 0 means unbounded
    #[arg(long, global = true, default_value_t = 300)]
    max_k: usize,
    #[arg(long, global = true, value_enum, default_value_t = EngineArg::Encoding)]
    engine: EngineArg,
    /// Per-check solver timeout in seconds
    #[arg(long, global = true, default_value_t = 60.0)]
    timeout: f64,
    /// Write every command sent to the solver to this file
    #[arg(long, global = true)]
    dump_smt: Option<PathBuf>,
    /// Write the explored tableau as a DOT graph (tableau engine)
    #[arg(long, global = true)]
    dump_tableau: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Encoding,
    Tableau,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a `.ltlmt` file with a `formula:` item
    Solve {
        file: PathBuf,
        /// Print the witness trace as JSON
        #[arg(long)]
        model: bool,
        /// Check the witness against the formula
        #[arg(long)]
        verify: bool,
    },
    /// Decide a transition system given by `init:`, `trans:` and `property:`
    CheckTs {
        file: PathBuf,
        #[arg(long)]
        model: bool,
        #[arg(long)]
        verify: bool,
    },
    /// Run a benchmark family and print CSV rows `family,N,result,k,wall_ms`
    Bench {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Verify every witness; failures are reported as INVALID
        #[arg(long)]
        verify: bool,
        /// Instances run in parallel
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print a benchmark instance as a `.ltlmt` file
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
}

impl Cli {
    fn options(&self) -> SolveOptions {
        let mut backend = match &self.solver {
            Some(cmd) => SolverConfig::command(cmd),
            None => SolverConfig::from_env(),
        };
        backend.logic = self.logic.clone();
        backend.transcript = self.dump_smt.clone();
        let timeout = (self.timeout > 0.0).then(|| Duration::from_secs_f64(self.timeout));
        SolveOptions {
            max_k: self.max_k,
            backend,
            verify_witness: false,
            engine: match self.engine {
                EngineArg::Encoding => Engine::Encoding,
                EngineArg::Tableau => Engine::Tableau,
                EngineArg::Both => Engine::Both,
            },
            timeout,
            dump_tableau: self.dump_tableau.clone(),
        }
    }
}

fn exit_code(o: &SolveOutcome) -> u8 {
    match o {
        SolveOutcome::Sat { .. } => SAT,
        SolveOutcome::Unsat { .. } => UNSAT,
        SolveOutcome::Unknown(_) => UNKNOWN,
    }
}

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        USAGE
    })
}

fn failure(e: SolveError) -> u8 {
    eprintln!("error: {e}");
    match e {
        SolveError::Formula(_) => USAGE,
        _ => BACKEND,
    }
}

fn report(r: &SolveReport, model: bool) -> io::Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", r.outcome)?;
    if let Some(v) = &r.verdict {
        writeln!(out, "{v}")?;
    }
    if let (true, SolveOutcome::Sat { trace, .. }) = (model, &r.outcome) {
        if !r.model_incomplete.is_empty() {
            writeln!(out, "model-incomplete: {}", r.model_incomplete.join(", "))?;
        }
        writeln!(out, "{}", trace_to_json(trace))?;
    }
    Ok(())
}

fn decide(phi: &TemporalFormula, sig: &Signature, opts: SolveOptions, model: bool) -> u8 {
    let r = match solve(phi, sig, &opts) {
        Ok(r) => r,
        Err(e) => return failure(e),
    };
    if let Err(e) = report(&r, model) {
        eprintln!("error: {e}");
        return BACKEND;
    }
    match r.verdict {
        Some(Verdict::Invalid) => {
            eprintln!("error: the witness does not satisfy the formula");
            BACKEND
        }
        _ => exit_code(&r.outcome),
    }
}

fn bench(family: Family, range: (usize, usize), verify: bool, jobs: usize, opts: SolveOptions) -> u8 {
    let writer = Mutex::new(csv::Writer::from_writer(io::stdout()));
    let write = |row: [String; 5]| {
        let mut w = writer.lock().expect("csv writer");
        let _ = w.write_record(&row);
        let _ = w.flush();
    };
    write(["family", "N", "result", "k", "wall_ms"].map(String::from));
    let next = Mutex::new(range.0);
    let failed = Mutex::new(false);
    thread::scope(|scope| {
        for _ in 0..jobs.max(1) {
            scope.spawn(|| loop {
                let n = {
                    let mut next = next.lock().expect("counter");
                    if *next > range.1 {
                        return;
                    }
                    *next += 1;
                    *next - 1
                };
                let (sig, phi) = gen_benchmark(family, n);
                let mut o = opts.clone();
                o.verify_witness = verify;
                let start = Instant::now();
                let result = solve(&phi, &sig, &o);
                let ms = start.elapsed().as_millis().to_string();
                let (result, k) = match result {
                    Ok(r) => {
                        let k = r.outcome.k().map(|k| k.to_string()).unwrap_or_default();
                        let label = match (&r.outcome, &r.verdict) {
                            (_, Some(Verdict::Invalid)) => "INVALID".to_string(),
                            (SolveOutcome::Unknown(_), _) => "UNKNOWN".to_string(),
                            (o, _) => o.to_string(),
                        };
                        (label, k)
                    }
                    Err(e) => {
                        eprintln!("error: {family} N={n}: {e}");
                        *failed.lock().expect("flag") = true;
                        ("ERROR".to_string(), String::new())
                    }
                };
                write([family.to_string(), n.to_string(), result, k, ms]);
            });
        }
    });
    if failed.into_inner().expect("flag") {
        BACKEND
    } else {
        SAT
    }
}

fn run(cli: Cli) -> u8 {
    let mut opts = cli.options();
    match cli.command {
        Command::Solve { file, model, verify } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match parse(&text) {
                Ok((sig, phi)) => {
                    opts.verify_witness = verify;
                    decide(&phi, &sig, opts, model)
                }
                Err(e) => {
                    eprintln!("{}", e.with_file(&file.display().to_string()));
                    USAGE
                }
            }
        }
        Command::CheckTs { file, model, verify } => {
            let text = match read(&file) {
                Ok(t) => t,
                Err(code) => return code,
            };
            let compiled = TransitionSystem::parse(&text).and_then(|ts| Ok((ts.compile()?, ts.signature)));
            match compiled {
                Ok((phi, sig)) => {
                    opts.verify_witness = verify;
                    decide(&phi, &sig, opts, model)
                }
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    USAGE
                }
            }
        }
        Command::Bench { family, from, to, verify, jobs } => {
            opts.backend.transcript = None;
            opts.dump_tableau = None;
            bench(family, (from, to), verify, jobs, opts)
        }
        Command::Gen { family, n } => {
            print!("{}", gen_source(family, n));
            SAT
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { SAT };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}
