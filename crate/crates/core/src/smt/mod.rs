//! Incremental SMT sessions over an external solver process speaking the
//! SMT-LIB 2.6 text protocol on its standard input and output.

mod emit;
mod logic;
mod sexpr;

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::encoder::{GroundFormula, SteppedSymbol};
use crate::formula::{Signature, Sort};

pub use emit::{element_name, quote, rational_text, sort_text, value_text, Emitter};
pub use logic::infer_logic;
pub use sexpr::{parse_sexprs, SExpr, SExprError, SExprReader};

/// Extra time granted past the solver's own limit before the process is
/// considered hung and killed.
const GRACE: Duration = Duration::from_millis(2000);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub executable: PathBuf,
    pub args: Vec<String>,
    /// `None` leaves the logic unset.
    pub logic: Option<String>,
    /// Per-check limit in milliseconds.
    pub timeout_ms: Option<u64>,
    /// Copy of every command sent, one per line.
    pub transcript: Option<PathBuf>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            executable: PathBuf::from("z3"),
            args: vec!["-in".into()],
            logic: None,
            timeout_ms: None,
            transcript: None,
        }
    }
}

impl SolverConfig {
    /// Default configuration, honouring `LTLFMT_SOLVER` (an executable
    /// followed by its arguments, whitespace separated).
    pub fn from_env() -> Self {
        match std::env::var("LTLFMT_SOLVER") {
            Ok(cmd) if !cmd.trim().is_empty() => SolverConfig::command(&cmd),
            _ => SolverConfig::default(),
        }
    }

    /// Configuration for a solver command line such as `"z3 -in"`.
    pub fn command(cmd: &str) -> Self {
        let mut parts = cmd.split_whitespace().map(String::from);
        let executable = PathBuf::from(parts.next().unwrap_or_else(|| "z3".into()));
        let mut args: Vec<String> = parts.collect();
        if args.is_empty() && executable.file_name().is_some_and(|n| n == "z3") {
            args.push("-in".into());
        }
        SolverConfig { executable, args, ..SolverConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Sat,
    Unsat,
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmtError {
    #[error("cannot start solver `{executable}`: {message}")]
    Spawn { executable: String, message: String },
    #[error("solver handshake failed: {0}")]
    Handshake(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("solver process exited unexpectedly")]
    Died,
    #[error("solver I/O: {0}")]
    Io(String),
    #[error("unexpected solver response `{0}`")]
    Protocol(String),
    #[error("cannot serialize: {0}")]
    Unsupported(String),
    #[error("no model available: the last check was not sat")]
    NoModel,
    #[error("session unusable after a killed check")]
    Closed,
}

/// A value read back from a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelValue {
    Bool(bool),
    Num(BigRational),
    /// Solver-specific abstract element, e.g. `T!val!0`.
    Element(String),
}

/// One solver process with scoped declarations.
pub struct Session {
    child: Child,
    stdin: BufWriter<ChildStdin>,
    responses: Receiver<Result<SExpr, String>>,
    transcript: Option<BufWriter<File>>,
    sig: Signature,
    /// Symbols declared at each assertion level; index 0 is the base level.
    declared: Vec<HashSet<String>>,
    timeout: Option<Duration>,
    last: Option<CheckResult>,
    dead: bool,
    pub checks: usize,
}

impl Session {
    /// Starts the solver, performs the handshake, sets the logic and
    /// declares every symbol of `sig`.
    pub fn open(cfg: &SolverConfig, sig: &Signature) -> Result<Session, SmtError> {
        let mut s = Session::spawn(cfg)?;
        s.sig = sig.clone();
        s.declare_signature()?;
        Ok(s)
    }

    /// A session whose constants, functions and predicates are fixed by
    /// `definitions` (as returned by [`Session::user_definitions`]); user
    /// symbols the definitions omit are declared free.
    pub fn open_with_definitions(
        cfg: &SolverConfig,
        sig: &Signature,
        definitions: &[String],
    ) -> Result<Session, SmtError> {
        let mut s = Session::spawn(cfg)?;
        s.sig = sig.clone();
        for sort in &sig.sorts {
            s.command(&format!("(declare-sort {} 0)", quote(sort)))?;
        }
        let mut defined = HashSet::new();
        for d in definitions {
            s.command(d)?;
            if let Ok(exprs) = parse_sexprs(d) {
                if let Some([_, SExpr::Symbol(name), ..]) = exprs.first().and_then(SExpr::list) {
                    defined.insert(name.clone());
                }
            }
        }
        let mut rest = sig.clone();
        rest.sorts.clear();
        rest.constants.retain(|c, _| !defined.contains(c));
        rest.functions.retain(|f, _| !defined.contains(f));
        rest.predicates.retain(|p, _| !defined.contains(p));
        std::mem::swap(&mut s.sig, &mut rest);
        let declared = s.declare_signature();
        std::mem::swap(&mut s.sig, &mut rest);
        declared?;
        Ok(s)
    }

    fn spawn(cfg: &SolverConfig) -> Result<Session, SmtError> {
        let mut child = Command::new(&cfg.executable)
            .args(&cfg.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| SmtError::Spawn {
                executable: cfg.executable.display().to_string(),
                message: e.to_string(),
            })?;
        let stdin = BufWriter::new(child.stdin.take().expect("piped stdin"));
        let mut stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            let mut reader = SExprReader::new();
            let mut chunk = [0u8; 8192];
            loop {
                match stdout.read(&mut chunk) {
                    Ok(0) | Err(_) => break,
                    Ok(n) => {
                        reader.feed(&chunk[..n]);
                        loop {
                            match reader.next_expr() {
                                Ok(Some(e)) => {
                                    if tx.send(Ok(e)).is_err() {
                                        return;
                                    }
                                }
                                Ok(None) => break,
                                Err(e) => {
                                    let _ = tx.send(Err(e.to_string()));
                                    break;
                                }
                            }
                        }
                    }
                }
            }
        });
        let transcript = match &cfg.transcript {
            Some(path) => Some(BufWriter::new(File::create(path).map_err(|e| SmtError::Io(e.to_string()))?)),
            None => None,
        };
        let mut s = Session {
            child,
            stdin,
            responses: rx,
            transcript,
            sig: Signature::new(),
            declared: vec![HashSet::new()],
            timeout: cfg.timeout_ms.map(Duration::from_millis),
            last: None,
            dead: false,
            checks: 0,
        };
        s.send("(set-option :print-success true)")?;
        match s.receive(Some(Duration::from_secs(10))) {
            Ok(Some(e)) if e.is_symbol("success") => {}
            Ok(Some(e)) => return Err(SmtError::Handshake(e.to_string())),
            Ok(None) => return Err(SmtError::Handshake("no answer".into())),
            Err(e) => return Err(SmtError::Handshake(e.to_string())),
        }
        s.command("(set-option :produce-models true)")?;
        if let Some(ms) = cfg.timeout_ms {
            s.option(&format!("(set-option :timeout {ms})"))?;
        }
        if let Some(logic) = &cfg.logic {
            s.command(&format!("(set-logic {logic})"))?;
        }
        Ok(s)
    }

    fn declare_signature(&mut self) -> Result<(), SmtError> {
        let sig = self.sig.clone();
        for sort in &sig.sorts {
            self.command(&format!("(declare-sort {} 0)", quote(sort)))?;
        }
        for (c, s) in &sig.constants {
            self.command(&format!("(declare-fun {} () {})", quote(c), sort_text(s)))?;
        }
        for (f, fs) in &sig.functions {
            let args: Vec<_> = fs.args.iter().map(sort_text).collect();
            self.command(&format!("(declare-fun {} ({}) {})", quote(f), args.join(" "), sort_text(&fs.result)))?;
        }
        for (p, sorts) in &sig.predicates {
            let args: Vec<_> = sorts.iter().map(sort_text).collect();
            self.command(&format!("(declare-fun {} ({}) Bool)", quote(p), args.join(" ")))?;
        }
        Ok(())
    }

    fn send(&mut self, cmd: &str) -> Result<(), SmtError> {
        if self.dead {
            return Err(SmtError::Closed);
        }
        if let Some(t) = &mut self.transcript {
            let _ = writeln!(t, "{cmd}");
        }
        let io = |e: std::io::Error| SmtError::Io(e.to_string());
        writeln!(self.stdin, "{cmd}").map_err(io)?;
        self.stdin.flush().map_err(io)
    }

    /// Waits for one response; `Ok(None)` on timeout.
    fn receive(&mut self, limit: Option<Duration>) -> Result<Option<SExpr>, SmtError> {
        let r = match limit {
            Some(d) => match self.responses.recv_timeout(d) {
                Ok(r) => r,
                Err(RecvTimeoutError::Timeout) => return Ok(None),
                Err(RecvTimeoutError::Disconnected) => return Err(SmtError::Died),
            },
            None => self.responses.recv().map_err(|_| SmtError::Died)?,
        };
        r.map(Some).map_err(SmtError::Protocol)
    }

    fn expect_response(&mut self) -> Result<SExpr, SmtError> {
        match self.receive(Some(Duration::from_secs(60)))? {
            Some(e) => Ok(e),
            None => Err(SmtError::Protocol("no answer within 60s".into())),
        }
    }

    fn error_text(e: &SExpr) -> Option<String> {
        let items = e.list()?;
        if items.len() == 2 && items[0].is_symbol("error") {
            return Some(match &items[1] {
                SExpr::Str(s) => s.clone(),
                other => other.to_string(),
            });
        }
        None
    }

    /// Sends a command that must answer `success`; anything else is
    /// surfaced verbatim.
    pub fn command(&mut self, cmd: &str) -> Result<(), SmtError> {
        self.send(cmd)?;
        let e = self.expect_response()?;
        if e.is_symbol("success") {
            return Ok(());
        }
        Err(SmtError::Solver(Session::error_text(&e).unwrap_or_else(|| format!("{e} (for {cmd})"))))
    }

    /// An option the solver may legitimately not support.
    fn option(&mut self, cmd: &str) -> Result<(), SmtError> {
        self.send(cmd)?;
        let e = self.expect_response()?;
        if e.is_symbol("success") || e.is_symbol("unsupported") {
            return Ok(());
        }
        Err(SmtError::Solver(Session::error_text(&e).unwrap_or_else(|| e.to_string())))
    }

    /// Sends arbitrary text made of complete commands, each answering
    /// `success` (used to replay model definitions).
    pub fn raw(&mut self, commands: &[String]) -> Result<(), SmtError> {
        for c in commands {
            self.command(c)?;
        }
        Ok(())
    }

    fn is_declared_name(&self, name: &str) -> bool {
        self.declared.iter().any(|level| level.contains(name))
    }

    /// Whether `s` has been declared in a live scope.
    pub fn is_declared(&self, s: &SteppedSymbol) -> bool {
        self.is_declared_name(&s.to_string())
    }

    /// Declares `s` at the current level unless already visible.
    pub fn declare(&mut self, s: &SteppedSymbol) -> Result<(), SmtError> {
        let name = s.to_string();
        if self.is_declared_name(&name) {
            return Ok(());
        }
        let sort = match s {
            SteppedSymbol::Var(..) => sort_text(&Emitter::new(&self.sig).symbol_sort(s)?),
            _ => "Bool".into(),
        };
        self.command(&format!("(declare-fun {} () {sort})", quote(&name)))?;
        self.declared.last_mut().expect("base level").insert(name);
        Ok(())
    }

    pub fn assert_formula(&mut self, g: &GroundFormula) -> Result<(), SmtError> {
        let text = Emitter::new(&self.sig).formula(g)?;
        for s in g.symbols() {
            self.declare(&s)?;
        }
        self.command(&format!("(assert {text})"))
    }

    pub fn push(&mut self) -> Result<(), SmtError> {
        self.command("(push 1)")?;
        self.declared.push(HashSet::new());
        Ok(())
    }

    pub fn pop(&mut self) -> Result<(), SmtError> {
        if self.declared.len() == 1 {
            return Err(SmtError::Protocol("pop without matching push".into()));
        }
        self.command("(pop 1)")?;
        self.declared.pop();
        self.last = None;
        Ok(())
    }

    /// Assertion-scope depth.
    pub fn depth(&self) -> usize {
        self.declared.len() - 1
    }

    /// Overrides the per-check limit for subsequent checks.
    pub fn set_timeout(&mut self, limit: Option<Duration>) -> Result<(), SmtError> {
        if limit != self.timeout {
            if let Some(d) = limit {
                self.option(&format!("(set-option :timeout {})", d.as_millis().max(1)))?;
            }
            self.timeout = limit;
        }
        Ok(())
    }

    pub fn check(&mut self) -> Result<CheckResult, SmtError> {
        self.send("(check-sat)")?;
        self.checks += 1;
        let started = Instant::now();
        let answer = match self.receive(self.timeout.map(|d| d + GRACE))? {
            Some(e) => e,
            None => {
                // the solver ignored its own limit
                let _ = self.child.kill();
                self.dead = true;
                self.last = Some(CheckResult::Unknown("timeout".into()));
                return Ok(CheckResult::Unknown("timeout".into()));
            }
        };
        let result = match answer.symbol() {
            Some("sat") => CheckResult::Sat,
            Some("unsat") => CheckResult::Unsat,
            Some("unknown") => {
                let reason = self.reason_unknown()?;
                let timed_out = reason.contains("timeout")
                    || reason.contains("canceled")
                    || self.timeout.is_some_and(|d| started.elapsed() >= d);
                CheckResult::Unknown(if timed_out { "timeout".into() } else { reason })
            }
            _ => {
                return Err(SmtError::Solver(Session::error_text(&answer).unwrap_or_else(|| answer.to_string())));
            }
        };
        self.last = Some(result.clone());
        Ok(result)
    }

    fn reason_unknown(&mut self) -> Result<String, SmtError> {
        self.send("(get-info :reason-unknown)")?;
        let e = self.expect_response()?;
        Ok(match e.list() {
            Some([_, SExpr::Str(s)]) => s.clone(),
            Some([_, v]) => v.to_string(),
            _ => e.to_string(),
        })
    }

    /// Values of the given SMT-LIB terms in the current model.
    pub fn get_values(&mut self, terms: &[String]) -> Result<Vec<ModelValue>, SmtError> {
        if self.last != Some(CheckResult::Sat) {
            return Err(SmtError::NoModel);
        }
        if terms.is_empty() {
            return Ok(Vec::new());
        }
        self.send(&format!("(get-value ({}))", terms.join(" ")))?;
        let e = self.expect_response()?;
        if let Some(msg) = Session::error_text(&e) {
            return Err(SmtError::Solver(msg));
        }
        let pairs = e.list().ok_or_else(|| SmtError::Protocol(e.to_string()))?;
        if pairs.len() != terms.len() {
            return Err(SmtError::Protocol(e.to_string()));
        }
        pairs
            .iter()
            .map(|p| match p.list() {
                Some([_, v]) => parse_model_value(v).ok_or_else(|| SmtError::Protocol(v.to_string())),
                _ => Err(SmtError::Protocol(p.to_string())),
            })
            .collect()
    }

    /// Values of stepped symbols, by name.
    pub fn model_values(&mut self, symbols: &[SteppedSymbol]) -> Result<Vec<ModelValue>, SmtError> {
        let terms: Vec<_> = symbols.iter().map(|s| quote(&s.to_string())).collect();
        self.get_values(&terms)
    }

    /// The model's definitions of user symbols (and of the abstract
    /// elements they mention), as replayable commands.
    pub fn user_definitions(&mut self) -> Result<Vec<String>, SmtError> {
        if self.last != Some(CheckResult::Sat) {
            return Err(SmtError::NoModel);
        }
        self.send("(get-model)")?;
        let e = self.expect_response()?;
        if let Some(msg) = Session::error_text(&e) {
            return Err(SmtError::Solver(msg));
        }
        let mut items = e.list().ok_or_else(|| SmtError::Protocol(e.to_string()))?;
        if items.first().is_some_and(|h| h.is_symbol("model")) {
            items = &items[1..];
        }
        let mut out = Vec::new();
        for d in items {
            match d.list() {
                // cardinality constraint of an uninterpreted sort
                Some([head, ..]) if head.is_symbol("forall") => out.push(format!("(assert {d})")),
                Some([_, name, ..]) if name.symbol().is_some_and(|n| !n.contains('@')) => out.push(d.to_string()),
                _ => {}
            }
        }
        Ok(out)
    }

    /// Sends `(exit)` and waits briefly before killing the process.
    pub fn close(mut self) {
        self.shutdown();
    }

    fn shutdown(&mut self) {
        if !self.dead {
            let _ = self.send("(exit)");
            self.dead = true;
        }
        let deadline = Instant::now() + Duration::from_millis(500);
        while Instant::now() < deadline {
            if let Ok(Some(_)) = self.child.try_wait() {
                return;
            }
            thread::sleep(Duration::from_millis(5));
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

impl Drop for Session {
    fn drop(&mut self) {
        if let Ok(None) = self.child.try_wait() {
            self.shutdown();
        }
    }
}

fn literal(s: &str) -> Option<BigRational> {
    if let Some((int, frac)) = s.split_once('.') {
        let whole: BigInt = int.parse().ok()?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let digits: BigInt = frac.parse().ok()?;
        return Some(BigRational::from_integer(whole) + BigRational::new(digits, scale));
    }
    if !s.bytes().all(|b| b.is_ascii_digit()) || s.is_empty() {
        return None;
    }
    Some(BigRational::from_integer(s.parse().ok()?))
}

/// Reads a model value: numerals, decimals, `(- v)`, `(/ a b)`, Booleans
/// and abstract elements.
pub fn parse_model_value(e: &SExpr) -> Option<ModelValue> {
    fn num(e: &SExpr) -> Option<BigRational> {
        match e {
            SExpr::Symbol(s) => literal(s),
            SExpr::List(items) => match items.as_slice() {
                [op, a] if op.is_symbol("-") => Some(-num(a)?),
                [op, a, b] if op.is_symbol("/") => {
                    let d = num(b)?;
                    if d.is_zero() {
                        return None;
                    }
                    Some(num(a)? / d)
                }
                _ => None,
            },
            SExpr::Str(_) => None,
        }
    }
    match e {
        SExpr::Symbol(s) if s == "true" => Some(ModelValue::Bool(true)),
        SExpr::Symbol(s) if s == "false" => Some(ModelValue::Bool(false)),
        SExpr::Symbol(s) if !s.starts_with(|c: char| c.is_ascii_digit()) => Some(ModelValue::Element(s.clone())),
        _ => num(e).map(ModelValue::Num),
    }
}

/// Splits an element name `T!val!3` into its index.
pub fn element_index(name: &str) -> Option<usize> {
    name.rsplit_once("!val!").and_then(|(_, i)| i.parse().ok())
}

/// Sort of a stepped state variable.
pub fn stepped_sort(sig: &Signature, s: &SteppedSymbol) -> Option<Sort> {
    match s {
        SteppedSymbol::Var(x, _) => sig.state_vars.get(x).cloned(),
        _ => None,
    }
}

#[cfg(test)]
mod tests;
