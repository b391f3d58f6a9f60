//! The `.ltlmt` input language.
//!
//! A source file is a sequence of `;`-terminated items:
//!
//! ```text
//! # comment to end of line
//! sort T;                      # uninterpreted sort
//! var x, y : Int;              # state variables
//! const c : Real;
//! fun f(Int, T) : Int;
//! pred p(T);
//! logic QF_UFLIA;              # optional solver logic hint
//! formula: x = 0 & G(wnext(x) = x + 1) & F(x = 42);
//! ```
//!
//! Transition systems use `init:`, `trans:` and `property:` sections in
//! place of `formula:`.
//!
//! Precedence, loosest first: `->` (right associative), `|`, `&`, the
//! binary temporal operators `U` and `R` (right associative), then the
//! unary operators `!`, `X`, `wX`, `F`, `G` and the quantifiers
//! `exists v:Sort . φ` / `forall v:Sort . φ`, whose body is a unary-level
//! formula (parenthesise a compound body). Relations `= != < <= > >=` bind
//! tighter than every formula operator; within terms `*` and `/` bind
//! tighter than `+` and `-`, all left associative.

mod lexer;
mod printer;

use std::fmt;

use thiserror::Error;

use crate::formula::{
    check_atom, is_reserved_name, sort_check, to_nnf, ArithOp, Atom, Formula, FormulaError, Predicate, Signature, Sort,
    SymbolKind, TemporalFormula, Term,
};
use lexer::{lex, Tok, Token};

pub(crate) use printer::write_decimal;
pub use printer::{print, print_source};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }

    /// `file:line:col: message`
    pub fn with_file(&self, file: &str) -> String {
        format!("{file}:{}:{}: {}", self.line, self.col, self.message)
    }
}

/// A parsed source file. Exactly one of `formula` or the transition-system
/// sections is normally present; [`parse`] and the transition-system
/// compiler enforce their own requirements.
#[derive(Debug, Clone, Default)]
pub struct SourceFile {
    pub signature: Signature,
    pub formula: Option<TemporalFormula>,
    pub init: Option<TemporalFormula>,
    pub trans: Option<TemporalFormula>,
    pub property: Option<TemporalFormula>,
    pub logic: Option<String>,
}

/// Parses a file with a single `formula:` item.
pub fn parse(text: &str) -> Result<(Signature, TemporalFormula), ParseError> {
    let src = parse_source(text)?;
    match src.formula {
        Some(f) => Ok((src.signature, f)),
        None => Err(ParseError::new(1, 1, "missing `formula:` item")),
    }
}

pub fn parse_source(text: &str) -> Result<SourceFile, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, scope: Vec::new(), sig: Signature::new(), quantifier_depth: 0 };
    p.source()
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<(String, Sort)>,
    sig: Signature,
    quantifier_depth: usize,
}

type PResult<T> = Result<T, ParseError>;

const KEYWORDS: &[&str] = &[
    "var", "const", "fun", "pred", "sort", "formula", "init", "trans", "property", "logic", "exists", "forall", "X",
    "wX", "F", "G", "U", "R", "true", "false", "next", "wnext", "Int", "Real",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.here();
        ParseError::new(t.line, t.col, message)
    }

    fn err_at(&self, t: &Token, message: impl Into<String>) -> ParseError {
        ParseError::new(t.line, t.col, message)
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.err_here(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<(String, Token)> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let t = self.bump();
                if is_reserved_name(&s) {
                    return Err(self.err_at(&t, FormulaError::ReservedName(s).to_string()));
                }
                Ok((s, t))
            }
            other => Err(self.err_here(format!("expected identifier, found {}", other.describe()))),
        }
    }

    fn source(&mut self) -> PResult<SourceFile> {
        let mut out = SourceFile::default();
        while *self.peek() != Tok::Eof {
            let start = self.here().clone();
            let Tok::Ident(kw) = self.peek().clone() else {
                return Err(
                    self.err_here(format!("expected a declaration or section, found {}", self.peek().describe()))
                );
            };
            match kw.as_str() {
                "sort" => {
                    self.bump();
                    let (name, t) = self.ident()?;
                    self.sig.declare_sort(&name).map_err(|e| self.err_at(&t, e.to_string()))?;
                }
                "var" | "const" => {
                    self.bump();
                    let mut names = vec![self.ident()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        names.push(self.ident()?);
                    }
                    self.expect(Tok::Colon)?;
                    let sort = self.sort()?;
                    for (name, t) in names {
                        let r = if kw == "var" {
                            self.sig.declare_var(&name, sort.clone())
                        } else {
                            self.sig.declare_const(&name, sort.clone())
                        };
                        r.map_err(|e| self.err_at(&t, e.to_string()))?;
                    }
                }
                "fun" | "pred" => {
                    self.bump();
                    let (name, t) = self.ident()?;
                    self.expect(Tok::LParen)?;
                    let mut args = Vec::new();
                    if *self.peek() != Tok::RParen {
                        args.push(self.sort()?);
                        while *self.peek() == Tok::Comma {
                            self.bump();
                            args.push(self.sort()?);
                        }
                    }
                    self.expect(Tok::RParen)?;
                    let r = if kw == "fun" {
                        self.expect(Tok::Colon)?;
                        let result = self.sort()?;
                        self.sig.declare_fun(&name, args, result)
                    } else {
                        self.sig.declare_pred(&name, args)
                    };
                    r.map_err(|e| self.err_at(&t, e.to_string()))?;
                }
                "logic" => {
                    self.bump();
                    match self.bump().tok {
                        Tok::Ident(l) => out.logic = Some(l),
                        other => {
                            return Err(self.err_at(&start, format!("expected logic name, found {}", other.describe())))
                        }
                    }
                }
                "formula" | "init" | "trans" | "property" => {
                    self.bump();
                    self.expect(Tok::Colon)?;
                    let f = self.formula()?;
                    let f = to_nnf(&f).map_err(|e| self.err_at(&start, e.to_string()))?;
                    sort_check(&f, &self.sig).map_err(|e| self.err_at(&start, e.to_string()))?;
                    let slot = match kw.as_str() {
                        "formula" => &mut out.formula,
                        "init" => &mut out.init,
                        "trans" => &mut out.trans,
                        _ => &mut out.property,
                    };
                    if slot.is_some() {
                        return Err(self.err_at(&start, format!("duplicate `{kw}:` item")));
                    }
                    *slot = Some(f);
                }
                other => return Err(self.err_at(&start, format!("unknown item `{other}`"))),
            }
            self.expect(Tok::Semi)?;
        }
        out.signature = std::mem::take(&mut self.sig);
        Ok(out)
    }

    fn sort(&mut self) -> PResult<Sort> {
        let t = self.bump();
        match &t.tok {
            Tok::Ident(s) if s == "Int" => Ok(Sort::Int),
            Tok::Ident(s) if s == "Real" => Ok(Sort::Real),
            Tok::Ident(s) if self.sig.kind_of(s) == Some(SymbolKind::Sort) => Ok(Sort::Uninterpreted(s.clone())),
            Tok::Ident(s) => Err(self.err_at(&t, FormulaError::UndeclaredSort(s.clone()).to_string())),
            other => Err(self.err_at(&t, format!("expected a sort, found {}", other.describe()))),
        }
    }

    // ---- formulas ----

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.binary_temporal()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.binary_temporal()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn temporal_allowed(&self) -> PResult<()> {
        if self.quantifier_depth > 0 {
            Err(self.err_here(FormulaError::TemporalUnderQuantifier.to_string()))
        } else {
            Ok(())
        }
    }

    fn binary_temporal(&mut self) -> PResult<Formula> {
        let lhs = self.unary()?;
        let until = self.is_kw("U");
        if until || self.is_kw("R") {
            self.temporal_allowed()?;
            self.bump();
            let rhs = self.binary_temporal()?;
            let (l, r) = (Box::new(lhs), Box::new(rhs));
            return Ok(if until { Formula::U(l, r) } else { Formula::R(l, r) });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::negate(self.unary()?));
        }
        for (kw, ctor) in [
            ("X", Formula::X as fn(Box<Formula>) -> Formula),
            ("wX", Formula::WX),
            ("F", Formula::F),
            ("G", Formula::G),
        ] {
            if self.is_kw(kw) {
                self.temporal_allowed()?;
                self.bump();
                return Ok(ctor(Box::new(self.unary()?)));
            }
        }
        let exists = self.is_kw("exists");
        if exists || self.is_kw("forall") {
            self.bump();
            let (name, t) = self.ident()?;
            if self.sig.kind_of(&name).is_some() {
                return Err(self.err_at(&t, format!("bound variable `{name}` shadows a declared symbol")));
            }
            self.expect(Tok::Colon)?;
            let sort = self.sort()?;
            self.expect(Tok::Dot)?;
            self.scope.push((name.clone(), sort.clone()));
            self.quantifier_depth += 1;
            let body = self.unary();
            self.quantifier_depth -= 1;
            self.scope.pop();
            let body = Box::new(body?);
            return Ok(if exists { Formula::Exists(name, sort, body) } else { Formula::Forall(name, sort, body) });
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Formula> {
        if self.eat_kw("true") {
            return Ok(Formula::True);
        }
        if self.eat_kw("false") {
            return Ok(Formula::False);
        }
        if let Tok::Ident(name) = self.peek().clone() {
            if self.sig.kind_of(&name) == Some(SymbolKind::Predicate) {
                let t = self.bump();
                let args = self.arguments()?;
                let atom = Atom::new(Predicate::User(name), args);
                return self.checked_atom(atom, &t);
            }
        }
        if *self.peek() == Tok::LParen {
            // Either a parenthesised formula or an atom whose left term starts
            // with a parenthesis; try the atom first.
            let save = self.pos;
            match self.relation() {
                Ok(f) => return Ok(f),
                Err(atom_err) => {
                    let atom_pos = self.pos;
                    self.pos = save;
                    self.bump();
                    match self.formula().and_then(|f| self.expect(Tok::RParen).map(|_| f)) {
                        Ok(f) => return Ok(f),
                        Err(formula_err) => {
                            // report whichever attempt got further
                            return Err(if atom_pos > self.pos { atom_err } else { formula_err });
                        }
                    }
                }
            }
        }
        self.relation()
    }

    fn relation(&mut self) -> PResult<Formula> {
        let start = self.here().clone();
        let lhs = self.term()?;
        let (pred, negate) = match self.peek() {
            Tok::Eq => (Predicate::Eq, false),
            Tok::Neq => (Predicate::Eq, true),
            Tok::Lt => (Predicate::Lt, false),
            Tok::Le => (Predicate::Le, false),
            Tok::Gt => (Predicate::Gt, false),
            Tok::Ge => (Predicate::Ge, false),
            other => return Err(self.err_here(format!("expected a relation, found {}", other.describe()))),
        };
        self.bump();
        let rhs = self.term()?;
        let atom = self.checked_atom(Atom::rel(pred, lhs, rhs), &start)?;
        Ok(if negate { Formula::negate(atom) } else { atom })
    }

    fn checked_atom(&self, atom: Atom, at: &Token) -> PResult<Formula> {
        check_atom(&atom, &self.sig, &self.scope).map_err(|e| self.err_at(at, e.to_string()))?;
        Ok(Formula::Atom(atom))
    }

    fn arguments(&mut self) -> PResult<Vec<Term>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    // ---- terms ----

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Term::arith(op, lhs, rhs);
        }
    }

    fn product(&mut self) -> PResult<Term> {
        let mut lhs = self.unary_term()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary_term()?;
            lhs = Term::arith(op, lhs, rhs);
        }
    }

    fn unary_term(&mut self) -> PResult<Term> {
        if *self.peek() == Tok::Minus {
            self.bump();
            // `-3` is a literal, `-(3)` a negation
            return Ok(match self.peek().clone() {
                Tok::Int(v) => {
                    self.bump();
                    Term::Int(-v)
                }
                Tok::Decimal(v) => {
                    self.bump();
                    Term::Real(-v)
                }
                _ => Term::Neg(Box::new(self.unary_term()?)),
            });
        }
        self.primary_term()
    }

    fn primary_term(&mut self) -> PResult<Term> {
        let t = self.here().clone();
        match t.tok.clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Term::Int(v))
            }
            Tok::Decimal(v) => {
                self.bump();
                Ok(Term::Real(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(kw) if kw == "next" || kw == "wnext" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let inner = self.term()?;
                self.expect(Tok::RParen)?;
                let inner = Box::new(inner);
                Ok(if kw == "next" { Term::Next(inner) } else { Term::WNext(inner) })
            }
            Tok::Ident(_) => {
                let (name, t) = self.ident()?;
                if self.scope.iter().any(|(n, _)| *n == name) {
                    return Ok(Term::Bound(name));
                }
                match self.sig.kind_of(&name) {
                    Some(SymbolKind::StateVar) => Ok(Term::Var(name)),
                    Some(SymbolKind::Constant) => Ok(Term::Const(name)),
                    Some(SymbolKind::Function) => {
                        let args = self.arguments()?;
                        Ok(Term::Apply(name, args))
                    }
                    Some(kind) => Err(self.err_at(&t, format!("`{name}` is a {kind:?}, not a term"))),
                    None => Err(self.err_at(&t, FormulaError::Undeclared(name).to_string())),
                }
            }
            other => Err(self.err_at(&t, format!("expected a term, found {}", other.describe()))),
        }
    }
}

impl fmt::Display for SourceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(phi) = &self.formula {
            f.write_str(&print_source(&self.signature, phi))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests;
