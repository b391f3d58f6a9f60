//! Translation of temporal formulas into first-order formulas over stepped
//! symbols: `x@i` is the value of `x` at state `i`, `_l@i` says that state
//! `i` is not the last one, and `_g@n@i` stands for closure entry `n` (a
//! tomorrow or weak-tomorrow formula) grounded at state `i`.

mod ground;

use std::fmt;

use crate::formula::{classify_atom, Atom, AtomStrength, ClosureId, ClosureNode, ClosureTable, FoFormula, Term};

pub use ground::{GroundFormula, GroundTerm};

/// A symbol of the stepped signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SteppedSymbol {
    Var(String, usize),
    StepLiteral(usize),
    GroundedTomorrow(ClosureId, usize),
}

impl fmt::Display for SteppedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SteppedSymbol::Var(x, i) => write!(f, "{x}@{i}"),
            SteppedSymbol::StepLiteral(i) => write!(f, "_l@{i}"),
            SteppedSymbol::GroundedTomorrow(id, i) => write!(f, "_g@{id}@{i}"),
        }
    }
}

impl SteppedSymbol {
    /// Inverse of the rendering above.
    pub fn parse(name: &str) -> Option<SteppedSymbol> {
        let parts: Vec<&str> = name.split('@').collect();
        match parts.as_slice() {
            ["_l", i] => Some(SteppedSymbol::StepLiteral(i.parse().ok()?)),
            ["_g", n, i] => Some(SteppedSymbol::GroundedTomorrow(ClosureId(n.parse().ok()?), i.parse().ok()?)),
            [x, i] if !x.is_empty() && !x.starts_with("_l") && !x.starts_with("_g") => {
                Some(SteppedSymbol::Var(x.to_string(), i.parse().ok()?))
            }
            _ => None,
        }
    }
}

/// The stepped version of a flat term at state `i`: state variables read
/// `x@i`, next terms read `x@(i+1)`, everything else is unchanged.
pub fn step_term(t: &Term, i: usize) -> GroundTerm {
    match t {
        Term::Var(x) => GroundTerm::Var(x.clone(), i),
        Term::Bound(y) => GroundTerm::Bound(y.clone()),
        Term::Const(c) => GroundTerm::Const(c.clone()),
        Term::Int(v) => GroundTerm::Int(v.clone()),
        Term::Real(r) => GroundTerm::Real(r.clone()),
        Term::Apply(f, args) => GroundTerm::Apply(f.clone(), args.iter().map(|a| step_term(a, i)).collect()),
        Term::Neg(a) => GroundTerm::Neg(Box::new(step_term(a, i))),
        Term::Arith(op, a, b) => GroundTerm::Arith(*op, Box::new(step_term(a, i)), Box::new(step_term(b, i))),
        Term::Next(inner) | Term::WNext(inner) => step_term(inner, i + 1),
    }
}

fn step_atom(a: &Atom, i: usize) -> GroundFormula {
    GroundFormula::Atom(a.pred.clone(), a.args.iter().map(|t| step_term(t, i)).collect())
}

/// `(L_i(λ))^i`: strong atoms become `_l@i ∧ α`, weak atoms `_l@i → α`,
/// then every term is stepped at `i`.
pub fn label_step(f: &FoFormula, i: usize) -> GroundFormula {
    let labeled = |a: &Atom| {
        let stepped = step_atom(a, i);
        let l = GroundFormula::Symbol(SteppedSymbol::StepLiteral(i));
        match classify_atom(a) {
            AtomStrength::Strong => GroundFormula::And(vec![l, stepped]),
            AtomStrength::Weak => GroundFormula::Implies(Box::new(l), Box::new(stepped)),
            AtomStrength::Rigid => stepped,
        }
    };
    match f {
        FoFormula::True => GroundFormula::True,
        FoFormula::False => GroundFormula::False,
        FoFormula::Atom(a) => labeled(a),
        FoFormula::NegAtom(a) => GroundFormula::negate(labeled(a)),
        FoFormula::And(a, b) => GroundFormula::and(vec![label_step(a, i), label_step(b, i)]),
        FoFormula::Or(a, b) => GroundFormula::or(vec![label_step(a, i), label_step(b, i)]),
        FoFormula::Exists(v, s, body) => GroundFormula::Exists(v.clone(), s.clone(), Box::new(label_step(body, i))),
        FoFormula::Forall(v, s, body) => GroundFormula::Forall(v.clone(), s.clone(), Box::new(label_step(body, i))),
    }
}

/// Stepped normal form: a positive Boolean combination of labelled
/// first-order leaves and references to tomorrow / weak-tomorrow closure
/// entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Snf {
    Leaf(GroundFormula),
    And(Box<Snf>, Box<Snf>),
    Or(Box<Snf>, Box<Snf>),
    Tomorrow(ClosureId),
}

impl Snf {
    /// Ids of the tomorrow entries referenced.
    pub fn tomorrows(&self) -> Vec<ClosureId> {
        match self {
            Snf::Leaf(_) => Vec::new(),
            Snf::Tomorrow(id) => vec![*id],
            Snf::And(a, b) | Snf::Or(a, b) => {
                let mut v = a.tomorrows();
                v.extend(b.tomorrows());
                v
            }
        }
    }
}

/// `snf_i` of closure entry `id`.
pub fn snf(ct: &ClosureTable, id: ClosureId, i: usize) -> Snf {
    let both = |a: Snf, b: Snf, and: bool| {
        if and {
            Snf::And(Box::new(a), Box::new(b))
        } else {
            Snf::Or(Box::new(a), Box::new(b))
        }
    };
    match ct.node(id) {
        ClosureNode::True => Snf::Leaf(GroundFormula::True),
        ClosureNode::Fo(fo) => Snf::Leaf(label_step(fo, i)),
        ClosureNode::And(a, b) => both(snf(ct, *a, i), snf(ct, *b, i), true),
        ClosureNode::Or(a, b) => both(snf(ct, *a, i), snf(ct, *b, i), false),
        ClosureNode::X(_) | ClosureNode::WX(_) => Snf::Tomorrow(id),
        ClosureNode::U(a, b) => {
            let next = ct.x_of(id).expect("closure holds X of every until");
            both(snf(ct, *b, i), both(snf(ct, *a, i), Snf::Tomorrow(next), true), false)
        }
        ClosureNode::R(a, b) => {
            let next = ct.wx_of(id).expect("closure holds wX of every release");
            both(snf(ct, *b, i), both(snf(ct, *a, i), Snf::Tomorrow(next), false), true)
        }
    }
}

/// `ψ^i_G`: replaces every tomorrow reference by its grounded symbol.
pub fn ground(s: &Snf, i: usize) -> GroundFormula {
    match s {
        Snf::Leaf(g) => g.clone(),
        Snf::And(a, b) => GroundFormula::and(vec![ground(a, i), ground(b, i)]),
        Snf::Or(a, b) => GroundFormula::or(vec![ground(a, i), ground(b, i)]),
        Snf::Tomorrow(id) => GroundFormula::Symbol(SteppedSymbol::GroundedTomorrow(*id, i)),
    }
}

/// `⟦φ⟧_0`.
pub fn unravel_base(ct: &ClosureTable) -> GroundFormula {
    ground(&snf(ct, ct.root(), 0), 0)
}

/// The conjuncts that extend `⟦φ⟧_k` to `⟦φ⟧_{k+1}`: `_l@k` and, for every
/// tomorrow entry `⊗α`, `_g@⊗α@k ↔ snf_{k+1}(α)^{k+1}_G`.
pub fn unravel_delta(ct: &ClosureTable, k: usize) -> GroundFormula {
    let mut parts = vec![GroundFormula::Symbol(SteppedSymbol::StepLiteral(k))];
    for &t in ct.xr().iter().chain(ct.wxr()) {
        let operand = ct.tomorrow_operand(t).expect("tomorrow entry");
        parts.push(GroundFormula::Iff(
            Box::new(GroundFormula::Symbol(SteppedSymbol::GroundedTomorrow(t, k))),
            Box::new(ground(&snf(ct, operand, k + 1), k + 1)),
        ));
    }
    GroundFormula::And(parts)
}

/// What `|φ|_k` adds to `⟦φ⟧_k`: no pending tomorrow and no successor.
pub fn empty_encoding(ct: &ClosureTable, k: usize) -> GroundFormula {
    let mut parts: Vec<_> = ct
        .xr()
        .iter()
        .map(|&t| GroundFormula::negate(GroundFormula::Symbol(SteppedSymbol::GroundedTomorrow(t, k))))
        .collect();
    parts.push(GroundFormula::negate(GroundFormula::Symbol(SteppedSymbol::StepLiteral(k))));
    GroundFormula::And(parts)
}

/// The first-order formulas of each poised node along a tableau branch.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BranchSummary {
    pub poised_labels: Vec<Vec<FoFormula>>,
}

/// `Ω(β)`: every first-order label of poised node `i` labelled and stepped
/// at `i`, and `_l@i` for all but the last poised node.
pub fn omega(b: &BranchSummary) -> GroundFormula {
    let m = b.poised_labels.len();
    let mut parts = Vec::new();
    for (i, label) in b.poised_labels.iter().enumerate() {
        parts.extend(label.iter().map(|f| label_step(f, i)));
    }
    parts.extend((0..m.saturating_sub(1)).map(|i| GroundFormula::Symbol(SteppedSymbol::StepLiteral(i))));
    GroundFormula::And(parts)
}
