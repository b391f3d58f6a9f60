//! Scalable benchmark families and the transition-system front end.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::formula::{FoFormula, Signature, TemporalFormula};
use crate::parser::{parse, parse_source, ParseError, SourceFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `x = 0 & G(wnext(x) = x + 1) & F(x = N)`
    LiaCounter,
    /// Strictly increasing frozen values whose sum is too small.
    LiaSumUnsat,
    /// A value of `10^N` divided by ten until it reaches one.
    LraDecade,
    /// Partial sums of a halving series approaching two.
    LraGeometric,
    /// A recursively defined uninterpreted function over a counter.
    EufLiaRecursion,
}

pub const FAMILIES: [Family; 5] =
    [Family::LiaCounter, Family::LiaSumUnsat, Family::LraDecade, Family::LraGeometric, Family::EufLiaRecursion];

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::LiaCounter => "lia-counter",
            Family::LiaSumUnsat => "lia-sum-unsat",
            Family::LraDecade => "lra-decade",
            Family::LraGeometric => "lra-geometric",
            Family::EufLiaRecursion => "euf-lia-recursion",
        }
    }

    /// Expected answer.
    pub fn satisfiable(self) -> bool {
        self != Family::LiaSumUnsat
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown benchmark family `{0}` (expected one of lia-counter, lia-sum-unsat, lra-decade, lra-geometric, euf-lia-recursion)")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FAMILIES.into_iter().find(|f| f.id() == s).ok_or_else(|| UnknownFamily(s.to_string()))
    }
}

fn x_pow(n: usize, body: &str) -> String {
    format!("{}({body})", "X ".repeat(n))
}

/// The `.ltlmt` source of `family` at parameter `n` (at least 1).
pub fn gen_source(family: Family, n: usize) -> String {
    let n = n.max(1);
    match family {
        Family::LiaCounter => format!("var x : Int;\n\nformula:\n  x = 0 & G(wnext(x) = x + 1) & F(x = {n});\n"),
        Family::LiaSumUnsat => {
            let vars: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
            let steps: Vec<String> = (0..n).map(|i| x_pow(i, &format!("next(x{}) > x{i}", i + 1))).collect();
            let frozen: Vec<String> = vars.iter().map(|x| format!("wnext({x}) = {x}")).collect();
            let sum: Vec<&str> = vars[..n].iter().map(String::as_str).collect();
            let n_big = BigInt::from(n);
            let target = &n_big * (&n_big - 1) / 2 - 1;
            format!(
                "var {} : Int;\n\nformula:\n  x0 > 0\n  & {}\n  & G({})\n  & G({} = {target});\n",
                vars.join(", "),
                steps.join("\n  & "),
                frozen.join(" & "),
                sum.join(" + ")
            )
        }
        Family::LraDecade => format!(
            "var c, x : Real;\n\nformula:\n  c = 1 & G(wnext(c) = 10 * c)\n  & {};\n",
            x_pow(n, "x = c & G(wnext(x) = x / 10) & F(x = 1)")
        ),
        Family::LraGeometric => format!(
            "var c, e, x, g : Real;\n\nformula:\n  c = 1 & G(wnext(c) = 10 * c) & e = 1 & x = 0\n  & {};\n",
            x_pow(n, "g = c & G(wnext(e) = e / 2 & wnext(x) = x + e & 0 <= x & x < 2) & F(x > 2 - 1 / g)")
        ),
        Family::EufLiaRecursion => format!(
            "var n, c : Int;\nfun f(Int) : Int;\n\nformula:\n  n = 0 & c >= 0\n  & G(wnext(c) = c & wnext(n) = n + 1)\n  \
             & G((n > 1 -> f(n) = 2 * f(n - 1) + c) & (n = 1 -> f(n) = c))\n  & {};\n",
            x_pow(n, "wX false")
        ),
    }
}

/// The parsed instance of `family` at parameter `n`.
pub fn gen_benchmark(family: Family, n: usize) -> (Signature, TemporalFormula) {
    parse(&gen_source(family, n)).expect("generated benchmarks parse")
}

/// Initial condition, weak transition relation and property over shared
/// state variables.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSystem {
    pub signature: Signature,
    pub init: FoFormula,
    pub trans: FoFormula,
    pub property: TemporalFormula,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TsError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("missing `{0}:` section")]
    Missing(&'static str),
    #[error("`{0}:` must be first-order")]
    NotFirstOrder(&'static str),
    #[error("`init:` may not refer to next states")]
    InitNext,
    #[error("`trans:` must be weak: `{0}` refers to a strong next state")]
    StrongTransition(String),
}

fn first_order(f: Option<TemporalFormula>, section: &'static str, default: FoFormula) -> Result<FoFormula, TsError> {
    match f {
        None => Ok(default),
        Some(TemporalFormula::True) => Ok(FoFormula::True),
        Some(TemporalFormula::Fo(fo)) => Ok(fo),
        Some(_) => Err(TsError::NotFirstOrder(section)),
    }
}

impl TransitionSystem {
    /// From a source file with `init:`, `trans:` (optional, default true)
    /// and `property:` sections.
    pub fn from_source(src: SourceFile) -> Result<Self, TsError> {
        let init = first_order(src.init, "init", FoFormula::True)?;
        let trans = first_order(src.trans, "trans", FoFormula::True)?;
        let property = src.property.ok_or(TsError::Missing("property"))?;
        let ts = TransitionSystem { signature: src.signature, init, trans, property };
        ts.validate()?;
        Ok(ts)
    }

    pub fn parse(text: &str) -> Result<Self, TsError> {
        TransitionSystem::from_source(parse_source(text)?)
    }

    fn validate(&self) -> Result<(), TsError> {
        let mut err = None;
        self.init.for_each_atom(&mut |a| {
            if err.is_none() && a.args.iter().any(|t| t.has_next() || t.has_wnext()) {
                err = Some(TsError::InitNext);
            }
        });
        self.trans.for_each_atom(&mut |a| {
            if err.is_none() && a.args.iter().any(|t| t.has_next()) {
                err = Some(TsError::StrongTransition(crate::parser::print(&TemporalFormula::Fo(FoFormula::Atom(
                    a.clone(),
                )))));
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// `I & G(Tr) & ψ`.
    pub fn compile(&self) -> Result<TemporalFormula, TsError> {
        self.validate()?;
        Ok(TemporalFormula::and_all([
            TemporalFormula::fo(self.init.clone()),
            TemporalFormula::always(TemporalFormula::fo(self.trans.clone())),
            self.property.clone(),
        ]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::print;

    #[test]
    fn counter_instance() {
        let (_, f) = gen_benchmark(Family::LiaCounter, 3);
        assert_eq!(print(&f), "x = 0 & G wnext(x) = x + 1 & F x = 3");
    }

    #[test]
    fn sum_instance() {
        let (sig, f) = gen_benchmark(Family::LiaSumUnsat, 2);
        assert_eq!(sig.state_vars.len(), 3);
        let (_, expected) = parse(
            "var x0, x1, x2 : Int; formula: x0 > 0 & next(x1) > x0 & X next(x2) > x1 \
             & G(wnext(x0) = x0 & wnext(x1) = x1 & wnext(x2) = x2) & G(x0 + x1 = 0);",
        )
        .unwrap();
        assert_eq!(f, expected);
        assert!(gen_source(Family::LiaSumUnsat, 5).contains("x0 + x1 + x2 + x3 + x4 = 9"));
    }

    #[test]
    fn recursion_instance() {
        let (sig, f) = gen_benchmark(Family::EufLiaRecursion, 1);
        assert!(sig.functions.contains_key("f"));
        let (_, expected) = parse(
            "var n, c : Int; fun f(Int) : Int; formula: n = 0 & c >= 0 & G(wnext(c) = c & wnext(n) = n + 1) \
             & G((n > 1 -> f(n) = 2 * f(n - 1) + c) & (n = 1 -> f(n) = c)) & X wX false;",
        )
        .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn real_instances_nest_tomorrow() {
        let (_, f) = gen_benchmark(Family::LraDecade, 3);
        assert!(print(&f).contains("X X X (x = c"));
        let (sig, _) = gen_benchmark(Family::LraGeometric, 2);
        assert!(sig.state_vars.contains_key("g"));
    }

    #[test]
    fn generated_sources_round_trip() {
        for fam in FAMILIES {
            for n in [1, 2, 7] {
                let (sig, f) = gen_benchmark(fam, n);
                let printed = crate::parser::print_source(&sig, &f);
                assert_eq!(parse(&printed).unwrap(), (sig, f), "{fam} {n}");
            }
        }
        assert_eq!("lra-decade".parse::<Family>(), Ok(Family::LraDecade));
        assert!("lra".parse::<Family>().is_err());
    }

    #[test]
    fn transition_systems() {
        let ts =
            TransitionSystem::parse("var x : Int; init: x = 0; trans: wnext(x) = x + 1; property: F x = 3;").unwrap();
        assert_eq!(ts.compile().unwrap(), gen_benchmark(Family::LiaCounter, 3).1);
        let ts = TransitionSystem::parse("var x : Int; init: x = 0; property: F x = 3;").unwrap();
        assert_eq!(print(&ts.compile().unwrap()), "x = 0 & G true & F x = 3");
        assert_eq!(
            TransitionSystem::parse("var x : Int; init: x = 0; trans: next(x) = x + 1; property: F x = 3;"),
            Err(TsError::StrongTransition("next(x) = x + 1".into()))
        );
        assert_eq!(
            TransitionSystem::parse("var x : Int; init: F x = 0; property: true;"),
            Err(TsError::NotFirstOrder("init"))
        );
    }
}
