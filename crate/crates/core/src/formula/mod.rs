//! Formula and numerical-term syntax trees.
//!
//! [`Formula`] is the core language: propositions, the game keywords
//! (`initial`, `terminal`, `wins`, `legal`, `does`), negation, conjunction,
//! the next-state operator, integer comparisons and the valuation atom
//! `vals(...)`. Everything else (`or`, `implies`, `<=`, chained comparisons,
//! ...) lives in [`ExtFormula`] and is removed by [`desugar`].
//!
//! The propositional fragment (no comparisons, no `vals`, no term arguments)
//! is plain GDL; see [`Formula::is_gdl`].

mod ops;
mod parser;
mod print;
mod sugar;

use std::fmt;

pub use ops::{count_atoms, node_count, subformulas};
pub use parser::{parse_extended, parse_formula, parse_rules, ParseError};
pub use print::{print_formula, print_formula_sugared};
pub use sugar::{desugar, CmpOp, ExtFormula};

/// Numerical term: integer literal, state variable, or a binary composition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NumTerm {
    Int(i64),
    Var(String),
    Add(Box<NumTerm>, Box<NumTerm>),
    Sub(Box<NumTerm>, Box<NumTerm>),
    Min(Box<NumTerm>, Box<NumTerm>),
    Max(Box<NumTerm>, Box<NumTerm>),
}

impl NumTerm {
    pub fn var(name: impl Into<String>) -> Self {
        NumTerm::Var(name.into())
    }

    pub fn add(l: NumTerm, r: NumTerm) -> Self {
        NumTerm::Add(Box::new(l), Box::new(r))
    }

    pub fn sub(l: NumTerm, r: NumTerm) -> Self {
        NumTerm::Sub(Box::new(l), Box::new(r))
    }

    pub fn min(l: NumTerm, r: NumTerm) -> Self {
        NumTerm::Min(Box::new(l), Box::new(r))
    }

    pub fn max(l: NumTerm, r: NumTerm) -> Self {
        NumTerm::Max(Box::new(l), Box::new(r))
    }

    /// True when the term mentions no state variable.
    pub fn is_closed(&self) -> bool {
        match self {
            NumTerm::Int(_) => true,
            NumTerm::Var(_) => false,
            NumTerm::Add(l, r) | NumTerm::Sub(l, r) | NumTerm::Min(l, r) | NumTerm::Max(l, r) => {
                l.is_closed() && r.is_closed()
            }
        }
    }

    /// Visits every variable name occurring in the term.
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            NumTerm::Int(_) => {}
            NumTerm::Var(x) => f(x),
            NumTerm::Add(l, r) | NumTerm::Sub(l, r) | NumTerm::Min(l, r) | NumTerm::Max(l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
        }
    }
}

impl From<i64> for NumTerm {
    fn from(v: i64) -> Self {
        NumTerm::Int(v)
    }
}

/// Argument of a structured proposition such as `turn(Player1)` or `smaller(0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropArg {
    Sym(String),
    Int(i64),
}

impl fmt::Display for PropArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropArg::Sym(s) => f.write_str(s),
            PropArg::Int(v) => write!(f, "{v}"),
        }
    }
}

/// Atomic proposition. A bare identifier has no arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prop {
    pub name: String,
    pub args: Vec<PropArg>,
}

impl Prop {
    pub fn new(name: impl Into<String>) -> Self {
        Prop { name: name.into(), args: Vec::new() }
    }

    pub fn with_sym(name: impl Into<String>, arg: impl Into<String>) -> Self {
        Prop { name: name.into(), args: vec![PropArg::Sym(arg.into())] }
    }

    pub fn with_ints(name: impl Into<String>, args: &[i64]) -> Self {
        Prop { name: name.into(), args: args.iter().map(|v| PropArg::Int(*v)).collect() }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Action `name^agent(args)` as it appears inside `legal`/`does`, with
/// unevaluated numerical arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionTerm {
    pub agent: String,
    pub name: String,
    pub args: Vec<NumTerm>,
}

impl ActionTerm {
    pub fn new(agent: impl Into<String>, name: impl Into<String>, args: Vec<NumTerm>) -> Self {
        ActionTerm { agent: agent.into(), name: name.into(), args }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Prop(Prop),
    Initial,
    Terminal,
    Wins(String),
    Legal(ActionTerm),
    Does(ActionTerm),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Gt(NumTerm, NumTerm),
    Lt(NumTerm, NumTerm),
    Eq(NumTerm, NumTerm),
    Vals(Vec<NumTerm>),
}

impl Formula {
    pub fn prop(p: Prop) -> Self {
        Formula::Prop(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    /// Core encoding of `a or b`.
    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::disjunction(vec![l, r])
    }

    /// Core encoding of `a implies b`.
    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::not(Formula::and(l, Formula::not(r)))
    }

    /// Core encoding of `a iff b`.
    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::and(Formula::implies(l.clone(), r.clone()), Formula::implies(r, l))
    }

    /// Always-true formula built from core connectives only.
    pub fn top() -> Self {
        Formula::not(Formula::bottom())
    }

    pub fn bottom() -> Self {
        Formula::and(Formula::Initial, Formula::not(Formula::Initial))
    }

    /// Left-nested conjunction; the empty conjunction is [`Formula::top`].
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::top(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// `not (not a and not b and ...)`; a single disjunct is returned as is
    /// and the empty disjunction is [`Formula::bottom`].
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        let items: Vec<Formula> = items.into_iter().collect();
        match items.len() {
            0 => Formula::bottom(),
            1 => items.into_iter().next().unwrap(),
            _ => Formula::not(Formula::conjunction(items.into_iter().map(Formula::not))),
        }
    }

    /// Atomic iff the root is none of `not`, `and`, `next`.
    pub fn is_atomic(&self) -> bool {
        !matches!(self, Formula::Not(_) | Formula::And(..) | Formula::Next(_))
    }

    /// True when the formula is in the propositional GDL fragment: no
    /// comparisons, no `vals`, and every `legal`/`does` has no arguments.
    pub fn is_gdl(&self) -> bool {
        match self {
            Formula::Prop(_) | Formula::Initial | Formula::Terminal | Formula::Wins(_) => true,
            Formula::Legal(a) | Formula::Does(a) => a.args.is_empty(),
            Formula::Not(f) | Formula::Next(f) => f.is_gdl(),
            Formula::And(l, r) => l.is_gdl() && r.is_gdl(),
            Formula::Gt(..) | Formula::Lt(..) | Formula::Eq(..) | Formula::Vals(_) => false,
        }
    }

    /// Visits every numerical term that is a direct argument of an atom.
    pub fn for_each_term<'a>(&'a self, f: &mut impl FnMut(&'a NumTerm)) {
        match self {
            Formula::Prop(_) | Formula::Initial | Formula::Terminal | Formula::Wins(_) => {}
            Formula::Legal(a) | Formula::Does(a) => a.args.iter().for_each(&mut *f),
            Formula::Vals(ts) => ts.iter().for_each(&mut *f),
            Formula::Gt(l, r) | Formula::Lt(l, r) | Formula::Eq(l, r) => {
                f(l);
                f(r);
            }
            Formula::Not(g) | Formula::Next(g) => g.for_each_term(f),
            Formula::And(l, r) => {
                l.for_each_term(f);
                r.for_each_term(f);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for NumTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumTerm::Int(v) => write!(f, "{v}"),
            NumTerm::Var(x) => f.write_str(x),
            NumTerm::Add(l, r) => write!(f, "add({l},{r})"),
            NumTerm::Sub(l, r) => write!(f, "sub({l},{r})"),
            NumTerm::Min(l, r) => write!(f, "min({l},{r})"),
            NumTerm::Max(l, r) => write!(f, "max({l},{r})"),
        }
    }
}

/// Named, ordered collection of rule formulas.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleSet {
    pub name: String,
    pub rules: Vec<Formula>,
}

impl RuleSet {
    pub fn new(name: impl Into<String>, rules: Vec<Formula>) -> Self {
        RuleSet { name: name.into(), rules }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.rules.iter()
    }
}
