use std::fmt;

use super::{print, Formula, NumTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Lt,
    Gt,
    Eq,
    Le,
    Ge,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Eq => "=",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
            CmpOp::Ne => "!=",
        }
    }

    fn to_core(self, l: NumTerm, r: NumTerm) -> Formula {
        match self {
            CmpOp::Lt => Formula::Lt(l, r),
            CmpOp::Gt => Formula::Gt(l, r),
            CmpOp::Eq => Formula::Eq(l, r),
            CmpOp::Le => Formula::or(Formula::Lt(l.clone(), r.clone()), Formula::Eq(l, r)),
            CmpOp::Ge => Formula::or(Formula::Gt(l.clone(), r.clone()), Formula::Eq(l, r)),
            CmpOp::Ne => Formula::or(Formula::Gt(l.clone(), r.clone()), Formula::Lt(l, r)),
        }
    }
}

/// Surface formula with the derived connectives still present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtFormula {
    /// Any core atom other than a comparison.
    Atom(Formula),
    True,
    False,
    Not(Box<ExtFormula>),
    And(Box<ExtFormula>, Box<ExtFormula>),
    Or(Vec<ExtFormula>),
    Implies(Box<ExtFormula>, Box<ExtFormula>),
    Iff(Box<ExtFormula>, Box<ExtFormula>),
    Next(Box<ExtFormula>),
    /// `t0 op1 t1 op2 t2 ...`; a single pair is an ordinary comparison.
    Cmp(NumTerm, Vec<(CmpOp, NumTerm)>),
}

impl ExtFormula {
    pub fn atom(f: Formula) -> Self {
        ExtFormula::Atom(f)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: ExtFormula) -> Self {
        ExtFormula::Not(Box::new(f))
    }

    pub fn and(l: ExtFormula, r: ExtFormula) -> Self {
        ExtFormula::And(Box::new(l), Box::new(r))
    }

    pub fn and_all(items: impl IntoIterator<Item = ExtFormula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => ExtFormula::True,
            Some(first) => it.fold(first, ExtFormula::and),
        }
    }

    pub fn implies(l: ExtFormula, r: ExtFormula) -> Self {
        ExtFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: ExtFormula, r: ExtFormula) -> Self {
        ExtFormula::Iff(Box::new(l), Box::new(r))
    }

    pub fn next(f: ExtFormula) -> Self {
        ExtFormula::Next(Box::new(f))
    }

    pub fn cmp(l: NumTerm, op: CmpOp, r: NumTerm) -> Self {
        ExtFormula::Cmp(l, vec![(op, r)])
    }
}

/// Rewrites derived connectives and comparisons into the core language.
///
/// `a or b` becomes `not (not a and not b)` (n-ary `or` keeps one negated
/// conjunction), `a implies b` becomes `not (a and not b)`, `iff` is the
/// conjunction of both implications, `<=`, `>=`, `!=` expand through `or`,
/// and a comparison chain is the conjunction of its adjacent pairs.
pub fn desugar(f: &ExtFormula) -> Formula {
    match f {
        ExtFormula::Atom(a) => a.clone(),
        ExtFormula::True => Formula::top(),
        ExtFormula::False => Formula::bottom(),
        ExtFormula::Not(g) => Formula::not(desugar(g)),
        ExtFormula::And(l, r) => Formula::and(desugar(l), desugar(r)),
        ExtFormula::Or(items) => Formula::disjunction(items.iter().map(desugar)),
        ExtFormula::Implies(l, r) => Formula::implies(desugar(l), desugar(r)),
        ExtFormula::Iff(l, r) => Formula::iff(desugar(l), desugar(r)),
        ExtFormula::Next(g) => Formula::next(desugar(g)),
        ExtFormula::Cmp(first, rest) => {
            let mut prev = first;
            let mut parts = Vec::with_capacity(rest.len());
            for (op, t) in rest {
                parts.push(op.to_core(prev.clone(), t.clone()));
                prev = t;
            }
            Formula::conjunction(parts)
        }
    }
}

// Binding strength, loosest first.
const P_IFF: u8 = 1;
const P_IMPLIES: u8 = 2;
const P_OR: u8 = 3;
const P_AND: u8 = 4;
const P_UNARY: u8 = 5;

fn ext_prec(f: &ExtFormula) -> u8 {
    match f {
        ExtFormula::Iff(..) => P_IFF,
        ExtFormula::Implies(..) => P_IMPLIES,
        ExtFormula::Or(items) if items.len() > 1 => P_OR,
        ExtFormula::Or(items) if items.len() == 1 => ext_prec(&items[0]),
        ExtFormula::And(..) => P_AND,
        _ => P_UNARY,
    }
}

fn write_ext(out: &mut String, f: &ExtFormula, min_prec: u8) {
    let paren = ext_prec(f) < min_prec;
    if paren {
        out.push('(');
    }
    match f {
        ExtFormula::Atom(a) => out.push_str(&print::print_formula(a)),
        ExtFormula::True => out.push_str("true"),
        ExtFormula::False => out.push_str("false"),
        ExtFormula::Not(g) => {
            out.push_str("not ");
            write_ext(out, g, P_UNARY);
        }
        ExtFormula::And(l, r) => {
            write_ext(out, l, P_AND);
            out.push_str(" and ");
            write_ext(out, r, P_UNARY);
        }
        ExtFormula::Or(items) if items.is_empty() => out.push_str("false"),
        ExtFormula::Or(items) => {
            for (i, g) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(" or ");
                }
                write_ext(out, g, P_AND);
            }
        }
        ExtFormula::Implies(l, r) => {
            write_ext(out, l, P_OR);
            out.push_str(" implies ");
            write_ext(out, r, P_IMPLIES);
        }
        ExtFormula::Iff(l, r) => {
            write_ext(out, l, P_IFF);
            out.push_str(" iff ");
            write_ext(out, r, P_IMPLIES);
        }
        ExtFormula::Next(g) => {
            out.push_str("next(");
            write_ext(out, g, P_IFF);
            out.push(')');
        }
        ExtFormula::Cmp(first, rest) => {
            out.push_str(&first.to_string());
            for (op, t) in rest {
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                out.push_str(&t.to_string());
            }
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for ExtFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_ext(&mut s, self, P_IFF);
        f.write_str(&s)
    }
}
