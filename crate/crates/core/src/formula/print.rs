use super::{ActionTerm, Formula, NumTerm};

const P_OR: u8 = 3;
const P_AND: u8 = 4;
const P_UNARY: u8 = 5;

/// Canonical text of a core formula. `parse_formula` inverts it exactly.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, P_OR, false);
    out
}

/// Like [`print_formula`], but renders the core encoding of a disjunction
/// (`not (not a and not b ...)`) as `a or b ...`. The result still parses
/// back to the same tree because `or` desugars to exactly that shape.
pub fn print_formula_sugared(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, P_OR, true);
    out
}

/// Disjuncts of `not (d1' and d2' and ...)` where every `di'` is `not di`
/// and the conjunction is nested to the left.
fn as_disjunction(f: &Formula) -> Option<Vec<&Formula>> {
    let Formula::Not(inner) = f else { return None };
    let Formula::And(..) = inner.as_ref() else { return None };
    let mut rev = Vec::new();
    let mut cur = inner.as_ref();
    loop {
        match cur {
            Formula::And(l, r) => {
                let Formula::Not(d) = r.as_ref() else { return None };
                rev.push(d.as_ref());
                cur = l;
            }
            Formula::Not(d) => {
                rev.push(d.as_ref());
                break;
            }
            _ => return None,
        }
    }
    rev.reverse();
    Some(rev)
}

fn prec(f: &Formula, sugar: bool) -> u8 {
    match f {
        Formula::And(..) => P_AND,
        Formula::Not(_) if sugar && as_disjunction(f).is_some() => P_OR,
        _ => P_UNARY,
    }
}

fn write_formula(out: &mut String, f: &Formula, min_prec: u8, sugar: bool) {
    let paren = prec(f, sugar) < min_prec;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Prop(p) => out.push_str(&p.to_string()),
        Formula::Initial => out.push_str("initial"),
        Formula::Terminal => out.push_str("terminal"),
        Formula::Wins(r) => {
            out.push_str("wins(");
            out.push_str(r);
            out.push(')');
        }
        Formula::Legal(a) => {
            out.push_str("legal(");
            write_action(out, a);
            out.push(')');
        }
        Formula::Does(a) => {
            out.push_str("does(");
            write_action(out, a);
            out.push(')');
        }
        Formula::Not(g) => match as_disjunction(f).filter(|_| sugar) {
            Some(ds) => {
                for (i, d) in ds.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" or ");
                    }
                    write_formula(out, d, P_AND, sugar);
                }
            }
            None => {
                out.push_str("not ");
                write_formula(out, g, P_UNARY, sugar);
            }
        },
        Formula::And(l, r) => {
            write_formula(out, l, P_AND, sugar);
            out.push_str(" and ");
            write_formula(out, r, P_UNARY, sugar);
        }
        Formula::Next(g) => {
            out.push_str("next(");
            write_formula(out, g, P_OR, sugar);
            out.push(')');
        }
        Formula::Gt(l, r) => write_cmp(out, l, ">", r),
        Formula::Lt(l, r) => write_cmp(out, l, "<", r),
        Formula::Eq(l, r) => write_cmp(out, l, "=", r),
        Formula::Vals(ts) => {
            out.push_str("vals(");
            write_terms(out, ts);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

fn write_cmp(out: &mut String, l: &NumTerm, op: &str, r: &NumTerm) {
    out.push_str(&l.to_string());
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    out.push_str(&r.to_string());
}

fn write_terms(out: &mut String, ts: &[NumTerm]) {
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&t.to_string());
    }
}

fn write_action(out: &mut String, a: &ActionTerm) {
    out.push_str(&a.name);
    out.push('^');
    out.push_str(&a.agent);
    if !a.args.is_empty() {
        out.push('(');
        write_terms(out, &a.args);
        out.push(')');
    }
}
