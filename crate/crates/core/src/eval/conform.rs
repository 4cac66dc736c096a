use std::collections::BTreeSet;

use super::EvalError;
use crate::formula::{ActionTerm, Formula, NumTerm};
use crate::model::GameSignature;

fn check_term(sig: &GameSignature, z: &NumTerm, out: &mut BTreeSet<String>) {
    z.for_each_var(&mut |x| {
        if sig.var_index(x).is_none() {
            out.insert(format!("undeclared variable `{x}`"));
        }
    });
}

fn check_action(sig: &GameSignature, a: &ActionTerm, out: &mut BTreeSet<String>) {
    if sig.agent_index(&a.agent).is_none() {
        out.insert(format!("undeclared agent `{}`", a.agent));
    } else {
        match sig.arity(&a.agent, &a.name) {
            None => {
                out.insert(format!("agent `{}` has no action `{}`", a.agent, a.name));
            }
            Some(n) if n != a.args.len() => {
                out.insert(format!("action `{}^{}` takes {n} arguments, got {}", a.name, a.agent, a.args.len()));
            }
            Some(_) => {}
        }
    }
    for z in &a.args {
        check_term(sig, z, out);
    }
}

/// Every way `f` fails to fit `sig`: undeclared propositions, agents,
/// actions or variables, wrong action arity, and `vals` lists whose length
/// differs from the number of variables. Sorted and deduplicated.
pub fn conformance_issues(sig: &GameSignature, f: &Formula) -> Vec<String> {
    let mut out = BTreeSet::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Formula::Prop(p) => {
                if !sig.props.contains(p) {
                    out.insert(format!("undeclared proposition `{p}`"));
                }
            }
            Formula::Initial | Formula::Terminal => {}
            Formula::Wins(r) => {
                if sig.agent_index(r).is_none() {
                    out.insert(format!("undeclared agent `{r}`"));
                }
            }
            Formula::Legal(a) | Formula::Does(a) => check_action(sig, a, &mut out),
            Formula::Not(h) | Formula::Next(h) => stack.push(h),
            Formula::And(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            Formula::Gt(l, r) | Formula::Lt(l, r) | Formula::Eq(l, r) => {
                check_term(sig, l, &mut out);
                check_term(sig, r, &mut out);
            }
            Formula::Vals(ts) => {
                if ts.len() != sig.vars.len() {
                    out.insert(format!("vals has {} components, the signature has {} variables", ts.len(), sig.vars.len()));
                }
                for z in ts {
                    check_term(sig, z, &mut out);
                }
            }
        }
    }
    out.into_iter().collect()
}

pub fn check_conformance(sig: &GameSignature, f: &Formula) -> Result<(), EvalError> {
    let issues = conformance_issues(sig, f);
    if issues.is_empty() {
        Ok(())
    } else {
        Err(EvalError::Conformance(issues))
    }
}
