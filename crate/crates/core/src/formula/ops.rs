use std::collections::BTreeSet;

use super::Formula;

/// All subformulas: the formula itself, and recursively the subformulas of
/// the operand(s) of `not`, `next` and `and`. Atoms are not decomposed.
pub fn subformulas(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if !out.insert(g.clone()) {
            continue;
        }
        match g {
            Formula::Not(h) | Formula::Next(h) => stack.push(h),
            Formula::And(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            _ => {}
        }
    }
    out
}

/// Number of atomic-formula occurrences (leaves below the connectives).
pub fn count_atoms(f: &Formula) -> usize {
    let mut n = 0;
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Formula::Not(h) | Formula::Next(h) => stack.push(h),
            Formula::And(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            _ => n += 1,
        }
    }
    n
}

/// Number of formula nodes (connectives plus atoms).
pub fn node_count(f: &Formula) -> usize {
    let mut n = 0;
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        n += 1;
        match g {
            Formula::Not(h) | Formula::Next(h) => stack.push(h),
            Formula::And(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            _ => {}
        }
    }
    n
}
