use super::EvalError;
use crate::formula::{ActionTerm, NumTerm};
use crate::model::{GroundAction, StModel};

fn combine(z: &NumTerm, l: i64, r: i64) -> Result<i64, EvalError> {
    let v = match z {
        NumTerm::Add(..) => l.checked_add(r),
        NumTerm::Sub(..) => l.checked_sub(r),
        NumTerm::Min(..) => Some(l.min(r)),
        NumTerm::Max(..) => Some(l.max(r)),
        NumTerm::Int(_) | NumTerm::Var(_) => unreachable!("leaf terms are not combined"),
    };
    v.ok_or_else(|| EvalError::Overflow(z.to_string()))
}

fn eval_with(z: &NumTerm, var: &mut impl FnMut(&str) -> Result<i64, EvalError>) -> Result<i64, EvalError> {
    match z {
        NumTerm::Int(v) => Ok(*v),
        NumTerm::Var(x) => var(x),
        NumTerm::Add(l, r) | NumTerm::Sub(l, r) | NumTerm::Min(l, r) | NumTerm::Max(l, r) => {
            let (a, b) = (eval_with(l, var)?, eval_with(r, var)?);
            combine(z, a, b)
        }
    }
}

/// Value of `z` at state `w`: variables read the state's valuation,
/// `add`/`sub` use checked arithmetic, `min`/`max` pick the smaller/larger.
pub fn eval_term<M: StModel>(m: &M, w: &M::State, z: &NumTerm) -> Result<i64, EvalError> {
    let sig = m.signature();
    eval_with(z, &mut |x| {
        let i = sig.var_index(x).ok_or_else(|| EvalError::UndeclaredVariable(x.to_string()))?;
        m.val(w, i).ok_or_else(|| EvalError::MissingValue(x.to_string()))
    })
}

/// Value of a variable-free term.
pub fn eval_closed_term(z: &NumTerm) -> Result<i64, EvalError> {
    eval_with(z, &mut |x| Err(EvalError::UnexpectedVariable(x.to_string())))
}

/// The action term with its arguments evaluated at `w`.
pub fn ground_action<M: StModel>(m: &M, w: &M::State, a: &ActionTerm) -> Result<GroundAction, EvalError> {
    let args = a.args.iter().map(|z| eval_term(m, w, z)).collect::<Result<Vec<_>, _>>()?;
    Ok(GroundAction::new(a.agent.as_str(), a.name.as_str(), args))
}
