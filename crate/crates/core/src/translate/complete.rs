use std::collections::{BTreeMap, BTreeSet};

use super::{
    bigger, equal, flat_action_term, gdl_signature, map_path, order_props, smaller, state_props, var_prop, ActionMap,
    GdlArtifacts, TranslateError, TranslationBounds,
};
use crate::eval::{eval_closed_term, EvalError};
use crate::formula::{ActionTerm, Formula, NumTerm};
use crate::model::{joint_actions, FiniteModel, GroundAction, JointAction, ModelError, Path, StModel, StateId};

/// Reasons `m` is not finite under `b`: action parameters or valuation
/// components outside the bounds. Errors when the model cannot enumerate its
/// states or actions.
pub fn finite_model_violations<M: StModel>(m: &M, b: TranslationBounds) -> Result<Vec<String>, TranslateError> {
    let states = m.states().ok_or(ModelError::NotEnumerable)?;
    let actions = m.ground_actions().ok_or(ModelError::NotEnumerable)?;
    let mut out = Vec::new();
    for a in &actions {
        if let Some(v) = a.args.iter().find(|v| !b.contains(**v)) {
            out.push(format!("action {a} has parameter {v} outside [{}, {}]", b.zmin, b.zmax));
        }
    }
    for w in &states {
        if let Some(v) = m.vals(w).into_iter().find(|v| !b.contains(*v)) {
            out.push(format!("state {} has value {v} outside [{}, {}]", m.label(w), b.zmin, b.zmax));
        }
    }
    Ok(out)
}

/// Finite states and actions, with every parameter and valuation component
/// inside the bounds.
pub fn is_finite_model<M: StModel>(m: &M, b: TranslationBounds) -> Result<bool, TranslateError> {
    Ok(finite_model_violations(m, b)?.is_empty())
}

/// GDL model over all states and actions of a finite model: states, initial,
/// terminal and goal sets are kept, every legal action and every defined
/// update is carried over under flat action names.
pub fn translate_model_complete<M: StModel>(m: &M, b: TranslationBounds) -> Result<GdlArtifacts, TranslateError> {
    let violations = finite_model_violations(m, b)?;
    if !violations.is_empty() {
        return Err(TranslateError::NotFinite(violations));
    }
    let states = m.states().ok_or(ModelError::NotEnumerable)?;
    let actions = m.ground_actions().ok_or(ModelError::NotEnumerable)?;
    let mut map = ActionMap::default();
    for a in &actions {
        map.insert(a)?;
    }
    let sig = m.signature();
    let mut model = FiniteModel::new(gdl_signature(sig, &map, Some((b.zmin, b.zmax))));
    let mut ids: BTreeMap<M::State, StateId> = BTreeMap::new();
    for w in &states {
        ids.insert(w.clone(), model.add_state(m.label(w), state_props(m, w), Vec::new()));
    }
    let initial = m.initial();
    model.set_initial(*ids.get(&initial).ok_or_else(|| ModelError::UnknownState(m.label(&initial)))?);
    for r in &sig.agents {
        model.goals.insert(r.clone(), BTreeSet::new());
    }

    let flat = |a: &GroundAction| GroundAction::new(a.agent.as_str(), map.flat(a).expect("registered"), vec![]);
    let per_agent: Vec<Vec<GroundAction>> =
        sig.agents.iter().map(|r| actions.iter().filter(|a| &a.agent == r).cloned().collect()).collect();
    let joints = joint_actions(&per_agent);
    for w in &states {
        let id = ids[w];
        if m.is_terminal(w) {
            model.add_terminal(id);
        }
        for r in &sig.agents {
            if m.wins(r, w) {
                model.add_goal(r, id);
            }
        }
        for a in m.legal_actions(w)? {
            model.add_legal(id, flat(&a));
        }
        for d in &joints {
            match m.update(w, d) {
                Ok(next) => {
                    let to = *ids.get(&next).ok_or_else(|| ModelError::UnknownState(m.label(&next)))?;
                    model.add_update(id, JointAction(d.0.iter().map(flat).collect()), to);
                }
                Err(ModelError::UpdateUndefined { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    model.shared_props = order_props(b.zmin, b.zmax);
    Ok(GdlArtifacts {
        order_props: model.shared_props.clone(),
        model,
        path: None,
        action_map: map,
        bounds: Some((b.zmin, b.zmax)),
    })
}

/// A path of the finite model with flat action names.
pub fn translate_path_complete<M: StModel>(
    m: &M,
    p: &Path<M::State>,
    art: &GdlArtifacts,
) -> Result<Path<StateId>, TranslateError> {
    map_path(m, p, art)
}

/// Value of a variable-free term.
pub fn eval_simple_term(z: &NumTerm) -> Result<i64, TranslateError> {
    Ok(eval_closed_term(z)?)
}

fn atom_terms(f: &Formula) -> Vec<&NumTerm> {
    match f {
        Formula::Legal(a) | Formula::Does(a) => a.args.iter().collect(),
        Formula::Vals(ts) => ts.iter().collect(),
        Formula::Gt(l, r) | Formula::Lt(l, r) | Formula::Eq(l, r) => vec![l, r],
        _ => Vec::new(),
    }
}

fn replace_term(f: &Formula, i: usize, t: NumTerm) -> Formula {
    let with = |args: &[NumTerm]| {
        let mut v = args.to_vec();
        v[i] = t.clone();
        v
    };
    let pair = |l: &NumTerm, r: &NumTerm| if i == 0 { (t.clone(), r.clone()) } else { (l.clone(), t.clone()) };
    match f {
        Formula::Legal(a) => Formula::Legal(ActionTerm { args: with(&a.args), ..a.clone() }),
        Formula::Does(a) => Formula::Does(ActionTerm { args: with(&a.args), ..a.clone() }),
        Formula::Vals(ts) => Formula::Vals(with(ts)),
        Formula::Gt(l, r) => {
            let (l, r) = pair(l, r);
            Formula::Gt(l, r)
        }
        Formula::Lt(l, r) => {
            let (l, r) = pair(l, r);
            Formula::Lt(l, r)
        }
        Formula::Eq(l, r) => {
            let (l, r) = pair(l, r);
            Formula::Eq(l, r)
        }
        _ => f.clone(),
    }
}

fn ground_atom(f: &Formula, vars: &[String], b: TranslationBounds) -> Result<Formula, TranslateError> {
    let terms = atom_terms(f);
    let bare = terms.iter().enumerate().find_map(|(i, t)| match t {
        NumTerm::Var(x) if vars.contains(x) => Some((i, x.clone())),
        _ => None,
    });
    if let Some((i, x)) = bare {
        let disjuncts = b
            .values()
            .map(|q| {
                let inner = ground_atom(&replace_term(f, i, NumTerm::Int(q)), vars, b)?;
                Ok(Formula::and(inner, Formula::Prop(var_prop(&x, q))))
            })
            .collect::<Result<Vec<_>, TranslateError>>()?;
        return Ok(Formula::disjunction(disjuncts));
    }
    for t in terms {
        let mut var = None;
        t.for_each_var(&mut |x| {
            var.get_or_insert_with(|| x.to_string());
        });
        match (t, var) {
            (_, None) => {}
            (NumTerm::Var(x), Some(_)) => return Err(TranslateError::UndeclaredVariable(x.clone())),
            (_, Some(_)) => return Err(TranslateError::NestedVariable(t.to_string())),
        }
    }
    Ok(f.clone())
}

/// Grounds every variable that is a direct argument of an atom: the atom
/// becomes the disjunction over `q` in the bounds of the atom with `q`
/// substituted, conjoined with `x(q)`. The first variable position is
/// grounded first and the rest recursively. Variables nested inside
/// `add`/`sub`/`min`/`max` are rejected.
pub fn remove_var(f: &Formula, vars: &[String], b: TranslationBounds) -> Result<Formula, TranslateError> {
    Ok(match f {
        Formula::Not(g) => Formula::not(remove_var(g, vars, b)?),
        Formula::Next(g) => Formula::next(remove_var(g, vars, b)?),
        Formula::And(l, r) => Formula::and(remove_var(l, vars, b)?, remove_var(r, vars, b)?),
        atom => ground_atom(atom, vars, b)?,
    })
}

fn unbounded_term(f: &Formula, vars: &[String], b: TranslationBounds) -> Option<String> {
    let mut bad = None;
    f.for_each_term(&mut |t| {
        if bad.is_some() {
            return;
        }
        match t {
            NumTerm::Var(x) if vars.contains(x) => {}
            NumTerm::Var(x) => bad = Some(format!("undeclared variable `{x}`")),
            _ if !t.is_closed() => bad = Some(format!("`{t}` has a variable inside a compound term")),
            _ => match eval_closed_term(t) {
                Ok(v) if b.contains(v) => {}
                Ok(v) => bad = Some(format!("`{t}` = {v} lies outside [{}, {}]", b.zmin, b.zmax)),
                Err(e) => bad = Some(e.to_string()),
            },
        }
    });
    bad
}

/// Every numerical term is a bare declared variable or a variable-free term
/// whose value lies in the bounds.
pub fn is_bounded_formula(f: &Formula, vars: &[String], b: TranslationBounds) -> bool {
    unbounded_term(f, vars, b).is_none()
}

fn trz(f: &Formula, vars: &[String]) -> Result<Formula, TranslateError> {
    let v = eval_simple_term;
    let ground = |a: &ActionTerm| -> Result<GroundAction, TranslateError> {
        let args = a.args.iter().map(v).collect::<Result<Vec<_>, _>>()?;
        Ok(GroundAction::new(a.agent.as_str(), a.name.as_str(), args))
    };
    Ok(match f {
        Formula::Prop(_) | Formula::Initial | Formula::Terminal | Formula::Wins(_) => f.clone(),
        Formula::Not(g) => Formula::not(trz(g, vars)?),
        Formula::Next(g) => Formula::next(trz(g, vars)?),
        Formula::And(l, r) => Formula::and(trz(l, vars)?, trz(r, vars)?),
        Formula::Legal(a) => Formula::Legal(flat_action_term(&ground(a)?)),
        Formula::Does(a) => Formula::Does(flat_action_term(&ground(a)?)),
        Formula::Gt(l, r) => bigger(v(l)?, v(r)?),
        Formula::Lt(l, r) => smaller(v(l)?, v(r)?),
        Formula::Eq(l, r) => equal(v(l)?, v(r)?),
        Formula::Vals(ts) => {
            if ts.len() != vars.len() {
                return Err(EvalError::Conformance(vec![format!(
                    "vals has {} components, the signature has {} variables",
                    ts.len(),
                    vars.len()
                )])
                .into());
            }
            let parts =
                ts.iter().zip(vars).map(|(z, x)| Ok(Formula::Prop(var_prop(x, v(z)?)))).collect::<Result<Vec<_>, TranslateError>>()?;
            Formula::conjunction(parts)
        }
    })
}

/// Translation of a bounded formula: ground its variables with
/// [`remove_var`], then fold the variable-free terms into order facts,
/// `x_i(value)` conjunctions and flat action names.
pub fn translate_formula_complete(
    f: &Formula,
    vars: &[String],
    b: TranslationBounds,
) -> Result<Formula, TranslateError> {
    if let Some(reason) = unbounded_term(f, vars, b) {
        return Err(TranslateError::Unbounded(reason));
    }
    trz(&remove_var(f, vars, b)?, vars)
}
