use std::collections::BTreeSet;

use super::{
    bigger, equal, flat_action_term, gdl_signature, map_path, order_props, smaller, state_props, var_prop, ActionMap,
    GdlArtifacts, PathBounds, TranslateError,
};
use crate::eval::{eval_term, ground_action};
use crate::formula::{CmpOp, Formula, NumTerm};
use crate::model::{performed_actions, FiniteModel, GroundAction, JointAction, Path, StModel, StateId};

/// Smallest and largest integer among the action parameters and the state
/// valuations of `p`; None when the path carries no integers at all.
pub fn path_bounds<M: StModel>(m: &M, p: &Path<M::State>) -> Option<PathBounds> {
    let mut values = p.states().iter().flat_map(|w| m.vals(w)).collect::<Vec<_>>();
    values.extend(p.joints().iter().flat_map(|d| d.0.iter().flat_map(|a| a.args.iter().copied())));
    let min = values.iter().copied().min()?;
    let max = values.iter().copied().max()?;
    Some(PathBounds { min, max })
}

/// Every action some agent performs along `p`.
pub fn actions_of_path<S: Clone>(p: &Path<S>) -> BTreeSet<GroundAction> {
    performed_actions(p)
}

/// GDL model restricted to the states and performed actions of the
/// complete path `p`. The last state is the only terminal one, an agent's
/// goal is that state when it wins there, and only performed actions are
/// legal, at the states where they were performed.
pub fn translate_model_path<M: StModel>(m: &M, p: &Path<M::State>) -> Result<GdlArtifacts, TranslateError> {
    if !p.is_complete(m) {
        return Err(TranslateError::IncompletePath);
    }
    let bounds = path_bounds(m, p);
    let range = bounds.map(|b| (b.min, b.max));
    let mut map = ActionMap::default();
    for a in actions_of_path(p) {
        map.insert(&a)?;
    }

    let mut model = FiniteModel::new(gdl_signature(m.signature(), &map, range));
    let mut ids: Vec<StateId> = Vec::with_capacity(p.states().len());
    for w in p.states() {
        let label = m.label(w);
        let id = match model.state_by_label(&label) {
            Some(id) => id,
            None => model.add_state(label, state_props(m, w), Vec::new()),
        };
        ids.push(id);
    }
    model.set_initial(ids[0]);
    let last = *ids.last().expect("paths are never empty");
    model.add_terminal(last);
    for r in &m.signature().agents {
        model.goals.insert(r.clone(), BTreeSet::new());
        if m.wins(r, p.last()) {
            model.add_goal(r, last);
        }
    }
    for (j, d) in p.joints().iter().enumerate() {
        let flat: Vec<GroundAction> =
            d.0.iter().map(|a| GroundAction::new(a.agent.as_str(), map.flat(a).expect("registered"), vec![])).collect();
        for a in &flat {
            model.add_legal(ids[j], a.clone());
        }
        model.add_update(ids[j], JointAction(flat), ids[j + 1]);
    }
    if let Some((lo, hi)) = range {
        model.shared_props = order_props(lo, hi);
    }

    let mut art =
        GdlArtifacts { order_props: model.shared_props.clone(), model, path: None, action_map: map, bounds: range };
    art.path = Some(map_path(m, p, &art)?);
    Ok(art)
}

/// The source path with every action replaced by its flat name.
pub fn translate_path<M: StModel>(
    m: &M,
    p: &Path<M::State>,
    art: &GdlArtifacts,
) -> Result<Path<StateId>, TranslateError> {
    map_path(m, p, art)
}

/// A translated formula with the number of times three special cases fired:
/// `legal` of an action other than the one performed (translated negated),
/// `next` at the last stage (translated to a tautology), and a comparison or
/// `vals` atom with a value outside the path's range (translated to its
/// constant truth value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFormula {
    pub formula: Formula,
    pub legal_else: usize,
    pub last_next: usize,
    pub out_of_range: usize,
}

struct PathCtx<'a, M: StModel> {
    m: &'a M,
    p: &'a Path<M::State>,
    bounds: Option<PathBounds>,
    legal_else: usize,
    last_next: usize,
    out_of_range: usize,
}

impl<M: StModel> PathCtx<'_, M> {
    /// The value of `z` at stage `j`, and whether the path vocabulary has
    /// facts for it.
    fn value(&self, j: usize, z: &NumTerm) -> Result<(i64, bool), TranslateError> {
        let v = eval_term(self.m, self.p.state(j), z)?;
        Ok((v, self.bounds.is_some_and(|b| b.min <= v && v <= b.max)))
    }

    fn compare(&mut self, j: usize, l: &NumTerm, r: &NumTerm, op: CmpOp) -> Result<Formula, TranslateError> {
        let ((a, a_in), (b, b_in)) = (self.value(j, l)?, self.value(j, r)?);
        if a_in && b_in {
            return Ok(match op {
                CmpOp::Gt => bigger(a, b),
                CmpOp::Lt => smaller(a, b),
                _ => equal(a, b),
            });
        }
        self.out_of_range += 1;
        let truth = match op {
            CmpOp::Gt => a > b,
            CmpOp::Lt => a < b,
            _ => a == b,
        };
        Ok(if truth { Formula::top() } else { Formula::bottom() })
    }

    fn tr(&mut self, f: &Formula, j: usize) -> Result<Formula, TranslateError> {
        Ok(match f {
            Formula::Prop(_) | Formula::Initial | Formula::Terminal | Formula::Wins(_) => f.clone(),
            Formula::Not(g) => Formula::not(self.tr(g, j)?),
            Formula::And(l, r) => Formula::and(self.tr(l, j)?, self.tr(r, j)?),
            Formula::Next(g) if j < self.p.len() => Formula::next(self.tr(g, j + 1)?),
            Formula::Next(_) => {
                self.last_next += 1;
                match self.bounds {
                    Some(b) => equal(b.min, b.min),
                    None => Formula::top(),
                }
            }
            Formula::Legal(a) => {
                let g = ground_action(self.m, self.p.state(j), a)?;
                let atom = Formula::Legal(flat_action_term(&g));
                if self.p.action_of(&a.agent, j) == Some(&g) {
                    atom
                } else {
                    self.legal_else += 1;
                    Formula::not(atom)
                }
            }
            Formula::Does(a) => Formula::Does(flat_action_term(&ground_action(self.m, self.p.state(j), a)?)),
            Formula::Gt(l, r) => self.compare(j, l, r, CmpOp::Gt)?,
            Formula::Lt(l, r) => self.compare(j, l, r, CmpOp::Lt)?,
            Formula::Eq(l, r) => self.compare(j, l, r, CmpOp::Eq)?,
            Formula::Vals(ts) => {
                let vars = &self.m.signature().vars;
                let mut parts = Vec::with_capacity(ts.len());
                for (z, x) in ts.iter().zip(vars) {
                    match self.value(j, z)? {
                        (v, true) => parts.push(Formula::Prop(var_prop(x, v))),
                        // no state of the path takes this value
                        (_, false) => {
                            self.out_of_range += 1;
                            return Ok(Formula::bottom());
                        }
                    }
                }
                Formula::conjunction(parts)
            }
        })
    }
}

/// Translation of `f` relative to stage `j` of `p`: terms are replaced by
/// their values at the stage they are evaluated, comparisons by order facts,
/// `vals` by `x_i(value)` conjunctions and actions by flat names. A value
/// outside the path's range has no facts, so its atom becomes a constant.
pub fn translate_formula_path<M: StModel>(
    m: &M,
    p: &Path<M::State>,
    f: &Formula,
    j: usize,
) -> Result<PathFormula, TranslateError> {
    if j > p.len() {
        return Err(crate::eval::EvalError::StageOutOfRange { stage: j, len: p.len() }.into());
    }
    crate::eval::check_conformance(m.signature(), f)?;
    let mut ctx = PathCtx { m, p, bounds: path_bounds(m, p), legal_else: 0, last_next: 0, out_of_range: 0 };
    let formula = ctx.tr(f, j)?;
    Ok(PathFormula { formula, legal_else: ctx.legal_else, last_next: ctx.last_next, out_of_range: ctx.out_of_range })
}
