//! Translations between GDLZ and plain GDL.
//!
//! - [`path`]: restricted to the states and actions of one complete path.
//! - [`complete`]: the whole model under explicit integer bounds, with
//!   variables in formulas grounded by enumeration.
//! - [`embed_gdl`]: a GDL model read as a GDLZ model with no variables.
//!
//! Integers become propositions: the order facts `succ`, `prec`, `smaller`,
//! `bigger`, `equal` over the bound range, and `x(q)` for "variable `x` has
//! value `q`". Parameterized actions become flat names (see
//! [`flatten_action`]).

pub mod complete;
pub mod path;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::eval::EvalError;
use crate::formula::{ActionTerm, Formula, Prop};
use crate::model::{FiniteModel, GameSignature, GroundAction, ModelError, Path, StModel, StateId};

pub use complete::{
    eval_simple_term, finite_model_violations, is_bounded_formula, is_finite_model, remove_var,
    translate_formula_complete, translate_model_complete, translate_path_complete,
};
pub use path::{
    actions_of_path, path_bounds, translate_formula_path, translate_model_path, translate_path, PathFormula,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("the path is not complete: its last state is not terminal")]
    IncompletePath,
    #[error("variable inside a compound term `{0}` cannot be grounded")]
    NestedVariable(String),
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("formula is not bounded: {0}")]
    Unbounded(String),
    #[error("model is not finite under the bounds: {}", .0.join("; "))]
    NotFinite(Vec<String>),
    #[error("invalid bounds: zmin {zmin} > zmax {zmax}")]
    InvalidBounds { zmin: i64, zmax: i64 },
    #[error("flat action name `{flat}` is shared by {first} and {second}")]
    NameCollision { flat: String, first: String, second: String },
    #[error("model is not a GDL model: {0}")]
    NotGdl(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Smallest and largest integer on a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathBounds {
    pub min: i64,
    pub max: i64,
}

/// Integer range of a bounded translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranslationBounds {
    pub zmin: i64,
    pub zmax: i64,
}

impl TranslationBounds {
    pub fn new(zmin: i64, zmax: i64) -> Result<Self, TranslateError> {
        if zmin > zmax {
            return Err(TranslateError::InvalidBounds { zmin, zmax });
        }
        Ok(TranslationBounds { zmin, zmax })
    }

    /// `zmax - zmin`.
    pub fn mu(&self) -> i64 {
        self.zmax - self.zmin
    }

    pub fn contains(&self, v: i64) -> bool {
        self.zmin <= v && v <= self.zmax
    }

    pub fn values(&self) -> std::ops::RangeInclusive<i64> {
        self.zmin..=self.zmax
    }
}

impl From<PathBounds> for TranslationBounds {
    fn from(b: PathBounds) -> Self {
        TranslationBounds { zmin: b.min, zmax: b.max }
    }
}

fn int_prop(name: &str, args: &[i64]) -> Prop {
    Prop::with_ints(name, args)
}

pub fn smaller(a: i64, b: i64) -> Formula {
    Formula::Prop(int_prop("smaller", &[a, b]))
}

pub fn bigger(a: i64, b: i64) -> Formula {
    Formula::Prop(int_prop("bigger", &[a, b]))
}

pub fn equal(a: i64, b: i64) -> Formula {
    Formula::Prop(int_prop("equal", &[a, b]))
}

/// `x(q)`: variable `x` has value `q`.
pub fn var_prop(x: &str, q: i64) -> Prop {
    int_prop(x, &[q])
}

/// The order facts true over `[min, max]`: `succ(z,z+1)`, `prec(z+1,z)`,
/// `equal(z,z)`, and `smaller`/`bigger` for every ordered pair.
pub fn order_props(min: i64, max: i64) -> BTreeSet<Prop> {
    let mut out = BTreeSet::new();
    for a in min..=max {
        out.insert(int_prop("equal", &[a, a]));
        if a < max {
            out.insert(int_prop("succ", &[a, a + 1]));
            out.insert(int_prop("prec", &[a + 1, a]));
        }
        for b in min..=max {
            if a < b {
                out.insert(int_prop("smaller", &[a, b]));
            } else if a > b {
                out.insert(int_prop("bigger", &[a, b]));
            }
        }
    }
    out
}

/// Every order proposition over `[min, max]`, true or not, plus `x(q)` for
/// each variable and value: the numerical part of the translated vocabulary.
pub fn numeric_vocabulary(vars: &[String], min: i64, max: i64) -> BTreeSet<Prop> {
    let mut out = BTreeSet::new();
    for a in min..=max {
        for b in min..=max {
            for name in ["smaller", "bigger", "equal", "succ", "prec"] {
                out.insert(int_prop(name, &[a, b]));
            }
        }
        for x in vars {
            out.insert(var_prop(x, a));
        }
    }
    out
}

fn flat_int(v: i64) -> String {
    if v < 0 {
        format!("m{}", v.unsigned_abs())
    } else {
        v.to_string()
    }
}

/// `name__agent__z1_z2...`; negative integers get an `m` prefix.
pub fn flatten_action(a: &GroundAction) -> String {
    let args: Vec<String> = a.args.iter().map(|v| flat_int(*v)).collect();
    format!("{}__{}__{}", a.name, a.agent, args.join("_"))
}

/// Inverse of [`flatten_action`] for names and agents without `__`.
pub fn unflatten_action(flat: &str) -> Option<GroundAction> {
    let mut parts = flat.rsplitn(3, "__");
    let args = parts.next()?;
    let agent = parts.next()?;
    let name = parts.next()?;
    let args = if args.is_empty() {
        Vec::new()
    } else {
        args.split('_')
            .map(|t| match t.strip_prefix('m') {
                Some(abs) => abs.parse::<i64>().ok().map(|v| -v),
                None => t.parse().ok(),
            })
            .collect::<Option<Vec<_>>>()?
    };
    Some(GroundAction::new(agent, name, args))
}

/// Both directions of the action renaming.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActionMap {
    forward: BTreeMap<GroundAction, String>,
    backward: BTreeMap<String, GroundAction>,
}

impl ActionMap {
    /// Registers `a`, failing if its flat name already stands for another
    /// action.
    pub fn insert(&mut self, a: &GroundAction) -> Result<String, TranslateError> {
        if let Some(f) = self.forward.get(a) {
            return Ok(f.clone());
        }
        let flat = flatten_action(a);
        if let Some(other) = self.backward.get(&flat) {
            return Err(TranslateError::NameCollision { flat, first: other.to_string(), second: a.to_string() });
        }
        self.forward.insert(a.clone(), flat.clone());
        self.backward.insert(flat.clone(), a.clone());
        Ok(flat)
    }

    pub fn flat(&self, a: &GroundAction) -> Option<&str> {
        self.forward.get(a).map(String::as_str)
    }

    pub fn original(&self, flat: &str) -> Option<&GroundAction> {
        self.backward.get(flat)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroundAction, &String)> {
        self.forward.iter()
    }

    /// Sidecar text: `flat<TAB>agent<TAB>name<TAB>args`, sorted by flat name.
    pub fn to_sidecar(&self) -> String {
        let mut out = String::new();
        for (flat, a) in &self.backward {
            let args: Vec<String> = a.args.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{flat}\t{}\t{}\t{}", a.agent, a.name, args.join(","));
        }
        out
    }
}

/// Flat GDL action term for a ground action.
pub fn flat_action_term(a: &GroundAction) -> ActionTerm {
    ActionTerm::new(a.agent.as_str(), flatten_action(a), vec![])
}

/// A translated GDL model together with the renaming and bounds used.
#[derive(Debug, Clone)]
pub struct GdlArtifacts {
    pub model: FiniteModel,
    /// The translated path (path mode only).
    pub path: Option<Path<StateId>>,
    pub action_map: ActionMap,
    /// The order facts true in every state.
    pub order_props: BTreeSet<Prop>,
    /// `(min, max)` of the integer range, or None when there are no integers.
    pub bounds: Option<(i64, i64)>,
}

impl GdlArtifacts {
    /// Declares every flat action mentioned by `f` that the translated
    /// signature lacks. Such actions are never legal in the translated model;
    /// declaring them keeps `not legal(...)` well formed.
    pub fn admit_actions(&mut self, f: &Formula) -> Result<(), TranslateError> {
        let mut pending = Vec::new();
        collect_actions(f, &mut pending);
        for a in pending {
            if !a.args.is_empty() {
                return Err(TranslateError::NotGdl(format!("action {}^{} has arguments", a.name, a.agent)));
            }
            if self.model.signature.arity(&a.agent, &a.name).is_none() {
                self.model.signature.add_action(&a.agent, &a.name, 0);
                if let Some(g) = unflatten_action(&a.name) {
                    self.action_map.insert(&g)?;
                }
            }
        }
        Ok(())
    }

    /// Where a source state landed in the translated model.
    pub fn state_of(&self, label: &str) -> Option<StateId> {
        self.model.state_by_label(label)
    }
}

fn collect_actions<'a>(f: &'a Formula, out: &mut Vec<&'a ActionTerm>) {
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g {
            Formula::Legal(a) | Formula::Does(a) => out.push(a),
            Formula::Not(h) | Formula::Next(h) => stack.push(h),
            Formula::And(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            _ => {}
        }
    }
}

/// Maps a source path into the translated model by state label and flat
/// action names.
fn map_path<M: StModel>(
    m: &M,
    p: &Path<M::State>,
    art: &GdlArtifacts,
) -> Result<Path<StateId>, TranslateError> {
    let states = p
        .states()
        .iter()
        .map(|w| {
            let label = m.label(w);
            art.state_of(&label).ok_or(TranslateError::Model(ModelError::UnknownState(label)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let joints = p
        .joints()
        .iter()
        .map(|d| crate::model::JointAction(d.0.iter().map(|a| GroundAction::new(a.agent.as_str(), flatten_action(a), vec![])).collect()))
        .collect();
    Ok(Path::from_parts(states, joints))
}

/// Translated signature: same agents, the flat actions, source propositions
/// plus the numeric vocabulary, no variables.
fn gdl_signature(src: &GameSignature, map: &ActionMap, range: Option<(i64, i64)>) -> GameSignature {
    let mut sig = GameSignature::new(src.agents.clone(), Vec::new());
    for (a, flat) in map.iter() {
        sig.add_action(&a.agent, flat, 0);
    }
    sig.props = src.props.clone();
    if let Some((lo, hi)) = range {
        sig.props.extend(numeric_vocabulary(&src.vars, lo, hi));
    }
    sig
}

/// Per-state propositions: the source ones plus `x_i(value_i)`.
fn state_props<M: StModel>(m: &M, w: &M::State) -> BTreeSet<Prop> {
    let mut props = m.props(w);
    for (x, v) in m.signature().vars.iter().zip(m.vals(w)) {
        props.insert(var_prop(x, v));
    }
    props
}

/// The GDL model read as a GDLZ model: every proposition is per state, the
/// valuation is the empty tuple and there are no variables.
pub fn embed_gdl(m: &FiniteModel) -> Result<FiniteModel, TranslateError> {
    if !m.signature.vars.is_empty() {
        return Err(TranslateError::NotGdl(format!("declares variables {:?}", m.signature.vars)));
    }
    for (r, acts) in &m.signature.actions {
        if let Some((name, n)) = acts.iter().find(|(_, n)| **n != 0) {
            return Err(TranslateError::NotGdl(format!("action {name}^{r} has arity {n}")));
        }
    }
    let mut out = FiniteModel::new(m.signature.clone());
    for w in m.state_ids() {
        let s = &m.states[w.0];
        out.add_state(s.label.as_str(), m.props(&w), Vec::new());
    }
    out.initial = m.initial;
    out.terminal = m.terminal.clone();
    out.goals = m.goals.clone();
    out.legal = m.legal.clone();
    out.update = m.update.clone();
    Ok(out)
}
