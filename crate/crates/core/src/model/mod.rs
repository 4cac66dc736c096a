//! Game signatures, state-transition models and paths.
//!
//! Models are consumed through the [`StModel`] trait so that a game can be
//! defined programmatically over an unbounded state space (see
//! [`nim::NimModel`]) or extensionally over a finite table ([`FiniteModel`]),
//! which is what model files load into and what the translations produce.

mod finite;
pub mod io;
pub mod nim;
mod path;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::formula::Prop;

pub use finite::{validate_gdl_model, validate_model, Diagnostic, FiniteModel, StateData, StateId};
pub use nim::{make_nim, NimGame, NimModel, NimState};
pub use path::{
    build_path, collect_complete_paths, enumerate_complete_paths, joint_actions, legal_joint_actions,
    performed_actions, validate_path, CompletePaths, Path, PathError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("update undefined at state `{state}` for joint action ({joint})")]
    UpdateUndefined { state: String, joint: String },
    #[error("joint action ({joint}) does not match the agent order {agents:?}")]
    MalformedJoint { joint: String, agents: Vec<String> },
    #[error("model state space is not enumerable")]
    NotEnumerable,
    #[error("{0}")]
    Invalid(String),
}

/// Agents, per-agent action schemas (name and arity), propositions and the
/// ordered numerical variables of a game.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GameSignature {
    pub agents: Vec<String>,
    pub actions: BTreeMap<String, BTreeMap<String, usize>>,
    pub props: BTreeSet<Prop>,
    pub vars: Vec<String>,
}

impl GameSignature {
    pub fn new(agents: Vec<String>, vars: Vec<String>) -> Self {
        GameSignature { agents, actions: BTreeMap::new(), props: BTreeSet::new(), vars }
    }

    pub fn add_action(&mut self, agent: &str, name: &str, arity: usize) {
        self.actions.entry(agent.to_string()).or_default().insert(name.to_string(), arity);
    }

    pub fn agent_index(&self, agent: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == agent)
    }

    pub fn var_index(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    pub fn arity(&self, agent: &str, action: &str) -> Option<usize> {
        self.actions.get(agent).and_then(|m| m.get(action)).copied()
    }

    /// The unique other agent of a two-agent game.
    pub fn opponent(&self, agent: &str) -> Option<&str> {
        match self.agents.as_slice() {
            [a, b] if a == agent => Some(b),
            [a, b] if b == agent => Some(a),
            _ => None,
        }
    }
}

/// An action with its parameters evaluated: `name^agent(args)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAction {
    pub agent: String,
    pub name: String,
    pub args: Vec<i64>,
}

impl GroundAction {
    pub fn new(agent: impl Into<String>, name: impl Into<String>, args: Vec<i64>) -> Self {
        GroundAction { agent: agent.into(), name: name.into(), args }
    }
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.name, self.agent)?;
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

/// One action per agent, in signature agent order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointAction(pub Vec<GroundAction>);

impl JointAction {
    pub fn new(actions: Vec<GroundAction>) -> Self {
        JointAction(actions)
    }

    pub fn actions(&self) -> &[GroundAction] {
        &self.0
    }

    /// The component of `agent`, if present.
    pub fn of(&self, agent: &str) -> Option<&GroundAction> {
        self.0.iter().find(|a| a.agent == agent)
    }

    /// Exactly one action per agent, in the signature's order.
    pub fn matches(&self, sig: &GameSignature) -> bool {
        self.0.len() == sig.agents.len() && self.0.iter().zip(&sig.agents).all(|(a, r)| &a.agent == r)
    }
}

impl fmt::Display for JointAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Interface to a state-transition model.
pub trait StModel {
    type State: Clone + Eq + Ord + Hash + fmt::Debug;

    fn signature(&self) -> &GameSignature;
    fn initial(&self) -> Self::State;
    fn is_terminal(&self, w: &Self::State) -> bool;
    fn is_legal(&self, w: &Self::State, a: &GroundAction) -> bool;
    fn legal_actions(&self, w: &Self::State) -> Result<BTreeSet<GroundAction>, ModelError>;
    fn update(&self, w: &Self::State, d: &JointAction) -> Result<Self::State, ModelError>;
    fn wins(&self, agent: &str, w: &Self::State) -> bool;
    fn has_prop(&self, w: &Self::State, p: &Prop) -> bool;
    fn props(&self, w: &Self::State) -> BTreeSet<Prop>;
    /// The `i`-th component of the numerical valuation.
    fn val(&self, w: &Self::State, i: usize) -> Option<i64>;
    fn vals(&self, w: &Self::State) -> Vec<i64>;
    fn label(&self, w: &Self::State) -> String;
    /// Every state, when the model is finite and enumerable.
    fn states(&self) -> Option<Vec<Self::State>>;
    /// Every ground action, when the action set is finite and enumerable.
    fn ground_actions(&self) -> Option<BTreeSet<GroundAction>>;
}

/// Free-function form of [`StModel::legal_actions`].
pub fn legal_actions<M: StModel>(m: &M, w: &M::State) -> Result<BTreeSet<GroundAction>, ModelError> {
    m.legal_actions(w)
}

/// Free-function form of [`StModel::update`].
pub fn step<M: StModel>(m: &M, w: &M::State, d: &JointAction) -> Result<M::State, ModelError> {
    m.update(w, d)
}
