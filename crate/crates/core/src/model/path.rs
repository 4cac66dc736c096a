use std::collections::BTreeSet;

use thiserror::Error;

use super::{GroundAction, JointAction, ModelError, StModel};

/// `w0 -d1-> w1 ... -de-> we`. The joint taken at stage `j` is `d_{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path<S> {
    states: Vec<S>,
    joints: Vec<JointAction>,
}

impl<S: Clone> Path<S> {
    /// Assembles a path without checking it; see [`validate_path`].
    pub fn from_parts(states: Vec<S>, joints: Vec<JointAction>) -> Self {
        assert_eq!(states.len(), joints.len() + 1, "a path has one more state than joint actions");
        Path { states, joints }
    }

    /// Number of joint actions `e`.
    pub fn len(&self) -> usize {
        self.joints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joints.is_empty()
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn joints(&self) -> &[JointAction] {
        &self.joints
    }

    /// `δ[j]`; panics past the end.
    pub fn state(&self, j: usize) -> &S {
        &self.states[j]
    }

    pub fn last(&self) -> &S {
        self.states.last().expect("paths are never empty")
    }

    /// `θ(δ, j)`, undefined (None) at `j = |δ|`.
    pub fn joint_at(&self, j: usize) -> Option<&JointAction> {
        self.joints.get(j)
    }

    /// `θ_r(δ, j)`.
    pub fn action_of(&self, agent: &str, j: usize) -> Option<&GroundAction> {
        self.joint_at(j).and_then(|d| d.of(agent))
    }

    pub fn is_complete<M: StModel<State = S>>(&self, m: &M) -> bool {
        m.is_terminal(self.last())
    }

    /// The prefix ending at stage `j`.
    pub fn prefix(&self, j: usize) -> Self {
        Path { states: self.states[..=j].to_vec(), joints: self.joints[..j].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path does not start at the initial state")]
    NotInitial,
    #[error("stage {stage}: state is terminal, the path cannot be extended")]
    PastTerminal { stage: usize },
    #[error("stage {stage}: action {action} of agent {agent} is not legal")]
    IllegalAction { stage: usize, agent: String, action: String },
    #[error("stage {stage}: joint action ({joint}) must give one action per agent in order {agents:?}")]
    MalformedJoint { stage: usize, joint: String, agents: Vec<String> },
    #[error("stage {stage}: successor state does not match the update function")]
    WrongSuccessor { stage: usize },
    #[error("stage {stage}: {source}")]
    Model {
        stage: usize,
        #[source]
        source: ModelError,
    },
}

/// Checks the step from stage `j` (state `w`) with joint `d`.
fn check_step<M: StModel>(m: &M, j: usize, w: &M::State, d: &JointAction) -> Result<(), PathError> {
    if m.is_terminal(w) {
        return Err(PathError::PastTerminal { stage: j });
    }
    let sig = m.signature();
    if !d.matches(sig) {
        return Err(PathError::MalformedJoint { stage: j, joint: d.to_string(), agents: sig.agents.clone() });
    }
    for a in &d.0 {
        if !m.is_legal(w, a) {
            return Err(PathError::IllegalAction { stage: j, agent: a.agent.clone(), action: a.to_string() });
        }
    }
    Ok(())
}

/// Folds `joints` from the initial state, checking terminality, legality and
/// joint shape at each stage.
pub fn build_path<M: StModel>(m: &M, joints: &[JointAction]) -> Result<Path<M::State>, PathError> {
    let mut states = vec![m.initial()];
    for (j, d) in joints.iter().enumerate() {
        let w = &states[j];
        check_step(m, j, w, d)?;
        let next = m.update(w, d).map_err(|source| PathError::Model { stage: j, source })?;
        states.push(next);
    }
    Ok(Path { states, joints: joints.to_vec() })
}

/// Re-checks an existing path: starts at the initial state, only the last
/// state may be terminal, every component is legal, and every successor is
/// the update of its predecessor.
pub fn validate_path<M: StModel>(m: &M, p: &Path<M::State>) -> Result<(), PathError> {
    if p.states[0] != m.initial() {
        return Err(PathError::NotInitial);
    }
    for (j, d) in p.joints.iter().enumerate() {
        check_step(m, j, &p.states[j], d)?;
        let expect = m.update(&p.states[j], d).map_err(|source| PathError::Model { stage: j, source })?;
        if expect != p.states[j + 1] {
            return Err(PathError::WrongSuccessor { stage: j });
        }
    }
    Ok(())
}

/// Cartesian product of per-agent action lists, in agent order.
pub fn joint_actions(per_agent: &[Vec<GroundAction>]) -> Vec<JointAction> {
    let mut out = vec![Vec::new()];
    for acts in per_agent {
        let mut next = Vec::with_capacity(out.len() * acts.len());
        for prefix in &out {
            for a in acts {
                let mut v = prefix.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(JointAction).collect()
}

/// Every joint action whose components are all legal at `w`, sorted.
pub fn legal_joint_actions<M: StModel>(m: &M, w: &M::State) -> Result<Vec<JointAction>, ModelError> {
    let legal = m.legal_actions(w)?;
    let per_agent: Vec<Vec<GroundAction>> = m
        .signature()
        .agents
        .iter()
        .map(|r| legal.iter().filter(|a| &a.agent == r).cloned().collect())
        .collect();
    Ok(joint_actions(&per_agent))
}

/// Depth-first stream of complete paths, in sorted joint-action order.
pub struct CompletePaths<'m, M: StModel> {
    model: &'m M,
    max_depth: usize,
    stack: Vec<Path<M::State>>,
    truncated: bool,
}

impl<M: StModel> CompletePaths<'_, M> {
    /// Whether some incomplete branch hit the depth bound so far.
    pub fn truncated(&self) -> bool {
        self.truncated
    }
}

impl<M: StModel> Iterator for CompletePaths<'_, M> {
    type Item = Result<Path<M::State>, ModelError>;

    fn next(&mut self) -> Option<Self::Item> {
        while let Some(p) = self.stack.pop() {
            let w = p.last();
            if self.model.is_terminal(w) {
                return Some(Ok(p));
            }
            if p.len() >= self.max_depth {
                self.truncated = true;
                continue;
            }
            let joints = match legal_joint_actions(self.model, w) {
                Ok(js) => js,
                Err(e) => return Some(Err(e)),
            };
            let mut children = Vec::with_capacity(joints.len());
            for d in joints {
                match self.model.update(w, &d) {
                    Ok(next) => {
                        let mut child = p.clone();
                        child.states.push(next);
                        child.joints.push(d);
                        children.push(child);
                    }
                    Err(e) => return Some(Err(e)),
                }
            }
            self.stack.extend(children.into_iter().rev());
        }
        None
    }
}

/// Every complete path of length at most `max_depth`, each exactly once.
/// Incomplete branches cut by the bound set [`CompletePaths::truncated`];
/// states with no legal joint action are dead ends and yield nothing.
pub fn enumerate_complete_paths<M: StModel>(m: &M, max_depth: usize) -> CompletePaths<'_, M> {
    let root = Path { states: vec![m.initial()], joints: Vec::new() };
    CompletePaths { model: m, max_depth, stack: vec![root], truncated: false }
}

/// Drains [`enumerate_complete_paths`], returning the paths and the
/// truncation flag.
pub fn collect_complete_paths<M: StModel>(
    m: &M,
    max_depth: usize,
) -> Result<(Vec<Path<M::State>>, bool), ModelError> {
    let mut it = enumerate_complete_paths(m, max_depth);
    let mut out = Vec::new();
    for p in it.by_ref() {
        out.push(p?);
    }
    Ok((out, it.truncated()))
}

/// Ground actions performed anywhere along the path.
pub fn performed_actions<S: Clone>(p: &Path<S>) -> BTreeSet<GroundAction> {
    p.joints.iter().flat_map(|d| d.0.iter().cloned()).collect()
}
