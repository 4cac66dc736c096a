use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{GameSignature, GroundAction, JointAction, ModelError, StModel};
use crate::formula::Prop;

/// Handle of a state in a [`FiniteModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateData {
    pub label: String,
    pub props: BTreeSet<Prop>,
    pub vals: Vec<i64>,
}

/// Extensional state-transition model over an explicit state table.
///
/// The builder methods never reject input, so malformed models can be
/// assembled and handed to [`validate_model`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    pub signature: GameSignature,
    pub states: Vec<StateData>,
    pub initial: StateId,
    pub terminal: BTreeSet<StateId>,
    pub goals: BTreeMap<String, BTreeSet<StateId>>,
    pub legal: BTreeMap<StateId, BTreeSet<GroundAction>>,
    pub update: BTreeMap<(StateId, JointAction), StateId>,
    /// Propositions true in every state (kept once instead of per state).
    pub shared_props: BTreeSet<Prop>,
    labels: BTreeMap<String, StateId>,
}

impl FiniteModel {
    pub fn new(signature: GameSignature) -> Self {
        FiniteModel {
            signature,
            states: Vec::new(),
            initial: StateId(0),
            terminal: BTreeSet::new(),
            goals: BTreeMap::new(),
            legal: BTreeMap::new(),
            update: BTreeMap::new(),
            shared_props: BTreeSet::new(),
            labels: BTreeMap::new(),
        }
    }

    pub fn add_state(&mut self, label: impl Into<String>, props: BTreeSet<Prop>, vals: Vec<i64>) -> StateId {
        let id = StateId(self.states.len());
        let label = label.into();
        self.labels.entry(label.clone()).or_insert(id);
        self.states.push(StateData { label, props, vals });
        id
    }

    pub fn set_initial(&mut self, w: StateId) {
        self.initial = w;
    }

    pub fn add_terminal(&mut self, w: StateId) {
        self.terminal.insert(w);
    }

    pub fn add_goal(&mut self, agent: &str, w: StateId) {
        self.goals.entry(agent.to_string()).or_default().insert(w);
    }

    pub fn add_legal(&mut self, w: StateId, a: GroundAction) {
        self.legal.entry(w).or_default().insert(a);
    }

    pub fn add_update(&mut self, w: StateId, d: JointAction, to: StateId) {
        self.update.insert((w, d), to);
    }

    pub fn state_by_label(&self, label: &str) -> Option<StateId> {
        self.labels.get(label).copied()
    }

    pub fn state(&self, w: StateId) -> Option<&StateData> {
        self.states.get(w.0)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    fn name_of(&self, w: StateId) -> String {
        match self.state(w) {
            Some(s) => s.label.clone(),
            None => format!("#{}", w.0),
        }
    }

    fn data(&self, w: StateId) -> Result<&StateData, ModelError> {
        self.state(w).ok_or_else(|| ModelError::UnknownState(format!("#{}", w.0)))
    }
}

impl StModel for FiniteModel {
    type State = StateId;

    fn signature(&self) -> &GameSignature {
        &self.signature
    }

    fn initial(&self) -> StateId {
        self.initial
    }

    fn is_terminal(&self, w: &StateId) -> bool {
        self.terminal.contains(w)
    }

    fn is_legal(&self, w: &StateId, a: &GroundAction) -> bool {
        self.legal.get(w).is_some_and(|s| s.contains(a))
    }

    fn legal_actions(&self, w: &StateId) -> Result<BTreeSet<GroundAction>, ModelError> {
        self.data(*w)?;
        Ok(self.legal.get(w).cloned().unwrap_or_default())
    }

    fn update(&self, w: &StateId, d: &JointAction) -> Result<StateId, ModelError> {
        self.data(*w)?;
        self.update.get(&(*w, d.clone())).copied().ok_or_else(|| ModelError::UpdateUndefined {
            state: self.name_of(*w),
            joint: d.to_string(),
        })
    }

    fn wins(&self, agent: &str, w: &StateId) -> bool {
        self.goals.get(agent).is_some_and(|g| g.contains(w))
    }

    fn has_prop(&self, w: &StateId, p: &Prop) -> bool {
        self.shared_props.contains(p) || self.state(*w).is_some_and(|s| s.props.contains(p))
    }

    fn props(&self, w: &StateId) -> BTreeSet<Prop> {
        let mut out = self.shared_props.clone();
        if let Some(s) = self.state(*w) {
            out.extend(s.props.iter().cloned());
        }
        out
    }

    fn val(&self, w: &StateId, i: usize) -> Option<i64> {
        self.state(*w).and_then(|s| s.vals.get(i).copied())
    }

    fn vals(&self, w: &StateId) -> Vec<i64> {
        self.state(*w).map(|s| s.vals.clone()).unwrap_or_default()
    }

    fn label(&self, w: &StateId) -> String {
        self.name_of(*w)
    }

    fn states(&self) -> Option<Vec<StateId>> {
        Some(self.state_ids().collect())
    }

    fn ground_actions(&self) -> Option<BTreeSet<GroundAction>> {
        let mut out: BTreeSet<GroundAction> = self.legal.values().flatten().cloned().collect();
        for (_, d) in self.update.keys() {
            out.extend(d.0.iter().cloned());
        }
        Some(out)
    }
}

/// One well-formedness failure: what it concerns and what is wrong.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    fn new(subject: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { subject: subject.into(), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

fn check_action(sig: &GameSignature, a: &GroundAction, subject: &str, out: &mut Vec<Diagnostic>) {
    match sig.arity(&a.agent, &a.name) {
        _ if sig.agent_index(&a.agent).is_none() => {
            out.push(Diagnostic::new(subject, format!("action {a} names undeclared agent `{}`", a.agent)))
        }
        None => out.push(Diagnostic::new(subject, format!("action {a} has no schema for agent `{}`", a.agent))),
        Some(n) if n != a.args.len() => {
            out.push(Diagnostic::new(subject, format!("action {a} has {} arguments, schema arity is {n}", a.args.len())))
        }
        Some(_) => {}
    }
}

/// Checks the model invariants: a nonempty signature, valuation lengths,
/// declared propositions, initial/terminal/goal states inside W, and the
/// domains of legality and update. An empty result means the model is valid.
pub fn validate_model(m: &FiniteModel) -> Vec<Diagnostic> {
    let sig = &m.signature;
    let mut out = Vec::new();
    let in_w = |w: &StateId| w.0 < m.states.len();

    if sig.agents.is_empty() {
        out.push(Diagnostic::new("signature", "no agents declared"));
    }
    let distinct: BTreeSet<&String> = sig.agents.iter().collect();
    if distinct.len() != sig.agents.len() {
        out.push(Diagnostic::new("signature", "duplicate agent names"));
    }
    for r in &sig.agents {
        if sig.actions.get(r).is_none_or(|a| a.is_empty()) {
            out.push(Diagnostic::new("signature", format!("agent `{r}` has no actions")));
        }
    }
    for r in sig.actions.keys() {
        if sig.agent_index(r).is_none() {
            out.push(Diagnostic::new("signature", format!("actions declared for unknown agent `{r}`")));
        }
    }
    let vars: BTreeSet<&String> = sig.vars.iter().collect();
    if vars.len() != sig.vars.len() {
        out.push(Diagnostic::new("signature", "duplicate variable names"));
    }

    if m.states.is_empty() {
        out.push(Diagnostic::new("states", "model has no states"));
    }
    let mut seen = BTreeSet::new();
    for s in &m.states {
        if !seen.insert(&s.label) {
            out.push(Diagnostic::new(format!("state {}", s.label), "duplicate state label"));
        }
        if s.vals.len() != sig.vars.len() {
            out.push(Diagnostic::new(
                format!("state {}", s.label),
                format!("valuation has {} components, expected {}", s.vals.len(), sig.vars.len()),
            ));
        }
        for p in s.props.iter().filter(|p| !sig.props.contains(p)) {
            out.push(Diagnostic::new(format!("state {}", s.label), format!("undeclared proposition {p}")));
        }
    }
    for p in m.shared_props.iter().filter(|p| !sig.props.contains(p)) {
        out.push(Diagnostic::new("shared propositions", format!("undeclared proposition {p}")));
    }

    if !in_w(&m.initial) {
        out.push(Diagnostic::new("initial", format!("initial state #{} is not in W", m.initial.0)));
    }
    for w in m.terminal.iter().filter(|w| !in_w(w)) {
        out.push(Diagnostic::new("terminal", format!("state #{} is not in W", w.0)));
    }
    for (r, g) in &m.goals {
        if sig.agent_index(r).is_none() {
            out.push(Diagnostic::new(format!("goal {r}"), "undeclared agent"));
        }
        for w in g.iter().filter(|w| !in_w(w)) {
            out.push(Diagnostic::new(format!("goal {r}"), format!("state #{} is not in W", w.0)));
        }
    }

    for (w, acts) in &m.legal {
        let subject = format!("legal at {}", m.name_of(*w));
        if !in_w(w) {
            out.push(Diagnostic::new(&subject, "state is not in W"));
        }
        for a in acts {
            check_action(sig, a, &subject, &mut out);
        }
    }
    for ((w, d), to) in &m.update {
        let subject = format!("update {} ({d})", m.name_of(*w));
        if !in_w(w) {
            out.push(Diagnostic::new(&subject, "source state is not in W"));
        }
        if !in_w(to) {
            out.push(Diagnostic::new(&subject, format!("target state #{} is not in W", to.0)));
        }
        if !d.matches(sig) {
            out.push(Diagnostic::new(&subject, "joint action does not give one action per agent in order"));
        }
        for a in &d.0 {
            check_action(sig, a, &subject, &mut out);
        }
    }
    out
}

/// [`validate_model`] plus the GDL conditions: no numerical variables and
/// parameterless actions everywhere.
pub fn validate_gdl_model(m: &FiniteModel) -> Vec<Diagnostic> {
    let mut out = validate_model(m);
    if !m.signature.vars.is_empty() {
        out.push(Diagnostic::new("signature", "GDL model declares numerical variables"));
    }
    for (r, acts) in &m.signature.actions {
        for (name, n) in acts.iter().filter(|(_, n)| **n != 0) {
            out.push(Diagnostic::new("signature", format!("action {name}^{r} has arity {n} in a GDL model")));
        }
    }
    out
}
