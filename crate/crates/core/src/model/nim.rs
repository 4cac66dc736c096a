//! The `<γ1,...,γk>`-Nim family: `k` heaps, two players taking turns to
//! remove sticks from one heap; whoever does not hold the turn when every
//! heap is empty wins.

use std::collections::{BTreeMap, BTreeSet};

use super::{joint_actions, FiniteModel, GameSignature, GroundAction, JointAction, ModelError, StModel, StateId};
use crate::formula::{desugar, ActionTerm, CmpOp, ExtFormula, Formula, NumTerm, Prop, RuleSet};

pub const PLAYER1: &str = "Player1";
pub const PLAYER2: &str = "Player2";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NimState {
    /// Index of the agent holding the turn.
    pub turn: usize,
    pub heaps: Vec<i64>,
}

/// Nim over unbounded heap values, defined by its legality and update
/// functions rather than by a state table.
#[derive(Debug, Clone)]
pub struct NimModel {
    gammas: Vec<i64>,
    signature: GameSignature,
}

fn turn_prop(agent: &str) -> Prop {
    Prop::with_sym("turn", agent)
}

pub fn nim_signature(k: usize) -> GameSignature {
    let vars = (1..=k).map(|i| format!("heap_{i}")).collect();
    let mut sig = GameSignature::new(vec![PLAYER1.to_string(), PLAYER2.to_string()], vars);
    for r in [PLAYER1, PLAYER2] {
        sig.add_action(r, "reduce", 2);
        sig.add_action(r, "noop", 0);
        sig.props.insert(turn_prop(r));
    }
    sig
}

impl NimModel {
    pub fn new(gammas: &[i64]) -> Result<Self, ModelError> {
        if gammas.is_empty() {
            return Err(ModelError::Invalid("Nim needs at least one heap".into()));
        }
        if let Some(g) = gammas.iter().find(|g| **g < 1) {
            return Err(ModelError::Invalid(format!("heap sizes must be at least 1, got {g}")));
        }
        Ok(NimModel { gammas: gammas.to_vec(), signature: nim_signature(gammas.len()) })
    }

    pub fn gammas(&self) -> &[i64] {
        &self.gammas
    }

    fn agent_idx(&self, agent: &str) -> Option<usize> {
        self.signature.agent_index(agent)
    }
}

impl StModel for NimModel {
    type State = NimState;

    fn signature(&self) -> &GameSignature {
        &self.signature
    }

    fn initial(&self) -> NimState {
        NimState { turn: 0, heaps: self.gammas.clone() }
    }

    fn is_terminal(&self, w: &NimState) -> bool {
        w.heaps.iter().all(|h| *h == 0)
    }

    fn is_legal(&self, w: &NimState, a: &GroundAction) -> bool {
        let Some(r) = self.agent_idx(&a.agent) else { return false };
        match (a.name.as_str(), a.args.as_slice()) {
            ("reduce", [m, s]) => {
                r == w.turn && *m >= 1 && (*m as usize) <= w.heaps.len() && 1 <= *s && *s <= w.heaps[*m as usize - 1]
            }
            ("noop", []) => r != w.turn,
            _ => false,
        }
    }

    fn legal_actions(&self, w: &NimState) -> Result<BTreeSet<GroundAction>, ModelError> {
        let mut out = BTreeSet::new();
        for (r, agent) in self.signature.agents.iter().enumerate() {
            if r == w.turn {
                for (i, h) in w.heaps.iter().enumerate() {
                    for s in 1..=*h {
                        out.insert(GroundAction::new(agent.as_str(), "reduce", vec![i as i64 + 1, s]));
                    }
                }
            } else {
                out.insert(GroundAction::new(agent.as_str(), "noop", vec![]));
            }
        }
        Ok(out)
    }

    /// A `(reduce^r(m,s), noop^-r)` joint flips the turn and takes `s` sticks
    /// from heap `m` when `1 <= s <= x_m`; every other joint is the identity.
    fn update(&self, w: &NimState, d: &JointAction) -> Result<NimState, ModelError> {
        if !d.matches(&self.signature) {
            return Err(ModelError::MalformedJoint { joint: d.to_string(), agents: self.signature.agents.clone() });
        }
        let reduce = d.0.iter().find(|a| a.name == "reduce" && a.args.len() == 2);
        let noop = d.0.iter().find(|a| a.name == "noop" && a.args.is_empty());
        let (Some(red), Some(_)) = (reduce, noop) else { return Ok(w.clone()) };
        let mut next = w.clone();
        next.turn = 1 - w.turn;
        let (m, s) = (red.args[0], red.args[1]);
        if m >= 1 && (m as usize) <= w.heaps.len() {
            let x = &mut next.heaps[m as usize - 1];
            if 1 <= s && s <= *x {
                *x -= s;
            }
        }
        Ok(next)
    }

    fn wins(&self, agent: &str, w: &NimState) -> bool {
        self.agent_idx(agent).is_some_and(|r| r != w.turn) && self.is_terminal(w)
    }

    fn has_prop(&self, w: &NimState, p: &Prop) -> bool {
        *p == turn_prop(&self.signature.agents[w.turn])
    }

    fn props(&self, w: &NimState) -> BTreeSet<Prop> {
        BTreeSet::from([turn_prop(&self.signature.agents[w.turn])])
    }

    fn val(&self, w: &NimState, i: usize) -> Option<i64> {
        w.heaps.get(i).copied()
    }

    fn vals(&self, w: &NimState) -> Vec<i64> {
        w.heaps.clone()
    }

    fn label(&self, w: &NimState) -> String {
        let mut s = format!("p{}", w.turn + 1);
        for h in &w.heaps {
            s.push('_');
            s.push_str(&h.to_string());
        }
        s
    }

    fn states(&self) -> Option<Vec<NimState>> {
        None
    }

    fn ground_actions(&self) -> Option<BTreeSet<GroundAction>> {
        None
    }
}

/// Output of [`make_nim`].
#[derive(Debug, Clone)]
pub struct NimGame {
    pub signature: GameSignature,
    /// The finite fragment with heap values in `0..=γ_i` and both turns.
    pub model: FiniteModel,
    /// The eight rule schemas, instantiated.
    pub rules: RuleSet,
    /// The same rules before desugaring, as written to rule files.
    pub ext_rules: Vec<ExtFormula>,
    pub intensional: NimModel,
    index: BTreeMap<NimState, StateId>,
}

impl NimGame {
    pub fn state_id(&self, w: &NimState) -> Option<StateId> {
        self.index.get(w).copied()
    }

    /// Rule file text: a header comment and one rule per line.
    pub fn rules_text(&self) -> String {
        let heaps: Vec<String> = self.intensional.gammas.iter().map(|g| g.to_string()).collect();
        let mut out = format!("# <{}>-Nim\n", heaps.join(","));
        for r in &self.ext_rules {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

fn heap_tuples(bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (lo, hi) in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (*lo..=*hi).map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Per-agent action set of the fragment: `reduce(m,s)` for `1 <= s <= γ_m`,
/// plus `noop`.
pub fn nim_actions(gammas: &[i64], agent: &str) -> Vec<GroundAction> {
    let mut out = Vec::new();
    for (i, g) in gammas.iter().enumerate() {
        for s in 1..=*g {
            out.push(GroundAction::new(agent, "reduce", vec![i as i64 + 1, s]));
        }
    }
    out.push(GroundAction::new(agent, "noop", vec![]));
    out
}

fn atom(f: Formula) -> ExtFormula {
    ExtFormula::atom(f)
}

fn turn(agent: &str) -> ExtFormula {
    atom(Formula::Prop(turn_prop(agent)))
}

fn vals(t: &[i64]) -> ExtFormula {
    atom(Formula::Vals(t.iter().map(|v| NumTerm::Int(*v)).collect()))
}

/// The eight rule schemas, expanded over the finite index ranges.
pub fn nim_rules(gammas: &[i64]) -> Vec<ExtFormula> {
    let k = gammas.len();
    let players = [(PLAYER1, PLAYER2), (PLAYER2, PLAYER1)];
    let zeros = vec![0; k];
    let reduce = |r: &str, m: i64, s: i64| ActionTerm::new(r, "reduce", vec![NumTerm::Int(m), NumTerm::Int(s)]);
    let mut rules = Vec::with_capacity(8);

    rules.push(ExtFormula::iff(
        atom(Formula::Initial),
        ExtFormula::and_all([turn(PLAYER1), ExtFormula::not(turn(PLAYER2)), vals(gammas)]),
    ));
    rules.push(ExtFormula::and_all(players.iter().map(|(r, o)| {
        ExtFormula::iff(
            atom(Formula::Wins(r.to_string())),
            ExtFormula::and_all([ExtFormula::not(turn(r)), turn(o), vals(&zeros)]),
        )
    })));
    rules.push(ExtFormula::iff(atom(Formula::Terminal), vals(&zeros)));

    let mut legal = Vec::new();
    for (r, _) in players {
        for (i, g) in gammas.iter().enumerate() {
            let m = i as i64 + 1;
            for s in 1..=*g {
                let range = ExtFormula::Cmp(
                    NumTerm::Int(1),
                    vec![(CmpOp::Le, NumTerm::Int(s)), (CmpOp::Le, NumTerm::var(format!("heap_{m}")))],
                );
                legal.push(ExtFormula::iff(
                    atom(Formula::Legal(reduce(r, m, s))),
                    ExtFormula::and(range, turn(r)),
                ));
            }
        }
    }
    rules.push(ExtFormula::and_all(legal));

    rules.push(ExtFormula::and_all(players.iter().map(|(r, _)| {
        ExtFormula::iff(
            atom(Formula::Legal(ActionTerm::new(*r, "noop", vec![]))),
            ExtFormula::not(turn(r)),
        )
    })));

    let positive: Vec<(i64, i64)> = gammas.iter().map(|g| (1, *g)).collect();
    let tuples = heap_tuples(&positive);
    rules.push(ExtFormula::and_all(tuples.iter().map(|h| {
        ExtFormula::implies(ExtFormula::and(atom(Formula::Terminal), vals(h)), ExtFormula::next(vals(h)))
    })));

    let mut effects = Vec::new();
    for h in &tuples {
        for (r, _) in players {
            for (i, g) in gammas.iter().enumerate() {
                let m = i as i64 + 1;
                for s in 1..=*g {
                    let mut after: Vec<NumTerm> = h.iter().map(|v| NumTerm::Int(*v)).collect();
                    after[i] = NumTerm::sub(NumTerm::Int(h[i]), NumTerm::Int(s));
                    effects.push(ExtFormula::implies(
                        ExtFormula::and_all([
                            ExtFormula::not(atom(Formula::Terminal)),
                            vals(h),
                            atom(Formula::Does(reduce(r, m, s))),
                        ]),
                        ExtFormula::next(atom(Formula::Vals(after))),
                    ));
                }
            }
        }
    }
    rules.push(ExtFormula::and_all(effects));

    rules.push(ExtFormula::and_all(players.iter().map(|(r, o)| {
        ExtFormula::implies(
            turn(r),
            ExtFormula::and(ExtFormula::next(ExtFormula::not(turn(r))), ExtFormula::next(turn(o))),
        )
    })));
    rules
}

/// Builds the signature, the finite model fragment and the rule set of
/// `<γ1,...,γk>`-Nim.
pub fn make_nim(gammas: &[i64]) -> Result<NimGame, ModelError> {
    let nim = NimModel::new(gammas)?;
    let sig = nim.signature().clone();
    let mut model = FiniteModel::new(sig.clone());
    let mut index = BTreeMap::new();

    let full: Vec<(i64, i64)> = gammas.iter().map(|g| (0, *g)).collect();
    let tuples = heap_tuples(&full);
    for t in 0..2 {
        for h in &tuples {
            let w = NimState { turn: t, heaps: h.clone() };
            let id = model.add_state(nim.label(&w), nim.props(&w), h.clone());
            index.insert(w, id);
        }
    }
    model.set_initial(index[&nim.initial()]);

    let per_agent: Vec<Vec<GroundAction>> = sig.agents.iter().map(|r| nim_actions(gammas, r)).collect();
    let joints = joint_actions(&per_agent);
    for (w, id) in &index {
        if nim.is_terminal(w) {
            model.add_terminal(*id);
        }
        for r in &sig.agents {
            if nim.wins(r, w) {
                model.add_goal(r, *id);
            }
        }
        for a in nim.legal_actions(w)? {
            model.add_legal(*id, a);
        }
        for d in &joints {
            let next = nim.update(w, d)?;
            model.add_update(*id, d.clone(), index[&next]);
        }
    }

    let ext_rules = nim_rules(gammas);
    let rules = RuleSet::new(
        format!("nim-{}", gammas.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("-")),
        ext_rules.iter().map(desugar).collect(),
    );
    Ok(NimGame { signature: sig, model, rules, ext_rules, intensional: nim, index })
}
