//! Test-side oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use gdlz::formula::{ActionTerm, Formula, NumTerm, Prop};
use gdlz::model::io::parse_joint_action;
use gdlz::model::{
    build_path, legal_joint_actions, FiniteModel, GameSignature, GroundAction, JointAction, NimModel, NimState, Path,
    StModel, StateId,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub const SAMPLE_JOINTS: [&str; 3] =
    ["reduce^Player1(1,5);noop^Player2", "noop^Player1;reduce^Player2(2,2)", "reduce^Player1(2,1);noop^Player2"];

pub fn sample_joints() -> Vec<JointAction> {
    SAMPLE_JOINTS.iter().map(|s| parse_joint_action(s).unwrap()).collect()
}

pub fn sample() -> (NimModel, Path<NimState>) {
    let nim = NimModel::new(&[5, 3]).unwrap();
    let p = build_path(&nim, &sample_joints()).unwrap();
    (nim, p)
}

// Naive semantics, written directly from the satisfaction clauses with no
// sharing, no compilation and no conformance pass.

pub fn naive_term<M: StModel>(m: &M, w: &M::State, z: &NumTerm) -> i64 {
    match z {
        NumTerm::Int(v) => *v,
        NumTerm::Var(x) => {
            let i = m.signature().vars.iter().position(|y| y == x).expect("declared variable");
            m.vals(w)[i]
        }
        NumTerm::Add(l, r) => naive_term(m, w, l) + naive_term(m, w, r),
        NumTerm::Sub(l, r) => naive_term(m, w, l) - naive_term(m, w, r),
        NumTerm::Min(l, r) => naive_term(m, w, l).min(naive_term(m, w, r)),
        NumTerm::Max(l, r) => naive_term(m, w, l).max(naive_term(m, w, r)),
    }
}

fn naive_action<M: StModel>(m: &M, w: &M::State, a: &ActionTerm) -> GroundAction {
    GroundAction::new(a.agent.as_str(), a.name.as_str(), a.args.iter().map(|z| naive_term(m, w, z)).collect())
}

pub fn naive_holds<M: StModel>(m: &M, p: &Path<M::State>, j: usize, f: &Formula) -> bool {
    let w = &p.states()[j];
    match f {
        Formula::Prop(q) => m.has_prop(w, q),
        Formula::Initial => *w == m.initial(),
        Formula::Terminal => m.is_terminal(w),
        Formula::Wins(r) => m.wins(r, w),
        Formula::Legal(a) => m.is_legal(w, &naive_action(m, w, a)),
        Formula::Does(a) => {
            j < p.joints().len() && p.joints()[j].0.iter().any(|b| *b == naive_action(m, w, a))
        }
        Formula::Not(g) => !naive_holds(m, p, j, g),
        Formula::And(l, r) => naive_holds(m, p, j, l) && naive_holds(m, p, j, r),
        Formula::Next(g) => j >= p.joints().len() || naive_holds(m, p, j + 1, g),
        Formula::Gt(l, r) => naive_term(m, w, l) > naive_term(m, w, r),
        Formula::Lt(l, r) => naive_term(m, w, l) < naive_term(m, w, r),
        Formula::Eq(l, r) => naive_term(m, w, l) == naive_term(m, w, r),
        Formula::Vals(ts) => {
            let vals = m.vals(w);
            ts.len() == vals.len() && ts.iter().zip(&vals).all(|(z, v)| naive_term(m, w, z) == *v)
        }
    }
}

/// How numerical terms are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terms {
    /// Anything, including variables nested in arithmetic.
    Free,
    /// Values stay inside the literal range, provided every variable does.
    InRange,
    /// A bare variable, or a variable-free term whose value is in range.
    BareOrClosed,
}

/// Random formulas over a signature.
#[derive(Debug, Clone)]
pub struct FormulaGen {
    pub agents: Vec<String>,
    pub actions: Vec<(String, String, usize)>,
    pub props: Vec<Prop>,
    pub vars: Vec<String>,
    pub lo: i64,
    pub hi: i64,
    pub terms: Terms,
    /// Include comparisons and `vals`.
    pub numeric: bool,
    pub depth: usize,
}

impl FormulaGen {
    pub fn new(sig: &GameSignature, lo: i64, hi: i64, terms: Terms) -> Self {
        let mut actions = Vec::new();
        for (r, acts) in &sig.actions {
            for (name, n) in acts {
                actions.push((r.clone(), name.clone(), *n));
            }
        }
        FormulaGen {
            agents: sig.agents.clone(),
            actions,
            props: sig.props.iter().cloned().collect(),
            vars: sig.vars.clone(),
            lo,
            hi,
            terms,
            numeric: true,
            depth: 4,
        }
    }

    pub fn gdl(sig: &GameSignature) -> Self {
        FormulaGen { numeric: false, ..FormulaGen::new(sig, 0, 0, Terms::Free) }
    }

    fn int(&self, rng: &mut impl Rng) -> i64 {
        rng.gen_range(self.lo..=self.hi)
    }

    fn closed(&self, rng: &mut impl Rng) -> NumTerm {
        let v = self.int(rng);
        match rng.gen_range(0..6) {
            0 => {
                let a = rng.gen_range(self.lo..=v);
                NumTerm::add(NumTerm::Int(a), NumTerm::Int(v - a))
            }
            1 => {
                let a = rng.gen_range(v..=self.hi);
                NumTerm::sub(NumTerm::Int(a), NumTerm::Int(a - v))
            }
            2 => NumTerm::min(NumTerm::Int(v), NumTerm::Int(self.int(rng).max(v))),
            3 => NumTerm::max(NumTerm::Int(v), NumTerm::Int(self.int(rng).min(v))),
            _ => NumTerm::Int(v),
        }
    }

    pub fn term(&self, rng: &mut impl Rng, depth: usize) -> NumTerm {
        let var = |rng: &mut _| NumTerm::Var(self.vars.choose(rng).expect("some variable").clone());
        let has_vars = !self.vars.is_empty();
        match self.terms {
            Terms::BareOrClosed => {
                if has_vars && rng.gen_bool(0.5) {
                    var(rng)
                } else {
                    self.closed(rng)
                }
            }
            Terms::InRange => match rng.gen_range(0..5) {
                0 | 1 if has_vars => var(rng),
                2 if depth > 0 => NumTerm::min(self.term(rng, depth - 1), self.term(rng, depth - 1)),
                3 if depth > 0 => NumTerm::max(self.term(rng, depth - 1), self.term(rng, depth - 1)),
                _ => self.closed(rng),
            },
            Terms::Free => match rng.gen_range(0..7) {
                0 | 1 if has_vars => var(rng),
                2 if depth > 0 => NumTerm::add(self.term(rng, depth - 1), self.term(rng, depth - 1)),
                3 if depth > 0 => NumTerm::sub(self.term(rng, depth - 1), self.term(rng, depth - 1)),
                4 if depth > 0 => NumTerm::min(self.term(rng, depth - 1), self.term(rng, depth - 1)),
                5 if depth > 0 => NumTerm::max(self.term(rng, depth - 1), self.term(rng, depth - 1)),
                _ => NumTerm::Int(self.int(rng)),
            },
        }
    }

    pub fn action(&self, rng: &mut impl Rng) -> ActionTerm {
        let (r, name, n) = self.actions.choose(rng).expect("some action").clone();
        ActionTerm::new(r, name, (0..n).map(|_| self.term(rng, 1)).collect())
    }

    pub fn action_of(&self, rng: &mut impl Rng, agent: &str) -> ActionTerm {
        let mine: Vec<_> = self.actions.iter().filter(|(r, _, _)| r == agent).collect();
        let (r, name, n) = (*mine.choose(rng).expect("agent has actions")).clone();
        ActionTerm::new(r, name, (0..n).map(|_| self.term(rng, 1)).collect())
    }

    pub fn atom(&self, rng: &mut impl Rng) -> Formula {
        let kinds = if self.numeric { 10 } else { 6 };
        match rng.gen_range(0..kinds) {
            0 if !self.props.is_empty() => Formula::Prop(self.props.choose(rng).unwrap().clone()),
            0 | 1 => {
                if rng.gen_bool(0.5) {
                    Formula::Initial
                } else {
                    Formula::Terminal
                }
            }
            2 => Formula::Wins(self.agents.choose(rng).unwrap().clone()),
            3 | 4 => Formula::Legal(self.action(rng)),
            5 => Formula::Does(self.action(rng)),
            6 => Formula::Gt(self.term(rng, 2), self.term(rng, 2)),
            7 => Formula::Lt(self.term(rng, 2), self.term(rng, 2)),
            8 => Formula::Eq(self.term(rng, 2), self.term(rng, 2)),
            _ => Formula::Vals(self.vars.iter().map(|_| self.term(rng, 1)).collect()),
        }
    }

    pub fn formula_at(&self, rng: &mut impl Rng, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.3) {
            return self.atom(rng);
        }
        match rng.gen_range(0..4) {
            0 => Formula::not(self.formula_at(rng, depth - 1)),
            1 => Formula::next(self.formula_at(rng, depth - 1)),
            _ => Formula::and(self.formula_at(rng, depth - 1), self.formula_at(rng, depth - 1)),
        }
    }

    pub fn formula(&self, rng: &mut impl Rng) -> Formula {
        self.formula_at(rng, self.depth)
    }
}

/// Small random model: agents `a` and `b` with `mv/1` and `nop/0`, up to two
/// variables, two propositions, and an update for every legal joint action.
pub fn random_model(rng: &mut impl Rng) -> FiniteModel {
    let vars: Vec<String> = ["x", "y"][..rng.gen_range(0..=2)].iter().map(|s| s.to_string()).collect();
    let mut sig = GameSignature::new(vec!["a".into(), "b".into()], vars);
    for r in ["a", "b"] {
        sig.add_action(r, "mv", 1);
        sig.add_action(r, "nop", 0);
    }
    let props = [Prop::new("p"), Prop::new("q")];
    sig.props.extend(props.iter().cloned());
    let n_vars = sig.vars.len();
    let mut m = FiniteModel::new(sig);
    let n = rng.gen_range(2..=6);
    for i in 0..n {
        let ps: BTreeSet<Prop> = props.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let vals = (0..n_vars).map(|_| rng.gen_range(-2..=3)).collect();
        m.add_state(format!("s{i}"), ps, vals);
    }
    m.set_initial(StateId(0));
    for i in 1..n {
        if rng.gen_bool(0.3) {
            m.add_terminal(StateId(i));
        }
    }
    for r in ["a", "b"] {
        m.goals.insert(r.to_string(), BTreeSet::new());
        for i in 0..n {
            if rng.gen_bool(0.3) {
                m.add_goal(r, StateId(i));
            }
        }
    }
    for i in 0..n {
        let w = StateId(i);
        if m.terminal.contains(&w) {
            continue;
        }
        let mut per_agent = Vec::new();
        for r in ["a", "b"] {
            let mut acts: Vec<GroundAction> =
                (-1..=2).filter(|_| rng.gen_bool(0.4)).map(|v| GroundAction::new(r, "mv", vec![v])).collect();
            if acts.is_empty() || rng.gen_bool(0.7) {
                acts.push(GroundAction::new(r, "nop", vec![]));
            }
            for a in &acts {
                m.add_legal(w, a.clone());
            }
            per_agent.push(acts);
        }
        for d in gdlz::model::joint_actions(&per_agent) {
            let to = StateId(rng.gen_range(0..n));
            m.add_update(w, d, to);
        }
    }
    m
}

/// A random walk from the initial state along legal joint actions with a
/// defined update, stopping at a terminal state or after `max_len` steps.
pub fn random_path<M: StModel>(rng: &mut impl Rng, m: &M, max_len: usize) -> Path<M::State> {
    let mut states = vec![m.initial()];
    let mut joints = Vec::new();
    while joints.len() < max_len {
        let w = states.last().unwrap().clone();
        if m.is_terminal(&w) {
            break;
        }
        let options: Vec<(JointAction, M::State)> = legal_joint_actions(m, &w)
            .unwrap()
            .into_iter()
            .filter_map(|d| m.update(&w, &d).ok().map(|to| (d, to)))
            .collect();
        let Some((d, to)) = options.choose(rng).cloned() else { break };
        joints.push(d);
        states.push(to);
    }
    Path::from_parts(states, joints)
}

/// Atom kinds occurring in `f`, by constructor name.
pub fn atom_kinds(f: &Formula, out: &mut BTreeSet<&'static str>) {
    match f {
        Formula::Prop(_) => {
            out.insert("prop");
        }
        Formula::Initial => {
            out.insert("initial");
        }
        Formula::Terminal => {
            out.insert("terminal");
        }
        Formula::Wins(_) => {
            out.insert("wins");
        }
        Formula::Legal(_) => {
            out.insert("legal");
        }
        Formula::Does(_) => {
            out.insert("does");
        }
        Formula::Gt(..) => {
            out.insert("gt");
        }
        Formula::Lt(..) => {
            out.insert("lt");
        }
        Formula::Eq(..) => {
            out.insert("eq");
        }
        Formula::Vals(_) => {
            out.insert("vals");
        }
        Formula::Not(g) => {
            out.insert("not");
            atom_kinds(g, out);
        }
        Formula::Next(g) => {
            out.insert("next");
            atom_kinds(g, out);
        }
        Formula::And(l, r) => {
            out.insert("and");
            atom_kinds(l, out);
            atom_kinds(r, out);
        }
    }
}
