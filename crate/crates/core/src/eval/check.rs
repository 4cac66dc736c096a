use std::collections::HashMap;

use super::{check_conformance, eval_term, ground_action, EvalError};
use crate::formula::{Formula, RuleSet};
use crate::model::{enumerate_complete_paths, Path, StModel};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Atom(Formula),
    Not(usize),
    And(usize, usize),
    Next(usize),
}

/// A formula flattened into a DAG of distinct subformulas, children before
/// parents. Truth at a stage is one pass over the nodes; `next` reads the
/// table of the following stage, so stages are filled from the last one
/// backwards.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    nodes: Vec<Node>,
    has_next: bool,
}

impl CompiledFormula {
    pub fn new(f: &Formula) -> Self {
        let mut nodes = Vec::new();
        let mut ids: HashMap<Node, usize> = HashMap::new();
        let mut intern = |n: Node, nodes: &mut Vec<Node>| {
            *ids.entry(n.clone()).or_insert_with(|| {
                nodes.push(n);
                nodes.len() - 1
            })
        };
        let mut work = vec![(f, false)];
        let mut done: Vec<usize> = Vec::new();
        let mut has_next = false;
        while let Some((g, expanded)) = work.pop() {
            match g {
                Formula::Not(h) | Formula::Next(h) if !expanded => {
                    work.push((g, true));
                    work.push((h, false));
                }
                Formula::And(l, r) if !expanded => {
                    work.push((g, true));
                    work.push((r, false));
                    work.push((l, false));
                }
                Formula::Not(_) => {
                    let c = done.pop().expect("operand compiled");
                    done.push(intern(Node::Not(c), &mut nodes));
                }
                Formula::Next(_) => {
                    has_next = true;
                    let c = done.pop().expect("operand compiled");
                    done.push(intern(Node::Next(c), &mut nodes));
                }
                Formula::And(..) => {
                    let r = done.pop().expect("right operand compiled");
                    let l = done.pop().expect("left operand compiled");
                    done.push(intern(Node::And(l, r), &mut nodes));
                }
                atom => done.push(intern(Node::Atom(atom.clone()), &mut nodes)),
            }
        }
        debug_assert_eq!(done.last(), Some(&(nodes.len() - 1)));
        CompiledFormula { nodes, has_next }
    }

    /// Number of distinct subformulas.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn row<M: StModel>(
        &self,
        m: &M,
        p: &Path<M::State>,
        j: usize,
        next: Option<&[bool]>,
    ) -> Result<Vec<bool>, EvalError> {
        let mut row: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = match n {
                Node::Atom(f) => eval_atom(m, p, j, f)?,
                Node::Not(c) => !row[*c],
                Node::And(l, r) => row[*l] && row[*r],
                Node::Next(c) => match next {
                    Some(t) if j < p.len() => t[*c],
                    _ => true,
                },
            };
            row.push(v);
        }
        Ok(row)
    }

    /// Truth at every stage `from..=|δ|`, indexed from `from`.
    pub fn eval_from<M: StModel>(&self, m: &M, p: &Path<M::State>, from: usize) -> Result<Vec<bool>, EvalError> {
        if from > p.len() {
            return Err(EvalError::StageOutOfRange { stage: from, len: p.len() });
        }
        let root = self.nodes.len() - 1;
        let mut out = vec![false; p.len() + 1 - from];
        if !self.has_next {
            for j in from..=p.len() {
                out[j - from] = self.row(m, p, j, None)?[root];
            }
            return Ok(out);
        }
        let mut next: Option<Vec<bool>> = None;
        for j in (from..=p.len()).rev() {
            let row = self.row(m, p, j, next.as_deref())?;
            out[j - from] = row[root];
            next = Some(row);
        }
        Ok(out)
    }

    /// Truth at stage `j` alone.
    pub fn eval_at<M: StModel>(&self, m: &M, p: &Path<M::State>, j: usize) -> Result<bool, EvalError> {
        if j > p.len() {
            return Err(EvalError::StageOutOfRange { stage: j, len: p.len() });
        }
        if !self.has_next {
            return Ok(self.row(m, p, j, None)?[self.nodes.len() - 1]);
        }
        Ok(self.eval_from(m, p, j)?[0])
    }
}

fn eval_atom<M: StModel>(m: &M, p: &Path<M::State>, j: usize, f: &Formula) -> Result<bool, EvalError> {
    let w = p.state(j);
    Ok(match f {
        Formula::Prop(q) => m.has_prop(w, q),
        Formula::Initial => *w == m.initial(),
        Formula::Terminal => m.is_terminal(w),
        Formula::Wins(r) => m.wins(r, w),
        Formula::Legal(a) => m.is_legal(w, &ground_action(m, w, a)?),
        Formula::Does(a) => {
            let g = ground_action(m, w, a)?;
            p.action_of(&a.agent, j) == Some(&g)
        }
        Formula::Gt(l, r) => eval_term(m, w, l)? > eval_term(m, w, r)?,
        Formula::Lt(l, r) => eval_term(m, w, l)? < eval_term(m, w, r)?,
        Formula::Eq(l, r) => eval_term(m, w, l)? == eval_term(m, w, r)?,
        Formula::Vals(ts) => {
            let vals = m.vals(w);
            if ts.len() != vals.len() {
                return Ok(false);
            }
            for (z, v) in ts.iter().zip(&vals) {
                if eval_term(m, w, z)? != *v {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Not(_) | Formula::And(..) | Formula::Next(_) => unreachable!("connectives are compiled"),
    })
}

/// `M, δ, j ⊨ f`. The formula is checked against the model's signature
/// first; `next` is true at the last stage and `does` false there.
pub fn holds<M: StModel>(m: &M, p: &Path<M::State>, j: usize, f: &Formula) -> Result<bool, EvalError> {
    check_conformance(m.signature(), f)?;
    CompiledFormula::new(f).eval_at(m, p, j)
}

/// Truth of `f` at each stage `0..=|δ|`.
pub fn holds_all_stages<M: StModel>(m: &M, p: &Path<M::State>, f: &Formula) -> Result<Vec<bool>, EvalError> {
    check_conformance(m.signature(), f)?;
    CompiledFormula::new(f).eval_from(m, p, 0)
}

/// The first stage where `f` is false, if any.
pub fn first_failure<M: StModel>(m: &M, p: &Path<M::State>, f: &Formula) -> Result<Option<usize>, EvalError> {
    Ok(holds_all_stages(m, p, f)?.iter().position(|v| !v))
}

/// `f` holds at every stage of `p`.
pub fn holds_globally_on_path<M: StModel>(m: &M, p: &Path<M::State>, f: &Formula) -> Result<bool, EvalError> {
    Ok(first_failure(m, p, f)?.is_none())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<S> {
    /// Every rule holds at every stage of every complete path.
    Holds { paths: usize },
    /// Rule `rule` (0-based) is false at `stage` of `path`.
    Fails { path: Path<S>, stage: usize, rule: usize },
    /// No counterexample among the explored paths, but the depth bound cut
    /// some branch short.
    Inconclusive { paths: usize },
}

impl<S> Verdict<S> {
    pub fn keyword(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Checks every rule globally on every complete path of length at most
/// `max_depth`, stopping at the first counterexample.
pub fn is_model_of<M: StModel>(m: &M, rules: &RuleSet, max_depth: usize) -> Result<Verdict<M::State>, EvalError> {
    for f in rules.iter() {
        check_conformance(m.signature(), f)?;
    }
    let compiled: Vec<CompiledFormula> = rules.iter().map(CompiledFormula::new).collect();
    let mut paths = enumerate_complete_paths(m, max_depth);
    let mut count = 0;
    for p in paths.by_ref() {
        let p = p?;
        count += 1;
        for (i, c) in compiled.iter().enumerate() {
            if let Some(stage) = c.eval_from(m, &p, 0)?.iter().position(|v| !v) {
                return Ok(Verdict::Fails { path: p, stage, rule: i });
            }
        }
    }
    if paths.truncated() {
        Ok(Verdict::Inconclusive { paths: count })
    } else {
        Ok(Verdict::Holds { paths: count })
    }
}
