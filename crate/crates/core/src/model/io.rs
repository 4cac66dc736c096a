//! Line-oriented model and path files.
//!
//! ```text
//! AGENTS Player1 Player2
//! VARS heap_1 heap_2
//! PROPS turn(Player1) turn(Player2)
//! ACTIONS Player1 reduce/2 noop/0
//! STATE p1_5_3 props=turn(Player1) vals=5,3
//! INITIAL p1_5_3
//! TERMINAL p1_0_0 p2_0_0
//! GOAL Player1 p2_0_0
//! LEGAL p1_5_3 reduce^Player1(1,5)
//! UPDATE p1_5_3 (reduce^Player1(1,5);noop^Player2) -> p2_0_3
//! ```
//!
//! `ACTIONS` lines are optional; schemas are also inferred from the actions
//! mentioned by `LEGAL` and `UPDATE`. A path file holds one joint action per
//! line, components separated by `;`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{FiniteModel, GameSignature, GroundAction, JointAction, StModel};
use crate::formula::{parse_formula, Formula, NumTerm, Prop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FileError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FileError> {
    Err(FileError { line, message: message.into() })
}

/// Splits on commas that are not nested inside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

pub fn parse_prop(s: &str) -> Result<Prop, String> {
    match parse_formula(s) {
        Ok(Formula::Prop(p)) => Ok(p),
        Ok(_) => Err(format!("`{s}` is not a proposition")),
        Err(e) => Err(format!("bad proposition `{s}`: {e}")),
    }
}

/// Parses `name^agent` or `name^agent(i1,...,in)` with integer arguments.
pub fn parse_ground_action(s: &str) -> Result<GroundAction, String> {
    let f = parse_formula(&format!("does({})", s.trim())).map_err(|e| format!("bad action `{s}`: {e}"))?;
    let Formula::Does(a) = f else { return Err(format!("bad action `{s}`")) };
    let args = a
        .args
        .iter()
        .map(|t| match t {
            NumTerm::Int(v) => Ok(*v),
            _ => Err(format!("action `{s}` has a non-integer argument")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroundAction { agent: a.agent, name: a.name, args })
}

/// Parses `a1;a2;...`, optionally wrapped in parentheses.
pub fn parse_joint_action(s: &str) -> Result<JointAction, String> {
    let mut t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        t = &t[1..t.len() - 1];
    }
    t.split(';').map(parse_ground_action).collect::<Result<Vec<_>, _>>().map(JointAction)
}

fn register(sig: &mut GameSignature, a: &GroundAction, line: usize) -> Result<(), FileError> {
    match sig.arity(&a.agent, &a.name) {
        Some(n) if n != a.args.len() => {
            err(line, format!("action {a} used with {} arguments, elsewhere with {n}", a.args.len()))
        }
        Some(_) => Ok(()),
        None => {
            sig.add_action(&a.agent, &a.name, a.args.len());
            Ok(())
        }
    }
}

/// Reads a model file. Structural problems (unknown state ids, malformed
/// lines) are errors; semantic ones are left to `validate_model`.
pub fn read_model(text: &str) -> Result<FiniteModel, FileError> {
    let mut sig = GameSignature::default();
    let mut m = FiniteModel::new(GameSignature::default());
    let mut initial = None;
    let mut deferred: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        match key {
            "AGENTS" => sig.agents.extend(rest.split_whitespace().map(String::from)),
            "VARS" => sig.vars.extend(rest.split_whitespace().map(String::from)),
            "PROPS" => {
                for p in rest.split_whitespace() {
                    sig.props.insert(parse_prop(p).map_err(|m| FileError { line, message: m })?);
                }
            }
            "ACTIONS" => {
                let mut words = rest.split_whitespace();
                let Some(agent) = words.next() else { return err(line, "ACTIONS needs an agent") };
                for w in words {
                    let Some((name, arity)) = w.split_once('/') else {
                        return err(line, format!("expected name/arity, found `{w}`"));
                    };
                    let Ok(arity) = arity.parse() else { return err(line, format!("bad arity in `{w}`")) };
                    sig.add_action(agent, name, arity);
                }
            }
            "STATE" => {
                let mut words = rest.split_whitespace();
                let Some(id) = words.next() else { return err(line, "STATE needs an id") };
                if m.state_by_label(id).is_some() {
                    return err(line, format!("duplicate state `{id}`"));
                }
                let (mut props, mut vals) = (BTreeSet::new(), Vec::new());
                for w in words {
                    if let Some(list) = w.strip_prefix("props=") {
                        for p in split_top_level(list) {
                            props.insert(parse_prop(p).map_err(|m| FileError { line, message: m })?);
                        }
                    } else if let Some(list) = w.strip_prefix("vals=") {
                        for v in list.split(',').filter(|v| !v.is_empty()) {
                            let Ok(v) = v.trim().parse() else { return err(line, format!("bad integer `{v}`")) };
                            vals.push(v);
                        }
                    } else {
                        return err(line, format!("unexpected `{w}` in STATE"));
                    }
                }
                m.add_state(id, props, vals);
            }
            "INITIAL" | "TERMINAL" | "GOAL" | "LEGAL" | "UPDATE" => deferred.push((line, body.to_string())),
            other => return err(line, format!("unknown section `{other}`")),
        }
    }

    let lookup = |m: &FiniteModel, id: &str, line: usize| {
        m.state_by_label(id).ok_or(FileError { line, message: format!("unknown state `{id}`") })
    };
    for (line, body) in deferred {
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((&body, ""));
        let rest = rest.trim();
        match key {
            "INITIAL" => initial = Some(lookup(&m, rest, line)?),
            "TERMINAL" => {
                for id in rest.split_whitespace() {
                    let w = lookup(&m, id, line)?;
                    m.add_terminal(w);
                }
            }
            "GOAL" => {
                let mut words = rest.split_whitespace();
                let Some(agent) = words.next() else { return err(line, "GOAL needs an agent") };
                m.goals.entry(agent.to_string()).or_default();
                for id in words {
                    let w = lookup(&m, id, line)?;
                    m.add_goal(agent, w);
                }
            }
            "LEGAL" => {
                let Some((id, act)) = rest.split_once(char::is_whitespace) else {
                    return err(line, "LEGAL needs a state and an action");
                };
                let w = lookup(&m, id, line)?;
                let a = parse_ground_action(act).map_err(|message| FileError { line, message })?;
                register(&mut sig, &a, line)?;
                m.add_legal(w, a);
            }
            _ => {
                let Some((lhs, target)) = rest.rsplit_once("->") else { return err(line, "UPDATE needs `->`") };
                let Some((id, joint)) = lhs.trim().split_once(char::is_whitespace) else {
                    return err(line, "UPDATE needs a state and a joint action");
                };
                let w = lookup(&m, id, line)?;
                let to = lookup(&m, target.trim(), line)?;
                let d = parse_joint_action(joint).map_err(|message| FileError { line, message })?;
                for a in &d.0 {
                    register(&mut sig, a, line)?;
                }
                m.add_update(w, d, to);
            }
        }
    }
    let Some(initial) = initial else { return err(0, "missing INITIAL") };
    m.set_initial(initial);
    m.signature = sig;
    Ok(m)
}

/// Serializes a model; [`read_model`] reads it back to an equal model.
/// Shared propositions are written into every state.
pub fn write_model(m: &FiniteModel) -> String {
    let sig = &m.signature;
    let mut out = String::new();
    let words = |items: Vec<String>| items.join(" ");
    let _ = writeln!(out, "AGENTS {}", sig.agents.join(" "));
    if !sig.vars.is_empty() {
        let _ = writeln!(out, "VARS {}", sig.vars.join(" "));
    }
    if !sig.props.is_empty() {
        let _ = writeln!(out, "PROPS {}", words(sig.props.iter().map(|p| p.to_string()).collect()));
    }
    for r in &sig.agents {
        if let Some(acts) = sig.actions.get(r) {
            let list: Vec<String> = acts.iter().map(|(n, a)| format!("{n}/{a}")).collect();
            let _ = writeln!(out, "ACTIONS {r} {}", list.join(" "));
        }
    }
    for w in m.state_ids() {
        let s = &m.states[w.0];
        let props: Vec<String> = m.props(&w).iter().map(|p| p.to_string()).collect();
        let vals: Vec<String> = s.vals.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "STATE {} props={} vals={}", s.label, props.join(","), vals.join(","));
    }
    let _ = writeln!(out, "INITIAL {}", m.label(&m.initial));
    if !m.terminal.is_empty() {
        let _ = writeln!(out, "TERMINAL {}", words(m.terminal.iter().map(|w| m.label(w)).collect()));
    }
    for r in &sig.agents {
        let mut line = format!("GOAL {r}");
        for w in m.goals.get(r).into_iter().flatten() {
            line.push(' ');
            line.push_str(&m.label(w));
        }
        let _ = writeln!(out, "{line}");
    }
    for (w, acts) in &m.legal {
        for a in acts {
            let _ = writeln!(out, "LEGAL {} {a}", m.label(w));
        }
    }
    for ((w, d), to) in &m.update {
        let _ = writeln!(out, "UPDATE {} ({d}) -> {}", m.label(w), m.label(to));
    }
    out
}

pub fn read_path_file(text: &str) -> Result<Vec<JointAction>, FileError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push(parse_joint_action(body).map_err(|message| FileError { line: idx + 1, message })?);
    }
    Ok(out)
}

pub fn write_path_file(joints: &[JointAction]) -> String {
    joints.iter().map(|d| format!("{d}\n")).collect()
}
