//! Atom counts of a description and of its GDL translation, with the closed
//! forms that predict the translated count.

use std::fmt;

use crate::formula::{count_atoms, Formula, NumTerm, RuleSet};
use crate::model::{Path, StModel};
use crate::translate::{translate_formula_complete, translate_formula_path, TranslateError, TranslationBounds};

/// Size of a rule set: atom occurrences summed over rules.
pub fn count_description(rules: &RuleSet) -> usize {
    rules.iter().map(count_atoms).sum()
}

/// Number of `vals` atoms in `f`.
pub fn count_vals(f: &Formula) -> usize {
    match f {
        Formula::Vals(_) => 1,
        Formula::Not(g) | Formula::Next(g) => count_vals(g),
        Formula::And(l, r) => count_vals(l) + count_vals(r),
        _ => 0,
    }
}

fn atoms<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Not(g) | Formula::Next(g) => atoms(g, out),
        Formula::And(l, r) => {
            atoms(l, out);
            atoms(r, out);
        }
        a => out.push(a),
    }
}

/// Bare occurrences of declared variables among the arguments of atom `a`.
fn bare_vars(a: &Formula, vars: &[String]) -> usize {
    let mut n = 0;
    let mut visit = |t: &NumTerm| {
        if matches!(t, NumTerm::Var(x) if vars.contains(x)) {
            n += 1;
        }
    };
    match a {
        Formula::Legal(act) | Formula::Does(act) => act.args.iter().for_each(&mut visit),
        Formula::Vals(ts) => ts.iter().for_each(&mut visit),
        Formula::Gt(l, r) | Formula::Lt(l, r) | Formula::Eq(l, r) => {
            visit(l);
            visit(r);
        }
        _ => {}
    }
    n
}

/// Atoms produced by grounding `eta` variable positions over `mu + 1`
/// values, when the fully ground atom itself translates to `base` atoms:
/// each value contributes the recursively grounded atom plus `x(q)`.
pub fn exact_grounding(eta: usize, mu: u64, base: u64) -> u64 {
    (0..eta).fold(base, |g, _| (mu + 1).saturating_mul(g.saturating_add(1)))
}

/// The coarse grounding term for one atom with `eta` variables: two atoms
/// for each of `mu^eta` assignments.
pub fn estimated_grounding(eta: usize, mu: u64) -> u64 {
    mu.saturating_pow(eta.min(u32::MAX as usize) as u32).saturating_mul(2)
}

fn vals_width(n_vars: usize) -> u64 {
    // an empty conjunction is the two-atom tautology
    if n_vars == 0 {
        2
    } else {
        n_vars as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Path,
    Complete,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Path => "path",
            Mode::Complete => "complete",
        })
    }
}

/// Counts for one rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleCount {
    pub source: usize,
    pub translated: usize,
    pub vals: usize,
    /// Bare variable occurrences (complete mode).
    pub vars: usize,
    /// Most bare variable occurrences in one atom (complete mode).
    pub atom_vars: usize,
    /// Whether the rule takes part in the closed-form comparison.
    pub eligible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccinctnessReport {
    pub mode: Mode,
    pub rules: Vec<RuleCount>,
    pub source_count: usize,
    pub translated_count: usize,
    /// |X|, the number of numerical variables.
    pub width: usize,
    /// `vals` atoms over all rules.
    pub k: usize,
    /// Rules with at least one bare variable.
    pub kappa: usize,
    /// Largest number of bare variable occurrences in one atom.
    pub eta: usize,
    pub mu: u64,
    /// Source and translated counts restricted to the eligible rules.
    pub eligible_source: usize,
    pub eligible_translated: usize,
    pub predicted_count: u64,
    pub matches: bool,
    /// Complete mode: the coarse `2 mu^eta` per rule estimate plus the
    /// variable-free part.
    pub estimated_count: Option<u64>,
    pub estimate_matches: Option<bool>,
}

impl SuccinctnessReport {
    /// The source description is never larger than its translation.
    pub fn inequality_holds(&self) -> bool {
        self.source_count <= self.translated_count
    }

    pub fn key_values(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("mode", self.mode.to_string()),
            ("rules", self.rules.len().to_string()),
            ("source_count", self.source_count.to_string()),
            ("translated_count", self.translated_count.to_string()),
            ("vars", self.width.to_string()),
            ("k", self.k.to_string()),
            ("kappa", self.kappa.to_string()),
            ("eta", self.eta.to_string()),
            ("mu", self.mu.to_string()),
            ("eligible_rules", self.rules.iter().filter(|r| r.eligible).count().to_string()),
            ("eligible_source", self.eligible_source.to_string()),
            ("eligible_translated", self.eligible_translated.to_string()),
            ("predicted_count", self.predicted_count.to_string()),
            ("match", self.matches.to_string()),
            ("inequality", self.inequality_holds().to_string()),
        ];
        if let (Some(p), Some(m)) = (self.estimated_count, self.estimate_matches) {
            out.push(("estimated_count", p.to_string()));
            out.push(("estimate_match", m.to_string()));
        }
        out
    }
}

impl fmt::Display for SuccinctnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.key_values() {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Report for the translation relative to stage `stage` of a complete path.
/// Rules that negate an unperformed `legal`, reach `next` at the last stage,
/// fold an out-of-range value into a constant, or contain `vals` without
/// numerical variables are left out of the closed form, which predicts
/// `count - k + |X| k` on the rest.
pub fn path_report<M: StModel>(
    m: &M,
    p: &Path<M::State>,
    stage: usize,
    rules: &RuleSet,
) -> Result<SuccinctnessReport, TranslateError> {
    let width = m.signature().vars.len();
    let mut counts = Vec::with_capacity(rules.len());
    for f in rules.iter() {
        let t = translate_formula_path(m, p, f, stage)?;
        let vals = count_vals(f);
        counts.push(RuleCount {
            source: count_atoms(f),
            translated: count_atoms(&t.formula),
            vals,
            vars: 0,
            atom_vars: 0,
            eligible: t.legal_else == 0 && t.last_next == 0 && t.out_of_range == 0 && !(vals > 0 && width == 0),
        });
    }
    let eligible = counts.iter().filter(|r| r.eligible);
    let predicted: u64 = eligible.clone().map(|r| (r.source - r.vals + width * r.vals) as u64).sum();
    let eligible_translated: usize = eligible.clone().map(|r| r.translated).sum();
    Ok(SuccinctnessReport {
        mode: Mode::Path,
        source_count: counts.iter().map(|r| r.source).sum(),
        translated_count: counts.iter().map(|r| r.translated).sum(),
        width,
        k: counts.iter().map(|r| r.vals).sum(),
        kappa: 0,
        eta: 0,
        mu: 0,
        eligible_source: eligible.map(|r| r.source).sum(),
        eligible_translated,
        predicted_count: predicted,
        matches: predicted == eligible_translated as u64,
        estimated_count: None,
        estimate_matches: None,
        rules: counts,
    })
}

/// Report for the bounded complete translation. The exact prediction
/// recounts the grounding atom by atom; the coarse estimate charges `2 mu^eta`
/// per rule with variables and counts the other rules as in path mode.
pub fn complete_report(
    vars: &[String],
    b: TranslationBounds,
    rules: &RuleSet,
) -> Result<SuccinctnessReport, TranslateError> {
    let width = vars.len();
    let mu = b.mu() as u64;
    let mut counts = Vec::with_capacity(rules.len());
    let mut exact = 0u64;
    for f in rules.iter() {
        let t = translate_formula_complete(f, vars, b)?;
        let mut list = Vec::new();
        atoms(f, &mut list);
        let (mut n_vars, mut atom_vars) = (0, 0);
        for a in list {
            let eta = bare_vars(a, vars);
            n_vars += eta;
            atom_vars = atom_vars.max(eta);
            let base = if matches!(a, Formula::Vals(_)) { vals_width(width) } else { 1 };
            exact = exact.saturating_add(exact_grounding(eta, mu, base));
        }
        counts.push(RuleCount {
            source: count_atoms(f),
            translated: count_atoms(&t),
            vals: count_vals(f),
            vars: n_vars,
            atom_vars,
            eligible: true,
        });
    }
    let kappa = counts.iter().filter(|r| r.vars > 0).count();
    let eta = counts.iter().map(|r| r.atom_vars).max().unwrap_or(0);
    let free: u64 = counts
        .iter()
        .filter(|r| r.vars == 0)
        .map(|r| (r.source - r.vals) as u64 + vals_width(width) * r.vals as u64)
        .sum();
    let estimate = free.saturating_add(estimated_grounding(eta, mu).saturating_mul(kappa as u64));
    let translated_count: usize = counts.iter().map(|r| r.translated).sum();
    Ok(SuccinctnessReport {
        mode: Mode::Complete,
        source_count: counts.iter().map(|r| r.source).sum(),
        translated_count,
        width,
        k: counts.iter().map(|r| r.vals).sum(),
        kappa,
        eta,
        mu,
        eligible_source: counts.iter().map(|r| r.source).sum(),
        eligible_translated: translated_count,
        predicted_count: exact,
        matches: exact == translated_count as u64,
        estimated_count: Some(estimate),
        estimate_matches: Some(estimate == translated_count as u64),
        rules: counts,
    })
}
