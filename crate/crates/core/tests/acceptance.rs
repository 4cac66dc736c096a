//! Acceptance suite: one PASS/FAIL line per criterion. A criterion may fail
//! only in the one way recorded as a known deviation; anything else makes
//! the target fail.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{atom_kinds, sample, naive_holds, random_model, random_path, FormulaGen, Terms, SAMPLE_JOINTS};
use gdlz::analysis::{complete_report, path_report};
use gdlz::eval::{check_conformance, holds, is_model_of, CompiledFormula, Verdict};
use gdlz::formula::{count_atoms, parse_rules, subformulas, ActionTerm, Formula, NumTerm, RuleSet};
use gdlz::model::io::parse_joint_action;
use gdlz::model::{build_path, collect_complete_paths, make_nim, NimModel, StModel};
use gdlz::translate::{
    embed_gdl, translate_formula_complete, translate_formula_path, translate_model_complete, translate_model_path,
    translate_path_complete, TranslationBounds,
};

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the failure is the recorded deviation and nothing else.
    known: bool,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), known: false }
    }
}

fn gdlz(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gdlz")).args(args).env("GDLZ_COLOR", "0").output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn golden_replay() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _) = gdlz(&["nim", "--heaps", "5,3", "--out-dir", d]);
    if code != 0 {
        return Outcome::check(false, "nim generation failed");
    }
    let model = format!("{d}/nim.model");
    let path = format!("{d}/sample.path");
    fs::write(&path, SAMPLE_JOINTS.join("\n")).unwrap();
    let (code, trace) = gdlz(&["run", "--model", &model, "--actions", &path]);
    let stages: Vec<&str> = trace.lines().filter(|l| l.starts_with("stage ")).collect();
    let want_vals = ["vals=<5,3>", "vals=<0,3>", "vals=<0,1>", "vals=<0,0>"];
    let want_turn = ["turn(Player1)", "turn(Player2)", "turn(Player1)", "turn(Player2)"];
    let mut ok = code == 0 && stages.len() == 4;
    for (j, line) in stages.iter().enumerate() {
        ok &= line.contains(want_vals[j]) && line.ends_with(&format!("props={}", want_turn[j]));
    }
    ok &= trace.lines().last() == Some("complete; wins: Player1");
    let (_, terminal) = gdlz(&["check", "--model", &model, "--path", &path, "--formula", "terminal", "--global"]);
    ok &= terminal.contains("stage 0: false\nstage 1: false\nstage 2: false\nstage 3: true");
    let stage3 = |f: &str| gdlz(&["check", "--model", &model, "--path", &path, "--formula", f, "--stage", "3"]).1;
    ok &= stage3("wins(Player1)").starts_with("RESULT true");
    ok &= stage3("wins(Player2)").starts_with("RESULT false");
    let took = start.elapsed();
    Outcome::check(ok && took < Duration::from_secs(1), format!("4 stages replayed through the CLI in {took:.2?}"))
}

fn nim_is_model() -> Outcome {
    let start = Instant::now();
    let g = make_nim(&[3, 2]).unwrap();
    let holds_verdict = is_model_of(&g.model, &g.rules, 5).unwrap();
    let paths = match holds_verdict {
        Verdict::Holds { paths } => paths,
        _ => return Outcome::check(false, format!("expected holds, got {}", holds_verdict.keyword())),
    };
    let text = g.rules_text();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    // line 0 is the header comment; rule 3 is line 3
    assert!(lines[3].starts_with("terminal iff"), "{}", lines[3]);
    lines[3] = lines[3].replace("vals(0,0)", "vals(0,1)");
    let mutated = parse_rules("mutated", &lines.join("\n")).unwrap();
    let verdict = is_model_of(&g.model, &mutated, 5).unwrap();
    let took = start.elapsed();
    let caught = matches!(verdict, Verdict::Fails { rule: 2, .. });
    Outcome::check(
        caught && g.rules.len() == 8 && took < Duration::from_secs(5),
        format!("8 rules hold on all {paths} complete paths; mutated rule 3 is refuted; {took:.2?}"),
    )
}

fn does_properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let (mut samples, mut fired, mut violations) = (0, 0, 0);
    while samples < 2000 {
        let m = random_model(&mut rng);
        let p = random_path(&mut rng, &m, 8);
        let j = rng.gen_range(0..=p.len());
        let r = if rng.gen_bool(0.5) { "a" } else { "b" };
        let candidates: Vec<ActionTerm> = std::iter::once(ActionTerm::new(r, "nop", vec![]))
            .chain((-1..=2).map(|v| ActionTerm::new(r, "mv", vec![NumTerm::Int(v)])))
            .collect();
        let a = &candidates[rng.gen_range(0..candidates.len())];
        samples += 1;
        if !holds(&m, &p, j, &Formula::Does(a.clone())).unwrap() {
            continue;
        }
        fired += 1;
        if !holds(&m, &p, j, &Formula::Legal(a.clone())).unwrap() {
            violations += 1;
        }
        for b in candidates.iter().filter(|b| *b != a) {
            if holds(&m, &p, j, &Formula::Does(b.clone())).unwrap() {
                violations += 1;
            }
        }
    }
    Outcome::check(violations == 0, format!("{samples} samples, {fired} with the action performed, {violations} violations"))
}

/// A `legal` atom under an odd number of negations.
fn negated_legal(f: &Formula, negated: bool) -> bool {
    match f {
        Formula::Legal(_) => negated,
        Formula::Not(g) => negated_legal(g, !negated),
        Formula::Next(g) => negated_legal(g, negated),
        Formula::And(l, r) => negated_legal(l, negated) || negated_legal(r, negated),
        _ => false,
    }
}

fn path_preservation() -> Outcome {
    let (nim, p) = sample();
    let art = translate_model_path(&nim, &p).unwrap();
    let gen = FormulaGen::new(nim.signature(), 0, 5, Terms::InRange);
    let mut rng = StdRng::seed_from_u64(4);
    let mut kinds = BTreeSet::new();
    let (mut pairs, mut source_true, mut else_hits, mut last_next) = (0, 0, 0, 0);
    let (mut violations, mut unexplained) = (0, 0);
    for _ in 0..600 {
        let f = gen.formula(&mut rng);
        atom_kinds(&f, &mut kinds);
        for j in 0..=p.len() {
            let t = translate_formula_path(&nim, &p, &f, j).unwrap();
            else_hits += usize::from(t.legal_else > 0);
            last_next += usize::from(t.last_next > 0);
            let mut art = art.clone();
            art.admit_actions(&t.formula).unwrap();
            let tp = art.path.as_ref().unwrap();
            pairs += 1;
            if holds(&nim, &p, j, &f).unwrap() {
                source_true += 1;
                if !holds(&art.model, tp, j, &t.formula).unwrap() {
                    violations += 1;
                    if !(t.legal_else > 0 && negated_legal(&f, false)) {
                        unexplained += 1;
                    }
                }
            }
        }
    }
    let all = ["prop", "initial", "terminal", "wins", "legal", "does", "not", "and", "next", "gt", "lt", "eq", "vals"];
    let covered = all.iter().all(|k| kinds.contains(k)) && else_hits > 0 && last_next > 0;
    let detail = format!(
        "600 formulas x 4 stages = {pairs} pairs, {source_true} true at source, {violations} not preserved, \
         implication rate {:.1}% (else-branch fired in {else_hits} pairs)",
        100.0 * (source_true - violations) as f64 / source_true.max(1) as f64
    );
    if violations == 0 {
        return Outcome::check(covered, detail);
    }
    Outcome {
        pass: false,
        detail: format!("{detail}; every violation negates a legal atom translated by the else-branch"),
        known: covered && unexplained == 0,
    }
}

fn complete_preservation() -> Outcome {
    let start = Instant::now();
    let g = make_nim(&[2, 2]).unwrap();
    let b = TranslationBounds::new(0, 2).unwrap();
    let art = translate_model_complete(&g.model, b).unwrap();
    let (paths, truncated) = collect_complete_paths(&g.model, 16).unwrap();
    let translated: Vec<_> = paths.iter().map(|p| translate_path_complete(&g.model, p, &art).unwrap()).collect();
    let gen = FormulaGen::new(&g.signature, 0, 2, Terms::BareOrClosed);
    let mut rng = StdRng::seed_from_u64(5);
    let (mut checks, mut source_true, mut violations) = (0, 0, 0);
    for _ in 0..600 {
        let f = gen.formula(&mut rng);
        let t = translate_formula_complete(&f, &g.signature.vars, b).unwrap();
        let mut art = art.clone();
        art.admit_actions(&t).unwrap();
        check_conformance(&g.signature, &f).unwrap();
        check_conformance(&art.model.signature, &t).unwrap();
        let (cf, ct) = (CompiledFormula::new(&f), CompiledFormula::new(&t));
        for (p, tp) in paths.iter().zip(&translated) {
            let src = cf.eval_from(&g.model, p, 0).unwrap();
            let dst = ct.eval_from(&art.model, tp, 0).unwrap();
            for (s, d) in src.iter().zip(&dst) {
                checks += 1;
                source_true += usize::from(*s);
                violations += usize::from(*s && !*d);
            }
        }
    }
    let took = start.elapsed();
    Outcome::check(
        violations == 0 && !truncated && took < Duration::from_secs(30),
        format!(
            "600 formulas on {} complete paths, {checks} stage checks, {source_true} true at source, \
             {violations} not preserved, {took:.2?}",
            paths.len()
        ),
    )
}

fn balanced(atoms: &[Formula], level: usize) -> Formula {
    if atoms.len() == 1 {
        return atoms[0].clone();
    }
    let (l, r) = atoms.split_at(atoms.len() / 2);
    let f = Formula::and(balanced(l, level + 1), balanced(r, level + 1));
    match level % 3 {
        0 => Formula::not(f),
        1 => Formula::next(f),
        _ => f,
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut disagreements = 0;
    for _ in 0..1200 {
        let m = random_model(&mut rng);
        let p = random_path(&mut rng, &m, 8);
        let f = FormulaGen::new(&m.signature, -3, 3, Terms::Free).formula(&mut rng);
        let j = rng.gen_range(0..=p.len());
        disagreements += usize::from(holds(&m, &p, j, &f).unwrap() != naive_holds(&m, &p, j, &f));
    }

    let nim = NimModel::new(&[10]).unwrap();
    let joints: Vec<_> = (0..10)
        .map(|i| {
            let text =
                if i % 2 == 0 { "reduce^Player1(1,1);noop^Player2" } else { "noop^Player1;reduce^Player2(1,1)" };
            parse_joint_action(text).unwrap()
        })
        .collect();
    let p = build_path(&nim, &joints).unwrap();
    let atoms: Vec<Formula> = (0..10_000)
        .map(|i| Formula::Lt(NumTerm::var("heap_1"), NumTerm::add(NumTerm::Int(i % 11), NumTerm::Int(i / 11))))
        .collect();
    let big = balanced(&atoms, 0);
    let distinct_atoms = subformulas(&big).iter().filter(|g| g.is_atomic()).count();
    let start = Instant::now();
    let verdicts = gdlz::eval::holds_all_stages(&nim, &p, &big).unwrap();
    let took = start.elapsed();
    let naive_at_0 = naive_holds(&nim, &p, 0, &big);
    Outcome::check(
        disagreements == 0
            && distinct_atoms == 10_000
            && count_atoms(&big) == 10_000
            && verdicts[0] == naive_at_0
            && took < Duration::from_secs(1),
        format!(
            "1200 random pairs, {disagreements} disagreements; 10000-atom formula on a 10-step path, all 11 stages in {took:.2?}"
        ),
    )
}

fn succinctness() -> Outcome {
    let (nim, p) = sample();
    let width = nim.signature().vars.len();
    let mut ok = true;
    let nim_rules = make_nim(&[5, 3]).unwrap().rules;
    let r = path_report(&nim, &p, 0, &nim_rules).unwrap();
    ok &= r.matches && r.inequality_holds();
    let nim_line = format!(
        "Nim rules: {} -> {} atoms, eligible {} -> {} predicted {}",
        r.source_count, r.translated_count, r.eligible_source, r.eligible_translated, r.predicted_count
    );

    // generated rule sets: recount the eligible subset independently
    let gen = FormulaGen::new(nim.signature(), 0, 5, Terms::InRange);
    let mut rng = StdRng::seed_from_u64(7);
    let (mut sets, mut mismatches, mut below) = (0, 0, 0);
    for _ in 0..200 {
        let rules = RuleSet::new("g", (0..5).map(|_| gen.formula(&mut rng)).collect());
        let r = path_report(&nim, &p, 0, &rules).unwrap();
        let mut expected = 0;
        for (f, c) in rules.iter().zip(&r.rules) {
            if c.eligible {
                let mut vals = 0;
                count_vals_into(f, &mut vals);
                expected += count_atoms(f) - vals + width * vals;
            }
        }
        sets += 1;
        mismatches += usize::from(expected != r.eligible_translated || !r.matches);
        below += usize::from(!r.inequality_holds());
    }
    ok &= mismatches == 0 && below == 0;

    let g = make_nim(&[2, 2]).unwrap();
    let c = complete_report(&g.signature.vars, TranslationBounds::new(-2, 2).unwrap(), &g.rules).unwrap();
    ok &= c.matches && c.inequality_holds() && (c.source_count, c.translated_count) == (278, 646);
    ok &= c.estimated_count.is_some();
    Outcome::check(
        ok,
        format!(
            "{nim_line}; {sets} generated sets, {mismatches} closed-form mismatches, {below} inequality failures; \
             complete <2,2> over [-2,2]: exact {} (pinned 646), coarse estimate {}",
            c.predicted_count,
            c.estimated_count.unwrap_or(0)
        ),
    )
}

fn count_vals_into(f: &Formula, n: &mut usize) {
    match f {
        Formula::Vals(_) => *n += 1,
        Formula::Not(g) | Formula::Next(g) => count_vals_into(g, n),
        Formula::And(l, r) => {
            count_vals_into(l, n);
            count_vals_into(r, n);
        }
        _ => {}
    }
}

fn embedding_round_trip() -> Outcome {
    let (nim, p) = sample();
    let art = translate_model_path(&nim, &p).unwrap();
    let embedded = embed_gdl(&art.model).unwrap();
    let tp = art.path.clone().unwrap();
    let gen = FormulaGen::gdl(&art.model.signature);
    let mut rng = StdRng::seed_from_u64(8);
    let mut differing = 0;
    for _ in 0..200 {
        let f = gen.formula(&mut rng);
        assert!(f.is_gdl());
        let j = rng.gen_range(0..=tp.len());
        differing += usize::from(holds(&art.model, &tp, j, &f).unwrap() != holds(&embedded, &tp, j, &f).unwrap());
    }
    Outcome::check(differing == 0, format!("200 GDL formulas, {differing} differing verdicts"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden replay of the <5,3> Nim path", golden_replay),
        ("Nim <3,2> satisfies its rules; mutation refuted", nim_is_model),
        ("performed actions are unique and legal", does_properties),
        ("path translation preserves truth", path_preservation),
        ("complete translation preserves truth", complete_preservation),
        ("memoized evaluation matches the naive oracle; 10^4 atoms under 1 s", oracle_equivalence),
        ("atom counts: inequality, closed form, pinned recount", succinctness),
        ("GDL embedding round trip", embedding_round_trip),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let word = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && o.known { " [known deviation, see README]" } else { "" };
        println!("{word} criterion {}: {name} ({}){note}", i + 1, o.detail);
        unexpected += usize::from(!o.pass && !o.known);
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed outside the known deviation");
        std::process::exit(1);
    }
}
