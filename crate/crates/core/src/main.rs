use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use gdlz::analysis::{complete_report, count_description, path_report, SuccinctnessReport};
use gdlz::eval::{conformance_issues, holds, holds_all_stages, is_model_of, Verdict};
use gdlz::formula::{parse_formula, parse_rules, print_formula, Formula, RuleSet};
use gdlz::model::io::{parse_joint_action, read_model, read_path_file, write_model, write_path_file};
use gdlz::model::{
    build_path, collect_complete_paths, legal_actions, make_nim, step, validate_model, FiniteModel, Path, StModel,
    StateId,
};
use gdlz::translate::{
    translate_formula_complete, translate_formula_path, translate_model_complete, translate_model_path,
    TranslationBounds,
};

/// Bound spans above this get a warning: the complete translation grows
/// with every value in the range.
const LARGE_SPAN: i64 = 10_000;
const DEFAULT_DEPTH: usize = 64;

#[derive(Parser)]
#[command(name = "gdlz", version, about = "Games with integer state variables: simulate, check, translate to GDL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Path,
    Complete,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula or a rule file and print the canonical form.
    #[command(group(ArgGroup::new("input").required(true).args(["formula", "rules"])))]
    Parse {
        formula: Option<String>,
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Model file whose signature the rules are checked against.
        #[arg(long)]
        signature: Option<PathBuf>,
    },
    /// Write the model and rule files of a Nim instance.
    Nim {
        /// Initial heap sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        heaps: Vec<i64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value = "nim")]
        name: String,
    },
    /// Replay, enumerate or interactively build paths of a model.
    #[command(group(ArgGroup::new("how").required(true).args(["actions", "enumerate", "interactive"])))]
    Run {
        #[arg(long)]
        model: PathBuf,
        /// File with one joint action per line.
        #[arg(long)]
        actions: Option<PathBuf>,
        #[arg(long)]
        enumerate: bool,
        #[arg(long, requires = "enumerate")]
        max_depth: Option<usize>,
        #[arg(long)]
        interactive: bool,
        /// Rules to evaluate after each interactive step.
        #[arg(long, requires = "interactive")]
        rules: Option<PathBuf>,
    },
    /// Check a formula on a path, or check that a model satisfies rules.
    #[command(group(ArgGroup::new("what").required(true).args(["formula", "is_model_of"])))]
    #[command(group(ArgGroup::new("where").args(["stage", "global"])))]
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, conflicts_with = "is_model_of")]
        path: Option<PathBuf>,
        #[arg(long, requires = "path")]
        formula: Option<String>,
        #[arg(long)]
        stage: Option<usize>,
        #[arg(long)]
        global: bool,
        #[arg(long, conflicts_with_all = ["stage", "global"])]
        is_model_of: Option<PathBuf>,
        #[arg(long, requires = "is_model_of")]
        max_depth: Option<usize>,
    },
    /// Translate a model (and formulas) into GDL.
    #[command(group(ArgGroup::new("body").args(["formula", "rules"])))]
    Translate {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, conflicts_with_all = ["zmin", "zmax"])]
        path: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true, requires = "zmax")]
        zmin: Option<i64>,
        #[arg(long, allow_negative_numbers = true, requires = "zmin")]
        zmax: Option<i64>,
        #[arg(long)]
        formula: Option<String>,
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Stage the formulas are translated relative to (path mode).
        #[arg(long, default_value_t = 0)]
        stage: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value = "gdl")]
        name: String,
    },
    /// Atom counts of rules and of their translation.
    Analyze {
        #[arg(long)]
        rules: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["zmin", "zmax"])]
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        stage: usize,
        #[arg(long, allow_negative_numbers = true, requires = "zmax")]
        zmin: Option<i64>,
        #[arg(long, allow_negative_numbers = true, requires = "zmin")]
        zmax: Option<i64>,
        /// Numerical variables, when no model is given (complete mode).
        #[arg(long, value_delimiter = ',', conflicts_with = "model")]
        vars: Vec<String>,
        /// Print `key=value` lines instead of a table.
        #[arg(long)]
        kv: bool,
    },
}

enum Failure {
    /// Exit 1: the question was well posed and the answer is negative.
    Semantic(String),
    /// Exit 2: unreadable or inconsistent input.
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(context: impl std::fmt::Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Input(format!("{context}: {e}"))
}

fn color_enabled() -> bool {
    std::env::var("GDLZ_COLOR").map(|v| v != "0").unwrap_or(true) && io::stdout().is_terminal()
}

fn result_line(word: &str) {
    if color_enabled() {
        let code = if matches!(word, "true" | "holds") { 32 } else { 31 };
        println!("RESULT \x1b[{code}m{word}\x1b[0m");
    } else {
        println!("RESULT {word}");
    }
}

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(input(path.display()))
}

fn write(path: &FsPath, text: &str) -> Outcome {
    fs::write(path, text).map_err(input(path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn load_model(path: &FsPath) -> Result<FiniteModel, Failure> {
    let m = read_model(&read(path)?).map_err(input(path.display()))?;
    let issues = validate_model(&m);
    if !issues.is_empty() {
        let lines: Vec<String> = issues.iter().map(|d| d.to_string()).collect();
        return Err(Failure::Input(format!("{}: invalid model\n  {}", path.display(), lines.join("\n  "))));
    }
    Ok(m)
}

fn load_rules(path: &FsPath) -> Result<RuleSet, Failure> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_rules(&name, &read(path)?).map_err(input(path.display()))
}

fn load_path(m: &FiniteModel, path: &FsPath) -> Result<Path<StateId>, Failure> {
    let joints = read_path_file(&read(path)?).map_err(input(path.display()))?;
    build_path(m, &joints).map_err(|e| Failure::Semantic(format!("{}: {e}", path.display())))
}

fn bounds(zmin: Option<i64>, zmax: Option<i64>) -> Result<TranslationBounds, Failure> {
    let (Some(lo), Some(hi)) = (zmin, zmax) else {
        return Err(Failure::Input("complete mode needs --zmin and --zmax".into()));
    };
    let b = TranslationBounds::new(lo, hi).map_err(input("bounds"))?;
    if hi.saturating_sub(lo) > LARGE_SPAN {
        eprintln!("warning: the range [{lo}, {hi}] spans more than {LARGE_SPAN} values; the translation may be very large");
    }
    Ok(b)
}

fn describe_state(m: &FiniteModel, w: &StateId) -> String {
    let props: Vec<String> = m.props(w).iter().map(|p| p.to_string()).collect();
    let vals: Vec<String> = m.vals(w).iter().map(|v| v.to_string()).collect();
    format!("{} vals=<{}> props={}", m.label(w), vals.join(","), props.join(","))
}

fn winners(m: &FiniteModel, w: &StateId) -> String {
    let ws: Vec<&str> = m.signature.agents.iter().filter(|r| m.wins(r, w)).map(String::as_str).collect();
    if ws.is_empty() {
        "none".into()
    } else {
        ws.join(", ")
    }
}

fn print_trace(m: &FiniteModel, p: &Path<StateId>) {
    for j in 0..=p.len() {
        println!("stage {j}: {}", describe_state(m, p.state(j)));
        if let Some(d) = p.joint_at(j) {
            println!("  does {d}");
        }
    }
    if p.is_complete(m) {
        println!("complete; wins: {}", winners(m, p.last()));
    } else {
        println!("incomplete");
    }
}

fn cmd_parse(formula: Option<String>, rules: Option<PathBuf>, signature: Option<PathBuf>) -> Outcome {
    let set = match (formula, rules) {
        (Some(text), _) => RuleSet::new("formula", vec![parse_formula(&text).map_err(input("formula"))?]),
        (None, Some(path)) => load_rules(&path)?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let sig = match signature {
        Some(path) => Some(load_model(&path)?.signature),
        None => None,
    };
    let mut bad = 0;
    for (i, f) in set.iter().enumerate() {
        println!("{}", print_formula(f));
        if let Some(sig) = &sig {
            let issues = conformance_issues(sig, f);
            if issues.is_empty() {
                println!("  rule {}: conforms", i + 1);
            } else {
                bad += 1;
                for issue in issues {
                    println!("  rule {}: {issue}", i + 1);
                }
            }
        }
    }
    if bad > 0 {
        return Err(Failure::Semantic(format!("{bad} rule(s) do not conform to the signature")));
    }
    Ok(())
}

fn cmd_nim(heaps: &[i64], out_dir: &FsPath, name: &str) -> Outcome {
    let game = make_nim(heaps).map_err(input("heaps"))?;
    fs::create_dir_all(out_dir).map_err(input(out_dir.display()))?;
    write(&out_dir.join(format!("{name}.model")), &write_model(&game.model))?;
    write(&out_dir.join(format!("{name}.rules")), &game.rules_text())
}

fn cmd_run(model: &FsPath, actions: Option<PathBuf>, enumerate: bool, max_depth: Option<usize>) -> Outcome {
    let m = load_model(model)?;
    if let Some(path) = actions {
        let p = load_path(&m, &path)?;
        print_trace(&m, &p);
        return Ok(());
    }
    debug_assert!(enumerate);
    let (paths, truncated) =
        collect_complete_paths(&m, max_depth.unwrap_or(DEFAULT_DEPTH)).map_err(input(model.display()))?;
    for (i, p) in paths.iter().enumerate() {
        let labels: Vec<String> = p.states().iter().map(|w| m.label(w)).collect();
        println!("path {}: {} (wins: {})", i + 1, labels.join(" -> "), winners(&m, p.last()));
    }
    println!("complete paths: {}", paths.len());
    if truncated {
        println!("some branches exceed the depth bound");
    }
    Ok(())
}

fn cmd_interactive(model: &FsPath, rules: Option<PathBuf>) -> Outcome {
    let m = load_model(model)?;
    let rules = match rules {
        Some(path) => Some(load_rules(&path)?),
        None => None,
    };
    let mut states = vec![m.initial];
    let mut joints = Vec::new();
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        let w = *states.last().expect("non-empty");
        let j = joints.len();
        println!("stage {j}: {}", describe_state(&m, &w));
        let p = Path::from_parts(states.clone(), joints.clone());
        if let Some(rules) = &rules {
            for (i, f) in rules.iter().enumerate() {
                let v = holds(&m, &p, j, f).map_err(input(format!("rule {}", i + 1)))?;
                println!("  rule {}: {v}", i + 1);
            }
        }
        if m.is_terminal(&w) {
            println!("complete; wins: {}", winners(&m, &w));
            return Ok(());
        }
        let legal: Vec<String> =
            legal_actions(&m, &w).map_err(input("model"))?.iter().map(|a| a.to_string()).collect();
        println!("  legal: {}", legal.join(" "));
        print!("> ");
        let _ = io::stdout().flush();
        let Some(line) = lines.next() else {
            println!();
            println!("incomplete");
            return Ok(());
        };
        let line = line.map_err(input("stdin"))?;
        if line.trim().is_empty() {
            continue;
        }
        let d = match parse_joint_action(line.trim()) {
            Ok(d) => d,
            Err(e) => {
                println!("  error: {e}");
                continue;
            }
        };
        let mut attempt = joints.clone();
        attempt.push(d.clone());
        if let Err(e) = build_path(&m, &attempt) {
            println!("  rejected: {e}");
            continue;
        }
        states.push(step(&m, &w, &d).map_err(input("model"))?);
        joints.push(d);
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    model: &FsPath,
    path: Option<PathBuf>,
    formula: Option<String>,
    stage: Option<usize>,
    global: bool,
    rules: Option<PathBuf>,
    max_depth: Option<usize>,
) -> Outcome {
    let m = load_model(model)?;
    if let Some(rules) = rules {
        let set = load_rules(&rules)?;
        let verdict = is_model_of(&m, &set, max_depth.unwrap_or(DEFAULT_DEPTH)).map_err(input(rules.display()))?;
        result_line(verdict.keyword());
        return match verdict {
            Verdict::Holds { paths } => {
                println!("all {} rules hold on {paths} complete paths", set.len());
                Ok(())
            }
            Verdict::Inconclusive { paths } => {
                println!("no counterexample on {paths} complete paths, but the depth bound cut some branches");
                Err(Failure::Semantic("inconclusive".into()))
            }
            Verdict::Fails { path, stage, rule } => {
                println!("rule {} is false at stage {stage} of:", rule + 1);
                print_trace(&m, &path);
                Err(Failure::Semantic("counterexample found".into()))
            }
        };
    }
    let path = path.expect("clap requires --path with --formula");
    let f = parse_formula(formula.as_deref().expect("clap requires a formula")).map_err(input("formula"))?;
    let p = load_path(&m, &path)?;
    let ok = if global {
        let table = holds_all_stages(&m, &p, &f).map_err(input("formula"))?;
        let ok = table.iter().all(|v| *v);
        result_line(if ok { "true" } else { "false" });
        for (j, v) in table.iter().enumerate() {
            println!("stage {j}: {v}");
        }
        ok
    } else {
        let j = stage.unwrap_or(0);
        let ok = holds(&m, &p, j, &f).map_err(input("formula"))?;
        result_line(if ok { "true" } else { "false" });
        println!("stage {j} of {}", path.display());
        ok
    };
    if ok {
        Ok(())
    } else {
        Err(Failure::Semantic("formula is false".into()))
    }
}

fn formulas(formula: Option<String>, rules: Option<PathBuf>) -> Result<Vec<Formula>, Failure> {
    Ok(match (formula, rules) {
        (Some(text), _) => vec![parse_formula(&text).map_err(input("formula"))?],
        (None, Some(path)) => load_rules(&path)?.rules,
        (None, None) => Vec::new(),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_translate(
    mode: Mode,
    model: &FsPath,
    path: Option<PathBuf>,
    zmin: Option<i64>,
    zmax: Option<i64>,
    body: Vec<Formula>,
    stage: usize,
    out_dir: &FsPath,
    name: &str,
) -> Outcome {
    let m = load_model(model)?;
    let (mut art, translated) = match mode {
        Mode::Path => {
            let Some(path_file) = path else { return Err(Failure::Input("path mode needs --path".into())) };
            let p = load_path(&m, &path_file)?;
            let art = translate_model_path(&m, &p).map_err(input("path translation"))?;
            let mut out = Vec::new();
            for (i, f) in body.iter().enumerate() {
                let t = translate_formula_path(&m, &p, f, stage).map_err(input(format!("formula {}", i + 1)))?;
                out.push(t.formula);
            }
            (art, out)
        }
        Mode::Complete => {
            let b = bounds(zmin, zmax)?;
            let art = translate_model_complete(&m, b).map_err(input("complete translation"))?;
            let mut out = Vec::new();
            for (i, f) in body.iter().enumerate() {
                let t = translate_formula_complete(f, &m.signature.vars, b).map_err(input(format!("formula {}", i + 1)))?;
                out.push(t);
            }
            (art, out)
        }
    };
    for f in &translated {
        art.admit_actions(f).map_err(input("translated formula"))?;
    }
    fs::create_dir_all(out_dir).map_err(input(out_dir.display()))?;
    write(&out_dir.join(format!("{name}.model")), &write_model(&art.model))?;
    write(&out_dir.join(format!("{name}.actions")), &art.action_map.to_sidecar())?;
    if let Some(p) = &art.path {
        write(&out_dir.join(format!("{name}.path")), &write_path_file(p.joints()))?;
    }
    if !translated.is_empty() {
        let text: String = translated.iter().map(|f| format!("{}\n", print_formula(f))).collect();
        write(&out_dir.join(format!("{name}.rules")), &text)?;
    }
    println!(
        "states: {}, actions: {}, range: {}",
        art.model.num_states(),
        art.action_map.len(),
        art.bounds.map(|(lo, hi)| format!("[{lo}, {hi}]")).unwrap_or_else(|| "none".into())
    );
    Ok(())
}

fn print_table(r: &SuccinctnessReport) {
    println!("{:>6} {:>8} {:>10} {:>5} {:>5} {:>8}", "rule", "source", "translated", "vals", "vars", "eligible");
    for (i, c) in r.rules.iter().enumerate() {
        println!(
            "{:>6} {:>8} {:>10} {:>5} {:>5} {:>8}",
            i + 1,
            c.source,
            c.translated,
            c.vals,
            c.vars,
            if c.eligible { "yes" } else { "no" }
        );
    }
    println!("{:>6} {:>8} {:>10}", "total", r.source_count, r.translated_count);
    println!();
    for (k, v) in r.key_values() {
        if !matches!(k, "mode" | "source_count" | "translated_count") {
            println!("{k:>20}  {v}");
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_analyze(
    rules: &FsPath,
    mode: Mode,
    model: Option<PathBuf>,
    path: Option<PathBuf>,
    stage: usize,
    zmin: Option<i64>,
    zmax: Option<i64>,
    vars: Vec<String>,
    kv: bool,
) -> Outcome {
    let set = load_rules(rules)?;
    let m = match &model {
        Some(p) => Some(load_model(p)?),
        None => None,
    };
    let report = match mode {
        Mode::Path => {
            let (Some(m), Some(path_file)) = (&m, path) else {
                return Err(Failure::Input("path mode needs --model and --path".into()));
            };
            let p = load_path(m, &path_file)?;
            path_report(m, &p, stage, &set).map_err(input("analysis"))?
        }
        Mode::Complete => {
            let vars = m.map(|m| m.signature.vars).unwrap_or(vars);
            complete_report(&vars, bounds(zmin, zmax)?, &set).map_err(input("analysis"))?
        }
    };
    debug_assert_eq!(report.source_count, count_description(&set));
    if kv {
        print!("{report}");
    } else {
        print_table(&report);
    }
    if !report.inequality_holds() || !report.matches {
        return Err(Failure::Semantic("the closed form does not match the translated count".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Parse { formula, rules, signature } => cmd_parse(formula, rules, signature),
        Command::Nim { heaps, out_dir, name } => cmd_nim(&heaps, &out_dir, &name),
        Command::Run { model, interactive: true, rules, .. } => cmd_interactive(&model, rules),
        Command::Run { model, actions, enumerate, max_depth, .. } => cmd_run(&model, actions, enumerate, max_depth),
        Command::Check { model, path, formula, stage, global, is_model_of, max_depth } => {
            cmd_check(&model, path, formula, stage, global, is_model_of, max_depth)
        }
        Command::Translate { mode, model, path, zmin, zmax, formula, rules, stage, out_dir, name } => {
            let body = formulas(formula, rules)?;
            cmd_translate(mode, &model, path, zmin, zmax, body, stage, &out_dir, &name)
        }
        Command::Analyze { rules, mode, model, path, stage, zmin, zmax, vars, kv } => {
            cmd_analyze(&rules, mode, model, path, stage, zmin, zmax, vars, kv)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic(msg)) => {
            eprintln!("gdlz: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("gdlz: {msg}");
            ExitCode::from(2)
        }
    }
}
