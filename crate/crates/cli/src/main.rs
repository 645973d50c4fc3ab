//! Command-line front end for the stable-model solver.
//!
//! Exit codes are a stable contract for scripts: 0 on success (models
//! found, candidate stable, query answered yes), 10 when the semantic
//! answer is negative (no stable model, candidate not stable, query
//! answered no), 1 on usage or input errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;
use stratum_core::{
    aas_solve_with_report, brute_force_stable_models, check_safe, classify, dependency_dot,
    explain_candidate, faas_solve, ground_program, parse_fo_program, parse_program,
    parse_program_into, query_atom, solve_one, Engine, FoProgram, GenConfig, KnowledgeBase,
    ModelSet, Nogood, NodeReport, Program, QueryMode, SolveOptions, StabilityVerdict, SuperGraph,
    Warning, DEFAULT_OMEGA_CAP,
};

const EXIT_OK: i32 = 0;
const EXIT_NO: i32 = 10;
const EXIT_ERR: i32 = 1;

#[derive(Parser)]
#[command(
    name = "stratum",
    version,
    about = "Stable-model solver with component-wise enumeration and an Omega classification index"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all stable models (or one with --one)
    Solve {
        #[command(flatten)]
        common: Common,
        /// Stop at the first model found, by backtracking search
        #[arg(long)]
        one: bool,
    },
    /// Report the Omega index, per-component bounds, and stratification
    Classify {
        #[command(flatten)]
        common: Common,
        /// Also write the dependency graph in DOT syntax to this file
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Check whether a candidate model (file of true atom names) is stable
    Check {
        /// File listing the candidate's true atoms, whitespace-separated
        candidate: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Ask whether an atom is true cautiously or bravely
    Query {
        /// Atom name (ground spelling for first-order input)
        atom: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        common: Common,
    },
    /// Ground first-order input to propositional rule text
    Ground {
        #[command(flatten)]
        common: Common,
    },
    /// Time the engines on seeded random programs
    Bench {
        /// Program sizes (atom count, or block count with --stratified)
        #[arg(long, value_delimiter = ',', default_value = "10")]
        sizes: Vec<usize>,
        /// Instances per size
        #[arg(long, default_value_t = 10)]
        instances: usize,
        /// Generate stratified block programs instead of mixed ones
        #[arg(long)]
        stratified: bool,
        /// Write per-instance measurements as CSV to this file
        #[arg(long, value_name = "FILE")]
        plot_data: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
        #[arg(long, value_enum, default_value_t)]
        engine: EngineArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        max_brute_atoms: usize,
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Input file; omit or pass '-' to read standard input
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
    /// Per-component enumerator override
    #[arg(long, value_enum, default_value_t)]
    engine: EngineArg,
    /// Keep rules with a false positive body atom when specializing
    /// components (slower, same answers)
    #[arg(long)]
    strict_convert: bool,
    /// Extra #nogood directives, one per line, applied on top of the input's
    #[arg(long, value_name = "FILE")]
    nogoods_from_file: Option<PathBuf>,
    /// Largest domain the brute-force engine accepts
    #[arg(long, default_value_t = 20)]
    max_brute_atoms: usize,
    /// Saturation cap for the Omega product
    #[arg(long, default_value_t = DEFAULT_OMEGA_CAP)]
    omega_cap: u64,
    /// Evaluate component contexts concurrently
    #[arg(long)]
    parallel: bool,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    #[default]
    Text,
    Structured,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum EngineArg {
    #[default]
    Auto,
    As1,
    As2,
    Brute,
}

impl EngineArg {
    fn to_engine(self) -> Engine {
        match self {
            EngineArg::Auto => Engine::Auto,
            EngineArg::As1 => Engine::As1,
            EngineArg::As2 => Engine::As2,
            EngineArg::Brute => Engine::Brute,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cautious,
    Brave,
}

fn main() {
    std::process::exit(run());
}

/// Write the whole stdout payload at once. A reader that hangs up early
/// (`stratum ... | head`) is not an error.
fn emit(text: &str) -> bool {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Ok(()) => true,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => true,
        Err(e) => {
            eprintln!("error: cannot write to standard output: {e}");
            false
        }
    }
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                emit(&e.to_string());
                EXIT_OK
            } else {
                eprint!("{e}");
                EXIT_ERR
            };
        }
    };
    match execute(cli.command) {
        Ok((code, out)) => {
            if emit(&out) {
                code
            } else {
                EXIT_ERR
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            EXIT_ERR
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<(String, String), String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            Ok((text, p.display().to_string()))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok((text, "-".to_string()))
        }
    }
}

fn print_warnings(warnings: &[Warning]) {
    for w in warnings {
        eprintln!("warning: line {}: {}", w.line, w.message);
    }
}

/// Either a propositional program or a first-order one. A file counts
/// as first-order exactly when it uses variables.
enum Input {
    Propositional(Program),
    FirstOrder(FoProgram),
}

fn parse_input(text: &str) -> Result<Input, String> {
    match parse_program(text) {
        Ok(program) => Ok(Input::Propositional(program)),
        Err(e) if e.message.contains("not allowed in a propositional program") => {
            let program = parse_fo_program(text).map_err(|e| e.to_string())?;
            let violations = check_safe(&program.rules);
            if !violations.is_empty() {
                let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
                return Err(format!("unsafe program: {}", list.join("; ")));
            }
            Ok(Input::FirstOrder(program))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn solve_options(common: &Common) -> SolveOptions {
    SolveOptions {
        engine: common.engine.to_engine(),
        strict_convert: common.strict_convert,
        parallel: common.parallel,
        omega_cap: common.omega_cap,
        brute_cap: common.max_brute_atoms,
    }
}

/// Extra nogoods from --nogoods-from-file, interned into `kb`.
fn extra_nogoods(
    common: &Common,
    kb: KnowledgeBase,
) -> Result<(KnowledgeBase, Vec<Nogood>), String> {
    match &common.nogoods_from_file {
        None => Ok((kb, Vec::new())),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let rules_before = kb.rule_count();
            let program = parse_program_into(&text, kb).map_err(|e| e.to_string())?;
            print_warnings(&program.warnings);
            if program.kb.rule_count() > rules_before {
                return Err(format!(
                    "{} contains rules; a nogoods file may only hold #nogood directives",
                    path.display()
                ));
            }
            Ok((program.kb, program.nogoods))
        }
    }
}

fn extra_nogood_names(common: &Common) -> Result<Vec<BTreeSet<String>>, String> {
    match &common.nogoods_from_file {
        None => Ok(Vec::new()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let program = parse_fo_program(&text).map_err(|e| e.to_string())?;
            Ok(program.nogoods)
        }
    }
}

fn model_line(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn models_json(kb: &KnowledgeBase, models: &ModelSet) -> serde_json::Value {
    json!(models
        .true_name_sets(kb)
        .into_iter()
        .collect::<Vec<Vec<String>>>())
}

fn nodes_json(nodes: &[NodeReport]) -> serde_json::Value {
    json!(nodes
        .iter()
        .map(|n| {
            json!({
                "atoms": n.atoms,
                "k": n.k,
                "c": n.c,
                "v": n.v,
                "t": n.t,
                "cut": n.cut,
                "saturated": n.saturated,
                "engine": n.engine.map(|e| e.to_string()),
                "contexts": n.contexts,
                "models": n.models,
                "cached": n.cached,
                "nogoods": n.nogoods,
                "visited": n.visited,
            })
        })
        .collect::<Vec<_>>())
}

fn push_json(out: &mut String, doc: &serde_json::Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(doc).unwrap());
}

fn push_model_lines(out: &mut String, kb: &KnowledgeBase, models: &ModelSet) {
    for names in models.true_name_sets(kb) {
        let _ = writeln!(out, "{}", model_line(&names));
    }
}

fn push_model_count(out: &mut String, models: &ModelSet) {
    let n = models.len();
    let _ = writeln!(out, "{n} model{}", if n == 1 { "" } else { "s" });
}

type CmdResult = Result<(i32, String), String>;

fn cmd_solve(common: Common, one: bool) -> CmdResult {
    let (text, input_name) = read_input(&common.input)?;
    let opts = solve_options(&common);
    let mut out = String::new();
    match parse_input(&text)? {
        Input::Propositional(program) => {
            print_warnings(&program.warnings);
            let (kb, mut nogoods) = extra_nogoods(&common, program.kb)?;
            nogoods.splice(0..0, program.nogoods);
            if one {
                let found = solve_one(&kb, &nogoods, &opts).map_err(|e| e.to_string())?;
                let code = if found.is_some() { EXIT_OK } else { EXIT_NO };
                match common.format {
                    FormatArg::Text => match &found {
                        Some(m) => {
                            let names = kb.names_of(m.true_set().iter());
                            let _ = writeln!(out, "{}", model_line(&names));
                        }
                        None => out.push_str("no stable model\n"),
                    },
                    FormatArg::Structured => {
                        let doc = json!({
                            "command": "solve",
                            "input": input_name,
                            "one": true,
                            "model": found.as_ref().map(|m| kb.names_of(m.true_set().iter())),
                        });
                        push_json(&mut out, &doc);
                    }
                }
                return Ok((code, out));
            }
            let report = aas_solve_with_report(&kb, &nogoods, &opts).map_err(|e| e.to_string())?;
            match common.format {
                FormatArg::Text => {
                    if report.models.is_empty() {
                        out.push_str("no stable model\n");
                    } else {
                        push_model_count(&mut out, &report.models);
                        push_model_lines(&mut out, &kb, &report.models);
                    }
                }
                FormatArg::Structured => {
                    let doc = json!({
                        "command": "solve",
                        "input": input_name,
                        "one": false,
                        "first_order": false,
                        "count": report.models.len(),
                        "models": models_json(&kb, &report.models),
                        "t": report.t,
                        "saturated": report.saturated,
                        "stratified": report.stratified,
                        "visited": report.visited,
                        "total_nodes": report.total_nodes,
                        "nodes": nodes_json(&report.nodes),
                    });
                    push_json(&mut out, &doc);
                }
            }
            let code = if report.models.is_empty() { EXIT_NO } else { EXIT_OK };
            Ok((code, out))
        }
        Input::FirstOrder(mut program) => {
            program.nogoods.extend(extra_nogood_names(&common)?);
            let outcome = faas_solve(&program, &opts).map_err(|e| e.to_string())?;
            if one {
                // The component search has already run; report its first model.
                let first = outcome.models.true_name_sets(&outcome.kb).into_iter().next();
                let code = if first.is_some() { EXIT_OK } else { EXIT_NO };
                match common.format {
                    FormatArg::Text => match &first {
                        Some(names) => {
                            let _ = writeln!(out, "{}", model_line(names));
                        }
                        None => out.push_str("no stable model\n"),
                    },
                    FormatArg::Structured => {
                        let doc = json!({
                            "command": "solve",
                            "input": input_name,
                            "one": true,
                            "model": first,
                        });
                        push_json(&mut out, &doc);
                    }
                }
                return Ok((code, out));
            }
            match common.format {
                FormatArg::Text => {
                    if outcome.models.is_empty() {
                        out.push_str("no stable model\n");
                    } else {
                        push_model_count(&mut out, &outcome.models);
                        push_model_lines(&mut out, &outcome.kb, &outcome.models);
                    }
                }
                FormatArg::Structured => {
                    let doc = json!({
                        "command": "solve",
                        "input": input_name,
                        "one": false,
                        "first_order": true,
                        "count": outcome.models.len(),
                        "models": models_json(&outcome.kb, &outcome.models),
                        "ground_atoms": outcome.kb.atom_count(),
                        "instances": outcome.instances,
                    });
                    push_json(&mut out, &doc);
                }
            }
            let code = if outcome.models.is_empty() { EXIT_NO } else { EXIT_OK };
            Ok((code, out))
        }
    }
}

/// The propositional image of any input: the program itself, or its
/// grounding for first-order input.
fn propositional_image(common: &Common, text: &str) -> Result<Program, String> {
    match parse_input(text)? {
        Input::Propositional(program) => Ok(program),
        Input::FirstOrder(mut program) => {
            program.nogoods.extend(extra_nogood_names(common)?);
            Ok(ground_program(&program))
        }
    }
}

fn cmd_classify(common: Common, dot: Option<PathBuf>) -> CmdResult {
    let (text, input_name) = read_input(&common.input)?;
    let program = propositional_image(&common, &text)?;
    print_warnings(&program.warnings);
    let kb = program.kb;
    let class = classify(&kb, common.omega_cap);
    let sg = SuperGraph::analyze(&kb);
    if let Some(path) = &dot {
        std::fs::write(path, dependency_dot(&kb))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let mut out = String::new();
    match common.format {
        FormatArg::Text => {
            let mut headline = format!("Ω_{}", class.t);
            if class.saturated {
                headline.push_str(" (saturated at the cap)");
            } else if class.stratified {
                headline.push_str(" (stratified)");
            }
            let _ = writeln!(out, "{headline}");
            let _ = writeln!(
                out,
                "t = {}, {} node{}, stratified: {}",
                class.t,
                class.nodes.len(),
                if class.nodes.len() == 1 { "" } else { "s" },
                if class.stratified { "yes" } else { "no" }
            );
            let atom_cells: Vec<String> = sg
                .nodes()
                .iter()
                .map(|n| format!("{{{}}}", kb.names_of(n.atoms.iter()).join(", ")))
                .collect();
            let width = atom_cells.iter().map(String::len).max().unwrap_or(5).max(5);
            let _ = writeln!(out, "node  {:<width$}  k  c  v  t  cut", "atoms");
            for (i, bound) in class.nodes.iter().enumerate() {
                let cut = kb.names_of(bound.cut.iter()).join(", ");
                let _ = writeln!(
                    out,
                    "{:>4}  {:<width$}  {}  {}  {}  {}  {}",
                    i, atom_cells[i], bound.k, bound.c, bound.v, bound.t, cut
                );
            }
        }
        FormatArg::Structured => {
            let nodes: Vec<serde_json::Value> = class
                .nodes
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    json!({
                        "atoms": kb.names_of(sg.nodes()[i].atoms.iter()),
                        "k": b.k,
                        "c": b.c,
                        "v": b.v,
                        "t": b.t,
                        "cut": kb.names_of(b.cut.iter()),
                        "saturated": b.saturated,
                    })
                })
                .collect();
            let doc = json!({
                "command": "classify",
                "input": input_name,
                "omega": class.t,
                "saturated": class.saturated,
                "stratified": class.stratified,
                "nodes": nodes,
            });
            push_json(&mut out, &doc);
        }
    }
    Ok((EXIT_OK, out))
}

fn cmd_check(common: Common, candidate_path: PathBuf) -> CmdResult {
    let (text, input_name) = read_input(&common.input)?;
    let program = propositional_image(&common, &text)?;
    print_warnings(&program.warnings);
    let kb = program.kb;
    let candidate_text = std::fs::read_to_string(&candidate_path)
        .map_err(|e| format!("cannot read {}: {e}", candidate_path.display()))?;
    let mut candidate = BTreeSet::new();
    for name in candidate_text.split_whitespace() {
        match kb.atom(name) {
            Some(a) => {
                candidate.insert(a);
            }
            None => return Err(format!("unknown atom '{name}' in candidate")),
        }
    }
    let verdict = explain_candidate(&kb, &candidate);
    let (stable, reason_text, reason_json) = match &verdict {
        StabilityVerdict::Stable => (true, String::new(), serde_json::Value::Null),
        StabilityVerdict::UnsatisfiedRule(i) => {
            let rule = kb.render_rule(&kb.rules()[*i]);
            (
                false,
                format!("unsatisfied rule '{rule}'"),
                json!({"kind": "unsatisfied_rule", "rule": rule, "index": i}),
            )
        }
        StabilityVerdict::Unproved(a) => {
            let name = kb.name(*a).to_string();
            (
                false,
                format!("atom '{name}' has no proof"),
                json!({"kind": "unproved_atom", "atom": name}),
            )
        }
    };
    let mut out = String::new();
    match common.format {
        FormatArg::Text => {
            if stable {
                out.push_str("stable\n");
            } else {
                let _ = writeln!(out, "not stable: {reason_text}");
            }
        }
        FormatArg::Structured => {
            let doc = json!({
                "command": "check",
                "input": input_name,
                "candidate": kb.names_of(candidate.iter()),
                "stable": stable,
                "reason": reason_json,
            });
            push_json(&mut out, &doc);
        }
    }
    Ok((if stable { EXIT_OK } else { EXIT_NO }, out))
}

fn cmd_query(common: Common, atom_name: String, mode: ModeArg) -> CmdResult {
    let (text, input_name) = read_input(&common.input)?;
    let program = propositional_image(&common, &text)?;
    print_warnings(&program.warnings);
    let (kb, mut nogoods) = extra_nogoods(&common, program.kb)?;
    nogoods.splice(0..0, program.nogoods);
    let atom = kb
        .atom(&atom_name)
        .ok_or_else(|| format!("unknown atom '{atom_name}'"))?;
    let opts = solve_options(&common);
    let mode_core = match mode {
        ModeArg::Cautious => QueryMode::Cautious,
        ModeArg::Brave => QueryMode::Brave,
    };
    let answer = query_atom(&kb, atom, mode_core, &nogoods, &opts).map_err(|e| e.to_string())?;
    let mut out = String::new();
    match common.format {
        FormatArg::Text => {
            let verdict = if answer.yes { "yes" } else { "no" };
            if answer.early_stop {
                let _ = writeln!(
                    out,
                    "{verdict} (early stop: decided after {} of {} nodes)",
                    answer.visited, answer.total_nodes
                );
            } else {
                let _ = writeln!(out, "{verdict}");
            }
        }
        FormatArg::Structured => {
            let doc = json!({
                "command": "query",
                "input": input_name,
                "atom": atom_name,
                "mode": match mode { ModeArg::Cautious => "cautious", ModeArg::Brave => "brave" },
                "yes": answer.yes,
                "early_stop": answer.early_stop,
                "visited": answer.visited,
                "total_nodes": answer.total_nodes,
            });
            push_json(&mut out, &doc);
        }
    }
    Ok((if answer.yes { EXIT_OK } else { EXIT_NO }, out))
}

fn cmd_ground(common: Common) -> CmdResult {
    let (text, input_name) = read_input(&common.input)?;
    let program = propositional_image(&common, &text)?;
    print_warnings(&program.warnings);
    let mut rendered = program.kb.render();
    for ng in &program.nogoods {
        let names = program.kb.names_of(ng.atoms().iter());
        let _ = writeln!(rendered, "#nogood {}.", names.join(" "));
    }
    let mut out = String::new();
    match common.format {
        FormatArg::Text => out.push_str(&rendered),
        FormatArg::Structured => {
            let doc = json!({
                "command": "ground",
                "input": input_name,
                "atoms": program.kb.atom_count(),
                "rules": program.kb.rule_count(),
                "text": rendered,
            });
            push_json(&mut out, &doc);
        }
    }
    Ok((EXIT_OK, out))
}

struct BenchRow {
    size: usize,
    instance: usize,
    seed: u64,
    t: u64,
    models: usize,
    brute_ns: Option<u128>,
    as1_ns: Option<u128>,
    as2_ns: Option<u128>,
    aas_ns: u128,
}

struct BenchArgs {
    sizes: Vec<usize>,
    instances: usize,
    stratified: bool,
    plot_data: Option<PathBuf>,
    format: FormatArg,
    engine: EngineArg,
    seed: u64,
    max_brute_atoms: usize,
    parallel: bool,
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    let opts = SolveOptions {
        engine: args.engine.to_engine(),
        parallel: args.parallel,
        brute_cap: args.max_brute_atoms,
        ..SolveOptions::default()
    };
    let mut rows: Vec<BenchRow> = Vec::new();
    for &size in &args.sizes {
        for instance in 0..args.instances {
            let inst_seed = args
                .seed
                .wrapping_mul(1_000_003)
                .wrapping_add((size as u64) << 20)
                .wrapping_add(instance as u64);
            let text = if args.stratified {
                stratum_core::random_stratified(size, inst_seed)
            } else {
                stratum_core::random_program(
                    &GenConfig {
                        atoms: size,
                        rules: size * 2,
                        max_body: 3,
                        max_non_horn: size.min(8),
                    },
                    inst_seed,
                )
            };
            let kb = stratum_core::parse_kb(&text).map_err(|e| e.to_string())?;
            let class = classify(&kb, DEFAULT_OMEGA_CAP);
            let start = Instant::now();
            let report = aas_solve_with_report(&kb, &[], &opts).map_err(|e| e.to_string())?;
            let aas_ns = start.elapsed().as_nanos();
            let brute_ns = if kb.atom_count() <= args.max_brute_atoms {
                let start = Instant::now();
                let brute =
                    brute_force_stable_models(&kb, args.max_brute_atoms).map_err(|e| e.to_string())?;
                let ns = start.elapsed().as_nanos();
                if brute.true_sets() != report.models.true_sets() {
                    return Err(format!(
                        "engines disagree on seed {inst_seed} (size {size}, instance {instance})"
                    ));
                }
                Some(ns)
            } else {
                None
            };
            let time_flat = |f: fn(&KnowledgeBase) -> Result<ModelSet, stratum_core::TooManyGuesses>| {
                let start = Instant::now();
                f(&kb).ok().map(|ms| {
                    let ns = start.elapsed().as_nanos();
                    debug_assert_eq!(ms.true_sets(), report.models.true_sets());
                    ns
                })
            };
            let as1_ns = time_flat(stratum_core::all_stable1);
            let as2_ns = time_flat(stratum_core::all_stable2);
            rows.push(BenchRow {
                size,
                instance,
                seed: inst_seed,
                t: class.t,
                models: report.models.len(),
                brute_ns,
                as1_ns,
                as2_ns,
                aas_ns,
            });
        }
    }
    if let Some(path) = &args.plot_data {
        let mut csv = String::from("size,instance,seed,t,models,brute_ns,as1_ns,as2_ns,aas_ns\n");
        for r in &rows {
            let cell = |v: &Option<u128>| v.map_or(String::new(), |n| n.to_string());
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{}",
                r.size,
                r.instance,
                r.seed,
                r.t,
                r.models,
                cell(&r.brute_ns),
                cell(&r.as1_ns),
                cell(&r.as2_ns),
                r.aas_ns
            );
        }
        std::fs::write(path, csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let comparable = rows.iter().filter(|r| r.brute_ns.is_some()).count();
    let aas_wins = rows
        .iter()
        .filter(|r| r.brute_ns.is_some_and(|b| r.aas_ns <= b))
        .count();
    let mut out = String::new();
    match args.format {
        FormatArg::Text => {
            let ms = |ns: u128| format!("{:.3}", ns as f64 / 1e6);
            let cell = |v: &Option<u128>| v.map_or("-".to_string(), ms);
            let _ = writeln!(
                out,
                "{:>5} {:>8} {:>12} {:>6} {:>10} {:>10} {:>10} {:>10}",
                "size", "instance", "t", "models", "brute_ms", "as1_ms", "as2_ms", "aas_ms"
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:>5} {:>8} {:>12} {:>6} {:>10} {:>10} {:>10} {:>10}",
                    r.size,
                    r.instance,
                    r.t,
                    r.models,
                    cell(&r.brute_ns),
                    cell(&r.as1_ns),
                    cell(&r.as2_ns),
                    ms(r.aas_ns)
                );
            }
            if comparable > 0 {
                let _ = writeln!(
                    out,
                    "component solve not slower than brute force on {aas_wins}/{comparable} comparable instances"
                );
            }
        }
        FormatArg::Structured => {
            let doc = json!({
                "command": "bench",
                "seed": args.seed,
                "stratified": args.stratified,
                "rows": rows.iter().map(|r| json!({
                    "size": r.size,
                    "instance": r.instance,
                    "seed": r.seed,
                    "t": r.t,
                    "models": r.models,
                    "brute_ns": r.brute_ns.map(|n| n as u64),
                    "as1_ns": r.as1_ns.map(|n| n as u64),
                    "as2_ns": r.as2_ns.map(|n| n as u64),
                    "aas_ns": r.aas_ns as u64,
                })).collect::<Vec<_>>(),
                "comparable": comparable,
                "aas_not_slower": aas_wins,
            });
            push_json(&mut out, &doc);
        }
    }
    Ok((EXIT_OK, out))
}

fn execute(command: Command) -> CmdResult {
    match command {
        Command::Solve { common, one } => cmd_solve(common, one),
        Command::Classify { common, dot } => cmd_classify(common, dot),
        Command::Check { common, candidate } => cmd_check(common, candidate),
        Command::Query { common, atom, mode } => cmd_query(common, atom, mode),
        Command::Ground { common } => cmd_ground(common),
        Command::Bench {
            sizes,
            instances,
            stratified,
            plot_data,
            format,
            engine,
            seed,
            max_brute_atoms,
            parallel,
        } => cmd_bench(BenchArgs {
            sizes,
            instances,
            stratified,
            plot_data,
            format,
            engine,
            seed,
            max_brute_atoms,
            parallel,
        }),
    }
}
