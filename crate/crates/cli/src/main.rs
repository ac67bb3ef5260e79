//! `gck`: command-line front end for the core library.
//!
//! Usage errors exit with status 2 (printed by the argument parser); domain
//! errors exit with status 1 and print `error[Name]: message` on stderr.
//! Outputs are deterministic; `--json` switches scalar answers to JSON, while
//! structured results (graphs, decompositions, certificates, quantum graphs)
//! are always printed in their JSON schema.

mod args;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use gck_core::bridge::{
    crosscheck_main_theorem, distinguish_by_ehw, formula_from_cert, quantum_from_formula_with, CrosscheckReport,
    SearchBounds, SizeParams,
};
use gck_core::decomp::{ghd_to_ehd, normalize_binary_monotone, search_width_with, validate, DecompMode, Engine};
use gck_core::fixtures::CATALOG;
use gck_core::homcount::{count_homs_hypergraph_with, count_homs_labeled_with, count_homs_with};
use gck_core::io::{
    cert_from_json, cert_to_json, decomp_from_json, decomp_to_json, decomp_to_json_named, hypergraph_from_json,
    incidence_from_json, incidence_to_json, labeled_from_json, labeled_to_json, parse_json, quantum_from_json,
    quantum_to_json, render_json, Names,
};
use gck_core::labeled::{cert_to_ehd, ehd_to_cert, eval_cert};
use gck_core::logic::{
    check_syntax, eval, guard_formula, parse_formula, render_formula, to_normal_form, Formula, Interpretation,
    SyntaxMode,
};
use gck_core::model::{to_incidence, IncidenceGraph};
use gck_core::quantum::{normalize_indicator_with, qhom_with};
use gck_core::{Config, Error, GuardFunction, Result};

use args::{
    BridgeCmd, Cli, Command, DecompCmd, EngineArg, FixturesCmd, Global, HomMode, LabeledCmd, LogicCmd, ModeArg,
    QuantumCmd, SyntaxArg,
};

/// What a command produced.
struct Output {
    /// Text for stdout.
    text: String,
    /// Whether the command's own checks succeeded.
    ok: bool,
}

impl Output {
    fn ok(text: impl Into<String>) -> Self {
        Output { text: text.into(), ok: true }
    }
}

/// Everything a command needs besides its own arguments.
struct Ctx {
    cfg: Config,
    json: bool,
}

impl Ctx {
    /// Picks the text or the JSON rendering.
    fn emit(&self, text: impl Into<String>, value: Value) -> Output {
        if self.json {
            Output::ok(render_json(&value))
        } else {
            Output::ok(text)
        }
    }

    fn k(&self, k: Option<usize>) -> usize {
        k.unwrap_or(self.cfg.k)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text.trim_end());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::from(1)
        }
    }
}

fn config(g: &Global) -> Result<Config> {
    let mut cfg = match &g.config {
        Some(p) => Config::parse(&read(p)?)?,
        None => Config::default(),
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    for (key, value) in g.cap_overrides() {
        cfg.set(key, &value.to_string())?;
    }
    cfg.check()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<Output> {
    let ctx = Ctx { cfg: config(&cli.global)?, json: cli.global.json };
    match cli.command {
        Command::HomCount { pattern, host, mode } => hom_count(&ctx, &pattern, &host, mode),
        Command::Decomp(c) => decomp(&ctx, c),
        Command::Logic(c) => logic(&ctx, c),
        Command::Labeled(c) => labeled(c),
        Command::Quantum(c) => quantum(&ctx, c),
        Command::Bridge(c) => bridge(&ctx, c),
        Command::Fixtures(c) => fixtures(&ctx, c),
        Command::Config => {
            let map: serde_json::Map<String, Value> = ctx
                .cfg
                .render()
                .lines()
                .filter_map(|l| l.split_once('='))
                .map(|(k, v)| (k.to_string(), json!(v.parse::<u64>().unwrap_or_default())))
                .collect();
            Ok(ctx.emit(ctx.cfg.render(), Value::Object(map)))
        }
    }
}

// ---------------------------------------------------------------------------
// input

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value> {
    parse_json(&read(path)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Reads an incidence graph; hypergraph files (with `vertices`) are converted,
/// their vertices becoming red and their edges blue nodes.
fn load_graph(path: &Path) -> Result<(IncidenceGraph, Names)> {
    let v = read_json(path)?;
    if v.get("vertices").is_some() {
        let (h, names) = hypergraph_from_json(&v)?;
        Ok((to_incidence(&h), names))
    } else {
        incidence_from_json(&v)
    }
}

fn load_formula(path: &Path) -> Result<Formula> {
    parse_formula(read(path)?.trim())
}

/// Parses `i=j,i'=j'` into a guard function.
fn parse_guard(text: &str) -> Result<GuardFunction> {
    let mut g = GuardFunction::empty();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parsed = item.split_once('=').and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)));
        match parsed {
            Some((i, j)) if i >= 1 && j >= 1 => g.insert(i, j),
            _ => return Err(Error::InvalidStructure(format!("bad guard entry {item}; expected i=j with positive indices"))),
        }
    }
    Ok(g)
}

/// Reads `{"red":{i:id},"blue":{j:id}}` against the ids of a graph.
fn load_assignment(path: &Path, names: &Names) -> Result<(BTreeMap<usize, usize>, BTreeMap<usize, usize>)> {
    let v = read_json(path)?;
    let side = |key: &str, ids: &[String]| -> Result<BTreeMap<usize, usize>> {
        let mut out = BTreeMap::new();
        let Some(map) = v.get(key) else { return Ok(out) };
        let map = map.as_object().ok_or_else(|| Error::InvalidStructure(format!("{key} must be an object")))?;
        for (i, id) in map {
            let index: usize = i
                .parse()
                .ok()
                .filter(|&n: &usize| n >= 1)
                .ok_or_else(|| Error::InvalidStructure(format!("variable index {i} must be a positive integer")))?;
            let id = match id {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let node = ids.iter().position(|x| *x == id).ok_or_else(|| Error::UnknownId(format!("{key} node {id}")))?;
            out.insert(index, node);
        }
        Ok(out)
    };
    Ok((side("red", &names.red)?, side("blue", &names.blue)?))
}

fn decomp_mode(m: ModeArg) -> DecompMode {
    match m {
        ModeArg::Ghd => DecompMode::Ghd,
        ModeArg::Ehd => DecompMode::Ehd,
    }
}

// ---------------------------------------------------------------------------
// commands

fn hom_count(ctx: &Ctx, pattern: &Path, host: &Path, mode: HomMode) -> Result<Output> {
    let caps = &ctx.cfg.caps;
    let count = match mode {
        HomMode::Incidence => count_homs_with(&load_graph(pattern)?.0, &load_graph(host)?.0, caps)?,
        HomMode::Hypergraph => {
            let p = hypergraph_from_json(&read_json(pattern)?)?.0;
            let h = hypergraph_from_json(&read_json(host)?)?.0;
            count_homs_hypergraph_with(&p, &h, caps)?
        }
        HomMode::Labeled => {
            let p = labeled_from_json(&read_json(pattern)?)?;
            let h = labeled_from_json(&read_json(host)?)?;
            count_homs_labeled_with(&p, &h, caps)?
        }
    };
    Ok(ctx.emit(count.to_string(), json!({ "count": count.to_string() })))
}

fn decomp(ctx: &Ctx, c: DecompCmd) -> Result<Output> {
    let caps = &ctx.cfg.caps;
    match c {
        DecompCmd::Validate { graph, decomp, mode } => {
            let (i, names) = load_graph(&graph)?;
            let d = decomp_from_json(&read_json(&decomp)?, &names)?;
            let report = validate(&d, &i, decomp_mode(mode))?;
            let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
            let mut text = format!("{} (width {})", if report.valid { "valid" } else { "invalid" }, d.width());
            for v in &violations {
                text.push_str(&format!("\n  {v}"));
            }
            Ok(ctx.emit(text, json!({ "valid": report.valid, "width": d.width(), "violations": violations })))
        }
        DecompCmd::Search { graph, k, mode, engine } => {
            let (i, names) = load_graph(&graph)?;
            let k = ctx.k(k);
            let engine = match engine {
                EngineArg::Exact => Engine::Exact,
                EngineArg::Greedy => Engine::Greedy,
            };
            match search_width_with(&i, k, decomp_mode(mode), engine, caps)? {
                Some(d) => Ok(Output::ok(render_json(&decomp_to_json_named(&d, &names)))),
                None => Ok(ctx.emit(format!("no decomposition of width at most {k} found"), Value::Null)),
            }
        }
        DecompCmd::Normalize { graph, decomp } => {
            let (i, names) = load_graph(&graph)?;
            let d = decomp_from_json(&read_json(&decomp)?, &names)?;
            let (mut n, root) = normalize_binary_monotone(&d, &i)?;
            n.root = Some(root);
            Ok(Output::ok(render_json(&decomp_to_json_named(&n, &names))))
        }
        DecompCmd::Ghd2ehd { pattern, decomp, a, b } => {
            let (j, names) = load_graph(&pattern)?;
            let d = decomp_from_json(&read_json(&decomp)?, &names)?;
            let (i1, i2) = (load_graph(&a)?.0, load_graph(&b)?.0);
            let (j2, d2) = ghd_to_ehd(&j, &d, &i1, &i2, caps)?;
            Ok(Output::ok(render_json(&json!({ "graph": incidence_to_json(&j2), "decomp": decomp_to_json(&d2) }))))
        }
    }
}

fn logic(ctx: &Ctx, c: LogicCmd) -> Result<Output> {
    match c {
        LogicCmd::Eval { graph, formula, assign } => {
            let (g, names) = load_graph(&graph)?;
            let phi = load_formula(&formula)?;
            let (red, blue) = match assign {
                Some(p) => load_assignment(&p, &names)?,
                None => Default::default(),
            };
            let value = eval(&Interpretation::with_assignment(&g, red, blue)?, &phi)?;
            Ok(ctx.emit(value.to_string(), json!({ "value": value })))
        }
        LogicCmd::Nf { formula, k, guard } => {
            let phi = load_formula(&formula)?;
            let f = parse_guard(&guard)?;
            let nf = to_normal_form(&phi, &f, ctx.k(k))?;
            let text = render_formula(&Formula::and(guard_formula(&f), nf));
            Ok(ctx.emit(text.clone(), json!({ "formula": text })))
        }
        LogicCmd::Check { formula, mode, k } => {
            let phi = load_formula(&formula)?;
            let mode = match mode {
                SyntaxArg::Gck => SyntaxMode::Gck,
                SyntaxArg::Ngck => SyntaxMode::Ngck,
            };
            let verdict = check_syntax(&phi, ctx.k(k), mode);
            let violations: Vec<String> = verdict.violations.iter().map(ToString::to_string).collect();
            let mut text = String::from(if verdict.valid { "valid" } else { "invalid" });
            for v in &violations {
                text.push_str(&format!("\n  {v}"));
            }
            Ok(ctx.emit(text, json!({ "valid": verdict.valid, "violations": violations })))
        }
    }
}

fn labeled(c: LabeledCmd) -> Result<Output> {
    let value = match c {
        LabeledCmd::EvalCert { cert } => labeled_to_json(&eval_cert(&cert_from_json(&read_json(&cert)?)?)?),
        LabeledCmd::Cert2ehd { cert } => {
            let c = cert_from_json(&read_json(&cert)?)?;
            let l = eval_cert(&c)?;
            let (d, omega) = cert_to_ehd(&c)?;
            json!({ "graph": labeled_to_json(&l), "decomp": decomp_to_json(&d), "omega": omega })
        }
        LabeledCmd::Ehd2cert { graph, decomp } => {
            let (i, names) = load_graph(&graph)?;
            let d = decomp_from_json(&read_json(&decomp)?, &names)?;
            cert_to_json(&ehd_to_cert(&i, &d)?)
        }
    };
    Ok(Output::ok(render_json(&value)))
}

fn quantum(ctx: &Ctx, c: QuantumCmd) -> Result<Output> {
    let caps = &ctx.cfg.caps;
    match c {
        QuantumCmd::Hom { quantum, target } => {
            let q = quantum_from_json(&read_json(&quantum)?)?;
            let t = labeled_from_json(&read_json(&target)?)?;
            let v = qhom_with(&q, &t, caps)?;
            Ok(ctx.emit(v.to_string(), json!({ "value": v.to_string() })))
        }
        QuantumCmd::Indicator { quantum, x, y } => {
            let q = quantum_from_json(&read_json(&quantum)?)?;
            let (xs, ys): (BTreeSet<u64>, BTreeSet<u64>) = (x.into_iter().collect(), y.into_iter().collect());
            Ok(Output::ok(render_json(&quantum_to_json(&normalize_indicator_with(&q, &xs, &ys, caps)?))))
        }
    }
}

fn bridge(ctx: &Ctx, c: BridgeCmd) -> Result<Output> {
    let caps = &ctx.cfg.caps;
    match c {
        BridgeCmd::FormulaFromCert { cert, m } => {
            let phi = formula_from_cert(&cert_from_json(&read_json(&cert)?)?, m)?;
            let text = render_formula(&phi);
            Ok(ctx.emit(text.clone(), json!({ "formula": text })))
        }
        BridgeCmd::QuantumFromFormula { formula, k, m, d } => {
            let chi = load_formula(&formula)?;
            let q = quantum_from_formula_with(&chi, ctx.k(k), SizeParams { m, d }, caps)?;
            Ok(Output::ok(render_json(&quantum_to_json(&q))))
        }
        BridgeCmd::Distinguish { a, b, k, max_blue, max_red } => {
            let (ga, gb) = (load_graph(&a)?.0, load_graph(&b)?.0);
            let k = ctx.k(k);
            let found = distinguish_by_ehw(&ga, &gb, k, SearchBounds { max_blue, max_red }, caps)?;
            let Some(w) = found else {
                return Ok(ctx.emit(
                    format!("no pattern of width at most {k} within the bounds distinguishes the graphs"),
                    json!({ "seed": ctx.cfg.seed, "witness": Value::Null }),
                ));
            };
            let text = format!(
                "pattern with {} blue and {} red nodes: {} vs {}\n{}",
                w.pattern.n_blue(),
                w.pattern.n_red(),
                w.hom_a,
                w.hom_b,
                render_json(&incidence_to_json(&w.pattern))
            );
            Ok(ctx.emit(text, json!({ "seed": ctx.cfg.seed, "witness": witness_json(&w) })))
        }
        BridgeCmd::Crosscheck { a, b, k, max_blue, max_red, sentence } => {
            let (ga, gb) = (load_graph(&a)?.0, load_graph(&b)?.0);
            let phi = sentence.as_deref().map(load_formula).transpose()?;
            let k = ctx.k(k);
            let report = crosscheck_main_theorem(&ga, &gb, k, SearchBounds { max_blue, max_red }, phi.as_ref(), caps)?;
            let mut out = ctx.emit(report_text(&report), report_json(&report, k, ctx.cfg.seed));
            out.ok = report.all_passed();
            if !out.ok {
                eprintln!("error[{}]: some cross-check assertions failed", Error::Assertion(String::new()).name());
            }
            Ok(out)
        }
    }
}

fn witness_json(w: &gck_core::bridge::Distinguisher) -> Value {
    json!({
        "pattern": incidence_to_json(&w.pattern),
        "decomp": decomp_to_json(&w.decomp),
        "hom_a": w.hom_a.to_string(),
        "hom_b": w.hom_b.to_string(),
    })
}

fn report_json(r: &CrosscheckReport, k: usize, seed: u64) -> Value {
    json!({
        "seed": seed,
        "k": k,
        "direction": r.direction.name(),
        "witness": r.witness.as_ref().map(witness_json),
        "pattern_sentence": r.pattern_sentence.as_ref().map(render_formula),
        "sentence": r.sentence.as_ref().map(render_formula),
        "component": r.component.as_ref().map(labeled_to_json),
        "assertions": r.assertions.iter().map(|a| json!({ "name": a.name, "passed": a.passed, "detail": a.detail })).collect::<Vec<_>>(),
        "all_passed": r.all_passed(),
    })
}

fn report_text(r: &CrosscheckReport) -> String {
    let mut text = format!("direction: {}", r.direction.name());
    for a in &r.assertions {
        text.push_str(&format!("\n{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail));
    }
    text
}

fn fixtures(ctx: &Ctx, c: FixturesCmd) -> Result<Output> {
    match c {
        FixturesCmd::List => {
            let text = CATALOG.iter().map(|(name, about, _)| format!("{name:<38} {about}")).collect::<Vec<_>>().join("\n");
            let value = CATALOG.iter().map(|(name, about, _)| json!({ "name": name, "description": about })).collect();
            Ok(ctx.emit(text, Value::Array(value)))
        }
        FixturesCmd::Show { name } => {
            let (_, _, body) =
                CATALOG.iter().find(|(n, _, _)| *n == name).ok_or_else(|| Error::UnknownId(format!("fixture {name}")))?;
            Ok(Output::ok(*body))
        }
        FixturesCmd::Export { dir } => {
            fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            for (name, _, body) in CATALOG {
                let path = dir.join(name);
                fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            Ok(ctx.emit(
                format!("wrote {} fixtures to {}", CATALOG.len(), dir.display()),
                json!({ "written": CATALOG.len(), "dir": dir.display().to_string() }),
            ))
        }
    }
}
