//! The CLI verbs, each returning its printable output and an exit kind.

use std::collections::BTreeSet;
use std::path::Path;

use krwlab::boolcore::{Depth, LinearCode, TruthTable};
use krwlab::detcc::{formula_complexity_rect, formula_oracle, optimal_protocol, MAX_SIZE_CAP};
use krwlab::halfduplex::{optimal_sub_protocols, reduction_transform};
use krwlab::ndcc::{
    graph_eq, graph_invariants, min_rect_cover, verify_graph_eq_ncc, verify_graph_ineq_bounds, SimpleGraph,
};
use krwlab::prefixthick::{verify_winning_size, winning_set, AlphabetProfile, StringSet};
use krwlab::relations::{kw, RelationDescriptor};
use krwlab::report::{Check, Report, Status};
use krwlab::structlab::{barrier_construct, check_alive, derive_context, BarrierSpec, LiveParams};
use krwlab::suites::{barrier_spec, run_suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{Measure, ResultCache};
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

/// How a command finished; maps onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Ok,
    /// Some check was skipped because a budget ran out, none failed.
    Skipped,
    Failed,
}

impl Outcome {
    pub fn of(report: &Report) -> Outcome {
        if report.has_failures() {
            Outcome::Failed
        } else if report.has_skips() {
            Outcome::Skipped
        } else {
            Outcome::Ok
        }
    }
}

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SKIPPED: u8 = 3;

pub fn exit_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Ok => 0,
        Outcome::Failed => EXIT_FAILED,
        Outcome::Skipped => EXIT_SKIPPED,
    }
}

pub struct Output {
    pub text: String,
    pub outcome: Outcome,
}

fn config_err(e: krwlab::Error) -> CliError {
    CliError::config(e.to_string())
}

/// Parses a truth table, taking the arity from the hex length when not given.
/// A single digit is read as a two-bit function.
pub fn parse_function(hex: &str, arity: Option<usize>) -> Result<TruthTable> {
    let digits = hex.trim().trim_start_matches("0x");
    let arity = match arity {
        Some(a) => a,
        None => {
            let len = digits.len().max(1);
            if !len.is_power_of_two() {
                return Err(CliError::config(format!("truth table {hex:?} has {len} hex digits, not a power of two")));
            }
            len.trailing_zeros() as usize + 2
        }
    };
    TruthTable::from_hex(arity, digits).map_err(config_err)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn fmt_depth(d: Depth) -> String {
    d.finite().map_or("-inf".into(), |d| d.to_string())
}

pub fn suite(name: &str, cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Output> {
    let report = run_suite(name, &cfg.suite_config()).map_err(config_err)?;
    if let Some(path) = out.or(cfg.output.as_deref()) {
        write_file(path, &report.to_json())?;
    }
    let text = match cfg.format {
        crate::config::Format::Table => report.summary_table(),
        crate::config::Format::Json => report.to_json() + "\n",
    };
    Ok(Output { text, outcome: Outcome::of(&report) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CcRow {
    pub f: String,
    pub arity: usize,
    pub game_size: u64,
    pub game_depth: Depth,
    pub oracle_size: Option<u64>,
    pub oracle_depth: Depth,
    pub agree: bool,
}

/// `(L, D)` from the rectangle game, through the cache when `f` is not
/// constant.
fn game_values(f: &TruthTable, cfg: &ExperimentConfig, cache: &mut ResultCache) -> Result<(u64, Depth)> {
    if f.is_constant() {
        let side =
            |v| f.preimage(v).into_iter().map(|x| krwlab::boolcore::BitString::new(f.arity(), x)).collect::<Vec<_>>();
        return Ok(formula_complexity_rect(&side(true), &side(false), cfg.search_budget())?);
    }
    let desc = RelationDescriptor::Kw { f: f.to_hex(), m: f.arity() };
    let budget = cfg.search_budget();
    let size = cache.get_or_compute(&desc, Measure::ProtocolSize, budget)?;
    let depth = cache.get_or_compute(&desc, Measure::Cc, budget)?;
    let size = size.as_u64().ok_or_else(|| CliError::config(format!("cached size {size} is not an integer")))?;
    let depth = match depth.as_u64() {
        Some(d) => Depth::Finite(d as u32),
        None => Depth::NegInf,
    };
    Ok((size, depth))
}

pub fn cc_rows(n: usize, cfg: &ExperimentConfig, cache: &mut ResultCache) -> Result<Vec<CcRow>> {
    if n > 3 {
        return Err(CliError::config(format!("cc-table needs n ≤ 3, got {n}")));
    }
    let funcs = if n < 3 {
        TruthTable::all(n)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut picked = BTreeSet::new();
        while picked.len() < cfg.sweeps.three_bit_functions.min(256) {
            picked.insert(rng.gen_range(0..256u64));
        }
        picked.into_iter().map(|i| TruthTable::from_index(3, i)).collect()
    };
    let mut rows = Vec::new();
    for f in funcs {
        let (game_size, game_depth) = game_values(&f, cfg, cache)?;
        let o = formula_oracle(&f, MAX_SIZE_CAP)?;
        rows.push(CcRow {
            f: f.to_hex(),
            arity: n,
            game_size,
            game_depth,
            oracle_size: o.size,
            oracle_depth: o.depth,
            agree: o.size == Some(game_size) && o.depth == game_depth,
        });
    }
    Ok(rows)
}

pub fn cc_table(n: usize, cfg: &ExperimentConfig, cache: &mut ResultCache) -> Result<Output> {
    let rows = cc_rows(n, cfg, cache)?;
    let mut text = format!("{:>6}  {:>6}  {:>6}  {:>8}  {:>8}  agree\n", "f", "L", "D", "L oracle", "D oracle");
    for r in &rows {
        let os = r.oracle_size.map_or("-".into(), |s| s.to_string());
        text.push_str(&format!(
            "{:>6}  {:>6}  {:>6}  {:>8}  {:>8}  {}\n",
            r.f,
            r.game_size,
            fmt_depth(r.game_depth),
            os,
            fmt_depth(r.oracle_depth),
            if r.agree { "yes" } else { "NO" }
        ));
    }
    let bad = rows.iter().filter(|r| !r.agree).count();
    text.push_str(&format!("{} functions, {bad} disagreements\n", rows.len()));
    Ok(Output { text, outcome: if bad == 0 { Outcome::Ok } else { Outcome::Failed } })
}

pub fn kw_command(
    hex: &str,
    arity: Option<usize>,
    protocol: bool,
    cfg: &ExperimentConfig,
    cache: &mut ResultCache,
) -> Result<Output> {
    let f = parse_function(hex, arity)?;
    let (l, d) = game_values(&f, cfg, cache)?;
    let mut text = format!("f = {} on {} bits\nL(f) = {l}\nD(f) = {}\n", f.to_hex(), f.arity(), fmt_depth(d));
    let mut outcome = Outcome::Ok;
    if f.arity() <= krwlab::detcc::MAX_ORACLE_ARITY {
        let o = formula_oracle(&f, MAX_SIZE_CAP)?;
        let agree = o.size == Some(l) && o.depth == d;
        text.push_str(&format!(
            "formula oracle: L = {}, D = {} ({})\n",
            o.size.map_or("> cap".into(), |s| s.to_string()),
            fmt_depth(o.depth),
            if agree { "agrees" } else { "DISAGREES" }
        ));
        if !agree {
            outcome = Outcome::Failed;
        }
    }
    if protocol && !f.is_constant() {
        let tree = optimal_protocol(&kw(&f)?, cfg.search_budget())?;
        text.push_str(&tree.to_json());
        text.push('\n');
    }
    Ok(Output { text, outcome })
}

/// Reads strings over `{0, …, q-1}`, one per line; the length comes from the
/// first line.
pub fn read_string_set(text: &str, q: usize) -> Result<StringSet> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| CliError::config("input has no strings"))?;
    let m = if first.contains(|c: char| c.is_whitespace() || c == ',') {
        first.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).count()
    } else {
        first.chars().count()
    };
    StringSet::parse(AlphabetProfile::uniform(m, q), text).map_err(config_err)
}

pub fn winning_set_command(input: &Path, q: usize) -> Result<Output> {
    let text = std::fs::read_to_string(input).map_err(|e| CliError::io(input, e))?;
    let x = read_string_set(&text, q)?;
    let w = winning_set(&x)?;
    let check = verify_winning_size(&x)?;
    let mut out = format!("|X| = {}, |W(X)| = {}\n", x.len(), w.len());
    for s in &w {
        out.push_str(&s.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out.push_str(&format!("{} {}: {}\n", check.id, check.status, check.detail));
    Ok(Output { text: out, outcome: if check.passed() { Outcome::Ok } else { Outcome::Failed } })
}

/// graph6 when the file is a single token, adjacency lines otherwise.
pub fn read_graph(text: &str) -> Result<SimpleGraph> {
    let body: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let g = if body.len() == 1 && !body[0].contains(':') && !body[0].starts_with('n') {
        SimpleGraph::from_graph6(body[0])
    } else {
        SimpleGraph::parse_adjacency_list(text)
    };
    g.map_err(config_err)
}

pub fn graph_eq_command(path: &Path) -> Result<Output> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let g = read_graph(&text)?;
    let mut report = Report::new("graph-eq");
    let (chi, cl, alpha) = graph_invariants(&g)?;
    let cover = min_rect_cover(&graph_eq(&g))?;
    report.push(Check::new(
        "graph-invariants",
        Status::Vacuous,
        format!("χ = {chi}, clique = {cl}, independence = {alpha}"),
    ));
    report.push(Check::new(
        "graph-eq-cover-count",
        Status::Vacuous,
        format!("{} rectangles, log = {:.4}", cover.count, cover.log2),
    ));
    report.push(verify_graph_eq_ncc(&g).unwrap_or_else(|e| Check::from_error("graph-eq-ncc", &e)));
    report.push(verify_graph_ineq_bounds(&g).unwrap_or_else(|e| Check::from_error("graph-ineq-bounds", &e)));
    report.sort();
    Ok(Output { text: format!("graph {}\n{}", g.to_graph6(), report.summary_table()), outcome: Outcome::of(&report) })
}

/// `rep` for the repetition code, otherwise comma-separated hex basis vectors.
pub fn parse_code(m: usize, code: &str) -> Result<LinearCode> {
    if code.trim() == "rep" {
        return Ok(LinearCode::repetition(m));
    }
    let basis: Vec<&str> = code.split(',').filter(|s| !s.trim().is_empty()).collect();
    LinearCode::from_hex(m, &basis).map_err(config_err)
}

pub struct BarrierArgs<'a> {
    pub m: usize,
    pub code: &'a str,
    pub w_x: usize,
    pub w_y: usize,
    pub n: usize,
    pub f: Option<&'a str>,
    pub gamma: f64,
    pub kappa: u32,
}

pub fn barrier_command(args: &BarrierArgs<'_>, cfg: &ExperimentConfig) -> Result<Output> {
    let f = match args.f {
        Some(hex) => parse_function(hex, Some(args.m))?,
        None if args.m == 4 => barrier_spec().f,
        None => return Err(CliError::config("--f is required unless m = 4")),
    };
    let spec = BarrierSpec { f, code: parse_code(args.m, args.code)?, w_x: args.w_x, w_y: args.w_y, n: args.n };
    let base = LiveParams::barrier();
    let params = LiveParams::new(args.gamma, args.kappa, base.eps, base.beta).map_err(config_err)?;
    let b = barrier_construct(&spec, &params, cfg.search_budget()).map_err(|e| match e {
        krwlab::Error::Budget(_) => CliError::Core(e),
        other => config_err(other),
    })?;
    let mut report = Report::new("barrier");
    for c in &b.checks {
        report.push(c.clone());
    }
    report.sort();
    let bits: String = b.transcript.iter().map(|&x| if x { '1' } else { '0' }).collect();
    let mut text = format!(
        "transcript {bits}\ncoset {:x}, L(f) = {}\ncharacteristic graph {} on {} vertices\n{}",
        b.coset,
        b.l_f,
        b.graph.graph.to_graph6(),
        b.graph.vertices.len(),
        report.summary_table()
    );
    // Aliveness is reported, not asserted, at this scale.
    text.push_str(&format!(
        "aliveness with γ = {}, κ = {} (reported only): {}\n",
        params.gamma, params.kappa, b.alive.status
    ));
    for c in &b.alive.checks {
        let margin = c.margin.map(|m| format!(" [margin {m:.4}]")).unwrap_or_default();
        text.push_str(&format!("  {} {}: {}{margin}\n", c.id, c.status, c.detail));
    }
    Ok(Output { text, outcome: Outcome::of(&report) })
}

/// Reduction-based aliveness evaluation for one mux-compose descriptor.
fn alive_grid(desc: &RelationDescriptor, cfg: &ExperimentConfig) -> Result<Value> {
    let RelationDescriptor::MuxCompose { f, m, n, strong } = desc.canonical()? else {
        return Ok(Value::Null);
    };
    let f = TruthTable::from_hex(m, &f)?;
    let budget = cfg.search_budget();
    let points = cfg.params.points()?;
    let run = || -> krwlab::Result<Vec<Value>> {
        let subs = optimal_sub_protocols(&f, n, strong, budget)?;
        let r = reduction_transform(&f, n, &subs, strong)?;
        let ctx = derive_context(&r.protocol, &r.relation, &[])?;
        let v = TruthTable::balanced(n);
        let mut out = Vec::new();
        for p in &points {
            let a = check_alive(&ctx, &v, p, budget)?;
            out.push(json!({ "params": p, "status": a.status, "checks": a.checks }));
        }
        Ok(out)
    };
    Ok(match run() {
        Ok(points) => Value::from(points),
        Err(e) => json!({ "status": Check::from_error("alive-grid", &e).status, "error": e.to_string() }),
    })
}

/// Suites, relation measures and the aliveness grid as one JSON document.
pub fn report_command(cfg: &ExperimentConfig, cache: &mut ResultCache, out: &Path) -> Result<Output> {
    let mut combined = Report::new("report");
    let mut suites = Vec::new();
    for name in &cfg.suites {
        let r = run_suite(name, &cfg.suite_config()).map_err(config_err)?;
        combined.extend(r.clone());
        suites.push(r);
    }
    let mut relations = Vec::new();
    for desc in &cfg.relations {
        let mut entry = json!({ "descriptor": desc.canonical()?, "hash": desc.content_hash() });
        for m in Measure::ALL {
            let key = serde_json::to_value(m).expect("serializes");
            let key = key.as_str().expect("string");
            match cache.get_or_compute(desc, m, cfg.search_budget()) {
                Ok(v) => entry[key] = v,
                Err(CliError::Core(e)) => {
                    combined.push(Check::from_error(format!("relation-{key}"), &e));
                    entry[key] = json!({ "error": e.to_string() });
                }
                Err(e) => return Err(e),
            }
        }
        let grid = alive_grid(desc, cfg)?;
        if !grid.is_null() {
            entry["alive"] = grid;
        }
        relations.push(entry);
    }
    let doc = json!({ "seed": cfg.seed, "suites": suites, "relations": relations });
    write_file(out, &(serde_json::to_string_pretty(&doc).expect("serializes") + "\n"))?;
    combined.sort();
    let outcome = Outcome::of(&combined);
    let text = format!(
        "wrote {}: {} checks, {} fail, {} skipped, {} relations\n",
        out.display(),
        combined.checks.len(),
        combined.count(Status::Fail),
        combined.count(Status::Skipped),
        relations.len()
    );
    Ok(Output { text, outcome })
}

pub fn cache_verify(cfg: &ExperimentConfig, cache: &ResultCache) -> Result<Output> {
    let v = cache.verify(cfg.seed, cfg.search_budget())?;
    let mut text = format!(
        "{} records ({} stale, {} dropped), {} recomputed, {} mismatches\n",
        cache.len(),
        cache.stale(),
        cache.dropped.len(),
        v.checked,
        v.mismatches.len()
    );
    for m in &v.mismatches {
        text.push_str(m);
        text.push('\n');
    }
    Ok(Output { text, outcome: if v.mismatches.is_empty() { Outcome::Ok } else { Outcome::Failed } })
}
