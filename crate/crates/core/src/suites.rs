//! Named verification suites. Each returns a [`Report`] whose checks are
//! sorted by id; randomized sweeps are driven by the configured seed.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::mask_iter;
use crate::boolcore::{build_parity_formula, BitString, Depth, LinearCode, TruthTable};
use crate::detcc::{
    exact_cc, formula_complexity_rect, formula_oracle, obvious_protocol, optimal_protocol, validate_protocol,
    SearchBudget, MAX_SIZE_CAP,
};
use crate::halfduplex::{
    check_solves, is_partially_hd, optimal_sub_protocols, reduction_transform, validate_hd, Reduction,
};
use crate::ndcc::{verify_graph_eq_ncc, verify_graph_ineq_bounds, SimpleGraph};
use crate::prefixthick::{
    intersect_witness, is_prefix_thick, project_family_bound, thick_projections, verify_winning_size, AlphabetProfile,
    StringSet,
};
use crate::relations::{compose_standard, compose_strong, kw};
use crate::report::{Check, Report, Status};
use crate::structlab::{
    barrier_construct, build_gprime, candidate_transcript, check_alive, check_pair_events, derive_context, hardwire,
    popular_transcript, verify_chromatic_bound, BarrierSpec, LiveParams,
};
use crate::{Error, Result};

/// Knobs shared by all suites.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub budget: SearchBudget,
    /// Random string sets for the winning-set sweep.
    pub random_sets: usize,
    /// Random three-bit functions for the KW connection.
    pub three_bit_functions: usize,
    /// Random graphs on 6 to 10 vertices.
    pub random_graphs: usize,
    /// Random `n = 3` tuples for the pair events.
    pub event_samples: usize,
    /// Random sets per `(q, m)` where the projection sweep cannot enumerate.
    pub projection_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0x6b72_776c,
            budget: SearchBudget::default(),
            random_sets: 1000,
            three_bit_functions: 20,
            random_graphs: 50,
            event_samples: 10_000,
            projection_samples: 200,
        }
    }
}

type SuiteFn = fn(&SuiteConfig) -> Report;

/// Every suite by name, in a fixed order.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("winning-set", winning_set_suite),
    ("thick-intersection", thick_intersection_suite),
    ("projection-bound", projection_bound_suite),
    ("kw-connection", kw_connection_suite),
    ("composition", composition_suite),
    ("graph-eq", graph_eq_suite),
    ("parity", parity_suite),
    ("reduction", reduction_suite),
    ("candidate", candidate_suite),
    ("pair-events", pair_events_suite),
    ("barrier", barrier_suite),
    ("vacuity", vacuity_suite),
    ("chromatic", chromatic_suite),
];

/// Groups of suites runnable under one name.
pub const GROUPS: &[(&str, &[&str])] = &[
    ("prefixthick", &["winning-set", "thick-intersection", "projection-bound"]),
    ("detcc", &["kw-connection", "composition", "parity"]),
    ("ndcc", &["graph-eq"]),
    ("halfduplex", &["reduction"]),
    ("structlab", &["candidate", "pair-events", "barrier", "vacuity", "chromatic"]),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).chain(GROUPS.iter().map(|g| g.0)).chain(["all"]).collect()
}

/// Runs a suite, a group or `all`; the report is named after `name`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report> {
    let members: Vec<&str> = if name == "all" {
        SUITES.iter().map(|s| s.0).collect()
    } else if let Some((_, g)) = GROUPS.iter().find(|g| g.0 == name) {
        g.to_vec()
    } else if SUITES.iter().any(|s| s.0 == name) {
        vec![name]
    } else {
        return Err(Error::invalid(format!("unknown suite {name:?}; known: {}", suite_names().join(", "))));
    };
    let mut report = Report::new(name);
    for m in members {
        let run = SUITES.iter().find(|s| s.0 == m).expect("registered").1;
        report.extend(run(cfg));
    }
    report.sort();
    Ok(report)
}

fn rng(cfg: &SuiteConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn finish(name: &str, checks: Vec<Check>) -> Report {
    let mut r = Report::new(name);
    for c in checks {
        r.push(c);
    }
    r.sort();
    r
}

// Folds a fallible check into a report entry.
fn attempt(id: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::from_error(id, &e))
}

fn tally(id: &str, total: usize, bad: &[String], note: &str) -> Check {
    let mut detail = format!("{} of {total} cases fail{note}", bad.len());
    if let Some(first) = bad.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Check::from_bool(id, bad.is_empty() && total > 0, detail)
}

fn random_subset(universe: &StringSet, density: f64, rng: &mut ChaCha8Rng) -> StringSet {
    let strings = universe.strings().iter().filter(|_| rng.gen_bool(density)).cloned().collect();
    StringSet::new(universe.profile().clone(), strings).expect("subset")
}

pub fn winning_set_suite(cfg: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    checks.push(attempt("winning-set-exhaustive", || {
        let universe = StringSet::full(AlphabetProfile::uniform(2, 3));
        let bad: Vec<String> = (0u64..512)
            .into_par_iter()
            .filter_map(|mask| {
                let x = StringSet::from_mask(&universe, mask);
                match verify_winning_size(&x) {
                    Ok(c) if c.passed() => None,
                    Ok(c) => Some(format!("mask {mask}: {}", c.detail)),
                    Err(e) => Some(format!("mask {mask}: {e}")),
                }
            })
            .collect();
        Ok(tally("winning-set-exhaustive", 512, &bad, " (all subsets of [3]^2, subset search on each)"))
    }));
    checks.push(attempt("winning-set-random", || {
        let mut r = rng(cfg, 1);
        let mut bad = Vec::new();
        let mut brute = 0;
        for k in 0..cfg.random_sets {
            let (q, m) = (r.gen_range(2..=5), r.gen_range(1..=5));
            let universe = StringSet::full(AlphabetProfile::uniform(m, q));
            // Alternate sparse sets (subset-search range) with dense ones.
            let density = if k % 2 == 0 { (10.0 / universe.len() as f64).min(0.9) } else { r.gen_range(0.05..0.95) };
            let x = random_subset(&universe, density, &mut r);
            brute += usize::from(x.len() <= 14);
            let c = verify_winning_size(&x)?;
            if !c.passed() {
                bad.push(format!("q={q} m={m} |X|={}: {}", x.len(), c.detail));
            }
        }
        Ok(tally("winning-set-random", cfg.random_sets, &bad, &format!(", {brute} cross-checked by subset search")))
    }));
    finish("winning-set", checks)
}

pub fn thick_intersection_suite(_cfg: &SuiteConfig) -> Report {
    // Every thick set contains its largest thick subset, and the witness
    // descent only reads those subsets, so checking every pair of distinct
    // largest thick subsets covers every pair of thick sets.
    let check = attempt("thick-intersection", || {
        let universe = StringSet::full(AlphabetProfile::uniform(2, 4));
        let mut thick = 0usize;
        let mut parts: BTreeSet<Vec<Vec<u8>>> = BTreeSet::new();
        for mask in 0u64..1 << 16 {
            let x = StringSet::from_mask(&universe, mask);
            if let (true, Some(w)) = is_prefix_thick(&x, 2.0) {
                thick += 1;
                parts.insert(w.strings().to_vec());
            }
        }
        let parts: Vec<StringSet> =
            parts.into_iter().map(|s| StringSet::new(universe.profile().clone(), s).expect("subset")).collect();
        let bad: Vec<String> = (0..parts.len())
            .into_par_iter()
            .flat_map_iter(|i| (i..parts.len()).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let (x, y) = (&parts[i], &parts[j]);
                match intersect_witness(x, y) {
                    Ok(Some(w)) if x.contains(&w) && y.contains(&w) => None,
                    other => Some(format!("parts {i},{j}: {other:?}")),
                }
            })
            .collect();
        let pairs = parts.len() * (parts.len() + 1) / 2;
        Ok(tally(
            "thick-intersection",
            pairs,
            &bad,
            &format!(" ({thick} thick subsets of [4]^2, {} distinct thick parts)", parts.len()),
        ))
    });
    finish("thick-intersection", vec![check])
}

// Shattered coordinate sets, straight from the definition.
fn shattered(x: &StringSet) -> usize {
    (0u32..1 << x.m())
        .filter(|&mask| {
            let proj: BTreeSet<Vec<u8>> =
                x.strings().iter().map(|s| mask_iter(mask as u64).map(|i| s[i]).collect()).collect();
            proj.len() == 1 << mask.count_ones()
        })
        .count()
}

pub fn projection_bound_suite(cfg: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    let eps_grid = [0.0, 0.1, 0.25];
    checks.push(attempt("projection-bound", || {
        let mut r = rng(cfg, 3);
        let mut cases: Vec<StringSet> = Vec::new();
        let mut exhaustive = Vec::new();
        for q in [2usize, 4] {
            for m in 1..=4usize {
                let universe = StringSet::full(AlphabetProfile::uniform(m, q));
                if universe.len() <= 16 {
                    exhaustive.push(format!("q={q},m={m}"));
                    cases.extend((0u64..1 << universe.len()).map(|mask| StringSet::from_mask(&universe, mask)));
                } else {
                    for _ in 0..cfg.projection_samples {
                        let d = r.gen_range(0.05..1.0);
                        cases.push(random_subset(&universe, d, &mut r));
                    }
                }
            }
        }
        let bad: Vec<String> = cases
            .par_iter()
            .flat_map_iter(|x| eps_grid.iter().map(move |&e| (x, e)))
            .filter_map(|(x, eps)| match project_family_bound(x, eps) {
                Ok(b) if b.holds && b.image_holds && b.image_is_subfamily && b.downward_closed => None,
                Ok(b) => Some(format!("q={} m={} |X|={} eps={eps}: {b:?}", x.q(), x.m(), x.len())),
                Err(e) => Some(e.to_string()),
            })
            .collect();
        Ok(tally(
            "projection-bound",
            cases.len() * eps_grid.len(),
            &bad,
            &format!(" (exhaustive for {}; sampled otherwise)", exhaustive.join(" ")),
        ))
    }));
    checks.push(attempt("projection-pajor", || {
        let mut total = 0;
        let mut bad = Vec::new();
        for m in 1..=4usize {
            let universe = StringSet::full(AlphabetProfile::uniform(m, 2));
            for mask in 0u64..1 << universe.len() {
                let x = StringSet::from_mask(&universe, mask);
                let fam = thick_projections(&x, 0.0)?;
                let sh = shattered(&x);
                total += 1;
                if fam.len() != sh || fam.len() < x.len() {
                    bad.push(format!("m={m} mask {mask}: |F|={} shattered={sh} |X|={}", fam.len(), x.len()));
                }
            }
        }
        Ok(tally("projection-pajor", total, &bad, " (|F| = shattered sets ≥ |X| for all X ⊆ {0,1}^m, m ≤ 4)"))
    }));
    finish("projection-bound", checks)
}

fn game_values(f: &TruthTable, budget: SearchBudget) -> Result<(u64, Depth)> {
    let m = f.arity();
    let side = |v| f.preimage(v).into_iter().map(|x| BitString::new(m, x)).collect::<Vec<_>>();
    formula_complexity_rect(&side(true), &side(false), budget)
}

pub fn kw_connection_suite(cfg: &SuiteConfig) -> Report {
    let check = attempt("kw-connection", || {
        let mut r = rng(cfg, 4);
        let mut funcs = TruthTable::all(2);
        let mut three: BTreeSet<u64> = BTreeSet::new();
        while three.len() < cfg.three_bit_functions {
            three.insert(r.gen_range(0..256));
        }
        funcs.extend(three.into_iter().map(|i| TruthTable::from_index(3, i)));
        let mut bad = Vec::new();
        for f in &funcs {
            let (l, d) = game_values(f, cfg.budget)?;
            let o = formula_oracle(f, MAX_SIZE_CAP)?;
            if o.size != Some(l) || o.depth != d {
                bad.push(format!("{f}/{}: game ({l}, {d:?}) vs oracle ({:?}, {:?})", f.arity(), o.size, o.depth));
            }
        }
        Ok(tally("kw-connection", funcs.len(), &bad, " (16 two-bit functions plus seeded three-bit ones)"))
    });
    finish("kw-connection", vec![check])
}

pub fn composition_suite(cfg: &SuiteConfig) -> Report {
    let check = attempt("composition-upper-bound", || {
        let funcs: Vec<TruthTable> = TruthTable::all(2).into_iter().filter(|g| !g.is_constant()).collect();
        let mut protos = BTreeMap::new();
        let mut depth = BTreeMap::new();
        for f in &funcs {
            let p = optimal_protocol(&kw(f)?, cfg.budget)?;
            depth.insert(f.clone(), p.depth());
            protos.insert(f.clone(), p);
        }
        let mut bad = Vec::new();
        let mut total = 0;
        for f in &funcs {
            for g in &funcs {
                total += 1;
                let bound = depth[f] + depth[g];
                let (std, strong) = (compose_standard(f, g)?, compose_strong(f, g)?);
                let c_std = exact_cc(&std, cfg.budget)?;
                let c_strong = exact_cc(&strong, cfg.budget)?;
                let p = obvious_protocol(f, g, &protos[f], &protos[g])?;
                let ok = c_std.finite().is_some_and(|c| c <= bound)
                    && c_strong.finite().is_some_and(|c| c <= bound)
                    && p.depth() <= bound
                    && validate_protocol(&p, &std).is_valid()
                    && validate_protocol(&p, &strong).is_valid();
                if !ok {
                    bad.push(format!(
                        "f={f} g={g}: cc {c_std:?}/{c_strong:?}, protocol depth {}, bound {bound}",
                        p.depth()
                    ));
                }
            }
        }
        Ok(tally("composition-upper-bound", total, &bad, " (all non-constant two-bit pairs, both compositions)"))
    });
    finish("composition", vec![check])
}

pub fn graph_eq_suite(cfg: &SuiteConfig) -> Report {
    let mut graphs = Vec::new();
    for n in 1..=5usize {
        let pairs = n * (n - 1) / 2;
        graphs.extend((0u64..1 << pairs).map(|code| SimpleGraph::from_edge_code(n, code)));
    }
    let exhaustive = graphs.len();
    let mut r = rng(cfg, 6);
    for _ in 0..cfg.random_graphs {
        let n = r.gen_range(6..=10);
        let p = r.gen_range(0.2..0.8);
        graphs.push(SimpleGraph::random(n, p, &mut r));
    }
    let results: Vec<(Result<Check>, Result<Check>)> =
        graphs.par_iter().map(|g| (verify_graph_eq_ncc(g), verify_graph_ineq_bounds(g))).collect();
    let mut eq_bad = Vec::new();
    let mut ineq_bad = Vec::new();
    let mut informative = 0;
    for (g, (eq, ineq)) in graphs.iter().zip(results) {
        match eq {
            Ok(c) if c.passed() => {}
            Ok(c) => eq_bad.push(format!("{}: {}", g.to_graph6(), c.detail)),
            Err(e) => eq_bad.push(format!("{}: {e}", g.to_graph6())),
        }
        match ineq {
            Ok(c) if c.status == Status::Vacuous => {}
            Ok(c) if c.passed() => informative += 1,
            Ok(c) => ineq_bad.push(format!("{}: {}", g.to_graph6(), c.detail)),
            Err(e) => ineq_bad.push(format!("{}: {e}", g.to_graph6())),
        }
    }
    let note = format!(" ({exhaustive} graphs on ≤ 5 vertices, {} random on 6-10)", cfg.random_graphs);
    let checks = vec![
        tally("graph-eq-cover", graphs.len(), &eq_bad, &note),
        tally("graph-ineq-bracket", graphs.len(), &ineq_bad, &format!("{note}, {informative} with χ ≥ 2")),
    ];
    finish("graph-eq", checks)
}

pub fn parity_suite(_cfg: &SuiteConfig) -> Report {
    let mut bad = Vec::new();
    for n in 1..=10usize {
        let phi = build_parity_formula(n);
        let correct = (0u32..1 << n).all(|x| phi.eval(n, x) == (x.count_ones() % 2 == 1));
        if !correct || phi.size() > 4 * n * n {
            bad.push(format!("n={n}: size {}, correct {correct}", phi.size()));
        }
    }
    finish("parity", vec![tally("parity-formula", 10, &bad, " (n = 1..10, size ≤ 4n²)")])
}

fn micro_reduction(f: &TruthTable, budget: SearchBudget) -> Result<Reduction> {
    let subs = optimal_sub_protocols(f, 2, true, budget)?;
    reduction_transform(f, 2, &subs, true)
}

pub fn reduction_suite(cfg: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    for f in [TruthTable::and(2), TruthTable::parity(2)] {
        let id = format!("reduction-{f}");
        checks.push(attempt(&id, || {
            let r = micro_reduction(&f, cfg.budget)?;
            let structural = validate_hd(&r.protocol);
            let partial = is_partially_hd(&r.protocol, &r.relation)?;
            let solves = check_solves(&r.protocol, &r.relation)?;
            let depth = r.protocol.depth();
            let ok = structural.is_valid() && partial && solves.is_valid() && depth == r.expected_depth();
            Ok(Check::from_bool(
                &id,
                ok,
                format!(
                    "depth {depth} = c {} + index {} + 3 (expected {}); structural {}, partially half-duplex {partial}, solves {}",
                    r.c,
                    r.index_bits,
                    r.expected_depth(),
                    structural.is_valid(),
                    solves.is_valid()
                ),
            ))
        }));
    }
    finish("reduction", checks)
}

pub fn candidate_suite(cfg: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    checks.push(attempt("candidate-invariants", || {
        let mut runs = Vec::new();
        let nonconstant: Vec<TruthTable> = TruthTable::all(2).into_iter().filter(|g| !g.is_constant()).collect();
        for f in [TruthTable::and(2), TruthTable::parity(2)] {
            let r = micro_reduction(&f, cfg.budget)?;
            for g in &nonconstant {
                let (tree, rel) = hardwire(&r.protocol, &r.relation, g)?;
                for len in 0..=tree.depth() as usize {
                    runs.push(candidate_transcript(&tree, &rel, g, len, cfg.budget)?);
                }
            }
        }
        for f in &nonconstant {
            for g in &nonconstant {
                let rel = compose_strong(f, g)?;
                let tree = optimal_protocol(&rel, cfg.budget)?;
                runs.push(candidate_transcript(&tree, &rel, g, tree.depth() as usize, cfg.budget)?);
            }
        }
        let steps: usize = runs.iter().map(|r| r.steps.len()).sum();
        let bad: Vec<String> = runs
            .iter()
            .filter(|r| !(r.halving_holds() && r.shrink_holds() && r.leaf_holds()))
            .map(|r| format!("g={} π={:?}", r.g, r.transcript))
            .collect();
        Ok(tally(
            "candidate-invariants",
            runs.len(),
            &bad,
            &format!(" ({steps} bits: halving, shrink ≤ 2×, leaf ⇒ L ≤ 1)"),
        ))
    }));
    checks.push(attempt("candidate-popular", || {
        let mut bad = Vec::new();
        let mut total = 0;
        for f in [TruthTable::and(2), TruthTable::parity(2)] {
            let r = micro_reduction(&f, cfg.budget)?;
            for len in 0..=r.c as usize {
                let mut cands = BTreeMap::new();
                for g in TruthTable::balanced(2) {
                    let (tree, rel) = hardwire(&r.protocol, &r.relation, &g)?;
                    cands.insert(g.clone(), candidate_transcript(&tree, &rel, &g, len, cfg.budget)?.transcript);
                }
                let pop = popular_transcript(&cands)?;
                let ctx = derive_context(&r.protocol, &r.relation, &pop.transcript)?;
                let v_pi = ctx.v_pi();
                total += 1;
                if !pop.pigeonhole_holds() || !pop.support.iter().all(|g| v_pi.contains(g)) {
                    bad.push(format!("f={f} len={len}: {pop:?}"));
                }
            }
        }
        Ok(tally("candidate-popular", total, &bad, " (|V| ≥ |V0|/#transcripts and V ⊆ V_π)"))
    }));
    finish("candidate", checks)
}

fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0u64..1 << items.len()).map(|mask| mask_iter(mask).map(|i| items[i].clone()).collect()).collect()
}

// All strings over the per-coordinate alphabets.
fn product(alphabets: &[Vec<u32>]) -> Vec<Vec<u32>> {
    alphabets.iter().fold(vec![Vec::new()], |acc, al| {
        acc.into_iter().flat_map(|p| al.iter().map(move |&s| [p.clone(), vec![s]].concat())).collect()
    })
}

fn preimage_product(g: &TruthTable, a: &BitString, coords: u32) -> Vec<Vec<u32>> {
    let alphabets: Vec<Vec<u32>> = mask_iter(coords as u64).map(|i| g.preimage(a.bit(i))).collect();
    product(&alphabets)
}

pub fn pair_events_suite(cfg: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    let m = 2usize;
    checks.push(attempt("pair-events-exhaustive", || {
        let gs = TruthTable::balanced(2);
        let mut jobs = Vec::new();
        for ga in &gs {
            for gb in &gs {
                for av in 0..1u32 << m {
                    for bv in 0..1u32 << m {
                        jobs.push((ga.clone(), gb.clone(), BitString::new(m, av), BitString::new(m, bv)));
                    }
                }
            }
        }
        let results: Vec<Result<(usize, usize, Vec<String>)>> = jobs
            .par_iter()
            .map(|(ga, gb, a, b)| {
                let (mut total, mut held, mut bad) = (0, 0, Vec::new());
                for coords in 0u32..1 << m {
                    for xs in subsets(&preimage_product(ga, a, coords)) {
                        for ys in subsets(&preimage_product(gb, b, coords)) {
                            for eps in [0.0, 0.25] {
                                let ev = check_pair_events(ga, gb, a, b, coords, &xs, &ys, eps)?;
                                total += 1;
                                held += usize::from(ev.all_hold());
                                if !ev.implication_holds() {
                                    bad.push(format!("{ga} {gb} {a} {b} I={coords:b}: {ev:?}"));
                                }
                            }
                        }
                    }
                }
                Ok((total, held, bad))
            })
            .collect();
        let (mut total, mut held, mut bad) = (0, 0, Vec::new());
        for r in results {
            let (t, h, b) = r?;
            total += t;
            held += h;
            bad.extend(b);
        }
        Ok(tally("pair-events-exhaustive", total, &bad, &format!(" (n=2, m=2; events held in {held})")))
    }));
    checks.push(attempt("pair-events-random", || {
        let mut r = rng(cfg, 10);
        let gs = TruthTable::balanced(3);
        let (mut held, mut bad) = (0, Vec::new());
        for _ in 0..cfg.event_samples {
            let ga = gs.choose(&mut r).expect("nonempty").clone();
            let gb = if r.gen_bool(0.3) { ga.clone() } else { gs.choose(&mut r).expect("nonempty").clone() };
            let a = BitString::new(m, r.gen_range(0..1 << m));
            let b = BitString::new(m, r.gen_range(0..1 << m));
            let coords = r.gen_range(1..1u32 << m);
            let (dx, dy) = (r.gen_range(0.5..1.0), r.gen_range(0.5..1.0));
            let xs: Vec<_> = preimage_product(&ga, &a, coords).into_iter().filter(|_| r.gen_bool(dx)).collect();
            let ys: Vec<_> = preimage_product(&gb, &b, coords).into_iter().filter(|_| r.gen_bool(dy)).collect();
            let eps = [0.0, 0.25, 0.5][r.gen_range(0..3)];
            let ev = check_pair_events(&ga, &gb, &a, &b, coords, &xs, &ys, eps)?;
            held += usize::from(ev.all_hold());
            if !ev.implication_holds() {
                bad.push(format!("{ga} {gb} {a} {b} I={coords:b}: {ev:?}"));
            }
        }
        Ok(tally("pair-events-random", cfg.event_samples, &bad, &format!(" (n=3, m=2; events held in {held})")))
    }));
    finish("pair-events", checks)
}

/// The micro barrier instance: `m = 4`, repetition code, `w_X = 0`,
/// `w_Y = 4`, and `f(x) = 1` iff `|x| ≤ 1` or `|x| = 2` with `x_1 = 0`.
pub fn barrier_spec() -> BarrierSpec {
    let f = TruthTable::from_fn(4, |x| {
        let w = x.count_ones();
        w <= 1 || (w == 2 && x & 8 == 0)
    });
    BarrierSpec { f, code: LinearCode::repetition(4), w_x: 0, w_y: 4, n: 2 }
}

pub fn barrier_suite(cfg: &SuiteConfig) -> Report {
    let spec = barrier_spec();
    let mut checks = match barrier_construct(&spec, &LiveParams::barrier(), cfg.budget) {
        Ok(b) => {
            let mut c = b.checks;
            let info = b.alive.checks.iter().map(|c| format!("{} {}", c.id, c.status)).collect::<Vec<_>>().join(", ");
            c.push(Check::new(
                "barrier-alive-report",
                Status::Vacuous,
                format!("γ = 0.64, κ = 8 reported only: {} ({info})", b.alive.status),
            ));
            c
        }
        Err(e) => vec![Check::from_error("barrier-no-edges", &e)],
    };
    let bad = BarrierSpec { w_y: 0, ..spec };
    checks.push(Check::from_bool(
        "barrier-precondition",
        barrier_construct(&bad, &LiveParams::barrier(), cfg.budget).is_err(),
        "w_Y - w_X = 0 ≤ m - d = 0 is refused",
    ));
    finish("barrier", checks)
}

pub fn vacuity_suite(cfg: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    let f = TruthTable::and(2);
    let v0 = TruthTable::balanced(2);
    let r = match micro_reduction(&f, cfg.budget) {
        Ok(r) => r,
        Err(e) => return finish("vacuity", vec![Check::from_error("vacuity", &e)]),
    };
    let expect = |id: &str, got: Result<Status>, want: &[Status]| -> Check {
        match got {
            Ok(s) => Check::from_bool(id, want.contains(&s), format!("reported {s}, expected one of {want:?}")),
            Err(e) => Check::from_error(id, &e),
        }
    };
    let ctx = derive_context(&r.protocol, &r.relation, &[]);
    let not_pass = [Status::Vacuous, Status::Infeasible];
    match ctx {
        Ok(ctx) => {
            for (name, p) in [("structure", LiveParams::structure()), ("barrier", LiveParams::barrier())] {
                let got = check_alive(&ctx, &v0, &p, cfg.budget).map(|a| a.status);
                checks.push(expect(&format!("vacuity-alive-{name}"), got, &not_pass));
            }
            let got = build_gprime(&ctx, &v0, &LiveParams::structure(), cfg.budget).map(|g| g.status);
            checks.push(expect("vacuity-gprime-structure", got, &not_pass));
            let relaxed = LiveParams::new(0.5, 0, 0.0, 0.12).expect("valid");
            let got = check_alive(&ctx, &v0, &relaxed, cfg.budget).map(|a| a.status);
            checks.push(expect("vacuity-alive-relaxed", got, &[Status::Pass]));
            let got = build_gprime(&ctx, &v0, &LiveParams::relaxed(), cfg.budget).map(|g| g.status);
            checks.push(expect("vacuity-gprime-relaxed", got, &[Status::Pass]));
        }
        Err(e) => checks.push(Check::from_error("vacuity-alive-structure", &e)),
    }
    for strong in [false, true] {
        let got = verify_chromatic_bound(&r.protocol, &r.relation, &[], strong).map(|c| c.status);
        checks.push(expect(
            &format!("vacuity-chromatic-{}", if strong { "strong" } else { "standard" }),
            got,
            &[Status::Vacuous],
        ));
    }
    match barrier_construct(&barrier_spec(), &LiveParams::barrier(), cfg.budget) {
        Ok(b) => checks.push(expect("vacuity-barrier-alive", Ok(b.alive.status), &not_pass)),
        Err(e) => checks.push(Check::from_error("vacuity-barrier-alive", &e)),
    }
    finish("vacuity", checks)
}

pub fn chromatic_suite(cfg: &SuiteConfig) -> Report {
    let mut checks = Vec::new();
    for f in [TruthTable::and(2), TruthTable::parity(2)] {
        let id = format!("chromatic-sweep-{f}");
        checks.push(attempt(&id, || {
            let r = micro_reduction(&f, cfg.budget)?;
            // Every prefix of length ≤ c + 2 that some input pair follows.
            let mut frontier = vec![Vec::new()];
            let mut checked = Vec::new();
            while let Some(pi) = frontier.pop() {
                let ctx = derive_context(&r.protocol, &r.relation, &pi)?;
                if ctx.v_pi().is_empty() {
                    continue;
                }
                for strong in [false, true] {
                    checked.push((pi.clone(), verify_chromatic_bound(&r.protocol, &r.relation, &pi, strong)?));
                }
                if pi.len() < r.c as usize + 2 {
                    for b in [false, true] {
                        frontier.push([pi.clone(), vec![b]].concat());
                    }
                }
            }
            let bad: Vec<String> = checked
                .iter()
                .filter(|(_, c)| c.status == Status::Fail)
                .map(|(pi, c)| format!("{pi:?}: {}", c.detail))
                .collect();
            let informative = checked.iter().filter(|(_, c)| c.status == Status::Pass).count();
            Ok(tally(&id, checked.len(), &bad, &format!(" ({informative} informative, the rest vacuous)")))
        }));
    }
    finish("chromatic", checks)
}
