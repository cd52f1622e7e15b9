use std::collections::BTreeMap;

use serde::Serialize;

use super::alive::{check_alive, AliveReport, ComplexityCache, LiveParams};
use super::context::TranscriptContext;
use super::graph::{char_graph_on, CharGraph};
use crate::bits::mask_iter;
use crate::boolcore::{binomial, BitString, BooleanMatrix, TruthTable, LOG_SLACK};
use crate::detcc::{find_fortified_subset, Player, SearchBudget};
use crate::prefixthick::{is_prefix_thick, thick_projections, AlphabetProfile, StringSet};
use crate::report::{Check, Status};
use crate::Result;

/// Row label of an `n`-bit value, most significant bit first.
pub(crate) fn row_label(n: usize, v: u32) -> String {
    format!("{v:0n$b}")
}

/// A set of matrices with `g(X) = a` as strings over the alphabets
/// `g⁻¹(a_1), …, g⁻¹(a_m)`.
pub fn row_strings(g: &TruthTable, a: &BitString, xs: &[BooleanMatrix]) -> Result<StringSet> {
    let n = g.arity();
    let alphabets: Vec<Vec<u32>> = (0..a.len()).map(|i| g.preimage(a.bit(i))).collect();
    let labels = alphabets.iter().map(|al| al.iter().map(|&v| row_label(n, v)).collect()).collect();
    let profile = AlphabetProfile::with_labels(labels)?;
    let strings = xs
        .iter()
        .map(|x| {
            (0..a.len())
                .map(|i| alphabets[i].binary_search(&x.row(i).value()).expect("row maps to a_i") as u8)
                .collect()
        })
        .collect();
    StringSet::new(profile, strings)
}

// Masks relative to the coordinates of `outer`, mapped back to [m].
fn lift_mask(inner: u32, outer: u32) -> u32 {
    mask_iter(outer as u64).enumerate().filter(|(k, _)| inner >> k & 1 == 1).fold(0, |acc, (_, i)| acc | 1 << i)
}

/// The subset `I` plus the pair of strings agreeing outside `I`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Triplet {
    /// Bit `i` set when coordinate `i` (0-based) is in `I`.
    pub coords: u32,
    pub a: BitString,
    pub b: BitString,
}

/// What happened to one function in the pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct FunctionTrace {
    pub g: TruthTable,
    pub l_full: u64,
    pub a0: usize,
    pub l_a0: u64,
    pub a1: usize,
    pub i1: Option<u32>,
    pub l_a1: u64,
    pub b0: usize,
    pub l_b0: u64,
    pub b1: usize,
    pub l_a1b1: u64,
    pub triplet: Option<Triplet>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GPrime {
    pub status: Status,
    pub alive: AliveReport,
    pub traces: Vec<FunctionTrace>,
    pub triplet: Option<Triplet>,
    pub v_prime: Vec<TruthTable>,
    pub graph: Option<CharGraph>,
    pub checks: Vec<Check>,
}

/// Best mask by (number of supporters, size, smaller mask) and its supporters.
fn choose_mask<T: Clone>(families: &[(T, Vec<u32>)]) -> Option<(u32, Vec<T>)> {
    let mut support: BTreeMap<u32, Vec<T>> = BTreeMap::new();
    for (s, fam) in families {
        for &i in fam {
            support.entry(i).or_default().push(s.clone());
        }
    }
    support.into_iter().max_by(|(i1, s1), (i2, s2)| {
        s1.len().cmp(&s2.len()).then(i1.count_ones().cmp(&i2.count_ones())).then(i2.cmp(i1))
    })
}

fn large(mask: u32, of: usize, beta: f64) -> bool {
    mask.count_ones() as f64 >= (0.5 - beta) * of as f64 - LOG_SLACK
}

fn agree_outside(a: &BitString, b: &BitString, coords: u32) -> bool {
    a.differing(b).into_iter().all(|i| coords >> i & 1 == 1)
}

fn run_function(
    ctx: &TranscriptContext,
    g: &TruthTable,
    params: &LiveParams,
    cache: &mut ComplexityCache,
    budget: SearchBudget,
) -> Result<FunctionTrace> {
    let m = ctx.m();
    let rho = 1.0 / (4.0 * m as f64);
    let (a, b) = (ctx.a_pi(g), ctx.b_pi(g));
    let mut tr = FunctionTrace {
        g: g.clone(),
        l_full: cache.get(&a, &b, budget)?,
        a0: 0,
        l_a0: 0,
        a1: 0,
        i1: None,
        l_a1: 0,
        b0: 0,
        l_b0: 0,
        b1: 0,
        l_a1b1: 0,
        triplet: None,
        failure: None,
    };
    let a0 = find_fortified_subset(&a, &b, rho, Player::Alice, budget)?.subset;
    tr.a0 = a0.len();
    tr.l_a0 = cache.get(&a0, &b, budget)?;

    let mut fam_a = Vec::new();
    for s in &a0 {
        let x = row_strings(g, s, &ctx.x_pi_a(g, s))?;
        let f: Vec<u32> =
            thick_projections(&x, params.eps)?.into_iter().filter(|&i| large(i, m, params.beta)).collect();
        fam_a.push((*s, f));
    }
    let Some((i1, a1)) = choose_mask(&fam_a) else {
        tr.failure =
            Some(format!("no a in A0 has a thick projection on ≥ {:.2} coordinates", (0.5 - params.beta) * m as f64));
        return Ok(tr);
    };
    tr.i1 = Some(i1);
    tr.a1 = a1.len();
    tr.l_a1 = cache.get(&a1, &b, budget)?;

    let b0 = find_fortified_subset(&a1, &b, rho, Player::Bob, budget)?.subset;
    tr.b0 = b0.len();
    tr.l_b0 = cache.get(&a1, &b0, budget)?;
    let k1 = i1.count_ones() as usize;
    let mut fam_b = Vec::new();
    for s in &b0 {
        let y = row_strings(g, s, &ctx.y_pi_b(g, s))?.project(i1);
        let f: Vec<u32> = thick_projections(&y, params.eps)?
            .into_iter()
            .filter(|&i| large(i, k1, params.beta))
            .map(|i| lift_mask(i, i1))
            .collect();
        fam_b.push((*s, f));
    }
    let Some((ig, b1)) = choose_mask(&fam_b) else {
        tr.failure = Some(format!(
            "no b in B0 has a thick projection inside I1 on ≥ {:.2} coordinates",
            (0.5 - params.beta) * k1 as f64
        ));
        return Ok(tr);
    };
    tr.b1 = b1.len();
    tr.l_a1b1 = cache.get(&a1, &b1, budget)?;
    let pair = a1.iter().flat_map(|x| b1.iter().map(move |y| (x, y))).find(|(x, y)| agree_outside(x, y, ig));
    match pair {
        Some((x, y)) => tr.triplet = Some(Triplet { coords: ig, a: *x, b: *y }),
        None => {
            let outside = m - ig.count_ones() as usize;
            tr.failure = Some(format!(
                "no a in A1, b in B1 agree outside I; L(A1×B1) = {} vs 2^(|[m]-I| + log m) = {:.2}",
                tr.l_a1b1,
                (outside as f64 + (m as f64).log2()).exp2()
            ));
        }
    }
    Ok(tr)
}

/// Runs the construction of `G′` over `V`: fortify on Alice's side, collect
/// thick projections of `X(a)` over the alphabets `g⁻¹(a_i)`, pick the most
/// supported large `I₁`, repeat on Bob's side inside `I₁`, select
/// `(I_g, a_g, b_g)`, and keep the functions sharing the modal triplet.
/// Returns early, with the aliveness status, if the context is not alive.
pub fn build_gprime(
    ctx: &TranscriptContext,
    v: &[TruthTable],
    params: &LiveParams,
    budget: SearchBudget,
) -> Result<GPrime> {
    let alive = check_alive(ctx, v, params, budget)?;
    let mut out = GPrime {
        status: alive.status,
        alive: alive.clone(),
        traces: Vec::new(),
        triplet: None,
        v_prime: Vec::new(),
        graph: None,
        checks: Vec::new(),
    };
    if !alive.is_alive() {
        return Ok(out);
    }
    let (m, n) = (ctx.m(), ctx.n());
    let mut cache = ComplexityCache::default();
    for g in v {
        out.traces.push(run_function(ctx, g, params, &mut cache, budget)?);
    }

    let fortify_ok = out.traces.iter().all(|t| 4 * t.l_a0 >= t.l_full && (t.i1.is_none() || 4 * t.l_b0 >= t.l_a1));
    out.checks.push(Check::from_bool("gprime-fortify", fortify_ok, "L(A0×B) ≥ L(A×B)/4 and L(A1×B0) ≥ L(A1×B)/4"));

    let mut votes: BTreeMap<&Triplet, Vec<TruthTable>> = BTreeMap::new();
    for t in &out.traces {
        if let Some(tp) = &t.triplet {
            votes.entry(tp).or_default().push(t.g.clone());
        }
    }
    let successes: usize = votes.values().map(Vec::len).sum();
    let distinct = votes.len();
    let Some((tp, vp)) = votes.into_iter().fold(None::<(&Triplet, Vec<TruthTable>)>, |best, (t, s)| match best {
        Some(b) if b.1.len() >= s.len() => Some(b),
        _ => Some((t, s)),
    }) else {
        out.status = Status::Fail;
        let why = out.traces.iter().filter_map(|t| t.failure.clone()).next().unwrap_or_default();
        out.checks.push(Check::new("gprime-size", Status::Fail, format!("no function completed the pipeline: {why}")));
        return Ok(out);
    };
    let tp = tp.clone();

    let log_v0 = (binomial(1 << n, 1 << (n - 1)) as f64).log2();
    let paper_margin = (vp.len() as f64).log2() - (log_v0 - 4.0 * m as f64);
    out.checks.push(
        Check::from_bool(
            "gprime-size",
            vp.len() * distinct >= successes,
            format!(
                "|V'| = {} of {successes} completed, {distinct} distinct triplets; 2^-4m·|V0| margin {paper_margin:.3}",
                vp.len()
            ),
        )
        .with_margin(paper_margin),
    );
    out.checks.push(Check::from_bool(
        "gprime-agree",
        agree_outside(&tp.a, &tp.b, tp.coords),
        format!("a = {}, b = {}, I = {:0m$b}", tp.a, tp.b, tp.coords.reverse_bits() >> (32 - m)),
    ));
    let t = (0.5 + params.eps) * (1usize << (n - 1)) as f64;
    let mut thick_ok = true;
    for g in &vp {
        let xs = row_strings(g, &tp.a, &ctx.x_pi_a(g, &tp.a))?.project(tp.coords);
        let ys = row_strings(g, &tp.b, &ctx.y_pi_b(g, &tp.b))?.project(tp.coords);
        thick_ok &= is_prefix_thick(&xs, t).0 && is_prefix_thick(&ys, t).0;
    }
    out.checks.push(Check::from_bool(
        "gprime-thick",
        thick_ok,
        format!("X(g,a)|_I and Y(g,b)|_I prefix thick with degree > {t:.3} for all g in V'"),
    ));
    out.graph = Some(char_graph_on(ctx, &vp, true)?);
    out.triplet = Some(tp);
    out.v_prime = vp;
    out.status = if out.checks.iter().all(Check::passed) { Status::Pass } else { Status::Fail };
    Ok(out)
}
