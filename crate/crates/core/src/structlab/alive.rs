use std::collections::BTreeMap;

use serde::Serialize;

use super::context::TranscriptContext;
use crate::boolcore::{binomial, BitString, TruthTable, LOG_SLACK};
use crate::detcc::{formula_complexity_rect, SearchBudget};
use crate::report::{Check, Status};
use crate::{Error, Result};

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Aliveness parameters `γ, κ` and the `ε, β` used when building `G′`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LiveParams {
    pub gamma: f64,
    pub kappa: u32,
    pub eps: f64,
    pub beta: f64,
}

impl LiveParams {
    pub fn new(gamma: f64, kappa: u32, eps: f64, beta: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::invalid(format!("γ = {gamma} outside (0, 1]")));
        }
        if !(eps >= 0.0 && (0.0..0.5).contains(&beta)) {
            return Err(Error::invalid(format!("need ε ≥ 0 and 0 ≤ β < 1/2, got ε = {eps}, β = {beta}")));
        }
        Ok(LiveParams { gamma, kappa, eps, beta })
    }

    /// Structure-stage constants: `γ = 0.041`, `κ = 8`,
    /// `β = 0.12` and an `ε` small enough for the constraint chain.
    pub fn structure() -> Self {
        LiveParams { gamma: 0.041, kappa: 8, eps: 1e-4, beta: 0.12 }
    }

    /// The constants of the barrier construction: `γ = 0.64`, `κ = 8`.
    pub fn barrier() -> Self {
        LiveParams { gamma: 0.64, kappa: 8, eps: 1e-4, beta: 0.12 }
    }

    /// `γ = 1, κ = 0, ε = 0, β = 0.12`: weak enough to be met at micro scale.
    pub fn relaxed() -> Self {
        LiveParams { gamma: 1.0, kappa: 0, eps: 0.0, beta: 0.12 }
    }

    /// `min{2 log e·(β²−ε), (1/3)(1/2−β)² − 4 log e·ε}`.
    pub fn gamma_bound(&self) -> f64 {
        let first = 2.0 * LOG2_E * (self.beta * self.beta - self.eps);
        let second = (0.5 - self.beta).powi(2) / 3.0 - 4.0 * LOG2_E * self.eps;
        first.min(second)
    }

    pub fn satisfies_constraints(&self) -> bool {
        self.gamma <= self.gamma_bound() + LOG_SLACK
    }

    /// `(1−γ)m + κ log m + κ`.
    pub fn complexity_threshold(&self, m: usize) -> f64 {
        let m = m as f64;
        (1.0 - self.gamma) * m + self.kappa as f64 * (m.log2() + 1.0)
    }
}

/// The three bullets of aliveness, with margins (`log` of actual over
/// required, so nonnegative means satisfied).
#[derive(Clone, Debug, Serialize)]
pub struct AliveReport {
    pub status: Status,
    pub checks: Vec<Check>,
}

impl AliveReport {
    pub fn is_alive(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Every formula for a rectangle on `m` bits has at most `m·2^{m−1}` leaves
/// (a DNF over the smaller side), so a larger `log L` target cannot be met.
pub fn log_complexity_ceiling(m: usize) -> f64 {
    (m as f64).log2() + m as f64 - 1.0
}

/// Caches `L(A×B)` across the many functions sharing a rectangle.
#[derive(Default)]
pub(crate) struct ComplexityCache {
    map: BTreeMap<(Vec<BitString>, Vec<BitString>), u64>,
}

impl ComplexityCache {
    pub(crate) fn get(&mut self, a: &[BitString], b: &[BitString], budget: SearchBudget) -> Result<u64> {
        let key = (a.to_vec(), b.to_vec());
        if let Some(&l) = self.map.get(&key) {
            return Ok(l);
        }
        let l = formula_complexity_rect(a, b, budget)?.0;
        self.map.insert(key, l);
        Ok(l)
    }
}

/// Evaluates the aliveness bullets of `ctx` for the function set `v`. The
/// size bullet is checked on `v` and also reported for `V_π`.
pub fn check_alive(
    ctx: &TranscriptContext,
    v: &[TruthTable],
    params: &LiveParams,
    budget: SearchBudget,
) -> Result<AliveReport> {
    let (m, n) = (ctx.m(), ctx.n());
    let v_pi = ctx.v_pi();
    for g in v {
        if !g.is_balanced() {
            return Err(Error::invalid(format!("function {g} is not balanced")));
        }
        if !v_pi.contains(g) {
            return Err(Error::invalid(format!("function {g} is not in V_π")));
        }
    }
    let mut checks = Vec::new();

    let log_v0 = (binomial(1 << n, 1 << (n - 1)) as f64).log2();
    let required = log_v0 - m as f64;
    for (id, size) in [("alive-size", v.len()), ("alive-size-vpi", v_pi.len())] {
        let margin = (size as f64).log2() - required;
        let detail = format!("|set| = {size}, 2^-m·|V0| = {:.3}", required.exp2());
        checks.push(Check::from_bool(id, margin >= -LOG_SLACK, detail).with_margin(margin));
    }

    let threshold = params.complexity_threshold(m);
    let ceiling = log_complexity_ceiling(m);
    if threshold > ceiling + LOG_SLACK {
        let detail = format!("target log L ≥ {threshold:.3} exceeds the ceiling log(m·2^(m-1)) = {ceiling:.3}");
        checks.push(Check::new("alive-complexity", Status::Infeasible, detail).with_margin(ceiling - threshold));
    } else {
        let mut cache = ComplexityCache::default();
        let mut worst: Option<(f64, &TruthTable, u64)> = None;
        for g in v {
            let l = cache.get(&ctx.a_pi(g), &ctx.b_pi(g), budget)?;
            let margin = (l as f64).log2() - threshold;
            if worst.is_none_or(|w| margin < w.0) {
                worst = Some((margin, g, l));
            }
        }
        checks.push(match worst {
            Some((margin, g, l)) => Check::from_bool(
                "alive-complexity",
                margin >= -LOG_SLACK,
                format!("min log L(A×B) - {threshold:.3} at g = {g} (L = {l})"),
            )
            .with_margin(margin),
            None => Check::new("alive-complexity", Status::Vacuous, "empty function set"),
        });
    }

    let exponent = 1.0 - params.gamma * m as f64;
    if exponent > LOG_SLACK {
        let detail = format!("required density 2^{exponent:.3} exceeds 1");
        checks.push(Check::new("alive-density", Status::Infeasible, detail).with_margin(-exponent));
    } else {
        let mut worst: Option<(f64, String)> = None;
        for g in v {
            let sides = [(ctx.a_pi(g), true), (ctx.b_pi(g), false)];
            for (strings, alice) in &sides {
                for s in strings {
                    let set = if *alice { ctx.x_pi_a(g, s) } else { ctx.y_pi_b(g, s) };
                    let density = set.len() as f64 / TranscriptContext::preimage_size(g, s) as f64;
                    let margin = density.log2() - exponent;
                    if worst.as_ref().is_none_or(|w| margin < w.0) {
                        let who = if *alice { "X" } else { "Y" };
                        worst = Some((margin, format!("{who}(g={g}, {s}) has density {density:.4}")));
                    }
                }
            }
        }
        checks.push(match worst {
            Some((margin, what)) => Check::from_bool(
                "alive-density",
                margin >= -LOG_SLACK,
                format!("least dense: {what}, required 2^{exponent:.3}"),
            )
            .with_margin(margin),
            None => Check::new("alive-density", Status::Vacuous, "empty function set"),
        });
    }

    // The size bullet on V_π is informational.
    let counted = checks.iter().filter(|c| c.id != "alive-size-vpi");
    let status = if counted.clone().any(|c| c.status == Status::Infeasible) {
        Status::Infeasible
    } else if counted.clone().all(|c| c.status == Status::Pass) {
        Status::Pass
    } else if counted.clone().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Vacuous
    };
    Ok(AliveReport { status, checks })
}
