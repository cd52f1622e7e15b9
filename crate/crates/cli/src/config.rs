//! Experiment configuration: a TOML file, then environment overrides.

use std::path::{Path, PathBuf};

use krwlab::detcc::SearchBudget;
use krwlab::relations::RelationDescriptor;
use krwlab::structlab::LiveParams;
use krwlab::suites::SuiteConfig;
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const ENV_MAX_SIDE: &str = "KRWLAB_MAX_SIDE";
pub const ENV_MAX_MEMO: &str = "KRWLAB_MAX_MEMO";
pub const ENV_MAX_DEPTH: &str = "KRWLAB_MAX_DEPTH";
pub const ENV_CACHE: &str = "KRWLAB_CACHE";

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetConfig {
    pub max_side: usize,
    pub max_memo: usize,
    pub max_depth: Option<u32>,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        let b = SearchBudget::default();
        BudgetConfig { max_side: b.max_side, max_memo: b.max_memo, max_depth: b.max_depth }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub random_sets: usize,
    pub three_bit_functions: usize,
    pub random_graphs: usize,
    pub event_samples: usize,
    pub projection_samples: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let s = SuiteConfig::default();
        SweepConfig {
            random_sets: s.random_sets,
            three_bit_functions: s.three_bit_functions,
            random_graphs: s.random_graphs,
            event_samples: s.event_samples,
            projection_samples: s.projection_samples,
        }
    }
}

/// Aliveness parameter grid; every combination is evaluated.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ParamGrid {
    pub gamma: Vec<f64>,
    pub kappa: Vec<u32>,
    pub eps: Vec<f64>,
    pub beta: Vec<f64>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        let (s, b) = (LiveParams::structure(), LiveParams::barrier());
        ParamGrid { gamma: vec![s.gamma, b.gamma, 1.0], kappa: vec![0, s.kappa], eps: vec![s.eps], beta: vec![s.beta] }
    }
}

impl ParamGrid {
    pub fn points(&self) -> Result<Vec<LiveParams>> {
        let mut out = Vec::new();
        for &gamma in &self.gamma {
            for &kappa in &self.kappa {
                for &eps in &self.eps {
                    for &beta in &self.beta {
                        out.push(
                            LiveParams::new(gamma, kappa, eps, beta).map_err(|e| CliError::config(e.to_string()))?,
                        );
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub suites: Vec<String>,
    pub relations: Vec<RelationDescriptor>,
    pub params: ParamGrid,
    pub budget: BudgetConfig,
    pub sweeps: SweepConfig,
    pub cache: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: SuiteConfig::default().seed,
            suites: vec!["all".into()],
            relations: Vec::new(),
            params: ParamGrid::default(),
            budget: BudgetConfig::default(),
            sweeps: SweepConfig::default(),
            cache: None,
            output: None,
            format: Format::Json,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    /// Reads `path` if given, otherwise starts from defaults; then applies
    /// environment overrides and validates.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => Self::parse(&std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?)?,
            None => Self::default(),
        };
        cfg.apply_env(|k| std::env::var(k).ok())?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_env(&mut self, get: impl Fn(&str) -> Option<String>) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.trim().parse().map_err(|_| CliError::config(format!("{key}={v:?} is not a valid number")))
        }
        if let Some(v) = get(ENV_MAX_SIDE) {
            self.budget.max_side = num(ENV_MAX_SIDE, &v)?;
        }
        if let Some(v) = get(ENV_MAX_MEMO) {
            self.budget.max_memo = num(ENV_MAX_MEMO, &v)?;
        }
        if let Some(v) = get(ENV_MAX_DEPTH) {
            self.budget.max_depth = Some(num(ENV_MAX_DEPTH, &v)?);
        }
        if let Some(v) = get(ENV_CACHE) {
            self.cache = (!v.is_empty()).then(|| PathBuf::from(v));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.budget;
        if b.max_side == 0 || b.max_memo == 0 || b.max_depth == Some(0) {
            return Err(CliError::config("budgets must be positive"));
        }
        if b.max_side > 64 {
            return Err(CliError::config("budget.max_side cannot exceed 64"));
        }
        for name in &self.suites {
            if !krwlab::suites::suite_names().contains(&name.as_str()) {
                return Err(CliError::config(format!("unknown suite {name:?}")));
            }
        }
        for r in &self.relations {
            r.canonical().map_err(|e| CliError::config(format!("relation {r:?}: {e}")))?;
        }
        self.params.points()?;
        Ok(())
    }

    pub fn search_budget(&self) -> SearchBudget {
        SearchBudget {
            max_side: self.budget.max_side,
            max_memo: self.budget.max_memo,
            max_depth: self.budget.max_depth,
        }
    }

    pub fn suite_config(&self) -> SuiteConfig {
        let s = &self.sweeps;
        SuiteConfig {
            seed: self.seed,
            budget: self.search_budget(),
            random_sets: s.random_sets,
            three_bit_functions: s.three_bit_functions,
            random_graphs: s.random_graphs,
            event_samples: s.event_samples,
            projection_samples: s.projection_samples,
        }
    }
}
