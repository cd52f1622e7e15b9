//! Append-only JSON-lines store of solver results keyed by relation
//! descriptor hash and measure name.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use krwlab::detcc::{exact_cc, exact_protocol_size, SearchBudget};
use krwlab::relations::RelationDescriptor;
use krwlab::SOLVER_VERSION;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Deterministic communication complexity, `null` for `-inf`.
    Cc,
    /// Fewest leaves of a protocol.
    ProtocolSize,
}

impl Measure {
    pub const ALL: [Measure; 2] = [Measure::Cc, Measure::ProtocolSize];

    pub fn compute(self, desc: &RelationDescriptor, budget: SearchBudget) -> krwlab::Result<Value> {
        let rel = desc.build()?;
        Ok(match self {
            Measure::Cc => serde_json::to_value(exact_cc(&rel, budget)?.finite()).expect("serializes"),
            Measure::ProtocolSize => Value::from(exact_protocol_size(&rel, budget)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub hash: String,
    pub descriptor: RelationDescriptor,
    pub measure: Measure,
    pub value: Value,
    pub solver: String,
}

#[derive(Debug, Default)]
pub struct ResultCache {
    path: Option<PathBuf>,
    records: BTreeMap<(String, Measure), Record>,
    /// Lines dropped on load, with the reason.
    pub dropped: Vec<String>,
    /// Lines written by another solver version; kept but never served.
    stale: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl ResultCache {
    /// A cache that lives only in memory.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists. Corrupt lines are dropped and the file is
    /// rewritten without them.
    pub fn open(path: &Path) -> Result<Self> {
        let mut cache = ResultCache { path: Some(path.to_path_buf()), ..Self::default() };
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(CliError::io(path, e)),
        };
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            match serde_json::from_str::<Record>(line) {
                Ok(r) if r.hash != r.descriptor.content_hash() => {
                    cache.dropped.push(format!("line {}: hash does not match descriptor", i + 1))
                }
                Ok(r) if r.solver != SOLVER_VERSION => cache.stale.push(line.to_string()),
                Ok(r) => {
                    cache.records.insert((r.hash.clone(), r.measure), r);
                }
                Err(e) => cache.dropped.push(format!("line {}: {e}", i + 1)),
            }
        }
        if !cache.dropped.is_empty() {
            cache.rewrite()?;
        }
        Ok(cache)
    }

    pub fn stale(&self) -> usize {
        self.stale.len()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.records.values()
    }

    pub fn get(&self, desc: &RelationDescriptor, measure: Measure) -> Option<&Value> {
        self.records.get(&(desc.content_hash(), measure)).map(|r| &r.value)
    }

    pub fn put(&mut self, desc: &RelationDescriptor, measure: Measure, value: Value) -> Result<()> {
        let descriptor = desc.canonical()?;
        let record =
            Record { hash: descriptor.content_hash(), descriptor, measure, value, solver: SOLVER_VERSION.into() };
        if let Some(path) = &self.path {
            let mut file =
                OpenOptions::new().create(true).append(true).open(path).map_err(|e| CliError::io(path, e))?;
            let line = serde_json::to_string(&record).expect("record serializes");
            writeln!(file, "{line}").map_err(|e| CliError::io(path, e))?;
        }
        self.records.insert((record.hash.clone(), measure), record);
        Ok(())
    }

    /// Cached value, or computes and stores it.
    pub fn get_or_compute(
        &mut self,
        desc: &RelationDescriptor,
        measure: Measure,
        budget: SearchBudget,
    ) -> Result<Value> {
        if let Some(v) = self.get(desc, measure) {
            return Ok(v.clone());
        }
        let v = measure.compute(desc, budget)?;
        self.put(desc, measure, v.clone())?;
        Ok(v)
    }

    /// Recomputes a seeded sample of 1% of the records, at least one.
    pub fn verify(&self, seed: u64, budget: SearchBudget) -> Result<VerifyReport> {
        let all: Vec<&Record> = self.records.values().collect();
        let k = all.len().div_ceil(100).min(all.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mismatches = Vec::new();
        let sample: Vec<&&Record> = all.choose_multiple(&mut rng, k).collect();
        for r in &sample {
            let fresh = r.measure.compute(&r.descriptor, budget)?;
            if fresh != r.value {
                mismatches.push(format!("{} {:?}: cached {} but recomputed {fresh}", r.hash, r.measure, r.value));
            }
        }
        Ok(VerifyReport { checked: sample.len(), mismatches })
    }

    fn rewrite(&self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let mut out: String = self.stale.iter().map(|l| format!("{l}\n")).collect();
        for r in self.records.values() {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| CliError::io(path, e))
    }
}
