//! Batch tabulation over irrep ranges, with optional data parallelism.

use std::sync::Arc;

use dashmap::DashMap;

use crate::chain::angmom::{
    chain3_brackets_with, chain3_transform, verify_chain3_brackets, Chain3Brackets, ALPHA_RULE,
};
use crate::chain::isospin::{
    chain2_brackets_with, chain2_transform, verify_chain2_brackets, Chain2Brackets, KAPPA_RULE,
};
use crate::error::Result;
use crate::halfint::HalfInt;
use crate::racah::{solve_isoscalars, verify_block, IsoscalarBlock};
use crate::so5::{kronecker, Generators, So5Irrep};
use crate::store::{ChainTag, Payload, RecordKey, Store, StoreRecord, StoreReport};

/// How independent work items are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Ignored (runs sequentially) when built without the `parallel` feature.
    Parallel {
        jobs: usize,
    },
}

impl Execution {
    pub fn with_jobs(jobs: usize) -> Execution {
        if jobs <= 1 {
            Execution::Sequential
        } else {
            Execution::Parallel { jobs }
        }
    }

    /// Order-preserving map.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.into_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel { jobs } => {
                use rayon::prelude::*;
                match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                    Ok(pool) => pool.install(|| items.into_par_iter().map(f).collect()),
                    Err(_) => items.into_iter().map(f).collect(),
                }
            }
            #[cfg(not(feature = "parallel"))]
            Execution::Parallel { .. } => items.into_iter().map(f).collect(),
        }
    }
}

/// Per-irrep generators and brackets, shared across work items.
#[derive(Default)]
pub struct BracketCache {
    generators: DashMap<So5Irrep, Arc<Generators>>,
    chain2: DashMap<So5Irrep, Arc<Chain2Brackets>>,
    chain3: DashMap<So5Irrep, Arc<Chain3Brackets>>,
}

impl BracketCache {
    pub fn generators(&self, g: So5Irrep) -> Arc<Generators> {
        if let Some(x) = self.generators.get(&g) {
            return x.clone();
        }
        let x = Arc::new(Generators::new(g));
        self.generators.entry(g).or_insert(x).clone()
    }

    pub fn chain2(&self, g: So5Irrep) -> Result<Arc<Chain2Brackets>> {
        if let Some(x) = self.chain2.get(&g) {
            return Ok(x.clone());
        }
        let x = Arc::new(chain2_brackets_with(&self.generators(g))?);
        Ok(self.chain2.entry(g).or_insert(x).clone())
    }

    pub fn chain3(&self, g: So5Irrep) -> Result<Arc<Chain3Brackets>> {
        if let Some(x) = self.chain3.get(&g) {
            return Ok(x.clone());
        }
        let x = Arc::new(chain3_brackets_with(&self.generators(g))?);
        Ok(self.chain3.entry(g).or_insert(x).clone())
    }
}

/// Payload for one chain, given its solved block.
pub fn payload_for(chain: ChainTag, block: IsoscalarBlock, cache: &BracketCache) -> Result<Payload> {
    let k = block.key;
    Ok(match chain {
        ChainTag::So4 => Payload::So4 { block },
        ChainTag::Isospin => {
            let rows = chain2_transform(&block, &*cache.chain2(k.g1)?, &*cache.chain2(k.g2)?, &*cache.chain2(k.g)?)?;
            Payload::Isospin { block, kappa_rule: KAPPA_RULE.into(), rows }
        }
        ChainTag::Angmom => {
            let rows = chain3_transform(&block, &*cache.chain3(k.g1)?, &*cache.chain3(k.g2)?, &*cache.chain3(k.g)?)?;
            Payload::Angmom { block, alpha_rule: ALPHA_RULE.into(), rows }
        }
    })
}

pub fn compute_record(key: RecordKey, cache: &BracketCache) -> Result<StoreRecord> {
    let block = solve_isoscalars(key.g1, key.g2, key.g)?;
    Ok(StoreRecord::new(payload_for(key.chain, block, cache)?))
}

/// Every coupling with `R1, R2 <= max_r`, in key order.
pub fn keys_up_to(max_r: HalfInt, chain: ChainTag) -> Result<Vec<RecordKey>> {
    let irreps = So5Irrep::all_up_to(max_r);
    let mut keys = Vec::new();
    for &g1 in &irreps {
        for &g2 in &irreps {
            for (g, _) in kronecker(g1, g2)? {
                keys.push(RecordKey { chain, g1, g2, g });
            }
        }
    }
    keys.sort();
    Ok(keys)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TabulateSummary {
    pub computed: usize,
    pub skipped: usize,
}

/// Compute and store every missing record; records already present are kept.
pub fn tabulate(store: &mut Store, max_r: HalfInt, chain: ChainTag, exec: Execution) -> Result<TabulateSummary> {
    let (present, missing): (Vec<RecordKey>, Vec<RecordKey>) =
        keys_up_to(max_r, chain)?.into_iter().partition(|k| store.contains(k));
    let cache = BracketCache::default();
    let shared: &Store = store;
    let results = exec.map(missing, |key| {
        let rec = compute_record(key, &cache)?;
        shared.write_record(&rec)?;
        Ok(rec)
    });
    let mut summary = TabulateSummary { computed: 0, skipped: present.len() };
    for rec in results {
        let rec: StoreRecord = rec?;
        store.register(&rec);
        summary.computed += 1;
    }
    store.flush()?;
    Ok(summary)
}

/// Everything a record claims, recomputed where needed.
pub fn verify_record(rec: &StoreRecord, cache: &BracketCache) -> Vec<String> {
    let mut failures = rec.integrity_failures();
    let block = rec.payload.block();
    failures.extend(verify_block(block).failures);
    let k = block.key;
    let check = |failures: &mut Vec<String>, r: Result<Vec<String>>| match r {
        Ok(f) => failures.extend(f),
        Err(e) => failures.push(format!("{}: {e}", rec.key)),
    };
    match &rec.payload {
        Payload::So4 { .. } => {}
        Payload::Isospin { rows, kappa_rule, .. } => check(
            &mut failures,
            (|| {
                let mut f = Vec::new();
                if kappa_rule != KAPPA_RULE {
                    f.push(format!("{}: kappa rule {kappa_rule:?} differs from {KAPPA_RULE:?}", rec.key));
                }
                for g in [k.g1, k.g2, k.g] {
                    f.extend(verify_chain2_brackets(&cache.generators(g), &*cache.chain2(g)?).failures);
                }
                let want = chain2_transform(block, &*cache.chain2(k.g1)?, &*cache.chain2(k.g2)?, &*cache.chain2(k.g)?)?;
                if &want != rows {
                    f.push(format!("{}: stored isospin table differs from the transformed block", rec.key));
                }
                Ok(f)
            })(),
        ),
        Payload::Angmom { rows, alpha_rule, .. } => check(
            &mut failures,
            (|| {
                let mut f = Vec::new();
                if alpha_rule != ALPHA_RULE {
                    f.push(format!("{}: alpha rule {alpha_rule:?} differs from {ALPHA_RULE:?}", rec.key));
                }
                for g in [k.g1, k.g2, k.g] {
                    f.extend(verify_chain3_brackets(&cache.generators(g), &*cache.chain3(g)?).failures);
                }
                let want = chain3_transform(block, &*cache.chain3(k.g1)?, &*cache.chain3(k.g2)?, &*cache.chain3(k.g)?)?;
                if &want != rows {
                    f.push(format!("{}: stored angular-momentum table differs from the transformed block", rec.key));
                }
                Ok(f)
            })(),
        ),
    }
    failures
}

/// Read-only scan of every indexed record.
pub fn verify_store(store: &Store, exec: Execution) -> StoreReport {
    let entries: Vec<(String, String)> = store.entries().map(|(k, h)| (k.to_string(), h.to_string())).collect();
    let cache = BracketCache::default();
    let results = exec.map(entries, |(key, hash)| {
        let failures = match store.read_checked(&key, &hash) {
            Ok(rec) => verify_record(&rec, &cache),
            Err(f) => {
                // still check the values of a record whose hash is off
                let mut f = f;
                if let Ok(text) = std::fs::read_to_string(store.record_path(&hash)) {
                    if let Ok(rec) = StoreRecord::from_json(&text) {
                        for m in verify_record(&rec, &cache) {
                            if !f.contains(&m) {
                                f.push(m);
                            }
                        }
                    }
                }
                f
            }
        };
        (key, failures)
    });
    let mut report = StoreReport { checked: results.len(), ..Default::default() };
    for (key, f) in results {
        if !f.is_empty() {
            report.failures.insert(key, f);
        }
    }
    report
}
