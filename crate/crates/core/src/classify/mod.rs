//! The end-to-end classification: candidate triples, per-group orbit
//! counts, and assembly of the table.

pub mod cache;
pub mod exceptional;
pub mod table;

use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{Catalog, CatalogError, CatalogGroup, Fingerprint};
use crate::groups::{automorphism_group_capped, conjugacy_classes, Automorphism, ConjugacyClassTable};
use crate::orbits::{count_component_orbits, ComponentCount, CountConfig, OrbitContext};
use crate::typesys::{alpha, candidate_triples_with, CandidateTriple, TripleFilter, TypeTuple};

pub use cache::{CacheKey, TaskCache, CACHE_VERSION};
pub use exceptional::{exceptional_report, ExceptionalReport, ExceptionalRow};
pub use table::*;

/// Rough bytes held per materialized system: packed key, bucket slot and
/// orbit labels.
pub const BYTES_PER_SYSTEM: u64 = 40;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("cache: {0}")]
    Cache(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub filter: TripleFilter,
    pub orders: Option<RangeInclusive<u64>>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub count: CountConfig,
    pub cache_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            filter: TripleFilter::with_bundled_bounds(),
            orders: None,
            jobs: None,
            count: CountConfig::default(),
            cache_dir: None,
        }
    }
}

impl PipelineConfig {
    /// Caps the tuples held by one set so that it fits in `gib` GiB.
    pub fn with_memory_cap_gib(mut self, gib: f64) -> Self {
        self.count.max_tuples = ((gib * (1u64 << 30) as f64) / BYTES_PER_SYSTEM as f64) as usize;
        self
    }

    fn wants(&self, order: u64) -> bool {
        self.orders.as_ref().is_none_or(|r| r.contains(&order))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TaskOutcome {
    Counted { count: ComponentCount, cached: bool },
    Skipped { reason: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskReport {
    pub group: String,
    pub order: u64,
    pub id: Option<u32>,
    pub t1: TypeTuple,
    pub t2: TypeTuple,
    pub seconds: f64,
    #[serde(flatten)]
    pub outcome: TaskOutcome,
}

impl TaskReport {
    pub fn n(&self) -> Option<u64> {
        match &self.outcome {
            TaskOutcome::Counted { count, .. } => Some(count.n),
            TaskOutcome::Skipped { .. } => None,
        }
    }
}

/// Effect of the per-genus automorphism bounds on the candidate list.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FilterEffect {
    pub candidates: usize,
    pub candidates_without_bounds: usize,
    /// Triples removed by the bounds whose order matches a catalog group.
    pub removed_with_catalog_group: Vec<(u64, TypeTuple, TypeTuple)>,
}

impl FilterEffect {
    pub fn changed_candidates(&self) -> bool {
        self.candidates != self.candidates_without_bounds
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub rows: Vec<ClassificationRow>,
    pub total_n: u64,
    pub tasks: Vec<TaskReport>,
    pub skipped: usize,
    /// Groups whose automorphisms could not be computed.
    pub failures: Vec<String>,
    pub filter: FilterEffect,
    pub seconds: f64,
}

struct GroupData {
    entry: CatalogGroup,
    classes: ConjugacyClassTable,
    automorphisms: Vec<Automorphism>,
    fingerprint: String,
}

/// Builds the triple list, counts every (group, triple) task whose orders
/// agree and assembles the rows with `n ≥ 1`. Failures of single tasks are
/// recorded in the report and do not stop the run.
pub fn run_pipeline(catalog: &Catalog, config: &PipelineConfig) -> Result<RunReport, PipelineError> {
    match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| PipelineError::Pool(e.to_string()))?
            .install(|| run_inner(catalog, config)),
        None => run_inner(catalog, config),
    }
}

fn run_inner(catalog: &Catalog, config: &PipelineConfig) -> Result<RunReport, PipelineError> {
    let start = Instant::now();
    let groups = catalog.realize_all()?;
    let orders: BTreeSet<u64> = groups.iter().map(|g| g.group.order() as u64).collect();
    let triples: Vec<CandidateTriple> = candidate_triples_with(&config.filter)
        .into_iter()
        .filter(|t| config.wants(t.group_order) && orders.contains(&t.group_order))
        .collect();
    let filter = filter_effect(&config.filter, &orders);
    let cache = config.cache_dir.as_deref().map(TaskCache::open).transpose()?;

    let data: Vec<Result<GroupData, String>> = groups
        .into_par_iter()
        .filter(|e| triples.iter().any(|t| t.group_order == e.group.order() as u64))
        .map(|entry| {
            let g = &entry.group;
            let automorphisms = automorphism_group_capped(g, g.order().max(512))
                .map_err(|e| format!("{}: {e}", entry.definition.key))?;
            Ok(GroupData {
                classes: conjugacy_classes(g),
                automorphisms,
                fingerprint: Fingerprint::compute(g).to_string(),
                entry,
            })
        })
        .collect();

    let mut failures = Vec::new();
    let mut ready = Vec::new();
    for d in data {
        match d {
            Ok(d) => ready.push(d),
            Err(e) => failures.push(e),
        }
    }
    let tasks: Vec<(&GroupData, &CandidateTriple)> = ready
        .iter()
        .flat_map(|d| {
            triples.iter().filter(move |t| t.group_order == d.entry.group.order() as u64).map(move |t| (d, t))
        })
        .collect();
    let mut reports: Vec<TaskReport> =
        tasks.into_par_iter().map(|(d, t)| run_task(d, t, config, cache.as_ref())).collect();
    reports.sort_by(|a, b| {
        b.order
            .cmp(&a.order)
            .then_with(|| a.id.cmp(&b.id))
            .then_with(|| a.group.cmp(&b.group))
            .then_with(|| (&a.t1, &a.t2).cmp(&(&b.t1, &b.t2)))
    });

    let mut rows = Vec::new();
    for r in &reports {
        let Some(n) = r.n().filter(|&n| n > 0) else { continue };
        let def = &ready
            .iter()
            .find(|g| g.entry.definition.key == r.group)
            .expect("report refers to a realized group")
            .entry
            .definition;
        let a1 = alpha(&r.t1).expect("candidate type") as u64;
        let a2 = alpha(&r.t2).expect("candidate type") as u64;
        rows.push(ClassificationRow {
            g1: a2 + 1,
            g2: a1 + 1,
            group_name: def.name.clone(),
            order: r.order,
            id: r.id.unwrap_or(0),
            t1: r.t1.clone(),
            t2: r.t2.clone(),
            n,
            d: ClassificationRow::dimension(&r.t1, &r.t2),
        });
    }
    rows.sort_by(ClassificationRow::table_cmp);
    let skipped = reports.iter().filter(|r| r.n().is_none()).count();
    Ok(RunReport {
        total_n: rows.iter().map(|r| r.n).sum(),
        rows,
        tasks: reports,
        skipped,
        failures,
        filter,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn run_task(d: &GroupData, t: &CandidateTriple, config: &PipelineConfig, cache: Option<&TaskCache>) -> TaskReport {
    let start = Instant::now();
    let def = &d.entry.definition;
    let (t1, t2) = (&t.t1.ty, &t.t2.ty);
    let key = CacheKey::new(&def.key, d.fingerprint.clone(), def.to_string(), t1, t2, config.count.exchange);
    let outcome = match cache.and_then(|c| c.get(&key)) {
        Some(count) => TaskOutcome::Counted { count, cached: true },
        None => {
            let ctx = OrbitContext { group: &d.entry.group, classes: &d.classes, automorphisms: &d.automorphisms };
            match count_component_orbits(&ctx, t1, t2, &config.count) {
                Ok(count) => {
                    if let Some(c) = cache {
                        // a failed write only costs a recomputation later
                        let _ = c.put(&key, &count);
                    }
                    TaskOutcome::Counted { count, cached: false }
                }
                Err(e) => TaskOutcome::Skipped { reason: e.to_string() },
            }
        }
    };
    TaskReport {
        group: def.key.clone(),
        order: t.group_order,
        id: def.claimed_id.map(|(_, i)| i),
        t1: t1.clone(),
        t2: t2.clone(),
        seconds: start.elapsed().as_secs_f64(),
        outcome,
    }
}

fn filter_effect(filter: &TripleFilter, orders: &BTreeSet<u64>) -> FilterEffect {
    let with = candidate_triples_with(filter);
    let loose = TripleFilter { genus_bounds: None, ..filter.clone() };
    let without = candidate_triples_with(&loose);
    let kept: BTreeSet<&CandidateTriple> = with.iter().collect();
    FilterEffect {
        candidates: with.len(),
        candidates_without_bounds: without.len(),
        removed_with_catalog_group: without
            .iter()
            .filter(|t| !kept.contains(t) && orders.contains(&t.group_order))
            .map(|t| (t.group_order, t.t1.ty.clone(), t.t2.ty.clone()))
            .collect(),
    }
}
