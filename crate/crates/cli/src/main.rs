use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use isoprod::catalog::Catalog;
use isoprod::classify::{
    compare_tables, exceptional_report, golden_rows, run_pipeline, write_csv, PipelineConfig, RunReport,
};
use isoprod::groups::{automorphism_group_capped, conjugacy_classes};
use isoprod::orbits::{merge_orbits, orbit_decompose, Action};
use isoprod::spherical::SystemSearch;
use isoprod::typesys::{candidate_triples_with, enumerate_admissible_types, GenusBounds, TripleFilter, TypeTuple};

#[derive(Parser)]
#[command(
    name = "isoprod",
    version,
    about = "Surfaces isogenous to a product with chi = 2: types, searches and the classification table"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the admissible types with their alpha values.
    Types,
    /// Print the candidate triples (order, T1, T2, g1, g2).
    Triples {
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, value_parser = parse_orders)]
        orders: Option<RangeInclusive<u64>>,
    },
    /// Count (or list) the spherical systems of a type in a catalog group.
    Search {
        group: String,
        #[arg(value_name = "TYPE")]
        ty: String,
        #[arg(long, default_value = "default")]
        catalog: String,
        /// Print every system.
        #[arg(long)]
        list: bool,
        /// Also split the systems into Hurwitz and Hurwitz+Aut orbits.
        #[arg(long)]
        orbits: bool,
    },
    /// Run the pipeline and write the classification table as CSV.
    Classify(RunArgs),
    /// Print the triples above order 2000 with their abelianization data.
    Exceptional {
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long)]
        json: bool,
    },
    /// Compare a table (computed, or read with --table) with the reference.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Compare this CSV instead of running the pipeline.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// List the catalog, or export it for an external CAS check.
    Catalog {
        #[arg(long, default_value = "default")]
        catalog: String,
        /// Emit GAP code defining `CATALOG` for tools/verify_catalog.g.
        #[arg(long)]
        gap: bool,
    },
}

#[derive(Args, Clone)]
struct FilterArgs {
    /// Skip the per-genus automorphism bounds (Hurwitz bound only).
    #[arg(long)]
    no_genus_bounds: bool,
    /// Genus-bound file replacing the bundled one.
    #[arg(long)]
    bounds: Option<PathBuf>,
}

impl FilterArgs {
    fn filter(&self) -> Result<TripleFilter> {
        if self.no_genus_bounds {
            return Ok(TripleFilter::hurwitz_only());
        }
        let bounds = match &self.bounds {
            Some(p) => GenusBounds::load(p).with_context(|| format!("reading {}", p.display()))?,
            None => GenusBounds::bundled(),
        };
        Ok(TripleFilter { hurwitz: true, genus_bounds: Some(bounds) })
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Catalog file, or `default` for the bundled one.
    #[arg(long, default_value = "default")]
    catalog: String,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON run report path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Directory for cached per-task counts.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Memory cap in GiB for one materialized set of systems.
    #[arg(long)]
    memory_cap: Option<f64>,
    /// Restrict to group orders `lo..hi` (inclusive).
    #[arg(long, value_parser = parse_orders)]
    orders: Option<RangeInclusive<u64>>,
    /// Also run the slow consistency checks: swapped-orientation bounds.
    #[arg(long)]
    slow_tests: bool,
    #[command(flatten)]
    filter: FilterArgs,
}

impl RunArgs {
    fn config(&self) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig {
            filter: self.filter.filter()?,
            orders: self.orders.clone(),
            jobs: self.jobs,
            cache_dir: self.cache.clone(),
            ..PipelineConfig::default()
        };
        if let Some(gib) = self.memory_cap {
            cfg = cfg.with_memory_cap_gib(gib);
        }
        cfg.count.retry_swapped = self.slow_tests;
        Ok(cfg)
    }

    fn run(&self) -> Result<RunReport> {
        let catalog = load_catalog(&self.catalog)?;
        let report = run_pipeline(&catalog, &self.config()?)?;
        for t in &report.tasks {
            if let isoprod::classify::TaskOutcome::Skipped { reason } = &t.outcome {
                eprintln!("skipped {} {} {}: {reason}", t.group, t.t1, t.t2);
            }
        }
        for f in &report.failures {
            eprintln!("group failed: {f}");
        }
        if let Some(p) = &self.report {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            serde_json::to_writer_pretty(BufWriter::new(f), &report)?;
        }
        Ok(report)
    }
}

fn parse_orders(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got `{s}`"))?;
    let lo = if lo.is_empty() { 0 } else { lo.parse().map_err(|_| format!("bad lower bound `{lo}`"))? };
    let hi = if hi.is_empty() {
        u64::MAX
    } else {
        hi.trim_start_matches('=').parse().map_err(|_| format!("bad upper bound `{hi}`"))?
    };
    Ok(lo..=hi)
}

fn load_catalog(source: &str) -> Result<Catalog> {
    if source == "default" {
        Ok(Catalog::bundled())
    } else {
        Catalog::load(source.as_ref()).with_context(|| format!("loading catalog {source}"))
    }
}

fn write_table(report: &RunReport, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => write_csv(&report.rows, File::create(p).with_context(|| format!("creating {}", p.display()))?)?,
        None => write_csv(&report.rows, io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Types => {
            for t in enumerate_admissible_types() {
                writeln!(out, "{t}")?;
            }
        }
        Command::Triples { filter, orders } => {
            for t in candidate_triples_with(&filter.filter()?) {
                if orders.as_ref().is_none_or(|r| r.contains(&t.group_order)) {
                    writeln!(out, "{}\t{}\t{}\t{}\t{}", t.group_order, t.t1.ty, t.t2.ty, t.g1(), t.g2())?;
                }
            }
        }
        Command::Search { group, ty, catalog, list, orbits } => {
            let catalog = load_catalog(&catalog)?;
            let def = catalog.lookup(&group).with_context(|| format!("no catalog group matches `{group}`"))?;
            let entry = catalog.realize(&def.key.clone())?;
            let t: TypeTuple = ty.parse()?;
            let g = &entry.group;
            let cc = conjugacy_classes(g);
            let search = SystemSearch::new(g, &cc, &t);
            if list {
                for s in search.iter() {
                    writeln!(out, "{s:?}")?;
                }
            }
            if orbits {
                let set = search.collect(usize::MAX)?;
                let hur = orbit_decompose(g, &set, Action::BraidOnly)?;
                let auts = automorphism_group_capped(g, g.order().max(512))?;
                let both = merge_orbits(&set, &hur, &auts, true)?;
                writeln!(
                    out,
                    "systems {}  hurwitz orbits {}  hurwitz+aut orbits {}",
                    set.len(),
                    hur.len(),
                    both.len()
                )?;
            } else {
                writeln!(out, "{} systems of type {t} in {} {}", search.count(), def.name, def.label())?;
            }
        }
        Command::Classify(args) => {
            let report = args.run()?;
            write_table(&report, &args.out)?;
            eprintln!(
                "{} rows, total n = {}, {} tasks ({} skipped) in {:.1}s",
                report.rows.len(),
                report.total_n,
                report.tasks.len(),
                report.skipped,
                report.seconds
            );
            if report.skipped > 0 || !report.failures.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Exceptional { filter, json } => {
            let report = exceptional_report(&filter.filter()?);
            if json {
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            } else {
                write!(out, "{report}")?;
                writeln!(out, "{} triples", report.rows.len())?;
            }
        }
        Command::Verify { run, table } => {
            let rows = match &table {
                Some(p) => {
                    isoprod::classify::read_csv(File::open(p).with_context(|| format!("opening {}", p.display()))?)?
                }
                None => {
                    let report = run.run()?;
                    if run.out.is_some() {
                        write_table(&report, &run.out)?;
                    }
                    report.rows
                }
            };
            let diff = compare_tables(&golden_rows(), &rows);
            if diff.is_empty() {
                let total: u64 = rows.iter().map(|r| r.n).sum();
                writeln!(out, "ok: {} rows match the reference table, total n = {total}", rows.len())?;
            } else {
                for d in &diff {
                    writeln!(out, "{d}")?;
                }
                writeln!(out, "{} differences", diff.len())?;
                return Ok(ExitCode::from(2));
            }
        }
        Command::Catalog { catalog, gap } => {
            let catalog = load_catalog(&catalog)?;
            if gap {
                write_gap_export(&catalog, &mut out)?;
            } else {
                for d in catalog.definitions() {
                    let id = d.claimed_id.map(|(a, b)| format!("<{a},{b}>")).unwrap_or_default();
                    writeln!(out, "{:<12} {:<24} {:<10} {}", d.key, d.name, id, d.fingerprint)?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Regular permutation representations of the identified catalog groups.
fn write_gap_export(catalog: &Catalog, out: &mut impl Write) -> Result<()> {
    writeln!(out, "CATALOG := [];")?;
    for g in catalog.realize_all()? {
        let Some((order, id)) = g.definition.claimed_id else { continue };
        let perms = g.group.regular_permutations();
        if perms.is_empty() {
            bail!("{} has no generators", g.definition.key);
        }
        let gens: Vec<String> = perms
            .iter()
            .map(|p| {
                let imgs: Vec<String> = p.iter().map(u32::to_string).collect();
                format!("PermList([{}])", imgs.join(","))
            })
            .collect();
        writeln!(
            out,
            "Add(CATALOG, rec(key := \"{}\", id := [{order},{id}], group := Group([{}])));",
            g.definition.key,
            gens.join(", ")
        )?;
    }
    Ok(())
}
