use std::fmt::Write as _;
use std::fs;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use curclust::ingest::{load_manifest, ManifestEntry};
use curclust::rng::derive_seed;
use curclust::{clustering_error, rcur, summarize, Error, Kappa, LabelVector, SamplingMethod};
use log::{info, warn};
use rayon::prelude::*;

use crate::cluster::config;
use crate::BenchmarkArgs;

pub const HEADER: &str = "category,sampling,kappa,mean,median,std,mean_time_s";

/// Mean error and run times of one manifest entry for one grid cell.
struct EntryResult {
    mean_error: f64,
    times: Vec<f64>,
}

fn run_entry(
    args: &BenchmarkArgs,
    index: usize,
    entry: &ManifestEntry,
    method: SamplingMethod,
    kappa: Kappa,
) -> Result<EntryResult> {
    let (data, truth) = entry.load()?;
    let mut errors = Vec::with_capacity(args.trials_outer);
    let mut times = Vec::with_capacity(args.trials_outer);
    for outer in 0..args.trials_outer {
        let cfg = config(&args.rcur, entry.clusters, entry.r_min, entry.r_max)
            .with_sampling(method)
            .with_kappa(kappa)
            .with_seed(derive_seed(args.rcur.seed, &[index as u64, outer as u64]));
        let start = Instant::now();
        let labels = match rcur(&data, &cfg) {
            Ok(outcome) => outcome.labels,
            // scored as a single cluster so one bad run does not abort the sweep
            Err(e @ Error::DegenerateCost { .. }) => {
                warn!("{} ({method}, kappa={kappa}, run {outer}): {e}", entry.matrix_path.display());
                LabelVector(vec![0; data.cols()])
            }
            Err(e) => {
                return Err(e).with_context(|| {
                    format!("{} ({method}, kappa={kappa})", entry.matrix_path.display())
                })
            }
        };
        times.push(start.elapsed().as_secs_f64());
        errors.push(clustering_error(&labels, &truth)?);
    }
    let mean_error = errors.iter().sum::<f64>() / errors.len() as f64;
    info!(
        "{} [{}] {method} kappa={kappa}: mean error {mean_error:.2}%",
        entry.matrix_path.display(),
        entry.category
    );
    Ok(EntryResult { mean_error, times })
}

pub fn run(args: &BenchmarkArgs) -> Result<()> {
    let manifest = load_manifest(&args.manifest)?;
    ensure!(!manifest.is_empty(), "manifest {} has no entries", args.manifest.display());
    ensure!(args.trials_outer > 0, "--trials-outer must be positive");
    ensure!(args.jobs > 0, "--jobs must be positive");

    let mut categories: Vec<&str> = Vec::new();
    for e in &manifest.entries {
        if !categories.contains(&e.category.as_str()) {
            categories.push(&e.category);
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .context("building worker pool")?;

    let mut report = String::from(HEADER);
    report.push('\n');
    for &method in &args.sampling {
        for &kappa in &args.kappa {
            let results: Vec<EntryResult> = pool.install(|| {
                manifest
                    .entries
                    .par_iter()
                    .enumerate()
                    .map(|(i, e)| run_entry(args, i, e, method, kappa))
                    .collect::<Result<_>>()
            })?;
            for &category in &categories {
                let (errors, times): (Vec<f64>, Vec<Vec<f64>>) = manifest
                    .entries
                    .iter()
                    .zip(&results)
                    .filter(|(e, _)| e.category == category)
                    .map(|(_, r)| (r.mean_error, r.times.clone()))
                    .unzip();
                let times: Vec<f64> = times.into_iter().flatten().collect();
                let stats = summarize(&errors, &times)?;
                writeln!(
                    report,
                    "{category},{method},{kappa},{:.2},{:.2},{:.2},{:.4}",
                    stats.mean, stats.median, stats.stddev, stats.mean_time
                )?;
            }
        }
    }
    fs::write(&args.out, &report).with_context(|| format!("writing {}", args.out.display()))?;
    print!("{report}");
    Ok(())
}
