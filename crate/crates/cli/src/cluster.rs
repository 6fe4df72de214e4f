use anyhow::{ensure, Context, Result};
use curclust::ingest::{load_labels, load_matrix, save_labels};
use curclust::{clustering_error, rcur, RcurConfig};

use crate::{ClusterArgs, RcurArgs};

pub fn config(args: &RcurArgs, clusters: usize, r_min: usize, r_max: usize) -> RcurConfig {
    let mut cfg = RcurConfig::new(clusters, r_min, r_max)
        .with_trials(args.trials)
        .with_seed(args.seed);
    cfg.tau = args.tau;
    cfg.power = args.power;
    cfg.replacement = args.replacement;
    cfg
}

pub fn run(args: &ClusterArgs) -> Result<()> {
    let data = load_matrix(&args.matrix)?;
    let truth = args.labels.as_ref().map(load_labels).transpose()?;
    if let Some(truth) = &truth {
        ensure!(
            truth.len() == data.cols(),
            "{} labels for {} data columns",
            truth.len(),
            data.cols()
        );
    }

    let mut cfg = config(&args.rcur, args.clusters, args.rmin, args.rmax).with_kappa(args.kappa);
    cfg.col_sampling = args.sampling;
    cfg.row_sampling = args.row_sampling.unwrap_or(args.sampling);

    let outcome = rcur(&data, &cfg).context("clustering failed")?;

    println!("selected rank: {}", outcome.best_rank);
    println!("rank,cost");
    for c in &outcome.costs.per_rank {
        println!("{},{}", c.rank, c.cost);
    }
    if let Some(truth) = &truth {
        println!(
            "clustering error: {:.2}%",
            clustering_error(&outcome.labels, truth)?
        );
    }
    if let Some(out) = &args.out {
        save_labels(out, &outcome.labels)?;
    }
    Ok(())
}
