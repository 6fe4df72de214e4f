use anyhow::{Context, Result};
use curclust::ingest::{save_labels, save_matrix};
use curclust::{generate_union, rng, SyntheticConfig};

use crate::SynthArgs;

pub fn run(args: &SynthArgs) -> Result<()> {
    let cfg = SyntheticConfig {
        ambient_dim: args.ambient,
        subspace_dims: args.dims.clone(),
        points_per_subspace: args.points.clone(),
        noise_sigma: args.sigma,
    };
    let ds = generate_union(&cfg, &mut rng::from_seed(args.seed))?;

    let mut matrix_path = args.out_prefix.clone().into_os_string();
    matrix_path.push(".csv");
    let mut labels_path = args.out_prefix.clone().into_os_string();
    labels_path.push(".labels");

    save_matrix(&matrix_path, &ds.data).context("writing matrix")?;
    save_labels(&labels_path, &ds.labels).context("writing labels")?;
    println!(
        "wrote {}x{} matrix to {} and labels to {}",
        ds.data.rows(),
        ds.data.cols(),
        matrix_path.to_string_lossy(),
        labels_path.to_string_lossy()
    );
    Ok(())
}
