//! SMO training and cross-validated grid search on the hyperparameter table.

use pqk::kernel::{Gamma, KernelKind, KernelSpec};
use pqk::svm::{grid_search, predict, smo_train, weighted_f1, Grid, SmoParams};

fn main() -> pqk::Result<()> {
    // two interleaved rings
    let x: Vec<Vec<f64>> = (0..60)
        .map(|i| {
            let t = i as f64 * 0.61;
            let r = if i % 2 == 0 { 1.0 } else { 2.2 };
            vec![r * t.cos(), r * t.sin()]
        })
        .collect();
    let y: Vec<f64> = (0..60).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();

    let full = Grid::full();
    println!("full grid: {} kernels x {} C x {} gamma = {} candidates", full.kernels.len(), full.c.len(), full.gamma.len(), full.len());

    let grid = Grid::new(
        KernelKind::ALL.to_vec(),
        vec![0.1, 1.0, 10.0, 100.0],
        vec![Gamma::Auto, Gamma::Scale, Gamma::Value(1.0), Gamma::Value(5.0)],
    )?;
    let result = grid_search(&x, &y, &grid, 5, 7)?;
    let best = result.best();
    println!("best: {} C={} gamma={} mean F1 {:.3} ± {:.3}", best.spec.kind, best.c, best.spec.gamma, best.mean, best.std);

    let model = smo_train(&x, &y, &best.spec, best.c, &SmoParams::default())?;
    println!("{} support vectors, train F1 {:.3}", model.support_indices.len(), weighted_f1(&y, &predict(&model, &x)?)?);
    let linear = smo_train(&x, &y, &KernelSpec::linear(), 1.0, &SmoParams::default())?;
    println!("linear kernel train F1 {:.3}", weighted_f1(&y, &predict(&linear, &x)?)?);
    Ok(())
}
