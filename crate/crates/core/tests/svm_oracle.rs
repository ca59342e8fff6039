mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pqk::kernel::{Gamma, KernelKind, KernelSpec};
use pqk::svm::{dual_objective, kkt_violation, predict, smo_train, solve_dual, weighted_f1, SmoParams};

fn problem(rng: &mut ChaCha8Rng) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = rng.random_range(4..=12);
    let d = rng.random_range(1..=4);
    let x: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let mut y: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    y[0] = 1.0;
    y[1] = -1.0;
    (x, y)
}

#[test]
fn smo_matches_projected_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..24 {
        let (x, y) = problem(&mut rng);
        let kind = KernelKind::ALL[trial % 4];
        let spec = KernelSpec::new(kind, Gamma::Value(rng.random_range(0.2..1.5)));
        let c = [0.1, 1.0, 10.0][trial % 3];
        let k = spec.resolve(&x).unwrap().gram(&x).unwrap();
        let sol = solve_dual(k.matrix(), &y, c, &SmoParams::default()).unwrap();
        let ours = dual_objective(k.matrix(), &y, &sol.alpha);
        let oracle = common::qp_oracle(k.matrix(), &y, c, 20_000);
        let rel = (ours - oracle) / oracle.abs().max(1e-12);
        // a nonconvex sigmoid dual may admit better local optima than the oracle finds
        assert!(rel.abs() < 1e-4 || (kind == KernelKind::Sigmoid && ours <= oracle), "trial {trial} {kind}: {ours} vs {oracle}");
        assert!(kkt_violation(k.matrix(), &y, &sol, c) <= 1e-3);
    }
}

#[test]
fn separable_data_fits_at_largest_c() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let w = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let x: Vec<Vec<f64>> = (0..30)
            .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .filter(|p: &Vec<f64>| (p[0] * w[0] + p[1] * w[1]).abs() > 0.05)
            .collect();
        let y: Vec<f64> = x.iter().map(|p| if p[0] * w[0] + p[1] * w[1] > 0.0 { 1.0 } else { -1.0 }).collect();
        if !(y.contains(&1.0) && y.contains(&-1.0)) {
            continue;
        }
        let m = smo_train(&x, &y, &KernelSpec::linear(), 2000.0, &SmoParams::default()).unwrap();
        assert_eq!(weighted_f1(&y, &predict(&m, &x).unwrap()).unwrap(), 1.0);
    }
}

#[test]
fn duplicated_rows_keep_predictions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (x, y) = loop {
        let (x, y) = problem(&mut rng);
        if x.len() <= 8 {
            break (x, y);
        }
    };
    let spec = KernelSpec::rbf(Gamma::Value(1.0));
    let single = smo_train(&x, &y, &spec, 1.0, &SmoParams::default()).unwrap();
    let x2: Vec<Vec<f64>> = x.iter().chain(&x).cloned().collect();
    let y2: Vec<f64> = y.iter().chain(&y).copied().collect();
    // two copies at C/2 solve the same problem as one copy at C
    let double = smo_train(&x2, &y2, &spec, 0.5, &SmoParams { tol: 1e-8, ..Default::default() }).unwrap();
    let single_tight = smo_train(&x, &y, &spec, 1.0, &SmoParams { tol: 1e-8, ..Default::default() }).unwrap();
    let probe: Vec<Vec<f64>> = (0..50)
        .map(|i| (0..x[0].len()).map(|j| ((i * 7 + j * 3) as f64 * 0.37).sin()).collect())
        .collect();
    let a = single_tight.decision_function(&probe).unwrap();
    let b = double.decision_function(&probe).unwrap();
    for (fa, fb) in a.iter().zip(&b) {
        assert!((fa - fb).abs() < 1e-5, "{fa} vs {fb}");
    }
    assert_eq!(predict(&single, &x).unwrap().len(), x.len());
}
