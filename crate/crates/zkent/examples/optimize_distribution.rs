//! Extremizing the entropy over the choice of distribution ν.
//!
//! The entropy is convex piecewise-linear in ν: its maximum sits at a simplex
//! vertex (the best single generator), its minimum comes out of a small
//! epigraph LP. A dense grid search cross-checks both.
//!
//! Run with: cargo run --example optimize_distribution

use zkent::entropy::{extremal_distribution, random_entropy, OptimizeSense};
use zkent::family::{ActionKind, Distribution, GeneratorFamily};
use zkent::matrix::IntMatrix;
use zkent::spectral::{joint_spectrum, SpectralTolerances};

fn main() {
    let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
    let a_inv = a.inverse().unwrap();
    let family = GeneratorFamily::validate(vec![a, a_inv], ActionKind::Invertible).unwrap();
    let spectrum = joint_spectrum(&family, SpectralTolerances::default()).unwrap();

    let (nu_max, h_max) = extremal_distribution(&spectrum, OptimizeSense::Maximize);
    let (nu_min, h_min) = extremal_distribution(&spectrum, OptimizeSense::Minimize);
    println!("maximum: h = {h_max:.10} at nu = {:?}", nu_max.probs());
    println!("minimum: h = {h_min:.10} at nu = {:?}", nu_min.probs());

    // grid cross-check at resolution 1/200
    let mut grid_max = f64::NEG_INFINITY;
    let mut grid_min = f64::INFINITY;
    for t in 0..=200 {
        let p = t as f64 / 200.0;
        let nu = Distribution::validate(&[p, 1.0 - p], 2).unwrap();
        let h = random_entropy(&spectrum, &nu).unwrap().value;
        grid_max = grid_max.max(h);
        grid_min = grid_min.min(h);
    }
    println!("grid:    max = {grid_max:.10}, min = {grid_min:.10}");
    assert!((h_max - grid_max).abs() < 1e-6);
    assert!((h_min - grid_min).abs() < 1e-6);

    // a case where the minimum is interior but nonzero is impossible for a
    // convex max of linear pieces on the simplex boundary alone; a three
    // generator family shows a genuinely interior LP solution
    let d1 = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
    let d2 = IntMatrix::from_rows(&[vec![1, 0], vec![0, 3]]).unwrap();
    let d3 = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
    let diag = GeneratorFamily::validate(vec![d1, d2, d3], ActionKind::Endomorphism).unwrap();
    let diag_spec = joint_spectrum(&diag, SpectralTolerances::default()).unwrap();
    let (nu3, h3) = extremal_distribution(&diag_spec, OptimizeSense::Minimize);
    println!("\nthree generators: min h = {h3:.10} at nu = {:?}", nu3.probs());
    // the identity generator absorbs all mass: entropy 0
    assert!(h3.abs() < 1e-9);
}
