//! The topological-entropy sandwich for random actions.
//!
//! Measure-theoretic entropy from the spectrum is the lower bound; Lipschitz
//! and C¹ norms give upper bounds; for expanding maps the degree formula is
//! exact and pinches the sandwich shut.
//!
//! Run with: cargo run --example topological_bounds

use zkent::entropy::random_entropy;
use zkent::family::{ActionKind, Distribution, GeneratorFamily};
use zkent::matrix::IntMatrix;
use zkent::spectral::{joint_spectrum, SpectralTolerances};
use zkent::topo::{expanding_entropy, family_constants, interval_bound, smooth_bound};

fn main() {
    // hyperbolic torus pair: strict inequality between lower and upper
    let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
    let a_inv = a.inverse().unwrap();
    let torus = GeneratorFamily::validate(vec![a, a_inv], ActionKind::Invertible).unwrap();
    let nu = Distribution::validate(&[0.7, 0.3], 2).unwrap();
    let spec = joint_spectrum(&torus, SpectralTolerances::default()).unwrap();
    let lower = random_entropy(&spec, &nu).unwrap().value;
    let constants = family_constants(&torus);
    let upper = smooth_bound(&constants.opnorms, torus.dim(), &nu).unwrap();
    println!("torus pair:   {lower:.10} ≤ h(f) ≤ {upper:.10}");
    assert!(lower <= upper + 1e-9);

    // expanding endomorphisms: lower bound and degree formula coincide
    let d2 = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
    let d3 = IntMatrix::from_rows(&[vec![3, 0], vec![0, 2]]).unwrap();
    let diag = GeneratorFamily::validate(vec![d2, d3], ActionKind::Endomorphism).unwrap();
    let half = Distribution::uniform(2);
    let diag_spec = joint_spectrum(&diag, SpectralTolerances::default()).unwrap();
    let diag_lower = random_entropy(&diag_spec, &half).unwrap().value;
    let degrees: Vec<i64> = [6i64, 6].to_vec(); // det of each generator
    let exact = expanding_entropy(&degrees, &half).unwrap();
    println!("diag family:  h(f) = {exact:.10} (degree formula; lower gives {diag_lower:.10})");
    assert!((exact - diag_lower).abs() < 1e-12);

    // circle maps through their degrees
    let circle = expanding_entropy(&[2, 3], &half).unwrap();
    println!("circle (2,3): h(f) = {circle:.10} = log √6");
    assert!((circle - 6.0f64.sqrt().ln()).abs() < 1e-12);

    // piecewise monotone interval maps: branch-count upper bound
    let tents = interval_bound(&[2, 3], &half).unwrap();
    println!("interval:     h(f) ≤ {tents:.10} (branch counts 2 and 3)");
}
