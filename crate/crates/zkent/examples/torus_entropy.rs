//! Entropy of a random action on the 2-torus.
//!
//! Builds the commuting pair A and A⁻¹ with A = [[2,1],[1,1]], computes the
//! joint spectrum, and sweeps the entropy across distributions ν. For this
//! pair the closed form is |ν₁ − ν₂| · log((3+√5)/2), so the sweep doubles
//! as an end-to-end check.
//!
//! Run with: cargo run --example torus_entropy

use zkent::entropy::random_entropy;
use zkent::family::{ActionKind, Distribution, GeneratorFamily};
use zkent::matrix::IntMatrix;
use zkent::spectral::{joint_spectrum, SpectralTolerances};

fn main() {
    let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).expect("square");
    let a_inv = a.inverse().expect("A is unimodular");
    let family =
        GeneratorFamily::validate(vec![a, a_inv], ActionKind::Invertible).expect("commuting pair");

    let spectrum = joint_spectrum(&family, SpectralTolerances::default()).expect("hyperbolic");
    println!("spectrum: {} blocks, residual {:.2e}", spectrum.num_blocks(), spectrum.residual);
    for (j, block) in spectrum.blocks.iter().enumerate() {
        println!(
            "  V{} (dim {}): log-moduli {:?}",
            j + 1,
            block.block_dim,
            block.exponents
        );
    }

    let c = ((3.0 + 5.0f64.sqrt()) / 2.0).ln();
    println!("\n  nu1    entropy       |nu1-nu2|·log((3+√5)/2)");
    for step in 0..=10 {
        let p = step as f64 / 10.0;
        let nu = Distribution::validate(&[p, 1.0 - p], 2).unwrap();
        let report = random_entropy(&spectrum, &nu).unwrap();
        let closed_form = (2.0 * p - 1.0).abs() * c;
        println!("  {p:.1}    {:.10}  {closed_form:.10}", report.value);
        assert!((report.value - closed_form).abs() < 1e-12);
    }

    // a single generator reduces to the classical entropy: the sum of
    // positive log-moduli
    let single = GeneratorFamily::validate(
        vec![IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap()],
        ActionKind::Invertible,
    )
    .unwrap();
    let single_spec = joint_spectrum(&single, SpectralTolerances::default()).unwrap();
    let h = random_entropy(&single_spec, &Distribution::validate(&[1.0], 1).unwrap())
        .unwrap()
        .value;
    println!("\nsingle generator: h = {h:.10} (= log((3+√5)/2))");
    assert!((h - c).abs() < 1e-12);
}
