//! Brute-force verification of the closed formulas.
//!
//! Each formula is the n → ∞ limit of a directly computable finite-n
//! functional. This example runs all three oracles on their benchmark
//! families and prints the convergence toward the formula values, including
//! the finite-n offsets the functionals are known to carry (≈1.4c/n for the
//! running-maximum functional, |log ε|/n for the separated-count one).
//!
//! Run with: cargo run --release --example verify_oracles

use zkent::entropy::random_entropy;
use zkent::family::{ActionKind, Distribution, GeneratorFamily};
use zkent::matrix::IntMatrix;
use zkent::oracle::{block_word_oracle, circle_cover_oracle, singular_value_oracle, OracleMode};
use zkent::spectral::{joint_spectrum, SpectralTolerances};
use zkent::topo::expanding_entropy;

fn main() {
    let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
    let a_inv = a.inverse().unwrap();
    let family = GeneratorFamily::validate(vec![a, a_inv], ActionKind::Invertible).unwrap();
    let spectrum = joint_spectrum(&family, SpectralTolerances::default()).unwrap();
    let nu = Distribution::validate(&[0.7, 0.3], 2).unwrap();
    let formula = random_entropy(&spectrum, &nu).unwrap().value;

    println!("block running-max oracle vs formula {formula:.10}");
    println!("  n    estimate        gap         gap·n");
    for n in [6usize, 10, 14, 20, 24] {
        let est = block_word_oracle(&spectrum, &nu, n, OracleMode::Exact).unwrap();
        let gap = (est.estimate - formula).abs();
        println!("  {n:<4} {:.10}  {gap:.6}  {:.3}", est.estimate, gap * n as f64);
    }

    println!("\nsingular-value oracle (exact integer products, seeded)");
    let est = singular_value_oracle(&family, &nu, 400, 2000, 2024).unwrap();
    println!(
        "  n=400, 2000 samples: estimate {:.10} ± {:.1e}, gap {:.6}",
        est.estimate,
        est.std_error.unwrap(),
        (est.estimate - formula).abs()
    );
    assert!((est.estimate - formula).abs() < 0.02);

    println!("\ncircle separated-count oracle, degrees (2,3), ε = 0.01");
    let half = Distribution::uniform(2);
    let target = expanding_entropy(&[2, 3], &half).unwrap();
    println!("  formula: {target:.10}; the count carries a |log ε|/n offset");
    for n in [12usize, 18, 24] {
        let est = circle_cover_oracle(&[2, 3], &half, n, 0.01, OracleMode::Exact).unwrap();
        let gap = (est.estimate - target).abs();
        let predicted = (1.0f64 / 0.01).ln() / n as f64;
        println!(
            "  n={n:<3} estimate {:.10}  gap {gap:.6}  predicted offset {predicted:.6}",
            est.estimate
        );
    }
    let mc = circle_cover_oracle(
        &[2, 3],
        &half,
        400,
        0.01,
        OracleMode::MonteCarlo {
            samples: 2000,
            seed: 7,
        },
    )
    .unwrap();
    println!(
        "  n=400 (Monte Carlo): estimate {:.10}, gap {:.6}",
        mc.estimate,
        (mc.estimate - target).abs()
    );
    assert!((mc.estimate - target).abs() < 0.02);
}
