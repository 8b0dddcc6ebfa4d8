//! Friedland entropy: the shift on the space of full orbits, where every
//! step may apply any generator.
//!
//! The doubling/tripling pair on the circle is the classical benchmark: the
//! orbit-space entropy is log(2+3) = log 5, attained at the Gibbs weights
//! (2/5, 3/5). The hyperbolic torus pair shows a tie between the two
//! single-block subsets and an exact coincidence certificate.
//!
//! Run with: cargo run --example friedland_circle

use zkent::family::{ActionKind, GeneratorFamily};
use zkent::friedland::certified_friedland;
use zkent::matrix::IntMatrix;
use zkent::spectral::{joint_spectrum, SpectralTolerances};

fn report(label: &str, family: &GeneratorFamily) {
    let spec = joint_spectrum(family, SpectralTolerances::default()).unwrap();
    let rep = certified_friedland(family, &spec).unwrap();
    println!("{label}");
    println!("  value  = {:.10}", rep.value);
    println!("  nu*    = {:?}", rep.maximizing_nu.probs());
    println!(
        "  status = {}",
        if rep.equality_certified {
            "equality (certified under hyperbolicity criterion)"
        } else {
            "upper bound (uncertified)"
        }
    );
    for sp in &rep.pressures {
        println!("    P({:?}) = {:.10}", sp.subset, sp.pressure);
    }
    for cert in &rep.coincidence {
        println!(
            "  det(A{} - A{}) = {} [{:?}]",
            cert.pair.0, cert.pair.1, cert.det_difference, cert.status
        );
    }
    println!("  Gibbs residual = {:.2e}\n", rep.consistency_residual);
}

fn main() {
    let double = IntMatrix::from_rows(&[vec![2]]).unwrap();
    let triple = IntMatrix::from_rows(&[vec![3]]).unwrap();
    let circle =
        GeneratorFamily::validate(vec![double, triple], ActionKind::Endomorphism).unwrap();
    report("circle maps x↦2x, x↦3x", &circle);

    let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
    let a_inv = a.inverse().unwrap();
    let torus = GeneratorFamily::validate(vec![a, a_inv], ActionKind::Invertible).unwrap();
    report("hyperbolic pair A, A⁻¹ on T²", &torus);

    // sanity: the circle value is log 5 on the nose
    let spec = joint_spectrum(&circle, SpectralTolerances::default()).unwrap();
    let rep = certified_friedland(&circle, &spec).unwrap();
    assert!((rep.value - 5.0f64.ln()).abs() < 1e-12);
    assert!((rep.maximizing_nu.prob(0) - 0.4).abs() < 1e-12);
}
