//! Joint spectral decompositions of commuting integer-matrix families.
//!
//! Three shapes of behavior: a pair that needs both generators to fully
//! split, a generator with non-orthogonal invariant lines, and a complex
//! eigenvalue pair that stays a 2-dimensional block.
//!
//! Run with: cargo run --example joint_spectrum

use zkent::family::{ActionKind, GeneratorFamily};
use zkent::matrix::IntMatrix;
use zkent::spectral::{joint_spectrum, spectrum_residual, SpectralTolerances};

fn show(label: &str, family: &GeneratorFamily) {
    let spec = joint_spectrum(family, SpectralTolerances::default()).expect("decomposable");
    println!("{label}: {} block(s), residual {:.2e}", spec.num_blocks(), spec.residual);
    for (j, block) in spec.blocks.iter().enumerate() {
        println!(
            "  V{} dim {}  exponents {:?}  spread {:.1e}",
            j + 1,
            block.block_dim,
            block.exponents,
            block.modulus_spread
        );
    }
    let residual = spectrum_residual(family, &spec).unwrap();
    assert!(residual <= 1e-8, "blocks must be invariant");
    let total: usize = spec.blocks.iter().map(|b| b.block_dim).sum();
    assert_eq!(total, family.dim(), "dimensions conserved");
    println!();
}

fn main() {
    // each generator alone leaves a 2-dimensional modulus cluster; only the
    // pair refines ℝ³ into three lines
    let g1 = IntMatrix::from_rows(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]).unwrap();
    let g2 = IntMatrix::from_rows(&[vec![5, 0, 0], vec![0, 7, 0], vec![0, 0, 7]]).unwrap();
    let pair = GeneratorFamily::validate(vec![g1, g2], ActionKind::Endomorphism).unwrap();
    show("mutual refinement", &pair);

    // invariant lines need not be orthogonal: e1 and (1,-1)/√2 here
    let shear = IntMatrix::from_rows(&[vec![2, 1], vec![0, 1]]).unwrap();
    let tri = GeneratorFamily::validate(vec![shear], ActionKind::Endomorphism).unwrap();
    show("non-orthogonal lines", &tri);

    // rotation by 90° scaled by 2: eigenvalues ±2i share a modulus, so the
    // plane stays one block with log-modulus log 2
    let rot = IntMatrix::from_rows(&[vec![0, -2], vec![2, 0]]).unwrap();
    let complex_pair = GeneratorFamily::validate(vec![rot], ActionKind::Endomorphism).unwrap();
    show("complex pair", &complex_pair);
}
