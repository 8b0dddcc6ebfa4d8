//! # zkent
//!
//! Entropies of i.i.d. random actions generated by commuting maps.
//!
//! A family of k pairwise-commuting maps, composed in random order with an
//! i.i.d. law ν, forms a random action. For the algebraic cases where the
//! entropy theory is fully computable — commuting integer matrices on tori,
//! expanding circle maps, piecewise monotone interval maps — this crate
//! evaluates the closed formulas exactly and verifies them against
//! independent brute-force oracles:
//!
//! * **Exact core** ([`matrix`], [`family`]): arbitrary-precision integer
//!   matrices, family validation (commutativity, determinants) and word
//!   products, all in exact arithmetic.
//! * **Joint spectrum** ([`spectral`]): the common invariant block
//!   decomposition on which every generator has one eigenvalue modulus,
//!   computed by iterative Schur-based refinement and validated through an
//!   invariance residual.
//! * **Entropy** ([`entropy`]): the subset-max entropy formula for the
//!   random action, the generator-mixture bound, and extremal distributions
//!   over the simplex (vertex scan and an epigraph LP).
//! * **Friedland entropy** ([`friedland`]): the orbit-space shift entropy of
//!   the deterministic action via subset pressures, Gibbs maximizing
//!   distributions, and exact coincidence certificates.
//! * **Topological bounds** ([`topo`]): Lipschitz, C¹, expanding-degree,
//!   circle-monotone and interval-branch formulas.
//! * **Oracles** ([`oracle`]): word enumeration of Birkhoff running maxima,
//!   singular values of exact integer products, and exact separated-set
//!   counts, for finite-n verification of every formula.
//!
//! ## Quick start
//!
//! ```rust
//! use zkent::family::{ActionKind, Distribution, GeneratorFamily};
//! use zkent::matrix::IntMatrix;
//! use zkent::spectral::{joint_spectrum, SpectralTolerances};
//! use zkent::entropy::random_entropy;
//!
//! // the hyperbolic pair A and A⁻¹ on the 2-torus
//! let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
//! let b = a.inverse().unwrap();
//! let family = GeneratorFamily::validate(vec![a, b], ActionKind::Invertible).unwrap();
//!
//! let spectrum = joint_spectrum(&family, SpectralTolerances::default()).unwrap();
//! let nu = Distribution::validate(&[0.7, 0.3], 2).unwrap();
//! let report = random_entropy(&spectrum, &nu).unwrap();
//!
//! // closed form: |ν₁ − ν₂| · log((3+√5)/2)
//! let expected = 0.4 * ((3.0 + 5.0f64.sqrt()) / 2.0).ln();
//! assert!((report.value - expected).abs() < 1e-12);
//! ```
//!
//! The `examples/` directory has one runnable program per capability
//! (`cargo run --example torus_entropy`, …), and the `zkent` binary exposes
//! the same operations as subcommands over family description files.
//!
//! ## Conventions
//!
//! Entropies are in nats. Spectral data stores log-moduli (Lyapunov
//! exponents), not the moduli themselves. Distributions live on the
//! probability simplex Σνᵢ = 1, νᵢ ≥ 0; inputs off the simplex are rejected,
//! never renormalized.

pub mod entropy;
pub mod family;
pub mod friedland;
pub mod input;
pub mod matrix;
pub mod oracle;
pub mod report;
mod schur;
mod simplex;
pub mod spectral;
pub mod topo;

pub use family::{ActionKind, Distribution, GeneratorFamily, Word};
pub use matrix::IntMatrix;
pub use spectral::{joint_spectrum, SpectralTolerances, Spectrum};
