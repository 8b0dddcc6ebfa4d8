//! Family description files.
//!
//! One document describes one generator family: the dimension, the action
//! kind, named integer matrices, and optionally a distribution and a phase
//! space hint. Two encodings of the same schema are accepted: TOML for
//! hand-written files and JSON as the strict machine format. The extension
//! picks the parser (`.json` → JSON, anything else → TOML); parse errors
//! surface with line/column context.
//!
//! ```toml
//! dimension = 2
//! kind = "invertible"
//! distribution = [0.7, 0.3]   # top-level keys go before the tables
//!
//! [[generators]]
//! name = "A1"
//! rows = [[2, 1], [1, 1]]
//!
//! [[generators]]
//! name = "A2"
//! rows = [[1, -1], [-1, 2]]
//!
//! [phase_space]
//! type = "torus"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{
    ActionKind, Distribution, DistributionError, FamilyError, GeneratorFamily,
};
use crate::matrix::IntMatrix;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("file declares dimension {declared} but generator {index} is {found}×{found}")]
    DimensionMismatch {
        declared: usize,
        index: usize,
        found: usize,
    },
    #[error("phase space hint {hint} expects {expected} entries, found {found}")]
    PhaseSpaceArity {
        hint: &'static str,
        expected: usize,
        found: usize,
    },
}

/// Optional declaration of the phase space the generators act on, steering
/// which topological formulas apply.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PhaseSpace {
    /// The d-torus (default for integer-matrix families).
    Torus,
    /// Circle maps x ↦ p·x (mod 1) with the listed degrees, all |p| ≥ 2.
    CircleExpanding { degrees: Vec<i64> },
    /// Piecewise monotone interval maps with the listed branch counts.
    Interval { branches: Vec<u32> },
    /// A finite graph acted on by homeomorphisms.
    Graph,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: Option<String>,
    pub rows: Vec<Vec<i64>>,
}

/// The on-disk schema.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub dimension: usize,
    pub kind: ActionKind,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_space: Option<PhaseSpace>,
}

impl FamilyFile {
    pub fn load(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed: FamilyFile = if is_json {
            serde_json::from_str(&text).map_err(|e| InputError::Parse {
                path: path.display().to_string(),
                message: e.to_string(),
            })?
        } else {
            toml::from_str(&text).map_err(|e| InputError::Parse {
                path: path.display().to_string(),
                message: e.to_string(),
            })?
        };
        Ok(parsed)
    }

    /// Validates the matrices into a family, cross-checking the declared
    /// dimension and the arity of any phase-space hint.
    pub fn build_family(&self) -> Result<GeneratorFamily, InputError> {
        let mut matrices = Vec::with_capacity(self.generators.len());
        let mut names = Vec::with_capacity(self.generators.len());
        for (idx, entry) in self.generators.iter().enumerate() {
            let m = IntMatrix::from_rows(&entry.rows)
                .ok_or(FamilyError::NonSquare { index: idx + 1 })?;
            if m.dim() != self.dimension {
                return Err(InputError::DimensionMismatch {
                    declared: self.dimension,
                    index: idx + 1,
                    found: m.dim(),
                });
            }
            names.push(
                entry
                    .name
                    .clone()
                    .unwrap_or_else(|| format!("A{}", idx + 1)),
            );
            matrices.push(m);
        }
        let family = GeneratorFamily::validate_named(matrices, names, self.kind)?;
        if let Some(hint) = &self.phase_space {
            let k = family.len();
            match hint {
                PhaseSpace::CircleExpanding { degrees } if degrees.len() != k => {
                    return Err(InputError::PhaseSpaceArity {
                        hint: "circle_expanding",
                        expected: k,
                        found: degrees.len(),
                    });
                }
                PhaseSpace::Interval { branches } if branches.len() != k => {
                    return Err(InputError::PhaseSpaceArity {
                        hint: "interval",
                        expected: k,
                        found: branches.len(),
                    });
                }
                _ => {}
            }
        }
        Ok(family)
    }

    /// The file's distribution, validated, or the uniform one.
    pub fn distribution_or_uniform(&self, k: usize) -> Result<Distribution, InputError> {
        match &self.distribution {
            Some(v) => Ok(Distribution::validate(v, k)?),
            None => Ok(Distribution::uniform(k)),
        }
    }
}
