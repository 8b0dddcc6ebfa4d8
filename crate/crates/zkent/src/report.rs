//! Machine-readable report envelopes.
//!
//! Every CLI command can emit its result wrapped in a fixed envelope:
//! schema version, tool identity, the exact command and parameters, a digest
//! of the input file, and the result payload. Envelopes carry no timestamps
//! or host data, so identical inputs and parameters produce byte-identical
//! reports; entropy-like values are always in nats, with a `units` field
//! making that explicit.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Version of the report schema, bumped on breaking layout changes.
pub const REPORT_SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportEnvelope<T> {
    pub schema_version: String,
    pub tool: String,
    pub version: String,
    pub command: String,
    /// SHA-256 of the input file bytes, hex encoded.
    pub input_digest: String,
    /// Command parameters, in a fixed field order.
    pub parameters: serde_json::Value,
    /// Unit of every entropy-like value in `results`.
    pub units: String,
    pub results: T,
    pub warnings: Vec<String>,
}

impl<T: Serialize> ReportEnvelope<T> {
    pub fn new(
        command: &str,
        input_digest: String,
        parameters: serde_json::Value,
        results: T,
        warnings: Vec<String>,
    ) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION.to_string(),
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input_digest,
            parameters,
            units: "nats".to_string(),
            results,
            warnings,
        }
    }

    /// Pretty JSON with a trailing newline; the byte-stable output format.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
