use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// JSON report written to standard output by every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    /// SHA-256 of the compact JSON of `inputs`.
    pub inputs_digest: String,
    pub seed: Option<u64>,
    pub results: Value,
    pub diagnostics: Vec<String>,
    pub seconds: f64,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, seed: Option<u64>) -> Self {
        let inputs_digest = digest(&inputs);
        Self { command: command.into(), inputs, inputs_digest, seed, results: Value::Null, diagnostics: Vec::new(), seconds: 0.0 }
    }
}

pub fn digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("JSON values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn digest_tracks_inputs() {
        let a = digest(&json!({"n": 64, "seed": 0}));
        assert_eq!(a.len(), 64);
        assert_eq!(a, digest(&json!({"n": 64, "seed": 0})));
        assert_ne!(a, digest(&json!({"n": 64, "seed": 1})));
        // Reference values from coreutils `sha256sum`.
        assert_eq!(digest(&json!("")), "12ae32cb1ec02d01eda3581b127c1fee3b0dc53572ed6baf239721a03d82e126");
        assert_eq!(digest(&json!({"n": 64})), "59463b5b734b8fd57991beff973f24278cbf0a77b2d81edaeb9dd2b4fa0e1d2c");
    }
}
