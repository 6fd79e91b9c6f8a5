//! Human-readable weight checkpoints (TOML).
//!
//! ```toml
//! format = "qnn-checkpoint/1"
//! num_qubits = 6
//! num_layers = 6
//! dt = 1.0
//! seed = 7
//! epoch = 12
//! weights = [0.0123, -0.0456, ...]
//! ```
//!
//! Floats are written in shortest round-trip form, so reloading a
//! checkpoint reproduces the weights bit for bit.

use std::fs;
use std::path::Path;

use qnn_core::{build_ansatz, CircuitSpec, Weights};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT: &str = "qnn-checkpoint/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format: String,
    pub num_qubits: usize,
    pub num_layers: usize,
    pub dt: f64,
    pub seed: u64,
    pub epoch: usize,
    pub weights: Vec<f64>,
}

impl Checkpoint {
    pub fn new(spec: &CircuitSpec, weights: &Weights, seed: u64, epoch: usize) -> Self {
        Self {
            format: FORMAT.to_string(),
            num_qubits: spec.num_qubits(),
            num_layers: spec.num_layers(),
            dt: spec.dt(),
            seed,
            epoch,
            weights: weights.as_slice().to_vec(),
        }
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("checkpoint fields always serialize")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let ck: Checkpoint = toml::from_str(text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if ck.format != FORMAT {
            return Err(Error::Checkpoint(format!("unknown format {:?}", ck.format)));
        }
        let spec = ck.spec()?;
        if ck.weights.len() != spec.num_params() {
            return Err(Error::Checkpoint(format!(
                "{} weights for a circuit with {} parameters",
                ck.weights.len(),
                spec.num_params()
            )));
        }
        Ok(ck)
    }

    pub fn spec(&self) -> Result<CircuitSpec> {
        Ok(build_ansatz(self.num_qubits, self.num_layers, self.dt)?)
    }

    pub fn weights(&self) -> Result<Weights> {
        Ok(Weights::new(self.weights.clone())?)
    }

    /// Errors unless the checkpoint was trained for the given dimensions.
    pub fn check_dimensions(&self, num_qubits: Option<usize>, num_layers: Option<usize>) -> Result<()> {
        if num_qubits.is_some_and(|q| q != self.num_qubits) || num_layers.is_some_and(|l| l != self.num_layers) {
            return Err(Error::Checkpoint(format!(
                "checkpoint is {} qubits × {} layers, requested {:?} × {:?}",
                self.num_qubits, self.num_layers, num_qubits, num_layers
            )));
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bitwise() {
        let spec = build_ansatz(3, 2, 0.7).unwrap();
        let values: Vec<f64> = (0..12).map(|i| (i as f64 * 0.731).sin() / 3.0 + 1e-17 * i as f64).collect();
        let ck = Checkpoint::new(&spec, &Weights::new(values.clone()).unwrap(), 42, 5);
        let back = Checkpoint::from_text(&ck.to_text()).unwrap();
        assert_eq!(back, ck);
        for (a, b) in back.weights.iter().zip(&values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.spec().unwrap(), spec);
    }

    #[test]
    fn rejects_corruption() {
        let spec = build_ansatz(2, 1, 1.0).unwrap();
        let text = Checkpoint::new(&spec, &Weights::zeros(4), 1, 0).to_text();
        assert!(Checkpoint::from_text(&text.replace("weights = [", "weights = [1.0, ")).is_err());
        assert!(Checkpoint::from_text(&text.replace("num_layers", "layers")).is_err());
        assert!(Checkpoint::from_text(&text[..text.len() / 2]).is_err());
        assert!(Checkpoint::from_text(&text.replace(FORMAT, "other/1")).is_err());
        let ck = Checkpoint::from_text(&text).unwrap();
        assert!(ck.check_dimensions(Some(2), Some(1)).is_ok());
        assert!(ck.check_dimensions(Some(3), None).is_err());
    }
}
