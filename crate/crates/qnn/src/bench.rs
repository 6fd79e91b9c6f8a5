//! Simulator throughput and epoch timing.

use std::time::Instant;

use qnn_core::loss::{GradEngine, LossKind};
use qnn_core::{build_ansatz, encode_label, rotation_matrix, Axis, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::data::EncodedSample;
use crate::error::Result;
use crate::trainer::{train, TrainConfig};

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub gate_qubits: usize,
    pub amplitudes_per_second: f64,
    pub epoch_qubits: usize,
    pub epoch_layers: usize,
    pub epoch_samples: usize,
    pub grad_engine: String,
    pub seconds_per_epoch: f64,
}

/// Applies rotations to a `gate_qubits` register for at least `min_secs`.
pub fn gate_throughput(gate_qubits: usize, min_secs: f64) -> Result<f64> {
    let mut state = StateVector::zero(gate_qubits)?;
    let u = rotation_matrix(Axis::X, 0.37, 1.0)?;
    let started = Instant::now();
    let mut applied = 0usize;
    while started.elapsed().as_secs_f64() < min_secs || applied == 0 {
        for q in 0..gate_qubits {
            state.apply_single_qubit(q, &u)?;
        }
        applied += gate_qubits;
    }
    Ok((applied * state.dim()) as f64 / started.elapsed().as_secs_f64())
}

/// One training epoch on random encoded inputs.
pub fn epoch_seconds(
    num_qubits: usize,
    num_layers: usize,
    samples: usize,
    engine: GradEngine,
    loss: LossKind,
) -> Result<f64> {
    let spec = build_ansatz(num_qubits, num_layers, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let data = (0..samples)
        .map(|i| {
            let raw: Vec<f64> = (0..1usize << num_qubits).map(|_| rng.gen_range(0.0..1.0)).collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            let state = StateVector::from_amplitudes(raw.iter().map(|x| (x / norm).into()).collect())?;
            Ok(EncodedSample { state, label: encode_label(i % 10, num_qubits)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let config = TrainConfig { epochs: 1, grad_engine: engine, loss, ..Default::default() };
    let started = Instant::now();
    train(&spec, &data, &[], &config, |_, _, _| Ok(()))?;
    Ok(started.elapsed().as_secs_f64())
}
