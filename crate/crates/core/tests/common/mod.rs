#![allow(dead_code)]

use qnn_core::dense::DenseMatrix;
use qnn_core::{rotation_matrix, CircuitSpec, Complex64, GateOp, StateVector, Weights};
use rand::Rng;

pub fn random_state<R: Rng>(num_qubits: usize, rng: &mut R) -> StateVector {
    let dim = 1 << num_qubits;
    let raw: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap()
}

pub fn random_weights<R: Rng>(n: usize, rng: &mut R) -> Weights {
    Weights::new((0..n).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()).unwrap()
}

/// Full `2^N × 2^N` matrix of the circuit, assembled op by op from
/// Kronecker products. Independent of the strided statevector kernels.
pub fn circuit_matrix(spec: &CircuitSpec, w: &Weights) -> DenseMatrix {
    let n = spec.num_qubits();
    let mut total = DenseMatrix::identity(1 << n);
    for op in spec.ops() {
        let m = match *op {
            GateOp::Rotation { generator, weight_index } => DenseMatrix::embed_single(
                n,
                generator.target,
                &rotation_matrix(generator.axis, w.as_slice()[weight_index], spec.dt()).unwrap(),
            ),
            GateOp::Fixed { gate, target } => DenseMatrix::embed_single(n, target, &gate.matrix()),
            GateOp::CNot { control, target } => DenseMatrix::cnot(n, control, target),
        };
        // Later ops multiply from the left.
        total = m.matmul(&total);
    }
    total
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `|a − b| ≤ max(rel·|b|, floor)`.
pub fn rel_close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= (rel * b.abs()).max(floor)
}
