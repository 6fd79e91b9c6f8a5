//! The layered ansatz and its forward evolution `N̂|ψ⟩`.
//!
//! Each layer applies `Rx` then `Ry` to every qubit in ascending order,
//! followed by the CNOT ring `q → (q+1) mod N`. Ops act on the ket in list
//! order: the first op in [`CircuitSpec::ops`] is applied first.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gates::{rotation_unchecked, Axis, GateOp, PauliGenerator};
use crate::state::StateVector;

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    num_qubits: usize,
    num_layers: usize,
    dt: f64,
    ops: Vec<GateOp>,
    /// Position in `ops` of the rotation driven by each weight.
    param_ops: Vec<usize>,
}

/// Builds the `num_layers`-layer Rx/Ry + CNOT-ring ansatz.
pub fn build_ansatz(num_qubits: usize, num_layers: usize, dt: f64) -> Result<CircuitSpec> {
    if num_qubits < 2 {
        return Err(Error::InvalidArgument("ansatz needs at least 2 qubits"));
    }
    if num_layers == 0 {
        return Err(Error::InvalidArgument("ansatz needs at least 1 layer"));
    }
    let mut ops = Vec::with_capacity(num_layers * 3 * num_qubits);
    let mut weight_index = 0;
    for _ in 0..num_layers {
        for target in 0..num_qubits {
            for axis in [Axis::X, Axis::Y] {
                ops.push(GateOp::Rotation { generator: PauliGenerator { axis, target }, weight_index });
                weight_index += 1;
            }
        }
        for q in 0..num_qubits {
            ops.push(GateOp::CNot { control: q, target: (q + 1) % num_qubits });
        }
    }
    let mut spec = CircuitSpec::custom(num_qubits, dt, ops)?;
    spec.num_layers = num_layers;
    Ok(spec)
}

impl CircuitSpec {
    /// A circuit from an explicit op list, for toy models and tests.
    ///
    /// Rotation weight indices must cover `0..num_params` exactly once.
    pub fn custom(num_qubits: usize, dt: f64, ops: Vec<GateOp>) -> Result<Self> {
        if num_qubits == 0 || num_qubits > crate::MAX_QUBITS {
            return Err(Error::UnsupportedQubitCount(num_qubits));
        }
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidArgument("time step must be finite and positive"));
        }
        let check = |q: usize| {
            if q < num_qubits {
                Ok(())
            } else {
                Err(Error::QubitOutOfRange { qubit: q, num_qubits })
            }
        };
        let num_params = ops.iter().filter(|op| matches!(op, GateOp::Rotation { .. })).count();
        let mut param_ops = vec![usize::MAX; num_params];
        for (pos, op) in ops.iter().enumerate() {
            match *op {
                GateOp::Rotation { generator, weight_index } => {
                    check(generator.target)?;
                    if generator.axis == Axis::I {
                        return Err(Error::IdentityRotation);
                    }
                    let slot = param_ops
                        .get_mut(weight_index)
                        .ok_or(Error::IndexOutOfRange { index: weight_index, len: num_params })?;
                    if *slot != usize::MAX {
                        return Err(Error::InvalidArgument("weight index used by two rotations"));
                    }
                    *slot = pos;
                }
                GateOp::Fixed { target, .. } => check(target)?,
                GateOp::CNot { control, target } => {
                    check(control)?;
                    check(target)?;
                    if control == target {
                        return Err(Error::ControlIsTarget(control));
                    }
                }
            }
        }
        Ok(Self { num_qubits, num_layers: 0, dt, ops, param_ops })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Layer count for [`build_ansatz`] circuits, 0 for custom ones.
    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn num_params(&self) -> usize {
        self.param_ops.len()
    }

    /// Generator of the rotation driven by weight `k`.
    pub fn generator(&self, k: usize) -> Result<PauliGenerator> {
        let pos = *self.param_ops.get(k).ok_or(Error::IndexOutOfRange { index: k, len: self.num_params() })?;
        match self.ops[pos] {
            GateOp::Rotation { generator, .. } => Ok(generator),
            _ => unreachable!("param_ops only points at rotations"),
        }
    }

    pub(crate) fn check_inputs(&self, w: &Weights, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, found: state.num_qubits() });
        }
        if w.len() != self.num_params() {
            return Err(Error::DimensionMismatch { expected: self.num_params(), found: w.len() });
        }
        Ok(())
    }
}

/// Trainable rotation weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("weights"));
        }
        Ok(Self(values))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// Uniform draws from `[-0.1, 0.1]`.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.gen_range(-0.1..=0.1)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Copy with `delta` added to weight `k`.
    pub fn shifted(&self, k: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.0[k] += delta;
        out
    }
}

pub(crate) fn apply_op(state: &mut StateVector, op: &GateOp, w: &[f64], dt: f64) {
    match *op {
        GateOp::Rotation { generator, weight_index } => {
            let u = rotation_unchecked(generator.axis, w[weight_index] * dt);
            state.apply_mat2(generator.target, &u);
        }
        GateOp::Fixed { gate, target } => {
            let u = gate.matrix();
            debug_assert!(crate::gates::unitarity_deviation(&u) < 1e-12);
            state.apply_mat2(target, &u);
        }
        GateOp::CNot { control, target } => state.apply_cnot_unchecked(control, target),
    }
}

/// Applies the inverse of `op`.
pub(crate) fn unapply_op(state: &mut StateVector, op: &GateOp, w: &[f64], dt: f64) {
    match *op {
        GateOp::Rotation { generator, weight_index } => {
            let u = rotation_unchecked(generator.axis, -w[weight_index] * dt);
            state.apply_mat2(generator.target, &u);
        }
        // X, Y, Z, H and CNOT are all self-inverse.
        _ => apply_op(state, op, w, dt),
    }
}

/// Evolves `state` through the circuit in place.
pub fn forward_in_place(spec: &CircuitSpec, w: &Weights, state: &mut StateVector) -> Result<()> {
    spec.check_inputs(w, state)?;
    for op in &spec.ops {
        apply_op(state, op, &w.0, spec.dt);
    }
    Ok(())
}

/// `N̂|ψ⟩`.
pub fn forward(spec: &CircuitSpec, w: &Weights, input: &StateVector) -> Result<StateVector> {
    let mut state = input.clone();
    forward_in_place(spec, w, &mut state)?;
    Ok(state)
}

/// Applies `N̂†` in place: ops in reverse with negated rotation angles.
pub fn inverse_in_place(spec: &CircuitSpec, w: &Weights, state: &mut StateVector) -> Result<()> {
    spec.check_inputs(w, state)?;
    for op in spec.ops.iter().rev() {
        unapply_op(state, op, &w.0, spec.dt);
    }
    Ok(())
}

/// `∂N̂/∂w_k |ψ⟩`: the forward pass with `−i·δt·σ_k` inserted on the k-th
/// rotation's qubit just before that rotation. The result has norm `δt`.
pub fn forward_with_generator_insertion(
    spec: &CircuitSpec,
    w: &Weights,
    input: &StateVector,
    k: usize,
) -> Result<StateVector> {
    spec.check_inputs(w, input)?;
    let insert_at = *spec.param_ops.get(k).ok_or(Error::IndexOutOfRange { index: k, len: spec.num_params() })?;
    let generator = spec.generator(k)?;
    let mut state = input.clone();
    for (pos, op) in spec.ops.iter().enumerate() {
        if pos == insert_at {
            state.apply_pauli(generator.axis, generator.target);
            state.scale(Complex64::new(0.0, -spec.dt));
        }
        apply_op(&mut state, op, &w.0, spec.dt);
    }
    Ok(state)
}
