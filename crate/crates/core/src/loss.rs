//! Losses and their gradients.
//!
//! Two objectives are supported: the target-state residual
//! `L = ‖N̂ψ − y‖² = 2 − 2·Re⟨y|N̂ψ⟩` and the squared error between the
//! renormalized class readout and a one-hot label. Gradients come from
//! three independent routes: generator insertion / adjoint sweep, the
//! parameter-shift rule, and central finite differences.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::circuit::{forward, forward_with_generator_insertion, unapply_op, CircuitSpec, Weights};
use crate::encoder::readout_distribution;
use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::state::StateVector;
use crate::NUM_CLASSES;

/// What a sample is scored against.
#[derive(Clone, Copy, Debug)]
pub enum Objective<'a> {
    /// `2 − 2·Re⟨target|N̂ψ⟩`.
    Fidelity { target: &'a StateVector },
    /// `Σ_i (q_i − onehot_i)²` over the 10-way readout `q`.
    ProbMse { class_index: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LossKind {
    Fidelity,
    ProbMse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradEngine {
    /// Adjoint sweep; same derivative as generator insertion, O(1) passes.
    Analytic,
    ParamShift,
    /// Central differences with the given step.
    FiniteDiff,
}

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct Gradient(Vec<f64>);

impl Gradient {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("gradient"));
        }
        Ok(Self(values))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
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

    /// Arithmetic mean of equally sized gradients, summed in order.
    pub fn mean(grads: &[Gradient]) -> Result<Gradient> {
        let first = grads.first().ok_or(Error::InvalidArgument("mean of zero gradients"))?;
        let mut acc = vec![0.0; first.len()];
        for g in grads {
            if g.len() != acc.len() {
                return Err(Error::DimensionMismatch { expected: acc.len(), found: g.len() });
            }
            acc.iter_mut().zip(&g.0).for_each(|(a, b)| *a += b);
        }
        let n = grads.len() as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        Ok(Gradient(acc))
    }
}

impl Objective<'_> {
    pub fn kind(&self) -> LossKind {
        match self {
            Objective::Fidelity { .. } => LossKind::Fidelity,
            Objective::ProbMse { .. } => LossKind::ProbMse,
        }
    }

    /// Loss of an already evolved state.
    pub fn loss_of_output(&self, output: &StateVector) -> Result<f64> {
        match *self {
            Objective::Fidelity { target } => fidelity_loss_of_output(output, target),
            Objective::ProbMse { class_index } => probability_mse_of_output(output, class_index),
        }
    }

    /// `λ` such that `dL = 2·Re⟨λ|dφ⟩` at the output `φ`.
    fn cotangent(&self, output: &StateVector) -> Result<Vec<Complex64>> {
        match *self {
            Objective::Fidelity { target } => {
                check_dims(output, target)?;
                Ok(target.amplitudes().iter().map(|y| -y).collect())
            }
            Objective::ProbMse { class_index } => {
                let dl_dp = prob_mse_sensitivity(output, class_index)?;
                let mut lambda = vec![Complex64::new(0.0, 0.0); output.dim()];
                for (j, g) in dl_dp.iter().enumerate() {
                    lambda[j] = output.amplitudes()[j] * *g;
                }
                Ok(lambda)
            }
        }
    }
}

fn check_dims(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: a.dim() });
    }
    Ok(())
}

fn check_class(class_index: usize) -> Result<()> {
    if class_index >= NUM_CLASSES {
        return Err(Error::ClassOutOfRange { class: class_index, num_classes: NUM_CLASSES });
    }
    Ok(())
}

/// `(⟨y|φ⟩, ⟨φ|y⟩)`, the two cross terms of the residual expansion.
pub fn fidelity_cross_terms(output: &StateVector, target: &StateVector) -> Result<(Complex64, Complex64)> {
    Ok((target.inner_product(output)?, output.inner_product(target)?))
}

/// `2 − ⟨y|φ⟩ − ⟨φ|y⟩`; the cross terms are conjugates so the sum is real.
pub fn fidelity_loss_of_output(output: &StateVector, target: &StateVector) -> Result<f64> {
    let (a, b) = fidelity_cross_terms(output, target)?;
    Ok(2.0 - (a + b).re)
}

pub fn fidelity_loss(spec: &CircuitSpec, w: &Weights, psi: &StateVector, y: &StateVector) -> Result<f64> {
    check_dims(psi, y)?;
    fidelity_loss_of_output(&forward(spec, w, psi)?, y)
}

pub fn probability_mse_of_output(output: &StateVector, class_index: usize) -> Result<f64> {
    check_class(class_index)?;
    let q = readout_distribution(output, NUM_CLASSES)?;
    Ok(q.iter()
        .enumerate()
        .map(|(i, qi)| {
            let d = qi - if i == class_index { 1.0 } else { 0.0 };
            d * d
        })
        .sum())
}

pub fn probability_mse_loss(spec: &CircuitSpec, w: &Weights, psi: &StateVector, class_index: usize) -> Result<f64> {
    probability_mse_of_output(&forward(spec, w, psi)?, class_index)
}

pub fn loss(spec: &CircuitSpec, w: &Weights, psi: &StateVector, objective: &Objective<'_>) -> Result<f64> {
    objective.loss_of_output(&forward(spec, w, psi)?)
}

/// `∂L/∂p_j` of the readout MSE, for every basis probability `p_j`.
///
/// Only the first ten outcomes enter the readout; in the uniform fallback
/// region (readout mass below 1e-12) the loss is locally constant.
fn prob_mse_sensitivity(output: &StateVector, class_index: usize) -> Result<Vec<f64>> {
    check_class(class_index)?;
    let q = readout_distribution(output, NUM_CLASSES)?;
    let mass: f64 = output.amplitudes()[..NUM_CLASSES].iter().map(|a| a.norm_sqr()).sum();
    let mut out = vec![0.0; output.dim()];
    if mass < 1e-12 {
        return Ok(out);
    }
    let residual = |i: usize| q[i] - if i == class_index { 1.0 } else { 0.0 };
    let centered: f64 = (0..NUM_CLASSES).map(|i| residual(i) * q[i]).sum();
    for (j, g) in out.iter_mut().enumerate().take(NUM_CLASSES) {
        *g = 2.0 / mass * (residual(j) - centered);
    }
    Ok(out)
}

/// `∂L/∂w_k = −2·Re⟨y|∂N̂/∂w_k|ψ⟩`, one generator-inserted pass per weight.
pub fn fidelity_grad(spec: &CircuitSpec, w: &Weights, psi: &StateVector, y: &StateVector) -> Result<Gradient> {
    check_dims(psi, y)?;
    let values = (0..spec.num_params())
        .map(|k| {
            let d = forward_with_generator_insertion(spec, w, psi, k)?;
            Ok(-2.0 * y.inner_product(&d)?.re)
        })
        .collect::<Result<Vec<_>>>()?;
    Gradient::new(values)
}

/// Loss and gradient from one forward pass and one reverse sweep.
///
/// Walking the ops backwards keeps `φ` at the state just after op `m` and
/// `λ` at the cotangent pulled back to the same point; a rotation with
/// generator `σ` then contributes `2·Re⟨λ|−iδt·σ|φ⟩ = 2δt·Im⟨λ|σ|φ⟩`.
pub fn adjoint_grad(
    spec: &CircuitSpec,
    w: &Weights,
    psi: &StateVector,
    objective: &Objective<'_>,
) -> Result<(f64, Gradient)> {
    let mut phi = forward(spec, w, psi)?;
    let loss = objective.loss_of_output(&phi)?;
    let mut lambda = StateVector::from_unnormalized(objective.cotangent(&phi)?)?;
    let dt = spec.dt();
    let mut grad = vec![0.0; spec.num_params()];
    for op in spec.ops().iter().rev() {
        if let GateOp::Rotation { generator, weight_index } = *op {
            let element = lambda.pauli_element(&phi, generator.axis, generator.target);
            grad[weight_index] = 2.0 * dt * element.im;
        }
        unapply_op(&mut phi, op, w.as_slice(), dt);
        unapply_op(&mut lambda, op, w.as_slice(), dt);
    }
    Ok((loss, Gradient::new(grad)?))
}

/// Exact gradient from shifted evaluations of the circuit.
///
/// With `R(w) = exp(−i w σ δt)`, the overlap `Re⟨y|N̂ψ⟩` is a sinusoid of
/// frequency `δt` in each weight and every outcome probability is one of
/// frequency `2δt`. Shifting by a quarter period of each gives
/// `f′ = (δt/2)·[f(w + π/2δt) − f(w − π/2δt)]` for the overlap and
/// `p′ = δt·[p(w + π/4δt) − p(w − π/4δt)]` for probabilities. The
/// readout loss is nonlinear in `p`, so its shifted probabilities are
/// combined through `∂L/∂p` at the unshifted point.
pub fn parameter_shift_grad(
    spec: &CircuitSpec,
    w: &Weights,
    psi: &StateVector,
    objective: &Objective<'_>,
) -> Result<Gradient> {
    let dt = spec.dt();
    let n = spec.num_params();
    let mut values = Vec::with_capacity(n);
    match *objective {
        Objective::Fidelity { target } => {
            check_dims(psi, target)?;
            let shift = PI / (2.0 * dt);
            for k in 0..n {
                let plus = fidelity_loss(spec, &w.shifted(k, shift), psi, target)?;
                let minus = fidelity_loss(spec, &w.shifted(k, -shift), psi, target)?;
                values.push(0.5 * dt * (plus - minus));
            }
        }
        Objective::ProbMse { class_index } => {
            let sensitivity = prob_mse_sensitivity(&forward(spec, w, psi)?, class_index)?;
            let shift = PI / (4.0 * dt);
            for k in 0..n {
                let plus = forward(spec, &w.shifted(k, shift), psi)?;
                let minus = forward(spec, &w.shifted(k, -shift), psi)?;
                let g: f64 = sensitivity
                    .iter()
                    .zip(plus.amplitudes().iter().zip(minus.amplitudes()))
                    .take(NUM_CLASSES)
                    .map(|(s, (p, m))| s * (p.norm_sqr() - m.norm_sqr()))
                    .sum();
                values.push(dt * g);
            }
        }
    }
    Gradient::new(values)
}

/// Central differences `(L(w + h·e_k) − L(w − h·e_k)) / 2h` of an
/// arbitrary scalar loss.
pub fn finite_difference_grad<F>(mut loss_fn: F, w: &Weights, h: f64) -> Result<Gradient>
where
    F: FnMut(&Weights) -> Result<f64>,
{
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidArgument("finite-difference step must be positive"));
    }
    let values = (0..w.len())
        .map(|k| Ok((loss_fn(&w.shifted(k, h))? - loss_fn(&w.shifted(k, -h))?) / (2.0 * h)))
        .collect::<Result<Vec<_>>>()?;
    Gradient::new(values)
}

/// Loss and gradient of one sample with the chosen engine.
pub fn loss_and_gradient(
    engine: GradEngine,
    spec: &CircuitSpec,
    w: &Weights,
    psi: &StateVector,
    objective: &Objective<'_>,
) -> Result<(f64, Gradient)> {
    match engine {
        GradEngine::Analytic => adjoint_grad(spec, w, psi, objective),
        GradEngine::ParamShift => Ok((loss(spec, w, psi, objective)?, parameter_shift_grad(spec, w, psi, objective)?)),
        GradEngine::FiniteDiff => {
            let value = loss(spec, w, psi, objective)?;
            let grad = finite_difference_grad(|w| loss(spec, w, psi, objective), w, DEFAULT_FD_STEP)?;
            Ok((value, grad))
        }
    }
}
