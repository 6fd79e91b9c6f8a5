//! Dense `2^N`-amplitude register and the primitive gate kernels.
//!
//! Basis index `j` encodes qubit `q` in bit `q` (qubit 0 is the least
//! significant bit), so `|10⟩` on two qubits is index 2.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{self, Axis, Mat2};
use crate::MAX_QUBITS;

/// Tolerance on `Σ|a_j|² − 1` for a state to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Tolerance on `U·U† − I` for caller-supplied single-qubit matrices.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::UnsupportedQubitCount(num_qubits));
    }
    Ok(())
}

impl StateVector {
    /// The all-zeros register `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { num_qubits, amps })
    }

    /// Wraps an amplitude vector, rejecting non-power-of-two lengths,
    /// non-finite entries and vectors whose norm is not 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_unnormalized(amps)?;
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(state)
    }

    /// Like [`from_amplitudes`](Self::from_amplitudes) but without the norm
    /// check. Used for derivative states, whose norm is `δt` rather than 1.
    pub fn from_unnormalized(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("amplitudes"));
        }
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of amplitudes, `2^num_qubits`.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// `⟨self|ket⟩ = Σ_j conj(self_j)·ket_j`.
    pub fn inner_product(&self, ket: &StateVector) -> Result<Complex64> {
        if self.dim() != ket.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: ket.dim() });
        }
        Ok(self.amps.iter().zip(&ket.amps).map(|(b, k)| b.conj() * k).sum())
    }

    /// Outcome probabilities `|a_j|²` in basis-index order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies a caller-supplied 2×2 unitary to `target`.
    pub fn apply_single_qubit(&mut self, target: usize, u: &Mat2) -> Result<()> {
        self.check_qubit(target)?;
        let deviation = gates::unitarity_deviation(u);
        if deviation.is_nan() || deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary(deviation));
        }
        self.apply_mat2(target, u);
        Ok(())
    }

    /// Flips `target` on every basis state whose `control` bit is set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::ControlIsTarget(control));
        }
        self.apply_cnot_unchecked(control, target);
        Ok(())
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    /// Pair-update kernel. `target` must already be in range.
    pub(crate) fn apply_mat2(&mut self, target: usize, u: &Mat2) {
        let stride = 1usize << target;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = u[0][0] * x + u[0][1] * y;
                *a1 = u[1][0] * x + u[1][1] * y;
            }
        }
    }

    pub(crate) fn apply_cnot_unchecked(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for j in 0..self.amps.len() {
            if j & cmask != 0 && j & tmask == 0 {
                self.amps.swap(j, j | tmask);
            }
        }
    }

    /// Multiplies by the bare Pauli matrix on `target` (no exponential).
    pub(crate) fn apply_pauli(&mut self, axis: Axis, target: usize) {
        let stride = 1usize << target;
        let i = Complex64::i();
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                match axis {
                    Axis::I => {}
                    Axis::X => core::mem::swap(a0, a1),
                    Axis::Y => {
                        let (x, y) = (*a0, *a1);
                        *a0 = -i * y;
                        *a1 = i * x;
                    }
                    Axis::Z => *a1 = -*a1,
                }
            }
        }
    }

    /// `⟨self|σ_axis(target)|ket⟩` without materializing `σ|ket⟩`.
    pub(crate) fn pauli_element(&self, ket: &StateVector, axis: Axis, target: usize) -> Complex64 {
        let sigma = gates::pauli_matrix(axis);
        let stride = 1usize << target;
        let mut acc = ZERO;
        for (bra, ket) in self.amps.chunks_exact(2 * stride).zip(ket.amps.chunks_exact(2 * stride)) {
            let (b0, b1) = bra.split_at(stride);
            let (k0, k1) = ket.split_at(stride);
            for j in 0..stride {
                let s0 = sigma[0][0] * k0[j] + sigma[0][1] * k1[j];
                let s1 = sigma[1][0] * k0[j] + sigma[1][1] * k1[j];
                acc += b0[j].conj() * s0 + b1[j].conj() * s1;
            }
        }
        acc
    }

    pub(crate) fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }
}
