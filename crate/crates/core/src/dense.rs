//! Small dense complex matrices for brute-force checks on a few qubits.
//!
//! Tensor products follow the register convention: the full operator is
//! `M_{N-1} ⊗ … ⊗ M_1 ⊗ M_0`, so qubit 0 is the least significant index bit.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::gates::{pauli_matrix, Axis, Mat2};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_mat2(u: &Mat2) -> Self {
        Self { dim: 2, data: vec![u[0][0], u[0][1], u[1][0], u[1][1]] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        DenseMatrix { dim: self.dim, data }
    }

    pub fn scaled(&self, factor: Complex64) -> DenseMatrix {
        DenseMatrix { dim: self.dim, data: self.data.iter().map(|a| a * factor).collect() }
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let (n, m) = (self.dim, rhs.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * n * m + j * m + l] = a * rhs.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    /// `u` on `target` and identity on every other qubit of an
    /// `num_qubits`-qubit register.
    pub fn embed_single(num_qubits: usize, target: usize, u: &Mat2) -> DenseMatrix {
        let id = DenseMatrix::from_mat2(&pauli_matrix(Axis::I));
        let gate = DenseMatrix::from_mat2(u);
        let mut out = DenseMatrix::identity(1);
        for q in (0..num_qubits).rev() {
            out = out.kron(if q == target { &gate } else { &id });
        }
        out
    }

    /// Permutation matrix of a CNOT.
    pub fn cnot(num_qubits: usize, control: usize, target: usize) -> DenseMatrix {
        let dim = 1usize << num_qubits;
        let mut out = Self::zeros(dim);
        for col in 0..dim {
            let row = if col >> control & 1 == 1 { col ^ (1 << target) } else { col };
            out.data[row * dim + col] = ONE;
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "apply dimension mismatch");
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let n = self.dim;
        (0..n).map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitarity_deviation(&self) -> f64 {
        self.matmul(&self.adjoint()).max_abs_diff(&DenseMatrix::identity(self.dim))
    }
}
