//! Fixed gates, parameterized Pauli rotations, and a dense matrix
//! exponential used as an exactness oracle on small registers.

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest register `dense_expm` accepts.
pub const DENSE_EXPM_MAX_QUBITS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::I => "I",
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        }
    }
}

/// Unparameterized single-qubit gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedGate {
    X,
    Y,
    Z,
    H,
}

impl FixedGate {
    pub fn matrix(self) -> Mat2 {
        match self {
            FixedGate::X => pauli_matrix(Axis::X),
            FixedGate::Y => pauli_matrix(Axis::Y),
            FixedGate::Z => pauli_matrix(Axis::Z),
            FixedGate::H => {
                let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
        }
    }
}

/// A Pauli axis attached to one qubit; the generator of a trainable rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliGenerator {
    pub axis: Axis,
    pub target: usize,
}

/// One circuit element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateOp {
    /// `exp(-i w[weight_index] σ_axis δt)` on `generator.target`.
    Rotation {
        generator: PauliGenerator,
        weight_index: usize,
    },
    Fixed {
        gate: FixedGate,
        target: usize,
    },
    CNot {
        control: usize,
        target: usize,
    },
}

pub fn pauli_matrix(axis: Axis) -> Mat2 {
    match axis {
        Axis::I => [[ONE, ZERO], [ZERO, ONE]],
        Axis::X => [[ZERO, ONE], [ONE, ZERO]],
        Axis::Y => [[ZERO, -I], [I, ZERO]],
        Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

/// `exp(-i w σ_axis δt) = cos(wδt)·I − i·sin(wδt)·σ_axis`.
pub fn rotation_matrix(axis: Axis, w: f64, dt: f64) -> Result<Mat2> {
    if axis == Axis::I {
        return Err(Error::IdentityRotation);
    }
    if !w.is_finite() || !dt.is_finite() {
        return Err(Error::NonFinite("rotation angle"));
    }
    Ok(rotation_unchecked(axis, w * dt))
}

/// Rotation by the already-multiplied angle `θ = w·δt`.
pub(crate) fn rotation_unchecked(axis: Axis, theta: f64) -> Mat2 {
    let (s, c) = libm::sincos(theta);
    let cos = Complex64::new(c, 0.0);
    match axis {
        Axis::I => [[cos - I * s, ZERO], [ZERO, cos - I * s]],
        Axis::X => {
            let off = Complex64::new(0.0, -s);
            [[cos, off], [off, cos]]
        }
        // -i·sin·σ_y = [[0, -sin], [sin, 0]]
        Axis::Y => [[cos, Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), cos]],
        Axis::Z => [[Complex64::new(c, -s), ZERO], [ZERO, Complex64::new(c, s)]],
    }
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// Largest entry magnitude of `U·U† − I`; NaN-propagating.
pub fn unitarity_deviation(u: &Mat2) -> f64 {
    let prod = mat2_mul(u, &mat2_adjoint(u));
    let id = pauli_matrix(Axis::I);
    let mut worst = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            let d = (prod[r][c] - id[r][c]).norm();
            if d.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(d);
        }
    }
    worst
}

/// `exp(-i·h·t)` by scaling and squaring of the truncated Taylor series.
///
/// Only for registers up to five qubits; `h` must be Hermitian within 1e-10.
pub fn dense_expm(h: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    let dim = h.dim();
    if !dim.is_power_of_two() || dim > 1 << DENSE_EXPM_MAX_QUBITS {
        return Err(Error::UnsupportedQubitCount(dim.trailing_zeros() as usize));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    let herm = h.hermiticity_deviation();
    if herm.is_nan() || herm > 1e-10 {
        return Err(Error::NotHermitian(herm));
    }

    let mut a = h.scaled(Complex64::new(0.0, -t));
    let mut norm = a.one_norm();
    let mut squarings = 0u32;
    while norm > 0.5 {
        norm *= 0.5;
        squarings += 1;
    }
    a = a.scaled(Complex64::new(libm::ldexp(1.0, -(squarings as i32)), 0.0));

    let mut sum = DenseMatrix::identity(dim);
    let mut term = DenseMatrix::identity(dim);
    for k in 1..=40 {
        term = term.matmul(&a).scaled(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.max_abs() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    Ok(sum)
}
