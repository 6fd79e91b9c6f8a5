//! Dense statevector simulation and a time-evolution quantum neural network.
//!
//! The network is an ordered product of single-qubit Pauli exponentials
//! `exp(-i w_k σ_k δt)` interleaved with a CNOT ring, applied to an
//! amplitude-encoded input. Training minimizes either the target-state
//! residual `‖N̂ψ − y‖²` or the squared error between the renormalized
//! class readout and a one-hot label.
//!
//! The crate is `no_std` (it needs `alloc`); file formats, the training loop
//! and the command line live in the `qnn` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod circuit;
pub mod dense;
pub mod encoder;
mod error;
pub mod gates;
pub mod loss;
pub mod optim;
pub mod state;

pub use circuit::{build_ansatz, forward, forward_with_generator_insertion, CircuitSpec, Weights};
pub use encoder::{amplitude_encode, encode_label, readout_distribution, zero_pad, Image, LabelState};
pub use error::{Error, Result};
pub use gates::{dense_expm, pauli_matrix, rotation_matrix, Axis, FixedGate, GateOp, Mat2, PauliGenerator};
pub use loss::{Gradient, Objective};
pub use state::StateVector;

pub use num_complex::Complex64;

/// Number of digit classes read out of the register.
pub const NUM_CLASSES: usize = 10;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 26;
