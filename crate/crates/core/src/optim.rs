//! Plain gradient descent and the per-epoch learning-rate decay.

use alloc::vec::Vec;

use crate::circuit::Weights;
use crate::error::{Error, Result};
use crate::loss::Gradient;

/// `w′ = w − η·g`.
pub fn sgd_step(w: &Weights, g: &Gradient, eta: f64) -> Result<Weights> {
    if w.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: w.len(), found: g.len() });
    }
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::InvalidArgument("learning rate must be positive"));
    }
    let values: Vec<f64> = w.as_slice().iter().zip(g.as_slice()).map(|(w, g)| w - eta * g).collect();
    Weights::new(values)
}

/// Learning rate decayed once per completed epoch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LearningRateSchedule {
    initial: f64,
    decay: f64,
}

impl LearningRateSchedule {
    pub fn new(initial: f64, decay: f64) -> Result<Self> {
        if !initial.is_finite() || initial <= 0.0 {
            return Err(Error::InvalidArgument("learning rate must be positive"));
        }
        if !(decay > 0.0 && decay <= 1.0) {
            return Err(Error::InvalidArgument("learning-rate decay must lie in (0, 1]"));
        }
        Ok(Self { initial, decay })
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    /// `η₀ · decay^epoch`, epochs counted from 0.
    pub fn rate(&self, epoch: usize) -> f64 {
        self.initial * libm::pow(self.decay, epoch as f64)
    }
}
