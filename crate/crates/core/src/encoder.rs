//! Amplitude encoding of images and label states.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::{MAX_QUBITS, NUM_CLASSES};

/// Row-major grayscale image with intensities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch { expected: width * height, found: pixels.len() });
        }
        if let Some(&p) = pixels.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::PixelOutOfRange(p));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn pixel(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }
}

/// Centers `img` on an `out_w × out_h` zero canvas.
///
/// The top-left offset on each axis is `floor((out − in) / 2)`.
pub fn zero_pad(img: &Image, out_w: usize, out_h: usize) -> Result<Image> {
    if out_w < img.width || out_h < img.height {
        return Err(Error::InvalidArgument("padded size smaller than the source image"));
    }
    let area = out_w * out_h;
    if !area.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(area));
    }
    let (dx, dy) = ((out_w - img.width) / 2, (out_h - img.height) / 2);
    let mut pixels = vec![0.0; area];
    for row in 0..img.height {
        let src = &img.pixels[row * img.width..(row + 1) * img.width];
        let start = (row + dy) * out_w + dx;
        pixels[start..start + img.width].copy_from_slice(src);
    }
    Ok(Image { width: out_w, height: out_h, pixels })
}

/// `|ψ(x)⟩ = Σ_j x_j |j⟩ / ‖x‖₂`, pixel `j` in row-major order.
pub fn amplitude_encode(img: &Image) -> Result<StateVector> {
    let n = img.pixels.len();
    if !n.is_power_of_two() || !(2..=1 << MAX_QUBITS).contains(&n) {
        return Err(Error::NotPowerOfTwo(n));
    }
    let norm = libm::sqrt(img.pixels.iter().map(|x| x * x).sum::<f64>());
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let amps = img.pixels.iter().map(|x| Complex64::new(x / norm, 0.0)).collect();
    StateVector::from_amplitudes(amps)
}

/// A class label and the basis state it is trained towards.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelState {
    pub class_index: usize,
    pub target: StateVector,
}

/// Label `class_index` as the basis state `|class_index⟩`.
pub fn encode_label(class_index: usize, num_qubits: usize) -> Result<LabelState> {
    if class_index >= NUM_CLASSES {
        return Err(Error::ClassOutOfRange { class: class_index, num_classes: NUM_CLASSES });
    }
    if num_qubits < 4 {
        return Err(Error::InvalidArgument("need at least 4 qubits for 10 label states"));
    }
    Ok(LabelState { class_index, target: StateVector::basis_state(num_qubits, class_index)? })
}

/// Probabilities of the first `num_classes` basis states, renormalized to
/// sum to one. Falls back to uniform when that mass is below 1e-12.
pub fn readout_distribution(state: &StateVector, num_classes: usize) -> Result<Vec<f64>> {
    if num_classes == 0 || num_classes > state.dim() {
        return Err(Error::ClassOutOfRange { class: num_classes, num_classes: state.dim() });
    }
    let mut probs: Vec<f64> = state.amplitudes()[..num_classes].iter().map(|a| a.norm_sqr()).collect();
    let mass: f64 = probs.iter().sum();
    if mass < 1e-12 {
        probs.fill(1.0 / num_classes as f64);
    } else {
        probs.iter_mut().for_each(|p| *p /= mass);
    }
    Ok(probs)
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}
