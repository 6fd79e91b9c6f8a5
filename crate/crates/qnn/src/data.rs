//! Image preprocessing: pad to a power-of-two square, pool, encode.

use qnn_core::{amplitude_encode, encode_label, zero_pad, Image, LabelState, StateVector};
use rayon::prelude::*;

use crate::error::Result;
use crate::mnist::{downscale, RawDataset};

/// An encoded input and its label state.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedSample {
    pub state: StateVector,
    pub label: LabelState,
}

/// Pads to the next power-of-two square (28×28 → 32×32), then block-mean
/// pools by `factor`.
pub fn preprocess(img: &Image, factor: usize) -> Result<Image> {
    let side = img.width().max(img.height()).next_power_of_two();
    let padded = zero_pad(img, side, side)?;
    if factor == 1 {
        return Ok(padded);
    }
    downscale(&padded, factor)
}

/// Register size an image of `width × height` needs after [`preprocess`].
pub fn qubits_for(width: usize, height: usize, factor: usize) -> usize {
    let side = width.max(height).next_power_of_two() / factor.max(1);
    (side * side).max(2).trailing_zeros() as usize
}

pub fn encode_sample(img: &Image, label: u8, factor: usize) -> Result<EncodedSample> {
    let state = amplitude_encode(&preprocess(img, factor)?)?;
    let label = encode_label(label as usize, state.num_qubits())?;
    Ok(EncodedSample { state, label })
}

pub fn encode_dataset(raw: &RawDataset, factor: usize) -> Result<Vec<EncodedSample>> {
    raw.images()
        .par_iter()
        .zip(raw.labels().par_iter())
        .map(|(img, &label)| encode_sample(img, label, factor))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mnist_sized_image_becomes_six_qubits_at_factor_four() {
        let mut pixels = vec![0.0; 784];
        pixels[14 * 28 + 14] = 1.0;
        pixels[3 * 28 + 20] = 0.5;
        let img = Image::new(28, 28, pixels).unwrap();
        let pooled = preprocess(&img, 4).unwrap();
        assert_eq!((pooled.width(), pooled.height()), (8, 8));
        let s = encode_sample(&img, 7, 4).unwrap();
        assert_eq!(s.state.num_qubits(), 6);
        assert_eq!(qubits_for(28, 28, 4), 6);
        assert_eq!(qubits_for(28, 28, 1), 10);
        assert_eq!(encode_sample(&img, 7, 1).unwrap().state.num_qubits(), 10);
        assert_eq!(s.label.class_index, 7);
    }
}
