//! Binary statevector snapshots: `"QSV1"`, little-endian `u32` qubit count,
//! then `2^N` interleaved little-endian `f64` pairs `(re, im)`.

use qnn_core::{Complex64, StateVector};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"QSV1";

pub fn encode(state: &StateVector) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 16 * state.dim());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(state.num_qubits() as u32).to_le_bytes());
    for a in state.amplitudes() {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
    out
}

/// Decodes a snapshot; the state must be normalized.
pub fn decode(bytes: &[u8]) -> Result<StateVector> {
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(Error::Snapshot("missing QSV1 header".into()));
    }
    let num_qubits = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if num_qubits == 0 || num_qubits > qnn_core::MAX_QUBITS {
        return Err(Error::Snapshot(format!("unsupported qubit count {num_qubits}")));
    }
    let expected = 8 + 16 * (1usize << num_qubits);
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let f = |chunk: &[u8]| f64::from_le_bytes(chunk.try_into().unwrap());
    let amps = bytes[8..].chunks_exact(16).map(|c| Complex64::new(f(&c[..8]), f(&c[8..]))).collect();
    Ok(StateVector::from_amplitudes(amps)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_bit_exact() {
        let s = StateVector::basis_state(1, 1).unwrap();
        let bytes = encode(&s);
        let mut expected = b"QSV1".to_vec();
        expected.extend_from_slice(&[1, 0, 0, 0]);
        expected.extend_from_slice(&[0; 16]);
        expected.extend_from_slice(&1.0f64.to_le_bytes());
        expected.extend_from_slice(&[0; 8]);
        assert_eq!(bytes, expected);
        assert_eq!(decode(&bytes).unwrap(), s);
    }

    #[test]
    fn rejects_malformed() {
        let bytes = encode(&StateVector::zero(2).unwrap());
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
        assert!(decode(b"QSV2\x01\x00\x00\x00").is_err());
        let mut unnormalized = bytes.clone();
        unnormalized[8..16].copy_from_slice(&2.0f64.to_le_bytes());
        assert!(decode(&unnormalized).is_err());
    }
}
