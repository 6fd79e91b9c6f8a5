//! MNIST IDX containers (big-endian, magics `0x00000803` for images and
//! `0x00000801` for labels), optionally gzipped, plus the subsetting and
//! pooling used for small-register runs.

use std::collections::BTreeSet;
use std::fs;
use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;
use qnn_core::{Image, NUM_CLASSES};
use thiserror::Error;

use crate::error::{Error, Result};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdxError {
    #[error("bad magic 0x{found:08x} at offset 0 (expected 0x{expected:08x})")]
    BadMagic { expected: u32, found: u32 },
    #[error("truncated at offset {offset}: need {needed} bytes, {available} available")]
    Truncated { offset: usize, needed: usize, available: usize },
    #[error("{count} trailing bytes after payload ending at offset {offset}")]
    TrailingBytes { offset: usize, count: usize },
    #[error("label {value} at offset {offset} is not a digit")]
    LabelOutOfRange { offset: usize, value: u8 },
    #[error("declared size overflows at offset {offset}")]
    Overflow { offset: usize },
}

struct Reader<'a> {
    bytes: &'a [u8],
    offset: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], IdxError> {
        let available = self.bytes.len() - self.offset;
        if n > available {
            return Err(IdxError::Truncated { offset: self.offset, needed: n, available });
        }
        let out = &self.bytes[self.offset..self.offset + n];
        self.offset += n;
        Ok(out)
    }

    fn u32(&mut self) -> std::result::Result<u32, IdxError> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn magic(&mut self, expected: u32) -> std::result::Result<(), IdxError> {
        let found = self.u32()?;
        if found != expected {
            return Err(IdxError::BadMagic { expected, found });
        }
        Ok(())
    }

    fn finish(&self) -> std::result::Result<(), IdxError> {
        let count = self.bytes.len() - self.offset;
        if count != 0 {
            return Err(IdxError::TrailingBytes { offset: self.offset, count });
        }
        Ok(())
    }
}

/// Parses an uncompressed IDX image file; pixels are scaled by 1/255.
pub fn parse_idx_images(bytes: &[u8]) -> std::result::Result<Vec<Image>, IdxError> {
    let mut r = Reader { bytes, offset: 0 };
    r.magic(IMAGE_MAGIC)?;
    let count = r.u32()? as usize;
    let rows = r.u32()? as usize;
    let cols = r.u32()? as usize;
    let area = rows.checked_mul(cols).ok_or(IdxError::Overflow { offset: 12 })?;
    let total = count.checked_mul(area).ok_or(IdxError::Overflow { offset: 16 })?;
    let payload = r.take(total)?;
    r.finish()?;
    Ok((0..count)
        .map(|i| {
            let px = &payload[i * area..(i + 1) * area];
            let pixels = px.iter().map(|&b| b as f64 / 255.0).collect();
            Image::new(cols, rows, pixels).expect("byte pixels are in range")
        })
        .collect())
}

pub fn parse_idx_labels(bytes: &[u8]) -> std::result::Result<Vec<u8>, IdxError> {
    let mut r = Reader { bytes, offset: 0 };
    r.magic(LABEL_MAGIC)?;
    let count = r.u32()? as usize;
    let start = r.offset;
    let labels = r.take(count)?;
    r.finish()?;
    if let Some(i) = labels.iter().position(|&l| l as usize >= NUM_CLASSES) {
        return Err(IdxError::LabelOutOfRange { offset: start + i, value: labels[i] });
    }
    Ok(labels.to_vec())
}

pub fn encode_idx_images(images: &[Image]) -> Vec<u8> {
    let (rows, cols) = images.first().map_or((0, 0), |i| (i.height(), i.width()));
    let mut out = Vec::with_capacity(16 + images.len() * rows * cols);
    for v in [IMAGE_MAGIC, images.len() as u32, rows as u32, cols as u32] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    for img in images {
        assert_eq!((img.height(), img.width()), (rows, cols), "IDX images must share one size");
        out.extend(img.pixels().iter().map(|p| (p * 255.0).round() as u8));
    }
    out
}

pub fn encode_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}

/// Reads a file, transparently gunzipping it when it starts with the gzip magic.
pub fn read_maybe_gzip(path: &Path) -> Result<Vec<u8>> {
    let raw = fs::read(path).map_err(|e| Error::io(path, e))?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice()).read_to_end(&mut out).map_err(|e| Error::io(path, e))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

/// Labeled images as ingested.
#[derive(Clone, Debug, PartialEq)]
pub struct RawDataset {
    images: Vec<Image>,
    labels: Vec<u8>,
}

impl RawDataset {
    pub fn new(images: Vec<Image>, labels: Vec<u8>) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::Core(qnn_core::Error::DimensionMismatch {
                expected: images.len(),
                found: labels.len(),
            }));
        }
        if let Some(&l) = labels.iter().find(|&&l| l as usize >= NUM_CLASSES) {
            return Err(Error::Core(qnn_core::Error::ClassOutOfRange { class: l as usize, num_classes: NUM_CLASSES }));
        }
        Ok(Self { images, labels })
    }

    pub fn from_idx_bytes(images: &[u8], labels: &[u8]) -> Result<Self> {
        Self::new(parse_idx_images(images)?, parse_idx_labels(labels)?)
    }

    pub fn to_idx_bytes(&self) -> (Vec<u8>, Vec<u8>) {
        (encode_idx_images(&self.images), encode_idx_labels(&self.labels))
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[Image] {
        &self.images
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Image, u8)> {
        self.images.iter().zip(self.labels.iter().copied())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    /// Canonical MNIST file names for this split.
    pub fn file_names(self) -> (&'static str, &'static str) {
        match self {
            Split::Train => ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
            Split::Test => ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
        }
    }
}

/// Finds `name` or `name.gz` under `dir`.
pub fn locate(dir: &Path, name: &str) -> Result<std::path::PathBuf> {
    for candidate in [dir.join(name), dir.join(format!("{name}.gz"))] {
        if candidate.is_file() {
            return Ok(candidate);
        }
    }
    Err(Error::io(dir.join(name), std::io::Error::new(std::io::ErrorKind::NotFound, "IDX file not found")))
}

/// Both files of a split, checked for existence without reading them.
pub fn split_paths(dir: &Path, split: Split) -> Result<(std::path::PathBuf, std::path::PathBuf)> {
    let (images, labels) = split.file_names();
    Ok((locate(dir, images)?, locate(dir, labels)?))
}

pub fn load_split(dir: &Path, split: Split) -> Result<RawDataset> {
    let (image_path, label_path) = split_paths(dir, split)?;
    let images = parse_idx_images(&read_maybe_gzip(&image_path)?)
        .map_err(|source| Error::Idx { path: image_path.clone(), source })?;
    let labels = parse_idx_labels(&read_maybe_gzip(&label_path)?)
        .map_err(|source| Error::Idx { path: label_path.clone(), source })?;
    RawDataset::new(images, labels)
}

/// Block-mean pooling by `factor` on both axes.
pub fn downscale(img: &Image, factor: usize) -> Result<Image> {
    if factor == 0 || !img.width().is_multiple_of(factor) || !img.height().is_multiple_of(factor) {
        return Err(Error::Core(qnn_core::Error::InvalidArgument("downscale factor must divide both image sides")));
    }
    let (w, h) = (img.width() / factor, img.height() / factor);
    let norm = (factor * factor) as f64;
    let mut pixels = Vec::with_capacity(w * h);
    for by in 0..h {
        for bx in 0..w {
            let mut sum = 0.0;
            for y in by * factor..(by + 1) * factor {
                for x in bx * factor..(bx + 1) * factor {
                    sum += img.pixel(y, x);
                }
            }
            pixels.push((sum / norm).clamp(0.0, 1.0));
        }
    }
    Ok(Image::new(w, h, pixels)?)
}

/// Stable-order subset keeping at most `limit_per_class` samples of each
/// requested class. `None` means no limit.
pub fn filter_classes(ds: &RawDataset, classes: &BTreeSet<u8>, limit_per_class: Option<usize>) -> RawDataset {
    let mut taken = [0usize; NUM_CLASSES];
    let mut images = Vec::new();
    let mut labels = Vec::new();
    for (img, label) in ds.iter() {
        if !classes.contains(&label) {
            continue;
        }
        let slot = &mut taken[label as usize];
        if limit_per_class.is_some_and(|limit| *slot >= limit) {
            continue;
        }
        *slot += 1;
        images.push(img.clone());
        labels.push(label);
    }
    RawDataset { images, labels }
}
