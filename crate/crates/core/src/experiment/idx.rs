//! Reader and writer for the IDX files used by handwritten-digit datasets.
//!
//! Images: big-endian magic `0x00000803`, count, rows, cols, then one
//! unsigned byte per pixel, row-major. Labels: magic `0x00000801`, count,
//! then one byte per label.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::hog::{ImageMatrix, SIDE};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

fn be_u32(bytes: &[u8], at: usize, path: &Path) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::TruncatedFile {
            path: path.to_path_buf(),
        })
}

fn check_magic(bytes: &[u8], expected: u32, path: &Path) -> Result<()> {
    let found = be_u32(bytes, 0, path)?;
    if found != expected {
        return Err(Error::BadMagic {
            path: path.to_path_buf(),
            expected,
            found,
        });
    }
    Ok(())
}

pub fn read_idx_images(path: &Path) -> Result<Vec<ImageMatrix>> {
    let bytes = fs::read(path)?;
    check_magic(&bytes, IMAGE_MAGIC, path)?;
    let count = be_u32(&bytes, 4, path)? as usize;
    let rows = be_u32(&bytes, 8, path)?;
    let cols = be_u32(&bytes, 12, path)?;
    if rows as usize != SIDE || cols as usize != SIDE {
        return Err(Error::ImageDimensionMismatch {
            path: path.to_path_buf(),
            rows,
            cols,
        });
    }
    let body = &bytes[16..];
    let size = SIDE * SIDE;
    if body.len() < count * size {
        return Err(Error::TruncatedFile {
            path: path.to_path_buf(),
        });
    }
    body.chunks_exact(size)
        .take(count)
        .map(|px| ImageMatrix::new(px.iter().map(|&b| f64::from(b) / 255.0).collect()))
        .collect()
}

pub fn read_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let bytes = fs::read(path)?;
    check_magic(&bytes, LABEL_MAGIC, path)?;
    let count = be_u32(&bytes, 4, path)? as usize;
    let body = &bytes[8..];
    if body.len() < count {
        return Err(Error::TruncatedFile {
            path: path.to_path_buf(),
        });
    }
    Ok(body[..count].to_vec())
}

/// Reads an image file and its label file, keeping only records whose label
/// is one of `keep`.
pub fn ingest_idx(
    images_path: &Path,
    labels_path: &Path,
    keep: [u8; 2],
) -> Result<Vec<(ImageMatrix, u8)>> {
    let images = read_idx_images(images_path)?;
    let labels = read_idx_labels(labels_path)?;
    if images.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: images.len(),
            found: labels.len(),
        });
    }
    Ok(images
        .into_iter()
        .zip(labels)
        .filter(|(_, y)| keep.contains(y))
        .collect())
}

/// Writes images as IDX, rounding intensities to the nearest byte.
pub fn write_idx_images(path: &Path, images: &[ImageMatrix]) -> Result<()> {
    let mut out = Vec::with_capacity(16 + images.len() * SIDE * SIDE);
    for v in [IMAGE_MAGIC, images.len() as u32, SIDE as u32, SIDE as u32] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    for img in images {
        out.extend(img.pixels().iter().map(|p| (p * 255.0).round() as u8));
    }
    fs::File::create(path)?.write_all(&out)?;
    Ok(())
}

pub fn write_idx_labels(path: &Path, labels: &[u8]) -> Result<()> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    fs::File::create(path)?.write_all(&out)?;
    Ok(())
}
