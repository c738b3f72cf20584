//! Histogram of oriented gradients for 28×28 grayscale images.
//!
//! Pixel coordinates follow the `(i, j)` = (column, row) convention, both
//! zero-based here. Cells are 4×4 pixels (7×7 of them); blocks are 2×2 cells
//! stepping one cell at a time (6×6 of them). Each block normalizes its four
//! cell histograms by the block's Euclidean norm, and the feature vector
//! lists blocks with the horizontal block index varying fastest.

use crate::error::{Error, Result};

pub const SIDE: usize = 28;
pub const CELL: usize = 4;
pub const CELLS: usize = SIDE / CELL;
pub const BLOCKS: usize = CELLS - 1;
pub const BINS: usize = 9;
pub const HOG_LEN: usize = BLOCKS * BLOCKS * 4 * BINS;
pub const EPSILON: f64 = 1e-4;

/// A 28×28 image with intensities in `[0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageMatrix {
    pixels: Vec<f64>,
}

impl ImageMatrix {
    pub fn new(pixels: Vec<f64>) -> Result<Self> {
        if pixels.len() != SIDE * SIDE {
            return Err(Error::InvalidImage(format!(
                "expected {} pixels, got {}",
                SIDE * SIDE,
                pixels.len()
            )));
        }
        if let Some(p) = pixels.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidImage(format!("intensity {p} outside [0, 1]")));
        }
        Ok(Self { pixels })
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(SIDE * SIDE);
        for j in 0..SIDE {
            for i in 0..SIDE {
                pixels.push(f(i, j));
            }
        }
        Self::new(pixels)
    }

    /// Intensity at column `i`, row `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pixels[j * SIDE + i]
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }
}

fn difference(at: impl Fn(usize) -> f64, k: usize) -> f64 {
    match k {
        0 => at(1) - at(0),
        k if k == SIDE - 1 => at(k) - at(k - 1),
        k => at(k + 1) - at(k - 1),
    }
}

/// Gradient `(G_w, G_h)` at column `i`, row `j`.
pub fn gradient(image: &ImageMatrix, i: usize, j: usize) -> (f64, f64) {
    (
        difference(|c| image.get(c, j), i),
        difference(|r| image.get(i, r), j),
    )
}

/// Orientation in degrees on `[0, 180)`; zero for a zero gradient.
pub fn orientation(gw: f64, gh: f64) -> f64 {
    if gw == 0.0 && gh == 0.0 {
        return 0.0;
    }
    let phi = (gh / gw).atan().to_degrees();
    if phi < 0.0 {
        phi + 180.0
    } else {
        phi
    }
}

/// Bin `n` (zero-based) holds orientations in `[20n, 20(n+1))`.
pub fn bin_of(phi: f64) -> usize {
    ((phi / (180.0 / BINS as f64)).floor() as usize).min(BINS - 1)
}

/// Unnormalized histogram of cell `(w, h)`, zero-based.
pub fn cell_histogram(image: &ImageMatrix, w: usize, h: usize) -> [f64; BINS] {
    let mut hist = [0.0; BINS];
    for j in h * CELL..(h + 1) * CELL {
        for i in w * CELL..(w + 1) * CELL {
            let (gw, gh) = gradient(image, i, j);
            let magnitude = gw.hypot(gh);
            hist[bin_of(orientation(gw, gh))] += magnitude;
        }
    }
    hist
}

/// Cells of block `(m, s)` in output order.
pub fn block_cells(m: usize, s: usize) -> [(usize, usize); 4] {
    [(m, s), (m, s + 1), (m + 1, s), (m + 1, s + 1)]
}

/// The 1296-entry HOG feature vector.
pub fn hog(image: &ImageMatrix) -> Vec<f64> {
    let mut cells = [[[0.0; BINS]; CELLS]; CELLS];
    for (w, column) in cells.iter_mut().enumerate() {
        for (h, cell) in column.iter_mut().enumerate() {
            *cell = cell_histogram(image, w, h);
        }
    }
    let mut out = Vec::with_capacity(HOG_LEN);
    for s in 0..BLOCKS {
        for m in 0..BLOCKS {
            let members = block_cells(m, s);
            let sq: f64 = members
                .iter()
                .flat_map(|&(w, h)| cells[w][h].iter())
                .map(|v| v * v)
                .sum();
            let norm = (sq + EPSILON * EPSILON).sqrt();
            for (w, h) in members {
                out.extend(cells[w][h].iter().map(|v| v / norm));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> ImageMatrix {
        ImageMatrix::from_fn(|i, _| if i < SIDE / 2 { 0.0 } else { 1.0 }).unwrap()
    }

    #[test]
    fn zero_and_constant_images_give_zero_vectors() {
        for v in [0.0, 0.37, 1.0] {
            let f = hog(&ImageMatrix::from_fn(|_, _| v).unwrap());
            assert_eq!(f.len(), HOG_LEN);
            assert!(f.iter().all(|x| *x == 0.0));
        }
    }

    #[test]
    fn rejects_bad_images() {
        assert!(ImageMatrix::new(vec![0.0; 10]).is_err());
        assert!(ImageMatrix::from_fn(|_, _| 1.5).is_err());
    }

    #[test]
    fn boundary_differences_are_one_sided() {
        let img = ImageMatrix::from_fn(|i, j| (i as f64 + 2.0 * j as f64) / 100.0).unwrap();
        let (gw, gh) = gradient(&img, 0, 0);
        assert!((gw - 0.01).abs() < 1e-15 && (gh - 0.02).abs() < 1e-15);
        let (gw, gh) = gradient(&img, 5, 7);
        assert!((gw - 0.02).abs() < 1e-15 && (gh - 0.04).abs() < 1e-15);
        let (gw, gh) = gradient(&img, 27, 27);
        assert!((gw - 0.01).abs() < 1e-15 && (gh - 0.02).abs() < 1e-15);
    }

    #[test]
    fn orientation_convention() {
        assert_eq!(orientation(1.0, 0.0), 0.0);
        assert_eq!(orientation(0.0, 0.0), 0.0);
        assert!((orientation(0.0, 1.0) - 90.0).abs() < 1e-12);
        assert!((orientation(0.0, -1.0) - 90.0).abs() < 1e-12);
        assert!((orientation(1.0, -1.0) - 135.0).abs() < 1e-12);
        assert_eq!(bin_of(0.0), 0);
        assert_eq!(bin_of(20.0), 1);
        assert_eq!(bin_of(179.999), 8);
        assert_eq!(bin_of(180.0), 8);
    }

    #[test]
    fn vertical_edge_cell_trace() {
        // columns 13 and 14 (zero-based) see G_w = 1, G_h = 0: two pixels per
        // row in cell column 3, four rows per cell.
        let img = edge();
        for h in 0..CELLS {
            for w in 0..CELLS {
                let hist = cell_histogram(&img, w, h);
                let mut want = [0.0; BINS];
                if w == 3 {
                    want[0] = 8.0;
                }
                assert_eq!(hist, want);
            }
        }
        let f = hog(&img);
        let v = 8.0 / (128.0f64 + EPSILON * EPSILON).sqrt();
        for s in 0..BLOCKS {
            for m in 0..BLOCKS {
                let base = (s * BLOCKS + m) * 4 * BINS;
                for (k, (w, _)) in block_cells(m, s).iter().enumerate() {
                    let group = &f[base + k * BINS..base + (k + 1) * BINS];
                    let want0 = if *w == 3 { v } else { 0.0 };
                    assert_eq!(group[0], want0);
                    assert!(group[1..].iter().all(|x| *x == 0.0));
                }
            }
        }
    }

    #[test]
    fn block_groups_have_bounded_norm() {
        let img = ImageMatrix::from_fn(|i, j| ((i * 7 + j * 13) % 11) as f64 / 10.0).unwrap();
        let f = hog(&img);
        for group in f.chunks(4 * BINS) {
            let norm = group.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(norm <= 1.0 + 1e-6);
        }
        assert_eq!(f, hog(&img));
    }
}
