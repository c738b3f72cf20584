//! HOG features of a synthetic digit-like image.

use ermrer::experiment::hog::{cell_histogram, CELLS};
use ermrer::experiment::{hog, ImageMatrix};

fn main() -> ermrer::Result<()> {
    // a ring of radius 9 around the center
    let image = ImageMatrix::from_fn(|i, j| {
        let (x, y) = (i as f64 - 13.5, j as f64 - 13.5);
        let r = (x * x + y * y).sqrt();
        if (r - 9.0).abs() < 1.5 {
            1.0
        } else {
            0.0
        }
    })?;
    for h in 0..CELLS {
        let row: Vec<String> = (0..CELLS)
            .map(|w| {
                let hist = cell_histogram(&image, w, h);
                let (bin, _) = hist.iter().enumerate().fold((0, 0.0), |best, (k, v)| {
                    if *v > best.1 {
                        (k, *v)
                    } else {
                        best
                    }
                });
                if hist.iter().all(|v| *v == 0.0) {
                    ".".into()
                } else {
                    bin.to_string()
                }
            })
            .collect();
        println!("{}", row.join(" "));
    }
    let features = hog(&image);
    let nonzero = features.iter().filter(|v| **v != 0.0).count();
    println!("{} features, {nonzero} nonzero", features.len());
    Ok(())
}
