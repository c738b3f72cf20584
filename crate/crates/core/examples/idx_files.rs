//! Writes a tiny IDX image/label pair and reads it back, keeping two labels.

use ermrer::experiment::{
    ingest_idx, read_idx_images, read_idx_labels, write_idx_images, write_idx_labels, ImageMatrix,
};

fn main() -> ermrer::Result<()> {
    let dir = std::env::temp_dir().join("ermrer-idx-example");
    std::fs::create_dir_all(&dir)?;
    let (img_path, lab_path) = (dir.join("images.idx"), dir.join("labels.idx"));

    let images: Vec<ImageMatrix> = (0..5)
        .map(|k| ImageMatrix::from_fn(|i, j| if (i + j) % (k + 2) == 0 { 1.0 } else { 0.0 }))
        .collect::<ermrer::Result<_>>()?;
    write_idx_images(&img_path, &images)?;
    write_idx_labels(&lab_path, &[6, 3, 7, 7, 1])?;

    println!(
        "{} images, labels {:?}",
        read_idx_images(&img_path)?.len(),
        read_idx_labels(&lab_path)?
    );
    let kept = ingest_idx(&img_path, &lab_path, [6, 7])?;
    println!(
        "kept {} records with labels {:?}",
        kept.len(),
        kept.iter().map(|r| r.1).collect::<Vec<_>>()
    );
    Ok(())
}
