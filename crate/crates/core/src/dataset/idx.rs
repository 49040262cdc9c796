//! MNIST IDX binary files: big-endian header, `0x00000803` for image files
//! and `0x00000801` for label files.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{DatasetKind, Features, LabeledDataset, Split};
use crate::error::{Error, Result};

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

fn be_u32(bytes: &[u8], at: usize, path: &Path) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::Format(format!("{}: truncated IDX header", path.display())))
}

/// Returns `(pixels, rows, cols)` with pixels flattened image-major.
pub fn read_idx_images(path: &Path) -> Result<(Vec<u8>, usize, usize)> {
    let bytes = read_file(path)?;
    let magic = be_u32(&bytes, 0, path)?;
    if magic != IMAGES_MAGIC {
        return Err(Error::Format(format!(
            "{}: bad image magic {magic:#010x}",
            path.display()
        )));
    }
    let count = be_u32(&bytes, 4, path)? as usize;
    let rows = be_u32(&bytes, 8, path)? as usize;
    let cols = be_u32(&bytes, 12, path)? as usize;
    let body = &bytes[16..];
    if body.len() != count * rows * cols {
        return Err(Error::Consistency(format!(
            "{}: header declares {count} images of {rows}x{cols}, body holds {} bytes",
            path.display(),
            body.len()
        )));
    }
    Ok((body.to_vec(), rows, cols))
}

pub fn read_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let bytes = read_file(path)?;
    let magic = be_u32(&bytes, 0, path)?;
    if magic != LABELS_MAGIC {
        return Err(Error::Format(format!(
            "{}: bad label magic {magic:#010x}",
            path.display()
        )));
    }
    let count = be_u32(&bytes, 4, path)? as usize;
    let body = &bytes[8..];
    if body.len() != count {
        return Err(Error::Consistency(format!(
            "{}: header declares {count} labels, body holds {}",
            path.display(),
            body.len()
        )));
    }
    Ok(body.to_vec())
}

fn load_split(images: &Path, labels: &Path) -> Result<Split> {
    let (pixels, rows, cols) = read_idx_images(images)?;
    let labels_v = read_idx_labels(labels)?;
    let pixel_count = rows * cols;
    if pixel_count != DatasetKind::D1.feature_count() {
        return Err(Error::Format(format!(
            "{}: images are {rows}x{cols}, expected 28x28",
            images.display()
        )));
    }
    if pixels.len() / pixel_count != labels_v.len() {
        return Err(Error::Consistency(format!(
            "{} holds {} images but {} holds {} labels",
            images.display(),
            pixels.len() / pixel_count,
            labels.display(),
            labels_v.len()
        )));
    }
    Split::new(Features::Pixels(pixels), labels_v, pixel_count)
}

/// Loads the four MNIST files into a `D1` dataset.
pub fn load_mnist(
    images_path: &Path,
    labels_path: &Path,
    images_test_path: &Path,
    labels_test_path: &Path,
) -> Result<LabeledDataset> {
    let train = load_split(images_path, labels_path)?;
    let test = load_split(images_test_path, labels_test_path)?;
    LabeledDataset::new(DatasetKind::D1, train, test)
}

fn write_file(path: &Path, header: &[u32], body: &[u8]) -> Result<()> {
    let mut out = Vec::with_capacity(header.len() * 4 + body.len());
    for h in header {
        out.extend_from_slice(&h.to_be_bytes());
    }
    out.extend_from_slice(body);
    fs::File::create(path)
        .and_then(|mut f| f.write_all(&out))
        .map_err(|e| Error::io(path, e))
}

pub fn write_idx_images(path: &Path, pixels: &[u8], rows: usize, cols: usize) -> Result<()> {
    let count = pixels.len() / (rows * cols);
    write_file(
        path,
        &[IMAGES_MAGIC, count as u32, rows as u32, cols as u32],
        pixels,
    )
}

pub fn write_idx_labels(path: &Path, labels: &[u8]) -> Result<()> {
    write_file(path, &[LABELS_MAGIC, labels.len() as u32], labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_pair(dir: &Path, n_images: usize, n_labels: usize) -> (std::path::PathBuf, std::path::PathBuf) {
        let img = dir.join(format!("img-{n_images}-{n_labels}"));
        let lab = dir.join(format!("lab-{n_images}-{n_labels}"));
        let pixels: Vec<u8> = (0..n_images * 784).map(|i| (i % 256) as u8).collect();
        write_idx_images(&img, &pixels, 28, 28).unwrap();
        let labels: Vec<u8> = (0..n_labels).map(|i| (i % 10) as u8).collect();
        write_idx_labels(&lab, &labels).unwrap();
        (img, lab)
    }

    #[test]
    fn round_trip_small_files() {
        let dir = tempfile::tempdir().unwrap();
        let (img, lab) = write_pair(dir.path(), 12, 12);
        let ds = load_mnist(&img, &lab, &img, &lab).unwrap();
        assert_eq!(ds.train().len(), 12);
        assert_eq!(ds.train().row(0).get(5), 5.0);
        assert_eq!(ds.train().labels()[11], 1);
    }

    #[test]
    fn count_mismatch_is_consistency_error() {
        let dir = tempfile::tempdir().unwrap();
        let (img, lab) = write_pair(dir.path(), 12, 11);
        let err = load_mnist(&img, &lab, &img, &lab).unwrap_err();
        assert!(matches!(err, Error::Consistency(_)), "{err}");
    }

    #[test]
    fn truncated_label_file_is_consistency_error() {
        let dir = tempfile::tempdir().unwrap();
        let (img, lab) = write_pair(dir.path(), 12, 12);
        let bytes = fs::read(&lab).unwrap();
        fs::write(&lab, &bytes[..bytes.len() - 3]).unwrap();
        let err = load_mnist(&img, &lab, &img, &lab).unwrap_err();
        assert!(matches!(err, Error::Consistency(_)), "{err}");
    }

    #[test]
    fn swapped_files_fail_on_magic() {
        let dir = tempfile::tempdir().unwrap();
        let (img, lab) = write_pair(dir.path(), 2, 2);
        let err = load_mnist(&lab, &img, &img, &lab).unwrap_err();
        assert!(matches!(err, Error::Format(_)), "{err}");
    }

    #[test]
    fn missing_file_reports_path() {
        let err = read_idx_labels(Path::new("/nonexistent/labels.idx")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/labels.idx"));
    }
}
