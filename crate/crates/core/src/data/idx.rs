//! IDX files, the container format of the MNIST distribution.
//!
//! Layout: a big-endian magic `0x0000_08NN` (unsigned-byte payload with `NN`
//! dimensions), `NN` big-endian `u32` dimension sizes, then the raw bytes.
//! Label files have one dimension, image stacks three `(n, rows, cols)`.
//! Four-dimensional `(n, channels, rows, cols)` files are accepted for
//! multi-channel data.

use std::fs;
use std::path::{Path, PathBuf};

use crate::data::{DataError, Dataset};
use crate::tensor::Tensor;

pub const LABELS_MAGIC: u32 = 0x0000_0801;
pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IMAGES4_MAGIC: u32 = 0x0000_0804;

/// Decoded contents of one IDX file.
#[derive(Debug, Clone, PartialEq)]
pub enum IdxPayload {
    Labels(Vec<usize>),
    /// `(n, channels, rows, cols)` scaled to `[0, 1]`.
    Images(Tensor),
}

fn parse_err(offset: usize, message: impl Into<String>) -> DataError {
    DataError::Parse {
        offset,
        message: message.into(),
    }
}

fn read_u32(bytes: &[u8], offset: usize) -> Result<u32, DataError> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes(b.try_into().expect("4 bytes")))
        .ok_or_else(|| parse_err(offset, "unexpected end of header"))
}

pub fn parse_idx(bytes: &[u8]) -> Result<IdxPayload, DataError> {
    let magic = read_u32(bytes, 0)?;
    let ndims = match magic {
        LABELS_MAGIC => 1,
        IMAGES_MAGIC => 3,
        IMAGES4_MAGIC => 4,
        other => return Err(parse_err(0, format!("unsupported magic 0x{other:08x}"))),
    };
    let mut dims = Vec::with_capacity(ndims);
    let mut volume = 1usize;
    for d in 0..ndims {
        let offset = 4 + 4 * d;
        let size = read_u32(bytes, offset)? as usize;
        volume = volume
            .checked_mul(size)
            .ok_or_else(|| parse_err(offset, "dimension sizes overflow"))?;
        dims.push(size);
    }
    let start = 4 + 4 * ndims;
    let payload = &bytes[start..];
    if payload.len() < volume {
        return Err(parse_err(
            bytes.len(),
            format!("truncated payload: expected {volume} bytes, found {}", payload.len()),
        ));
    }
    if payload.len() > volume {
        return Err(parse_err(start + volume, "trailing bytes after payload"));
    }
    Ok(match ndims {
        1 => IdxPayload::Labels(payload.iter().map(|&b| b as usize).collect()),
        _ => {
            let shape = if ndims == 3 {
                vec![dims[0], 1, dims[1], dims[2]]
            } else {
                dims
            };
            let data = payload.iter().map(|&b| b as f64 / 255.0).collect();
            IdxPayload::Images(Tensor::new(shape, data).expect("volume checked"))
        }
    })
}

fn to_byte(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

pub fn write_idx_labels(labels: &[usize]) -> Result<Vec<u8>, DataError> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    for &l in labels {
        let b = u8::try_from(l).map_err(|_| DataError::Invalid(format!("label {l} does not fit in a byte")))?;
        out.push(b);
    }
    Ok(out)
}

/// Encodes an `(n, c, h, w)` image tensor; single-channel stacks use the
/// three-dimensional MNIST layout.
pub fn write_idx_images(images: &Tensor) -> Vec<u8> {
    let (n, c, h, w) = images.dims4().expect("image tensor is rank 4");
    let (magic, dims) = if c == 1 {
        (IMAGES_MAGIC, vec![n, h, w])
    } else {
        (IMAGES4_MAGIC, vec![n, c, h, w])
    };
    let mut out = Vec::with_capacity(4 + 4 * dims.len() + images.len());
    out.extend_from_slice(&magic.to_be_bytes());
    for d in dims {
        out.extend_from_slice(&(d as u32).to_be_bytes());
    }
    out.extend(images.data().iter().map(|&v| to_byte(v)));
    out
}

/// The image and label files of one dataset split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxFiles {
    pub images: Vec<u8>,
    pub labels: Vec<u8>,
}

pub fn write_idx(dataset: &Dataset) -> Result<IdxFiles, DataError> {
    Ok(IdxFiles {
        images: write_idx_images(dataset.images()),
        labels: write_idx_labels(dataset.labels())?,
    })
}

/// Rebuilds a dataset from its image and label files.
pub fn read_idx(files: &IdxFiles, num_classes: usize) -> Result<Dataset, DataError> {
    let images = match parse_idx(&files.images)? {
        IdxPayload::Images(t) => t,
        IdxPayload::Labels(_) => return Err(DataError::Invalid("expected an image file".into())),
    };
    let labels = match parse_idx(&files.labels)? {
        IdxPayload::Labels(l) => l,
        IdxPayload::Images(_) => return Err(DataError::Invalid("expected a label file".into())),
    };
    Dataset::new(images, labels, num_classes)
}

/// Training and test splits of MNIST.
#[derive(Debug, Clone)]
pub struct Mnist {
    pub train: Dataset,
    pub test: Dataset,
}

const MNIST_FILES: [(&str, &str); 4] = [
    ("train-images-idx3-ubyte", "train-images.idx3-ubyte"),
    ("train-labels-idx1-ubyte", "train-labels.idx1-ubyte"),
    ("t10k-images-idx3-ubyte", "t10k-images.idx3-ubyte"),
    ("t10k-labels-idx1-ubyte", "t10k-labels.idx1-ubyte"),
];

fn locate(dir: &Path, (name, alt): (&str, &str)) -> PathBuf {
    let primary = dir.join(name);
    if primary.exists() {
        primary
    } else if dir.join(alt).exists() {
        dir.join(alt)
    } else {
        primary
    }
}

/// True when all four uncompressed MNIST files are present in `dir`.
pub fn mnist_available(dir: &Path) -> bool {
    MNIST_FILES.iter().all(|&f| locate(dir, f).exists())
}

/// Reads the four uncompressed MNIST files from `dir`.
pub fn load_mnist(dir: &Path) -> Result<Mnist, DataError> {
    let read = |f| {
        let path = locate(dir, f);
        fs::read(&path).map_err(|source| DataError::Io { path, source })
    };
    let split = |images, labels| -> Result<Dataset, DataError> {
        read_idx(
            &IdxFiles {
                images: read(images)?,
                labels: read(labels)?,
            },
            10,
        )
    };
    Ok(Mnist {
        train: split(MNIST_FILES[0], MNIST_FILES[1])?,
        test: split(MNIST_FILES[2], MNIST_FILES[3])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_encoded_labels() {
        let bytes = [0, 0, 8, 1, 0, 0, 0, 3, 1, 2, 3];
        assert_eq!(parse_idx(&bytes).unwrap(), IdxPayload::Labels(vec![1, 2, 3]));
    }

    #[test]
    fn hand_encoded_image() {
        let bytes = [0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 255, 0, 255];
        let IdxPayload::Images(t) = parse_idx(&bytes).unwrap() else {
            panic!("expected images");
        };
        assert_eq!(t.shape(), &[1, 1, 2, 2]);
        assert_eq!(t.data(), &[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(write_idx_images(&t), bytes.to_vec());
    }

    #[test]
    fn malformed_streams() {
        assert!(matches!(parse_idx(&[]), Err(DataError::Parse { offset: 0, .. })));
        assert!(matches!(
            parse_idx(&[0, 0, 8, 9, 0, 0, 0, 0]),
            Err(DataError::Parse { offset: 0, .. })
        ));
        assert!(matches!(
            parse_idx(&[0, 0, 8, 1, 0, 0, 0, 4, 1, 2]),
            Err(DataError::Parse { offset: 10, .. })
        ));
        assert!(matches!(
            parse_idx(&[0, 0, 8, 3, 0, 0, 0, 1, 0, 0]),
            Err(DataError::Parse { offset: 8, .. })
        ));
        let huge = [0, 0, 8, 3, 255, 255, 255, 255, 255, 255, 255, 255, 255, 255, 255, 255];
        if usize::BITS == 64 {
            assert!(matches!(parse_idx(&huge), Err(DataError::Parse { offset: 12, .. })));
        }
    }

    #[test]
    fn empty_dataset_has_header_only() {
        let d = Dataset::new(Tensor::zeros(&[0, 1, 2, 2]), vec![], 10).unwrap();
        let files = write_idx(&d).unwrap();
        assert_eq!(files.images.len(), 16);
        assert_eq!(files.labels.len(), 8);
        assert_eq!(read_idx(&files, 10).unwrap(), d);
    }

    #[test]
    fn normalization_recovers_bytes() {
        for b in 0..=255u8 {
            assert_eq!(to_byte(b as f64 / 255.0), b);
        }
    }
}
