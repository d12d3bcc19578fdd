//! Content-addressed Gram matrix cache.
//!
//! On-disk entries are `<key>.gram` files: the 8-byte magic `QSVMGRAM`,
//! a little-endian `u32` format version (1), `u64` rows, `u64` cols, then
//! `rows * cols` little-endian `f64` values in row-major order.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use sha2::{Digest, Sha256};

use super::{KernelKind, KernelMatrix};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"QSVMGRAM";
const VERSION: u32 = 1;

/// SHA-256 over the kernel descriptor and the exact bit patterns of the samples.
pub fn content_key(samples: &[Vec<f64>], kind: &KernelKind) -> String {
    let mut h = Sha256::new();
    h.update(kind.descriptor().as_bytes());
    h.update((samples.len() as u64).to_le_bytes());
    for s in samples {
        h.update((s.len() as u64).to_le_bytes());
        for v in s {
            h.update(v.to_bits().to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

/// Gram matrices keyed by [`content_key`]. Reads are concurrent; inserts take
/// the write lock. With a directory attached, entries are persisted as well.
#[derive(Debug, Default)]
pub struct GramCache {
    dir: Option<PathBuf>,
    entries: RwLock<HashMap<String, Arc<KernelMatrix>>>,
}

impl GramCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir: Some(dir),
            entries: RwLock::default(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.read().map(|e| e.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.gram")))
    }

    pub fn get(&self, key: &str) -> Option<Arc<KernelMatrix>> {
        self.entries.read().ok()?.get(key).cloned()
    }

    /// Returns the cached matrix for `(samples, kind)`, computing and storing it on a miss.
    pub fn get_or_compute<F>(&self, samples: &[Vec<f64>], kind: &KernelKind, compute: F) -> Result<Arc<KernelMatrix>>
    where
        F: FnOnce() -> Result<KernelMatrix>,
    {
        let key = content_key(samples, kind);
        if let Some(hit) = self.get(&key) {
            return Ok(hit);
        }
        let matrix = match self.path_for(&key).filter(|p| p.exists()) {
            Some(path) => read_binary(&fs::read(path)?, kind.clone())?,
            None => {
                let m = compute()?;
                if let Some(path) = self.path_for(&key) {
                    fs::write(path, write_binary(&m))?;
                }
                m
            }
        };
        let matrix = Arc::new(matrix);
        let mut entries = self
            .entries
            .write()
            .map_err(|_| Error::InvalidParameter("gram cache lock poisoned".into()))?;
        Ok(entries.entry(key).or_insert(matrix).clone())
    }
}

pub(crate) fn write_binary(m: &KernelMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(28 + 8 * m.data().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u64).to_le_bytes());
    for v in m.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub(crate) fn read_binary(bytes: &[u8], kind: KernelKind) -> Result<KernelMatrix> {
    let bad = |what: &str| Error::Parse(format!("gram cache entry: {what}"));
    if bytes.len() < 28 || &bytes[..8] != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != VERSION {
        return Err(bad("unsupported version"));
    }
    let rows = u64::from_le_bytes(bytes[12..20].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(bytes[20..28].try_into().unwrap()) as usize;
    let body = &bytes[28..];
    if rows.checked_mul(cols).and_then(|n| n.checked_mul(8)) != Some(body.len()) {
        return Err(bad("truncated body"));
    }
    let data = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(KernelMatrix::from_parts(rows, cols, data, kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{gram, ClassicalKernelParams};
    use std::cell::Cell;

    fn rbf() -> KernelKind {
        KernelKind::Classical(ClassicalKernelParams::Rbf { gamma: 0.5 })
    }

    #[test]
    fn key_depends_on_samples_and_kind() {
        let a = vec![vec![1.0, 2.0]];
        let b = vec![vec![1.0, 2.000000001]];
        assert_eq!(content_key(&a, &rbf()), content_key(&a.clone(), &rbf()));
        assert_ne!(content_key(&a, &rbf()), content_key(&b, &rbf()));
        let lin = KernelKind::Classical(ClassicalKernelParams::Linear);
        assert_ne!(content_key(&a, &rbf()), content_key(&a, &lin));
    }

    #[test]
    fn computes_once() {
        let cache = GramCache::in_memory();
        let xs = vec![vec![0.0], vec![1.0]];
        let calls = Cell::new(0);
        for _ in 0..3 {
            cache
                .get_or_compute(&xs, &rbf(), || {
                    calls.set(calls.get() + 1);
                    gram(&xs, &rbf(), 1)
                })
                .unwrap();
        }
        assert_eq!(calls.get(), 1);
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn disk_entries_survive_a_new_cache() {
        let dir = tempfile::tempdir().unwrap();
        let xs = vec![vec![0.0, 1.0], vec![1.0, -3.0], vec![0.2, 0.2]];
        let first = GramCache::with_dir(dir.path()).unwrap();
        let m = first.get_or_compute(&xs, &rbf(), || gram(&xs, &rbf(), 1)).unwrap();
        let second = GramCache::with_dir(dir.path()).unwrap();
        let again = second
            .get_or_compute(&xs, &rbf(), || panic!("should be served from disk"))
            .unwrap();
        assert_eq!(*m, *again);
    }

    #[test]
    fn rejects_corrupt_binary() {
        let xs = vec![vec![0.0], vec![1.0]];
        let bytes = write_binary(&gram(&xs, &rbf(), 1).unwrap());
        assert!(read_binary(&bytes[..bytes.len() - 1], rbf()).is_err());
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        assert!(read_binary(&wrong, rbf()).is_err());
        assert!(read_binary(&bytes, rbf()).is_ok());
    }
}
