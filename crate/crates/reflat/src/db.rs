//! Compact persisted databases of classified polytopes: sorted canonical
//! keys with dual-pair links.
//!
//! Layout (all little-endian, platform-independent): magic "RPDB",
//! version byte, dimension byte, u64 record count, then per record the
//! binary key followed by the u32 index of its dual, and a trailing CRC32
//! of everything before it.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::normal_form::NormalFormKey;

const MAGIC: &[u8; 4] = b"RPDB";
const VERSION: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDatabase {
    dim: usize,
    keys: Vec<NormalFormKey>,
    dual_index: Vec<u32>,
}

impl ClassDatabase {
    /// Build from an involutive dual mapping on keys.
    pub fn from_dual_pairs(dim: usize, pairs: &BTreeMap<NormalFormKey, NormalFormKey>) -> Result<ClassDatabase> {
        let keys: Vec<NormalFormKey> = pairs.keys().cloned().collect();
        let mut dual_index = Vec::with_capacity(keys.len());
        for k in &keys {
            let d = &pairs[k];
            let i = keys
                .binary_search(d)
                .map_err(|_| Error::CorruptDatabase("dual link leaves the key set".into()))?;
            dual_index.push(i as u32);
        }
        let db = ClassDatabase { dim, keys, dual_index };
        db.validate()?;
        Ok(db)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Error::CorruptDatabase(m.into());
        for w in self.keys.windows(2) {
            if w[0] >= w[1] {
                return Err(bad("records not strictly sorted"));
            }
        }
        if self.dual_index.len() != self.keys.len() {
            return Err(bad("dual index length mismatch"));
        }
        for (i, &d) in self.dual_index.iter().enumerate() {
            let d = d as usize;
            if d >= self.keys.len() || self.dual_index[d] as usize != i {
                return Err(bad("dual index is not an involution"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[NormalFormKey] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &NormalFormKey {
        &self.keys[i]
    }

    pub fn dual_of(&self, i: usize) -> usize {
        self.dual_index[i] as usize
    }

    pub fn contains(&self, key: &NormalFormKey) -> bool {
        self.keys.binary_search(key).is_ok()
    }

    pub fn self_dual_count(&self) -> usize {
        self.dual_index.iter().enumerate().filter(|&(i, &d)| i == d as usize).count()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.dim as u8);
        out.extend_from_slice(&(self.keys.len() as u64).to_le_bytes());
        for (k, &d) in self.keys.iter().zip(&self.dual_index) {
            out.extend_from_slice(k.as_bytes());
            out.extend_from_slice(&d.to_le_bytes());
        }
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn from_bytes(data: &[u8]) -> Result<ClassDatabase> {
        let bad = |m: &str| Error::CorruptDatabase(m.into());
        if data.len() < 18 {
            return Err(bad("file too short"));
        }
        if &data[..4] != MAGIC {
            return Err(bad("bad magic"));
        }
        if data[4] != VERSION {
            return Err(Error::VersionMismatch { found: data[4], expected: VERSION });
        }
        let dim = data[5] as usize;
        let count = u64::from_le_bytes(data[6..14].try_into().unwrap()) as usize;
        let body_end = data.len() - 4;
        let crc_stored = u32::from_le_bytes(data[body_end..].try_into().unwrap());
        if crc32fast::hash(&data[..body_end]) != crc_stored {
            return Err(bad("checksum mismatch"));
        }
        let mut pos = 14;
        let mut keys = Vec::with_capacity(count);
        let mut dual_index = Vec::with_capacity(count);
        for _ in 0..count {
            let (key, used) = NormalFormKey::from_bytes(&data[pos..body_end])?;
            pos += used;
            if body_end < pos + 4 {
                return Err(bad("truncated dual index"));
            }
            dual_index.push(u32::from_le_bytes(data[pos..pos + 4].try_into().unwrap()));
            pos += 4;
            if key.dim() != dim {
                return Err(Error::DimensionMismatch(dim, key.dim()));
            }
            keys.push(key);
        }
        if pos != body_end {
            return Err(bad("trailing bytes after records"));
        }
        let db = ClassDatabase { dim, keys, dual_index };
        db.validate()?;
        Ok(db)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<ClassDatabase> {
        let mut data = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut data)?;
        ClassDatabase::from_bytes(&data)
    }

    /// Sorted union with dual links recomputed; idempotent.
    pub fn merge(&self, other: &ClassDatabase) -> Result<ClassDatabase> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut pairs = BTreeMap::new();
        for db in [self, other] {
            for (i, k) in db.keys.iter().enumerate() {
                pairs.insert(k.clone(), db.keys[db.dual_of(i)].clone());
            }
        }
        ClassDatabase::from_dual_pairs(self.dim, &pairs)
    }
}
