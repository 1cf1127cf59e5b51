//! Content-addressed coefficient store.
//!
//! Layout: `index.json` maps record keys to SHA-256 hashes, and each record
//! lives in `records/<hash>.json`. Files are written to a temporary sibling
//! and renamed into place, so a reader never sees a partial record.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chain::angmom::Chain3Row;
use crate::chain::isospin::Chain2Row;
use crate::error::{Error, Result};
use crate::racah::{Conventions, CouplingKey, IsoscalarBlock};
use crate::so5::So5Irrep;

pub const ENGINE: &str = concat!("so5-coupling ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainTag {
    So4,
    Isospin,
    Angmom,
}

impl ChainTag {
    pub fn name(self) -> &'static str {
        match self {
            ChainTag::So4 => "so4",
            ChainTag::Isospin => "isospin",
            ChainTag::Angmom => "angmom",
        }
    }
}

impl fmt::Display for ChainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChainTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "so4" => Ok(ChainTag::So4),
            "isospin" => Ok(ChainTag::Isospin),
            "angmom" => Ok(ChainTag::Angmom),
            _ => Err(Error::Parse(format!("unknown chain {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RecordKey {
    pub chain: ChainTag,
    pub g1: So5Irrep,
    pub g2: So5Irrep,
    pub g: So5Irrep,
}

impl RecordKey {
    pub fn coupling(&self) -> CouplingKey {
        CouplingKey { g1: self.g1, g2: self.g2, g: self.g }
    }
}

impl fmt::Display for RecordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.chain, self.coupling())
    }
}

impl FromStr for RecordKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (chain, rest) = s.split_once(' ').ok_or_else(|| Error::Parse(format!("bad record key {s:?}")))?;
        let c: CouplingKey = rest.parse()?;
        Ok(RecordKey { chain: chain.parse()?, g1: c.g1, g2: c.g2, g: c.g })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "chain", rename_all = "lowercase")]
pub enum Payload {
    So4 { block: IsoscalarBlock },
    Isospin { block: IsoscalarBlock, kappa_rule: String, rows: Vec<Chain2Row> },
    Angmom { block: IsoscalarBlock, alpha_rule: String, rows: Vec<Chain3Row> },
}

impl Payload {
    pub fn block(&self) -> &IsoscalarBlock {
        match self {
            Payload::So4 { block } | Payload::Isospin { block, .. } | Payload::Angmom { block, .. } => block,
        }
    }

    pub fn chain(&self) -> ChainTag {
        match self {
            Payload::So4 { .. } => ChainTag::So4,
            Payload::Isospin { .. } => ChainTag::Isospin,
            Payload::Angmom { .. } => ChainTag::Angmom,
        }
    }

    /// Hex SHA-256 of the canonical JSON serialization.
    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("payload serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub engine: String,
    pub conventions: Conventions,
    pub hash: String,
}

/// One self-describing coupling record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreRecord {
    pub key: RecordKey,
    pub meta: Meta,
    pub payload: Payload,
}

impl StoreRecord {
    pub fn new(payload: Payload) -> StoreRecord {
        let b = payload.block();
        let key = RecordKey { chain: payload.chain(), g1: b.key.g1, g2: b.key.g2, g: b.key.g };
        let meta = Meta { engine: ENGINE.into(), conventions: b.conventions.clone(), hash: payload.content_hash() };
        StoreRecord { key, meta, payload }
    }

    pub fn to_json(&self) -> String {
        crate::format::to_json(self)
    }

    pub fn from_json(s: &str) -> Result<StoreRecord> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Structural checks that need no recomputation.
    pub fn integrity_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let actual = self.payload.content_hash();
        if actual != self.meta.hash {
            out.push(format!("{}: hash mismatch (stamped {}, content {actual})", self.key, self.meta.hash));
        }
        let b = self.payload.block();
        if self.payload.chain() != self.key.chain || b.key != self.key.coupling() {
            out.push(format!("{}: key does not match payload", self.key));
        }
        if b.conventions != self.meta.conventions {
            out.push(format!("{}: convention flags differ between meta and payload", self.key));
        }
        out
    }
}

fn io_err(path: &Path, e: impl fmt::Display) -> Error {
    Error::Store(format!("{}: {e}", path.display()))
}

/// Write `contents` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().ok_or_else(|| io_err(path, "no parent directory"))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    tmp.write_all(contents).map_err(|e| io_err(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| io_err(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

/// Per-record outcome of a store scan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StoreReport {
    pub checked: usize,
    pub failures: BTreeMap<String, Vec<String>>,
}

impl StoreReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug)]
pub struct Store {
    root: PathBuf,
    index: BTreeMap<String, String>,
}

impl Store {
    pub const INDEX: &'static str = "index.json";
    pub const RECORDS: &'static str = "records";

    /// Open or create a store rooted at `root`.
    pub fn open(root: impl AsRef<Path>) -> Result<Store> {
        let root = root.as_ref().to_path_buf();
        let records = root.join(Self::RECORDS);
        fs::create_dir_all(&records).map_err(|e| io_err(&records, e))?;
        let index_path = root.join(Self::INDEX);
        let index = match fs::read_to_string(&index_path) {
            Ok(s) => serde_json::from_str(&s).map_err(|e| io_err(&index_path, e))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(io_err(&index_path, e)),
        };
        Ok(Store { root, index })
    }

    /// Open an existing store without creating anything.
    pub fn open_existing(root: impl AsRef<Path>) -> Result<Store> {
        let root = root.as_ref();
        if !root.join(Self::INDEX).is_file() {
            return Err(io_err(root, "not a store (index.json missing)"));
        }
        Store::open(root)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn record_path(&self, hash: &str) -> PathBuf {
        self.root.join(Self::RECORDS).join(format!("{hash}.json"))
    }

    pub fn hash_of(&self, key: &RecordKey) -> Option<&str> {
        self.index.get(&key.to_string()).map(String::as_str)
    }

    /// Indexed and its record file is present.
    pub fn contains(&self, key: &RecordKey) -> bool {
        self.hash_of(key).is_some_and(|h| self.record_path(h).is_file())
    }

    pub fn load(&self, key: &RecordKey) -> Result<Option<StoreRecord>> {
        let Some(hash) = self.hash_of(key) else { return Ok(None) };
        let path = self.record_path(hash);
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        StoreRecord::from_json(&text).map(Some)
    }

    /// Write the record file; safe to call from several threads.
    pub fn write_record(&self, rec: &StoreRecord) -> Result<()> {
        let path = self.record_path(&rec.meta.hash);
        if path.is_file() {
            return Ok(());
        }
        write_atomic(&path, rec.to_json().as_bytes())
    }

    pub fn register(&mut self, rec: &StoreRecord) {
        self.index.insert(rec.key.to_string(), rec.meta.hash.clone());
    }

    pub fn put(&mut self, rec: &StoreRecord) -> Result<()> {
        self.write_record(rec)?;
        self.register(rec);
        self.flush()
    }

    pub fn flush(&self) -> Result<()> {
        let mut s = serde_json::to_string_pretty(&self.index).expect("index serializes");
        s.push('\n');
        write_atomic(&self.root.join(Self::INDEX), s.as_bytes())
    }

    /// Index entries as `(key, hash)` in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.index.iter().map(|(k, h)| (k.as_str(), h.as_str()))
    }

    /// Read one indexed record and run the structural checks.
    pub fn read_checked(&self, key: &str, hash: &str) -> std::result::Result<StoreRecord, Vec<String>> {
        let path = self.record_path(hash);
        let text = fs::read_to_string(&path).map_err(|e| vec![format!("{key}: {}", io_err(&path, e))])?;
        let rec = StoreRecord::from_json(&text).map_err(|e| vec![format!("{key}: unreadable record: {e}")])?;
        let mut failures = rec.integrity_failures();
        if rec.meta.hash != hash {
            failures.push(format!("{key}: index points at {hash}, record stamped {}", rec.meta.hash));
        }
        if rec.key.to_string() != key {
            failures.push(format!("{key}: record carries key {}", rec.key));
        }
        if failures.is_empty() {
            Ok(rec)
        } else {
            Err(failures)
        }
    }
}
