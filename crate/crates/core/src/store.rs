//! Line-oriented persistent cache of computed values.
//!
//! ```text
//! # psi-store v1
//! mr;correlator;1;1,1;1/24
//! virasoro;normalized;2;4,1;7/11
//! ```
//!
//! One record per line: `producer;kind;g;d1,d2,...;num/den` with the
//! exponents sorted descending. Records are only ever appended. A repeated
//! record must be byte-identical in value; anything else is an integrity
//! violation. A trailing line without a newline is an unfinished append and
//! is ignored on read.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::index::{CorrelatorKey, MultiIndex};
use crate::source::{CorrelatorSource, Producer};

pub const HEADER: &str = "# psi-store v1";

/// Environment variable consulted for the default store path.
pub const STORE_ENV: &str = "PSI_STORE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Correlator,
    Normalized,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Correlator => "correlator",
            Kind::Normalized => "normalized",
        })
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "correlator" => Ok(Kind::Correlator),
            "normalized" => Ok(Kind::Normalized),
            other => Err(format!("unknown kind {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoreRecord {
    pub producer: Producer,
    pub key: CorrelatorKey,
    pub kind: Kind,
    pub value: Rational,
}

impl StoreRecord {
    pub fn to_line(&self) -> String {
        let ds: Vec<String> = self.key.ds.iter().map(|d| d.to_string()).collect();
        format!(
            "{};{};{};{};{}",
            self.producer,
            self.kind,
            self.key.g,
            ds.join(","),
            format_rational(&self.value)
        )
    }

    pub fn parse_line(line: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.split(';').collect();
        let [producer, kind, g, ds, value] = fields[..] else {
            return Err(format!("expected 5 fields, found {}", fields.len()));
        };
        let producer: Producer = producer.parse()?;
        let kind: Kind = kind.parse()?;
        let g: i64 = g.parse().map_err(|e| format!("bad genus {g:?}: {e}"))?;
        let ds = ds
            .split(',')
            .map(|d| d.parse::<u32>().map_err(|e| format!("bad exponent {d:?}: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let key = CorrelatorKey { g, ds };
        if !key.is_canonical() {
            return Err("exponents not sorted descending".into());
        }
        let value = parse_rational(value)?;
        Ok(StoreRecord { producer, key, kind, value })
    }
}

type Slot = (Producer, CorrelatorKey, Kind);

pub struct Store {
    path: Option<PathBuf>,
    records: Mutex<HashMap<Slot, Rational>>,
    writer: Mutex<Option<File>>,
}

impl Store {
    /// A store that lives only in memory.
    pub fn in_memory() -> Self {
        Store { path: None, records: Mutex::new(HashMap::new()), writer: Mutex::new(None) }
    }

    /// Open (or create) the file at `path` and load every complete record.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records = HashMap::new();
        let mut complete_len = None;
        if path.exists() {
            let mut text = String::new();
            File::open(&path)?.read_to_string(&mut text)?;
            complete_len = Some(load_records(&text, &mut records)?);
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&path)?;
        if let Some(len) = complete_len {
            if len < file.metadata()?.len() {
                // drop an unfinished append so the next record starts on its own line
                file.set_len(len)?;
            }
        }
        if file.metadata()?.len() == 0 {
            file.write_all(format!("{HEADER}\n").as_bytes())?;
        }
        Ok(Store { path: Some(path), records: Mutex::new(records), writer: Mutex::new(Some(file)) })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.records.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, producer: Producer, key: &CorrelatorKey, kind: Kind) -> Option<Rational> {
        let mut key = key.clone();
        key.ds.sort_unstable_by(|a, b| b.cmp(a));
        self.records.lock().get(&(producer, key, kind)).cloned()
    }

    /// Insert a record. Identical repeats are no-ops; a different value for
    /// an existing slot is an integrity error and nothing is written.
    pub fn put(&self, record: StoreRecord) -> Result<()> {
        if !record.key.is_canonical() {
            return Err(Error::Domain("store keys must be sorted descending".into()));
        }
        let slot = (record.producer, record.key.clone(), record.kind);
        let mut records = self.records.lock();
        if let Some(existing) = records.get(&slot) {
            if *existing == record.value {
                return Ok(());
            }
            return Err(Error::Integrity(format!(
                "{} {} g={} ({:?}): stored {} but new value {}",
                record.producer,
                record.kind,
                record.key.g,
                record.key.ds,
                format_rational(existing),
                format_rational(&record.value)
            )));
        }
        if let Some(file) = self.writer.lock().as_mut() {
            // one write call per line keeps appends whole
            file.write_all(format!("{}\n", record.to_line()).as_bytes())?;
        }
        records.insert(slot, record.value);
        Ok(())
    }

    pub fn flush(&self) -> Result<()> {
        if let Some(file) = self.writer.lock().as_mut() {
            file.flush()?;
            file.sync_data()?;
        }
        Ok(())
    }

    /// All records in sorted order.
    pub fn records(&self) -> Vec<StoreRecord> {
        let mut out: Vec<StoreRecord> = self
            .records
            .lock()
            .iter()
            .map(|((producer, key, kind), value)| StoreRecord {
                producer: *producer,
                key: key.clone(),
                kind: *kind,
                value: value.clone(),
            })
            .collect();
        out.sort_by(|a, b| (a.producer, &a.key, a.kind).cmp(&(b.producer, &b.key, b.kind)));
        out
    }
}

/// Load complete lines; returns the byte length of the complete prefix.
fn load_records(text: &str, records: &mut HashMap<Slot, Rational>) -> Result<u64> {
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    for (i, line) in complete.lines().enumerate() {
        let lineno = i + 1;
        if lineno == 1 {
            if line != HEADER {
                return Err(Error::StoreRead { line: 1, reason: format!("expected header {HEADER:?}") });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let rec = StoreRecord::parse_line(line).map_err(|reason| Error::StoreRead { line: lineno, reason })?;
        let slot = (rec.producer, rec.key, rec.kind);
        match records.get(&slot) {
            Some(v) if *v != rec.value => {
                return Err(Error::Integrity(format!("line {lineno} conflicts with an earlier record")));
            }
            Some(_) => {}
            None => {
                records.insert(slot, rec.value);
            }
        }
    }
    Ok(complete.len() as u64)
}

/// A correlator source whose results are read from and written to a store
/// under the wrapped source's producer tag.
pub struct Persisted<'a, S> {
    pub source: &'a S,
    pub store: &'a Store,
}

impl<'a, S: CorrelatorSource> Persisted<'a, S> {
    pub fn new(source: &'a S, store: &'a Store) -> Self {
        Persisted { source, store }
    }

    fn cached(&self, d: &MultiIndex, kind: Kind, compute: impl FnOnce() -> Result<Rational>) -> Result<Rational> {
        let Some(g) = d.stable_genus()? else {
            return compute();
        };
        let key = CorrelatorKey { g, ds: d.sorted_desc() };
        let producer = self.source.producer();
        if let Some(v) = self.store.get(producer, &key, kind) {
            return Ok(v);
        }
        let value = compute()?;
        self.store.put(StoreRecord { producer, key, kind, value: value.clone() })?;
        Ok(value)
    }
}

impl<S: CorrelatorSource> CorrelatorSource for Persisted<'_, S> {
    fn producer(&self) -> Producer {
        self.source.producer()
    }

    fn correlator(&self, d: &MultiIndex) -> Result<Rational> {
        self.cached(d, Kind::Correlator, || self.source.correlator(d))
    }

    fn normalized(&self, d: &MultiIndex) -> Result<Rational> {
        self.cached(d, Kind::Normalized, || self.source.normalized(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn rec(producer: Producer, g: i64, ds: &[u32], value: Rational) -> StoreRecord {
        StoreRecord { producer, key: CorrelatorKey { g, ds: ds.to_vec() }, kind: Kind::Correlator, value }
    }

    #[test]
    fn line_format() {
        let r = rec(Producer::Mr, 1, &[1, 1], ratio(1, 24));
        assert_eq!(r.to_line(), "mr;correlator;1;1,1;1/24");
        assert_eq!(StoreRecord::parse_line(&r.to_line()).unwrap(), r);
        assert!(StoreRecord::parse_line("mr;correlator;1;1,2;1/24").is_err());
        assert!(StoreRecord::parse_line("mr;bogus;1;1;1/24").is_err());
    }

    #[test]
    fn missing_and_isolation() {
        let s = Store::in_memory();
        let key = CorrelatorKey { g: 1, ds: vec![1] };
        assert_eq!(s.get(Producer::Mr, &key, Kind::Correlator), None);
        s.put(rec(Producer::Mr, 1, &[1], ratio(1, 24))).unwrap();
        assert_eq!(s.get(Producer::Mr, &key, Kind::Correlator), Some(ratio(1, 24)));
        assert_eq!(s.get(Producer::Virasoro, &key, Kind::Correlator), None);
        assert_eq!(s.get(Producer::Mr, &key, Kind::Normalized), None);
    }

    #[test]
    fn duplicate_and_conflict() {
        let s = Store::in_memory();
        s.put(rec(Producer::Mr, 1, &[1], ratio(1, 24))).unwrap();
        s.put(rec(Producer::Mr, 1, &[1], ratio(1, 24))).unwrap();
        assert_eq!(s.len(), 1);
        let err = s.put(rec(Producer::Mr, 1, &[1], ratio(1, 25))).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));
    }

    #[test]
    fn reopen_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.txt");
        {
            let s = Store::open(&path).unwrap();
            s.put(rec(Producer::Virasoro, 2, &[4, 1], ratio(1, 384))).unwrap();
            s.flush().unwrap();
        }
        let s = Store::open(&path).unwrap();
        let key = CorrelatorKey { g: 2, ds: vec![4, 1] };
        assert_eq!(s.get(Producer::Virasoro, &key, Kind::Correlator), Some(ratio(1, 384)));
        drop(s);

        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"mr;correlator;x;1;1/2\n").unwrap();
        drop(f);
        match Store::open(&path) {
            Err(Error::StoreRead { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected read error, got {:?}", other.map(|s| s.len())),
        }
    }

    #[test]
    fn partial_trailing_line_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.txt");
        std::fs::write(&path, format!("{HEADER}\nmr;correlator;1;1;1/24\nmr;correl")).unwrap();
        let s = Store::open(&path).unwrap();
        assert_eq!(s.len(), 1);
        s.put(rec(Producer::Mr, 1, &[1, 1], ratio(1, 24))).unwrap();
        drop(s);
        assert_eq!(Store::open(&path).unwrap().len(), 2);
    }
}
