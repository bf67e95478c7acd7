//! Append-only TSV store of computed relative class numbers.
//!
//! One record per line: `p e modulus prime m h_minus h_tilde_minus version`,
//! tab-separated, with `-` standing for the modulus of a prime field. Lines
//! starting with `#` are comments.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub p: u32,
    pub e: u32,
    pub modulus: String,
    pub prime: String,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheRecord {
    pub key: CacheKey,
    pub h_minus: String,
    pub h_tilde_minus: String,
    pub version: String,
}

impl CacheRecord {
    fn to_line(&self) -> String {
        let k = &self.key;
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            k.p, k.e, k.modulus, k.prime, k.m, self.h_minus, self.h_tilde_minus, self.version
        )
    }

    fn from_line(line: &str) -> Option<Self> {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 8 || f.iter().any(|s| s.is_empty()) {
            return None;
        }
        let decimal = |s: &str| s.parse::<BigUint>().ok().map(|_| s.to_string());
        Some(CacheRecord {
            key: CacheKey {
                p: f[0].parse().ok()?,
                e: f[1].parse().ok()?,
                modulus: f[2].to_string(),
                prime: f[3].to_string(),
                m: f[4].parse().ok()?,
            },
            h_minus: decimal(f[5])?,
            h_tilde_minus: decimal(f[6])?,
            version: f[7].to_string(),
        })
    }
}

pub struct Cache {
    path: PathBuf,
    records: Vec<CacheRecord>,
}

impl Cache {
    /// Loads every well-formed record. Malformed lines are reported in the
    /// returned warnings and otherwise ignored; a missing file is an empty cache.
    pub fn open(path: &Path) -> io::Result<(Cache, Vec<String>)> {
        let mut records = Vec::new();
        let mut warnings = Vec::new();
        match File::open(path) {
            Ok(file) => {
                for (i, line) in BufReader::new(file).lines().enumerate() {
                    let line = match line {
                        Ok(l) => l,
                        Err(e) => {
                            warnings.push(format!("line {}: unreadable ({e})", i + 1));
                            continue;
                        }
                    };
                    if line.trim().is_empty() || line.starts_with('#') {
                        continue;
                    }
                    match CacheRecord::from_line(&line) {
                        Some(r) => records.push(r),
                        None => warnings.push(format!("line {}: malformed record skipped", i + 1)),
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok((
            Cache {
                path: path.to_path_buf(),
                records,
            },
            warnings,
        ))
    }

    pub fn get(&self, key: &CacheKey) -> Option<&CacheRecord> {
        self.records.iter().find(|r| &r.key == key)
    }

    /// Appends `record` unless its key is already present.
    pub fn put(&mut self, record: CacheRecord) -> io::Result<()> {
        if self.get(&record.key).is_some() {
            return Ok(());
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{}", record.to_line())?;
        self.records.push(record);
        Ok(())
    }
}
