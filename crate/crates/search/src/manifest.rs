//! Line-delimited JSON manifests with a SHA-256 trailer.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use selfdual_core::analytics::FitReport;

use crate::SearchError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    E,
    F,
}

/// Totally ordered by `(stage, m2, tau, diag, mu)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaskKey {
    pub stage: Stage,
    pub m2: String,
    pub tau: u8,
    pub diag: u16,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<u16>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Header {
        version: u32,
        stage: Stage,
        seed: Option<u64>,
        /// Content hashes of the inputs, in processing order.
        inputs: Vec<String>,
        /// Transversal indices searched in stage E.
        taus: Vec<u8>,
        tasks: u64,
        chunk: u64,
    },
    Survivor {
        index: u64,
        task: TaskKey,
        hash: String,
        file: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_distance: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fit: Option<FitReport>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        aut_order: Option<u64>,
    },
    Diagnostic {
        index: u64,
        task: TaskKey,
        message: String,
    },
    Cursor {
        next: u64,
    },
    Class {
        representative: String,
        members: Vec<String>,
        key: String,
        weights: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        aut_order: Option<u64>,
    },
    Flag {
        a: String,
        b: String,
        reason: String,
    },
    Complete {
        distinct_survivors: usize,
        classes: usize,
        flagged: usize,
    },
    Checksum {
        sha256: String,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest {
    pub records: Vec<Record>,
}

fn body(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

impl Manifest {
    pub fn header(&self) -> Option<&Record> {
        self.records.first().filter(|r| matches!(r, Record::Header { .. }))
    }

    /// Index of the next task to run.
    pub fn cursor(&self) -> u64 {
        self.records.iter().rev().find_map(|r| if let Record::Cursor { next } = r { Some(*next) } else { None }).unwrap_or(0)
    }

    pub fn is_complete(&self) -> bool {
        self.records.iter().any(|r| matches!(r, Record::Complete { .. }))
    }

    pub fn survivors(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| matches!(r, Record::Survivor { .. }))
    }

    pub fn classes(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| matches!(r, Record::Class { .. }))
    }

    /// Survivor hashes, each once, in order of first appearance.
    pub fn distinct_survivors(&self) -> Vec<(String, String, TaskKey)> {
        let mut seen = std::collections::HashSet::new();
        self.survivors()
            .filter_map(|r| match r {
                Record::Survivor { hash, file, task, .. } if seen.insert(hash.clone()) => Some((hash.clone(), file.clone(), task.clone())),
                _ => None,
            })
            .collect()
    }

    /// The serialized text including the checksum trailer.
    pub fn to_text(&self) -> String {
        let text = body(&self.records);
        let sum = hex::encode(Sha256::digest(text.as_bytes()));
        let trailer = serde_json::to_string(&Record::Checksum { sha256: sum }).unwrap();
        format!("{text}{trailer}\n")
    }

    /// Digest of the full text, used to pin one stage's output as the next stage's input.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    /// Parses and checks the trailer. Any truncation or edit is an integrity error.
    pub fn parse(text: &str) -> Result<Manifest, SearchError> {
        let lines: Vec<&str> = text.lines().collect();
        let Some((last, rest)) = lines.split_last() else {
            return Err(SearchError::Integrity("empty manifest".into()));
        };
        let trailer: Record = serde_json::from_str(last).map_err(|e| SearchError::Integrity(format!("unreadable trailer: {e}")))?;
        let Record::Checksum { sha256 } = trailer else {
            return Err(SearchError::Integrity("missing checksum trailer".into()));
        };
        let mut records = Vec::with_capacity(rest.len());
        for (i, line) in rest.iter().enumerate() {
            let r: Record = serde_json::from_str(line).map_err(|e| SearchError::Format { line: i + 1, msg: e.to_string() })?;
            if matches!(r, Record::Checksum { .. }) {
                return Err(SearchError::Integrity(format!("checksum record inside body at line {}", i + 1)));
            }
            records.push(r);
        }
        if hex::encode(Sha256::digest(body(&records).as_bytes())) != sha256 {
            return Err(SearchError::Integrity("checksum mismatch".into()));
        }
        let m = Manifest { records };
        if m.header().is_none() {
            return Err(SearchError::Integrity("first record is not a header".into()));
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Manifest, SearchError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Writes to a sibling temp file, syncs, then renames over `path`.
    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_text().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Manifest {
        Manifest {
            records: vec![
                Record::Header { version: FORMAT_VERSION, stage: Stage::E, seed: Some(3), inputs: vec!["ab".into()], taus: vec![0, 1], tasks: 10, chunk: 5 },
                Record::Survivor {
                    index: 2,
                    task: TaskKey { stage: Stage::E, m2: "ab".into(), tau: 0, diag: 2, mu: None },
                    hash: "cd".into(),
                    file: "e72/cd.gm2".into(),
                    min_distance: None,
                    fit: None,
                    aut_order: None,
                },
                Record::Cursor { next: 5 },
            ],
        }
    }

    #[test]
    fn round_trip() {
        let m = sample();
        assert_eq!(Manifest::parse(&m.to_text()).unwrap(), m);
        assert_eq!(m.cursor(), 5);
    }

    #[test]
    fn tampering_is_detected() {
        let text = sample().to_text();
        let edited = text.replacen("\"diag\":2", "\"diag\":3", 1);
        assert!(matches!(Manifest::parse(&edited), Err(SearchError::Integrity(_))));
        let truncated: String = text.lines().take(2).map(|l| format!("{l}\n")).collect();
        assert!(matches!(Manifest::parse(&truncated), Err(SearchError::Integrity(_))));
        assert!(Manifest::parse("").is_err());
    }

    #[test]
    fn field_order_is_stable() {
        let line = serde_json::to_string(&sample().records[1]).unwrap();
        assert!(line.starts_with("{\"record\":\"survivor\",\"index\":2,\"task\":{\"stage\":\"E\",\"m2\":\"ab\",\"tau\":0,\"diag\":2}"));
    }

    proptest::proptest! {
        #[test]
        fn any_body_round_trips_and_any_byte_flip_is_caught(
            survivors in proptest::collection::vec((0u64..1000, 0u8..30, 0u16..6561, "[0-9a-f]{8}"), 0..12),
            flip in 0usize..4096,
        ) {
            let mut m = sample();
            for (index, tau, diag, hash) in survivors {
                m.records.push(Record::Survivor {
                    index,
                    task: TaskKey { stage: Stage::E, m2: "ab".into(), tau, diag, mu: None },
                    file: format!("e72/{hash}.gm2"),
                    hash,
                    min_distance: None,
                    fit: None,
                    aut_order: None,
                });
            }
            let text = m.to_text();
            proptest::prop_assert_eq!(Manifest::parse(&text).unwrap(), m.clone());
            let body_len = text.len() - text.lines().last().unwrap().len() - 1;
            let at = flip % body_len;
            let mut bytes = text.into_bytes();
            bytes[at] = if bytes[at] == b'1' { b'2' } else { b'1' };
            let edited = String::from_utf8(bytes).unwrap();
            proptest::prop_assert!(Manifest::parse(&edited).is_err());
        }
    }

    #[test]
    fn atomic_save() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.jsonl");
        sample().save(&p).unwrap();
        assert_eq!(Manifest::load(&p).unwrap(), sample());
        assert!(!p.with_extension("tmp").exists());
    }
}
