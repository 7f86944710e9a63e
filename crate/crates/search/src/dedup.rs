//! Grouping codes into equivalence classes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use selfdual_core::code::BinaryCode;
use selfdual_core::equivalence::{aut_group_order, are_equivalent, invariant_key, AutResult, EquivalenceVerdict, InvariantKey};

use crate::SearchError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub representative: String,
    /// Input order, representative first.
    pub members: Vec<String>,
    pub key: String,
    pub weights: Vec<u64>,
    pub aut_order: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub a: String,
    pub b: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dedup {
    pub classes: Vec<Class>,
    pub flags: Vec<Flag>,
}

#[derive(Clone, Copy, Debug)]
pub struct DedupOptions {
    pub key_cap: Option<usize>,
    pub budget: u64,
    pub aut: bool,
}

pub fn key_digest(key: &InvariantKey) -> String {
    hex::encode(Sha256::digest(serde_json::to_vec(key).expect("keys serialize")))
}

/// Codes with different keys are inequivalent; inside a key group each code
/// is compared against the representatives found so far, in input order.
/// A budget overrun keeps the code as its own class and records a flag.
pub fn dedup(codes: &[(String, BinaryCode)], opts: DedupOptions) -> Result<Dedup, SearchError> {
    let keys: Vec<InvariantKey> = codes.par_iter().map(|(_, c)| invariant_key(c, opts.key_cap)).collect::<Result<_, _>>()?;
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        groups.entry(key_digest(k)).or_default().push(i);
    }
    let per_group: Vec<(Vec<Vec<usize>>, Vec<Flag>)> = groups
        .values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|members| {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            let mut flags = Vec::new();
            for &i in members.iter() {
                let mut placed = false;
                for class in classes.iter_mut() {
                    let rep = class[0];
                    match are_equivalent(&codes[rep].1, &codes[i].1, opts.budget)? {
                        EquivalenceVerdict::Equivalent(_) => {
                            class.push(i);
                            placed = true;
                            break;
                        }
                        EquivalenceVerdict::Inequivalent => {}
                        EquivalenceVerdict::BudgetExceeded { nodes } => flags.push(Flag {
                            a: codes[rep].0.clone(),
                            b: codes[i].0.clone(),
                            reason: format!("equivalence budget exceeded after {nodes} nodes"),
                        }),
                    }
                }
                if !placed {
                    classes.push(vec![i]);
                }
            }
            Ok((classes, flags))
        })
        .collect::<Result<_, SearchError>>()?;
    let mut raw: Vec<Vec<usize>> = Vec::new();
    let mut flags = Vec::new();
    for (c, f) in per_group {
        raw.extend(c);
        flags.extend(f);
    }
    raw.sort_by_key(|c| c[0]);
    let auts: Vec<Result<Option<u64>, SearchError>> = raw
        .par_iter()
        .map(|c| {
            if !opts.aut {
                return Ok(None);
            }
            Ok(match aut_group_order(&codes[c[0]].1, opts.budget)? {
                AutResult::Complete(g) => g.order().and_then(|o| u64::try_from(o).ok()),
                AutResult::BudgetExceeded { .. } => None,
            })
        })
        .collect();
    let mut classes = Vec::with_capacity(raw.len());
    for (c, aut) in raw.into_iter().zip(auts) {
        let aut_order = aut?;
        if opts.aut && aut_order.is_none() {
            flags.push(Flag { a: codes[c[0]].0.clone(), b: codes[c[0]].0.clone(), reason: "automorphism group budget exceeded".into() });
        }
        let key = &keys[c[0]];
        classes.push(Class {
            representative: codes[c[0]].0.clone(),
            members: c.iter().map(|&i| codes[i].0.clone()).collect(),
            key: key_digest(key),
            weights: key.weights.clone(),
            aut_order,
        });
    }
    Ok(Dedup { classes, flags })
}
