//! Stage E, stage F and classification of their outputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use selfdual_core::analytics::{census_stats, fit_w76, CensusEntry, CensusStats, FitReport};
use selfdual_core::code::BinaryCode;
use selfdual_core::decomposition::{assemble_c76, lift_e, EStarCode, SigmaLayout};
use selfdual_core::distance::DistancePlan;
use selfdual_core::equivalence::{aut_group_order, AutResult, DEFAULT_BUDGET};
use selfdual_core::fixed_part::{f_candidate, mu_space};
use selfdual_core::hermitian::{apply_monomial, e8_code, transversal_t, HermitianCode, MonomialTransform, DIAGONALS};
use selfdual_core::ring::F64Elem;

use crate::dedup::{dedup, DedupOptions};
use crate::manifest::{Manifest, Record, Stage, TaskKey, FORMAT_VERSION};
use crate::store::{load_survivor, write_survivor};
use crate::{task_space, SearchError, MU_COUNT};

pub const E_MANIFEST: &str = "e72.manifest.jsonl";
pub const F_MANIFEST: &str = "f76.manifest.jsonl";

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Holds the manifest and the survivor files.
    pub dir: PathBuf,
    pub jobs: usize,
    pub seed: Option<u64>,
    /// Transversal indices to search in stage E; all 30 by default.
    pub taus: Vec<u8>,
    /// Return after committing this many chunks, leaving the run resumable.
    pub stop_after_chunks: Option<u64>,
    pub budget: u64,
    /// Weight cap of the invariant keys; `d + 2` when absent.
    pub key_cap: Option<usize>,
}

impl RunConfig {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            dir: dir.into(),
            jobs: crate::default_jobs(),
            seed: None,
            taus: (0..30).collect(),
            stop_after_chunks: None,
            budget: DEFAULT_BUDGET,
            key_cap: None,
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, SearchError> {
        rayon::ThreadPoolBuilder::new().num_threads(self.jobs.max(1)).build().map_err(|e| SearchError::Pool(e.to_string()))
    }
}

/// Loads a checkpoint and checks it belongs to the same run.
fn resume_from(path: &Path, header: &Record) -> Result<Manifest, SearchError> {
    let m = Manifest::load(path)?;
    let found = m.header().expect("parse checks the header");
    if found != header {
        return Err(SearchError::Integrity(format!("checkpoint header does not match this run: {found:?}")));
    }
    let Record::Header { tasks, chunk, .. } = header else { unreachable!() };
    let cursor = m.cursor();
    if cursor > *tasks || cursor % chunk != 0 && cursor != *tasks {
        return Err(SearchError::Integrity(format!("cursor {cursor} is not a chunk boundary")));
    }
    let mut last = None;
    for r in &m.records {
        if let Record::Survivor { index, .. } | Record::Diagnostic { index, .. } = r {
            if *index >= cursor || last.is_some_and(|l| *index < l) {
                return Err(SearchError::Integrity(format!("task {index} out of order or past the cursor")));
            }
            last = Some(*index);
        }
    }
    Ok(m)
}

fn start(cfg: &RunConfig, name: &str, header: Record, resume: Option<&Path>) -> Result<(Manifest, PathBuf), SearchError> {
    std::fs::create_dir_all(&cfg.dir)?;
    let path = cfg.dir.join(name);
    let m = match resume {
        Some(p) => resume_from(p, &header)?,
        None => Manifest { records: vec![header] },
    };
    Ok((m, path))
}

/// Outcome of one task, before files are written.
enum TaskResult {
    Reject,
    Keep { code: BinaryCode, min_distance: Option<usize>, fit: Option<FitReport>, aut_order: Option<u64> },
    Diagnostic(String),
}

/// Drives chunks `cursor / chunk ..` through `run_chunk`, checkpointing after each.
fn drive<F>(cfg: &RunConfig, stage: Stage, manifest: &mut Manifest, path: &Path, mut run_chunk: F) -> Result<bool, SearchError>
where
    F: FnMut(u64) -> Result<Vec<(u64, TaskKey, TaskResult)>, SearchError>,
{
    let Some(Record::Header { tasks, chunk, .. }) = manifest.header().cloned() else { unreachable!() };
    let mut done = 0u64;
    let mut next = manifest.cursor();
    while next < tasks {
        if cfg.stop_after_chunks.is_some_and(|s| done >= s) {
            return Ok(false);
        }
        for (index, task, result) in run_chunk(next / chunk)? {
            match result {
                TaskResult::Reject => {}
                TaskResult::Diagnostic(message) => manifest.records.push(Record::Diagnostic { index, task, message }),
                TaskResult::Keep { code, min_distance, fit, aut_order } => {
                    let (hash, file) = write_survivor(&cfg.dir, stage, &code)?;
                    manifest.records.push(Record::Survivor { index, task, hash, file, min_distance, fit, aut_order });
                }
            }
        }
        next = (next + chunk).min(tasks);
        manifest.records.push(Record::Cursor { next });
        manifest.save(path)?;
        done += 1;
    }
    Ok(true)
}

fn finish(cfg: &RunConfig, stage: Stage, manifest: &mut Manifest, path: &Path) -> Result<(), SearchError> {
    let distinct = manifest.distinct_survivors();
    let codes: Vec<(String, BinaryCode)> =
        distinct.par_iter().map(|(hash, file, _)| load_survivor(&cfg.dir, file, stage, hash).map(|c| (hash.clone(), c))).collect::<Result<_, _>>()?;
    let d = dedup(&codes, DedupOptions { key_cap: cfg.key_cap, budget: cfg.budget, aut: true })?;
    for c in &d.classes {
        manifest.records.push(Record::Class {
            representative: c.representative.clone(),
            members: c.members.clone(),
            key: c.key.clone(),
            weights: c.weights.clone(),
            aut_order: c.aut_order,
        });
    }
    for f in &d.flags {
        manifest.records.push(Record::Flag { a: f.a.clone(), b: f.b.clone(), reason: f.reason.clone() });
    }
    manifest.records.push(Record::Complete { distinct_survivors: codes.len(), classes: d.classes.len(), flagged: d.flags.len() });
    manifest.save(path)
}

/// Weight below `d` among the rows and their pairwise sums.
pub fn fast_reject(rows: &[u128], d: u32) -> bool {
    rows.iter().enumerate().any(|(i, &a)| a.count_ones() < d || rows[i + 1..].iter().any(|&b| (a ^ b).count_ones() < d))
}

/// `ωD` and `ω̄D` give the same code as `D`; this picks the member whose first digit is 0.
fn diagonal_class(index: usize) -> usize {
    let shift = index % 3;
    let mut x = index;
    let mut out = 0;
    let mut place = 1;
    for _ in 0..8 {
        out += (x % 3 + 3 - shift) % 3 * place;
        x /= 3;
        place *= 3;
    }
    out
}

/// `E*` for one `(τ, D)`, if its minimum distance is at least 16.
pub fn e_candidate(m2: &HermitianCode<F64Elem>, tau: usize, diag: usize) -> Result<Option<EStarCode>, SearchError> {
    let m = MonomialTransform::new(transversal_t()[tau].clone(), MonomialTransform::diag_from_index(diag)).map_err(selfdual_core::Error::from)?;
    let m1 = apply_monomial(&e8_code(), &m).map_err(selfdual_core::Error::from)?;
    let e = lift_e(&m1, m2).map_err(selfdual_core::Error::from)?;
    if fast_reject(e.code.raw_rows(), 16) {
        return Ok(None);
    }
    let plan = DistancePlan::with_symmetry(&e.code, &SigmaLayout::symmetry(72))?;
    Ok(plan.min_distance(Some(16)).at_least(16).then_some(e))
}

/// Runs stage E over every `(M2, τ, D)`; one chunk is one `(M2, τ)` with its 6561 diagonals.
pub fn stage_e(m2s: &[HermitianCode<F64Elem>], cfg: &RunConfig, resume: Option<&Path>) -> Result<Manifest, SearchError> {
    task_space()?;
    if cfg.taus.is_empty() || cfg.taus.iter().any(|&t| t as usize >= crate::TRANSVERSAL_SIZE) {
        return Err(SearchError::Integrity(format!("transversal indices {:?} outside 0..30", cfg.taus)));
    }
    let mut m2s: Vec<(String, &HermitianCode<F64Elem>)> = m2s.iter().map(|c| (c.content_hash(), c)).collect();
    m2s.sort_by(|a, b| a.0.cmp(&b.0));
    m2s.dedup_by(|a, b| a.0 == b.0);
    let chunk = DIAGONALS as u64;
    let header = Record::Header {
        version: FORMAT_VERSION,
        stage: Stage::E,
        seed: cfg.seed,
        inputs: m2s.iter().map(|(h, _)| h.clone()).collect(),
        taus: cfg.taus.clone(),
        tasks: m2s.len() as u64 * cfg.taus.len() as u64 * chunk,
        chunk,
    };
    let (mut manifest, path) = start(cfg, E_MANIFEST, header, resume)?;
    if manifest.is_complete() {
        return Ok(manifest);
    }
    let pool = cfg.pool()?;
    let finished = pool.install(|| {
        drive(cfg, Stage::E, &mut manifest, &path, |c| {
            let (mi, tau) = ((c as usize) / cfg.taus.len(), cfg.taus[(c as usize) % cfg.taus.len()] as usize);
            let (hash, m2) = &m2s[mi];
            let reps: Vec<usize> = (0..DIAGONALS).filter(|&d| diagonal_class(d) == d).collect();
            let verdicts: Vec<Option<EStarCode>> = reps.par_iter().map(|&d| e_candidate(m2, tau, d)).collect::<Result<_, _>>()?;
            let by_rep: BTreeMap<usize, &Option<EStarCode>> = reps.iter().copied().zip(verdicts.iter()).collect();
            Ok((0..DIAGONALS)
                .map(|d| {
                    let task = TaskKey { stage: Stage::E, m2: hash.clone(), tau: tau as u8, diag: d as u16, mu: None };
                    let result = match by_rep[&diagonal_class(d)] {
                        Some(e) => TaskResult::Keep { code: e.code.clone(), min_distance: None, fit: None, aut_order: None },
                        None => TaskResult::Reject,
                    };
                    (c * chunk + d as u64, task, result)
                })
                .collect())
        })
    })?;
    if finished {
        pool.install(|| finish(cfg, Stage::E, &mut manifest, &path))?;
    }
    Ok(manifest)
}

/// Attaches every `μ` class to every distinct stage-E survivor; one chunk is one survivor.
pub fn stage_f(e_manifest: &Path, cfg: &RunConfig, resume: Option<&Path>) -> Result<Manifest, SearchError> {
    task_space()?;
    let source = Manifest::load(e_manifest)?;
    if !matches!(source.header(), Some(Record::Header { stage: Stage::E, .. })) || !source.is_complete() {
        return Err(SearchError::Integrity("stage F needs a complete stage E manifest".into()));
    }
    let e_dir = e_manifest.parent().unwrap_or(Path::new(".")).to_path_buf();
    let survivors = source.distinct_survivors();
    let pool = cfg.pool()?;
    let codes: Vec<BinaryCode> =
        pool.install(|| survivors.par_iter().map(|(hash, file, _)| load_survivor(&e_dir, file, Stage::E, hash)).collect::<Result<_, _>>())?;
    let seed = match source.header() {
        Some(Record::Header { seed, .. }) => *seed,
        _ => None,
    };
    let chunk = MU_COUNT as u64;
    let mut inputs = vec![source.digest()];
    inputs.extend(survivors.iter().map(|(h, _, _)| h.clone()));
    let header = Record::Header { version: FORMAT_VERSION, stage: Stage::F, seed, inputs, taus: vec![], tasks: survivors.len() as u64 * chunk, chunk };
    let (mut manifest, path) = start(cfg, F_MANIFEST, header, resume)?;
    if manifest.is_complete() {
        return Ok(manifest);
    }
    let sym = SigmaLayout::symmetry(76);
    let budget = cfg.budget;
    let finished = pool.install(|| {
        drive(cfg, Stage::F, &mut manifest, &path, |c| {
            let (_, _, origin) = &survivors[c as usize];
            let e = EStarCode { code: codes[c as usize].clone() };
            let results: Vec<TaskResult> = mu_space()
                .par_iter()
                .map(|mu| {
                    let f = f_candidate(mu)?;
                    let code = match assemble_c76(&e, &f) {
                        Ok(code) => code,
                        Err(err) => return Ok(TaskResult::Diagnostic(err.to_string())),
                    };
                    let plan = DistancePlan::with_symmetry(&code, &sym)?;
                    if fast_reject(code.raw_rows(), 14) || !plan.min_distance(Some(14)).at_least(14) {
                        return Ok(TaskResult::Reject);
                    }
                    let d = plan.min_distance(None).exact();
                    let fit = fit_w76(&code)?;
                    let aut_order = match aut_group_order(&code, budget)? {
                        AutResult::Complete(g) => g.order().and_then(|o| u64::try_from(o).ok()),
                        AutResult::BudgetExceeded { .. } => None,
                    };
                    Ok(TaskResult::Keep { code, min_distance: d, fit: Some(fit), aut_order })
                })
                .collect::<Result<_, SearchError>>()?;
            Ok(results
                .into_iter()
                .enumerate()
                .map(|(mi, r)| {
                    let task = TaskKey { stage: Stage::F, mu: Some(mi as u16), ..origin.clone() };
                    (c * chunk + mi as u64, task, r)
                })
                .collect())
        })
    })?;
    if finished {
        pool.install(|| finish(cfg, Stage::F, &mut manifest, &path))?;
    }
    Ok(manifest)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub stage: Stage,
    pub tasks: u64,
    pub survivor_tasks: usize,
    pub distinct_survivors: usize,
    pub classes: usize,
    pub flagged: usize,
    pub diagnostics: usize,
    pub census: CensusStats,
    /// `"family/alpha"` to number of classes, stage F only.
    pub fits: BTreeMap<String, usize>,
}

/// Summarizes a complete manifest, re-validating each class representative on disk.
pub fn classify(manifest_path: &Path) -> Result<ClassifyReport, SearchError> {
    let m = Manifest::load(manifest_path)?;
    let Some(Record::Header { stage, tasks, .. }) = m.header().cloned() else { unreachable!() };
    let Some(Record::Complete { distinct_survivors, classes, flagged }) = m.records.iter().rev().find(|r| matches!(r, Record::Complete { .. })).cloned()
    else {
        return Err(SearchError::Integrity("manifest is not complete".into()));
    };
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let files: BTreeMap<String, (String, Option<FitReport>)> = m
        .survivors()
        .filter_map(|r| match r {
            Record::Survivor { hash, file, fit, .. } => Some((hash.clone(), (file.clone(), fit.clone()))),
            _ => None,
        })
        .collect();
    let mut entries = Vec::new();
    let mut fits = BTreeMap::new();
    for r in m.classes() {
        let Record::Class { representative, weights, aut_order, .. } = r else { continue };
        let (file, fit) = files.get(representative).ok_or_else(|| SearchError::Integrity(format!("class {representative} has no survivor record")))?;
        load_survivor(dir, file, stage, representative)?;
        entries.push(CensusEntry { aut_order: aut_order.unwrap_or(0), a16: weights.get(16).copied().unwrap_or(0) });
        if let Some(f) = fit {
            let label = match f.fit {
                Some(ff) => format!("{}/{}", ff.family, ff.alpha.map_or("-".to_string(), |a| a.to_string())),
                None => "no fit".to_string(),
            };
            *fits.entry(label).or_insert(0) += 1;
        }
    }
    Ok(ClassifyReport {
        stage,
        tasks,
        survivor_tasks: m.survivors().count(),
        distinct_survivors,
        classes,
        flagged,
        diagnostics: m.records.iter().filter(|r| matches!(r, Record::Diagnostic { .. })).count(),
        census: census_stats(&entries),
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use selfdual_core::ring::FieldSymbol;

    #[test]
    fn diagonal_classes() {
        let reps: Vec<usize> = (0..DIAGONALS).filter(|&d| diagonal_class(d) == d).collect();
        assert_eq!(reps.len(), 2187);
        // all-ω shifts to all-one
        assert_eq!(diagonal_class(3280), 0);
        for d in (0..DIAGONALS).step_by(97) {
            let a = MonomialTransform::diag_from_index(d);
            let b = MonomialTransform::diag_from_index(diagonal_class(d));
            let ratio = a[0].mul(b[0].inv().unwrap());
            assert!(a.iter().zip(&b).all(|(x, y)| *x == ratio.mul(*y)));
        }
    }

    #[test]
    fn fast_reject_pairs() {
        assert!(fast_reject(&[0b1111, 0b1110], 4));
        assert!(!fast_reject(&[0b1111, 0b1111_0000], 4));
    }
}
