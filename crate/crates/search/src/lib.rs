//! Two-stage search: stage E finds `[72, 32, 16]` codes `E*` from `e8` and an
//! `M2` code over `GF(64)`; stage F attaches the fixed part and keeps the
//! self-dual `[76, 38, 14]` codes. Both stages checkpoint to a manifest after
//! every chunk and commit results strictly in task order.

pub mod dedup;
pub mod manifest;
pub mod stage;
pub mod store;

use thiserror::Error;

use selfdual_core::error::{CodeError, FixedPartError};
use selfdual_core::fixed_part::checked_mu_space;
use selfdual_core::hermitian::{transversal_t, DIAGONALS};

pub use manifest::{Manifest, Record, Stage, TaskKey};
pub use stage::{classify, stage_e, stage_f, ClassifyReport, RunConfig};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("manifest line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("survivor file {file}: {msg}")]
    Survivor { file: String, msg: String },
    #[error("task space: expected {expected} {what}, found {found}")]
    TaskSpace { what: &'static str, expected: usize, found: usize },
    #[error(transparent)]
    Core(#[from] selfdual_core::Error),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    FixedPart(#[from] FixedPartError),
    #[error("thread pool: {0}")]
    Pool(String),
}

pub const TRANSVERSAL_SIZE: usize = 30;
pub const DIAGONAL_COUNT: usize = 3usize.pow(8);
pub const MU_COUNT: usize = 420;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaskSpace {
    pub transversal: usize,
    pub diagonals: usize,
    pub mu: usize,
}

/// Checks the sizes of the three task dimensions.
pub fn task_space() -> Result<TaskSpace, SearchError> {
    let check = |what, expected, found| if expected == found { Ok(found) } else { Err(SearchError::TaskSpace { what, expected, found }) };
    Ok(TaskSpace {
        transversal: check("transversal elements", TRANSVERSAL_SIZE, transversal_t().len())?,
        diagonals: check("diagonals", DIAGONAL_COUNT, DIAGONALS)?,
        mu: check("column permutations", MU_COUNT, checked_mu_space()?.len())?,
    })
}

/// Worker count from `SELFDUAL_FORGE_JOBS`, else the available parallelism.
pub fn default_jobs() -> usize {
    std::env::var("SELFDUAL_FORGE_JOBS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
