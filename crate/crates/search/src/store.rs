//! Survivor `.gm2` files, named by the content hash of the code.

use std::fs;
use std::path::{Path, PathBuf};

use selfdual_core::code::BinaryCode;
use selfdual_core::decomposition::SigmaLayout;
use selfdual_core::distance::DistancePlan;

use crate::manifest::Stage;
use crate::SearchError;

/// Path relative to the run directory.
pub fn relative_path(stage: Stage, hash: &str) -> String {
    match stage {
        Stage::E => format!("e72/{hash}.gm2"),
        Stage::F => format!("f76/{hash}.gm2"),
    }
}

/// Writes the file unless it is already present with the same contents.
pub fn write_survivor(root: &Path, stage: Stage, code: &BinaryCode) -> Result<(String, String), SearchError> {
    let hash = code.content_hash();
    let rel = relative_path(stage, &hash);
    let path = root.join(&rel);
    let text = code.to_gm2();
    if fs::read_to_string(&path).ok().as_deref() != Some(text.as_str()) {
        fs::create_dir_all(path.parent().unwrap())?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, &text)?;
        fs::rename(&tmp, &path)?;
    }
    Ok((hash, rel))
}

/// The predicate a survivor of each stage satisfies.
pub fn stage_predicate(stage: Stage, code: &BinaryCode) -> Result<(), String> {
    let (n, k, d) = match stage {
        Stage::E => (72, 32, 16),
        Stage::F => (76, 38, 14),
    };
    if (code.n(), code.k()) != (n, k) {
        return Err(format!("expected [{n},{k}], found [{},{}]", code.n(), code.k()));
    }
    match stage {
        Stage::E if !code.is_self_orthogonal() => return Err("not self-orthogonal".into()),
        Stage::F if !code.is_self_dual() => return Err("not self-dual".into()),
        _ => {}
    }
    let sym = SigmaLayout::symmetry(n);
    if !code.is_invariant_under(sym.perm()) {
        return Err("not invariant under the order-9 automorphism".into());
    }
    let plan = DistancePlan::with_symmetry(code, &sym).map_err(|e| e.to_string())?;
    if !plan.min_distance(Some(d)).at_least(d) {
        return Err(format!("minimum distance below {d}"));
    }
    Ok(())
}

/// Reads a survivor file back, checking its name against its contents and
/// re-running the stage predicate.
pub fn load_survivor(root: &Path, rel: &str, stage: Stage, hash: &str) -> Result<BinaryCode, SearchError> {
    let path: PathBuf = root.join(rel);
    let bad = |msg: String| SearchError::Survivor { file: path.display().to_string(), msg };
    let text = fs::read_to_string(&path).map_err(|e| bad(e.to_string()))?;
    let code = BinaryCode::from_gm2(&text).map_err(|e| bad(e.to_string()))?;
    if code.content_hash() != hash {
        return Err(bad("content hash does not match the manifest".into()));
    }
    stage_predicate(stage, &code).map_err(bad)?;
    Ok(code)
}
