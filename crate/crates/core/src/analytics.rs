//! Weight enumerator families for self-dual `[76, 38, 14]` codes and census histograms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::code::BinaryCode;
use crate::decomposition::SigmaLayout;
use crate::distance::{DistancePlan, Symmetry};
use crate::error::CodeError;
use crate::shadow::shadow_cosets;

/// Coefficients `(A14, A16)` as affine functions of the parameter, and its range.
struct Family {
    id: u8,
    a14: (i64, i64),
    a16: (i64, i64),
    alpha: Option<(i64, i64)>,
}

const FAMILIES: [Family; 3] = [
    Family { id: 1, a14: (4750, -16), a16: (79895, 64), alpha: Some((0, 296)) },
    Family { id: 2, a14: (2590, 0), a16: (106967, 0), alpha: None },
    Family { id: 3, a14: (4750, 16), a16: (80919, -64), alpha: Some((-296, -16)) },
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFit {
    pub family: u8,
    /// Printed sign convention: negative for family 3, absent for family 2.
    pub alpha: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub family: u8,
    /// Parameter nearest to the one forced by `A14`.
    pub alpha: Option<i64>,
    pub a14_residual: i64,
    pub a16_residual: i64,
    pub alpha_in_range: bool,
}

/// Shadow words of weights 2, 6 and 10.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowCheck {
    pub s2: u64,
    pub s6: u64,
    pub s10: u64,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitReport {
    pub a14: u64,
    pub a16: u64,
    pub fit: Option<FamilyFit>,
    pub residuals: Vec<Residual>,
    pub shadow: Option<ShadowCheck>,
}

fn residual(f: &Family, a14: i64, a16: i64) -> Residual {
    let alpha = (f.a14.1 != 0).then(|| ((a14 - f.a14.0) as f64 / f.a14.1 as f64).round() as i64);
    let t = alpha.unwrap_or(0);
    Residual {
        family: f.id,
        alpha,
        a14_residual: a14 - (f.a14.0 + f.a14.1 * t),
        a16_residual: a16 - (f.a16.0 + f.a16.1 * t),
        alpha_in_range: match (alpha, f.alpha) {
            (Some(a), Some((lo, hi))) => (lo..=hi).contains(&a),
            _ => true,
        },
    }
}

/// Matches `A14` and `A16` against the three families; both must agree.
pub fn fit_w76_counts(a14: u64, a16: u64) -> FitReport {
    let residuals: Vec<Residual> = FAMILIES.iter().map(|f| residual(f, a14 as i64, a16 as i64)).collect();
    let fit = residuals
        .iter()
        .find(|r| r.a14_residual == 0 && r.a16_residual == 0 && r.alpha_in_range)
        .map(|r| FamilyFit { family: r.family, alpha: r.alpha });
    FitReport { a14, a16, fit, residuals, shadow: None }
}

/// Expected shadow counts `(S2, S6, S10)` for a fitted family.
pub fn expected_shadow(fit: FamilyFit) -> (i64, i64, i64) {
    match (fit.family, fit.alpha) {
        (1, Some(a)) => (0, 0, a),
        (2, _) => (1, 0, 0),
        (3, Some(a)) => (0, 1, -16 - a),
        _ => unreachable!("fits come from FAMILIES"),
    }
}

fn symmetry_for(code: &BinaryCode) -> Option<Symmetry> {
    let sym = SigmaLayout::symmetry(SigmaLayout::N);
    code.is_invariant_under(sym.perm()).then_some(sym)
}

/// Counts `A14`, `A16` exactly, fits a family and cross-checks the shadow.
pub fn fit_w76(code: &BinaryCode) -> Result<FitReport, CodeError> {
    if code.n() != 76 {
        return Err(CodeError::LengthMismatch { expected: 76, found: code.n() });
    }
    if !code.is_self_dual() {
        return Err(CodeError::NotSelfDual);
    }
    let sym = symmetry_for(code);
    let plan = match &sym {
        Some(s) => DistancePlan::with_symmetry(code, s)?,
        None => DistancePlan::new(code)?,
    };
    let dist = plan.capped_distribution(16);
    let mut report = fit_w76_counts(dist.count(14), dist.count(16));
    if let Ok(sh) = shadow_cosets(code) {
        let s = sh.weight_counts_with(10, sym.as_ref())?;
        let (s2, s6, s10) = (s[2], s[6], s[10]);
        let consistent = report.fit.map_or(false, |f| expected_shadow(f) == (s2 as i64, s6 as i64, s10 as i64));
        report.shadow = Some(ShadowCheck { s2, s6, s10, consistent });
    }
    Ok(report)
}

/// `A_w ≡ B_w (mod 3)`, where `B` counts the `F_σ` words.
pub fn congruent_mod3(code_counts: &[u64], f_counts: &[u64], w: usize) -> bool {
    code_counts.get(w).copied().unwrap_or(0) % 3 == f_counts.get(w).copied().unwrap_or(0) % 3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub aut_order: u64,
    pub a16: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusStats {
    pub total: usize,
    pub aut_orders: BTreeMap<u64, usize>,
    pub a16: BTreeMap<u64, usize>,
}

pub fn census_stats(entries: &[CensusEntry]) -> CensusStats {
    let mut stats = CensusStats { total: entries.len(), ..Default::default() };
    for e in entries {
        *stats.aut_orders.entry(e.aut_order).or_insert(0) += 1;
        *stats.a16.entry(e.a16).or_insert(0) += 1;
    }
    stats
}

impl CensusStats {
    /// Table rows in the form `value: count`, smallest value first.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("|Aut|  count\n");
        for (k, v) in &self.aut_orders {
            out.push_str(&format!("{k:>6}  {v}\n"));
        }
        out.push_str("A16    count\n");
        for (k, v) in &self.a16 {
            out.push_str(&format!("{k:>6}  {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn family_examples() {
        assert_eq!(fit_w76_counts(4686, 80151).fit, Some(FamilyFit { family: 1, alpha: Some(4) }));
        assert_eq!(fit_w76_counts(4542, 79895 + 64 * 13).fit, Some(FamilyFit { family: 1, alpha: Some(13) }));
        assert_eq!(fit_w76_counts(2590, 106967).fit, Some(FamilyFit { family: 2, alpha: None }));
        assert_eq!(fit_w76_counts(4750 - 16 * 20, 80919 + 64 * 20).fit, Some(FamilyFit { family: 3, alpha: Some(-20) }));
    }

    #[test]
    fn inconsistent_pair_reports_residuals() {
        let r = fit_w76_counts(4686, 80152);
        assert_eq!(r.fit, None);
        assert_eq!(r.residuals[0].alpha, Some(4));
        assert_eq!(r.residuals[0].a16_residual, 1);
        // Family 3 would need alpha = 4, outside its range.
        assert_eq!(fit_w76_counts(4750 + 64, 80919 - 256).fit, None);
    }

    #[test]
    fn census_histograms() {
        assert_eq!(census_stats(&[]), CensusStats::default());
        let s = census_stats(&[CensusEntry { aut_order: 9, a16: 7920 }]);
        assert_eq!(s.aut_orders.get(&9), Some(&1));
        assert_eq!(s.total, 1);
    }

    proptest! {
        #[test]
        fn family_one_alpha_stays_in_range(a14 in 0u64..6000, a16 in 70000u64..120000) {
            let r = fit_w76_counts(a14, a16);
            if let Some(FamilyFit { family: 1, alpha: Some(a) }) = r.fit {
                prop_assert!((0..=296).contains(&a));
            }
        }

        #[test]
        fn family_one_round_trip(alpha in 0i64..=296) {
            let a14 = (4750 - 16 * alpha) as u64;
            let a16 = (79895 + 64 * alpha) as u64;
            prop_assert_eq!(fit_w76_counts(a14, a16).fit, Some(FamilyFit { family: 1, alpha: Some(alpha) }));
        }

        #[test]
        fn census_total_matches(entries in proptest::collection::vec((1u64..20, 0u64..50), 0..40)) {
            let e: Vec<CensusEntry> = entries.iter().map(|&(aut_order, a16)| CensusEntry { aut_order, a16 }).collect();
            let s = census_stats(&e);
            prop_assert_eq!(s.aut_orders.values().sum::<usize>(), e.len());
            prop_assert_eq!(s.a16.values().sum::<usize>(), e.len());
        }
    }
}
