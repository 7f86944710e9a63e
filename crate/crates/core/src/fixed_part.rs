//! The projected code `C_π`: the three self-dual `[12, 6]` codes, which of
//! them survive a split into 8 cycle columns and 4 fixed columns, the matrix
//! `G2` and the column group `G''`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitword::BitWord;
use crate::code::BinaryCode;
use crate::decomposition::{lift_f, ColumnSplit, FSigmaPart};
use crate::error::{Error, FixedPartError};
use crate::perm::{closure, right_transversal, symmetric_group, Permutation};

pub const G2_ROWS: [&str; 6] = [
    "110000001100",
    "011000000110",
    "001100000011",
    "000111000001",
    "000011110000",
    "111101010000",
];

pub const GPP_GENERATORS: [&str; 3] = ["(1,2)", "(2,4,3)(5,7)(6,8)", "(5,6)(7,8)"];

/// Number of `μ` to try per `E*` code.
pub const GPP_STATED_ORDER: usize = 420;

/// Supports (1-based) of the `C_π` rows of six reference codes of length 76.
pub const KNOWN_CPI_SUPPORTS: [[&[usize]; 6]; 6] = [
    [&[1, 3, 9, 10], &[3, 5, 10, 11], &[5, 8, 11, 12], &[2, 7, 8, 12], &[2, 4, 6, 7], &[1, 3, 5, 6, 7, 8]],
    [&[1, 3, 9, 10], &[3, 5, 10, 11], &[5, 8, 11, 12], &[2, 7, 8, 12], &[2, 4, 6, 7], &[1, 3, 4, 5, 7, 8]],
    [&[2, 4, 9, 10], &[4, 6, 10, 11], &[6, 8, 11, 12], &[1, 7, 8, 12], &[1, 3, 5, 7], &[2, 4, 5, 6, 7, 8]],
    [&[2, 4, 9, 10], &[4, 6, 10, 11], &[6, 8, 11, 12], &[1, 7, 8, 12], &[1, 3, 5, 7], &[2, 3, 4, 6, 7, 8]],
    [&[3, 4, 9, 10], &[4, 5, 10, 11], &[5, 7, 11, 12], &[1, 6, 7, 12], &[1, 2, 6, 8], &[3, 4, 5, 6, 7, 8]],
    [&[3, 4, 9, 10], &[4, 5, 10, 11], &[5, 7, 11, 12], &[1, 6, 7, 12], &[1, 2, 6, 8], &[2, 3, 4, 5, 6, 7]],
];

fn code12(rows: &[&str]) -> BinaryCode {
    BinaryCode::new(rows[0].len(), rows.iter().map(|r| BitWord::parse(r).unwrap()).collect()).unwrap()
}

pub fn i2() -> BinaryCode {
    code12(&["11"])
}

/// Extended Hamming `[8, 4, 4]`.
pub fn h8() -> BinaryCode {
    code12(&["11110000", "00111100", "00001111", "01010101"])
}

pub fn six_i2() -> BinaryCode {
    (0..5).fold(i2(), |c, _| c.direct_sum(&i2()))
}

/// `i2 ⊕ i2 ⊕ h8`: duads on columns 1-2 and 3-4, `h8` on 5..12.
pub fn two_i2_h8() -> BinaryCode {
    i2().direct_sum(&i2()).direct_sum(&h8())
}

/// `d12` with cluster `{1,2},{3,4},…,{11,12}`.
pub fn d12() -> BinaryCode {
    code12(&["111100000000", "001111000000", "000011110000", "000000111100", "000000001111", "010101010101"])
}

pub fn g2_matrix() -> BinaryCode {
    code12(&G2_ROWS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PiName {
    #[serde(rename = "6i2")]
    SixI2,
    #[serde(rename = "2i2+h8")]
    TwoI2H8,
    #[serde(rename = "d12")]
    D12,
}

impl std::fmt::Display for PiName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PiName::SixI2 => "6i2",
            PiName::TwoI2H8 => "2i2+h8",
            PiName::D12 => "d12",
        })
    }
}

#[derive(Clone, Debug)]
pub struct PiCandidate {
    pub name: PiName,
    pub code: BinaryCode,
    /// Last four columns fixed.
    pub split: ColumnSplit,
}

/// The three self-dual `[12, 6]` codes up to equivalence.
pub fn pi_candidates() -> Vec<PiCandidate> {
    [(PiName::SixI2, six_i2()), (PiName::TwoI2H8, two_i2_h8()), (PiName::D12, d12())]
        .into_iter()
        .map(|(name, code)| PiCandidate { name, code, split: ColumnSplit::standard() })
        .collect()
}

/// All `2^k` codewords as 12-bit masks.
pub fn words12(code: &BinaryCode) -> Vec<u16> {
    let rows = code.raw_rows();
    (0u32..1 << rows.len())
        .map(|m| rows.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(0u128, |a, (_, r)| a ^ r) as u16)
        .collect()
}

/// Smallest lifted weight of a nonzero word when the columns in
/// `fixed_mask` are fixed points, with a witness.
pub fn min_lifted_weight(code: &BinaryCode, fixed_mask: u16) -> (usize, u16) {
    words12(code)
        .into_iter()
        .filter(|&w| w != 0)
        .map(|w| (9 * (w & !fixed_mask).count_ones() as usize + (w & fixed_mask).count_ones() as usize, w))
        .min()
        .expect("code is nonzero")
}

/// Every weight-4 word keeps at least two support columns on cycles.
pub fn cluster_rule_holds(code: &BinaryCode, fixed_mask: u16) -> bool {
    words12(code).into_iter().filter(|w| w.count_ones() == 4).all(|w| (w & !fixed_mask).count_ones() >= 2)
}

/// The 495 four-element subsets of the 12 columns as masks, increasing.
pub fn fixed_assignments() -> Vec<u16> {
    (0u16..1 << 12).filter(|m| m.count_ones() == 4).collect()
}

fn mask_columns(mask: u16) -> Vec<usize> {
    (0..12).filter(|c| mask >> c & 1 == 1).map(|c| c + 1).collect()
}

/// Duads: pairs of columns such that every weight-4 word contains both or neither.
pub fn duads(code: &BinaryCode) -> Vec<(usize, usize)> {
    let w4: Vec<u16> = words12(code).into_iter().filter(|w| w.count_ones() == 4).collect();
    let mut out = Vec::new();
    for a in 0..code.n() {
        for b in a + 1..code.n() {
            let both = 1u16 << a | 1 << b;
            if w4.iter().any(|w| w & both != 0) && w4.iter().all(|w| w & both == 0 || w & both == both) {
                out.push((a + 1, b + 1));
            }
        }
    }
    out
}

/// Column `i < 8` moves to `μ(i)`; the fixed columns stay.
pub fn permute_cyclic_columns(code: &BinaryCode, mu: &Permutation) -> BinaryCode {
    let perm: Vec<usize> = (0..12).map(|i| if i < 8 { mu.apply(i) } else { i }).collect();
    code.permuted(&perm)
}

/// A permutation `ρ` of the fixed columns with `ρ(a) = b`, if any.
pub fn fixed_column_match(a: &BinaryCode, b: &BinaryCode) -> Option<Permutation> {
    symmetric_group(4).into_iter().find(|rho| {
        let perm: Vec<usize> = (0..12).map(|i| if i < 8 { i } else { 8 + rho.apply(i - 8) }).collect();
        a.permuted(&perm).same_code(b)
    })
}

/// Fixed-column permutation completing `μ` to an automorphism of the `G2` code.
pub fn preserves_g2(mu: &Permutation) -> Option<Permutation> {
    let g2 = g2_matrix();
    fixed_column_match(&permute_cyclic_columns(&g2, mu), &g2)
}

pub fn gpp_generators() -> Vec<Permutation> {
    GPP_GENERATORS.iter().map(|s| Permutation::parse_cycles(s, 8).unwrap()).collect()
}

/// Closure of the generators of `G''`, identity first.
pub fn gpp_group() -> Vec<Permutation> {
    closure(&gpp_generators(), 8)
}

/// Every `μ ∈ S8` that preserves the `G2` code up to the fixed columns.
pub fn g2_stabilizer() -> Vec<Permutation> {
    symmetric_group(8).into_par_iter().filter(|mu| preserves_g2(mu).is_some()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GppReport {
    pub generators: Vec<String>,
    pub closure_order: usize,
    pub stated_order: usize,
    pub stabilizer_order: usize,
    pub closure_equals_stabilizer: bool,
    pub every_element_preserves_g2: bool,
    /// `8! / |closure|`.
    pub index_in_s8: usize,
    pub transversal_size: usize,
}

impl GppReport {
    /// The stated count equals the closure order.
    pub fn order_matches(&self) -> bool {
        self.closure_order == self.stated_order
    }

    /// The stated count equals the number of `μ` classes.
    pub fn index_matches(&self) -> bool {
        self.index_in_s8 == self.stated_order && self.transversal_size == self.stated_order
    }
}

pub fn gpp_report() -> GppReport {
    let group = gpp_group();
    let stab = g2_stabilizer();
    let mut a = group.clone();
    let mut b = stab.clone();
    a.sort();
    b.sort();
    GppReport {
        generators: GPP_GENERATORS.iter().map(|s| s.to_string()).collect(),
        closure_order: group.len(),
        stated_order: GPP_STATED_ORDER,
        stabilizer_order: stab.len(),
        closure_equals_stabilizer: a == b,
        every_element_preserves_g2: group.iter().all(|g| preserves_g2(g).is_some()),
        index_in_s8: 40320 / group.len(),
        transversal_size: mu_space().len(),
    }
}

/// One `μ` per right coset `G'' μ` in `S8`, lexicographically first in each.
/// Cosets give equivalent codes: they differ by a permutation of the fixed points.
pub fn mu_space() -> &'static [Permutation] {
    static SPACE: OnceLock<Vec<Permutation>> = OnceLock::new();
    SPACE.get_or_init(|| right_transversal(&gpp_group(), 8))
}

/// [`mu_space`] after checking its size against [`GPP_STATED_ORDER`].
pub fn checked_mu_space() -> Result<&'static [Permutation], FixedPartError> {
    let space = mu_space();
    if space.len() != GPP_STATED_ORDER {
        return Err(FixedPartError::GroupIntegrity { expected: GPP_STATED_ORDER, found: space.len() });
    }
    Ok(space)
}

/// `G2` with cyclic columns permuted by `μ`, lifted with columns 9..12 fixed.
pub fn f_candidate(mu: &Permutation) -> Result<FSigmaPart, Error> {
    if mu.degree() != 8 {
        return Err(FixedPartError::BadPermutation(mu.degree()).into());
    }
    lift_f(&permute_cyclic_columns(&g2_matrix(), mu), &ColumnSplit::standard()).map_err(Error::from)
}

pub fn f_candidate_by_index(index: usize) -> Result<FSigmaPart, Error> {
    let mu = mu_space().get(index).ok_or(FixedPartError::MuIndex(index))?;
    f_candidate(mu)
}

/// Row supports (1-based, sorted) of `G2` after permuting cyclic columns by `μ`.
pub fn candidate_supports(mu: &Permutation) -> Vec<Vec<usize>> {
    G2_ROWS
        .iter()
        .map(|r| {
            let w = BitWord::parse(r).unwrap().bits();
            let mut s: Vec<usize> = (0..12).filter(|&c| w >> c & 1 == 1).map(|c| if c < 8 { mu.apply(c) + 1 } else { c + 1 }).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SupportReading {
    /// Rows are the images of the `G2` rows under `μ`, fixed columns untouched.
    BeforeNormalization,
    /// The rows span the image of the `G2` code under `μ` and a fixed-column permutation.
    AfterNormalization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportMatch {
    pub reading: SupportReading,
    /// Matching `μ ∈ S8`, increasing.
    pub mus: Vec<Permutation>,
    /// The same `μ` reduced to [`mu_space`] indices.
    pub mu_indices: Vec<usize>,
    pub self_dual: bool,
    pub cluster_rule: bool,
}

fn mu_index(mu: &Permutation) -> usize {
    let group = gpp_group();
    let space = mu_space();
    space.iter().position(|t| group.iter().any(|h| &h.then(t) == mu)).expect("transversal covers S8")
}

/// Finds the `μ` producing the given row supports, trying the row-wise reading first.
pub fn match_supports(supports: &[&[usize]]) -> Option<SupportMatch> {
    if supports.iter().flat_map(|s| s.iter()).any(|&c| c == 0 || c > 12) {
        return None;
    }
    let rows: Vec<BitWord> = supports.iter().map(|s| BitWord::from_support(12, s.iter().map(|&c| c - 1))).collect();
    let target = BinaryCode::span(12, &rows).ok()?;
    let mut wanted: Vec<Vec<usize>> = supports.iter().map(|s| {
        let mut v = s.to_vec();
        v.sort_unstable();
        v
    }).collect();
    wanted.sort();
    let all = symmetric_group(8);
    let before: Vec<Permutation> = all
        .par_iter()
        .filter(|mu| {
            let mut got = candidate_supports(mu);
            got.sort();
            got == wanted
        })
        .cloned()
        .collect();
    let (reading, mus) = if !before.is_empty() {
        (SupportReading::BeforeNormalization, before)
    } else {
        let g2 = g2_matrix();
        let after: Vec<Permutation> =
            all.par_iter().filter(|mu| fixed_column_match(&permute_cyclic_columns(&g2, mu), &target).is_some()).cloned().collect();
        if after.is_empty() {
            return None;
        }
        (SupportReading::AfterNormalization, after)
    };
    let mut mu_indices: Vec<usize> = mus.iter().map(mu_index).collect();
    mu_indices.sort_unstable();
    mu_indices.dedup();
    Some(SupportMatch {
        reading,
        mus,
        mu_indices,
        self_dual: target.k() == 6 && target.is_self_dual(),
        cluster_rule: cluster_rule_holds(&target, 0xF00),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AssignmentSummary {
    pub assignments: usize,
    pub all_below_14: bool,
    /// Minimum lifted weight over nonzero words -> number of assignments.
    pub min_weight_histogram: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SixI2Report {
    pub summary: AssignmentSummary,
    pub distinct_duads_min_weight: Vec<usize>,
    pub shared_duad_min_weight: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitResult {
    pub fixed_columns: Vec<usize>,
    pub min_weight: usize,
    pub witness_support: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoI2H8Report {
    /// Three fixed points on columns 5, 6, 7 of the `h8` summand and one of the other five.
    pub five_splits: Vec<SplitResult>,
    pub all_five_below_14: bool,
    pub summary: AssignmentSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct D12Report {
    pub summary: AssignmentSummary,
    pub cluster_rule_satisfied: usize,
    pub cluster_rule_violated: usize,
    /// Cluster rule holds exactly when the fixed points lie in distinct duads.
    pub cluster_rule_iff_distinct_duads: bool,
    pub all_violating_below_14: bool,
    pub all_satisfying_at_least_14: bool,
    pub min_weight_satisfying: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct G2Report {
    pub rank: usize,
    pub self_dual: bool,
    pub weight4_words: usize,
    pub duads: Vec<(usize, usize)>,
    pub fixed_points_in_distinct_duads: bool,
    pub cluster_rule: bool,
    pub min_lifted_weight: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExclusionReport {
    pub six_i2: SixI2Report,
    pub two_i2_h8: TwoI2H8Report,
    pub d12: D12Report,
    pub g2: G2Report,
}

impl ExclusionReport {
    /// Only `d12` with the cluster rule leaves weight at least 14.
    pub fn verdicts_hold(&self) -> bool {
        self.six_i2.summary.all_below_14
            && self.two_i2_h8.all_five_below_14
            && self.two_i2_h8.summary.all_below_14
            && self.d12.cluster_rule_iff_distinct_duads
            && self.d12.all_violating_below_14
            && self.d12.all_satisfying_at_least_14
            && self.g2.self_dual
            && self.g2.cluster_rule
            && self.g2.min_lifted_weight >= 14
    }
}

fn summarize(code: &BinaryCode) -> (AssignmentSummary, Vec<(u16, usize)>) {
    let per: Vec<(u16, usize)> = fixed_assignments().into_par_iter().map(|m| (m, min_lifted_weight(code, m).0)).collect();
    let mut hist = BTreeMap::new();
    for &(_, w) in &per {
        *hist.entry(w).or_insert(0) += 1;
    }
    (AssignmentSummary { assignments: per.len(), all_below_14: per.iter().all(|&(_, w)| w < 14), min_weight_histogram: hist }, per)
}

fn in_distinct_duads(mask: u16, duads: &[(usize, usize)]) -> bool {
    duads.iter().all(|&(a, b)| (mask >> (a - 1) & 1) + (mask >> (b - 1) & 1) <= 1)
}

fn sorted_unique(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

pub fn exclusion_report() -> ExclusionReport {
    let six = six_i2();
    let six_duads: Vec<(usize, usize)> = (0..6).map(|i| (2 * i + 1, 2 * i + 2)).collect();
    let (summary, per) = summarize(&six);
    let six_i2 = SixI2Report {
        summary,
        distinct_duads_min_weight: sorted_unique(per.iter().filter(|(m, _)| in_distinct_duads(*m, &six_duads)).map(|&(_, w)| w).collect()),
        shared_duad_min_weight: sorted_unique(per.iter().filter(|(m, _)| !in_distinct_duads(*m, &six_duads)).map(|&(_, w)| w).collect()),
    };

    let two = two_i2_h8();
    let five_splits: Vec<SplitResult> = (7..12)
        .map(|j| {
            let mask = 0b111u16 << 4 | 1 << j;
            let (w, witness) = min_lifted_weight(&two, mask);
            SplitResult { fixed_columns: mask_columns(mask), min_weight: w, witness_support: mask_columns(witness) }
        })
        .collect();
    let (summary, _) = summarize(&two);
    let two_i2_h8 = TwoI2H8Report { all_five_below_14: five_splits.iter().all(|s| s.min_weight < 14), five_splits, summary };

    let d = d12();
    let d_duads = duads(&d);
    let (summary, per) = summarize(&d);
    let sat: Vec<&(u16, usize)> = per.iter().filter(|(m, _)| cluster_rule_holds(&d, *m)).collect();
    let d12 = D12Report {
        cluster_rule_satisfied: sat.len(),
        cluster_rule_violated: per.len() - sat.len(),
        cluster_rule_iff_distinct_duads: per.iter().all(|(m, _)| cluster_rule_holds(&d, *m) == in_distinct_duads(*m, &d_duads)),
        all_violating_below_14: per.iter().filter(|(m, _)| !cluster_rule_holds(&d, *m)).all(|&(_, w)| w < 14),
        all_satisfying_at_least_14: sat.iter().all(|&&(_, w)| w >= 14),
        min_weight_satisfying: sat.iter().map(|&&(_, w)| w).min().unwrap_or(0),
        summary,
    };

    let g2 = g2_matrix();
    let g2_duads = duads(&g2);
    let g2 = G2Report {
        rank: g2.k(),
        self_dual: g2.is_self_dual(),
        weight4_words: words12(&g2).iter().filter(|w| w.count_ones() == 4).count(),
        fixed_points_in_distinct_duads: g2_duads.len() == 6 && in_distinct_duads(0xF00, &g2_duads),
        duads: g2_duads,
        cluster_rule: cluster_rule_holds(&g2, 0xF00),
        min_lifted_weight: min_lifted_weight(&g2, 0xF00).0,
    };
    ExclusionReport { six_i2, two_i2_h8, d12, g2 }
}
