//! Permutation equivalence and automorphism groups of binary codes.
//!
//! Coordinates are coloured by partition refinement against the supports of
//! the low-weight codewords. The search individualizes one coordinate at a
//! time; a leaf is accepted only if the induced permutation maps one code
//! onto the other.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bitword::ones;
use crate::code::{permute_bits, BinaryCode, Echelon};
use crate::distance::DistancePlan;
use crate::error::CodeError;

/// Backtrack nodes allowed per search unless told otherwise.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantKey {
    pub n: usize,
    pub k: usize,
    pub weight_cap: usize,
    /// `A_0 ..= A_cap`.
    pub weights: Vec<u64>,
    /// For weights `d` and `d + 2`: the sorted per-coordinate incidence counts.
    pub incidence: Vec<(usize, Vec<u32>)>,
}

/// Weight counts up to `weight_cap` (default `d + 2`) and coordinate incidence profiles.
pub fn invariant_key(code: &BinaryCode, weight_cap: Option<usize>) -> Result<InvariantKey, CodeError> {
    let n = code.n();
    if code.k() == 0 {
        let cap = weight_cap.unwrap_or(0).min(n);
        let mut weights = vec![0; cap + 1];
        weights[0] = 1;
        return Ok(InvariantKey { n, k: 0, weight_cap: cap, weights, incidence: Vec::new() });
    }
    let plan = DistancePlan::new(code)?;
    let d = plan.min_distance(None).exact().expect("exact without early abort");
    let cap = weight_cap.unwrap_or(d + 2).min(n);
    let words = plan.low_weight_words(cap);
    let mut weights = vec![0u64; cap + 1];
    weights[0] = 1;
    for &w in &words {
        weights[w.count_ones() as usize] += 1;
    }
    let incidence = [d, d + 2]
        .into_iter()
        .filter(|&w| w <= cap)
        .map(|wt| {
            let mut per = vec![0u32; n];
            for &w in words.iter().filter(|w| w.count_ones() as usize == wt) {
                for p in ones(w) {
                    per[p] += 1;
                }
            }
            per.sort_unstable();
            (wt, per)
        })
        .collect();
    Ok(InvariantKey { n, k: code.k(), weight_cap: cap, weights, incidence })
}

/// Coordinate `i` of `a` goes to `perm[i]` of `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceCertificate {
    pub perm: Vec<usize>,
}

impl EquivalenceCertificate {
    pub fn verify(&self, a: &BinaryCode, b: &BinaryCode) -> bool {
        let n = a.n();
        if b.n() != n || a.k() != b.k() || self.perm.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        if self.perm.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true)) {
            return false;
        }
        let e = b.echelon();
        a.raw_rows().iter().all(|&r| e.contains_raw(permute_bits(r, &self.perm)))
    }

    /// 1-based cycle notation, `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let images = self.perm.clone();
        crate::perm::Permutation::from_images(images).map(|p| p.to_string()).unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equivalent(EquivalenceCertificate),
    Inequivalent,
    BudgetExceeded { nodes: u64 },
}

/// Stabilizer chain of the permutation automorphism group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutGroup {
    /// Orbit of the base point at each level, top level first.
    pub orbit_lengths: Vec<usize>,
    pub generators: Vec<Vec<usize>>,
    pub nodes: u64,
}

impl AutGroup {
    /// `None` if the order does not fit in 128 bits.
    pub fn order(&self) -> Option<u128> {
        self.orbit_lengths.iter().try_fold(1u128, |acc, &o| acc.checked_mul(o as u128))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutResult {
    Complete(AutGroup),
    BudgetExceeded { nodes: u64 },
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Incidence structure of coordinates against a set of codeword supports.
struct Structure {
    n: usize,
    code: BinaryCode,
    echelon: Echelon,
    word_offsets: Vec<usize>,
    word_points: Vec<u8>,
    word_weight: Vec<u64>,
    point_offsets: Vec<usize>,
    point_words: Vec<u32>,
}

/// Words of the smallest weights, adding weights until there are at least `2n`.
fn support_words(code: &BinaryCode) -> Result<Vec<u128>, CodeError> {
    if code.k() == 0 {
        return Ok(Vec::new());
    }
    let plan = DistancePlan::new(code)?;
    let d = plan.min_distance(None).exact().expect("exact without early abort");
    let mut cap = d;
    loop {
        let words = plan.low_weight_words(cap);
        if words.len() >= 2 * code.n() || cap >= code.n() || cap >= d + 4 {
            return Ok(words);
        }
        cap += 1;
    }
}

impl Structure {
    fn new(code: &BinaryCode, words: &[u128]) -> Self {
        let n = code.n();
        let mut word_offsets = vec![0];
        let mut word_points = Vec::new();
        let mut by_point: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, &w) in words.iter().enumerate() {
            for p in ones(w) {
                word_points.push(p as u8);
                by_point[p].push(i as u32);
            }
            word_offsets.push(word_points.len());
        }
        let mut point_offsets = vec![0];
        let mut point_words = Vec::new();
        for list in by_point {
            point_words.extend(list);
            point_offsets.push(point_words.len());
        }
        Structure {
            n,
            code: code.clone(),
            echelon: code.echelon(),
            word_weight: words.iter().map(|w| mix(w.count_ones() as u64)).collect(),
            word_offsets,
            word_points,
            point_offsets,
            point_words,
        }
    }

    /// Refines `cells` to an equitable-by-hash partition. Cell ids stay canonical:
    /// they are ranks of label-free keys. Returns a hash of the refinement trace.
    fn refine(&self, cells: &mut [u32]) -> u64 {
        let mut trace = 0u64;
        let words = self.word_weight.len();
        let mut wsig = vec![0u64; words];
        let mut psig = vec![0u64; self.n];
        let mut count = distinct(cells);
        loop {
            for w in 0..words {
                let mut s = self.word_weight[w];
                for &p in &self.word_points[self.word_offsets[w]..self.word_offsets[w + 1]] {
                    s = s.wrapping_add(mix(cells[p as usize] as u64 + 1));
                }
                wsig[w] = mix(s);
            }
            for p in 0..self.n {
                let mut s = 0u64;
                for &w in &self.point_words[self.point_offsets[p]..self.point_offsets[p + 1]] {
                    s = s.wrapping_add(wsig[w as usize]);
                }
                psig[p] = s;
            }
            let mut keys: Vec<(u32, u64)> = (0..self.n).map(|p| (cells[p], psig[p])).collect();
            keys.sort_unstable();
            keys.dedup();
            for (i, &(c, s)) in keys.iter().enumerate() {
                let size = (0..self.n).filter(|&p| cells[p] == c && psig[p] == s).count();
                trace = mix(trace ^ mix((i as u64) << 40 ^ (c as u64) << 8 ^ size as u64) ^ s);
            }
            for p in 0..self.n {
                cells[p] = keys.binary_search(&(cells[p], psig[p])).unwrap() as u32;
            }
            if keys.len() == count {
                return trace;
            }
            count = keys.len();
        }
    }

    /// Gives `v` its own cell just before the rest of its old cell.
    fn individualize(cells: &[u32], v: usize) -> Vec<u32> {
        let keyed: Vec<u64> = cells.iter().enumerate().map(|(p, &c)| (c as u64) << 1 | (p != v && c == cells[v]) as u64).collect();
        let mut sorted = keyed.clone();
        sorted.sort_unstable();
        sorted.dedup();
        keyed.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect()
    }
}

fn distinct(cells: &[u32]) -> usize {
    cells.iter().collect::<BTreeSet<_>>().len()
}

/// First smallest non-singleton cell, or `None` when discrete.
fn target_cell(cells: &[u32]) -> Option<u32> {
    let mut sizes = vec![0usize; cells.len()];
    for &c in cells {
        sizes[c as usize] += 1;
    }
    sizes.iter().enumerate().filter(|(_, &s)| s > 1).min_by_key(|(c, &s)| (s, *c)).map(|(c, _)| c as u32)
}

fn members(cells: &[u32], c: u32) -> Vec<usize> {
    (0..cells.len()).filter(|&p| cells[p] == c).collect()
}

/// The leftmost root-to-leaf path of the search tree of one structure.
struct FirstPath {
    /// Partition at each level; the last one is discrete.
    partitions: Vec<Vec<u32>>,
    traces: Vec<u64>,
    /// Base point individualized at each level.
    base: Vec<usize>,
}

impl FirstPath {
    fn new(s: &Structure) -> Self {
        let mut cells = vec![0u32; s.n];
        let mut traces = vec![s.refine(&mut cells)];
        let mut partitions = vec![cells.clone()];
        let mut base = Vec::new();
        while let Some(c) = target_cell(&cells) {
            let v = members(&cells, c)[0];
            cells = Structure::individualize(&cells, v);
            traces.push(s.refine(&mut cells));
            partitions.push(cells.clone());
            base.push(v);
        }
        FirstPath { partitions, traces, base }
    }

    fn leaf(&self) -> &[u32] {
        self.partitions.last().unwrap()
    }
}

struct Search<'a> {
    left: &'a Structure,
    right: &'a Structure,
    path: &'a FirstPath,
    nodes: u64,
    budget: u64,
}

enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    Budget,
}

impl Search<'_> {
    /// Explores the subtree under `cells` (at `level` of the right structure)
    /// for a leaf whose permutation maps the left code onto the right code.
    fn descend(&mut self, cells: Vec<u32>, level: usize) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Outcome::Budget;
        }
        let Some(c) = target_cell(&cells) else {
            let leaf = self.path.leaf();
            let mut at = vec![0usize; self.right.n];
            for (p, &c) in cells.iter().enumerate() {
                at[c as usize] = p;
            }
            let perm: Vec<usize> = leaf.iter().map(|&c| at[c as usize]).collect();
            let ok = self.left.code.raw_rows().iter().all(|&r| self.right.echelon.contains_raw(permute_bits(r, &perm)));
            return if ok { Outcome::Found(perm) } else { Outcome::Exhausted };
        };
        if level >= self.path.base.len() {
            return Outcome::Exhausted;
        }
        for w in members(&cells, c) {
            let mut next = Structure::individualize(&cells, w);
            if self.right.refine(&mut next) != self.path.traces[level + 1] {
                continue;
            }
            match self.descend(next, level + 1) {
                Outcome::Exhausted => {}
                other => return other,
            }
        }
        Outcome::Exhausted
    }
}

fn compatible(a: &BinaryCode, b: &BinaryCode) -> bool {
    a.n() == b.n() && a.k() == b.k()
}

/// Searches for a coordinate permutation taking `a` onto `b`.
pub fn are_equivalent(a: &BinaryCode, b: &BinaryCode, budget: u64) -> Result<EquivalenceVerdict, CodeError> {
    if !compatible(a, b) {
        return Ok(EquivalenceVerdict::Inequivalent);
    }
    if a.same_code(b) {
        return Ok(EquivalenceVerdict::Equivalent(EquivalenceCertificate { perm: (0..a.n()).collect() }));
    }
    let (ka, kb) = (invariant_key(a, None)?, invariant_key(b, None)?);
    if ka != kb {
        return Ok(EquivalenceVerdict::Inequivalent);
    }
    let left = Structure::new(a, &support_words(a)?);
    let right = Structure::new(b, &support_words(b)?);
    let path = FirstPath::new(&left);
    let mut cells = vec![0u32; right.n];
    if right.refine(&mut cells) != path.traces[0] {
        return Ok(EquivalenceVerdict::Inequivalent);
    }
    let mut search = Search { left: &left, right: &right, path: &path, nodes: 0, budget };
    Ok(match search.descend(cells, 0) {
        Outcome::Found(perm) => {
            let cert = EquivalenceCertificate { perm };
            assert!(cert.verify(a, b), "search returned an unverified certificate");
            EquivalenceVerdict::Equivalent(cert)
        }
        Outcome::Exhausted => EquivalenceVerdict::Inequivalent,
        Outcome::Budget => EquivalenceVerdict::BudgetExceeded { nodes: search.nodes },
    })
}

struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        Orbits { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn absorb(&mut self, perm: &[usize]) {
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = (self.find(i), self.find(j));
            if a != b {
                self.parent[a.max(b)] = a.min(b);
            }
        }
    }
}

/// Order of the coordinate permutation group preserving `code`.
pub fn aut_group_order(code: &BinaryCode, budget: u64) -> Result<AutResult, CodeError> {
    let s = Structure::new(code, &support_words(code)?);
    let path = FirstPath::new(&s);
    let depth = path.base.len();
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut orbit_lengths = vec![0usize; depth];
    let mut nodes = 0u64;
    for level in (0..depth).rev() {
        let v = path.base[level];
        let mut orbits = Orbits::new(s.n);
        for g in &generators {
            orbits.absorb(g);
        }
        let cell = members(&path.partitions[level], path.partitions[level][v]);
        let mut rejected: Vec<usize> = Vec::new();
        for &w in &cell {
            if w == v || orbits.find(w) == orbits.find(v) || rejected.iter().any(|&r| orbits.find(r) == orbits.find(w)) {
                continue;
            }
            let mut next = Structure::individualize(&path.partitions[level], w);
            let found = if s.refine(&mut next) != path.traces[level + 1] {
                None
            } else {
                let mut search = Search { left: &s, right: &s, path: &path, nodes: 0, budget: budget.saturating_sub(nodes) };
                let out = search.descend(next, level + 1);
                nodes += search.nodes;
                match out {
                    Outcome::Found(perm) if perm[v] == w && path.base[..level].iter().all(|&b| perm[b] == b) => Some(perm),
                    Outcome::Found(_) | Outcome::Exhausted => None,
                    Outcome::Budget => return Ok(AutResult::BudgetExceeded { nodes }),
                }
            };
            match found {
                Some(perm) => {
                    orbits.absorb(&perm);
                    generators.push(perm);
                }
                None => rejected.push(w),
            }
        }
        let root = orbits.find(v);
        orbit_lengths[level] = cell.iter().filter(|&&w| orbits.find(w) == root).count();
    }
    Ok(AutResult::Complete(AutGroup { orbit_lengths, generators, nodes }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitword::BitWord;
    use crate::code::random_self_dual;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn code(n: usize, rows: &[&str]) -> BinaryCode {
        BinaryCode::new(n, rows.iter().map(|r| BitWord::parse(r).unwrap()).collect()).unwrap()
    }

    fn order(c: &BinaryCode) -> u128 {
        match aut_group_order(c, DEFAULT_BUDGET).unwrap() {
            AutResult::Complete(g) => g.order().unwrap(),
            other => panic!("{other:?}"),
        }
    }

    /// Counts permutations of `0..n` fixing the code, by brute force.
    fn oracle_order(c: &BinaryCode) -> u128 {
        crate::perm::symmetric_group(c.n()).into_iter().filter(|p| c.is_invariant_under(&p.images())).count() as u128
    }

    #[test]
    fn small_group_orders() {
        assert_eq!(order(&code(2, &["11"])), 2);
        let h8 = code(8, &["11110000", "00111100", "00001111", "01010101"]);
        assert_eq!(order(&h8), 1344);
        let six_i2 = crate::fixed_part::six_i2();
        assert_eq!(order(&six_i2), 46080);
        assert_eq!(order(&crate::fixed_part::d12()), 23040);
    }

    #[test]
    fn orders_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [6, 8] {
            for _ in 0..4 {
                let c = random_self_dual(n, &mut rng);
                assert_eq!(order(&c), oracle_order(&c), "{:?}", c.raw_rows());
            }
        }
    }

    #[test]
    fn same_code_different_rows() {
        let a = code(2, &["11"]).direct_sum(&code(2, &["11"]));
        let b = code(4, &["1100", "0011"]);
        assert!(matches!(are_equivalent(&a, &b, DEFAULT_BUDGET).unwrap(), EquivalenceVerdict::Equivalent(_)));
    }

    #[test]
    fn permuted_copies_are_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [12, 20, 32] {
            let a = random_self_dual(n, &mut rng);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let b = a.permuted(&perm);
            match are_equivalent(&a, &b, DEFAULT_BUDGET).unwrap() {
                EquivalenceVerdict::Equivalent(cert) => assert!(cert.verify(&a, &b)),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn the_three_length_12_codes_are_pairwise_inequivalent() {
        let codes = [crate::fixed_part::six_i2(), crate::fixed_part::two_i2_h8(), crate::fixed_part::d12()];
        for i in 0..3 {
            for j in 0..3 {
                let v = are_equivalent(&codes[i], &codes[j], DEFAULT_BUDGET).unwrap();
                assert_eq!(i == j, matches!(v, EquivalenceVerdict::Equivalent(_)));
            }
        }
        let g2 = crate::fixed_part::g2_matrix();
        assert!(matches!(are_equivalent(&g2, &codes[2], DEFAULT_BUDGET).unwrap(), EquivalenceVerdict::Equivalent(_)));
    }

    #[test]
    fn verdict_is_symmetric_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..12 {
            let a = random_self_dual(10, &mut rng);
            let b = random_self_dual(10, &mut rng);
            let ab = matches!(are_equivalent(&a, &b, DEFAULT_BUDGET).unwrap(), EquivalenceVerdict::Equivalent(_));
            let ba = matches!(are_equivalent(&b, &a, DEFAULT_BUDGET).unwrap(), EquivalenceVerdict::Equivalent(_));
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn budget_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = crate::fixed_part::six_i2();
        let mut perm: Vec<usize> = (0..12).collect();
        perm.shuffle(&mut rng);
        let b = a.permuted(&perm);
        assert!(matches!(are_equivalent(&a, &b, 1).unwrap(), EquivalenceVerdict::BudgetExceeded { .. }));
        assert!(matches!(aut_group_order(&a, 2).unwrap(), AutResult::BudgetExceeded { .. }));
    }

    #[test]
    fn key_is_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_self_dual(24, &mut rng);
        let mut perm: Vec<usize> = (0..24).collect();
        perm.shuffle(&mut rng);
        assert_eq!(invariant_key(&a, None).unwrap(), invariant_key(&a.permuted(&perm), None).unwrap());
    }
}
