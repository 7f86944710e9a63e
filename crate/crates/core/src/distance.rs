//! Minimum distance and weight counting.
//!
//! Low-weight work goes through Brouwer–Zimmermann information-set
//! enumeration: the generator matrix is brought to systematic form on several
//! information sets and, for `w = 1, 2, ...`, every combination of `w`
//! systematic rows is visited round-robin across the sets. A codeword that has
//! not been met after round `w` has weight at least `w + 1` on every set,
//! which gives the lower bound that stops the search.
//!
//! Codes with a known automorphism whose non-trivial cycles all have the same
//! length `L` admit a second plan: a single information set meeting every
//! cycle in at most `r` coordinates, together with its `L` images under the
//! automorphism, covers every coordinate at most `r` times. Enumerating the
//! one set then bounds unseen weights by `ceil(L (w + 1) / r)`.

use std::collections::HashSet;
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitword::{ones, BitWord};
use crate::code::{permute_bits, BinaryCode};
use crate::error::CodeError;

/// Largest dimension accepted for full `2^k` enumeration.
pub const FULL_ENUMERATION_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceVerdict {
    /// The minimum distance.
    Exact(usize),
    /// Every nonzero codeword has at least this weight.
    AtLeast(usize),
    /// A nonzero codeword of weight below `threshold` exists.
    Below { threshold: usize, witness: BitWord },
}

impl DistanceVerdict {
    /// True when the verdict certifies `d >= t`.
    pub fn at_least(&self, t: usize) -> bool {
        match self {
            DistanceVerdict::Exact(d) | DistanceVerdict::AtLeast(d) => *d >= t,
            DistanceVerdict::Below { .. } => false,
        }
    }

    pub fn exact(&self) -> Option<usize> {
        match self {
            DistanceVerdict::Exact(d) => Some(*d),
            _ => None,
        }
    }
}

impl std::fmt::Display for DistanceVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DistanceVerdict::Exact(d) => write!(f, "{d}"),
            DistanceVerdict::AtLeast(d) => write!(f, ">= {d}"),
            DistanceVerdict::Below { threshold, .. } => write!(f, "< {threshold}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    /// `counts[i]` = number of codewords of weight `i`, for `i <= max_tracked_weight`.
    pub counts: Vec<u64>,
    pub complete: bool,
    pub max_tracked_weight: usize,
}

impl WeightDistribution {
    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    /// Smallest nonzero weight with a nonzero count, if any was tracked.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&i| self.counts[i] > 0)
    }
}

/// A coordinate permutation known to be an automorphism of the code, with
/// all non-trivial cycles of the same length.
#[derive(Clone, Debug)]
pub struct Symmetry {
    perm: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    cycle_of: Vec<Option<usize>>,
}

impl Symmetry {
    /// `cycles` lists 0-based coordinates; each cycle maps `c[i] -> c[i+1]`.
    pub fn from_cycles(n: usize, cycles: Vec<Vec<usize>>) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut cycle_of = vec![None; n];
        let len = cycles.first().map_or(1, |c| c.len());
        for (ci, c) in cycles.iter().enumerate() {
            assert_eq!(c.len(), len, "all cycles must share one length");
            for (i, &p) in c.iter().enumerate() {
                perm[p] = c[(i + 1) % c.len()];
                cycle_of[p] = Some(ci);
            }
        }
        Symmetry { perm, cycles, cycle_of }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn order(&self) -> usize {
        self.cycles.first().map_or(1, |c| c.len())
    }

    #[inline]
    pub fn apply(&self, w: u128) -> u128 {
        permute_bits(w, &self.perm)
    }
}

/// A generator matrix in systematic form on `columns`.
#[derive(Clone, Debug)]
pub struct InformationSet {
    pub columns: u128,
    pub gens: Vec<u128>,
}

#[derive(Clone, Debug)]
enum Strategy {
    Disjoint(Vec<InformationSet>),
    Orbit { set: InformationSet, images: usize, coverage: usize, symmetry: Symmetry },
}

/// Precomputed information sets for a code.
#[derive(Clone, Debug)]
pub struct DistancePlan {
    n: usize,
    k: usize,
    strategy: Strategy,
}

/// Systematic form using only pivot columns chosen from `allowed` in order.
fn systematic_on(rows: &[u128], order: impl IntoIterator<Item = usize>) -> (Vec<u128>, u128) {
    let mut rows = rows.to_vec();
    let mut r = 0;
    let mut columns = 0u128;
    for col in order {
        if r == rows.len() {
            break;
        }
        let bit = 1u128 << col;
        let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else { continue };
        rows.swap(r, p);
        let pr = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pr;
            }
        }
        columns |= bit;
        r += 1;
    }
    rows.truncate(r);
    (rows, columns)
}

fn disjoint_sets(code: &BinaryCode) -> Vec<InformationSet> {
    let k = code.k();
    let mut used = 0u128;
    let mut sets = Vec::new();
    loop {
        let free: Vec<usize> = (0..code.n()).filter(|&c| used >> c & 1 == 0).collect();
        let (gens, columns) = systematic_on(code.raw_rows(), free);
        if gens.len() < k {
            break;
        }
        used |= columns;
        sets.push(InformationSet { columns, gens });
    }
    sets
}

/// Information set avoiding fixed points and meeting each cycle at most `cap` times.
fn balanced_set(code: &BinaryCode, sym: &Symmetry, cap: usize, rng: &mut ChaCha8Rng, shuffle: bool) -> Option<InformationSet> {
    let k = code.k();
    let mut per_cycle: Vec<Vec<usize>> = sym.cycles.clone();
    if shuffle {
        for c in &mut per_cycle {
            c.shuffle(rng);
        }
    }
    let len = sym.order();
    let mut order = Vec::with_capacity(per_cycle.len() * len);
    for i in 0..len {
        for c in &per_cycle {
            order.push(c[i]);
        }
    }
    let mut rows = code.raw_rows().to_vec();
    let mut counts = vec![0usize; per_cycle.len()];
    let mut r = 0;
    let mut columns = 0u128;
    for col in order {
        if r == k {
            break;
        }
        let ci = sym.cycle_of[col].expect("column on a cycle");
        if counts[ci] == cap {
            continue;
        }
        let bit = 1u128 << col;
        let Some(p) = (r..k).find(|&i| rows[i] & bit != 0) else { continue };
        rows.swap(r, p);
        let pr = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pr;
            }
        }
        columns |= bit;
        counts[ci] += 1;
        r += 1;
    }
    (r == k).then_some(InformationSet { columns, gens: rows })
}

impl DistancePlan {
    /// Greedy disjoint information sets taken from successive echelon pivots.
    pub fn new(code: &BinaryCode) -> Result<Self, CodeError> {
        if code.k() == 0 {
            return Err(CodeError::EmptyCode);
        }
        Ok(DistancePlan { n: code.n(), k: code.k(), strategy: Strategy::Disjoint(disjoint_sets(code)) })
    }

    /// Uses the automorphism when it yields a better bound per enumerated set;
    /// the caller guarantees `sym` maps the code to itself.
    pub fn with_symmetry(code: &BinaryCode, sym: &Symmetry) -> Result<Self, CodeError> {
        debug_assert!(code.is_invariant_under(sym.perm()));
        let base = Self::new(code)?;
        let m = match &base.strategy {
            Strategy::Disjoint(s) => s.len(),
            Strategy::Orbit { .. } => unreachable!(),
        };
        let cycles = sym.cycles.len();
        if cycles == 0 {
            return Ok(base);
        }
        let len = sym.order();
        let k = code.k();
        let min_cap = k.div_ceil(cycles);
        if min_cap > len || len as f64 / min_cap as f64 <= m as f64 {
            return Ok(base);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for cap in min_cap..=len {
            if len as f64 / cap as f64 <= m as f64 {
                break;
            }
            for attempt in 0..32 {
                if let Some(set) = balanced_set(code, sym, cap, &mut rng, attempt > 0) {
                    return Ok(DistancePlan {
                        n: code.n(),
                        k,
                        strategy: Strategy::Orbit { set, images: len, coverage: cap, symmetry: sym.clone() },
                    });
                }
            }
        }
        Ok(base)
    }

    /// Number of information sets enumerated per round.
    pub fn enumerated_sets(&self) -> usize {
        match &self.strategy {
            Strategy::Disjoint(s) => s.len(),
            Strategy::Orbit { .. } => 1,
        }
    }

    pub fn uses_symmetry(&self) -> bool {
        matches!(self.strategy, Strategy::Orbit { .. })
    }

    /// Lower bound on unseen weights after round `w` is done on `done` sets.
    fn lower_bound(&self, w: usize, done: usize) -> usize {
        match &self.strategy {
            Strategy::Disjoint(sets) => done * (w + 1) + (sets.len() - done) * w,
            Strategy::Orbit { images, coverage, .. } => {
                if done == 0 {
                    (images * w).div_ceil(*coverage)
                } else {
                    (images * (w + 1)).div_ceil(*coverage)
                }
            }
        }
    }

    fn sets(&self) -> &[InformationSet] {
        match &self.strategy {
            Strategy::Disjoint(s) => s,
            Strategy::Orbit { set, .. } => std::slice::from_ref(set),
        }
    }

    pub fn min_distance(&self, early_abort_below: Option<usize>) -> DistanceVerdict {
        let mut upper = usize::MAX;
        let mut witness = 0u128;
        for w in 1..=self.k {
            for (j, set) in self.sets().iter().enumerate() {
                let flow = for_each_combination(&set.gens, w, |c| {
                    let wt = c.count_ones() as usize;
                    if wt < upper {
                        upper = wt;
                        witness = c;
                        if early_abort_below.is_some_and(|t| wt < t) {
                            return ControlFlow::Break(());
                        }
                    }
                    ControlFlow::Continue(())
                });
                if flow.is_break() {
                    return DistanceVerdict::Below {
                        threshold: early_abort_below.unwrap(),
                        witness: BitWord::from_bits(witness, self.n).unwrap(),
                    };
                }
                let lb = self.lower_bound(w, j + 1);
                if lb >= upper {
                    return DistanceVerdict::Exact(upper);
                }
                if let Some(t) = early_abort_below {
                    if lb >= t {
                        return DistanceVerdict::AtLeast(lb);
                    }
                }
            }
        }
        DistanceVerdict::Exact(upper)
    }

    /// Every codeword of weight `1..=cap`, each listed once, sorted.
    pub fn low_weight_words(&self, cap: usize) -> Vec<u128> {
        let mut found: HashSet<u128> = HashSet::new();
        let mut out = Vec::new();
        match &self.strategy {
            Strategy::Disjoint(sets) => {
                let masks: Vec<u128> = sets.iter().map(|s| s.columns).collect();
                for w in 1..=self.k {
                    if self.lower_bound(w - 1, sets.len()) > cap {
                        break;
                    }
                    for (j, set) in sets.iter().enumerate() {
                        let _ = for_each_combination(&set.gens, w, |c| {
                            let wt = c.count_ones() as usize;
                            if wt <= cap && first_visit(c, &masks, j, w) {
                                out.push(c);
                            }
                            ControlFlow::Continue(())
                        });
                    }
                }
            }
            Strategy::Orbit { set, symmetry, .. } => {
                for w in 1..=self.k {
                    if self.lower_bound(w - 1, 1) > cap {
                        break;
                    }
                    let _ = for_each_combination(&set.gens, w, |c| {
                        if c.count_ones() as usize <= cap && found.insert(c) {
                            let mut img = symmetry.apply(c);
                            while img != c {
                                found.insert(img);
                                img = symmetry.apply(img);
                            }
                        }
                        ControlFlow::Continue(())
                    });
                }
                out = found.into_iter().collect();
            }
        }
        out.sort_unstable();
        out
    }

    pub fn capped_distribution(&self, cap: usize) -> WeightDistribution {
        let cap = cap.min(self.n);
        let mut counts = vec![0u64; cap + 1];
        counts[0] = 1;
        for c in self.low_weight_words(cap) {
            counts[c.count_ones() as usize] += 1;
        }
        WeightDistribution { counts, complete: false, max_tracked_weight: cap }
    }
}

/// `c` reached on set `j` with restriction weight `w` is counted only there.
#[inline]
fn first_visit(c: u128, masks: &[u128], j: usize, w: usize) -> bool {
    masks.iter().enumerate().all(|(i, &m)| {
        let r = (c & m).count_ones() as usize;
        if i < j {
            r > w
        } else {
            r >= w
        }
    })
}

/// Visits the XOR of every `w`-subset of `gens`.
pub fn for_each_combination<F>(gens: &[u128], w: usize, mut f: F) -> ControlFlow<()>
where
    F: FnMut(u128) -> ControlFlow<()>,
{
    fn rec<F: FnMut(u128) -> ControlFlow<()>>(gens: &[u128], start: usize, left: usize, acc: u128, f: &mut F) -> ControlFlow<()> {
        if left == 1 {
            for &g in &gens[start..] {
                f(acc ^ g)?;
            }
            return ControlFlow::Continue(());
        }
        for i in start..=gens.len() - left {
            rec(gens, i + 1, left - 1, acc ^ gens[i], f)?;
        }
        ControlFlow::Continue(())
    }
    if w == 0 || w > gens.len() {
        return ControlFlow::Continue(());
    }
    rec(gens, 0, w, 0, &mut f)
}

/// Exact minimum distance, or a threshold verdict when `early_abort_below` is set.
pub fn min_distance(code: &BinaryCode, early_abort_below: Option<usize>) -> Result<DistanceVerdict, CodeError> {
    Ok(DistancePlan::new(code)?.min_distance(early_abort_below))
}

/// All nonzero codewords of weight at most `cap`.
pub fn low_weight_words(code: &BinaryCode, cap: usize) -> Vec<BitWord> {
    match DistancePlan::new(code) {
        Ok(plan) => plan.low_weight_words(cap).into_iter().map(|c| code.word(c)).collect(),
        Err(_) => Vec::new(),
    }
}

/// Full distribution (`up_to = None`, needs `k <= 40`) or exact counts up to a cap.
pub fn weight_distribution(code: &BinaryCode, up_to: Option<usize>) -> Result<WeightDistribution, CodeError> {
    match up_to {
        None => full_weight_distribution(code, 1),
        Some(cap) => Ok(match DistancePlan::new(code) {
            Ok(plan) => plan.capped_distribution(cap),
            Err(_) => {
                let cap = cap.min(code.n());
                let mut counts = vec![0; cap + 1];
                counts[0] = 1;
                WeightDistribution { counts, complete: false, max_tracked_weight: cap }
            }
        }),
    }
}

/// Gray-code enumeration of all `2^k` codewords, split by a prefix of the
/// message over `jobs` workers; the merged counts do not depend on `jobs`.
pub fn full_weight_distribution(code: &BinaryCode, jobs: usize) -> Result<WeightDistribution, CodeError> {
    let k = code.k();
    if k > FULL_ENUMERATION_LIMIT {
        return Err(CodeError::EnumerationTooLarge { k, limit: FULL_ENUMERATION_LIMIT });
    }
    let n = code.n();
    let rows = code.raw_rows();
    let prefix_bits = k.min(6);
    let low = k - prefix_bits;
    let chunk = |prefix: u64| -> Vec<u64> {
        let mut counts = vec![0u64; n + 1];
        let mut c = ones(prefix as u128).fold(0u128, |acc, i| acc ^ rows[low + i]);
        counts[c.count_ones() as usize] += 1;
        for i in 1u64..(1u64 << low) {
            c ^= rows[i.trailing_zeros() as usize];
            counts[c.count_ones() as usize] += 1;
        }
        counts
    };
    let run = || -> Vec<u64> {
        (0u64..1 << prefix_bits).into_par_iter().map(chunk).reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
    };
    let counts = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    Ok(WeightDistribution { counts, complete: true, max_tracked_weight: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_code(rng: &mut ChaCha8Rng, n: usize, k: usize) -> BinaryCode {
        loop {
            let rows: Vec<u128> = (0..k).map(|_| rng.gen::<u128>() & ((1u128 << n) - 1)).collect();
            if let Ok(c) = BinaryCode::from_raw(n, rows) {
                return c;
            }
        }
    }

    /// Per-word popcount over an explicit enumeration of all messages.
    fn oracle_distribution(code: &BinaryCode) -> Vec<u64> {
        let rows = code.raw_rows();
        let mut counts = vec![0u64; code.n() + 1];
        for m in 0u64..(1 << code.k()) {
            let mut c = 0u128;
            for (i, r) in rows.iter().enumerate() {
                if m >> i & 1 == 1 {
                    c ^= r;
                }
            }
            counts[c.count_ones() as usize] += 1;
        }
        counts
    }

    fn hamming8() -> BinaryCode {
        BinaryCode::new(8, ["11110000", "00111100", "00001111", "01010101"].iter().map(|s| BitWord::parse(s).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn extended_hamming_distance() {
        assert_eq!(min_distance(&hamming8(), None).unwrap(), DistanceVerdict::Exact(4));
        let d = weight_distribution(&hamming8(), None).unwrap();
        assert_eq!(d.counts, vec![1, 0, 0, 0, 14, 0, 0, 0, 1]);
    }

    #[test]
    fn early_abort_verdicts() {
        match min_distance(&hamming8(), Some(5)).unwrap() {
            DistanceVerdict::Below { threshold: 5, witness } => assert_eq!(witness.weight(), 4),
            v => panic!("unexpected {v:?}"),
        }
        assert!(min_distance(&hamming8(), Some(4)).unwrap().at_least(4));
    }

    #[test]
    fn repetition_pair_distribution() {
        let i2 = BinaryCode::new(2, vec![BitWord::parse("11").unwrap()]).unwrap();
        let d = weight_distribution(&i2, None).unwrap();
        assert_eq!(d.counts, vec![1, 0, 1]);
        assert!(d.complete);
    }

    #[test]
    fn empty_code_has_no_distance() {
        assert_eq!(min_distance(&BinaryCode::zero(5), None), Err(CodeError::EmptyCode));
    }

    #[test]
    fn enumeration_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_code(&mut rng, 100, 41);
        assert!(matches!(weight_distribution(&c, None), Err(CodeError::EnumerationTooLarge { .. })));
    }

    #[test]
    fn gray_code_matches_popcount_oracle_k20() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = random_code(&mut rng, 48, 20);
        let oracle = oracle_distribution(&c);
        assert_eq!(full_weight_distribution(&c, 1).unwrap().counts, oracle);
        assert_eq!(full_weight_distribution(&c, 4).unwrap().counts, oracle);
    }

    #[test]
    fn capped_counts_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let n = rng.gen_range(8..40);
            let k = rng.gen_range(1..=n.min(14));
            let c = random_code(&mut rng, n, k);
            let oracle = oracle_distribution(&c);
            let cap = rng.gen_range(0..=n);
            let capped = weight_distribution(&c, Some(cap)).unwrap();
            assert_eq!(&capped.counts[..], &oracle[..=cap]);
        }
    }

    #[test]
    fn bz_matches_enumeration_on_random_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..120 {
            let n = rng.gen_range(10..60);
            let k = rng.gen_range(1..=n.min(16));
            let c = random_code(&mut rng, n, k);
            let oracle = oracle_distribution(&c);
            let d = (1..=n).find(|&i| oracle[i] > 0).unwrap();
            assert_eq!(min_distance(&c, None).unwrap(), DistanceVerdict::Exact(d));
            let t = rng.gen_range(1..=n);
            assert_eq!(min_distance(&c, Some(t)).unwrap().at_least(t), d >= t);
        }
    }

    /// Quasi-cyclic code: invariant under simultaneous cyclic shift of blocks.
    fn quasi_cyclic(rng: &mut ChaCha8Rng, blocks: usize, len: usize, gens: usize) -> (BinaryCode, Symmetry) {
        let n = blocks * len;
        let cycles: Vec<Vec<usize>> = (0..blocks).map(|b| (0..len).map(|j| b * len + j).collect()).collect();
        let sym = Symmetry::from_cycles(n, cycles);
        let mut rows = Vec::new();
        for _ in 0..gens {
            let mut g: u128 = rng.gen::<u128>() & ((1u128 << n) - 1);
            for _ in 0..len {
                rows.push(g);
                g = sym.apply(g);
            }
        }
        (BinaryCode::span_raw(n, rows), sym)
    }

    #[test]
    fn symmetric_plan_agrees_with_plain_plan() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let (blocks, gens) = (rng.gen_range(2..6), rng.gen_range(1..3));
            let (c, sym) = quasi_cyclic(&mut rng, blocks, 5, gens);
            assert!(c.is_invariant_under(sym.perm()));
            let plain = DistancePlan::new(&c).unwrap();
            let fast = DistancePlan::with_symmetry(&c, &sym).unwrap();
            assert_eq!(plain.min_distance(None), fast.min_distance(None));
            let cap = c.n() / 2;
            assert_eq!(plain.low_weight_words(cap), fast.low_weight_words(cap));
        }
    }
}
