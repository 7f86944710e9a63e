//! Binary linear codes with a bit-packed generator matrix.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::bitword::{len_mask, ones, BitWord, MAX_LEN};
use crate::error::CodeError;

/// A binary linear `[n, k]` code given by `k` linearly independent rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    n: usize,
    rows: Vec<u128>,
}

/// Reduced row echelon form of a code together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub n: usize,
    /// Row `i` has a leading one at `pivots[i]` and zeros at every other pivot.
    pub rows: Vec<u128>,
    pub pivots: Vec<usize>,
}

/// Gaussian elimination in place over the columns listed in `column_order`.
/// Returns the pivot columns; `rows` is truncated to the rank.
pub(crate) fn eliminate(rows: &mut Vec<u128>, column_order: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in column_order {
        if r == rows.len() {
            break;
        }
        let bit = 1u128 << col;
        let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank of a list of raw rows over GF(2).
pub fn rank_of(rows: &[u128]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

impl BinaryCode {
    /// Builds a code from linearly independent rows of length `n`.
    pub fn new(n: usize, rows: Vec<BitWord>) -> Result<Self, CodeError> {
        let raw = Self::check_rows(n, &rows)?;
        Self::from_raw(n, raw)
    }

    /// Builds the code spanned by `rows`, dropping dependent rows.
    pub fn span(n: usize, rows: &[BitWord]) -> Result<Self, CodeError> {
        let mut raw = Self::check_rows(n, rows)?;
        eliminate(&mut raw, 0..n);
        Ok(BinaryCode { n, rows: raw })
    }

    pub fn span_raw(n: usize, mut raw: Vec<u128>) -> Self {
        debug_assert!(raw.iter().all(|r| r & !len_mask(n) == 0));
        eliminate(&mut raw, 0..n);
        BinaryCode { n, rows: raw }
    }

    /// Raw-row constructor; rows must be independent and fit in `n` bits.
    pub fn from_raw(n: usize, rows: Vec<u128>) -> Result<Self, CodeError> {
        if n > MAX_LEN {
            return Err(CodeError::LengthTooLarge(n));
        }
        if rows.iter().any(|r| r & !len_mask(n) != 0) {
            return Err(CodeError::BitsBeyondLength { len: n });
        }
        let rank = rank_of(&rows);
        if rank != rows.len() {
            return Err(CodeError::DependentRows { rank, rows: rows.len() });
        }
        Ok(BinaryCode { n, rows })
    }

    fn check_rows(n: usize, rows: &[BitWord]) -> Result<Vec<u128>, CodeError> {
        if n > MAX_LEN {
            return Err(CodeError::LengthTooLarge(n));
        }
        rows.iter()
            .map(|r| {
                if r.len() != n {
                    Err(CodeError::LengthMismatch { expected: n, found: r.len() })
                } else {
                    Ok(r.bits())
                }
            })
            .collect()
    }

    /// The zero code `{0}` of length `n`.
    pub fn zero(n: usize) -> Self {
        BinaryCode { n, rows: Vec::new() }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn raw_rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn rows(&self) -> Vec<BitWord> {
        self.rows.iter().map(|&r| BitWord::from_bits(r, self.n).expect("row fits")).collect()
    }

    pub fn word(&self, bits: u128) -> BitWord {
        BitWord::from_bits(bits, self.n).expect("word fits in code length")
    }

    /// Reduced row echelon form; errors on the zero matrix.
    pub fn rref(&self) -> Result<Echelon, CodeError> {
        if self.rows.is_empty() {
            return Err(CodeError::RankZero);
        }
        Ok(self.echelon())
    }

    pub fn echelon(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let pivots = eliminate(&mut rows, 0..self.n);
        Echelon { n: self.n, rows, pivots }
    }

    /// Same code with its rows replaced by the reduced echelon basis.
    pub fn normalized(&self) -> BinaryCode {
        BinaryCode { n: self.n, rows: self.echelon().rows }
    }

    pub fn dual(&self) -> BinaryCode {
        let e = self.echelon();
        let mut is_pivot = vec![false; self.n];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::with_capacity(self.n - e.rows.len());
        for free in (0..self.n).filter(|&c| !is_pivot[c]) {
            let mut v = 1u128 << free;
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                if row >> free & 1 == 1 {
                    v |= 1u128 << p;
                }
            }
            out.push(v);
        }
        BinaryCode { n: self.n, rows: out }
    }

    /// `G Gᵀ = 0`.
    pub fn is_self_orthogonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &a)| self.rows[i..].iter().all(|&b| (a & b).count_ones() % 2 == 0))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.k() == self.n && self.is_self_orthogonal()
    }

    pub fn contains(&self, w: &BitWord) -> bool {
        w.len() == self.n && self.echelon().contains_raw(w.bits())
    }

    /// Row-space equality.
    pub fn same_code(&self, other: &BinaryCode) -> bool {
        self.n == other.n && self.k() == other.k() && self.echelon().rows == other.echelon().rows
    }

    /// Applies a coordinate permutation: coordinate `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> BinaryCode {
        assert_eq!(perm.len(), self.n);
        BinaryCode { n: self.n, rows: self.rows.iter().map(|&r| permute_bits(r, perm)).collect() }
    }

    /// Invariance under a coordinate permutation.
    pub fn is_invariant_under(&self, perm: &[usize]) -> bool {
        let e = self.echelon();
        self.rows.iter().all(|&r| e.contains_raw(permute_bits(r, perm)))
    }

    /// Direct sum, `self` occupying the first `n` coordinates.
    pub fn direct_sum(&self, other: &BinaryCode) -> BinaryCode {
        let n = self.n + other.n;
        assert!(n <= MAX_LEN);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|&r| r << self.n));
        BinaryCode { n, rows }
    }

    /// Hex SHA-256 of the reduced echelon form; equal codes get equal hashes.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{} {}\n", self.n, self.k()));
        for &r in &self.echelon().rows {
            h.update(r.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// Serializes in the `.gm2` text format.
    pub fn to_gm2(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {}", self.n, self.k()).unwrap();
        for w in self.rows() {
            writeln!(s, "{w}").unwrap();
        }
        s
    }

    /// Parses the `.gm2` format: `n k`, then `k` rows of exactly `n` bits, trailing newline.
    pub fn from_gm2(text: &str) -> Result<BinaryCode, CodeError> {
        let fail = |line: usize, msg: &str| CodeError::Format { line, msg: msg.to_string() };
        if !text.ends_with('\n') {
            return Err(fail(0, "missing trailing newline"));
        }
        let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
        let header = lines.next().ok_or_else(|| fail(1, "empty input"))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(fail(1, "header must be `n k`"));
        }
        let n: usize = nums[0].parse().map_err(|_| fail(1, "bad n"))?;
        let k: usize = nums[1].parse().map_err(|_| fail(1, "bad k"))?;
        if n > MAX_LEN {
            return Err(CodeError::LengthTooLarge(n));
        }
        if k > n {
            return Err(fail(1, "k exceeds n"));
        }
        let mut rows = Vec::with_capacity(k);
        for i in 0..k {
            let line = lines.next().ok_or_else(|| fail(i + 2, "missing row"))?;
            if line.chars().count() != n {
                return Err(fail(i + 2, &format!("row must have exactly {n} characters")));
            }
            let w = BitWord::parse(line).map_err(|e| fail(i + 2, &e.to_string()))?;
            rows.push(w);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(fail(k + 2, "unexpected trailing content"));
        }
        BinaryCode::new(n, rows)
    }
}

impl std::fmt::Debug for BinaryCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BinaryCode[{}, {}]", self.n, self.k())
    }
}

impl Echelon {
    /// Membership test by reduction against the pivots.
    #[inline]
    pub fn contains_raw(&self, mut w: u128) -> bool {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w >> p & 1 == 1 {
                w ^= row;
            }
        }
        w == 0
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// A random self-dual code of even length `n`, grown from a
/// self-orthogonal code by one random even vector of its dual at a time.
pub fn random_self_dual<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> BinaryCode {
    assert!(n % 2 == 0 && n <= MAX_LEN && n > 0);
    let mut code = BinaryCode::zero(n);
    while code.k() < n / 2 {
        let dual = code.dual();
        let ech = code.echelon();
        loop {
            let mut v = 0u128;
            for &r in dual.raw_rows() {
                if rng.gen::<bool>() {
                    v ^= r;
                }
            }
            if v.count_ones() % 2 == 0 && !ech.contains_raw(v) {
                let mut rows = code.rows.clone();
                rows.push(v);
                code = BinaryCode { n, rows };
                break;
            }
        }
    }
    code
}

/// Moves bit `i` to bit `perm[i]`.
#[inline]
pub fn permute_bits(w: u128, perm: &[usize]) -> u128 {
    let mut out = 0u128;
    for i in ones(w) {
        out |= 1u128 << perm[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code(n: usize, rows: &[&str]) -> BinaryCode {
        BinaryCode::new(n, rows.iter().map(|r| BitWord::parse(r).unwrap()).collect()).unwrap()
    }

    /// Plain elimination on a dense boolean matrix, independent of the packed path.
    fn oracle_rank(rows: &[Vec<bool>]) -> usize {
        let mut m: Vec<Vec<bool>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..m.len()).find(|&i| m[i][c]) {
                m.swap(rank, p);
                for i in 0..m.len() {
                    if i != rank && m[i][c] {
                        let pr = m[rank].clone();
                        for (x, y) in m[i].iter_mut().zip(pr) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn rref_full_rank_2x2() {
        let e = code(2, &["11", "01"]).rref().unwrap();
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.rows, vec![0b01, 0b10]);
    }

    #[test]
    fn rref_zero_matrix_is_an_error() {
        assert_eq!(BinaryCode::zero(4).rref(), Err(CodeError::RankZero));
    }

    #[test]
    fn dependent_rows_rejected() {
        let rows = vec![BitWord::parse("110").unwrap(), BitWord::parse("110").unwrap()];
        assert!(matches!(BinaryCode::new(3, rows.clone()), Err(CodeError::DependentRows { .. })));
        assert_eq!(BinaryCode::span(3, &rows).unwrap().k(), 1);
    }

    #[test]
    fn random_rank_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let dense: Vec<Vec<bool>> = (0..10).map(|_| (0..20).map(|_| rng.gen_bool(0.3)).collect()).collect();
            let raw: Vec<u128> = dense
                .iter()
                .map(|r| r.iter().enumerate().filter(|(_, &b)| b).fold(0u128, |a, (i, _)| a | 1 << i))
                .collect();
            assert_eq!(rank_of(&raw), oracle_rank(&dense));
            assert_eq!(BinaryCode::span_raw(20, raw).k(), oracle_rank(&dense));
        }
    }

    #[test]
    fn repetition_dual_is_even_weight_code() {
        let rep = code(3, &["111"]);
        let d = rep.dual();
        assert_eq!(d.k(), 2);
        assert!(d.rows().iter().all(|w| w.weight() % 2 == 0));
    }

    #[test]
    fn self_duality_predicates() {
        assert!(code(2, &["11"]).is_self_dual());
        assert!(!code(2, &["10"]).is_self_orthogonal());
        let h8 = code(8, &["11110000", "00111100", "00001111", "01010101"]);
        assert!(h8.is_self_dual());
    }

    #[test]
    fn gm2_round_trip_and_strictness() {
        let c = code(4, &["1100", "0011"]);
        let text = c.to_gm2();
        assert_eq!(text, "4 2\n1100\n0011\n");
        assert_eq!(BinaryCode::from_gm2(&text).unwrap(), c);
        assert!(BinaryCode::from_gm2("4 2\n1100\n0011").is_err());
        assert!(BinaryCode::from_gm2("4 2\n1100\n011\n").is_err());
        assert!(BinaryCode::from_gm2("4 2\n1100\n0 11\n").is_err());
        assert!(BinaryCode::from_gm2("4 2\n1100\n").is_err());
    }

    fn arb_code() -> impl Strategy<Value = BinaryCode> {
        (4usize..40).prop_flat_map(|n| {
            proptest::collection::vec(any::<u128>(), 1..n).prop_map(move |rows| {
                BinaryCode::span_raw(n, rows.into_iter().map(|r| r & len_mask(n)).collect())
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn double_dual_is_identity(c in arb_code()) {
            let d = c.dual();
            prop_assert_eq!(d.k(), c.n() - c.k());
            for a in c.raw_rows() {
                for b in d.raw_rows() {
                    prop_assert_eq!((a & b).count_ones() % 2, 0);
                }
            }
            prop_assert!(d.dual().same_code(&c));
            prop_assert_eq!(c.echelon().rank(), c.k());
        }
    }
}
