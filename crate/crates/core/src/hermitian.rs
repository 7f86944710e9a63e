//! Length-8 Hermitian self-dual codes over `I1 ≅ GF(4)` and `I2 ≅ GF(64)`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::code::BinaryCode;
use crate::distance::DistancePlan;
use crate::error::HermitianError;
use crate::perm::{closure, Permutation};
use crate::ring::{phi_inv_row, F4Elem, F64Elem, FieldSymbol};

pub const LENGTH: usize = 8;
pub const DIMENSION: usize = 4;

pub type Row<F> = [F; LENGTH];

/// A linear `[8, k]` code over one of the two field components.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HermitianCode<F: FieldSymbol> {
    rows: Vec<Row<F>>,
}

fn scale<F: FieldSymbol>(c: F, row: &Row<F>) -> Row<F> {
    std::array::from_fn(|i| c.mul(row[i]))
}

fn add_rows<F: FieldSymbol>(a: &Row<F>, b: &Row<F>) -> Row<F> {
    std::array::from_fn(|i| a[i].add(b[i]))
}

/// `sum_i a_i conj(b_i)`.
pub fn hermitian_product<F: FieldSymbol>(a: &Row<F>, b: &Row<F>) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc.add(x.mul(y.conj())))
}

/// Reduced row echelon form over the field restricted to `columns`; returns rank.
fn rank_on<F: FieldSymbol>(rows: &[Row<F>], columns: &[usize]) -> usize {
    let mut m: Vec<Row<F>> = rows.to_vec();
    let mut r = 0;
    for &c in columns {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        m[r] = scale(inv, &m[r]);
        let pr = m[r];
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                *row = add_rows(row, &scale(row[c], &pr));
            }
        }
        r += 1;
    }
    r
}

fn rref<F: FieldSymbol>(rows: &[Row<F>]) -> Vec<Row<F>> {
    let mut m: Vec<Row<F>> = rows.to_vec();
    let mut r = 0;
    for c in 0..LENGTH {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        m[r] = scale(inv, &m[r]);
        let pr = m[r];
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                *row = add_rows(row, &scale(row[c], &pr));
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

impl<F: FieldSymbol> HermitianCode<F> {
    /// Builds a code from linearly independent rows.
    pub fn new(rows: Vec<Row<F>>) -> Result<Self, HermitianError> {
        let all: Vec<usize> = (0..LENGTH).collect();
        if rank_on(&rows, &all) != rows.len() {
            return Err(HermitianError::DependentRows);
        }
        Ok(HermitianCode { rows })
    }

    /// Builds and checks Hermitian self-duality.
    pub fn self_dual(rows: Vec<Row<F>>) -> Result<Self, HermitianError> {
        let c = Self::new(rows)?;
        if !c.is_hermitian_self_dual() {
            return Err(HermitianError::NotSelfDual);
        }
        Ok(c)
    }

    pub fn rows(&self) -> &[Row<F>] {
        &self.rows
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// `G conj(G)^T = 0` and `k = n / 2`.
    pub fn is_hermitian_self_dual(&self) -> bool {
        self.k() == DIMENSION
            && self.rows.iter().all(|g| self.rows.iter().all(|h| hermitian_product(g, h).is_zero()))
    }

    pub fn same_code(&self, other: &Self) -> bool {
        rref(&self.rows) == rref(&other.rows)
    }

    pub fn contains(&self, w: &Row<F>) -> bool {
        let mut rows = self.rows.clone();
        rows.push(*w);
        let all: Vec<usize> = (0..LENGTH).collect();
        rank_on(&rows, &all) == self.k()
    }

    /// Hamming minimum distance: `8 - max{|S| : rank(G_S) < k}`.
    pub fn min_distance(&self) -> usize {
        let mut best = 0;
        for s in 0u32..(1 << LENGTH) {
            let cols: Vec<usize> = (0..LENGTH).filter(|&i| s >> i & 1 == 1).collect();
            if cols.len() > best && rank_on(&self.rows, &cols) < self.k() {
                best = cols.len();
            }
        }
        LENGTH - best
    }

    /// Binary image under `phi^-1`: rows `b g` for `b` in a GF(2)-basis of the field.
    pub fn binary_image(&self) -> BinaryCode {
        let basis = F::binary_basis();
        let mut raw = Vec::with_capacity(basis.len() * self.k());
        for g in &self.rows {
            for &b in &basis {
                raw.push(phi_inv_row(&scale(b, g)).bits());
            }
        }
        BinaryCode::from_raw(72, raw).expect("phi^-1 is injective and the basis is independent")
    }

    /// Hex SHA-256 of the reduced echelon form, an identifier independent of the generator.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update([F::ORDER as u8]);
        for row in rref(&self.rows) {
            h.update(row.map(|a| a.index() as u8));
        }
        hex::encode(h.finalize())
    }
}

impl<F: FieldSymbol> std::fmt::Debug for HermitianCode<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

impl HermitianCode<F4Elem> {
    /// Every codeword, `4^k` of them.
    pub fn codewords(&self) -> Vec<Row<F4Elem>> {
        let mut out = vec![[F4Elem::Zero; LENGTH]];
        for g in &self.rows {
            let mut next = Vec::with_capacity(out.len() * 4);
            for w in &out {
                for c in [F4Elem::Zero, F4Elem::One, F4Elem::Omega, F4Elem::OmegaBar] {
                    next.push(add_rows(w, &scale(c, g)));
                }
            }
            out = next;
        }
        out
    }
}

/// Rows of `Q1`.
pub const Q1: [&str; 4] = ["10000111", "01001011", "00101101", "00011110"];

/// The quaternary Hermitian self-dual `[8, 4, 4]` code `e8` generated by `Q1`.
pub fn e8_code() -> HermitianCode<F4Elem> {
    let rows = Q1
        .iter()
        .map(|s| std::array::from_fn(|i| if s.as_bytes()[i] == b'1' { F4Elem::One } else { F4Elem::Zero }))
        .collect();
    HermitianCode::new(rows).expect("Q1 has full rank")
}

/// Generators of the permutation automorphism group of `e8` (order 1344).
pub const PAUT_GENERATORS: [&str; 5] = ["(47)(56)", "(45)(67)", "(12)(3586)", "(24)(68)", "(34)(78)"];

/// Right transversal of `PAut(e8)` in `S8`.
pub const TRANSVERSAL_T: [&str; 30] = [
    "()", "(78)", "(67)", "(678)", "(687)", "(68)", "(56)", "(56)(78)", "(567)", "(5678)", "(5687)", "(568)", "(576)",
    "(5786)", "(57)", "(578)", "(57)(68)", "(5768)", "(5876)", "(586)", "(587)", "(58)", "(5867)", "(58)(67)",
    "(45678)", "(4568)", "(4578)", "(45768)", "(458)", "(458)(67)",
];

pub fn paut_generators() -> Vec<Permutation> {
    PAUT_GENERATORS.iter().map(|s| Permutation::parse_cycles(s, LENGTH).expect("valid generator")).collect()
}

pub fn paut_group() -> Vec<Permutation> {
    closure(&paut_generators(), LENGTH)
}

pub fn transversal_t() -> Vec<Permutation> {
    TRANSVERSAL_T.iter().map(|s| Permutation::parse_cycles(s, LENGTH).expect("valid transversal element")).collect()
}

/// Column permutation `tau` followed by a column scaling `diag`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialTransform {
    pub tau: Permutation,
    pub diag: [F4Elem; LENGTH],
}

/// Number of diagonal choices, `3^8`.
pub const DIAGONALS: usize = 6561;

impl MonomialTransform {
    pub fn new(tau: Permutation, diag: [F4Elem; LENGTH]) -> Result<Self, HermitianError> {
        if tau.degree() != LENGTH {
            return Err(HermitianError::BadPermutation(tau.degree()));
        }
        if let Some(j) = diag.iter().position(|d| d.is_zero()) {
            return Err(HermitianError::ZeroDiagonal(j));
        }
        Ok(MonomialTransform { tau, diag })
    }

    pub fn identity() -> Self {
        MonomialTransform { tau: Permutation::identity(LENGTH), diag: [F4Elem::One; LENGTH] }
    }

    /// Diagonal from its base-3 index: column `j` gets `ω^(digit j)`, digit 0 least significant.
    pub fn diag_from_index(index: usize) -> [F4Elem; LENGTH] {
        assert!(index < DIAGONALS);
        let mut x = index;
        std::array::from_fn(|_| {
            let d = (x % 3) as u32;
            x /= 3;
            F4Elem::pow_omega(d)
        })
    }

    pub fn diag_index(diag: &[F4Elem; LENGTH]) -> usize {
        diag.iter().rev().fold(0, |acc, d| acc * 3 + d.log().expect("nonzero diagonal") as usize)
    }

    pub fn inverse(&self) -> MonomialTransform {
        // Undo the scaling at the destination, then move columns back.
        let inv_tau = self.tau.inverse();
        let diag = std::array::from_fn(|i| self.diag[self.tau.apply(i)].inv().unwrap());
        MonomialTransform { tau: inv_tau, diag }
    }
}

/// Column `tau(i)` of the result is `diag[tau(i)]` times column `i` of the input.
pub fn apply_monomial(code: &HermitianCode<F4Elem>, m: &MonomialTransform) -> Result<HermitianCode<F4Elem>, HermitianError> {
    let m = MonomialTransform::new(m.tau.clone(), m.diag)?;
    let rows = code
        .rows
        .iter()
        .map(|row| {
            let mut out = [F4Elem::Zero; LENGTH];
            for (i, &a) in row.iter().enumerate() {
                let j = m.tau.apply(i);
                out[j] = m.diag[j].mul(a);
            }
            out
        })
        .collect();
    Ok(HermitianCode { rows })
}

fn parse_symbol(tok: &str, line: usize) -> Result<F64Elem, HermitianError> {
    if tok == "*" {
        return Ok(F64Elem::ZERO);
    }
    match tok.parse::<u32>() {
        Ok(k) if k <= 62 => Ok(F64Elem::alpha_pow(k as i64)),
        _ => Err(HermitianError::MalformedEntry { line, msg: format!("{tok:?} is neither '*' nor an exponent 0..62") }),
    }
}

/// Parses `.gm64` text into unvalidated generator blocks. Codes are 4 rows of
/// 8 entries, separated by blank lines; `#` starts a comment line.
pub fn parse_gm64(text: &str) -> Result<Vec<(usize, Vec<Row<F64Elem>>)>, HermitianError> {
    let mut out = Vec::new();
    let mut block: Vec<Row<F64Elem>> = Vec::new();
    let mut start = 0;
    let flush = |block: &mut Vec<Row<F64Elem>>, start: usize, out: &mut Vec<_>| -> Result<(), HermitianError> {
        if block.is_empty() {
            return Ok(());
        }
        if block.len() != DIMENSION {
            return Err(HermitianError::WrongDimensions { line: start, msg: format!("{} rows, expected 4", block.len()) });
        }
        out.push((start, std::mem::take(block)));
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.starts_with('#') {
            continue;
        }
        if l.is_empty() {
            flush(&mut block, start, &mut out)?;
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != LENGTH {
            return Err(HermitianError::WrongDimensions { line, msg: format!("{} entries, expected 8", toks.len()) });
        }
        if block.is_empty() {
            start = line;
        }
        if block.len() == DIMENSION {
            return Err(HermitianError::WrongDimensions { line, msg: "more than 4 rows in one code".into() });
        }
        let mut row = [F64Elem::ZERO; LENGTH];
        for (slot, tok) in row.iter_mut().zip(toks) {
            *slot = parse_symbol(tok, line)?;
        }
        block.push(row);
    }
    flush(&mut block, start, &mut out)?;
    Ok(out)
}

/// Validates one candidate `M2`: full rank, Hermitian self-dual, `d ∈ {4, 5}`.
pub fn validate_m2(rows: Vec<Row<F64Elem>>) -> Result<HermitianCode<F64Elem>, HermitianError> {
    let code = HermitianCode::self_dual(rows)?;
    let d = code.min_distance();
    if !(4..=5).contains(&d) {
        return Err(HermitianError::DistanceOutsideWindow(d));
    }
    Ok(code)
}

/// Parses and validates every code in a `.gm64` file.
pub fn ingest_m2(text: &str) -> Result<Vec<HermitianCode<F64Elem>>, (usize, HermitianError)> {
    let blocks = parse_gm64(text).map_err(|e| (0, e))?;
    blocks.into_iter().map(|(line, rows)| validate_m2(rows).map_err(|e| (line, e))).collect()
}

pub fn to_gm64(code: &HermitianCode<F64Elem>) -> String {
    let mut s = String::new();
    for row in code.rows() {
        let toks: Vec<String> = row.iter().map(|a| a.log().map_or("*".to_string(), |k| k.to_string())).collect();
        writeln!(s, "{}", toks.join(" ")).unwrap();
    }
    s
}

pub fn codes_to_gm64(codes: &[HermitianCode<F64Elem>]) -> String {
    codes.iter().map(to_gm64).collect::<Vec<_>>().join("\n")
}

fn random_vector(rng: &mut ChaCha8Rng) -> [F64Elem; 4] {
    std::array::from_fn(|_| F64Elem::from_index(rng.gen_range(0..64)))
}

fn product4(a: &[F64Elem; 4], b: &[F64Elem; 4]) -> F64Elem {
    a.iter().zip(b).fold(F64Elem::ZERO, |acc, (x, y)| acc.add(x.mul(y.conj())))
}

/// Some `s` with `s conj(s) = n`; `n` must be nonzero and conjugation-fixed.
fn norm_root(n: F64Elem) -> Option<F64Elem> {
    F64Elem::all().find(|s| !s.is_zero() && s.norm() == n)
}

/// Random `4x4` matrix `B` with `B conj(B)^T = I`: Gram–Schmidt under the
/// Hermitian form, resampling isotropic vectors.
pub fn random_unitary(rng: &mut ChaCha8Rng) -> [[F64Elem; 4]; 4] {
    'restart: loop {
        let mut rows: Vec<[F64Elem; 4]> = Vec::with_capacity(4);
        while rows.len() < 4 {
            let mut ok = false;
            for _ in 0..64 {
                let mut v = random_vector(rng);
                for u in &rows {
                    let c = product4(&v, u);
                    v = std::array::from_fn(|i| v[i].add(c.mul(u[i])));
                }
                let nv = product4(&v, &v);
                if nv.is_zero() {
                    continue;
                }
                let s = norm_root(nv).expect("norm map is onto the fixed field");
                let si = s.inv().unwrap();
                rows.push(std::array::from_fn(|i| v[i].mul(si)));
                ok = true;
                break;
            }
            if !ok {
                continue 'restart;
            }
        }
        return [rows[0], rows[1], rows[2], rows[3]];
    }
}

/// `[I4 | B]`.
pub fn systematic_code(b: &[[F64Elem; 4]; 4]) -> HermitianCode<F64Elem> {
    let rows = (0..4)
        .map(|i| std::array::from_fn(|j| if j < 4 { if i == j { F64Elem::one() } else { F64Elem::ZERO } } else { b[i][j - 4] }))
        .collect();
    HermitianCode::new(rows).expect("identity block gives full rank")
}

/// Upper bound on random draws per requested code.
pub const GENERATION_ATTEMPTS: usize = 200_000;

/// One candidate per seed-derived stream `0..count`, each the first `[I4 | B]`
/// on that stream passing `validate_m2` with binary image distance at least
/// `min_binary_distance`. The result is sorted by content hash.
pub fn generate_m2_random(seed: u64, count: usize, min_binary_distance: usize) -> Vec<HermitianCode<F64Elem>> {
    let mut codes: Vec<HermitianCode<F64Elem>> = (0..count as u64)
        .into_par_iter()
        .filter_map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            for _ in 0..GENERATION_ATTEMPTS {
                let code = systematic_code(&random_unitary(&mut rng));
                let Ok(code) = validate_m2(code.rows().to_vec()) else { continue };
                let plan = DistancePlan::new(&code.binary_image()).expect("nonzero code");
                if plan.min_distance(Some(min_binary_distance)).at_least(min_binary_distance) {
                    return Some(code);
                }
            }
            None
        })
        .collect();
    codes.sort_by_cached_key(|c| c.content_hash());
    codes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::min_distance;

    #[test]
    fn e8_is_hermitian_self_dual_844() {
        let e8 = e8_code();
        assert!(e8.is_hermitian_self_dual());
        assert_eq!(e8.min_distance(), 4);
        let words = e8.codewords();
        assert_eq!(words.len(), 256);
        let distinct: std::collections::HashSet<_> = words.iter().collect();
        assert_eq!(distinct.len(), 256);
        let min_w = words.iter().filter(|w| w.iter().any(|a| !a.is_zero())).map(|w| w.iter().filter(|a| !a.is_zero()).count()).min();
        assert_eq!(min_w, Some(4));
    }

    #[test]
    fn flipping_one_entry_breaks_self_duality() {
        let mut rows = e8_code().rows().to_vec();
        rows[0][1] = F4Elem::One;
        let c = HermitianCode::new(rows).unwrap();
        assert!(!c.is_hermitian_self_dual());
    }

    #[test]
    fn paut_has_order_1344_and_fixes_e8() {
        let g = paut_group();
        assert_eq!(g.len(), 1344);
        let e8 = e8_code();
        for p in paut_generators() {
            let m = MonomialTransform::new(p, [F4Elem::One; 8]).unwrap();
            assert!(apply_monomial(&e8, &m).unwrap().same_code(&e8));
        }
    }

    #[test]
    fn transversal_right_cosets_are_disjoint() {
        let g = paut_group();
        let t = transversal_t();
        assert_eq!(g.len() * t.len(), 40320);
        let all: std::collections::HashSet<Permutation> = g.iter().flat_map(|p| t.iter().map(move |x| p.then(x))).collect();
        assert_eq!(all.len(), 40320);
    }

    #[test]
    fn monomial_identity_and_inverse() {
        let e8 = e8_code();
        assert_eq!(apply_monomial(&e8, &MonomialTransform::identity()).unwrap(), e8);
        let all_omega = MonomialTransform::new(Permutation::identity(8), [F4Elem::Omega; 8]).unwrap();
        assert!(apply_monomial(&e8, &all_omega).unwrap().is_hermitian_self_dual());
        let t = transversal_t();
        for (i, tau) in t.iter().enumerate() {
            let m = MonomialTransform::new(tau.clone(), MonomialTransform::diag_from_index(i * 211 % DIAGONALS)).unwrap();
            let there = apply_monomial(&e8, &m).unwrap();
            assert!(there.is_hermitian_self_dual());
            assert!(apply_monomial(&there, &m.inverse()).unwrap().same_code(&e8));
        }
    }

    #[test]
    fn zero_diagonal_rejected() {
        let mut diag = [F4Elem::One; 8];
        diag[3] = F4Elem::Zero;
        assert_eq!(MonomialTransform::new(Permutation::identity(8), diag), Err(HermitianError::ZeroDiagonal(3)));
    }

    #[test]
    fn diag_index_round_trip() {
        for i in [0, 1, 2, 3, 100, 6560] {
            assert_eq!(MonomialTransform::diag_index(&MonomialTransform::diag_from_index(i)), i);
        }
    }

    fn norm_one() -> Vec<F64Elem> {
        F64Elem::all().filter(|c| c.norm() == F64Elem::one()).collect()
    }

    #[test]
    fn direct_sum_of_unit_pairs_is_self_dual() {
        let units = norm_one();
        assert_eq!(units.len(), 9);
        let c = units[3];
        let rows: Vec<Row<F64Elem>> = (0..4)
            .map(|i| std::array::from_fn(|j| if j == 2 * i { F64Elem::one() } else if j == 2 * i + 1 { c } else { F64Elem::ZERO }))
            .collect();
        let code = HermitianCode::new(rows.clone()).unwrap();
        assert!(code.is_hermitian_self_dual());
        assert_eq!(code.min_distance(), 2);
        assert_eq!(validate_m2(rows), Err(HermitianError::DistanceOutsideWindow(2)));
    }

    #[test]
    fn systematic_unitary_is_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random_unitary(&mut rng);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { F64Elem::one() } else { F64Elem::ZERO };
                assert_eq!(product4(&b[i], &b[j]), expect);
            }
        }
        let code = systematic_code(&b);
        assert!(code.is_hermitian_self_dual());
        let image = code.binary_image();
        assert_eq!(image.k(), 24);
        assert!(image.is_self_orthogonal());
    }

    #[test]
    fn binary_image_dimensions() {
        assert_eq!(e8_code().binary_image().k(), 8);
        assert!(e8_code().binary_image().is_self_orthogonal());
    }

    #[test]
    fn gm64_errors_are_distinct() {
        assert!(matches!(parse_gm64("0 1 2\n"), Err(HermitianError::WrongDimensions { .. })));
        assert!(matches!(parse_gm64("0 1 2 3 4 5 6 63\n"), Err(HermitianError::MalformedEntry { .. })));
        assert!(matches!(parse_gm64("0 1 2 3 4 5 6 x\n"), Err(HermitianError::MalformedEntry { .. })));
        assert!(matches!(parse_gm64("* * * * * * * *\n"), Err(HermitianError::WrongDimensions { .. })));
        let zero_rows = "* * * * * * * *\n".repeat(4);
        assert_eq!(ingest_m2(&zero_rows).unwrap_err().1, HermitianError::DependentRows);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut b = random_unitary(&mut rng);
        b[0][0] = b[0][0].add(F64Elem::one());
        assert_eq!(ingest_m2(&to_gm64(&systematic_code(&b))).unwrap_err().1, HermitianError::NotSelfDual);
    }

    /// A 2x2 unitary with no zero entry, found by search.
    fn dense_unitary_2x2() -> [[F64Elem; 2]; 2] {
        for a in F64Elem::all().skip(1) {
            for b in F64Elem::all().skip(1) {
                let r0 = [a, b];
                if r0[0].norm().add(r0[1].norm()) != F64Elem::one() {
                    continue;
                }
                for c in F64Elem::all().skip(1) {
                    for d in F64Elem::all().skip(1) {
                        let r1 = [c, d];
                        let cross = a.mul(c.conj()).add(b.mul(d.conj()));
                        if cross.is_zero() && c.norm().add(d.norm()) == F64Elem::one() {
                            return [r0, r1];
                        }
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn distance_three_is_outside_singleton_window() {
        let u = dense_unitary_2x2();
        let z = F64Elem::ZERO;
        let b = [[u[0][0], u[0][1], z, z], [u[1][0], u[1][1], z, z], [z, z, u[0][0], u[0][1]], [z, z, u[1][0], u[1][1]]];
        let code = systematic_code(&b);
        assert!(code.is_hermitian_self_dual());
        assert_eq!(code.min_distance(), 3);
        let text = to_gm64(&code);
        assert_eq!(ingest_m2(&text).unwrap_err().1, HermitianError::DistanceOutsideWindow(3));
        assert!(ingest_m2(&text).unwrap_err().1.to_string().contains("distance below Singleton window"));
    }

    #[test]
    fn generation_is_deterministic_and_valid() {
        let a = generate_m2_random(42, 2, 16);
        let b = generate_m2_random(42, 2, 16);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        for c in &a {
            assert!(c.is_hermitian_self_dual());
            assert!((4..=5).contains(&c.min_distance()));
            assert!(min_distance(&c.binary_image(), Some(16)).unwrap().at_least(16));
            let back = ingest_m2(&to_gm64(c)).unwrap();
            assert!(back[0].same_code(c));
        }
    }
}
