//! The ring `T` of even-weight polynomials in `F2[x]/(x^9 - 1)`.
//!
//! `T` splits as `I1 ⊕ I2` via the idempotents
//! `e1 = x + x^2 + x^4 + x^5 + x^7 + x^8` and `e2 = x^3 + x^6`.
//! `I1 = {0, e1, x e1, x^2 e1}` is a copy of GF(4) and `I2` is a copy of
//! GF(64) with primitive element `(x + 1) e2`.

use std::fmt;
use std::sync::OnceLock;

use crate::bitword::BitWord;

const MASK9: u16 = 0x1FF;

/// Element of `T`: bit `i` of the mask is the coefficient of `x^i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RingElem(u16);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("polynomial mask {0:#011b} has odd weight, not an element of T")]
pub struct OddWeight(pub u16);

#[inline]
fn rotl9(v: u16, s: u32) -> u16 {
    let s = s % 9;
    ((v << s) | (v >> (9 - s))) & MASK9
}

impl RingElem {
    pub const ZERO: RingElem = RingElem(0);
    /// `e1 = x^8 + x^7 + x^5 + x^4 + x^2 + x`.
    pub const E1: RingElem = RingElem(0b1_1011_0110);
    /// `e2 = x^6 + x^3`.
    pub const E2: RingElem = RingElem(0b0_0100_1000);
    /// `e1 + e2`, the identity of `T`.
    pub const ONE: RingElem = RingElem(0b1_1111_1110);

    pub fn new(mask: u16) -> Result<Self, OddWeight> {
        let mask = mask & MASK9;
        if mask.count_ones() % 2 == 1 {
            Err(OddWeight(mask))
        } else {
            Ok(RingElem(mask))
        }
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, OddWeight> {
        let mask = exps.iter().fold(0u16, |m, &e| m ^ (1 << (e % 9)));
        Self::new(mask)
    }

    #[inline]
    pub fn mask(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn weight(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// All 256 elements of `T` in increasing mask order.
    pub fn all() -> impl Iterator<Item = RingElem> {
        (0u16..512).filter(|m| m.count_ones() % 2 == 0).map(RingElem)
    }

    #[inline]
    pub fn add(self, other: RingElem) -> RingElem {
        RingElem(self.0 ^ other.0)
    }

    #[inline]
    pub fn mul(self, other: RingElem) -> RingElem {
        RingElem(poly_mul(self.0, other.0))
    }

    /// Multiplication by `x^s`, a cyclic shift of the coefficients.
    #[inline]
    pub fn shift(self, s: u32) -> RingElem {
        RingElem(rotl9(self.0, s))
    }

    /// Conjugation induced by `x -> x^-1`: coefficient of `x^i` moves to `x^(9-i) mod 9`.
    pub fn conj(self) -> RingElem {
        let mut out = 0u16;
        for i in 0..9 {
            if self.0 >> i & 1 == 1 {
                out |= 1 << ((9 - i) % 9);
            }
        }
        RingElem(out)
    }

    /// The 9-bit block `phi^-1` of this element.
    pub fn block(self) -> BitWord {
        BitWord::from_bits(self.0 as u128, 9).expect("9-bit block")
    }

    pub fn split(self) -> (F4Elem, F64Elem) {
        split(self)
    }
}

/// Polynomial product modulo `x^9 - 1` on raw 9-bit masks.
#[inline]
pub fn poly_mul(a: u16, b: u16) -> u16 {
    let mut out = 0u16;
    let mut a = a & MASK9;
    while a != 0 {
        let i = a.trailing_zeros();
        out ^= rotl9(b & MASK9, i);
        a &= a - 1;
    }
    out
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..9).rev().filter(|i| self.0 >> i & 1 == 1).map(|i| format!("x^{i}")).collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

/// Operations shared by the two field components.
pub trait FieldSymbol: Copy + Eq + std::hash::Hash + Ord + fmt::Debug + Send + Sync + 'static {
    const ORDER: usize;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(self) -> bool;
    fn add(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(self) -> Option<Self>;
    /// The field automorphism used by the Hermitian form.
    fn conj(self) -> Self;
    /// Embedding into `T`.
    fn to_ring(self) -> RingElem;
    /// Field element with the given index in `0..ORDER` (0 is zero).
    fn from_index(i: usize) -> Self;
    fn index(self) -> usize;
    /// Basis over GF(2) used when lifting codewords to binary rows.
    fn binary_basis() -> Vec<Self>;
}

/// Element of `I1 ≅ GF(4)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum F4Elem {
    Zero,
    /// `e1`, the identity of `I1`.
    One,
    /// `ω = x e1`.
    Omega,
    /// `ω̄ = x^2 e1`.
    OmegaBar,
}

impl F4Elem {
    pub const NONZERO: [F4Elem; 3] = [F4Elem::One, F4Elem::Omega, F4Elem::OmegaBar];

    /// `ω^k`, `None` for zero.
    pub fn log(self) -> Option<u32> {
        match self {
            F4Elem::Zero => None,
            F4Elem::One => Some(0),
            F4Elem::Omega => Some(1),
            F4Elem::OmegaBar => Some(2),
        }
    }

    pub fn pow_omega(k: u32) -> F4Elem {
        F4Elem::NONZERO[(k % 3) as usize]
    }

    fn from_mask(m: u16) -> Option<F4Elem> {
        [F4Elem::Zero, F4Elem::One, F4Elem::Omega, F4Elem::OmegaBar].into_iter().find(|e| e.to_ring().0 == m)
    }
}

impl FieldSymbol for F4Elem {
    const ORDER: usize = 4;

    fn zero() -> Self {
        F4Elem::Zero
    }
    fn one() -> Self {
        F4Elem::One
    }
    fn is_zero(self) -> bool {
        self == F4Elem::Zero
    }
    fn add(self, o: Self) -> Self {
        F4Elem::from_index(self.index() ^ o.index())
    }
    fn mul(self, o: Self) -> Self {
        match (self.log(), o.log()) {
            (Some(a), Some(b)) => F4Elem::pow_omega(a + b),
            _ => F4Elem::Zero,
        }
    }
    fn inv(self) -> Option<Self> {
        self.log().map(|a| F4Elem::pow_omega(3 - a))
    }
    fn conj(self) -> Self {
        self.mul(self)
    }
    fn to_ring(self) -> RingElem {
        match self.log() {
            None => RingElem::ZERO,
            Some(k) => RingElem::E1.shift(k),
        }
    }
    /// Index = additive coordinates: 0, e1 = 1, ω = 2, ω̄ = 3 with ω̄ = e1 + ω.
    fn from_index(i: usize) -> Self {
        [F4Elem::Zero, F4Elem::One, F4Elem::Omega, F4Elem::OmegaBar][i]
    }
    fn index(self) -> usize {
        self as usize
    }
    fn binary_basis() -> Vec<Self> {
        vec![F4Elem::One, F4Elem::Omega]
    }
}

/// Element of `I2 ≅ GF(64)` stored as a discrete logarithm to base `α = (x+1) e2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F64Elem(u8);

const F64_ZERO: u8 = 0xFF;

struct F64Tables {
    /// `antilog[k]` = ring mask of `α^k`, `k = 0..63`.
    antilog: [u16; 63],
    /// `log[mask]` for masks of `I2`, `F64_ZERO` otherwise.
    log: [u8; 512],
    /// Additive index (0..64) of each element and its inverse map.
    index_of_log: [u8; 63],
    log_of_index: [u8; 64],
}

fn f64_tables() -> &'static F64Tables {
    static TABLES: OnceLock<F64Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let alpha = RingElem::from_exponents(&[0, 1]).unwrap().mul(RingElem::E2).0;
        let mut antilog = [0u16; 63];
        let mut log = [F64_ZERO; 512];
        let mut cur = RingElem::E2.0;
        for (k, slot) in antilog.iter_mut().enumerate() {
            *slot = cur;
            assert_eq!(log[cur as usize], F64_ZERO, "alpha must have order 63");
            log[cur as usize] = k as u8;
            cur = poly_mul(cur, alpha);
        }
        assert_eq!(cur, RingElem::E2.0, "alpha^63 must be e2");
        // Additive index: coordinates in the basis alpha^0..alpha^5.
        let basis: Vec<u16> = antilog[..6].to_vec();
        let mut log_of_index = [F64_ZERO; 64];
        let mut index_of_log = [0u8; 63];
        for idx in 1usize..64 {
            let mut m = 0u16;
            for (b, &v) in basis.iter().enumerate() {
                if idx >> b & 1 == 1 {
                    m ^= v;
                }
            }
            let l = log[m as usize];
            assert_ne!(l, F64_ZERO, "basis must span I2");
            log_of_index[idx] = l;
            index_of_log[l as usize] = idx as u8;
        }
        F64Tables { antilog, log, index_of_log, log_of_index }
    })
}

impl F64Elem {
    pub const ZERO: F64Elem = F64Elem(F64_ZERO);

    /// `α^k`.
    pub fn alpha_pow(k: i64) -> F64Elem {
        F64Elem(k.rem_euclid(63) as u8)
    }

    /// Exponent `k` with `self = α^k`, `None` for zero.
    pub fn log(self) -> Option<u32> {
        (self.0 != F64_ZERO).then_some(self.0 as u32)
    }

    fn from_mask(m: u16) -> Option<F64Elem> {
        if m == 0 {
            return Some(F64Elem::ZERO);
        }
        let l = f64_tables().log[m as usize];
        (l != F64_ZERO).then_some(F64Elem(l))
    }

    /// All 64 elements, zero first.
    pub fn all() -> impl Iterator<Item = F64Elem> {
        std::iter::once(F64Elem::ZERO).chain((0..63).map(F64Elem))
    }

    /// Norm to the fixed field of conjugation: `z * conj(z) = z^9`.
    pub fn norm(self) -> F64Elem {
        self.mul(self.conj())
    }
}

impl fmt::Debug for F64Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(k) => write!(f, "a^{k}"),
        }
    }
}

impl FieldSymbol for F64Elem {
    const ORDER: usize = 64;

    fn zero() -> Self {
        F64Elem::ZERO
    }
    fn one() -> Self {
        F64Elem(0)
    }
    fn is_zero(self) -> bool {
        self.0 == F64_ZERO
    }
    fn add(self, o: Self) -> Self {
        F64Elem::from_index(self.index() ^ o.index())
    }
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            F64Elem::ZERO
        } else {
            F64Elem(((self.0 as u16 + o.0 as u16) % 63) as u8)
        }
    }
    fn inv(self) -> Option<Self> {
        self.log().map(|k| F64Elem(((63 - k) % 63) as u8))
    }
    /// `z -> z^8`, the automorphism induced by `x -> x^-1`.
    fn conj(self) -> Self {
        match self.log() {
            None => self,
            Some(k) => F64Elem(((8 * k) % 63) as u8),
        }
    }
    fn to_ring(self) -> RingElem {
        match self.log() {
            None => RingElem::ZERO,
            Some(k) => RingElem(f64_tables().antilog[k as usize]),
        }
    }
    fn from_index(i: usize) -> Self {
        if i == 0 {
            F64Elem::ZERO
        } else {
            F64Elem(f64_tables().log_of_index[i])
        }
    }
    fn index(self) -> usize {
        match self.log() {
            None => 0,
            Some(k) => f64_tables().index_of_log[k as usize] as usize,
        }
    }
    fn binary_basis() -> Vec<Self> {
        (0..6).map(F64Elem::alpha_pow).collect()
    }
}

/// Projects onto `I1` and `I2`.
pub fn split(v: RingElem) -> (F4Elem, F64Elem) {
    let a = F4Elem::from_mask(v.mul(RingElem::E1).0).expect("v e1 lies in I1");
    let b = F64Elem::from_mask(v.mul(RingElem::E2).0).expect("v e2 lies in I2");
    (a, b)
}

pub fn join(a: F4Elem, b: F64Elem) -> RingElem {
    a.to_ring().add(b.to_ring())
}

/// `phi^-1` of a single field symbol.
pub fn phi_inv_block<F: FieldSymbol>(a: F) -> BitWord {
    a.to_ring().block()
}

/// `phi^-1` of a length-8 row: block `i` occupies bits `9i..9i+9`.
pub fn phi_inv_row<F: FieldSymbol>(row: &[F; 8]) -> BitWord {
    let mut bits = 0u128;
    for (i, a) in row.iter().enumerate() {
        bits |= (a.to_ring().0 as u128) << (9 * i);
    }
    BitWord::from_bits(bits, 72).expect("72-bit row")
}

/// `phi` on a 72-bit word whose blocks all lie in `T`.
pub fn phi(word: &BitWord) -> Result<[RingElem; 8], OddWeight> {
    assert_eq!(word.len(), 72);
    let mut out = [RingElem::ZERO; 8];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = RingElem::new(((word.bits() >> (9 * i)) as u16) & MASK9)?;
    }
    Ok(out)
}

/// Result of one exhaustive self-test suite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
}

/// Exhaustive checks of the ring and field facts used by the construction.
pub fn selftest() -> Vec<SuiteResult> {
    let mut out = Vec::new();
    let mut push = |name, passed, cases| out.push(SuiteResult { name, passed, cases });
    let t: Vec<RingElem> = RingElem::all().collect();
    push("T has 256 elements", t.len() == 256, 1);
    push("closure under multiplication", t.iter().all(|a| t.iter().all(|b| a.mul(*b).weight() % 2 == 0)), 65536);
    push(
        "idempotents",
        RingElem::E1.mul(RingElem::E1) == RingElem::E1
            && RingElem::E2.mul(RingElem::E2) == RingElem::E2
            && RingElem::E1.mul(RingElem::E2) == RingElem::ZERO,
        3,
    );
    push("e1 + e2 is the identity", t.iter().all(|v| RingElem::E1.add(RingElem::E2).mul(*v) == *v), 256);
    let i1: Vec<RingElem> = t.iter().map(|v| v.mul(RingElem::E1)).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let i2: Vec<RingElem> = t.iter().map(|v| v.mul(RingElem::E2)).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    push("|I1| = 4, |I2| = 64", i1.len() == 4 && i2.len() == 64, 2);
    let alpha = F64Elem::alpha_pow(1).to_ring();
    let mut order = 1;
    let mut p = alpha;
    while p != RingElem::E2 && order < 100 {
        p = p.mul(alpha);
        order += 1;
    }
    push("alpha has order 63", order == 63, 63);
    push("conj is an involution", t.iter().all(|v| v.conj().conj() == *v), 256);
    push(
        "conj(alpha^k) = alpha^(8k mod 63)",
        (0..63).all(|k| F64Elem::alpha_pow(k).to_ring().conj() == F64Elem::alpha_pow(8 * k % 63).to_ring()),
        63,
    );
    push(
        "conj on I1 swaps omega and omega-bar",
        F4Elem::Omega.to_ring().conj() == F4Elem::OmegaBar.to_ring() && RingElem::E1.conj() == RingElem::E1,
        2,
    );
    push("split/join round trip", t.iter().all(|v| { let (a, b) = split(*v); join(a, b) == *v }), 256);
    let f64_all: Vec<F64Elem> = F64Elem::all().collect();
    push(
        "I2 embedding is a field isomorphism",
        f64_all.iter().all(|a| {
            f64_all.iter().all(|b| {
                a.add(*b).to_ring() == a.to_ring().add(b.to_ring()) && a.mul(*b).to_ring() == a.to_ring().mul(b.to_ring())
            })
        }),
        4096,
    );
    let f4_all = [F4Elem::Zero, F4Elem::One, F4Elem::Omega, F4Elem::OmegaBar];
    push(
        "I1 embedding is a field isomorphism",
        f4_all.iter().all(|a| {
            f4_all.iter().all(|b| {
                a.add(*b).to_ring() == a.to_ring().add(b.to_ring()) && a.mul(*b).to_ring() == a.to_ring().mul(b.to_ring())
            })
        }),
        16,
    );
    push(
        "split respects both operations",
        t.iter().all(|u| {
            t.iter().all(|v| {
                let (a, b) = split(*u);
                let (c, d) = split(*v);
                split(u.add(*v)) == (a.add(c), b.add(d)) && split(u.mul(*v)) == (a.mul(c), b.mul(d))
            })
        }),
        65536,
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Schoolbook product on coefficient arrays, exponents reduced mod 9.
    fn oracle_mul(a: RingElem, b: RingElem) -> RingElem {
        let mut c = [0u8; 9];
        for i in 0..9 {
            for j in 0..9 {
                c[(i + j) % 9] ^= ((a.mask() >> i) & 1) as u8 & ((b.mask() >> j) & 1) as u8;
            }
        }
        RingElem::new(c.iter().enumerate().fold(0, |m, (i, &bit)| m | ((bit as u16) << i))).unwrap()
    }

    #[test]
    fn idempotents_against_oracle() {
        assert_eq!(oracle_mul(RingElem::E1, RingElem::E1), RingElem::E1);
        assert_eq!(oracle_mul(RingElem::E2, RingElem::E2), RingElem::E2);
        assert_eq!(oracle_mul(RingElem::E1, RingElem::E2), RingElem::ZERO);
        for a in RingElem::all() {
            for b in RingElem::all() {
                assert_eq!(a.mul(b), oracle_mul(a, b));
            }
        }
    }

    #[test]
    fn identity_of_t() {
        assert_eq!(RingElem::E1.add(RingElem::E2), RingElem::ONE);
        assert_eq!(RingElem::all().filter(|v| !v.is_zero()).filter(|v| RingElem::ONE.mul(*v) == *v).count(), 255);
    }

    #[test]
    fn odd_weight_rejected() {
        assert!(RingElem::new(0b1).is_err());
        assert!(RingElem::new(0b11).is_ok());
    }

    #[test]
    fn split_examples() {
        assert_eq!(split(RingElem::E1), (F4Elem::One, F64Elem::ZERO));
        assert_eq!(split(F64Elem::alpha_pow(1).to_ring()), (F4Elem::Zero, F64Elem::alpha_pow(1)));
        for v in RingElem::all() {
            let (a, b) = split(v);
            assert_eq!(join(a, b), v);
            assert_eq!(split(join(a, b)), (a, b));
        }
    }

    #[test]
    fn conjugation_examples() {
        // Exponent reflection i -> 9 - i on omega = {0,2,3,5,6,8}.
        let omega = F4Elem::Omega.to_ring();
        assert_eq!(omega, RingElem::from_exponents(&[0, 2, 3, 5, 6, 8]).unwrap());
        let reflected: Vec<u32> = [0u32, 2, 3, 5, 6, 8].iter().map(|i| (9 - i) % 9).collect();
        assert_eq!(omega.conj(), RingElem::from_exponents(&reflected).unwrap());
        assert_eq!(omega.conj(), RingElem::from_exponents(&[0, 1, 3, 4, 6, 7]).unwrap());
        assert_eq!(omega.conj(), F4Elem::OmegaBar.to_ring());
        assert_eq!(RingElem::E2.conj(), RingElem::E2);
        for k in 0..63 {
            assert_eq!(F64Elem::alpha_pow(k).to_ring().conj(), F64Elem::alpha_pow(8 * k % 63).to_ring());
            assert_eq!(F64Elem::alpha_pow(k).conj().to_ring(), F64Elem::alpha_pow(k).to_ring().conj());
        }
    }

    #[test]
    fn field_arithmetic_examples() {
        assert_eq!(F64Elem::alpha_pow(31).mul(F64Elem::alpha_pow(32)), F64Elem::one());
        assert_eq!(F64Elem::alpha_pow(31).to_ring().mul(F64Elem::alpha_pow(32).to_ring()), RingElem::E2);
        assert_eq!(F4Elem::Omega.mul(F4Elem::OmegaBar), F4Elem::One);
        assert_eq!(oracle_mul(F4Elem::Omega.to_ring(), F4Elem::OmegaBar.to_ring()), RingElem::E1);
        for a in F64Elem::all() {
            for b in F64Elem::all() {
                assert_eq!(a.add(b).to_ring(), a.to_ring().add(b.to_ring()));
            }
        }
        assert_eq!(F64Elem::alpha_pow(1).to_ring(), RingElem::from_exponents(&[0, 1]).unwrap().mul(RingElem::E2));
    }

    #[test]
    fn norm_one_elements() {
        // c conj(c) = e2 holds exactly for the 9 elements with c^9 = 1.
        let units: Vec<F64Elem> = F64Elem::all().filter(|c| c.norm() == F64Elem::one()).collect();
        assert_eq!(units.len(), 9);
        assert!(units.iter().all(|c| c.log().unwrap() % 7 == 0));
    }

    #[test]
    fn block_layout() {
        assert_eq!(phi_inv_block(F4Elem::One).support(), vec![1, 2, 4, 5, 7, 8]);
        assert!(phi_inv_block(F64Elem::ZERO).is_zero());
    }

    #[test]
    fn selftest_passes() {
        for s in selftest() {
            assert!(s.passed, "{}", s.name);
        }
    }

    proptest! {
        #[test]
        fn phi_round_trip(idx in proptest::collection::vec((0usize..4, 0usize..64), 8)) {
            let ring: [RingElem; 8] = std::array::from_fn(|i| join(F4Elem::from_index(idx[i].0), F64Elem::from_index(idx[i].1)));
            let mut bits = 0u128;
            for (i, r) in ring.iter().enumerate() {
                bits |= (r.mask() as u128) << (9 * i);
            }
            let w = BitWord::from_bits(bits, 72).unwrap();
            prop_assert_eq!(phi(&w).unwrap(), ring);
            let row: [F64Elem; 8] = std::array::from_fn(|i| F64Elem::from_index(idx[i].1));
            let back = phi(&phi_inv_row(&row)).unwrap();
            prop_assert!(back.iter().zip(row).all(|(r, a)| split(*r) == (F4Elem::Zero, a)));
        }
    }
}
