//! Lifting the component codes to binary codes of length 72 and 76.
//!
//! The automorphism is `σ = (1,…,9)(10,…,18)…(64,…,72)(73)(74)(75)(76)`:
//! cycle `Ω_i` occupies coordinates `9(i-1)+1 ..= 9i` and the fixed points
//! are 73..76. Inside a block, bit `j` is the coefficient of `x^j`, so `σ`
//! acts as multiplication by `x` on every block.

use crate::bitword::BitWord;
use crate::code::BinaryCode;
use crate::distance::Symmetry;
use crate::error::DecompositionError;
use crate::hermitian::HermitianCode;
use crate::ring::{F4Elem, F64Elem};

/// Shape of `σ`: 8 cycles of length 9 and 4 fixed points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaLayout;

impl SigmaLayout {
    pub const CYCLES: usize = 8;
    pub const CYCLE_LEN: usize = 9;
    pub const FIXED: usize = 4;
    /// Length of `E_σ(C)*`.
    pub const CYCLIC_LEN: usize = 72;
    pub const N: usize = 76;

    /// 0-based coordinates of cycle `i` (0-based).
    pub fn cycle(i: usize) -> std::ops::Range<usize> {
        9 * i..9 * i + 9
    }

    /// 0-based coordinate of fixed point `j` (0-based).
    pub fn fixed(j: usize) -> usize {
        Self::CYCLIC_LEN + j
    }

    /// `σ` on `n ∈ {72, 76}` coordinates as a [`Symmetry`].
    pub fn symmetry(n: usize) -> Symmetry {
        assert!(n == Self::CYCLIC_LEN || n == Self::N);
        Symmetry::from_cycles(n, (0..Self::CYCLES).map(|i| Self::cycle(i).collect()).collect())
    }

    /// `σ` as an image list: coordinate `p` maps to `perm[p]`.
    pub fn permutation(n: usize) -> Vec<usize> {
        Self::symmetry(n).perm().to_vec()
    }

    /// Mask of the cycle coordinates.
    pub fn cyclic_mask() -> u128 {
        (1u128 << Self::CYCLIC_LEN) - 1
    }
}

/// `E_σ(C)*`: a self-orthogonal `[72, 32]` code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EStarCode {
    pub code: BinaryCode,
}

/// Structural facts every valid `E_σ(C)*` satisfies.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct EStarChecks {
    pub dimension: usize,
    pub self_orthogonal: bool,
    pub sigma_invariant: bool,
    pub even_on_every_block: bool,
}

impl EStarChecks {
    pub fn all_hold(&self) -> bool {
        self.dimension == 32 && self.self_orthogonal && self.sigma_invariant && self.even_on_every_block
    }
}

impl EStarCode {
    pub fn checks(&self) -> EStarChecks {
        let even = self.code.raw_rows().iter().all(|&r| {
            (0..SigmaLayout::CYCLES).all(|i| ((r >> (9 * i)) & 0x1FF).count_ones() % 2 == 0)
        });
        EStarChecks {
            dimension: self.code.k(),
            self_orthogonal: self.code.is_self_orthogonal(),
            sigma_invariant: self.code.is_invariant_under(&SigmaLayout::permutation(72)),
            even_on_every_block: even,
        }
    }
}

/// Binary rows `phi^-1(α^k h)` for `k = 0..5` and rows `h` of `m2`, followed by
/// `phi^-1(e1 g)` and `phi^-1(ω g)` for rows `g` of `m1`.
pub fn lift_e(m1: &HermitianCode<F4Elem>, m2: &HermitianCode<F64Elem>) -> Result<EStarCode, DecompositionError> {
    if !m1.is_hermitian_self_dual() || !m2.is_hermitian_self_dual() {
        return Err(DecompositionError::ComponentNotSelfDual);
    }
    let mut raw: Vec<u128> = m2.binary_image().raw_rows().to_vec();
    raw.extend_from_slice(m1.binary_image().raw_rows());
    let rank = crate::code::rank_of(&raw);
    if rank != 32 {
        return Err(DecompositionError::DegenerateLift { rank, expected: 32 });
    }
    Ok(EStarCode { code: BinaryCode::from_raw(SigmaLayout::CYCLIC_LEN, raw).expect("full rank") })
}

/// Where a column of `C_π` goes in the length-76 code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Slot {
    /// Cycle index `0..8`.
    Cycle(u8),
    /// Fixed-point index `0..4`.
    Fixed(u8),
}

/// Assignment of the 12 columns of `C_π` to the 8 cycles and 4 fixed points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct ColumnSplit(pub [Slot; 12]);

impl ColumnSplit {
    /// Columns 1..8 on cycles 1..8, columns 9..12 on the fixed points.
    pub fn standard() -> Self {
        ColumnSplit(std::array::from_fn(|c| if c < 8 { Slot::Cycle(c as u8) } else { Slot::Fixed((c - 8) as u8) }))
    }

    /// The given columns (0-based) become fixed points in order; the rest fill the cycles in order.
    pub fn with_fixed(fixed: [usize; 4]) -> Result<Self, DecompositionError> {
        let mut slots = [Slot::Cycle(0); 12];
        let mut next_cycle = 0u8;
        for c in 0..12 {
            slots[c] = match fixed.iter().position(|&f| f == c) {
                Some(j) => Slot::Fixed(j as u8),
                None => {
                    next_cycle += 1;
                    Slot::Cycle(next_cycle - 1)
                }
            };
        }
        let split = ColumnSplit(slots);
        split.validate()?;
        Ok(split)
    }

    pub fn validate(&self) -> Result<(), DecompositionError> {
        let mut cycles = [false; 8];
        let mut fixed = [false; 4];
        for s in &self.0 {
            let seen = match *s {
                Slot::Cycle(i) if (i as usize) < 8 => &mut cycles[i as usize],
                Slot::Fixed(j) if (j as usize) < 4 => &mut fixed[j as usize],
                other => return Err(DecompositionError::BadSplit(format!("slot {other:?} out of range"))),
            };
            if std::mem::replace(seen, true) {
                return Err(DecompositionError::BadSplit(format!("slot {s:?} used twice")));
            }
        }
        Ok(())
    }

    /// Mask over the 12 columns of those sent to fixed points.
    pub fn fixed_mask(&self) -> u16 {
        self.0.iter().enumerate().filter(|(_, s)| matches!(s, Slot::Fixed(_))).fold(0, |m, (c, _)| m | 1 << c)
    }

    /// Weight of the lift of a length-12 word: 9 per cycle column, 1 per fixed column.
    pub fn lifted_weight(&self, word12: u16) -> usize {
        let fixed = (word12 & self.fixed_mask()).count_ones() as usize;
        let cyc = (word12 & !self.fixed_mask() & 0xFFF).count_ones() as usize;
        9 * cyc + fixed
    }

    pub fn lift_word(&self, word12: u16) -> u128 {
        let mut out = 0u128;
        for (c, s) in self.0.iter().enumerate() {
            if word12 >> c & 1 == 1 {
                out |= match *s {
                    Slot::Cycle(i) => 0x1FFu128 << (9 * i as usize),
                    Slot::Fixed(j) => 1u128 << SigmaLayout::fixed(j as usize),
                };
            }
        }
        out
    }

    /// `π`: reads one coordinate per cycle and the fixed points back into column order.
    pub fn project(&self, word76: u128) -> u16 {
        let mut out = 0u16;
        for (c, s) in self.0.iter().enumerate() {
            let bit = match *s {
                Slot::Cycle(i) => (word76 >> (9 * i as usize)) & 1,
                Slot::Fixed(j) => (word76 >> SigmaLayout::fixed(j as usize)) & 1,
            };
            out |= (bit as u16) << c;
        }
        out
    }
}

/// `F_σ(C)`: six rows of length 76, constant on every cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSigmaPart {
    pub rows: Vec<BitWord>,
    pub source: BinaryCode,
    pub split: ColumnSplit,
}

impl FSigmaPart {
    pub fn code(&self) -> BinaryCode {
        BinaryCode::new(SigmaLayout::N, self.rows.clone()).expect("lift is injective")
    }

    /// `B_s` for `s = 0..=76` by enumerating all 64 words.
    pub fn weight_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; SigmaLayout::N + 1];
        let raw: Vec<u128> = self.rows.iter().map(|r| r.bits()).collect();
        for m in 0u32..(1 << raw.len()) {
            let w = raw.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(0u128, |a, (_, r)| a ^ r);
            counts[w.count_ones() as usize] += 1;
        }
        counts
    }
}

pub fn is_self_dual_12(cpi: &BinaryCode) -> bool {
    cpi.n() == 12 && cpi.k() == 6 && cpi.is_self_dual()
}

/// Expands each row of `C_π`: a cycle column becomes 9 equal bits on its
/// block, a fixed column a single bit among coordinates 73..76.
pub fn lift_f(cpi: &BinaryCode, split: &ColumnSplit) -> Result<FSigmaPart, DecompositionError> {
    if !is_self_dual_12(cpi) {
        return Err(DecompositionError::CpiNotSelfDual);
    }
    split.validate()?;
    let rows = cpi
        .raw_rows()
        .iter()
        .map(|&r| BitWord::from_bits(split.lift_word(r as u16), SigmaLayout::N).unwrap())
        .collect();
    Ok(FSigmaPart { rows, source: cpi.clone(), split: split.clone() })
}

/// Stacks `E_σ(C)*` (zero on the fixed points) over `F_σ(C)`.
pub fn assemble_c76(e: &EStarCode, f: &FSigmaPart) -> Result<BinaryCode, DecompositionError> {
    let mut raw: Vec<u128> = e.code.raw_rows().to_vec();
    raw.extend(f.rows.iter().map(|r| r.bits()));
    let rank = crate::code::rank_of(&raw);
    if rank != SigmaLayout::N / 2 {
        return Err(DecompositionError::DegenerateLift { rank, expected: SigmaLayout::N / 2 });
    }
    let code = BinaryCode::from_raw(SigmaLayout::N, raw).expect("full rank");
    if !code.is_self_dual() {
        return Err(DecompositionError::AssemblyNotSelfDual);
    }
    Ok(code)
}

/// Splits a codeword of an assembled code into its `F_σ` and `E_σ` parts.
pub fn decompose_word(word: u128, split: &ColumnSplit, f: &FSigmaPart) -> Option<(u128, u128)> {
    // The F-part is determined by the parity of each block and the fixed coordinates.
    let mut proj = 0u16;
    for (c, s) in split.0.iter().enumerate() {
        let bit = match *s {
            Slot::Cycle(i) => ((word >> (9 * i as usize)) & 0x1FF).count_ones() & 1,
            Slot::Fixed(j) => ((word >> SigmaLayout::fixed(j as usize)) & 1) as u32,
        };
        proj |= (bit as u16) << c;
    }
    let fpart = split.lift_word(proj);
    if !f.code().contains(&BitWord::from_bits(fpart, SigmaLayout::N).ok()?) {
        return None;
    }
    Some((fpart, word ^ fpart))
}
