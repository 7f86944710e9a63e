//! Doubly-even subcode and shadow of a singly-even self-dual code.

use crate::code::BinaryCode;
use crate::distance::{DistancePlan, Symmetry};
use crate::error::CodeError;

/// `C0 ⊂ C ⊂ C0⊥` with `C0⊥ = C0 ∪ (C0 + r0) ∪ (C0 + s) ∪ (C0 + s + r0)`,
/// where `C = C0 ∪ (C0 + r0)` and the shadow is `(C0 + s) ∪ (C0 + s + r0)`.
#[derive(Clone, Debug)]
pub struct Shadow {
    pub code: BinaryCode,
    pub c0: BinaryCode,
    pub c0_dual: BinaryCode,
    /// A singly-even codeword of `C`.
    pub r0: u128,
    /// A shadow vector.
    pub s: u128,
}

/// Splits a singly-even self-dual code into `C0` and the two shadow cosets.
pub fn shadow_cosets(code: &BinaryCode) -> Result<Shadow, CodeError> {
    if !code.is_self_dual() {
        return Err(CodeError::NotSelfDual);
    }
    let rows = code.raw_rows();
    let singly = |r: u128| r.count_ones() % 4 == 2;
    let Some(&r0) = rows.iter().find(|&&r| singly(r)) else {
        return Err(CodeError::DoublyEven);
    };
    // On a self-orthogonal code weight/2 mod 2 is additive.
    let c0_rows: Vec<u128> = rows.iter().filter(|&&r| r != r0).map(|&r| if singly(r) { r ^ r0 } else { r }).collect();
    let c0 = BinaryCode::from_raw(code.n(), c0_rows)?;
    let c0_dual = c0.dual();
    let ech = code.echelon();
    let s = *c0_dual.raw_rows().iter().find(|&&v| !ech.contains_raw(v)).expect("C0⊥ is larger than C");
    Ok(Shadow { code: code.clone(), c0, c0_dual, r0, s })
}

impl Shadow {
    pub fn contains(&self, v: u128) -> bool {
        let c0 = self.c0.echelon();
        c0.contains_raw(v ^ self.s) || c0.contains_raw(v ^ self.s ^ self.r0)
    }

    /// Number of shadow vectors of each weight `0..=cap`.
    pub fn weight_counts(&self, cap: usize) -> Result<Vec<u64>, CodeError> {
        self.weight_counts_with(cap, None)
    }

    /// As [`Shadow::weight_counts`], using a symmetry of the code to speed up enumeration.
    pub fn weight_counts_with(&self, cap: usize, sym: Option<&Symmetry>) -> Result<Vec<u64>, CodeError> {
        let mut counts = vec![0u64; cap.min(self.code.n()) + 1];
        for v in self.low_weight_vectors_with(cap, sym)? {
            counts[v.count_ones() as usize] += 1;
        }
        Ok(counts)
    }

    /// Shadow vectors of weight at most `cap`.
    pub fn low_weight_vectors(&self, cap: usize) -> Result<Vec<u128>, CodeError> {
        self.low_weight_vectors_with(cap, None)
    }

    pub fn low_weight_vectors_with(&self, cap: usize, sym: Option<&Symmetry>) -> Result<Vec<u128>, CodeError> {
        let ech = self.code.echelon();
        let plan = match sym {
            Some(sym) => DistancePlan::with_symmetry(&self.c0_dual, sym)?,
            None => DistancePlan::new(&self.c0_dual)?,
        };
        Ok(plan.low_weight_words(cap).into_iter().filter(|&v| !ech.contains_raw(v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitword::BitWord;
    use crate::code::random_self_dual;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn i2_shadow() {
        let i2 = BinaryCode::new(2, vec![BitWord::parse("11").unwrap()]).unwrap();
        let sh = shadow_cosets(&i2).unwrap();
        assert_eq!(sh.c0.k(), 0);
        assert!(sh.contains(0b01) && sh.contains(0b10));
        assert!(!sh.contains(0b00) && !sh.contains(0b11));
        assert_eq!(sh.weight_counts(2).unwrap(), vec![0, 2, 0]);
    }

    #[test]
    fn doubly_even_has_no_shadow() {
        let h8 = BinaryCode::new(8, ["11110000", "00111100", "00001111", "01010101"].iter().map(|r| BitWord::parse(r).unwrap()).collect()).unwrap();
        assert_eq!(shadow_cosets(&h8).unwrap_err(), CodeError::DoublyEven);
        let half = BinaryCode::new(4, vec![BitWord::parse("1100").unwrap()]).unwrap();
        assert_eq!(shadow_cosets(&half).unwrap_err(), CodeError::NotSelfDual);
    }

    /// Brute force over all `2^n` vectors.
    fn oracle_shadow(code: &BinaryCode) -> Vec<u64> {
        let n = code.n();
        let ech = code.echelon();
        let words: Vec<u128> = (0u128..1 << code.k())
            .map(|m| code.raw_rows().iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(0, |a, (_, r)| a ^ r))
            .collect();
        let mut counts = vec![0u64; n + 1];
        for v in 0u128..1 << n {
            if ech.contains_raw(v) {
                continue;
            }
            // v is in the shadow iff v·c ≡ wt(c)/2 for all c.
            if words.iter().all(|&c| ((v & c).count_ones() % 2) == (c.count_ones() / 2) % 2) {
                counts[v.count_ones() as usize] += 1;
            }
        }
        counts
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn shadow_matches_oracle(seed in any::<u64>(), half in 2usize..7) {
            let n = 2 * half;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let code = random_self_dual(n, &mut rng);
            prop_assume!(code.raw_rows().iter().any(|r| r.count_ones() % 4 == 2));
            let sh = shadow_cosets(&code).unwrap();
            prop_assert_eq!(sh.c0.k(), code.k() - 1);
            prop_assert_eq!(sh.c0_dual.k() - sh.c0.k(), 2);
            let counts = sh.weight_counts(n).unwrap();
            prop_assert_eq!(&counts, &oracle_shadow(&code));
            prop_assert_eq!(counts.iter().sum::<u64>(), 1u64 << (code.k()));
            for (w, &c) in counts.iter().enumerate() {
                if c > 0 {
                    prop_assert_eq!(w % 4, (n / 2) % 4);
                }
            }
        }
    }
}
