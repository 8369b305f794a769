//! Carry-save prefix counters and redundant-form index arithmetic.
//!
//! Everything here models logic that runs ahead of the sum-addressed
//! decoders, so no function is allowed to ripple a carry: values stay as
//! (sum, carry) pairs built from 3:2 compressors, and only [`CarrySaveSum::resolve`]
//! collapses one to an ordinary integer, for tests and value-level checks.
//!
//! All arithmetic lives in a two's-complement field of
//! `ceil(log2 E) + 2` bits. One extra bit keeps prefix counts up to E
//! from wrapping, the second gives negative differences a distinct
//! encoding, so a slide that falls off either end of the register can
//! never alias back into `0..E`.

use crate::reg::MaskReg;

/// Field width in bits for a datapath with `elem_count` elements.
pub fn field_width(elem_count: usize) -> u32 {
    assert!(elem_count > 0);
    (elem_count as u32).next_power_of_two().trailing_zeros() + 2
}

/// One 3:2 compression step over `width`-bit words: three addends in,
/// sum word and left-shifted carry word out. The shift drops the carry
/// out of the top bit, which is exactly mod-2^width arithmetic.
fn compress3(a: u32, b: u32, c: u32, width: u32) -> (u32, u32) {
    let m = (1u32 << width) - 1;
    let sum = (a ^ b ^ c) & m;
    let carry = (((a & b) | (a & c) | (b & c)) << 1) & m;
    (sum, carry)
}

/// A number held as an unresolved (sum, carry) pair: its value is
/// `(s + c) mod 2^width`, but no adder has been paid to find that out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CarrySaveSum {
    s: u32,
    c: u32,
    width: u32,
}

impl CarrySaveSum {
    pub fn zero(width: u32) -> CarrySaveSum {
        CarrySaveSum { s: 0, c: 0, width }
    }

    pub fn new(s: u32, c: u32, width: u32) -> CarrySaveSum {
        assert!(width >= 2 && width <= 31);
        let m = (1u32 << width) - 1;
        CarrySaveSum { s: s & m, c: c & m, width }
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn field_mask(&self) -> u32 {
        (1u32 << self.width) - 1
    }

    /// Collapses the pair through an actual addition. Exists for checking
    /// and display; the modelled hardware never does this.
    pub fn resolve(&self) -> u32 {
        self.s.wrapping_add(self.c) & self.field_mask()
    }

    /// One counter cell: absorbs a single mask bit via one 3:2 compressor.
    pub fn accumulate_bit(&self, bit: bool) -> CarrySaveSum {
        let (s, c) = compress3(self.s, self.c, bit as u32, self.width);
        CarrySaveSum { s, c, width: self.width }
    }
}

/// Prefix counts of 1s strictly above each position: `out[i]` holds the
/// number of set bits in `mask[i+1..]`. The chain scans from the high
/// index end down, one counter cell per step.
pub fn count_ones_high_to_low(mask: &MaskReg) -> Vec<CarrySaveSum> {
    let e = mask.len();
    let w = field_width(e);
    let mut out = vec![CarrySaveSum::zero(w); e];
    let mut acc = CarrySaveSum::zero(w);
    for i in (0..e).rev() {
        out[i] = acc;
        acc = acc.accumulate_bit(mask.bit(i));
    }
    out
}

/// Prefix counts of 0s strictly below each position: `out[i]` holds the
/// number of clear bits in `mask[..i]`. The mirror-image chain of
/// [`count_ones_high_to_low`], scanning from the low index end up.
pub fn count_zeros_low_to_high(mask: &MaskReg) -> Vec<CarrySaveSum> {
    let e = mask.len();
    let w = field_width(e);
    let mut out = vec![CarrySaveSum::zero(w); e];
    let mut acc = CarrySaveSum::zero(w);
    for i in 0..e {
        out[i] = acc;
        acc = acc.accumulate_bit(!mask.bit(i));
    }
    out
}

/// Adds an element index to a prefix count, or subtracts the count from
/// the index, without leaving redundant form.
///
/// `negate == false` yields `index + value(prefix)`; `negate == true`
/// yields `index - value(prefix)`, built as `index + !s + !c + 2` since
/// each operand's two's complement contributes a `+1`. Two 3:2 levels,
/// still no carry chain.
pub fn csa_add_index(prefix: &CarrySaveSum, index: u32, negate: bool) -> CarrySaveSum {
    let w = prefix.width;
    let m = prefix.field_mask();
    let index = index & m;
    if negate {
        let (s1, c1) = compress3(index, !prefix.s & m, !prefix.c & m, w);
        let (s2, c2) = compress3(s1, c1, 2, w);
        CarrySaveSum { s: s2, c: c2, width: w }
    } else {
        let (s, c) = compress3(index, prefix.s, prefix.c, w);
        CarrySaveSum { s, c, width: w }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve_all(v: &[CarrySaveSum]) -> Vec<u32> {
        v.iter().map(|x| x.resolve()).collect()
    }

    #[test]
    fn field_width_grows_with_log2() {
        assert_eq!(field_width(1), 2);
        assert_eq!(field_width(8), 5);
        assert_eq!(field_width(16), 6);
        assert_eq!(field_width(32), 7);
        assert_eq!(field_width(33), 8);
    }

    #[test]
    fn ones_above_worked_example() {
        let mask = MaskReg::from_bits(vec![true, false, true, true, false, false, true, false]);
        assert_eq!(resolve_all(&count_ones_high_to_low(&mask)), [3, 3, 2, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn zeros_below_worked_example() {
        let mask = MaskReg::from_bits(vec![true, false, true, true, false, false, true, false]);
        assert_eq!(resolve_all(&count_zeros_low_to_high(&mask)), [0, 0, 1, 1, 1, 2, 3, 3]);
    }

    #[test]
    fn prefix_counts_match_scan_for_all_e8_masks() {
        for bits in 0u32..256 {
            let mask = MaskReg::from_word(8, bits as u64);
            let ones = resolve_all(&count_ones_high_to_low(&mask));
            let zeros = resolve_all(&count_zeros_low_to_high(&mask));
            for i in 0..8 {
                let want_ones = (i + 1..8).filter(|&j| mask.bit(j)).count() as u32;
                let want_zeros = (0..i).filter(|&j| !mask.bit(j)).count() as u32;
                assert_eq!(ones[i], want_ones, "mask={bits:08b} i={i}");
                assert_eq!(zeros[i], want_zeros, "mask={bits:08b} i={i}");
            }
        }
    }

    #[test]
    fn counter_value_never_needs_the_top_bit() {
        // The whole point of the +2 field margin: counts up to E and index
        // sums up to 2E stay below 2^(width-1), leaving the sign encoding
        // of negative differences unambiguous.
        let mask = MaskReg::ones(32);
        let full = count_ones_high_to_low(&mask);
        let w = field_width(32);
        assert_eq!(w, 7);
        for x in &full {
            assert!(x.resolve() < 1 << (w - 1));
        }
    }

    #[test]
    fn csa_add_index_exhaustive_small_field() {
        // Every (s, c) pair in the E=8 field, every index, both signs.
        let w = field_width(8);
        let m = (1u32 << w) - 1;
        for s in 0..=m {
            for c in 0..=m {
                let prefix = CarrySaveSum::new(s, c, w);
                for index in 0..8u32 {
                    let add = csa_add_index(&prefix, index, false);
                    assert_eq!(add.resolve(), index.wrapping_add(s).wrapping_add(c) & m);
                    let sub = csa_add_index(&prefix, index, true);
                    assert_eq!(
                        sub.resolve(),
                        index.wrapping_sub(s).wrapping_sub(c) & m,
                        "s={s} c={c} index={index}"
                    );
                }
            }
        }
    }

    #[test]
    fn csa_add_index_worked_examples() {
        let w = field_width(8);
        // index 6 minus a zeros-below count of 3.
        let prefix = CarrySaveSum::new(1, 2, w);
        assert_eq!(csa_add_index(&prefix, 6, true).resolve(), 3);
        // index 2 plus an ones-above count of 2.
        let prefix = CarrySaveSum::new(2, 0, w);
        assert_eq!(csa_add_index(&prefix, 2, false).resolve(), 4);
        // Negative results wrap into the top of the field, not into 0..E.
        let prefix = CarrySaveSum::new(5, 0, w);
        let neg = csa_add_index(&prefix, 2, true);
        assert_eq!(neg.resolve(), (1u32 << w) - 3);
        assert!(neg.resolve() >= 8);
    }

    #[test]
    fn random_wide_masks_match_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_cafe);
        for _ in 0..500 {
            let e = 32;
            let mask = MaskReg::from_bits((0..e).map(|_| rng.random()).collect());
            let ones = count_ones_high_to_low(&mask);
            let zeros = count_zeros_low_to_high(&mask);
            for i in 0..e {
                let want_ones = (i + 1..e).filter(|&j| mask.bit(j)).count() as u32;
                let want_zeros = (0..i).filter(|&j| !mask.bit(j)).count() as u32;
                assert_eq!(ones[i].resolve(), want_ones);
                assert_eq!(zeros[i].resolve(), want_zeros);
            }
        }
    }
}
