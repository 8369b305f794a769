//! Sum-addressed decoding: turning an unresolved (sum, carry) pair
//! directly into a one-hot select vector, skipping the adder.
//!
//! For each candidate `k` the decoder asks whether `s + c - k == 0` in
//! the field. Compressing `(s, c, !k)` with a 3:2 stage gives words
//! `x = s ^ c ^ !k` and `y = (maj(s, c, !k) << 1) mod 2^w`; the sum is
//! zero exactly when `y == !x`, i.e. when `x ^ y` is all ones. That is
//! an equality comparator per candidate, with no carry propagation
//! anywhere. Values outside `0..range` match no candidate, so a slide
//! past either register end decodes to the all-zeros vector and the
//! element is simply not driven.

use crate::carry_save::CarrySaveSum;

/// A select vector with at most one bit set (none, when the encoded sum
/// fell outside the decode range).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneHotVec {
    bits: Vec<bool>,
}

impl OneHotVec {
    pub fn zeros(e: usize) -> OneHotVec {
        OneHotVec { bits: vec![false; e] }
    }

    pub fn from_index(e: usize, k: usize) -> OneHotVec {
        let mut v = OneHotVec::zeros(e);
        v.bits[k] = true;
        v
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Position of the single set bit, or `None` for all zeros.
    pub fn hot_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                assert!(found.is_none(), "select vector is not one-hot");
                found = Some(i);
            }
        }
        found
    }
}

/// Decodes `value(x) = (s + c) mod 2^w` into a one-hot vector over
/// `0..range`, all zeros when the value lands outside it.
pub fn sad_decode(x: &CarrySaveSum, range: usize) -> OneHotVec {
    let m = x.field_mask();
    assert!((range as u32) <= m, "decode range must fit the field");
    let mut out = OneHotVec::zeros(range);
    for k in 0..range as u32 {
        let kc = !k & m;
        let sum = x.s() ^ x.c() ^ kc;
        let carry = (((x.s() & x.c()) | (x.s() & kc) | (x.c() & kc)) << 1) & m;
        if sum ^ carry == m {
            out.bits[k as usize] = true;
        }
    }
    out
}
