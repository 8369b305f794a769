//! Register-level domain types: vector registers addressed as elements of
//! a selected width, mask registers, and decoded permutation requests.

use std::fmt;

use crate::ExecError;

/// Selected element width. Everything narrower than a byte is out of
/// scope, everything wider than 32 bits is unsupported by both units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElemWidth {
    Sew8,
    Sew16,
    Sew32,
}

impl ElemWidth {
    pub const ALL: [ElemWidth; 3] = [ElemWidth::Sew8, ElemWidth::Sew16, ElemWidth::Sew32];

    pub fn bits(self) -> usize {
        match self {
            ElemWidth::Sew8 => 8,
            ElemWidth::Sew16 => 16,
            ElemWidth::Sew32 => 32,
        }
    }

    pub fn bytes(self) -> usize {
        self.bits() / 8
    }

    pub fn from_bits(bits: usize) -> Option<ElemWidth> {
        match bits {
            8 => Some(ElemWidth::Sew8),
            16 => Some(ElemWidth::Sew16),
            32 => Some(ElemWidth::Sew32),
            _ => None,
        }
    }
}

impl fmt::Display for ElemWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits())
    }
}

/// A vector register: `vlen` bits stored little-endian, so element 0 of
/// any width lives in the lowest-addressed bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorReg {
    bytes: Vec<u8>,
}

impl VectorReg {
    pub fn zero(vlen: usize) -> VectorReg {
        assert!(vlen % 8 == 0, "vlen must be a whole number of bytes");
        VectorReg { bytes: vec![0; vlen / 8] }
    }

    pub fn from_bytes(bytes: Vec<u8>) -> VectorReg {
        VectorReg { bytes }
    }

    /// Builds a register from element values; unnamed trailing elements
    /// stay zero. Values are truncated to the element width.
    pub fn from_elems(vlen: usize, sew: ElemWidth, elems: &[u64]) -> VectorReg {
        let mut reg = VectorReg::zero(vlen);
        assert!(elems.len() <= reg.elem_count(sew));
        for (i, &v) in elems.iter().enumerate() {
            reg.set_elem(sew, i, v);
        }
        reg
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn vlen(&self) -> usize {
        self.bytes.len() * 8
    }

    pub fn elem_count(&self, sew: ElemWidth) -> usize {
        self.bytes.len() / sew.bytes()
    }

    /// Reads element `i` at width `sew`, little-endian within the element.
    pub fn elem(&self, sew: ElemWidth, i: usize) -> u64 {
        let lo = i * sew.bytes();
        let mut v = 0u64;
        for (k, &b) in self.bytes[lo..lo + sew.bytes()].iter().enumerate() {
            v |= (b as u64) << (8 * k);
        }
        v
    }

    /// Writes element `i` at width `sew`, truncating `value` to the width.
    pub fn set_elem(&mut self, sew: ElemWidth, i: usize, value: u64) {
        let lo = i * sew.bytes();
        for k in 0..sew.bytes() {
            self.bytes[lo + k] = (value >> (8 * k)) as u8;
        }
    }

    pub fn to_elems(&self, sew: ElemWidth) -> Vec<u64> {
        (0..self.elem_count(sew)).map(|i| self.elem(sew, i)).collect()
    }

    /// Lowercase hex with element 0 in the lowest-order digits, i.e. the
    /// whole register printed as one big little-endian number.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.bytes.len() * 2);
        for &b in self.bytes.iter().rev() {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    /// Parses the format written by [`to_hex`]; the digit count must be
    /// exactly `vlen / 4`. Returns `None` on a length or digit error.
    ///
    /// [`to_hex`]: VectorReg::to_hex
    pub fn from_hex(vlen: usize, s: &str) -> Option<VectorReg> {
        if s.len() != vlen / 4 || !s.is_ascii() {
            return None;
        }
        let mut bytes = Vec::with_capacity(vlen / 8);
        for k in (0..s.len()).step_by(2).rev() {
            bytes.push(u8::from_str_radix(&s[k..k + 2], 16).ok()?);
        }
        Some(VectorReg { bytes })
    }
}

/// A mask register viewed as one bit per element, index 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MaskReg {
    bits: Vec<bool>,
}

impl MaskReg {
    pub fn zeros(e: usize) -> MaskReg {
        MaskReg { bits: vec![false; e] }
    }

    pub fn ones(e: usize) -> MaskReg {
        MaskReg { bits: vec![true; e] }
    }

    pub fn from_bits(bits: Vec<bool>) -> MaskReg {
        MaskReg { bits }
    }

    /// Builds an `e`-bit mask from the low bits of `word`.
    pub fn from_word(e: usize, word: u64) -> MaskReg {
        assert!(e <= 64);
        MaskReg { bits: (0..e).map(|i| word >> i & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Reads bit `i`; positions past the stored length read as zero so a
    /// short mask behaves like one padded with inactive elements.
    pub fn bit(&self, i: usize) -> bool {
        self.bits.get(i).copied().unwrap_or(false)
    }

    pub fn set_bit(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Number of set bits at positions strictly below `n`.
    pub fn popcount_below(&self, n: usize) -> usize {
        (0..n).filter(|&i| self.bit(i)).count()
    }

    /// Copy resized to `e` bits, padding with zeros.
    pub fn resized(&self, e: usize) -> MaskReg {
        MaskReg { bits: (0..e).map(|i| self.bit(i)).collect() }
    }
}

/// The four permutation kinds both units implement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PermKind {
    Gather,
    Compress,
    SlideUp,
    SlideDown,
}

impl PermKind {
    pub const ALL: [PermKind; 4] = [
        PermKind::Gather,
        PermKind::Compress,
        PermKind::SlideUp,
        PermKind::SlideDown,
    ];

    pub fn is_slide(self) -> bool {
        matches!(self, PermKind::SlideUp | PermKind::SlideDown)
    }

    pub fn name(self) -> &'static str {
        match self {
            PermKind::Gather => "gather",
            PermKind::Compress => "compress",
            PermKind::SlideUp => "slideup",
            PermKind::SlideDown => "slidedown",
        }
    }

    pub fn from_name(s: &str) -> Option<PermKind> {
        PermKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for PermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A decoded permutation request.
///
/// `offset` is meaningful for slides only and must be 0 otherwise; both
/// `offset` and `vl` range over `0..=E` where `E = vlen / sew`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PermInstr {
    pub kind: PermKind,
    pub sew: ElemWidth,
    pub offset: usize,
    pub masked: bool,
    pub vl: usize,
}

impl PermInstr {
    pub fn gather(sew: ElemWidth, vl: usize) -> PermInstr {
        PermInstr { kind: PermKind::Gather, sew, offset: 0, masked: false, vl }
    }

    pub fn compress(sew: ElemWidth, vl: usize) -> PermInstr {
        PermInstr { kind: PermKind::Compress, sew, offset: 0, masked: false, vl }
    }

    pub fn slide_up(sew: ElemWidth, offset: usize, vl: usize) -> PermInstr {
        PermInstr { kind: PermKind::SlideUp, sew, offset, masked: false, vl }
    }

    pub fn slide_down(sew: ElemWidth, offset: usize, vl: usize) -> PermInstr {
        PermInstr { kind: PermKind::SlideDown, sew, offset, masked: false, vl }
    }

    /// Marks the request as executing under a v0 mask.
    pub fn masked(mut self) -> PermInstr {
        self.masked = true;
        self
    }

    /// Checks the request against an element count, rejecting the one
    /// combination with no architected meaning.
    pub fn validate(&self, elem_count: usize) -> Result<(), ExecError> {
        assert!(self.vl <= elem_count, "vl {} exceeds {elem_count} elements", self.vl);
        assert!(self.offset <= elem_count, "offset {} exceeds {elem_count}", self.offset);
        assert!(self.kind.is_slide() || self.offset == 0, "offset on a non-slide");
        if self.kind == PermKind::Compress && self.masked {
            return Err(ExecError::MaskedCompress);
        }
        Ok(())
    }
}

impl fmt::Display for PermInstr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} sew={}", self.kind, self.sew)?;
        if self.kind.is_slide() {
            write!(f, " offset={}", self.offset)?;
        }
        write!(f, " vl={}", self.vl)?;
        if self.masked {
            write!(f, " masked")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elem_round_trip_all_widths() {
        for sew in ElemWidth::ALL {
            let mut reg = VectorReg::zero(256);
            let e = reg.elem_count(sew);
            for i in 0..e {
                reg.set_elem(sew, i, 0x0123_4567_89ab_cdef ^ i as u64);
            }
            for i in 0..e {
                let want = (0x0123_4567_89ab_cdef ^ i as u64) & ((1u64 << sew.bits()) - 1);
                assert_eq!(reg.elem(sew, i), want, "sew={sew} i={i}");
            }
        }
    }

    #[test]
    fn elems_are_little_endian_in_memory() {
        let mut reg = VectorReg::zero(64);
        reg.set_elem(ElemWidth::Sew32, 0, 0xa1b2_c3d4);
        assert_eq!(&reg.bytes()[..4], &[0xd4, 0xc3, 0xb2, 0xa1]);
        assert_eq!(reg.elem(ElemWidth::Sew16, 0), 0xc3d4);
        assert_eq!(reg.elem(ElemWidth::Sew8, 3), 0xa1);
    }

    #[test]
    fn hex_round_trip_and_digit_order() {
        let reg = VectorReg::from_elems(32, ElemWidth::Sew8, &[0xef, 0xbe, 0xad, 0xde]);
        // Element 0 must occupy the lowest-order digits.
        assert_eq!(reg.to_hex(), "deadbeef");
        assert_eq!(VectorReg::from_hex(32, "deadbeef").unwrap(), reg);
        assert_eq!(VectorReg::from_hex(32, "deadbee"), None);
        assert_eq!(VectorReg::from_hex(32, "deadbeeff"), None);
        assert_eq!(VectorReg::from_hex(32, "deadbeeg"), None);
    }

    #[test]
    fn mask_popcount_below_ignores_high_bits() {
        let m = MaskReg::from_bits(vec![true, false, true, true, false, false, true, false]);
        assert_eq!(m.popcount(), 4);
        assert_eq!(m.popcount_below(4), 3);
        assert_eq!(m.popcount_below(0), 0);
        assert_eq!(m.popcount_below(8), 4);
        // Reads past the stored length are inactive.
        assert!(!m.bit(100));
    }

    #[test]
    fn masked_compress_is_rejected() {
        let instr = PermInstr::compress(ElemWidth::Sew8, 8).masked();
        assert_eq!(instr.validate(8), Err(ExecError::MaskedCompress));
        assert_eq!(PermInstr::compress(ElemWidth::Sew8, 8).validate(8), Ok(()));
    }

    #[test]
    fn instr_display_matches_trace_syntax() {
        let i = PermInstr::slide_up(ElemWidth::Sew16, 3, 8).masked();
        assert_eq!(i.to_string(), "slideup sew=16 offset=3 vl=8 masked");
        assert_eq!(PermInstr::compress(ElemWidth::Sew8, 4).to_string(), "compress sew=8 vl=4");
    }
}
