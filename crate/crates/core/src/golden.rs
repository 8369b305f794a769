//! Architectural reference semantics for the four permutation kinds.
//!
//! These functions are deliberately plain element-at-a-time loops with no
//! shared code with either hardware model; every unit result is judged
//! against them. Tail elements (`i >= vl`) and masked-off elements keep
//! their previous destination value, matching the undisturbed policy.

use crate::reg::{MaskReg, PermInstr, PermKind, VectorReg};
use crate::unified::Operands;
use crate::ExecError;

/// vrgather: `dest[i] = idx[i] < E ? src[idx[i]] : 0` for active `i < vl`.
pub fn gather_ref(
    old_dest: &VectorReg,
    src: &VectorReg,
    idx: &VectorReg,
    v0: &MaskReg,
    instr: &PermInstr,
) -> VectorReg {
    assert_eq!(instr.kind, PermKind::Gather);
    let e = src.elem_count(instr.sew);
    let mut out = old_dest.clone();
    for i in 0..instr.vl {
        if instr.masked && !v0.bit(i) {
            continue;
        }
        let index = idx.elem(instr.sew, i);
        let v = if index < e as u64 { src.elem(instr.sew, index as usize) } else { 0 };
        out.set_elem(instr.sew, i, v);
    }
    out
}

/// vcompress: source elements whose mask bit is set, in order, packed
/// from destination element 0. Always unmasked; positions at and above
/// the packed count keep their previous value.
pub fn compress_ref(
    old_dest: &VectorReg,
    src: &VectorReg,
    mask: &MaskReg,
    instr: &PermInstr,
) -> VectorReg {
    assert_eq!(instr.kind, PermKind::Compress);
    assert!(!instr.masked, "masked compress has no reference semantics");
    let mut out = old_dest.clone();
    let mut k = 0;
    for i in 0..instr.vl {
        if mask.bit(i) {
            out.set_elem(instr.sew, k, src.elem(instr.sew, i));
            k += 1;
        }
    }
    out
}

/// vslideup: `dest[i] = src[i - offset]` for active `i` in `offset..vl`.
pub fn slideup_ref(
    old_dest: &VectorReg,
    src: &VectorReg,
    v0: &MaskReg,
    instr: &PermInstr,
) -> VectorReg {
    assert_eq!(instr.kind, PermKind::SlideUp);
    let mut out = old_dest.clone();
    for i in instr.offset..instr.vl {
        if instr.masked && !v0.bit(i) {
            continue;
        }
        out.set_elem(instr.sew, i, src.elem(instr.sew, i - instr.offset));
    }
    out
}

/// vslidedown: `dest[i] = i + offset < E ? src[i + offset] : 0` for
/// active `i < vl`.
pub fn slidedown_ref(
    old_dest: &VectorReg,
    src: &VectorReg,
    v0: &MaskReg,
    instr: &PermInstr,
) -> VectorReg {
    assert_eq!(instr.kind, PermKind::SlideDown);
    let e = src.elem_count(instr.sew);
    let mut out = old_dest.clone();
    for i in 0..instr.vl {
        if instr.masked && !v0.bit(i) {
            continue;
        }
        let j = i + instr.offset;
        let v = if j < e { src.elem(instr.sew, j) } else { 0 };
        out.set_elem(instr.sew, i, v);
    }
    out
}

/// Dispatches one request against the reference semantics.
pub fn golden_execute(instr: &PermInstr, ops: &Operands) -> Result<VectorReg, ExecError> {
    instr.validate(ops.src.elem_count(instr.sew))?;
    Ok(match instr.kind {
        PermKind::Gather => gather_ref(&ops.old_dest, &ops.src, &ops.idx, &ops.v0, instr),
        PermKind::Compress => compress_ref(&ops.old_dest, &ops.src, &ops.mask, instr),
        PermKind::SlideUp => slideup_ref(&ops.old_dest, &ops.src, &ops.v0, instr),
        PermKind::SlideDown => slidedown_ref(&ops.old_dest, &ops.src, &ops.v0, instr),
    })
}
