//! The AND-OR crossbar datapath.
//!
//! Physically the crossbar moves granules of `gmin` bytes; an element of
//! `sew / 8 / gmin` granules is moved by replicating its element-level
//! select bit across the granules it spans. Each output granule is the
//! OR over all inputs gated by their select bit, so a well-formed
//! (one-hot) row is a copy, an empty row is zero, and a multi-hot row,
//! which only fault injection produces, ORs its inputs together exactly
//! as the gates would.

use crate::reg::{ElemWidth, VectorReg};
use crate::select::SelectMatrix;
use crate::unified::UnitConfig;

/// Evaluates the crossbar for one request worth of select signals.
pub fn crossbar_apply(
    sel: &SelectMatrix,
    src: &VectorReg,
    config: &UnitConfig,
    sew: ElemWidth,
) -> VectorReg {
    assert_eq!(src.vlen(), config.vlen, "source register width must match the unit");
    let e = config.elem_count(sew);
    assert_eq!(sel.size(), e, "select matrix size must match the element count");
    let gpe = sew.bytes() / config.gmin;
    let src_bytes = src.bytes();
    let mut out_bytes = vec![0u8; config.vlen / 8];
    for j in 0..e {
        for i in 0..e {
            if !sel.get(j, i) {
                continue;
            }
            for g in 0..gpe {
                let src_lo = (i * gpe + g) * config.gmin;
                let dst_lo = (j * gpe + g) * config.gmin;
                for b in 0..config.gmin {
                    out_bytes[dst_lo + b] |= src_bytes[src_lo + b];
                }
            }
        }
    }
    VectorReg::from_bytes(out_bytes)
}
