//! The conventional comparison design: one datapath per instruction kind
//! instead of a shared crossbar.
//!
//! Gather reads through a per-output mux tree, slides go through a
//! logarithmic byte shifter, and compress walks the mask sequentially,
//! moving one kept element per cycle. The first two are single-cycle;
//! compress latency is a fixed overhead plus the number of elements it
//! actually moves, which is the variable-latency behaviour the unified
//! unit exists to remove.

use crate::reg::{ElemWidth, PermInstr, PermKind, VectorReg};
use crate::unified::{merge_output, ExecResult, Operands};
use crate::{ConfigError, ExecError};

/// Geometry and timing of the baseline unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaselineConfig {
    /// Register width in bits.
    pub vlen: usize,
    /// Fixed startup cycles of a compress before any element moves.
    pub compress_overhead_cycles: u32,
}

impl Default for BaselineConfig {
    fn default() -> BaselineConfig {
        BaselineConfig { vlen: 256, compress_overhead_cycles: 1 }
    }
}

impl BaselineConfig {
    pub fn try_new(vlen: usize, compress_overhead_cycles: u32) -> Result<BaselineConfig, ConfigError> {
        if vlen < 64 || !vlen.is_power_of_two() {
            return Err(ConfigError::BadVlen(vlen));
        }
        Ok(BaselineConfig { vlen, compress_overhead_cycles })
    }

    pub fn elem_count(&self, sew: ElemWidth) -> usize {
        self.vlen / sew.bits()
    }
}

/// One baseline unit instance.
#[derive(Debug, Clone)]
pub struct BaselineUnit {
    config: BaselineConfig,
}

impl BaselineUnit {
    pub fn new(config: BaselineConfig) -> BaselineUnit {
        BaselineUnit { config }
    }

    pub fn config(&self) -> &BaselineConfig {
        &self.config
    }

    pub fn execute(&self, instr: &PermInstr, ops: &Operands) -> Result<ExecResult, ExecError> {
        let e = self.config.elem_count(instr.sew);
        instr.validate(e)?;
        Ok(match instr.kind {
            PermKind::Gather => self.gather(instr, ops),
            PermKind::SlideUp | PermKind::SlideDown => self.slide(instr, ops),
            PermKind::Compress => self.compress(instr, ops),
        })
    }

    /// Per-output mux tree: each destination element picks its source
    /// directly from the index register.
    fn gather(&self, instr: &PermInstr, ops: &Operands) -> ExecResult {
        let e = self.config.elem_count(instr.sew);
        let mut raw = VectorReg::zero(self.config.vlen);
        for j in 0..e {
            let v = ops.idx.elem(instr.sew, j);
            if v < e as u64 {
                raw.set_elem(instr.sew, j, ops.src.elem(instr.sew, v as usize));
            }
        }
        let v0 = ops.v0.resized(e);
        ExecResult {
            value: merge_output(&raw, &ops.old_dest, &v0, instr),
            latency_cycles: 1,
            occupancy_cycles: 1,
        }
    }

    /// Logarithmic byte shifter: one conditional stage per offset bit,
    /// zero-filling from whichever end the data leaves.
    fn slide(&self, instr: &PermInstr, ops: &Operands) -> ExecResult {
        let e = self.config.elem_count(instr.sew);
        let toward_high = instr.kind == PermKind::SlideUp;
        let byte_offset = instr.offset * instr.sew.bytes();
        let raw = byte_shift(&ops.src, byte_offset, toward_high);
        let v0 = ops.v0.resized(e);
        ExecResult {
            value: merge_output(&raw, &ops.old_dest, &v0, instr),
            latency_cycles: 1,
            occupancy_cycles: 1,
        }
    }

    /// Sequential compress: scans the mask below vl and moves one kept
    /// element per cycle, so latency tracks the mask's popcount.
    fn compress(&self, instr: &PermInstr, ops: &Operands) -> ExecResult {
        let mut out = ops.old_dest.clone();
        let mut cycles = self.config.compress_overhead_cycles;
        let mut k = 0;
        for i in 0..instr.vl {
            if ops.mask.bit(i) {
                out.set_elem(instr.sew, k, ops.src.elem(instr.sew, i));
                k += 1;
                cycles += 1;
            }
        }
        ExecResult { value: out, latency_cycles: cycles, occupancy_cycles: cycles }
    }
}

/// Shifts a register by whole bytes through log2(bytes) conditional
/// stages, one per bit of the shift amount. An amount equal to the
/// register size (offset == E slides) clears everything.
fn byte_shift(src: &VectorReg, amount: usize, toward_high: bool) -> VectorReg {
    let n = src.bytes().len();
    assert!(amount <= n);
    if amount == n {
        return VectorReg::zero(src.vlen());
    }
    let mut cur = src.bytes().to_vec();
    let mut stage = 0;
    while 1 << stage < n {
        if amount >> stage & 1 == 1 {
            let step = 1 << stage;
            let mut next = vec![0u8; n];
            for b in 0..n {
                if toward_high {
                    if b >= step {
                        next[b] = cur[b - step];
                    }
                } else if b + step < n {
                    next[b] = cur[b + step];
                }
            }
            cur = next;
        }
        stage += 1;
    }
    VectorReg::from_bytes(cur)
}
