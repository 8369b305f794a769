//! The unified permutation unit: one crossbar for every kind, fed by the
//! select-generation logic in [`crate::select`], followed by a merge
//! stage that applies `vl`, masking and the per-kind keep policies.
//!
//! Select generation deliberately ignores `vl` and v0. For compress that
//! is sound because a kept element's destination equals the number of
//! kept elements below it, so outputs `0..popcount(mask[..vl])` are
//! correct no matter what the mask says above `vl`; the merge stage
//! simply stops trusting the crossbar beyond that point. Everything the
//! unit does is combinational, so latency is the configured pipeline
//! depth for every request, independent of operands.

use std::collections::VecDeque;
use std::fmt;

use crate::crossbar::crossbar_apply;
use crate::reg::{ElemWidth, MaskReg, PermInstr, PermKind, VectorReg};
use crate::select::{build_select_matrix, Control};
use crate::{ConfigError, ExecError};

/// Geometry and depth of a unified unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitConfig {
    /// Register width in bits.
    pub vlen: usize,
    /// Crossbar granule in bytes: the smallest datum routed on its own.
    pub gmin: usize,
    /// Pipeline depth in cycles; every request takes exactly this long.
    pub pipeline_stages: u32,
}

impl Default for UnitConfig {
    fn default() -> UnitConfig {
        UnitConfig { vlen: 256, gmin: 1, pipeline_stages: 1 }
    }
}

impl UnitConfig {
    pub fn try_new(vlen: usize, gmin: usize, pipeline_stages: u32) -> Result<UnitConfig, ConfigError> {
        if vlen < 64 || !vlen.is_power_of_two() {
            return Err(ConfigError::BadVlen(vlen));
        }
        if !matches!(gmin, 1 | 2 | 4) {
            return Err(ConfigError::BadGmin(gmin));
        }
        if !matches!(pipeline_stages, 1 | 2) {
            return Err(ConfigError::BadStages(pipeline_stages));
        }
        Ok(UnitConfig { vlen, gmin, pipeline_stages })
    }

    /// Number of crossbar granules, the G in all the structural counts.
    pub fn granules(&self) -> usize {
        self.vlen / 8 / self.gmin
    }

    pub fn supports(&self, sew: ElemWidth) -> bool {
        sew.bytes() >= self.gmin
    }

    pub fn supported_sews(&self) -> Vec<ElemWidth> {
        ElemWidth::ALL.into_iter().filter(|&s| self.supports(s)).collect()
    }

    pub fn elem_count(&self, sew: ElemWidth) -> usize {
        self.vlen / sew.bits()
    }

    /// Cost counts that scale with the granule choice.
    pub fn structural_report(&self) -> StructuralReport {
        let g = self.granules();
        StructuralReport {
            vlen: self.vlen,
            gmin: self.gmin,
            granules: g,
            // One select wire per (output, input) granule pair.
            select_bits: g * g,
            // One decoder per output granule.
            sad_instances: g,
            // Two prefix chains of G-1 counter cells each; the first
            // position of either scan needs no cell.
            counter_cells: 2 * (g - 1),
        }
    }
}

/// Structural cost counts for one unit geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralReport {
    pub vlen: usize,
    pub gmin: usize,
    pub granules: usize,
    pub select_bits: usize,
    pub sad_instances: usize,
    pub counter_cells: usize,
}

impl StructuralReport {
    /// Stable key=value rendering for scripts.
    pub fn kv_text(&self) -> String {
        format!(
            "vlen={}\ngmin={}\ngranules={}\nselect_bits={}\nsad_instances={}\ncounter_cells={}\n",
            self.vlen, self.gmin, self.granules, self.select_bits, self.sad_instances,
            self.counter_cells
        )
    }
}

/// The register operands a request reads. Unused fields are ignored:
/// only gather reads `idx`, only compress reads `mask`, and `v0` only
/// matters when the instruction is masked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operands {
    pub old_dest: VectorReg,
    pub src: VectorReg,
    pub idx: VectorReg,
    pub mask: MaskReg,
    pub v0: MaskReg,
}

impl Operands {
    /// Starts from the two registers every kind reads; the rest default
    /// to zero indices, an empty mask and an all-ones v0.
    pub fn new(old_dest: VectorReg, src: VectorReg) -> Operands {
        let vlen = src.vlen();
        let e = vlen / 8;
        Operands {
            old_dest,
            src,
            idx: VectorReg::zero(vlen),
            mask: MaskReg::zeros(e),
            v0: MaskReg::ones(e),
        }
    }

    pub fn with_idx(mut self, idx: VectorReg) -> Operands {
        self.idx = idx;
        self
    }

    pub fn with_mask(mut self, mask: MaskReg) -> Operands {
        self.mask = mask;
        self
    }

    pub fn with_v0(mut self, v0: MaskReg) -> Operands {
        self.v0 = v0;
        self
    }
}

/// Result of one executed request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecResult {
    pub value: VectorReg,
    /// Cycles from issue to writeback.
    pub latency_cycles: u32,
    /// Cycles the unit is blocked for the next request.
    pub occupancy_cycles: u32,
}

/// A deliberate wiring defect: two crossbar select wires exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireSwap {
    pub a: (usize, usize),
    pub b: (usize, usize),
}

/// One unified unit instance.
#[derive(Debug, Clone)]
pub struct UnifiedUnit {
    config: UnitConfig,
    fault: Option<WireSwap>,
}

impl UnifiedUnit {
    pub fn new(config: UnitConfig) -> UnifiedUnit {
        UnifiedUnit { config, fault: None }
    }

    /// A unit with two select wires swapped, for mutation testing.
    pub fn with_select_swap(config: UnitConfig, fault: WireSwap) -> UnifiedUnit {
        UnifiedUnit { config, fault: Some(fault) }
    }

    pub fn config(&self) -> &UnitConfig {
        &self.config
    }

    /// Runs one request through select generation, the crossbar and the
    /// merge stage.
    pub fn execute(&self, instr: &PermInstr, ops: &Operands) -> Result<ExecResult, ExecError> {
        let e = self.config.elem_count(instr.sew);
        instr.validate(e)?;
        let compress_mask;
        let control = match instr.kind {
            PermKind::Gather => Control::Indices(&ops.idx),
            PermKind::Compress => {
                compress_mask = ops.mask.resized(e);
                Control::Mask(&compress_mask)
            }
            PermKind::SlideUp | PermKind::SlideDown => Control::Offset,
        };
        let mut sel = build_select_matrix(instr, &control, &self.config)?;
        if let Some(f) = self.fault {
            sel.swap_wires(f.a, f.b);
        }
        let raw = crossbar_apply(&sel, &ops.src, &self.config, instr.sew);
        let merge_mask = match instr.kind {
            PermKind::Compress => ops.mask.resized(e),
            _ => ops.v0.resized(e),
        };
        let value = merge_output(&raw, &ops.old_dest, &merge_mask, instr);
        Ok(ExecResult {
            value,
            latency_cycles: self.config.pipeline_stages,
            occupancy_cycles: 1,
        })
    }
}

/// Convenience wrapper for one-shot execution on a fault-free unit.
pub fn unified_execute(
    config: &UnitConfig,
    instr: &PermInstr,
    ops: &Operands,
) -> Result<ExecResult, ExecError> {
    UnifiedUnit::new(*config).execute(instr, ops)
}

/// The merge stage: overlays the keep policies on the raw crossbar
/// output. `mask` is v0 for masked requests and the operand mask for
/// compress, whose kept-prefix length it determines.
pub fn merge_output(
    raw: &VectorReg,
    old_dest: &VectorReg,
    mask: &MaskReg,
    instr: &PermInstr,
) -> VectorReg {
    let e = raw.elem_count(instr.sew);
    let keep_limit = match instr.kind {
        PermKind::Compress => mask.popcount_below(instr.vl),
        _ => usize::MAX,
    };
    let mut out = raw.clone();
    for i in 0..e {
        let take_old = i >= instr.vl
            || (instr.masked && !mask.bit(i))
            || (instr.kind == PermKind::SlideUp && i < instr.offset)
            || i >= keep_limit;
        if take_old {
            out.set_elem(instr.sew, i, old_dest.elem(instr.sew, i));
        }
    }
    out
}

/// A completed request as seen at the pipeline's writeback end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub value: VectorReg,
    pub issue_cycle: u64,
    pub complete_cycle: u64,
}

/// Cycle-stepped wrapper around a [`UnifiedUnit`]: results computed at
/// issue become visible `pipeline_stages` cycles later, and a new
/// request can issue every cycle.
#[derive(Debug)]
pub struct Pipeline {
    unit: UnifiedUnit,
    in_flight: VecDeque<(VectorReg, u64)>,
    cycle: u64,
}

impl Pipeline {
    pub fn new(unit: UnifiedUnit) -> Pipeline {
        Pipeline { unit, in_flight: VecDeque::new(), cycle: 0 }
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    /// Advances one clock, optionally issuing a request at the current
    /// cycle, and returns whatever completes at the new cycle.
    pub fn step(
        &mut self,
        request: Option<(&PermInstr, &Operands)>,
    ) -> Result<Option<Completion>, ExecError> {
        if let Some((instr, ops)) = request {
            let res = self.unit.execute(instr, ops)?;
            self.in_flight.push_back((res.value, self.cycle));
        }
        self.cycle += 1;
        let depth = self.unit.config.pipeline_stages as u64;
        if let Some(&(_, issued)) = self.in_flight.front() {
            if issued + depth == self.cycle {
                let (value, issue_cycle) = self.in_flight.pop_front().unwrap();
                return Ok(Some(Completion {
                    value,
                    issue_cycle,
                    complete_cycle: self.cycle,
                }));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for StructuralReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gmin={}: granules={} select_bits={} sad_instances={} counter_cells={}",
            self.gmin, self.granules, self.select_bits, self.sad_instances, self.counter_cells
        )
    }
}
