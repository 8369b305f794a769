//! Bit-accurate models of vector permutation hardware plus the machinery
//! to check them against an architectural reference.
//!
//! Two execution units are modelled. The unified unit routes every
//! permutation kind (gather, compress, slides) through one byte-granule
//! crossbar whose select signals come from carry-save prefix counters and
//! sum-addressed decoders, so its latency is a fixed pipeline depth. The
//! baseline unit is the conventional alternative: a mux tree for gather,
//! a logarithmic byte shifter for slides, and a sequential one-element-
//! per-cycle compress. Both are compared against the golden model in
//! [`golden`] by the differential harness in [`harness`].

pub mod baseline;
pub mod carry_save;
pub mod crossbar;
pub mod golden;
pub mod harness;
pub mod reg;
pub mod sad;
pub mod select;
pub mod trace;
pub mod unified;

pub use baseline::{BaselineConfig, BaselineUnit};
pub use carry_save::{
    count_ones_high_to_low, count_zeros_low_to_high, csa_add_index, field_width, CarrySaveSum,
};
pub use crossbar::crossbar_apply;
pub use golden::{compress_ref, gather_ref, golden_execute, slidedown_ref, slideup_ref};
pub use harness::{
    gen_case, latency_audit, reproduce, run_differential, run_exhaustive_small, CampaignConfig,
    CampaignReport, Counterexample, LatencyAudit, TestCase, UnitChoice,
};
pub use reg::{ElemWidth, MaskReg, PermInstr, PermKind, VectorReg};
pub use sad::{sad_decode, OneHotVec};
pub use select::{build_dest_indices_compress, build_select_matrix, Control, SelectMatrix};
pub use trace::{
    parse_trace, print_trace, run_trace, Directive, MaskName, RegName, TraceError, TraceEvent,
    TraceLine, TraceReport,
};
pub use unified::{
    merge_output, unified_execute, ExecResult, Operands, Pipeline, StructuralReport, UnifiedUnit,
    UnitConfig, WireSwap,
};

/// Errors an execution unit can report for a decoded instruction.
///
/// Anything else (operand shape mismatches, out-of-range vl) is a caller
/// bug and panics via debug assertions instead of being reported.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    /// The element width is narrower than the unit's granule, so the
    /// crossbar cannot move elements of this size independently.
    #[error("sew={sew} is unsupported at a {gmin}-byte crossbar granule")]
    UnsupportedWidth { sew: usize, gmin: usize },
    /// Compress takes its mask as the operand; a second v0 mask has no
    /// defined meaning and is rejected rather than guessed at.
    #[error("masked compress has no defined semantics")]
    MaskedCompress,
}

/// Errors from building a unit configuration out of user-supplied values.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("vlen must be a power of two of at least 64 bits, got {0}")]
    BadVlen(usize),
    #[error("gmin must be 1, 2 or 4 bytes, got {0}")]
    BadGmin(usize),
    #[error("pipeline depth must be 1 or 2 cycles, got {0}")]
    BadStages(u32),
}
