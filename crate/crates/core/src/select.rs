//! Crossbar select-signal construction.
//!
//! A gather decodes each output's index directly, so its select rows are
//! computed output-side. Compress and the slides are input-driven: the
//! datapath computes, per input element, the destination it must reach,
//! decodes that to a per-input one-hot column, and the fixed wiring that
//! hands columns to the crossbar as rows is the transpose. Only compress
//! consults the prefix counters; slides inject the immediate offset into
//! the same add/subtract stage, and gathers skip it entirely.

use crate::carry_save::{
    count_ones_high_to_low, count_zeros_low_to_high, csa_add_index, field_width, CarrySaveSum,
};
use crate::reg::{MaskReg, PermInstr, PermKind, VectorReg};
use crate::sad::{sad_decode, OneHotVec};
use crate::unified::UnitConfig;
use crate::ExecError;

/// Element-level crossbar control: `rows[j][i]` drives output element
/// `j` from input element `i`. Functionally correct control keeps every
/// row at popcount 0 or 1; the matrix type itself does not enforce that,
/// because fault injection deliberately breaks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectMatrix {
    rows: Vec<Vec<bool>>,
}

impl SelectMatrix {
    pub fn zeros(e: usize) -> SelectMatrix {
        SelectMatrix { rows: vec![vec![false; e]; e] }
    }

    pub fn identity(e: usize) -> SelectMatrix {
        let mut m = SelectMatrix::zeros(e);
        for j in 0..e {
            m.rows[j][j] = true;
        }
        m
    }

    /// Fixed transpose wiring: column `i` of the matrix is input `i`'s
    /// one-hot destination vector.
    pub fn from_input_dests(cols: &[OneHotVec]) -> SelectMatrix {
        let e = cols.len();
        let mut m = SelectMatrix::zeros(e);
        for (i, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), e);
            for j in 0..e {
                m.rows[j][i] = col.bit(j);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, j: usize, i: usize) -> bool {
        self.rows[j][i]
    }

    pub fn set(&mut self, j: usize, i: usize, v: bool) {
        self.rows[j][i] = v;
    }

    pub fn row(&self, j: usize) -> &[bool] {
        &self.rows[j]
    }

    /// The input driving output `j`, if exactly one select bit is set.
    pub fn selected_input(&self, j: usize) -> Option<usize> {
        let hot: Vec<usize> = (0..self.size()).filter(|&i| self.rows[j][i]).collect();
        match hot[..] {
            [i] => Some(i),
            _ => None,
        }
    }

    /// Every output row has at most one select asserted.
    pub fn rows_one_hot(&self) -> bool {
        self.rows.iter().all(|r| r.iter().filter(|&&b| b).count() <= 1)
    }

    /// Doubly one-hot: exactly one select per row and per column.
    pub fn is_permutation(&self) -> bool {
        let e = self.size();
        let rows_ok = self.rows.iter().all(|r| r.iter().filter(|&&b| b).count() == 1);
        let cols_ok = (0..e).all(|i| (0..e).filter(|&j| self.rows[j][i]).count() == 1);
        rows_ok && cols_ok
    }

    /// Fault-injection hook: exchanges two physical select wires. Used by
    /// the harness to prove the differential tests can see a wiring bug.
    pub fn swap_wires(&mut self, a: (usize, usize), b: (usize, usize)) {
        let va = self.rows[a.0][a.1];
        let vb = self.rows[b.0][b.1];
        self.rows[a.0][a.1] = vb;
        self.rows[b.0][b.1] = va;
    }
}

/// The control operand a request steers the crossbar with.
pub enum Control<'a> {
    /// Gather: per-output element indices.
    Indices(&'a VectorReg),
    /// Compress: the operand mask.
    Mask(&'a MaskReg),
    /// Slides: no register operand, the offset rides in the instruction.
    Offset,
}

/// The mask-to-destination transform at the heart of compress routing:
/// a set bit at `i` goes to `i - zeros_below(i)`, a clear bit parks at
/// `i + ones_above(i)`. Returned resolved for value-level checking; the
/// select path keeps the same quantities in carry-save form.
///
/// The result is always a permutation of `0..E`: kept elements pack the
/// low end in order, discarded ones fill the remaining slots.
pub fn build_dest_indices_compress(mask: &MaskReg) -> Vec<usize> {
    let e = mask.len();
    let ones = count_ones_high_to_low(mask);
    let zeros = count_zeros_low_to_high(mask);
    (0..e)
        .map(|i| {
            let cs = if mask.bit(i) {
                csa_add_index(&zeros[i], i as u32, true)
            } else {
                csa_add_index(&ones[i], i as u32, false)
            };
            cs.resolve() as usize
        })
        .collect()
}

fn compress_columns(mask: &MaskReg) -> Vec<OneHotVec> {
    let e = mask.len();
    let ones = count_ones_high_to_low(mask);
    let zeros = count_zeros_low_to_high(mask);
    (0..e)
        .map(|i| {
            let cs = if mask.bit(i) {
                csa_add_index(&zeros[i], i as u32, true)
            } else {
                csa_add_index(&ones[i], i as u32, false)
            };
            sad_decode(&cs, e)
        })
        .collect()
}

fn slide_columns(e: usize, offset: usize, up: bool) -> Vec<OneHotVec> {
    let w = field_width(e);
    // The offset takes the place of a prefix count; out-of-range sums
    // decode to no destination, which is how slid-out elements vanish.
    let off = CarrySaveSum::new(offset as u32, 0, w);
    (0..e).map(|i| sad_decode(&csa_add_index(&off, i as u32, !up), e)).collect()
}

/// Builds the element-level select matrix for one request. `vl` and v0
/// play no part here; they are applied by the merge stage downstream.
pub fn build_select_matrix(
    instr: &PermInstr,
    control: &Control<'_>,
    config: &UnitConfig,
) -> Result<SelectMatrix, ExecError> {
    if !config.supports(instr.sew) {
        return Err(ExecError::UnsupportedWidth { sew: instr.sew.bits(), gmin: config.gmin });
    }
    let e = config.elem_count(instr.sew);
    let w = field_width(e);
    Ok(match (instr.kind, control) {
        (PermKind::Gather, Control::Indices(idx)) => {
            let mut m = SelectMatrix::zeros(e);
            for j in 0..e {
                let v = idx.elem(instr.sew, j);
                if v < e as u64 {
                    // Output-side decode; an out-of-range index leaves the
                    // row empty and the crossbar yields zero.
                    let one_hot = sad_decode(&CarrySaveSum::new(v as u32, 0, w), e);
                    for i in 0..e {
                        m.set(j, i, one_hot.bit(i));
                    }
                }
            }
            m
        }
        (PermKind::Compress, Control::Mask(mask)) => {
            assert_eq!(mask.len(), e, "compress mask must cover every element");
            SelectMatrix::from_input_dests(&compress_columns(mask))
        }
        (PermKind::SlideUp, Control::Offset) => {
            SelectMatrix::from_input_dests(&slide_columns(e, instr.offset, true))
        }
        (PermKind::SlideDown, Control::Offset) => {
            SelectMatrix::from_input_dests(&slide_columns(e, instr.offset, false))
        }
        _ => panic!("control operand does not match {}", instr.kind),
    })
}
