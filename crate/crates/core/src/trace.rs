//! The trace-file format: a line-oriented script for driving either unit
//! and checking destinations bit for bit.
//!
//! ```text
//! # comments run to end of line, blank lines are skipped
//! setcfg vlen=64 gmin=1 stages=1
//! setreg src 0x5040302010a0b0c0
//! setmask mask 0b00101101
//! exec compress sew=8 vl=8
//! expect 0xXXXXXXXXXXXXXXXX
//! ```
//!
//! Register literals are hex, optionally 0x-prefixed, and must have
//! exactly `vlen / 4` digits with element 0 in the lowest-order digits.
//! `setreg` targets `src`, `idx` or `dest`; `setmask` targets `v0` or
//! `mask` and takes a binary (`0b`, bit i of the literal is element i)
//! or hex (`0x`) literal of any length, padded or truncated to the
//! element count at execution. `exec` writes the result back to `dest`,
//! so scripts can chain instructions; `expect` compares `dest` against a
//! literal and records a failure on mismatch. `setcfg` is only legal
//! before any register state exists.

use std::fmt;

use crate::baseline::{BaselineConfig, BaselineUnit};
use crate::harness::UnitChoice;
use crate::reg::{ElemWidth, MaskReg, PermInstr, PermKind, VectorReg};
use crate::unified::{Operands, UnifiedUnit, UnitConfig};
use crate::{ConfigError, ExecError};

/// Register names `setreg` can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegName {
    Src,
    Idx,
    Dest,
}

impl RegName {
    fn name(self) -> &'static str {
        match self {
            RegName::Src => "src",
            RegName::Idx => "idx",
            RegName::Dest => "dest",
        }
    }

    fn from_name(s: &str) -> Option<RegName> {
        [RegName::Src, RegName::Idx, RegName::Dest].into_iter().find(|r| r.name() == s)
    }
}

/// Mask names `setmask` can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskName {
    V0,
    Mask,
}

impl MaskName {
    fn name(self) -> &'static str {
        match self {
            MaskName::V0 => "v0",
            MaskName::Mask => "mask",
        }
    }

    fn from_name(s: &str) -> Option<MaskName> {
        [MaskName::V0, MaskName::Mask].into_iter().find(|m| m.name() == s)
    }
}

/// One parsed trace directive, tagged with its 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub line: usize,
    pub directive: Directive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    SetCfg { vlen: Option<usize>, gmin: Option<usize>, stages: Option<u32> },
    SetReg { name: RegName, value: VectorReg },
    SetMask { name: MaskName, bits: Vec<bool> },
    Exec(PermInstr),
    Expect { value: VectorReg },
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Directive::SetCfg { vlen, gmin, stages } => {
                write!(f, "setcfg")?;
                if let Some(v) = vlen {
                    write!(f, " vlen={v}")?;
                }
                if let Some(g) = gmin {
                    write!(f, " gmin={g}")?;
                }
                if let Some(s) = stages {
                    write!(f, " stages={s}")?;
                }
                Ok(())
            }
            Directive::SetReg { name, value } => {
                write!(f, "setreg {} 0x{}", name.name(), value.to_hex())
            }
            Directive::SetMask { name, bits } => {
                write!(f, "setmask {} 0b", name.name())?;
                for i in (0..bits.len()).rev() {
                    write!(f, "{}", if bits[i] { '1' } else { '0' })?;
                }
                Ok(())
            }
            Directive::Exec(instr) => write!(f, "exec {instr}"),
            Directive::Expect { value } => write!(f, "expect 0x{}", value.to_hex()),
        }
    }
}

/// Errors a trace can raise, each naming its source line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("line {line}: syntax error: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: register literal is {got} hex digits, vlen={vlen} needs {expected}")]
    WidthMismatch { line: usize, vlen: usize, expected: usize, got: usize },
    #[error("line {line}: {reason}")]
    Semantic { line: usize, reason: String },
}

fn syntax(line: usize, reason: impl Into<String>) -> TraceError {
    TraceError::Syntax { line, reason: reason.into() }
}

fn parse_int<T: std::str::FromStr>(line: usize, key: &str, s: &str) -> Result<T, TraceError> {
    s.parse().map_err(|_| syntax(line, format!("{key} wants a number, got {s:?}")))
}

fn parse_reg_literal(line: usize, vlen: usize, tok: &str) -> Result<VectorReg, TraceError> {
    let digits = tok.strip_prefix("0x").unwrap_or(tok);
    let expected = vlen / 4;
    if digits.len() != expected {
        return Err(TraceError::WidthMismatch { line, vlen, expected, got: digits.len() });
    }
    VectorReg::from_hex(vlen, digits)
        .ok_or_else(|| syntax(line, format!("bad hex digit in {tok:?}")))
}

fn parse_mask_literal(line: usize, tok: &str) -> Result<Vec<bool>, TraceError> {
    if let Some(binary) = tok.strip_prefix("0b") {
        let mut bits = Vec::with_capacity(binary.len());
        for ch in binary.chars().rev() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(syntax(line, format!("bad mask bit {ch:?}"))),
            }
        }
        if bits.is_empty() {
            return Err(syntax(line, "empty mask literal"));
        }
        Ok(bits)
    } else if let Some(hex) = tok.strip_prefix("0x") {
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for ch in hex.chars().rev() {
            let v = ch.to_digit(16).ok_or_else(|| syntax(line, format!("bad hex digit {ch:?}")))?;
            for b in 0..4 {
                bits.push(v >> b & 1 == 1);
            }
        }
        if bits.is_empty() {
            return Err(syntax(line, "empty mask literal"));
        }
        Ok(bits)
    } else {
        Err(syntax(line, "mask literal must start 0b or 0x"))
    }
}

fn parse_exec(line: usize, tokens: &[&str]) -> Result<PermInstr, TraceError> {
    let [kind_tok, rest @ ..] = tokens else {
        return Err(syntax(line, "exec wants a kind"));
    };
    let kind = PermKind::from_name(kind_tok)
        .ok_or_else(|| syntax(line, format!("unknown kind {kind_tok:?}")))?;
    let mut sew = None;
    let mut vl = None;
    let mut offset = None;
    let mut masked = false;
    for tok in rest {
        if *tok == "masked" {
            masked = true;
        } else if let Some(v) = tok.strip_prefix("sew=") {
            let bits = parse_int(line, "sew", v)?;
            sew = Some(
                ElemWidth::from_bits(bits)
                    .ok_or_else(|| syntax(line, format!("sew must be 8, 16 or 32, got {bits}")))?,
            );
        } else if let Some(v) = tok.strip_prefix("vl=") {
            vl = Some(parse_int(line, "vl", v)?);
        } else if let Some(v) = tok.strip_prefix("offset=") {
            if !kind.is_slide() {
                return Err(syntax(line, format!("offset= is only valid on slides, not {kind}")));
            }
            offset = Some(parse_int(line, "offset", v)?);
        } else {
            return Err(syntax(line, format!("unexpected token {tok:?}")));
        }
    }
    let sew = sew.ok_or_else(|| syntax(line, "exec wants sew="))?;
    let vl = vl.ok_or_else(|| syntax(line, "exec wants vl="))?;
    Ok(PermInstr { kind, sew, offset: offset.unwrap_or(0), masked, vl })
}

/// Parses a whole trace. `vlen` is the width register literals are
/// checked against until a `setcfg vlen=` changes it.
pub fn parse_trace(text: &str, vlen: usize) -> Result<Vec<TraceLine>, TraceError> {
    let mut out = Vec::new();
    let mut cur_vlen = vlen;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let directive = match tokens[0] {
            "setcfg" => {
                let mut vlen_kv = None;
                let mut gmin = None;
                let mut stages = None;
                for tok in &tokens[1..] {
                    if let Some(v) = tok.strip_prefix("vlen=") {
                        let v: usize = parse_int(line, "vlen", v)?;
                        if v < 64 || !v.is_power_of_two() {
                            return Err(syntax(line, format!("vlen must be a power of two >= 64, got {v}")));
                        }
                        vlen_kv = Some(v);
                    } else if let Some(v) = tok.strip_prefix("gmin=") {
                        gmin = Some(parse_int(line, "gmin", v)?);
                    } else if let Some(v) = tok.strip_prefix("stages=") {
                        stages = Some(parse_int(line, "stages", v)?);
                    } else {
                        return Err(syntax(line, format!("unexpected token {tok:?}")));
                    }
                }
                if let Some(v) = vlen_kv {
                    cur_vlen = v;
                }
                Directive::SetCfg { vlen: vlen_kv, gmin, stages }
            }
            "setreg" => {
                let [_, name, lit] = tokens[..] else {
                    return Err(syntax(line, "setreg wants a register name and a literal"));
                };
                let name = RegName::from_name(name)
                    .ok_or_else(|| syntax(line, format!("unknown register {name:?}")))?;
                Directive::SetReg { name, value: parse_reg_literal(line, cur_vlen, lit)? }
            }
            "setmask" => {
                let [_, name, lit] = tokens[..] else {
                    return Err(syntax(line, "setmask wants a mask name and a literal"));
                };
                let name = MaskName::from_name(name)
                    .ok_or_else(|| syntax(line, format!("unknown mask {name:?}")))?;
                Directive::SetMask { name, bits: parse_mask_literal(line, lit)? }
            }
            "exec" => Directive::Exec(parse_exec(line, &tokens[1..])?),
            "expect" => {
                let [_, lit] = tokens[..] else {
                    return Err(syntax(line, "expect wants exactly one literal"));
                };
                Directive::Expect { value: parse_reg_literal(line, cur_vlen, lit)? }
            }
            other => return Err(syntax(line, format!("unknown directive {other:?}"))),
        };
        out.push(TraceLine { line, directive });
    }
    Ok(out)
}

/// Canonical text for a list of directives; `parse_trace` inverts it.
pub fn print_trace(lines: &[TraceLine]) -> String {
    let mut s = String::new();
    for l in lines {
        s.push_str(&l.directive.to_string());
        s.push('\n');
    }
    s
}

/// What happened at one `exec` or `expect` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Exec {
        line: usize,
        instr: PermInstr,
        unified_latency: Option<u32>,
        baseline_latency: Option<u32>,
    },
    Expect {
        line: usize,
        pass: bool,
        expected: VectorReg,
        unified_actual: Option<VectorReg>,
        baseline_actual: Option<VectorReg>,
    },
}

/// Outcome of running a whole trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub events: Vec<TraceEvent>,
    pub execs: u64,
    pub expects: u64,
    pub failures: u64,
}

impl TraceReport {
    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for ev in &self.events {
            match ev {
                TraceEvent::Exec { line, instr, unified_latency, baseline_latency } => {
                    s.push_str(&format!("line {line}: exec {instr}"));
                    if let Some(l) = unified_latency {
                        s.push_str(&format!(" unified={l}cyc"));
                    }
                    if let Some(l) = baseline_latency {
                        s.push_str(&format!(" baseline={l}cyc"));
                    }
                    s.push('\n');
                }
                TraceEvent::Expect { line, pass, expected, unified_actual, baseline_actual } => {
                    if *pass {
                        s.push_str(&format!("line {line}: expect ok\n"));
                    } else {
                        s.push_str(&format!("line {line}: expect FAILED\n"));
                        s.push_str(&format!("  expected 0x{}\n", expected.to_hex()));
                        if let Some(v) = unified_actual {
                            s.push_str(&format!("  unified  0x{}\n", v.to_hex()));
                        }
                        if let Some(v) = baseline_actual {
                            s.push_str(&format!("  baseline 0x{}\n", v.to_hex()));
                        }
                    }
                }
            }
        }
        s.push_str(&format!(
            "trace: {} execs, {} expects, {} failures\n",
            self.execs, self.expects, self.failures
        ));
        s
    }

    pub fn porcelain(&self) -> String {
        format!(
            "trace.execs={}\ntrace.expects={}\ntrace.failures={}\n",
            self.execs, self.expects, self.failures
        )
    }
}

struct TraceMachine {
    unit_cfg: UnitConfig,
    baseline_cfg: BaselineConfig,
    units: UnitChoice,
    unified: Option<UnifiedUnit>,
    baseline: Option<BaselineUnit>,
    src: Option<VectorReg>,
    idx: Option<VectorReg>,
    dest_unified: VectorReg,
    dest_baseline: VectorReg,
    v0: Option<Vec<bool>>,
    mask: Option<Vec<bool>>,
    touched: bool,
}

impl TraceMachine {
    fn apply_cfg(
        &mut self,
        line: usize,
        vlen: Option<usize>,
        gmin: Option<usize>,
        stages: Option<u32>,
    ) -> Result<(), TraceError> {
        if self.touched {
            return Err(TraceError::Semantic {
                line,
                reason: "setcfg after register state or exec".into(),
            });
        }
        let map_err = |line: usize, e: ConfigError| TraceError::Semantic { line, reason: e.to_string() };
        self.unit_cfg = UnitConfig::try_new(
            vlen.unwrap_or(self.unit_cfg.vlen),
            gmin.unwrap_or(self.unit_cfg.gmin),
            stages.unwrap_or(self.unit_cfg.pipeline_stages),
        )
        .map_err(|e| map_err(line, e))?;
        self.baseline_cfg = BaselineConfig::try_new(
            self.unit_cfg.vlen,
            self.baseline_cfg.compress_overhead_cycles,
        )
        .map_err(|e| map_err(line, e))?;
        self.unified = self.units.has_unified().then(|| UnifiedUnit::new(self.unit_cfg));
        self.baseline = self.units.has_baseline().then(|| BaselineUnit::new(self.baseline_cfg));
        self.dest_unified = VectorReg::zero(self.unit_cfg.vlen);
        self.dest_baseline = VectorReg::zero(self.unit_cfg.vlen);
        Ok(())
    }

    fn exec(&mut self, line: usize, instr: &PermInstr) -> Result<TraceEvent, TraceError> {
        let semantic = |reason: String| TraceError::Semantic { line, reason };
        let e = self.unit_cfg.elem_count(instr.sew);
        if instr.vl > e {
            return Err(semantic(format!("vl={} exceeds {e} elements", instr.vl)));
        }
        if instr.offset > e {
            return Err(semantic(format!("offset={} exceeds {e} elements", instr.offset)));
        }
        let src = self.src.clone().ok_or_else(|| semantic("exec before setreg src".into()))?;
        let idx = match instr.kind {
            PermKind::Gather => {
                self.idx.clone().ok_or_else(|| semantic("gather before setreg idx".into()))?
            }
            _ => VectorReg::zero(self.unit_cfg.vlen),
        };
        let mask = match instr.kind {
            PermKind::Compress => MaskReg::from_bits(
                self.mask.clone().ok_or_else(|| semantic("compress before setmask mask".into()))?,
            )
            .resized(e),
            _ => MaskReg::zeros(e),
        };
        let v0 = if instr.masked {
            MaskReg::from_bits(
                self.v0.clone().ok_or_else(|| semantic("masked exec before setmask v0".into()))?,
            )
            .resized(e)
        } else {
            MaskReg::ones(e)
        };

        let mut unified_latency = None;
        let mut baseline_latency = None;
        if let Some(unit) = &self.unified {
            let ops = Operands {
                old_dest: self.dest_unified.clone(),
                src: src.clone(),
                idx: idx.clone(),
                mask: mask.clone(),
                v0: v0.clone(),
            };
            let res = unit.execute(instr, &ops).map_err(|e: ExecError| semantic(e.to_string()))?;
            self.dest_unified = res.value;
            unified_latency = Some(res.latency_cycles);
        }
        if let Some(unit) = &self.baseline {
            let ops = Operands { old_dest: self.dest_baseline.clone(), src, idx, mask, v0 };
            let res = unit.execute(instr, &ops).map_err(|e: ExecError| semantic(e.to_string()))?;
            self.dest_baseline = res.value;
            baseline_latency = Some(res.latency_cycles);
        }
        self.touched = true;
        Ok(TraceEvent::Exec { line, instr: *instr, unified_latency, baseline_latency })
    }
}

/// Runs parsed directives against the selected units. Expect failures
/// land in the report; malformed sequencing is a hard error.
pub fn run_trace(
    lines: &[TraceLine],
    units: UnitChoice,
    unit_cfg: UnitConfig,
    baseline_cfg: BaselineConfig,
) -> Result<TraceReport, TraceError> {
    assert_eq!(unit_cfg.vlen, baseline_cfg.vlen, "unit geometries must agree");
    let mut m = TraceMachine {
        unit_cfg,
        baseline_cfg,
        units,
        unified: units.has_unified().then(|| UnifiedUnit::new(unit_cfg)),
        baseline: units.has_baseline().then(|| BaselineUnit::new(baseline_cfg)),
        src: None,
        idx: None,
        dest_unified: VectorReg::zero(unit_cfg.vlen),
        dest_baseline: VectorReg::zero(unit_cfg.vlen),
        v0: None,
        mask: None,
        touched: false,
    };
    let mut report = TraceReport { events: Vec::new(), execs: 0, expects: 0, failures: 0 };
    for l in lines {
        match &l.directive {
            Directive::SetCfg { vlen, gmin, stages } => m.apply_cfg(l.line, *vlen, *gmin, *stages)?,
            Directive::SetReg { name, value } => {
                if value.vlen() != m.unit_cfg.vlen {
                    // Literal widths are checked at parse time against the
                    // trace's own setcfg; this guards caller-supplied ASTs.
                    return Err(TraceError::Semantic {
                        line: l.line,
                        reason: format!(
                            "register literal is {} bits, unit vlen is {}",
                            value.vlen(),
                            m.unit_cfg.vlen
                        ),
                    });
                }
                match name {
                    RegName::Src => m.src = Some(value.clone()),
                    RegName::Idx => m.idx = Some(value.clone()),
                    RegName::Dest => {
                        m.dest_unified = value.clone();
                        m.dest_baseline = value.clone();
                    }
                }
                m.touched = true;
            }
            Directive::SetMask { name, bits } => {
                match name {
                    MaskName::V0 => m.v0 = Some(bits.clone()),
                    MaskName::Mask => m.mask = Some(bits.clone()),
                }
                m.touched = true;
            }
            Directive::Exec(instr) => {
                let ev = m.exec(l.line, instr)?;
                report.execs += 1;
                report.events.push(ev);
            }
            Directive::Expect { value } => {
                let unified_actual = m.unified.is_some().then(|| m.dest_unified.clone());
                let baseline_actual = m.baseline.is_some().then(|| m.dest_baseline.clone());
                let pass = unified_actual.as_ref().is_none_or(|v| v == value)
                    && baseline_actual.as_ref().is_none_or(|v| v == value);
                report.expects += 1;
                if !pass {
                    report.failures += 1;
                }
                report.events.push(TraceEvent::Expect {
                    line: l.line,
                    pass,
                    expected: value.clone(),
                    unified_actual,
                    baseline_actual,
                });
            }
        }
    }
    Ok(report)
}
