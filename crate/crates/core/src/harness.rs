//! Differential verification: seeded random campaigns, exhaustive small
//! sweeps, and latency audits, all judged against the golden model.
//!
//! Campaigns are deterministic end to end. Case `index` of a campaign is
//! a pure function of `(seed, index, config)`, so any failure can be
//! regenerated from the report alone, and running the same config twice
//! yields byte-identical reports.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baseline::{BaselineConfig, BaselineUnit};
use crate::carry_save::{field_width, CarrySaveSum};
use crate::golden::golden_execute;
use crate::reg::{ElemWidth, MaskReg, PermInstr, PermKind, VectorReg};
use crate::sad::sad_decode;
use crate::select::build_dest_indices_compress;
use crate::unified::{Operands, UnifiedUnit, UnitConfig, WireSwap};

/// Which hardware models a campaign exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitChoice {
    Unified,
    Baseline,
    Both,
}

impl UnitChoice {
    pub fn has_unified(self) -> bool {
        matches!(self, UnitChoice::Unified | UnitChoice::Both)
    }

    pub fn has_baseline(self) -> bool {
        matches!(self, UnitChoice::Baseline | UnitChoice::Both)
    }

    pub fn name(self) -> &'static str {
        match self {
            UnitChoice::Unified => "unified",
            UnitChoice::Baseline => "baseline",
            UnitChoice::Both => "both",
        }
    }

    pub fn from_name(s: &str) -> Option<UnitChoice> {
        [UnitChoice::Unified, UnitChoice::Baseline, UnitChoice::Both]
            .into_iter()
            .find(|u| u.name() == s)
    }
}

/// Everything that pins down a campaign; equal configs give equal reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignConfig {
    pub seed: u64,
    pub cases: u64,
    pub vlen: usize,
    pub gmin: usize,
    pub pipeline_stages: u32,
    pub compress_overhead_cycles: u32,
    /// Element widths to draw from; must all be legal for `gmin`.
    pub sew_set: Vec<ElemWidth>,
    pub units: UnitChoice,
    /// Optional wiring defect injected into the unified unit.
    pub fault: Option<WireSwap>,
}

impl CampaignConfig {
    pub fn new(seed: u64, cases: u64) -> CampaignConfig {
        CampaignConfig {
            seed,
            cases,
            vlen: 256,
            gmin: 1,
            pipeline_stages: 1,
            compress_overhead_cycles: 1,
            sew_set: ElemWidth::ALL.to_vec(),
            units: UnitChoice::Both,
            fault: None,
        }
    }

    pub fn unit_config(&self) -> UnitConfig {
        UnitConfig::try_new(self.vlen, self.gmin, self.pipeline_stages)
            .expect("campaign geometry must be a valid unit geometry")
    }

    pub fn baseline_config(&self) -> BaselineConfig {
        BaselineConfig::try_new(self.vlen, self.compress_overhead_cycles)
            .expect("campaign geometry must be a valid unit geometry")
    }

    fn checked_sews(&self) -> Vec<ElemWidth> {
        let cfg = self.unit_config();
        let sews: Vec<ElemWidth> =
            self.sew_set.iter().copied().filter(|&s| cfg.supports(s)).collect();
        assert!(!sews.is_empty(), "no element width in the set fits a {}-byte granule", self.gmin);
        sews
    }
}

/// One generated stimulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub index: u64,
    pub instr: PermInstr,
    pub ops: Operands,
}

/// A reproducer for one failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// A unit's register result disagreed with the golden model.
    Exec {
        unit: UnitChoice,
        instr: PermInstr,
        ops: Operands,
        expected: VectorReg,
        actual: VectorReg,
    },
    /// The compress destination transform broke its contract.
    DestVector { mask: MaskReg, expected: Vec<usize>, actual: Vec<usize> },
    /// A sum-addressed decoder disagreed with the resolved sum.
    SadDecode { s: u32, c: u32, width: u32, range: usize, expected: Option<usize>, actual: Option<usize> },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Exec { unit, instr, ops, expected, actual } => {
                writeln!(f, "unit: {}", unit.name())?;
                writeln!(f, "instr: {instr}")?;
                writeln!(f, "old_dest: {}", ops.old_dest.to_hex())?;
                writeln!(f, "src:      {}", ops.src.to_hex())?;
                if instr.kind == PermKind::Gather {
                    writeln!(f, "idx:      {}", ops.idx.to_hex())?;
                }
                if instr.kind == PermKind::Compress {
                    writeln!(f, "mask:     {}", mask_string(&ops.mask))?;
                }
                if instr.masked {
                    writeln!(f, "v0:       {}", mask_string(&ops.v0))?;
                }
                writeln!(f, "expected: {}", expected.to_hex())?;
                write!(f, "actual:   {}", actual.to_hex())
            }
            Counterexample::DestVector { mask, expected, actual } => {
                writeln!(f, "compress dest transform, mask {}", mask_string(mask))?;
                writeln!(f, "expected: {expected:?}")?;
                write!(f, "actual:   {actual:?}")
            }
            Counterexample::SadDecode { s, c, width, range, expected, actual } => {
                writeln!(f, "sad_decode s={s} c={c} width={width} range={range}")?;
                writeln!(f, "expected: {expected:?}")?;
                write!(f, "actual:   {actual:?}")
            }
        }
    }
}

fn mask_string(m: &MaskReg) -> String {
    let mut s = String::from("0b");
    for i in (0..m.len()).rev() {
        s.push(if m.bit(i) { '1' } else { '0' });
    }
    s
}

/// Outcome of a campaign or sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignReport {
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<Counterexample>,
    /// latency -> completions, per unit.
    pub unified_latency: BTreeMap<u32, u64>,
    pub baseline_latency: BTreeMap<u32, u64>,
    /// (kind, sew bits) -> cases generated.
    pub coverage: BTreeMap<(PermKind, usize), u64>,
}

impl CampaignReport {
    fn empty() -> CampaignReport {
        CampaignReport {
            total: 0,
            passed: 0,
            failed: 0,
            first_failure: None,
            unified_latency: BTreeMap::new(),
            baseline_latency: BTreeMap::new(),
            coverage: BTreeMap::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// Human-readable summary.
    pub fn text(&self) -> String {
        let mut s = format!(
            "cases: {} passed, {} failed, {} total\n",
            self.passed, self.failed, self.total
        );
        if !self.coverage.is_empty() {
            s.push_str("coverage:\n");
            for (&(kind, sew), &n) in &self.coverage {
                s.push_str(&format!("  {kind} sew={sew}: {n}\n"));
            }
        }
        for (name, hist) in [("unified", &self.unified_latency), ("baseline", &self.baseline_latency)] {
            if !hist.is_empty() {
                s.push_str(&format!("{name} latency histogram:\n"));
                for (&lat, &n) in hist {
                    s.push_str(&format!("  {lat} cycles: {n}\n"));
                }
            }
        }
        if let Some(ce) = &self.first_failure {
            s.push_str(&format!("first failure:\n{ce}\n"));
        }
        s
    }

    /// Stable key=value rendering for scripts.
    pub fn porcelain(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("campaign.total={}\n", self.total));
        s.push_str(&format!("campaign.passed={}\n", self.passed));
        s.push_str(&format!("campaign.failed={}\n", self.failed));
        for (&(kind, sew), &n) in &self.coverage {
            s.push_str(&format!("campaign.coverage.{kind}.sew{sew}={n}\n"));
        }
        for (name, hist) in [("unified", &self.unified_latency), ("baseline", &self.baseline_latency)] {
            for (&lat, &n) in hist {
                s.push_str(&format!("campaign.latency.{name}.{lat}={n}\n"));
            }
        }
        s
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed).wrapping_add(splitmix64(index ^ 0xd1ff_ca5e)))
}

/// Masks are drawn with the edge densities overweighted: hardware bugs
/// love all-zeros, all-ones and single-bit masks far more than a uniform
/// draw would visit them.
fn gen_mask(rng: &mut ChaCha8Rng, e: usize) -> MaskReg {
    match rng.random_range(0..10u32) {
        0 => MaskReg::zeros(e),
        1 => MaskReg::ones(e),
        2 => {
            let mut m = MaskReg::zeros(e);
            m.set_bit(rng.random_range(0..e), true);
            m
        }
        3 => {
            let mut m = MaskReg::ones(e);
            m.set_bit(rng.random_range(0..e), false);
            m
        }
        _ => MaskReg::from_bits((0..e).map(|_| rng.random()).collect()),
    }
}

fn gen_reg(rng: &mut ChaCha8Rng, vlen: usize) -> VectorReg {
    VectorReg::from_bytes((0..vlen / 8).map(|_| rng.random()).collect())
}

/// Deterministically builds case `index` of a campaign.
pub fn gen_case(seed: u64, index: u64, config: &CampaignConfig) -> TestCase {
    let mut rng = case_rng(seed, index);
    let sews = config.checked_sews();
    let sew = sews[rng.random_range(0..sews.len())];
    let e = config.vlen / sew.bits();
    let kind = PermKind::ALL[rng.random_range(0..4)];
    let vl = rng.random_range(0..=e);
    let masked = kind != PermKind::Compress && rng.random();
    let offset = if kind.is_slide() { rng.random_range(0..=e) } else { 0 };
    let instr = PermInstr { kind, sew, offset, masked, vl };

    let mut idx = gen_reg(&mut rng, config.vlen);
    if kind == PermKind::Gather {
        // Uniform index bytes almost never land in range at wide sews, so
        // half the elements are redrawn near the boundary to keep in-range
        // and barely-out-of-range gathers exercised.
        for i in 0..e {
            if rng.random() {
                idx.set_elem(sew, i, rng.random_range(0..2 * e as u64));
            }
        }
    }
    let ops = Operands {
        old_dest: gen_reg(&mut rng, config.vlen),
        src: gen_reg(&mut rng, config.vlen),
        idx,
        mask: gen_mask(&mut rng, e),
        v0: gen_mask(&mut rng, e),
    };
    TestCase { index, instr, ops }
}

/// Executes one case on one unit and returns the mismatch, if any.
fn check_case(
    case: &TestCase,
    unified: Option<&UnifiedUnit>,
    baseline: Option<&BaselineUnit>,
    report: Option<&mut CampaignReport>,
) -> Option<Counterexample> {
    let golden = golden_execute(&case.instr, &case.ops)
        .expect("generated cases are always architecturally valid");
    let mut unified_latency = None;
    let mut baseline_latency = None;
    let mut failure = None;
    if let Some(unit) = unified {
        let res = unit.execute(&case.instr, &case.ops)
            .expect("generated cases are always legal for the unit");
        unified_latency = Some(res.latency_cycles);
        if res.value != golden && failure.is_none() {
            failure = Some(Counterexample::Exec {
                unit: UnitChoice::Unified,
                instr: case.instr,
                ops: case.ops.clone(),
                expected: golden.clone(),
                actual: res.value,
            });
        }
    }
    if let Some(unit) = baseline {
        let res = unit.execute(&case.instr, &case.ops)
            .expect("generated cases are always legal for the unit");
        baseline_latency = Some(res.latency_cycles);
        if res.value != golden && failure.is_none() {
            failure = Some(Counterexample::Exec {
                unit: UnitChoice::Baseline,
                instr: case.instr,
                ops: case.ops.clone(),
                expected: golden,
                actual: res.value,
            });
        }
    }
    if let Some(report) = report {
        if let Some(l) = unified_latency {
            *report.unified_latency.entry(l).or_insert(0) += 1;
        }
        if let Some(l) = baseline_latency {
            *report.baseline_latency.entry(l).or_insert(0) += 1;
        }
        *report.coverage.entry((case.instr.kind, case.instr.sew.bits())).or_insert(0) += 1;
    }
    failure
}

/// Shrinks a failing case: halve vl while the failure survives, then
/// greedily clear mask bits one at a time. The result is re-checked, so
/// whatever comes out still fails.
fn shrink_case(
    mut case: TestCase,
    unified: Option<&UnifiedUnit>,
    baseline: Option<&BaselineUnit>,
) -> TestCase {
    let still_fails =
        |c: &TestCase| check_case(c, unified, baseline, None).is_some();
    loop {
        let mut changed = false;
        while case.instr.vl > 0 {
            let mut cand = case.clone();
            cand.instr.vl /= 2;
            if still_fails(&cand) {
                case = cand;
                changed = true;
            } else {
                break;
            }
        }
        let e = case.ops.mask.len();
        for i in 0..e {
            if case.ops.mask.bit(i) {
                let mut cand = case.clone();
                cand.ops.mask.set_bit(i, false);
                if still_fails(&cand) {
                    case = cand;
                    changed = true;
                }
            }
            if case.ops.v0.bit(i) {
                let mut cand = case.clone();
                cand.ops.v0.set_bit(i, false);
                if still_fails(&cand) {
                    case = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            return case;
        }
    }
}

fn make_units(config: &CampaignConfig) -> (Option<UnifiedUnit>, Option<BaselineUnit>) {
    let unified = config.units.has_unified().then(|| match config.fault {
        Some(f) => UnifiedUnit::with_select_swap(config.unit_config(), f),
        None => UnifiedUnit::new(config.unit_config()),
    });
    let baseline = config.units.has_baseline().then(|| BaselineUnit::new(config.baseline_config()));
    (unified, baseline)
}

/// Runs a full differential campaign.
pub fn run_differential(config: &CampaignConfig) -> CampaignReport {
    let (unified, baseline) = make_units(config);
    let mut report = CampaignReport::empty();
    for index in 0..config.cases {
        let case = gen_case(config.seed, index, config);
        let failure =
            check_case(&case, unified.as_ref(), baseline.as_ref(), Some(&mut report));
        report.total += 1;
        match failure {
            None => report.passed += 1,
            Some(_) => {
                report.failed += 1;
                if report.first_failure.is_none() {
                    let shrunk = shrink_case(case, unified.as_ref(), baseline.as_ref());
                    report.first_failure =
                        check_case(&shrunk, unified.as_ref(), baseline.as_ref(), None);
                    assert!(report.first_failure.is_some(), "shrinking must preserve the failure");
                }
            }
        }
    }
    report
}

/// Re-runs a counterexample in isolation; true when it still fails.
/// Only [`Counterexample::Exec`] can be re-executed this way.
pub fn reproduce(config: &CampaignConfig, ce: &Counterexample) -> bool {
    let Counterexample::Exec { unit, instr, ops, .. } = ce else {
        return false;
    };
    let (unified, baseline) = make_units(config);
    let case = TestCase { index: 0, instr: *instr, ops: ops.clone() };
    match unit {
        UnitChoice::Unified => check_case(&case, unified.as_ref(), None, None).is_some(),
        _ => check_case(&case, None, baseline.as_ref(), None).is_some(),
    }
}

/// Exhaustive sweeps over instances small enough to enumerate fully:
/// every compress mask at E=8 (both the destination transform and the
/// full register result), every in-range gather index vector at E=4,
/// every slide offset at E=8, and every decoder input pair at E=8..32.
pub fn run_exhaustive_small() -> CampaignReport {
    let mut report = CampaignReport::empty();
    let fail = |report: &mut CampaignReport, ce: Counterexample| {
        report.failed += 1;
        if report.first_failure.is_none() {
            report.first_failure = Some(ce);
        }
    };

    // Compress: all 256 masks at E=8, vlen=64.
    let config = CampaignConfig { vlen: 64, ..CampaignConfig::new(0, 0) };
    let (unified, baseline) = make_units(&config);
    let sew = ElemWidth::Sew8;
    let src = VectorReg::from_elems(64, sew, &[0xa0, 0xa1, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7]);
    let old = VectorReg::from_elems(64, sew, &[0x50, 0x51, 0x52, 0x53, 0x54, 0x55, 0x56, 0x57]);
    for bits in 0u64..256 {
        let mask = MaskReg::from_word(8, bits);
        let dest = build_dest_indices_compress(&mask);
        let expected = scan_dest_oracle(&mask);
        report.total += 1;
        if dest != expected {
            fail(&mut report, Counterexample::DestVector { mask: mask.clone(), expected, actual: dest });
        } else {
            report.passed += 1;
        }

        let case = TestCase {
            index: bits,
            instr: PermInstr::compress(sew, 8),
            ops: Operands::new(old.clone(), src.clone()).with_mask(mask),
        };
        report.total += 1;
        match check_case(&case, unified.as_ref(), baseline.as_ref(), Some(&mut report)) {
            None => report.passed += 1,
            Some(ce) => fail(&mut report, ce),
        }
    }

    // Gather: all 4^4 in-range index vectors at E=4, done at sew=16 so
    // the sweep also exercises a multi-byte element width.
    let config = CampaignConfig { vlen: 64, ..CampaignConfig::new(0, 0) };
    let (unified, baseline) = make_units(&config);
    let sew16 = ElemWidth::Sew16;
    let src = VectorReg::from_elems(64, sew16, &[0xb0b0, 0xb1b1, 0xb2b2, 0xb3b3]);
    let old = VectorReg::from_elems(64, sew16, &[0x6060, 0x6161, 0x6262, 0x6363]);
    for combo in 0u64..256 {
        let vals: Vec<u64> = (0..4).map(|i| combo >> (2 * i) & 3).collect();
        let case = TestCase {
            index: combo,
            instr: PermInstr::gather(sew16, 4),
            ops: Operands::new(old.clone(), src.clone())
                .with_idx(VectorReg::from_elems(64, sew16, &vals)),
        };
        report.total += 1;
        match check_case(&case, unified.as_ref(), baseline.as_ref(), Some(&mut report)) {
            None => report.passed += 1,
            Some(ce) => fail(&mut report, ce),
        }
    }

    // Slides: every offset and direction at E=8, vlen=64.
    let config = CampaignConfig { vlen: 64, ..CampaignConfig::new(0, 0) };
    let (unified, baseline) = make_units(&config);
    let src = VectorReg::from_elems(64, sew, &[1, 2, 3, 4, 5, 6, 7, 8]);
    let old = VectorReg::from_elems(64, sew, &[0x70, 0x71, 0x72, 0x73, 0x74, 0x75, 0x76, 0x77]);
    for offset in 0..=8usize {
        for up in [false, true] {
            let instr = if up {
                PermInstr::slide_up(sew, offset, 8)
            } else {
                PermInstr::slide_down(sew, offset, 8)
            };
            let case = TestCase {
                index: offset as u64,
                instr,
                ops: Operands::new(old.clone(), src.clone()),
            };
            report.total += 1;
            match check_case(&case, unified.as_ref(), baseline.as_ref(), Some(&mut report)) {
                None => report.passed += 1,
                Some(ce) => fail(&mut report, ce),
            }
        }
    }

    // Decoders: every (s, c) field pair at E=8, 16 and 32.
    for e in [8usize, 16, 32] {
        let w = field_width(e);
        let m = (1u32 << w) - 1;
        for s in 0..=m {
            for c in 0..=m {
                let x = CarrySaveSum::new(s, c, w);
                let got = sad_decode(&x, e).hot_index();
                let value = x.resolve() as usize;
                let want = (value < e).then_some(value);
                report.total += 1;
                if got != want {
                    fail(&mut report, Counterexample::SadDecode {
                        s, c, width: w, range: e, expected: want, actual: got,
                    });
                } else {
                    report.passed += 1;
                }
            }
        }
    }

    report
}

/// The plain-scan oracle for the compress destination transform, with no
/// shared machinery with the carry-save path it checks.
fn scan_dest_oracle(mask: &MaskReg) -> Vec<usize> {
    let e = mask.len();
    (0..e)
        .map(|i| {
            if mask.bit(i) {
                i - (0..i).filter(|&j| !mask.bit(j)).count()
            } else {
                i + (i + 1..e).filter(|&j| mask.bit(j)).count()
            }
        })
        .collect()
}

/// Latency distributions for both units over one campaign's stimuli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatencyAudit {
    pub unified_histogram: BTreeMap<u32, u64>,
    /// Per-kind histograms for the baseline's split datapaths.
    pub baseline_by_kind: BTreeMap<PermKind, BTreeMap<u32, u64>>,
    /// The single latency the unified unit ever showed, if it was single.
    pub unified_constant: Option<u32>,
    /// Whether every baseline compress obeyed overhead + moved-elements,
    /// checked exhaustively over all E=8 masks on top of the campaign.
    pub compress_law_exact: bool,
}

impl LatencyAudit {
    pub fn text(&self) -> String {
        let mut s = String::from("unified latency histogram:\n");
        for (&lat, &n) in &self.unified_histogram {
            s.push_str(&format!("  {lat} cycles: {n}\n"));
        }
        match self.unified_constant {
            Some(lat) => s.push_str(&format!("unified latency is constant at {lat} cycles\n")),
            None => s.push_str("unified latency is NOT constant\n"),
        }
        for (kind, hist) in &self.baseline_by_kind {
            s.push_str(&format!("baseline {kind} latency histogram:\n"));
            for (&lat, &n) in hist {
                s.push_str(&format!("  {lat} cycles: {n}\n"));
            }
        }
        s.push_str(&format!(
            "baseline compress latency law (overhead + moved elements): {}\n",
            if self.compress_law_exact { "exact" } else { "VIOLATED" }
        ));
        s
    }

    pub fn porcelain(&self) -> String {
        let mut s = String::new();
        for (&lat, &n) in &self.unified_histogram {
            s.push_str(&format!("latency.unified.{lat}={n}\n"));
        }
        for (kind, hist) in &self.baseline_by_kind {
            for (&lat, &n) in hist {
                s.push_str(&format!("latency.baseline.{kind}.{lat}={n}\n"));
            }
        }
        s.push_str(&format!(
            "latency.unified_constant={}\n",
            self.unified_constant.map_or_else(|| "no".to_string(), |l| l.to_string())
        ));
        s.push_str(&format!("latency.compress_law_exact={}\n", self.compress_law_exact));
        s
    }
}

/// Measures latency behaviour over the campaign's stimuli: the unified
/// unit must not vary, the baseline compress must track its mask.
pub fn latency_audit(config: &CampaignConfig) -> LatencyAudit {
    let unified = match config.fault {
        Some(f) => UnifiedUnit::with_select_swap(config.unit_config(), f),
        None => UnifiedUnit::new(config.unit_config()),
    };
    let baseline = BaselineUnit::new(config.baseline_config());
    let mut unified_histogram = BTreeMap::new();
    let mut baseline_by_kind: BTreeMap<PermKind, BTreeMap<u32, u64>> = BTreeMap::new();
    for index in 0..config.cases {
        let case = gen_case(config.seed, index, config);
        let u = unified.execute(&case.instr, &case.ops).unwrap();
        *unified_histogram.entry(u.latency_cycles).or_insert(0) += 1;
        let b = baseline.execute(&case.instr, &case.ops).unwrap();
        *baseline_by_kind
            .entry(case.instr.kind)
            .or_default()
            .entry(b.latency_cycles)
            .or_insert(0) += 1;
    }
    let unified_constant = match unified_histogram.keys().collect::<Vec<_>>()[..] {
        [&lat] => Some(lat),
        _ => None,
    };

    // Exhaustive check of the compress latency law at E=8.
    let small = BaselineUnit::new(
        BaselineConfig::try_new(64, config.compress_overhead_cycles).unwrap(),
    );
    let src = VectorReg::from_elems(64, ElemWidth::Sew8, &[1, 2, 3, 4, 5, 6, 7, 8]);
    let mut compress_law_exact = true;
    for bits in 0u64..256 {
        for vl in 0..=8usize {
            let mask = MaskReg::from_word(8, bits);
            let instr = PermInstr::compress(ElemWidth::Sew8, vl);
            let ops = Operands::new(VectorReg::zero(64), src.clone()).with_mask(mask.clone());
            let got = small.execute(&instr, &ops).unwrap().latency_cycles;
            let want = config.compress_overhead_cycles + mask.popcount_below(vl) as u32;
            if got != want {
                compress_law_exact = false;
            }
        }
    }

    LatencyAudit { unified_histogram, baseline_by_kind, unified_constant, compress_law_exact }
}
