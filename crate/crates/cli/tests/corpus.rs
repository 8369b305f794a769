//! Bundled trace corpus: deterministic generation plus drift checks.
//!
//! The files under traces/ are exactly what `corpus_entries` produces.
//! `committed_corpus_matches_generator` fails when either side drifts;
//! regenerate with `cargo test -p permsim-cli --test corpus -- --ignored`.

use std::fs;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use permsim_core::{
    golden_execute, parse_trace, print_trace, run_trace, BaselineConfig, Directive, ElemWidth,
    MaskName, MaskReg, Operands, PermInstr, PermKind, RegName, TraceLine, UnitChoice, UnitConfig,
    VectorReg,
};

const VLEN: usize = 256;

pub fn traces_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("traces")
}

fn random_reg(rng: &mut ChaCha8Rng) -> VectorReg {
    VectorReg::from_bytes((0..VLEN / 8).map(|_| rng.random()).collect())
}

/// Gather indices draw from [0, 2E) so roughly half land out of range.
fn random_idx(rng: &mut ChaCha8Rng, sew: ElemWidth) -> VectorReg {
    let e = VLEN / sew.bits();
    let elems: Vec<u64> = (0..e).map(|_| rng.random_range(0..2 * e as u64)).collect();
    VectorReg::from_elems(VLEN, sew, &elems)
}

fn random_bits(rng: &mut ChaCha8Rng, e: usize) -> Vec<bool> {
    (0..e).map(|_| rng.random()).collect()
}

/// Builds one scripted round: extends `lines` with the per-round operand
/// updates, the exec and its expect, and returns the architected result.
#[allow(clippy::too_many_arguments)]
fn push_round(
    lines: &mut Vec<TraceLine>,
    rng: &mut ChaCha8Rng,
    kind: PermKind,
    sew: ElemWidth,
    masked: bool,
    vl: usize,
    offset: usize,
    old_dest: &VectorReg,
    src: &VectorReg,
) -> VectorReg {
    let e = VLEN / sew.bits();
    let mut push = |d: Directive| lines.push(TraceLine { line: lines.len() + 1, directive: d });

    let idx = random_idx(rng, sew);
    let mask_bits = random_bits(rng, e);
    let v0_bits = random_bits(rng, e);
    if kind == PermKind::Gather {
        push(Directive::SetReg { name: RegName::Idx, value: idx.clone() });
    }
    if kind == PermKind::Compress {
        push(Directive::SetMask { name: MaskName::Mask, bits: mask_bits.clone() });
    }
    if masked {
        push(Directive::SetMask { name: MaskName::V0, bits: v0_bits.clone() });
    }

    let mut instr = match kind {
        PermKind::Gather => PermInstr::gather(sew, vl),
        PermKind::Compress => PermInstr::compress(sew, vl),
        PermKind::SlideUp => PermInstr::slide_up(sew, offset, vl),
        PermKind::SlideDown => PermInstr::slide_down(sew, offset, vl),
    };
    if masked {
        instr = instr.masked();
    }

    // Mirror what the trace machine hands the units for this directive mix.
    let mask = if kind == PermKind::Compress {
        MaskReg::from_bits(mask_bits)
    } else {
        MaskReg::zeros(e)
    };
    let v0 = if masked { MaskReg::from_bits(v0_bits) } else { MaskReg::ones(e) };
    let ops = Operands::new(old_dest.clone(), src.clone())
        .with_idx(idx)
        .with_mask(mask)
        .with_v0(v0);
    let result = golden_execute(&instr, &ops).expect("corpus scripts stay architecturally legal");

    push(Directive::Exec(instr));
    push(Directive::Expect { value: result.clone() });
    result
}

/// Text of one positive trace: two chained exec/expect rounds so the
/// second round reads the first round's writeback as its old dest.
fn positive_trace(kind: PermKind, sew: ElemWidth, masked: bool) -> String {
    let seed = 0x5EED_0000
        + 0x100 * PermKind::ALL.iter().position(|&k| k == kind).unwrap() as u64
        + 2 * sew.bits() as u64
        + masked as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = VLEN / sew.bits();

    let old_dest = random_reg(&mut rng);
    let src = random_reg(&mut rng);
    let mut lines = vec![
        TraceLine {
            line: 1,
            directive: Directive::SetCfg { vlen: Some(VLEN), gmin: Some(1), stages: None },
        },
        TraceLine { line: 2, directive: Directive::SetReg { name: RegName::Dest, value: old_dest.clone() } },
        TraceLine { line: 3, directive: Directive::SetReg { name: RegName::Src, value: src.clone() } },
    ];

    // Round one runs at full length, round two with a short tail and a
    // fresh offset so both merge paths show up in every file.
    let off1 = rng.random_range(0..=e / 2);
    let mid = push_round(&mut lines, &mut rng, kind, sew, masked, e, off1, &old_dest, &src);
    let vl2 = rng.random_range(1..e);
    let off2 = rng.random_range(0..=e);
    push_round(&mut lines, &mut rng, kind, sew, masked, vl2, off2, &mid, &src);

    format!(
        "# {} sew={} {}; generated by tests/corpus.rs, do not edit\n{}",
        kind.name(),
        sew.bits(),
        if masked { "masked" } else { "unmasked" },
        print_trace(&lines)
    )
}

/// Flips the leading digit of the last expect literal so the trace still
/// parses but must fail its final check.
fn corrupt_last_expect(text: &str) -> String {
    let at = text.rfind("expect 0x").expect("positive traces end in an expect") + "expect 0x".len();
    let old = text.as_bytes()[at];
    let new = if old == b'f' { '0' } else { 'f' };
    let mut out = String::with_capacity(text.len());
    out.push_str(&text[..at]);
    out.push(new);
    out.push_str(&text[at + 1..]);
    out
}

/// Every bundled trace as (file name, exact contents).
pub fn corpus_entries() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for kind in PermKind::ALL {
        for sew in ElemWidth::ALL {
            for masked in [false, true] {
                if masked && kind == PermKind::Compress {
                    continue;
                }
                let name = format!(
                    "{}_sew{}_{}.trace",
                    kind.name(),
                    sew.bits(),
                    if masked { "masked" } else { "unmasked" }
                );
                out.push((name, positive_trace(kind, sew, masked)));
            }
        }
    }
    let bad = corrupt_last_expect(&positive_trace(PermKind::Gather, ElemWidth::Sew8, false));
    out.push(("negative_bad_expect.trace".into(), bad));
    out
}

#[test]
fn corpus_has_the_full_matrix() {
    let entries = corpus_entries();
    assert_eq!(entries.len(), 22);
    let positives: Vec<_> =
        entries.iter().filter(|(n, _)| !n.starts_with("negative")).collect();
    assert_eq!(positives.len(), 21);
    for kind in PermKind::ALL {
        for sew in ElemWidth::ALL {
            let stem = format!("{}_sew{}", kind.name(), sew.bits());
            assert!(
                positives.iter().any(|(n, _)| *n == format!("{stem}_unmasked.trace")),
                "missing {stem} unmasked"
            );
            let want_masked = kind != PermKind::Compress;
            assert_eq!(
                positives.iter().any(|(n, _)| *n == format!("{stem}_masked.trace")),
                want_masked,
                "masked coverage wrong for {stem}"
            );
        }
    }
}

#[test]
fn committed_corpus_matches_generator() {
    for (name, want) in corpus_entries() {
        let path = traces_dir().join(&name);
        let got = fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("reading {}: {e}; regenerate with write_corpus", path.display()));
        assert_eq!(
            got, want,
            "{name} drifted from the generator; regenerate with write_corpus"
        );
    }
}

#[test]
fn corpus_traces_run_as_intended() {
    let unit_cfg = UnitConfig::try_new(VLEN, 1, 1).unwrap();
    let baseline_cfg = BaselineConfig::try_new(VLEN, 1).unwrap();
    for (name, text) in corpus_entries() {
        let lines = parse_trace(&text, VLEN).unwrap_or_else(|e| panic!("{name}: {e}"));
        let report = run_trace(&lines, UnitChoice::Both, unit_cfg, baseline_cfg)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(report.expects, 2, "{name} should check both rounds");
        if name.starts_with("negative") {
            assert!(!report.all_passed(), "{name} must fail its corrupted expect");
        } else {
            assert!(report.all_passed(), "{name} failed:\n{}", report.text());
        }
    }
}

/// Writes the corpus to traces/. Ignored so a normal test run never
/// touches the tree; run it after changing the generator.
#[test]
#[ignore]
fn write_corpus() {
    let dir = traces_dir();
    fs::create_dir_all(&dir).unwrap();
    for (name, text) in corpus_entries() {
        fs::write(dir.join(&name), text).unwrap();
    }
}
