//! Acceptance gate: the release criteria for the modelled units, one
//! test per criterion. Each check states its own tolerance; a clean run
//! of this target is the definition of done for the simulator.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use permsim_core::{
    build_dest_indices_compress, count_ones_high_to_low, count_zeros_low_to_high, field_width,
    golden_execute, latency_audit, reproduce, run_differential, sad_decode, BaselineConfig,
    BaselineUnit, CampaignConfig, CarrySaveSum, Counterexample, ElemWidth, MaskReg, Operands,
    PermInstr, PermKind, UnifiedUnit, UnitConfig, VectorReg, WireSwap,
};

/// Counting oracle for the compress destination transform: plain scans,
/// no carry-save arithmetic anywhere.
fn scan_dest_oracle(mask: &MaskReg) -> Vec<usize> {
    let e = mask.len();
    (0..e)
        .map(|i| {
            if mask.bit(i) {
                (0..i).filter(|&j| mask.bit(j)).count()
            } else {
                i + (i + 1..e).filter(|&j| mask.bit(j)).count()
            }
        })
        .collect()
}

fn is_permutation(dest: &[usize]) -> bool {
    let mut seen = vec![false; dest.len()];
    for &d in dest {
        if d >= dest.len() || seen[d] {
            return false;
        }
        seen[d] = true;
    }
    true
}

#[test]
fn criterion_1_differential_campaign_100k_cases() {
    let started = Instant::now();
    let config = CampaignConfig::new(1, 100_000);
    let report = run_differential(&config);
    let elapsed = started.elapsed();

    assert_eq!(report.total, 100_000);
    assert_eq!(report.failed, 0, "first failure:\n{}", report.text());
    assert!(report.all_passed());
    let mut missing = Vec::new();
    for kind in PermKind::ALL {
        for sew in ElemWidth::ALL {
            if report.coverage.get(&(kind, sew.bits())).copied().unwrap_or(0) == 0 {
                missing.push(format!("{kind}/{sew}"));
            }
        }
    }
    assert!(missing.is_empty(), "uncovered kind x sew combos: {missing:?}");
    assert!(
        elapsed.as_secs() < 120,
        "campaign took {elapsed:?}, budget is 120s"
    );
    println!(
        "criterion 1: pass ({} cases, 12/12 kind x sew combos, {elapsed:?})",
        report.total
    );
}

#[test]
fn criterion_2_exhaustive_compress_all_masks() {
    let started = Instant::now();

    // E=8, vlen=64: every mask, both units, transform and full register.
    let cfg8 = UnitConfig::try_new(64, 1, 1).unwrap();
    let unified8 = UnifiedUnit::new(cfg8);
    let baseline8 = BaselineUnit::new(BaselineConfig::try_new(64, 1).unwrap());
    let sew = ElemWidth::Sew8;
    let src8 = VectorReg::from_elems(64, sew, &[0xa0, 0xa1, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7]);
    let old8 = VectorReg::from_elems(64, sew, &[0x50, 0x51, 0x52, 0x53, 0x54, 0x55, 0x56, 0x57]);
    for bits in 0u64..256 {
        let mask = MaskReg::from_word(8, bits);
        let dest = build_dest_indices_compress(&mask);
        assert!(is_permutation(&dest), "mask {bits:#010b}: transform not a permutation: {dest:?}");
        assert_eq!(dest, scan_dest_oracle(&mask), "mask {bits:#010b}");

        let instr = PermInstr::compress(sew, 8);
        let ops = Operands::new(old8.clone(), src8.clone()).with_mask(mask);
        let want = golden_execute(&instr, &ops).unwrap();
        assert_eq!(unified8.execute(&instr, &ops).unwrap().value, want, "mask {bits:#010b}");
        assert_eq!(baseline8.execute(&instr, &ops).unwrap().value, want, "mask {bits:#010b}");
    }

    // E=16, vlen=128: every one of the 65536 masks against the golden model.
    let cfg16 = UnitConfig::try_new(128, 1, 1).unwrap();
    let unified16 = UnifiedUnit::new(cfg16);
    let elems16: Vec<u64> = (0..16).map(|i| 0xa0 + i).collect();
    let olds16: Vec<u64> = (0..16).map(|i| 0x50 + i).collect();
    let src16 = VectorReg::from_elems(128, sew, &elems16);
    let old16 = VectorReg::from_elems(128, sew, &olds16);
    for bits in 0u64..65_536 {
        let mask = MaskReg::from_word(16, bits);
        let dest = build_dest_indices_compress(&mask);
        assert!(is_permutation(&dest), "mask {bits:#018b}: transform not a permutation");
        assert_eq!(dest, scan_dest_oracle(&mask), "mask {bits:#018b}");

        let instr = PermInstr::compress(sew, 16);
        let ops = Operands::new(old16.clone(), src16.clone()).with_mask(mask);
        let want = golden_execute(&instr, &ops).unwrap();
        assert_eq!(unified16.execute(&instr, &ops).unwrap().value, want, "mask {bits:#018b}");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "compress sweeps took {elapsed:?}, budget is 60s");
    println!("criterion 2: pass (256 + 65536 masks, {elapsed:?})");
}

#[test]
fn criterion_3_sad_decoders_exhaustive() {
    let mut pairs = 0u64;
    for e in [8usize, 16, 32] {
        let w = field_width(e);
        let m = (1u32 << w) - 1;
        for s in 0..=m {
            for c in 0..=m {
                let x = CarrySaveSum::new(s, c, w);
                let resolved = x.resolve() as usize;
                let want = (resolved < e).then_some(resolved);
                let got = sad_decode(&x, e).hot_index();
                assert_eq!(got, want, "s={s} c={c} width={w} range={e}");
                pairs += 1;
            }
        }
    }
    assert_eq!(pairs, 1024 + 4096 + 16384);
    println!("criterion 3: pass ({pairs} decoder input pairs over E=8/16/32)");
}

#[test]
fn criterion_4_prefix_counters_match_scans() {
    // Every mask at E=8.
    for bits in 0u64..256 {
        let mask = MaskReg::from_word(8, bits);
        let zeros = count_zeros_low_to_high(&mask);
        let ones = count_ones_high_to_low(&mask);
        for i in 0..8 {
            let want_zeros = (0..i).filter(|&j| !mask.bit(j)).count() as u32;
            let want_ones = (i + 1..8).filter(|&j| mask.bit(j)).count() as u32;
            assert_eq!(zeros[i].resolve(), want_zeros, "mask {bits:#010b} zeros[{i}]");
            assert_eq!(ones[i].resolve(), want_ones, "mask {bits:#010b} ones[{i}]");
        }
    }

    // Random sampling at E=32, where the field is 7 bits wide.
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    for trial in 0..10_000 {
        let mask = MaskReg::from_bits((0..32).map(|_| rng.random()).collect());
        let zeros = count_zeros_low_to_high(&mask);
        let ones = count_ones_high_to_low(&mask);
        for i in 0..32 {
            let want_zeros = (0..i).filter(|&j| !mask.bit(j)).count() as u32;
            let want_ones = (i + 1..32).filter(|&j| mask.bit(j)).count() as u32;
            assert_eq!(zeros[i].resolve(), want_zeros, "trial {trial} zeros[{i}]");
            assert_eq!(ones[i].resolve(), want_ones, "trial {trial} ones[{i}]");
        }
    }
    println!("criterion 4: pass (256 exhaustive E=8 masks, 10000 random E=32 masks)");
}

#[test]
fn criterion_5_latency_is_fixed_and_lawful() {
    for stages in [1u32, 2] {
        let config = CampaignConfig {
            pipeline_stages: stages,
            ..CampaignConfig::new(5, 2_000)
        };
        let audit = latency_audit(&config);
        assert_eq!(
            audit.unified_histogram.len(),
            1,
            "stages={stages}: unified latency histogram has several buckets: {:?}",
            audit.unified_histogram
        );
        assert_eq!(audit.unified_constant, Some(stages), "stages={stages}");
        assert!(audit.compress_law_exact, "stages={stages}: baseline compress law violated");
        let compress_hist = &audit.baseline_by_kind[&PermKind::Compress];
        assert!(
            compress_hist.len() > 1,
            "baseline compress latency should vary with the mask: {compress_hist:?}"
        );
    }
    println!("criterion 5: pass (unified constant at stages 1 and 2, compress law exact)");
}

#[test]
fn criterion_6_structural_scaling_by_granule() {
    let reports: Vec<_> = [(1usize, 32usize), (2, 16), (4, 8)]
        .into_iter()
        .map(|(gmin, granules)| {
            let r = UnitConfig::try_new(256, gmin, 1).unwrap().structural_report();
            assert_eq!(r.granules, granules, "gmin={gmin}");
            assert_eq!(r.select_bits, granules * granules, "gmin={gmin}");
            assert_eq!(r.sad_instances, granules, "gmin={gmin}");
            assert_eq!(r.counter_cells, 2 * (granules - 1), "gmin={gmin}");
            r
        })
        .collect();
    assert_eq!(reports[0].select_bits, 1024);
    assert_eq!(reports[1].select_bits, 256);
    assert_eq!(reports[2].select_bits, 64);
    let base = reports[0].select_bits as f64;
    assert_eq!(reports[1].select_bits as f64 / base, 0.25);
    assert_eq!(reports[2].select_bits as f64 / base, 0.0625);
    println!("criterion 6: pass (select bits 1024/256/64, ratios 0.25 and 0.0625)");
}

#[test]
fn criterion_7_bundled_traces_drive_the_cli() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("traces");
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("reading {}: {e}", dir.display()))
        .map(|entry| entry.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".trace"))
        .collect();
    names.sort();

    let positives: Vec<&String> =
        names.iter().filter(|n| !n.starts_with("negative")).collect();
    let negatives: Vec<&String> =
        names.iter().filter(|n| n.starts_with("negative")).collect();
    assert!(positives.len() >= 20, "only {} positive traces bundled", positives.len());
    assert!(!negatives.is_empty(), "no negative trace bundled");

    // The positive set must cover the full kind x sew x mask-policy matrix.
    let covered: BTreeSet<&str> = positives.iter().map(|n| n.trim_end_matches(".trace")).collect();
    for kind in PermKind::ALL {
        for sew in ElemWidth::ALL {
            let unmasked = format!("{}_sew{}_unmasked", kind.name(), sew.bits());
            assert!(covered.contains(unmasked.as_str()), "missing trace {unmasked}");
            if kind != PermKind::Compress {
                let masked = format!("{}_sew{}_masked", kind.name(), sew.bits());
                assert!(covered.contains(masked.as_str()), "missing trace {masked}");
            }
        }
    }

    for name in &names {
        let status = Command::new(env!("CARGO_BIN_EXE_permsim"))
            .arg("--trace")
            .arg(dir.join(name))
            .output()
            .unwrap_or_else(|e| panic!("spawning permsim for {name}: {e}"));
        let expect_pass = !name.starts_with("negative");
        assert_eq!(
            status.status.success(),
            expect_pass,
            "{name}: exit {:?}\n{}",
            status.status.code(),
            String::from_utf8_lossy(&status.stdout)
        );
    }
    println!(
        "criterion 7: pass ({} positive traces exit 0, {} negative exits nonzero)",
        positives.len(),
        negatives.len()
    );
}

#[test]
fn criterion_8_fault_injection_is_caught_and_reproducible() {
    let fault = WireSwap { a: (0, 0), b: (0, 1) };
    let config = CampaignConfig { fault: Some(fault), ..CampaignConfig::new(9, 2_000) };
    let report = run_differential(&config);
    assert!(report.failed > 0, "a swapped select wire went unnoticed");
    let ce = report.first_failure.as_ref().expect("failures must produce a counterexample");
    assert!(
        matches!(ce, Counterexample::Exec { .. }),
        "expected an execution counterexample, got:\n{ce}"
    );
    assert!(reproduce(&config, ce), "shrunk counterexample did not reproduce");

    let clean = CampaignConfig { fault: None, ..config };
    let clean_report = run_differential(&clean);
    assert_eq!(clean_report.failed, 0, "clean build failed:\n{}", clean_report.text());

    println!(
        "criterion 8: pass ({}/{} faulty cases caught, counterexample reproduces, clean run 0 failures)",
        report.failed, report.total
    );
}
