//! permsim: run traces, differential campaigns and structure reports
//! against the modelled permutation units.

use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use permsim_core::{
    latency_audit, parse_trace, run_differential, run_trace, BaselineConfig, CampaignConfig,
    ElemWidth, UnitChoice, UnitConfig,
};

#[derive(Parser)]
#[command(
    name = "permsim",
    about = "Simulate and cross-check vector permutation units",
    after_help = "At least one of --trace, --campaign or --structure must be given.\n\
                  Exit status is nonzero when any expect line or campaign case fails."
)]
struct Args {
    /// Register width in bits.
    #[arg(long, default_value_t = 256)]
    vlen: usize,

    /// Crossbar granule in bytes (1, 2 or 4).
    #[arg(long, default_value_t = 1)]
    gmin: usize,

    /// Unified pipeline depth in cycles (1 or 2).
    #[arg(long, default_value_t = 1)]
    stages: u32,

    /// Which units to run: unified, baseline or both.
    #[arg(long, default_value = "both")]
    unit: String,

    /// Run a trace file.
    #[arg(long, value_name = "FILE")]
    trace: Option<String>,

    /// Run a differential campaign with this many cases.
    #[arg(long, value_name = "N")]
    campaign: Option<u64>,

    /// Campaign seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Print the structural cost counts per granule choice.
    #[arg(long)]
    structure: bool,

    /// Machine-readable key=value output.
    #[arg(long)]
    porcelain: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("permsim: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(args: &Args) -> Result<bool> {
    let units = UnitChoice::from_name(&args.unit)
        .with_context(|| format!("--unit must be unified, baseline or both, got {:?}", args.unit))?;
    let unit_cfg = UnitConfig::try_new(args.vlen, args.gmin, args.stages)?;
    let baseline_cfg = BaselineConfig::try_new(args.vlen, 1)?;
    if args.trace.is_none() && args.campaign.is_none() && !args.structure {
        bail!("nothing to do; pass --trace, --campaign or --structure");
    }

    let mut all_passed = true;

    if args.structure {
        print_structure(args, &unit_cfg);
    }

    if let Some(cases) = args.campaign {
        let config = CampaignConfig {
            seed: args.seed,
            cases,
            vlen: args.vlen,
            gmin: args.gmin,
            pipeline_stages: args.stages,
            compress_overhead_cycles: 1,
            sew_set: ElemWidth::ALL
                .into_iter()
                .filter(|&s| unit_cfg.supports(s))
                .collect(),
            units,
            fault: None,
        };
        let report = run_differential(&config);
        if args.porcelain {
            print!("{}", report.porcelain());
        } else {
            println!(
                "campaign: {} cases, seed {} (vlen={} gmin={} unit={})",
                cases, args.seed, args.vlen, args.gmin, units.name()
            );
            print!("{}", report.text());
            let audit = latency_audit(&config);
            print!("{}", audit.text());
        }
        all_passed &= report.all_passed();
    }

    if let Some(path) = &args.trace {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let lines = parse_trace(&text, args.vlen)?;
        let report = run_trace(&lines, units, unit_cfg, baseline_cfg)?;
        if args.porcelain {
            print!("{}", report.porcelain());
        } else {
            print!("{}", report.text());
        }
        all_passed &= report.all_passed();
    }

    Ok(all_passed)
}

fn print_structure(args: &Args, unit_cfg: &UnitConfig) {
    let reports: Vec<_> = [1usize, 2, 4]
        .into_iter()
        .map(|gmin| UnitConfig::try_new(unit_cfg.vlen, gmin, unit_cfg.pipeline_stages)
            .expect("gmin 1/2/4 are always valid")
            .structural_report())
        .collect();
    let base = reports[0].select_bits as f64;
    if args.porcelain {
        for r in &reports {
            print!(
                "structure.gmin{}.granules={}\nstructure.gmin{}.select_bits={}\n\
                 structure.gmin{}.sad_instances={}\nstructure.gmin{}.counter_cells={}\n",
                r.gmin, r.granules, r.gmin, r.select_bits, r.gmin, r.sad_instances, r.gmin,
                r.counter_cells
            );
            print!(
                "structure.gmin{}.select_ratio={:.4}\n",
                r.gmin,
                r.select_bits as f64 / base
            );
        }
    } else {
        println!("structure vlen={}", unit_cfg.vlen);
        for r in &reports {
            println!("  {r}  (select bits = {:.2}% of gmin=1)", 100.0 * r.select_bits as f64 / base);
        }
    }
}
