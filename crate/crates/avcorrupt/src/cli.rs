//! Command-line surface: corruption batch runs, robustness evaluation,
//! manifest validation, the adaptation demo, and the parameter catalog.
//!
//! Exit-code contract: 0 = success, 1 = data failures (failed clips,
//! diverged adaptation), 2 = configuration or schema errors.

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::audio_corrupt::{DCT_BIT_EXPONENTS, SILENCE_FRACTIONS, SnrSchedule};
use crate::av2c::toy::{toy_adapt, ShiftFixture};
use crate::av2c::{io as av2c_io, Av2cConfig, Av2cError};
use crate::catalog::{AudioBranch, CorruptionFamily};
use crate::media::Severity;
use crate::metrics::{aggregate_report, read_eval_log};
use crate::pipeline::{corrupt_dataset, load_dataset_manifest, tree_digest, CorruptionSpec};
use crate::pool::{load_manifest, PoolManifest};
use crate::visual_corrupt::VisualParams;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "avcorrupt",
    version,
    about = "Deterministic co-occurring audio-visual corruptions, robustness reports, and an entropy-weighted adaptation demo"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Corrupt every clip of a dataset manifest over one or all (family, severity) cells.
    Corrupt(CorruptArgs),
    /// Compute a robustness report from clean and corrupted evaluation logs.
    Evaluate(EvaluateArgs),
    /// Validate a pool manifest and/or a dataset manifest without producing output.
    #[command(name = "validate-manifest")]
    ValidateManifest(ValidateArgs),
    /// Run the synthetic-shift adaptation demo and write its trace.
    #[command(name = "av2c-demo")]
    Av2cDemo(DemoArgs),
    /// Print the corruption families and their per-severity parameters.
    Catalog(CatalogArgs),
}

fn parse_family(s: &str) -> Result<CorruptionFamily, String> {
    s.parse::<CorruptionFamily>().map_err(|e| e.to_string())
}

fn parse_severity(s: &str) -> Result<u8, String> {
    let level: u8 = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    Severity::new(level)
        .map(|s| s.level())
        .map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
#[command(group = ArgGroup::new("families").required(true).args(["family", "all_families"]))]
#[command(group = ArgGroup::new("severities").required(true).args(["severity", "all_severities"]))]
pub struct CorruptArgs {
    /// Dataset manifest (JSON) listing clips to corrupt.
    #[arg(long)]
    pub manifest: PathBuf,
    /// One corruption family to apply.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<CorruptionFamily>,
    /// Apply all fifteen families.
    #[arg(long)]
    pub all_families: bool,
    /// One severity level (1-5).
    #[arg(long, value_parser = parse_severity)]
    pub severity: Option<u8>,
    /// Apply all five severities.
    #[arg(long)]
    pub all_severities: bool,
    /// Master seed; all randomness derives from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Noise-pool manifest path, or a directory containing
    /// pool_manifest.json. Without it the built-in pool is synthesized
    /// under <out>/_builtin_pool.
    #[arg(long, env = "AVC_POOL_DIR")]
    pub pool: Option<PathBuf>,
    /// Output root directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Parallel clip workers.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Print a recursive content digest of the output tree.
    #[arg(long)]
    pub digest: bool,
    /// Machine-readable JSON summary on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Clean evaluation log (CSV, family "clean", severity 0).
    #[arg(long)]
    pub clean_log: PathBuf,
    /// Corrupted evaluation log (CSV).
    #[arg(long)]
    pub corrupt_log: PathBuf,
    /// Treat the logs as multilabel and score with mean average precision.
    #[arg(long)]
    pub multilabel: bool,
    /// Write the per-cell report CSV here.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    /// Machine-readable JSON summary on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
#[command(group = ArgGroup::new("targets").required(true).multiple(true).args(["pool", "dataset"]))]
pub struct ValidateArgs {
    /// Pool manifest to validate (eagerly loads every asset).
    #[arg(long)]
    pub pool: Option<PathBuf>,
    /// Dataset manifest to validate.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Machine-readable JSON summary on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct DemoArgs {
    /// Fixture seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Adaptation steps.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Gradient-descent learning rate.
    #[arg(long, default_value_t = 0.1)]
    pub lr: f64,
    /// Batch size of the synthetic stream.
    #[arg(long, default_value_t = 16)]
    pub batch: usize,
    /// Entropy threshold as a fraction of ln(C).
    #[arg(long, default_value_t = 0.4)]
    pub entropy_frac: f64,
    /// Diversity cosine-similarity cutoff. The published default is 0.05;
    /// with the two-class demo that blocks everything after the first
    /// batch, so pass 1.0 to see sustained adaptation.
    #[arg(long, default_value_t = 0.05)]
    pub sim_threshold: f64,
    /// Where to write the per-step trace CSV.
    #[arg(long, default_value = "av2c_trace.csv")]
    pub out_trace: PathBuf,
    /// Machine-readable JSON summary on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    /// Machine-readable JSON catalog on stdout.
    #[arg(long)]
    pub json: bool,
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Corrupt(args) => cmd_corrupt(&args),
        Command::Evaluate(args) => cmd_evaluate(&args),
        Command::ValidateManifest(args) => cmd_validate_manifest(&args),
        Command::Av2cDemo(args) => cmd_av2c_demo(&args),
        Command::Catalog(args) => cmd_catalog(&args),
    }
}

fn resolve_pool(args_pool: &Option<PathBuf>, out: &Path) -> Result<PoolManifest, String> {
    match args_pool {
        Some(path) => {
            let manifest = if path.is_dir() {
                path.join("pool_manifest.json")
            } else {
                path.clone()
            };
            load_manifest(&manifest).map_err(|e| format!("pool manifest: {e}"))
        }
        None => {
            let dir = out.join("_builtin_pool");
            crate::synth::builtin_pool(&dir).map_err(|e| format!("built-in pool: {e}"))
        }
    }
}

fn cmd_corrupt(args: &CorruptArgs) -> i32 {
    let manifest = match load_dataset_manifest(&args.manifest) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: dataset manifest: {e}");
            return EXIT_CONFIG;
        }
    };
    let pool = match resolve_pool(&args.pool, &args.out) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let families: Vec<CorruptionFamily> = match (args.family, args.all_families) {
        (Some(f), false) => vec![f],
        (None, true) => CorruptionFamily::ALL.to_vec(),
        _ => unreachable!("clap group enforces exactly one"),
    };
    let severities: Vec<Severity> = match (args.severity, args.all_severities) {
        (Some(s), false) => vec![Severity::new(s).expect("validated by parser")],
        (None, true) => Severity::ALL.to_vec(),
        _ => unreachable!("clap group enforces exactly one"),
    };

    let mut cells = Vec::new();
    let mut total_ok = 0usize;
    let mut total_failed = 0usize;
    for &family in &families {
        for &severity in &severities {
            let spec = CorruptionSpec {
                family,
                severity,
                master_seed: args.seed,
            };
            match corrupt_dataset(&manifest, &spec, &pool, &args.out, args.workers) {
                Ok(summary) => {
                    total_ok += summary.clips_ok;
                    total_failed += summary.clips_failed;
                    for (clip, reason) in &summary.failures {
                        eprintln!("warn: {family}/{severity} clip {clip}: {reason}");
                    }
                    cells.push((family, severity, summary));
                }
                Err(e) => {
                    eprintln!("error: {family}/{severity}: {e}");
                    return EXIT_DATA;
                }
            }
        }
    }

    let digest = if args.digest {
        match tree_digest(&args.out) {
            Ok(d) => Some(d.to_hex()),
            Err(e) => {
                eprintln!("error: digest: {e}");
                return EXIT_DATA;
            }
        }
    } else {
        None
    };

    if args.json {
        let json_cells: Vec<_> = cells
            .iter()
            .map(|(family, severity, s)| {
                serde_json::json!({
                    "family": family.name(),
                    "severity": severity.level(),
                    "clips_ok": s.clips_ok,
                    "clips_failed": s.clips_failed,
                    "provenance": s.provenance_path,
                })
            })
            .collect();
        let summary = serde_json::json!({
            "cells": json_cells,
            "clips_ok": total_ok,
            "clips_failed": total_failed,
            "digest": digest,
        });
        println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    } else {
        println!("{:<14} {:>8} {:>6} {:>8}", "family", "severity", "ok", "failed");
        for (family, severity, s) in &cells {
            println!(
                "{:<14} {:>8} {:>6} {:>8}",
                family.name(),
                severity.level(),
                s.clips_ok,
                s.clips_failed
            );
        }
        println!("total: {total_ok} ok, {total_failed} failed");
        if let Some(d) = &digest {
            println!("digest: {d}");
        }
    }
    if total_failed > 0 {
        EXIT_DATA
    } else {
        EXIT_OK
    }
}

fn cmd_evaluate(args: &EvaluateArgs) -> i32 {
    let clean = match read_eval_log(&args.clean_log, args.multilabel) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: clean log: {e}");
            return EXIT_CONFIG;
        }
    };
    let corrupt = match read_eval_log(&args.corrupt_log, args.multilabel) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: corrupt log: {e}");
            return EXIT_CONFIG;
        }
    };
    let report = match aggregate_report(&corrupt, &clean) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Some(path) = &args.out_csv {
        if let Err(e) = std::fs::write(path, report.to_csv()) {
            eprintln!("error: writing {}: {e}", path.display());
            return EXIT_DATA;
        }
    }
    let metric_name = if report.multilabel { "mMAP" } else { "mAcc" };
    if args.json {
        let summary = serde_json::json!({
            "clean": report.clean_metric,
            "mean_metric": report.mean_metric,
            "mean_alpha": report.mean_alpha,
            "mean_rho": report.mean_rho,
            "families_covered": report.families_covered,
            "cells": report.cells.iter().map(|c| serde_json::json!({
                "family": c.family,
                "severity": c.severity,
                "metric": c.metric,
                "delta_a": c.delta_a,
                "alpha": c.alpha,
                "rho": c.rho,
                "improved": c.improved,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    } else {
        println!("clean: {:.2}", report.clean_metric);
        println!("{metric_name}: {:.2}", report.mean_metric);
        println!("mean alpha: {:.2}", report.mean_alpha);
        println!("mean rho: {:.2}", report.mean_rho);
        if !report.full_coverage() {
            println!(
                "warning: coverage {}/{}",
                report.families_covered,
                CorruptionFamily::ALL.len()
            );
        }
    }
    EXIT_OK
}

fn cmd_validate_manifest(args: &ValidateArgs) -> i32 {
    let mut report = serde_json::Map::new();
    if let Some(pool_path) = &args.pool {
        match load_manifest(pool_path) {
            Ok(pool) => {
                let families: Vec<_> = pool
                    .families()
                    .map(|(name, assets)| serde_json::json!({ "family": name, "assets": assets.len() }))
                    .collect();
                if !args.json {
                    println!("pool manifest ok: {}", pool_path.display());
                    for (name, assets) in pool.families() {
                        println!("  {name}: {} assets", assets.len());
                    }
                }
                report.insert("pool".into(), serde_json::Value::Array(families));
            }
            Err(e) => {
                eprintln!("error: pool manifest: {e}");
                return EXIT_CONFIG;
            }
        }
    }
    if let Some(dataset_path) = &args.dataset {
        match load_dataset_manifest(dataset_path) {
            Ok(m) => {
                if !args.json {
                    println!("dataset manifest ok: {}", dataset_path.display());
                    println!(
                        "  {} clips, {} classes, multilabel: {}",
                        m.entries.len(),
                        m.class_names.len(),
                        m.multilabel
                    );
                }
                report.insert(
                    "dataset".into(),
                    serde_json::json!({
                        "clips": m.entries.len(),
                        "classes": m.class_names.len(),
                        "multilabel": m.multilabel,
                    }),
                );
            }
            Err(e) => {
                eprintln!("error: dataset manifest: {e}");
                return EXIT_CONFIG;
            }
        }
    }
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Object(report))
                .expect("serializable")
        );
    }
    EXIT_OK
}

fn cmd_av2c_demo(args: &DemoArgs) -> i32 {
    if args.batch == 0 || args.steps == 0 || !args.lr.is_finite() || args.lr < 0.0 {
        eprintln!("error: steps and batch must be positive, lr non-negative");
        return EXIT_CONFIG;
    }
    let fixture = ShiftFixture::generate(args.seed, args.steps, args.batch);
    let cfg = Av2cConfig {
        entropy_threshold: args.entropy_frac * 2f64.ln(),
        sim_threshold: args.sim_threshold,
        ..Av2cConfig::for_classes(2)
    };
    let frozen = fixture.frozen_accuracy();
    let mut head = fixture.head.clone();
    let trace = match toy_adapt(
        &mut head,
        &fixture.batches,
        &fixture.eval_inputs,
        &fixture.eval_labels,
        &cfg,
        args.lr,
        args.steps,
    ) {
        Ok(t) => t,
        Err(e @ Av2cError::DivergedLoss(_)) => {
            eprintln!("error: {e}");
            return EXIT_DATA;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Err(e) = av2c_io::write_trace_csv(&trace, &args.out_trace) {
        eprintln!("error: writing trace: {e}");
        return EXIT_DATA;
    }
    let adapted = trace.last().expect("steps >= 1").accuracy;
    let selected_total: usize = trace.iter().map(|r| r.n_selected).sum();
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "frozen_accuracy": frozen,
                "adapted_accuracy": adapted,
                "selected_total": selected_total,
                "steps": trace.len(),
                "trace": args.out_trace,
            }))
            .expect("serializable")
        );
    } else {
        println!("frozen accuracy:  {frozen:.2}");
        println!("adapted accuracy: {adapted:.2}");
        println!("selected samples: {selected_total}");
        println!("trace: {}", args.out_trace.display());
    }
    EXIT_OK
}

fn cmd_catalog(args: &CatalogArgs) -> i32 {
    let schedule = SnrSchedule::default();
    let visual = VisualParams::default();
    if args.json {
        let families: Vec<_> = CorruptionFamily::ALL
            .iter()
            .map(|f| {
                serde_json::json!({
                    "family": f.name(),
                    "group": f.group().to_string(),
                    "audio": audio_branch_description(*f, &schedule),
                    "visual": visual_description(*f, &visual),
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({ "families": families }))
                .expect("serializable")
        );
        return EXIT_OK;
    }
    println!("{} corruption families, severities 1-5\n", CorruptionFamily::ALL.len());
    for family in CorruptionFamily::ALL {
        println!("{} [{}]", family.name(), family.group());
        println!("  audio:  {}", audio_branch_description(family, &schedule));
        println!("  visual: {}", visual_description(family, &visual));
    }
    EXIT_OK
}

fn audio_branch_description(family: CorruptionFamily, schedule: &SnrSchedule) -> String {
    let snr_row = || {
        Severity::ALL
            .iter()
            .map(|&s| format!("{}dB", schedule.snr_db(s)))
            .collect::<Vec<_>>()
            .join(", ")
    };
    match family.audio_branch() {
        AudioBranch::Additive(kind) => {
            format!("{kind:?} noise mixed at SNR [{}]", snr_row()).to_lowercase()
        }
        AudioBranch::Compression => {
            let levels = DCT_BIT_EXPONENTS
                .iter()
                .map(|c| format!("{} -> 2^{c} levels", c_to_severity(*c)))
                .collect::<Vec<_>>()
                .join(", ");
            format!("block-DCT quantization: {levels}")
        }
        AudioBranch::Overlay => format!("pool overlay mixed at SNR [{}]", snr_row()),
        AudioBranch::Silence => {
            let fractions = SILENCE_FRACTIONS
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            format!("random silencing, fractions [{fractions}]")
        }
    }
}

fn c_to_severity(c: u32) -> u8 {
    1 + DCT_BIT_EXPONENTS.iter().position(|&x| x == c).expect("known exponent") as u8
}

fn visual_description(family: CorruptionFamily, p: &VisualParams) -> String {
    fn row<T: std::fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
        xs.into_iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
    match family {
        CorruptionFamily::Gaussian => format!("additive gaussian, sigma [{}]", row(p.gaussian_sigma)),
        CorruptionFamily::Impulse => format!("salt-and-pepper, amount [{}]", row(p.impulse_amount)),
        CorruptionFamily::Shot => format!("poisson, photons [{}]", row(p.shot_photons)),
        CorruptionFamily::Speckle => format!("multiplicative gaussian, sigma [{}]", row(p.speckle_sigma)),
        CorruptionFamily::Compression => format!("jpeg-style 4:2:0, quality [{}]", row(p.jpeg_quality)),
        CorruptionFamily::Snow => format!(
            "streak layer, coverage [{}], radius [{}]",
            row(p.snow.map(|s| s.coverage)),
            row(p.snow.map(|s| s.blur_radius))
        ),
        CorruptionFamily::Frost => format!(
            "texture blend, keep [{}], texture [{}]",
            row(p.frost.map(|f| f.keep)),
            row(p.frost.map(|f| f.texture))
        ),
        CorruptionFamily::Spatter => format!(
            "liquid blobs, coverage [{}]",
            row(p.spatter.map(|s| s.coverage))
        ),
        CorruptionFamily::Wind => format!("motion blur, radius [{}]", row(p.wind_radius)),
        CorruptionFamily::Rain => format!(
            "tinted streaks, coverage [{}], blend [{}]",
            row(p.rain.map(|r| r.coverage)),
            row(p.rain.map(|r| r.blend))
        ),
        CorruptionFamily::Underwater => format!(
            "red attenuation [{}], contrast [{}], haze [{}]",
            row(p.underwater.map(|u| u.red_attenuation)),
            row(p.underwater.map(|u| u.contrast)),
            row(p.underwater.map(|u| u.haze))
        ),
        CorruptionFamily::Concert => {
            format!("brightness delta [{}]", row(p.brightness_delta))
        }
        CorruptionFamily::Smoke => format!(
            "gray haze, strength [{}]",
            row(p.smoke.map(|s| s.strength))
        ),
        CorruptionFamily::Crowd => format!(
            "occluder area [{}], opacity {}",
            row(p.crowd.map(|c| c.area_fraction)),
            p.crowd[0].opacity
        ),
        CorruptionFamily::Interference => format!(
            "rotation within +-[{}] deg; audio silence [{}]",
            row(p.rotation_bound_deg),
            row(SILENCE_FRACTIONS)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    /// Flags every subcommand must document in its help text.
    const FLAG_REGISTRY: &[(&str, &[&str])] = &[
        (
            "corrupt",
            &[
                "--manifest",
                "--family",
                "--all-families",
                "--severity",
                "--all-severities",
                "--seed",
                "--pool",
                "--out",
                "--workers",
                "--digest",
                "--json",
            ],
        ),
        (
            "evaluate",
            &["--clean-log", "--corrupt-log", "--multilabel", "--out-csv", "--json"],
        ),
        ("validate-manifest", &["--pool", "--dataset", "--json"]),
        (
            "av2c-demo",
            &[
                "--seed",
                "--steps",
                "--lr",
                "--batch",
                "--entropy-frac",
                "--sim-threshold",
                "--out-trace",
                "--json",
            ],
        ),
        ("catalog", &["--json"]),
    ];

    #[test]
    fn help_documents_every_flag() {
        let mut root = Cli::command();
        for (name, flags) in FLAG_REGISTRY {
            let sub = root
                .find_subcommand_mut(name)
                .unwrap_or_else(|| panic!("missing subcommand {name}"));
            let help = sub.render_long_help().to_string();
            for flag in *flags {
                assert!(help.contains(flag), "{name} help lacks {flag}\n{help}");
            }
        }
    }

    #[test]
    fn exactly_five_subcommands() {
        let root = Cli::command();
        let names: Vec<&str> = root.get_subcommands().map(|c| c.get_name()).collect();
        assert_eq!(
            names,
            vec!["corrupt", "evaluate", "validate-manifest", "av2c-demo", "catalog"]
        );
    }

    #[test]
    fn unknown_family_is_a_parse_error_listing_the_set() {
        let err = Cli::try_parse_from([
            "avcorrupt", "corrupt", "--manifest", "m.json", "--family", "fog",
            "--severity", "3", "--out", "o",
        ])
        .unwrap_err();
        let text = err.to_string();
        assert!(text.contains("fog"));
        for family in CorruptionFamily::ALL {
            assert!(text.contains(family.name()), "missing {family}");
        }
    }

    #[test]
    fn family_and_severity_groups_are_required_and_exclusive() {
        assert!(Cli::try_parse_from([
            "avcorrupt", "corrupt", "--manifest", "m", "--severity", "3", "--out", "o",
        ])
        .is_err());
        assert!(Cli::try_parse_from([
            "avcorrupt", "corrupt", "--manifest", "m", "--family", "snow",
            "--all-families", "--severity", "1", "--out", "o",
        ])
        .is_err());
        assert!(Cli::try_parse_from([
            "avcorrupt", "corrupt", "--manifest", "m", "--family", "snow",
            "--severity", "9", "--out", "o",
        ])
        .is_err());
        assert!(Cli::try_parse_from([
            "avcorrupt", "corrupt", "--manifest", "m", "--all-families",
            "--all-severities", "--out", "o",
        ])
        .is_ok());
    }

    #[test]
    fn catalog_text_pins_the_published_rows() {
        let schedule = SnrSchedule::default();
        let compression =
            audio_branch_description(CorruptionFamily::Compression, &schedule);
        assert!(compression.contains("5 -> 2^2 levels"), "{compression}");
        assert!(compression.contains("1 -> 2^24 levels"), "{compression}");

        let visual = VisualParams::default();
        let interference = visual_description(CorruptionFamily::Interference, &visual);
        assert!(interference.contains("35"), "{interference}");
        assert!(interference.contains("0.5"), "{interference}");

        let overlay = audio_branch_description(CorruptionFamily::Snow, &schedule);
        assert!(overlay.contains("40dB") && overlay.contains("0dB"), "{overlay}");
    }

    #[test]
    fn validate_manifest_requires_a_target() {
        assert!(Cli::try_parse_from(["avcorrupt", "validate-manifest"]).is_err());
        assert!(Cli::try_parse_from([
            "avcorrupt", "validate-manifest", "--pool", "p.json"
        ])
        .is_ok());
        assert!(Cli::try_parse_from([
            "avcorrupt", "validate-manifest", "--pool", "p.json", "--dataset", "d.json"
        ])
        .is_ok());
    }
}
