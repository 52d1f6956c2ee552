use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use leo_snapshot::report::{delay_csv, write_artifacts};
use leo_snapshot::{
    analytic_summary, bundled_scenario, grazing_theta_max_deg, load_scenario, run_compare, run_scenario,
    EqualTimeDelta, Method, RunOptions, ScenarioConfig, Trigger, VisibilityModel,
};

/// Snapshot partitioning and link reassignment for polar LEO constellations.
#[derive(Parser)]
#[command(name = "leo-snapshot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form snapshot count, duration and link counts (no simulation).
    Analyze {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Build the snapshot sequences, validate them and export CSV/JSON.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Run the ground-to-ground delay experiment.
    Route {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Full pipeline: partitions, validation, utilization, delays, reports.
    Compare {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file.
    #[arg(long, short = 's', conflicts_with = "preset")]
    scenario: Option<PathBuf>,
    /// Bundled scenario (iridium, teledesic); iridium when nothing is given.
    #[arg(long)]
    preset: Option<String>,
    /// Polar border latitude(s) in degrees.
    #[arg(long = "polar-border", short = 'l', value_delimiter = ',')]
    polar_border: Vec<f64>,
    /// Partition method(s): reassignment, fixed, equal_time.
    #[arg(long, short = 'm', value_delimiter = ',')]
    method: Vec<Method>,
    #[arg(long)]
    trigger: Option<Trigger>,
    /// Equal-time interval in seconds (default: match the reassignment interval).
    #[arg(long)]
    equal_time_delta: Option<f64>,
    /// Force 90° inclination.
    #[arg(long)]
    ideal_polar: bool,
    /// Validator sampling step in seconds.
    #[arg(long)]
    validation_step: Option<f64>,
    /// Delay experiment length in seconds.
    #[arg(long)]
    duration: Option<f64>,
    /// Delay experiment send interval in seconds.
    #[arg(long)]
    interval: Option<f64>,
    /// Output directory.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

impl ScenarioArgs {
    fn resolve(&self) -> Result<ScenarioConfig> {
        let mut cfg = match (&self.scenario, &self.preset) {
            (Some(path), _) => load_scenario(path)?,
            (None, Some(name)) => bundled_scenario(name).with_context(|| format!("unknown preset `{name}`"))?,
            (None, None) => bundled_scenario("iridium").expect("bundled"),
        };
        if !self.polar_border.is_empty() {
            if let Some(bad) = self.polar_border.iter().find(|l| !(**l > 0.0 && **l < 90.0)) {
                bail!("--polar-border {bad} is outside (0, 90)");
            }
            cfg.polar_borders_deg = self.polar_border.clone();
        }
        if !self.method.is_empty() {
            let mut methods = self.method.clone();
            methods.sort();
            methods.dedup();
            cfg.methods = methods;
        }
        if let Some(t) = self.trigger {
            cfg.trigger = t;
        }
        if let Some(d) = self.equal_time_delta {
            if !(d > 0.0) {
                bail!("--equal-time-delta must be positive");
            }
            cfg.equal_time_delta = EqualTimeDelta::Seconds(d);
        }
        if self.ideal_polar {
            cfg.constellation.ideal_polar = true;
        }
        for (flag, value, slot) in [
            ("--validation-step", self.validation_step, &mut cfg.validation_step_s),
            ("--duration", self.duration, &mut cfg.ground.duration_s),
            ("--interval", self.interval, &mut cfg.ground.interval_s),
        ] {
            if let Some(v) = value {
                if !(v > 0.0) {
                    bail!("{flag} must be positive");
                }
                *slot = v;
            }
        }
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        Ok(cfg)
    }
}

fn analyze(cfg: &ScenarioConfig, json: bool) -> Result<()> {
    let spec = &cfg.constellation;
    let mut rows = Vec::new();
    for &l in &cfg.polar_borders_deg {
        rows.push(analytic_summary(spec, l)?);
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
        return Ok(());
    }
    let vis = VisibilityModel::new(spec, cfg.polar_borders_deg[0]).ok();
    println!(
        "{}: N={} M={} T={:.2} s, theta_max={:.2}°, horizontal survival latitude {}",
        spec.name,
        spec.plane_count,
        spec.sats_per_plane,
        spec.period(),
        grazing_theta_max_deg(spec),
        match vis {
            Some(v) if v.horizontal_survival_deg > 0.0 => format!("{:.2}°", v.horizontal_survival_deg),
            Some(_) => "none (always in range)".to_string(),
            None => "n/a".to_string(),
        }
    );
    println!("{:<6} {:>4} {:>10} {:>7} {:>6} {:>10} {:>5}", "L_pa", "S", "delta_s", "NLS_npa", "NISL", "oblique", "horiz");
    for r in rows {
        println!(
            "{:<6} {:>4} {:>10.2} {:>7} {:>6} {:>10} {:>5}",
            r.polar_border_deg, r.s_reassign, r.delta_reassign_s, r.nls_npa, r.nisl_reassign, r.nisl_oblique, r.nisl_horizontal
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Analyze { scenario, json } => {
            analyze(&scenario.resolve()?, json)?;
            Ok(true)
        }
        Command::Simulate { scenario } => {
            let cfg = scenario.resolve()?;
            let cmp = run_scenario(
                &cfg,
                RunOptions {
                    delays: false,
                    validation_step_s: Some(cfg.validation_step_s),
                },
            )?;
            let written = write_artifacts(&cmp, &cfg.polar_borders_deg, &cfg.output_dir)?;
            print!("{}", cmp.report.summary_text());
            eprintln!("wrote {} files to {}", written.len(), cfg.output_dir.display());
            Ok(cmp.report.validation_passed)
        }
        Command::Route { scenario } => {
            let cfg = scenario.resolve()?;
            let cmp = run_scenario(
                &cfg,
                RunOptions {
                    delays: true,
                    validation_step_s: None,
                },
            )?;
            let series: Vec<_> = cmp.runs.iter().filter_map(|r| r.delay.as_ref()).collect();
            std::fs::create_dir_all(&cfg.output_dir)
                .with_context(|| format!("creating {}", cfg.output_dir.display()))?;
            let path = cfg.output_dir.join("delays.csv");
            std::fs::write(&path, delay_csv(series.iter().copied())?)
                .with_context(|| format!("writing {}", path.display()))?;
            println!("{:<6} {:<13} {:>9} {:>12} {:>11}", "L_pa", "method", "samples", "avg_delay_ms", "unreachable");
            for s in &series {
                println!(
                    "{:<6} {:<13} {:>9} {:>12} {:>11.4}",
                    s.polar_border_deg,
                    s.method.as_str(),
                    s.samples.len(),
                    s.average_delay_s.map_or("-".to_string(), |d| format!("{:.3}", d * 1e3)),
                    s.unreachable_fraction
                );
            }
            eprintln!("wrote {}", path.display());
            Ok(true)
        }
        Command::Compare { scenario } => {
            let cfg = scenario.resolve()?;
            let cmp = run_compare(&cfg)?;
            let written = write_artifacts(&cmp, &cfg.polar_borders_deg, &cfg.output_dir)?;
            print!("{}", cmp.report.summary_text());
            eprintln!("wrote {} files to {}", written.len(), cfg.output_dir.display());
            Ok(cmp.report.validation_passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: internal validation failed (see summary)");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
