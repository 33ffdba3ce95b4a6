use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use phasebal::harness::{run_experiment, ExperimentConfig, LabelSource};
use phasebal::io::{
    balance_report, predict_report, read_instances, read_text, parse_branches, Method, ModelFile,
};
use phasebal::{default_spread, reproduce_tables, total_power_loss, GrnnModel};

#[derive(Parser)]
#[command(name = "phasebal", version, about = "Three-phase feeder load balancing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Greedy,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => Method::Exact,
            MethodArg::Greedy => Method::Greedy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelArg {
    Greedy,
    Exact,
}

impl From<LabelArg> for LabelSource {
    fn from(l: LabelArg) -> Self {
        match l {
            LabelArg::Greedy => LabelSource::Greedy,
            LabelArg::Exact => LabelSource::Exact,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve every instance of a CSV file and write a JSON report.
    Balance {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "greedy")]
        method: MethodArg,
    },
    /// Label instances with a solver and store a GRNN model.
    Train {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Kernel width in amperes; defaults to the half-maximum rule.
        #[arg(long)]
        spread: Option<f64>,
        #[arg(long, value_enum, default_value = "greedy")]
        labels: LabelArg,
    },
    /// Predict switching sequences with a stored model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Project invalid predictions onto the nearest balanced assignment.
        #[arg(long)]
        repair: bool,
    },
    /// Run a seeded simulated experiment.
    Experiment {
        /// JSON summary path; a plot-ready CSV is written next to it.
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 400)]
        train_count: usize,
        #[arg(long, default_value_t = 100)]
        test_count: usize,
        #[arg(long, default_value_t = 0)]
        min_a: u32,
        #[arg(long, default_value_t = 120)]
        max_a: u32,
        #[arg(long, default_value_t = 6)]
        n_loads: usize,
        #[arg(long)]
        spread: Option<f64>,
        #[arg(long, value_enum, default_value = "greedy")]
        labels: LabelArg,
        #[arg(long)]
        repair: bool,
    },
    /// Total branch power loss from a r_ohm,p_watt,q_var,v_mag table.
    Loss {
        #[arg(long)]
        input: PathBuf,
    },
    /// Recompute the reference phase-current tables and check them.
    ReproduceTables {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Writes through a temporary file in the target directory so that a failed
/// run never leaves a partial artifact behind.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Balance {
            input,
            output,
            method,
        } => {
            let instances = read_instances(&input)?;
            let report = balance_report(&instances, method.into())?;
            write_atomic(&output, &report.to_json()?)?;
        }
        Command::Train {
            input,
            model,
            spread,
            labels,
        } => {
            let instances = read_instances(&input)?;
            let source = LabelSource::from(labels);
            let labelled = instances
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    source
                        .label(l)
                        .map(|a| (l.clone(), a))
                        .with_context(|| format!("labelling instance {}", i + 1))
                })
                .collect::<Result<Vec<_>>>()?;
            if labelled.iter().any(|(l, _)| l.len() != labelled[0].0.len()) {
                bail!("instances have differing load counts");
            }
            let spread = spread.unwrap_or_else(|| {
                default_spread(&instances.iter().map(|l| l.currents().to_vec()).collect::<Vec<_>>())
            });
            let trained = GrnnModel::train(&labelled, spread)?;
            write_atomic(&model, &ModelFile::from_model(&trained).to_json()?)?;
        }
        Command::Predict {
            model,
            input,
            output,
            repair,
        } => {
            let model = ModelFile::from_json(&read_text(&model)?)?.into_model()?;
            let instances = read_instances(&input)?;
            let report = predict_report(&model, &instances, repair)?;
            write_atomic(&output, &report.to_json()?)?;
        }
        Command::Experiment {
            output,
            table,
            seed,
            train_count,
            test_count,
            min_a,
            max_a,
            n_loads,
            spread,
            labels,
            repair,
        } => {
            let config = ExperimentConfig {
                n_loads,
                train_count,
                test_count,
                current_min: min_a,
                current_max: max_a,
                seed,
                spread,
                label_source: labels.into(),
                repair,
            };
            let started = Instant::now();
            let summary = run_experiment(&config)?;
            let elapsed = started.elapsed();
            let table = table.unwrap_or_else(|| output.with_extension("csv"));
            write_atomic(&table, &summary.plot_table())?;
            write_atomic(&output, &serde_json::to_string_pretty(&summary)?)?;
            let p = &summary.percentages;
            println!(
                "BETTER {:.2}%  SAME {:.2}%  WORSE {:.2}%  FAIL {:.2}%",
                p.better, p.same, p.worse, p.fail
            );
            eprintln!(
                "{} test instances in {:.3} s ({:.3} ms each)",
                config.test_count,
                elapsed.as_secs_f64(),
                1e3 * elapsed.as_secs_f64() / config.test_count as f64
            );
        }
        Command::Loss { input } => {
            let branches = parse_branches(&read_text(&input)?)?;
            println!("{}", total_power_loss(&branches)?);
        }
        Command::ReproduceTables { output } => {
            let report = reproduce_tables()?;
            for case in &report.cases {
                for (name, m) in [("NN", &case.nn), ("HEU", &case.heuristic)] {
                    let sums: Vec<String> = m.phase_sums.iter().map(|a| a.to_string()).collect();
                    let diffs: Vec<String> = m.pairwise_diffs.iter().map(|a| a.to_string()).collect();
                    println!(
                        "{} {:<3} currents {:<15} differences {:<12} {}",
                        case.name,
                        name,
                        sums.join("/"),
                        diffs.join("/"),
                        if m.matches { "ok" } else { "MISMATCH" }
                    );
                }
                println!(
                    "{} greedy max diff {} ({}), exact max diff {}",
                    case.name,
                    case.greedy.max_diff,
                    if case.greedy.matches_heuristic {
                        "matches HEU"
                    } else {
                        "diverges from HEU"
                    },
                    case.exact.max_diff
                );
            }
            if let Some(path) = output {
                write_atomic(&path, &serde_json::to_string_pretty(&report)?)?;
            }
            if !report.passed() {
                bail!("table mismatch:\n  {}", report.mismatches.join("\n  "));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
