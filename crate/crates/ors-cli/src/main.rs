//! Batch experiment runner for the ORS optimizer and its baselines.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use ors_core::campaign::{self, CampaignConfig};
use ors_core::stats;

/// Environment variable overriding the configured output directory.
const OUTPUT_DIR_VAR: &str = "ORS_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "ors",
    version,
    about = "Run seeded optimization campaigns and statistical comparisons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a campaign described by a JSON config file.
    Run {
        /// Path to the campaign configuration (JSON).
        #[arg(long)]
        config: PathBuf,
    },
    /// List the available problem ids.
    ListProblems,
    /// List the available algorithm ids.
    ListAlgorithms,
    /// Two-sided Wilcoxon signed-rank test between two paired value files.
    ///
    /// Each file holds one value per line (a trailing CSV column is
    /// used when lines have several fields; a non-numeric first line
    /// is treated as a header).
    Wilcoxon {
        /// First sample (CSV).
        #[arg(long)]
        a: PathBuf,
        /// Second sample (CSV).
        #[arg(long)]
        b: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { config } => run(config),
        Command::ListProblems => {
            for (id, description) in campaign::list_problems() {
                println!("{id}\t{description}");
            }
            Ok(())
        }
        Command::ListAlgorithms => {
            for (id, description) in campaign::list_algorithms() {
                println!("{id}\t{description}");
            }
            Ok(())
        }
        Command::Wilcoxon { a, b } => wilcoxon(a, b),
    }
}

fn run(config_path: PathBuf) -> Result<()> {
    let raw = fs::read_to_string(&config_path)
        .with_context(|| format!("reading config {}", config_path.display()))?;
    let mut config: CampaignConfig =
        serde_json::from_str(&raw).context("parsing campaign config")?;
    if let Ok(dir) = std::env::var(OUTPUT_DIR_VAR) {
        config.output_dir = PathBuf::from(dir);
    }

    let result = campaign::run_campaign(&config)?;

    println!(
        "campaign complete: {} cells x {} runs, reports in {}",
        result.cells.len(),
        config.runs,
        config.output_dir.display()
    );
    println!("algorithm problem mean std best worst");
    for cell in &result.cells {
        println!(
            "{} {} {:.6e} {:.6e} {:.6e} {:.6e}",
            cell.algorithm, cell.problem, cell.mean, cell.std, cell.best, cell.worst
        );
    }
    for row in &result.wilcoxon {
        println!(
            "wilcoxon {} vs {}: W={} p={:.6e} n={} ({})",
            result.config.algorithms[0].id(),
            row.baseline,
            row.w,
            row.p_value,
            row.n_effective,
            row.method
        );
    }
    Ok(())
}

fn wilcoxon(a: PathBuf, b: PathBuf) -> Result<()> {
    let sample_a = read_values(&a)?;
    let sample_b = read_values(&b)?;
    let result = stats::wilcoxon_signed_rank(&sample_a, &sample_b)?;
    println!("W = {}", result.statistic_w);
    println!("p_value = {}", result.p_value);
    println!("n_effective = {}", result.n_effective);
    println!("method = {}", result.method);
    Ok(())
}

/// Read one numeric column from a CSV-ish file: last field per line,
/// optional header line, blank lines ignored.
fn read_values(path: &PathBuf) -> Result<Vec<f64>> {
    let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut values = Vec::new();
    for (number, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if values.is_empty() && number == 0 => continue, // header
            Err(_) => bail!(
                "{}:{}: `{field}` is not a number",
                path.display(),
                number + 1
            ),
        }
    }
    if values.is_empty() {
        bail!("{}: no numeric values found", path.display());
    }
    Ok(values)
}
