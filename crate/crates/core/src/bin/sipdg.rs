use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sipdg::assembly::{assemble_matrix, default_sigma};
use sipdg::dgspace::DgSpace;
use sipdg::experiments::{
    emit_csv, emit_plotdata, run_convergence_with, run_interior, run_wmp_with, wmp_boundary,
    ConvergenceConfig, ConvergenceTable, Domain, Measure, Problem, WMP_PATTERN,
};
use sipdg::mesh::{write_mesh, MeshPattern};
use sipdg::Result;

/// SIPDG solver for the Poisson problem: maximum-principle tables and
/// convergence studies.
#[derive(Parser)]
#[command(name = "sipdg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a uniform mesh in the text format.
    Mesh {
        #[arg(long)]
        domain: Domain,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "diagonal")]
        pattern: MeshPattern,
    },
    /// Extrema over the domain and its boundary with f = 0, g = cos(πx)cos(πy).
    Wmp {
        #[arg(long)]
        domain: Domain,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Penalty parameter; defaults to 10 r².
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value = WMP_PATTERN.name())]
        pattern: MeshPattern,
        /// Also write the system matrix as `i j value` lines.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
    },
    /// Error table on a sequence of uniformly refined meshes.
    Convergence {
        #[arg(long)]
        domain: Domain,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value = "manufactured")]
        problem: Problem,
        /// Resolution of the coarsest level.
        #[arg(long, default_value_t = 2)]
        base_n: usize,
        /// Write (log10 h, log10 L∞ error) pairs and the fitted line.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Convergence on the L-shape with an extra L∞ column on a rectangle.
    Interior {
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
        /// `x0,y0,x1,y1`.
        #[arg(long, value_parser = parse_rect, allow_hyphen_values = true, default_value = "-0.75,0.25,-0.25,0.75")]
        rect: [f64; 4],
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value = "manufactured")]
        problem: Problem,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

fn parse_rect(s: &str) -> std::result::Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated numbers, got {}", v.len()))
}

fn write_plot(table: &ConvergenceTable, plot: Option<PathBuf>, m: Measure) -> Result<()> {
    plot.map_or(Ok(()), |p| emit_plotdata(table, m, &p))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Mesh { domain, n, out, pattern } => {
            let mesh = domain.mesh_with(n, pattern)?;
            write_mesh(&mesh, BufWriter::new(File::create(out)?))
        }
        Command::Wmp { domain, n, degree, sigma, csv, pattern, matrix_out } => {
            let sigma = sigma.unwrap_or_else(|| default_sigma(degree));
            let rep = run_wmp_with(domain, n, degree, sigma, pattern, &wmp_boundary())?;
            emit_csv(&rep, &csv)?;
            if let Some(path) = matrix_out {
                let a = assemble_matrix(&domain.mesh_with(n, pattern)?, &DgSpace::new(degree)?, sigma)?;
                a.write_triplets(BufWriter::new(File::create(path)?))?;
            }
            Ok(())
        }
        Command::Convergence { domain, degree, levels, sigma, csv, problem, base_n, plot } => {
            let sigma = sigma.unwrap_or_else(|| default_sigma(degree));
            let mut cfg = ConvergenceConfig::new(domain, problem, degree, levels, sigma);
            cfg.base_n = base_n;
            let table = run_convergence_with(&cfg)?;
            emit_csv(&table, &csv)?;
            write_plot(&table, plot, Measure::Linf)
        }
        Command::Interior { degree, levels, sigma, rect, csv, problem, plot } => {
            let sigma = sigma.unwrap_or_else(|| default_sigma(degree));
            let table = run_interior(problem, degree, levels, sigma, rect)?;
            emit_csv(&table, &csv)?;
            write_plot(&table, plot, Measure::LinfSubdomain)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.category());
            ExitCode::FAILURE
        }
    }
}
