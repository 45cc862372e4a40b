// Polynomials of degree at most r are reproduced to rounding error.

use sipdg::assembly::default_sigma;
use sipdg::dgspace::{DgSpace, DiscreteFunction};
use sipdg::experiments::{solve_poisson, Domain, Problem};
use sipdg::norms::error_report;

pub fn run_example() -> sipdg::Result<f64> {
    let mut worst: f64 = 0.0;
    for (problem, r) in [
        (Problem::Linear, 1),
        (Problem::HarmonicQuadratic, 2),
        (Problem::Quadratic, 2),
    ] {
        for domain in [Domain::Square, Domain::LShape] {
            let mesh = domain.mesh(4)?;
            let space = DgSpace::new(r)?;
            let data = problem.data(domain);
            let (u, _) =
                solve_poisson(&mesh, &space, &data.source, &data.boundary, default_sigma(r))?;
            let e = error_report(&DiscreteFunction::new(&mesh, &space, &u)?, &data.exact, None)?;
            println!(
                "{problem:>18} r={r} {domain:>6}: linf {:.1e} l2 {:.1e} v2 {:.1e}",
                e.linf, e.l2, e.v2
            );
            worst = worst.max(e.linf).max(e.l2).max(e.v2);
        }
    }
    Ok(worst)
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
