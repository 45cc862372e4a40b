// Symmetry, positive definiteness and the discrete integration-by-parts
// identity of the SIPDG matrix, plus what happens when the penalty is too
// small.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sipdg::assembly::{assemble_matrix, default_sigma, integration_by_parts_defect};
use sipdg::dgspace::DgSpace;
use sipdg::experiments::Domain;
use sipdg::linsolve::{solve, SolveOptions};

pub fn run_example() -> sipdg::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for domain in [Domain::Square, Domain::LShape] {
        for r in 1..=2 {
            let mesh = domain.mesh(4)?;
            let space = DgSpace::new(r)?;
            let sigma = default_sigma(r);
            let a = assemble_matrix(&mesh, &space, sigma)?;
            let b: Vec<f64> = (0..a.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let (_, rep) = solve(&a, &b, &SolveOptions::direct())?;
            let mut ibp: f64 = 0.0;
            for _ in 0..20 {
                let u: Vec<f64> = (0..a.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let v: Vec<f64> = (0..a.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                ibp = ibp.max(integration_by_parts_defect(&mesh, &space, &u, &v)?);
            }
            println!(
                "{domain} r={r} dofs={} nnz={} symmetry={:e} cholesky residual={:.1e} ibp defect={:.1e}",
                a.dim(),
                a.nnz(),
                a.symmetry_defect(),
                rep.relative_residual,
                ibp
            );
        }
    }

    let mesh = Domain::Square.mesh(4)?;
    let space = DgSpace::new(1)?;
    let a = assemble_matrix(&mesh, &space, 0.1)?;
    let b = vec![1.0; a.dim()];
    match solve(&a, &b, &SolveOptions::direct()) {
        Ok(_) => println!("sigma = 0.1: factorization succeeded"),
        Err(e) => println!("sigma = 0.1: {} ({e})", e.category()),
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
