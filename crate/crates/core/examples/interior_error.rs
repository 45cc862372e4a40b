// L∞ error on a rectangle away from the re-entrant corner of the L-shape,
// against the global L∞ error, for the smooth and the corner-singular
// harmonic solution.

use sipdg::assembly::default_sigma;
use sipdg::experiments::{
    run_interior, ConvergenceTable, CsvTable, Measure, Problem, DEFAULT_INTERIOR_RECT,
};

pub fn run_example() -> sipdg::Result<Vec<ConvergenceTable>> {
    let r = 1;
    let mut tables = Vec::new();
    for problem in [Problem::Manufactured, Problem::Corner] {
        let table = run_interior(problem, r, 5, default_sigma(r), DEFAULT_INTERIOR_RECT)?;
        println!("{problem}, rectangle {DEFAULT_INTERIOR_RECT:?}");
        table.write_csv(std::io::stdout().lock())?;
        let k = table.rows.len() - 1;
        println!(
            "  finest pair: global rate {:.3}, interior rate {:.3}",
            table.rate(Measure::Linf, k).unwrap(),
            table.rate(Measure::LinfSubdomain, k).unwrap()
        );
        tables.push(table);
    }
    Ok(tables)
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
