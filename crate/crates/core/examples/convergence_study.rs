// Manufactured solution sin(πx) sin(πy) on the unit square, P1 and P2,
// five uniformly refined levels. Prints the table and the fitted rates.

use sipdg::assembly::default_sigma;
use sipdg::experiments::{run_convergence, ConvergenceTable, CsvTable, Domain, Measure};

pub fn run_example() -> sipdg::Result<Vec<ConvergenceTable>> {
    let mut tables = Vec::new();
    for r in 1..=2 {
        let table = run_convergence(Domain::Square, r, 5, default_sigma(r))?;
        println!("r = {r}, sigma = {}", table.sigma);
        table.write_csv(std::io::stdout().lock())?;
        for m in [Measure::Linf, Measure::L2, Measure::BrokenH1, Measure::V2] {
            let rate = table.asymptotic_rate(m).unwrap();
            println!("  {:>9} rate over last 3 levels: {rate:.3}", m.name());
        }
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
