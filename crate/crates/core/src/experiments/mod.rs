//! Maximum-principle tables, convergence studies and their CSV output.

mod problems;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::assembly::{assemble_matrix, assemble_rhs, CoeffVector};
use crate::dgspace::{DgSpace, DiscreteFunction, ScalarField};
use crate::linsolve::{solve, SolveOptions, SolveReport};
use crate::mesh::{refine_uniform, Mesh, MeshPattern};
use crate::norms::{boundary_extrema, error_report, global_extrema, Region};
use crate::{Error, Result};

pub use problems::{wmp_boundary, Domain, Problem, ProblemData};

/// Assembles and solves the SIPDG system on `mesh`. Falls back to CG when
/// the direct solve misses its residual tolerance.
pub fn solve_poisson(
    mesh: &Mesh,
    space: &DgSpace,
    source: &ScalarField,
    boundary: &ScalarField,
    sigma: f64,
) -> Result<(CoeffVector, SolveReport)> {
    let a = assemble_matrix(mesh, space, sigma)?;
    let b = assemble_rhs(mesh, space, source, boundary, sigma)?;
    match solve(&a, &b, &SolveOptions::direct()) {
        Err(Error::NotConverged { .. }) => solve(&a, &b, &SolveOptions::iterative()),
        r => r,
    }
}

/// Extrema of the discrete solution with `f = 0` over the domain and over
/// its boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremaReport {
    pub domain: Domain,
    pub h: f64,
    pub r: usize,
    pub sigma: f64,
    pub min_omega: f64,
    pub min_boundary: f64,
    pub max_omega: f64,
    pub max_boundary: f64,
}

impl ExtremaReport {
    pub const CSV_HEADER: &'static str =
        "domain,h,r,sigma,min_omega,min_boundary,max_omega,max_boundary";

    /// `max(|min_Ω - min_∂Ω|, |max_Ω - max_∂Ω|)`.
    pub fn boundary_gap(&self) -> f64 {
        (self.min_omega - self.min_boundary)
            .abs()
            .max((self.max_omega - self.max_boundary).abs())
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.domain,
            self.h,
            self.r,
            self.sigma,
            self.min_omega,
            self.min_boundary,
            self.max_omega,
            self.max_boundary
        )
    }
}

/// Mesh pattern of the maximum-principle runs. With the single-direction
/// split the two corners where `cos(πx) cos(πy)` peaks sit on diagonals and
/// the boundary overshoot there is about twice that at the other corners.
pub const WMP_PATTERN: MeshPattern = MeshPattern::Alternating;

/// Discrete harmonic extension of `cos(πx) cos(πy)` on the uniform mesh of
/// resolution `n` with [`WMP_PATTERN`].
pub fn run_wmp(domain: Domain, n: usize, r: usize, sigma: f64) -> Result<ExtremaReport> {
    run_wmp_with(domain, n, r, sigma, WMP_PATTERN, &wmp_boundary())
}

/// As [`run_wmp`] with an explicit pattern and Dirichlet data.
pub fn run_wmp_with(
    domain: Domain,
    n: usize,
    r: usize,
    sigma: f64,
    pattern: MeshPattern,
    boundary: &ScalarField,
) -> Result<ExtremaReport> {
    let mesh = domain.mesh_with(n, pattern)?;
    let space = DgSpace::new(r)?;
    let (u, _) = solve_poisson(&mesh, &space, &ScalarField::zero(), boundary, sigma)?;
    let uh = DiscreteFunction::new(&mesh, &space, &u)?;
    let all = global_extrema(&space, &uh);
    let bd = boundary_extrema(&space, &uh);
    Ok(ExtremaReport {
        domain,
        h: mesh.h(),
        r,
        sigma,
        min_omega: all.min,
        min_boundary: bd.min,
        max_omega: all.max,
        max_boundary: bd.max,
    })
}

/// Error columns of a [`ConvergenceTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    Linf,
    L2,
    BrokenH1,
    V2,
    LinfSubdomain,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Linf => "linf",
            Measure::L2 => "l2",
            Measure::BrokenH1 => "brokenH1",
            Measure::V2 => "v2",
            Measure::LinfSubdomain => "linf_subdomain",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub h: f64,
    pub dofs: usize,
    pub linf: f64,
    pub l2: f64,
    pub broken_h1: f64,
    pub v2: f64,
    pub linf_subdomain: Option<f64>,
}

impl ConvergenceRow {
    pub fn get(&self, m: Measure) -> Option<f64> {
        match m {
            Measure::Linf => Some(self.linf),
            Measure::L2 => Some(self.l2),
            Measure::BrokenH1 => Some(self.broken_h1),
            Measure::V2 => Some(self.v2),
            Measure::LinfSubdomain => self.linf_subdomain,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub domain: Domain,
    pub problem: Problem,
    pub degree: usize,
    pub sigma: f64,
    pub rows: Vec<ConvergenceRow>,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

const FIT_ROWS: usize = 3;

impl ConvergenceTable {
    pub fn has_subdomain(&self) -> bool {
        self.rows.first().is_some_and(|r| r.linf_subdomain.is_some())
    }

    /// `log₂(e_{k-1} / e_k)` for row `k ≥ 1`.
    pub fn rate(&self, m: Measure, k: usize) -> Option<f64> {
        if k == 0 || k >= self.rows.len() {
            return None;
        }
        let prev = self.rows[k - 1].get(m)?;
        let cur = self.rows[k].get(m)?;
        Some((prev / cur).log2())
    }

    /// Least-squares slope of `log₁₀ e` against `log₁₀ h` over the last
    /// three rows.
    pub fn asymptotic_rate(&self, m: Measure) -> Option<f64> {
        self.fit(m).map(|(s, _)| s)
    }

    fn fit(&self, m: Measure) -> Option<(f64, f64)> {
        if self.rows.len() < 2 {
            return None;
        }
        let tail = &self.rows[self.rows.len().saturating_sub(FIT_ROWS)..];
        let xs: Vec<f64> = tail.iter().map(|r| r.h.log10()).collect();
        let ys = tail
            .iter()
            .map(|r| r.get(m).map(f64::log10))
            .collect::<Option<Vec<_>>>()?;
        Some(fit_slope(&xs, &ys))
    }

    pub fn csv_header(&self) -> &'static str {
        if self.has_subdomain() {
            "level,h,dofs,linf,l2,brokenH1,rate_linf,linf_subdomain,rate_linf_subdomain"
        } else {
            "level,h,dofs,linf,l2,brokenH1,rate_linf"
        }
    }

    /// `(log₁₀ h, log₁₀ e, fitted line)` rows with the slope in a comment.
    pub fn write_plotdata<W: Write>(&self, m: Measure, mut out: W) -> Result<()> {
        let (slope, intercept) = self
            .fit(m)
            .ok_or_else(|| Error::InvalidInput(format!("no `{}` data to fit", m.name())))?;
        writeln!(out, "# measure={} slope={slope} intercept={intercept}", m.name())?;
        writeln!(out, "log10_h,log10_error,log10_fit")?;
        for r in &self.rows {
            let x = r.h.log10();
            let y = r.get(m).map_or(f64::NAN, f64::log10);
            writeln!(out, "{x},{y},{}", intercept + slope * x)?;
        }
        Ok(())
    }
}

/// Anything written by [`emit_csv`].
pub trait CsvTable {
    fn write_csv<W: Write>(&self, out: W) -> Result<()>;
}

impl CsvTable for [ExtremaReport] {
    fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", ExtremaReport::CSV_HEADER)?;
        for r in self {
            writeln!(out, "{}", r.csv_row())?;
        }
        Ok(())
    }
}

impl CsvTable for ExtremaReport {
    fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        std::slice::from_ref(self).write_csv(out)
    }
}

impl CsvTable for ConvergenceTable {
    fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let sub = self.has_subdomain();
        writeln!(out, "{}", self.csv_header())?;
        let rate = |m, k| self.rate(m, k).map(|r| r.to_string()).unwrap_or_default();
        for (k, r) in self.rows.iter().enumerate() {
            write!(
                out,
                "{},{},{},{},{},{},{}",
                r.level,
                r.h,
                r.dofs,
                r.linf,
                r.l2,
                r.broken_h1,
                rate(Measure::Linf, k)
            )?;
            if sub {
                let s = r.linf_subdomain.map(|v| v.to_string()).unwrap_or_default();
                write!(out, ",{s},{}", rate(Measure::LinfSubdomain, k))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

pub fn emit_csv<T: CsvTable + ?Sized>(table: &T, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    table.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn emit_plotdata(table: &ConvergenceTable, m: Measure, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    table.write_plotdata(m, &mut w)?;
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ConvergenceConfig {
    pub domain: Domain,
    pub problem: Problem,
    pub degree: usize,
    pub levels: usize,
    pub sigma: f64,
    /// Resolution of the first level; each further level refines uniformly.
    pub base_n: usize,
    pub subdomain: Option<Region>,
}

impl ConvergenceConfig {
    pub fn new(domain: Domain, problem: Problem, degree: usize, levels: usize, sigma: f64) -> Self {
        Self {
            domain,
            problem,
            degree,
            levels,
            sigma,
            base_n: 2,
            subdomain: None,
        }
    }
}

/// Sequence of uniformly refined meshes starting at `base_n`.
pub fn mesh_hierarchy(domain: Domain, base_n: usize, levels: usize) -> Result<Vec<Mesh>> {
    let mut meshes = vec![domain.mesh(base_n)?];
    for _ in 1..levels {
        let next = refine_uniform(meshes.last().unwrap())?;
        meshes.push(next);
    }
    Ok(meshes)
}

pub fn run_convergence_with(cfg: &ConvergenceConfig) -> Result<ConvergenceTable> {
    if cfg.levels < 3 {
        return Err(Error::InvalidInput(format!(
            "a convergence study needs at least 3 levels, got {}",
            cfg.levels
        )));
    }
    let space = DgSpace::new(cfg.degree)?;
    let data = cfg.problem.data(cfg.domain);
    let mut rows = Vec::with_capacity(cfg.levels);
    for (k, mesh) in mesh_hierarchy(cfg.domain, cfg.base_n, cfg.levels)?.iter().enumerate() {
        let (u, _) = solve_poisson(mesh, &space, &data.source, &data.boundary, cfg.sigma)?;
        let uh = DiscreteFunction::new(mesh, &space, &u)?;
        let e = error_report(&uh, &data.exact, cfg.subdomain.as_ref())?;
        rows.push(ConvergenceRow {
            level: k + 1,
            h: e.h,
            dofs: e.dofs,
            linf: e.linf,
            l2: e.l2,
            broken_h1: e.broken_h1,
            v2: e.v2,
            linf_subdomain: e.linf_subdomain,
        });
    }
    Ok(ConvergenceTable {
        domain: cfg.domain,
        problem: cfg.problem,
        degree: cfg.degree,
        sigma: cfg.sigma,
        rows,
    })
}

/// Manufactured-solution study on `domain`.
pub fn run_convergence(domain: Domain, r: usize, levels: usize, sigma: f64) -> Result<ConvergenceTable> {
    run_convergence_with(&ConvergenceConfig::new(domain, Problem::Manufactured, r, levels, sigma))
}

/// Smallest admissible distance between the interior rectangle and the
/// re-entrant corner.
pub const MIN_CORNER_DISTANCE: f64 = 0.2;

/// Default interior rectangle in the upper-left block of the L-shape.
pub const DEFAULT_INTERIOR_RECT: [f64; 4] = [-0.75, 0.25, -0.25, 0.75];

/// Convergence study on the L-shape with an extra L∞ column on `rect`,
/// which must keep [`MIN_CORNER_DISTANCE`] from the origin.
pub fn run_interior(
    problem: Problem,
    r: usize,
    levels: usize,
    sigma: f64,
    rect: [f64; 4],
) -> Result<ConvergenceTable> {
    let region = Region::rect(rect[0], rect[1], rect[2], rect[3])?;
    let d = region.distance_to(crate::mesh::Point2::new(0.0, 0.0)).unwrap_or(0.0);
    if d < MIN_CORNER_DISTANCE {
        return Err(Error::InvalidInput(format!(
            "subdomain is {d} from the re-entrant corner; at least {MIN_CORNER_DISTANCE} required"
        )));
    }
    let mut cfg = ConvergenceConfig::new(Domain::LShape, problem, r, levels, sigma);
    cfg.subdomain = Some(region);
    run_convergence_with(&cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::default_sigma;

    fn table(rows: &[(f64, f64)]) -> ConvergenceTable {
        ConvergenceTable {
            domain: Domain::Square,
            problem: Problem::Manufactured,
            degree: 1,
            sigma: 10.0,
            rows: rows
                .iter()
                .enumerate()
                .map(|(k, &(h, e))| ConvergenceRow {
                    level: k + 1,
                    h,
                    dofs: 3 << (2 * k),
                    linf: e,
                    l2: e,
                    broken_h1: e,
                    v2: e,
                    linf_subdomain: None,
                })
                .collect(),
        }
    }

    #[test]
    fn rates_and_fit_on_exact_power_law() {
        let t = table(&[(0.5, 0.3), (0.25, 0.3 / 8.0), (0.125, 0.3 / 64.0), (0.0625, 0.3 / 512.0)]);
        assert_eq!(t.rate(Measure::Linf, 0), None);
        for k in 1..4 {
            assert!((t.rate(Measure::Linf, k).unwrap() - 3.0).abs() < 1e-12);
        }
        assert!((t.asymptotic_rate(Measure::L2).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(t.asymptotic_rate(Measure::LinfSubdomain), None);
    }

    #[test]
    fn csv_schema_and_plot_slope() {
        let t = table(&[(0.5, 0.1), (0.25, 0.03), (0.125, 0.008)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "level,h,dofs,linf,l2,brokenH1,rate_linf");
        assert_eq!(lines[1], "1,0.5,3,0.1,0.1,0.1,");
        assert!(lines[2].starts_with("2,0.25,12,0.03,0.03,0.03,1.73"));

        let mut buf = Vec::new();
        t.write_plotdata(Measure::Linf, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let slope: f64 = s
            .lines()
            .next()
            .unwrap()
            .split_whitespace()
            .find_map(|w| w.strip_prefix("slope="))
            .unwrap()
            .parse()
            .unwrap();
        assert!((slope - t.asymptotic_rate(Measure::Linf).unwrap()).abs() < 1e-12);
        assert_eq!(s.lines().count(), 2 + t.rows.len());
    }

    #[test]
    fn wmp_csv_schema() {
        let rep = ExtremaReport {
            domain: Domain::LShape,
            h: 0.25,
            r: 1,
            sigma: 10.0,
            min_omega: -1.0,
            min_boundary: -1.0,
            max_omega: 1.5,
            max_boundary: 1.5,
        };
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "domain,h,r,sigma,min_omega,min_boundary,max_omega,max_boundary\nlshape,0.25,1,10,-1,-1,1.5,1.5\n"
        );
    }

    #[test]
    fn constant_boundary_data_is_reproduced() {
        for domain in [Domain::Square, Domain::LShape] {
            for r in 1..=2 {
                let rep = run_wmp_with(
                    domain,
                    3,
                    r,
                    default_sigma(r),
                    WMP_PATTERN,
                    &ScalarField::constant(1.0),
                )
                .unwrap();
                for v in [rep.min_omega, rep.min_boundary, rep.max_omega, rep.max_boundary] {
                    assert!((v - 1.0).abs() < 1e-10, "{domain} r={r}: {v}");
                }
            }
        }
    }

    #[test]
    fn whole_domain_subdomain_matches_global_column() {
        let mut cfg = ConvergenceConfig::new(Domain::LShape, Problem::Corner, 1, 3, 10.0);
        cfg.subdomain = Some(Region::rect(-1.0, -1.0, 1.0, 1.0).unwrap());
        let t = run_convergence_with(&cfg).unwrap();
        assert!(t.has_subdomain());
        for r in &t.rows {
            assert_eq!(r.linf_subdomain, Some(r.linf));
        }
        for k in 1..t.rows.len() {
            assert_eq!(t.rate(Measure::Linf, k), t.rate(Measure::LinfSubdomain, k));
            assert!(t.rate(Measure::Linf, k).unwrap().is_finite());
        }
    }

    #[test]
    fn wmp_extrema_in_sanity_window() {
        for domain in [Domain::Square, Domain::LShape] {
            let rep = run_wmp(domain, 6, 1, 10.0).unwrap();
            for v in [rep.min_omega, rep.max_omega] {
                assert!((0.5..=2.0).contains(&v.abs()));
            }
            assert!(rep.boundary_gap() <= 1e-10);
        }
    }

    #[test]
    fn too_few_levels_rejected() {
        assert!(run_convergence(Domain::Square, 1, 2, 10.0).is_err());
    }

    #[test]
    fn interior_rect_near_corner_rejected() {
        assert!(run_interior(Problem::Manufactured, 1, 3, 10.0, [-0.3, 0.0, -0.1, 0.3]).is_err());
        assert!(run_interior(Problem::Manufactured, 1, 3, 10.0, [0.0, 0.0, 0.0, 1.0]).is_err());
    }
}
