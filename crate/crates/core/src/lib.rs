//! Symmetric interior penalty discontinuous Galerkin (SIPDG) discretization of
//! the Poisson problem `-Δu = f` in `Ω`, `u = g` on `∂Ω`, on conforming
//! triangulations of polygonal domains.
//!
//! The crate is organised bottom-up:
//!
//! - [`mesh`]: triangulations, edge topology, size metrics, generators and a text format.
//! - [`dgspace`]: nodal reference bases, quadrature, DOF numbering, evaluation and interpolation.
//! - [`assembly`]: the SIPDG system matrix and load vector, edge traces and diagnostics.
//! - [`linsolve`]: sparse SPD solves (direct Cholesky, preconditioned CG fallback).
//! - [`norms`]: L², broken H¹, Vᵖ, L∞ (global, boundary, subdomain) measures.
//! - [`experiments`]: maximum-principle tables and convergence studies with CSV output.
//!
//! ```no_run
//! use sipdg::prelude::*;
//!
//! let mesh = build_square_mesh(8)?;
//! let space = DgSpace::new(1)?;
//! let problem = Problem::Manufactured.data(Domain::Square);
//! let sigma = default_sigma(1);
//! let a = assemble_matrix(&mesh, &space, sigma)?;
//! let b = assemble_rhs(&mesh, &space, &problem.source, &problem.boundary, sigma)?;
//! let (uh, report) = solve(&a, &b, &SolveOptions::default())?;
//! let err = error_linf(&space, &ErrorFunction::new(&mesh, &space, &uh, &problem.exact), None)?;
//! println!("L∞ error {err:.3e}, residual {:.1e}", report.relative_residual);
//! # Ok::<(), sipdg::Error>(())
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod dgspace;
mod error;
pub mod experiments;
pub mod linsolve;
pub mod mesh;
pub mod norms;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::assembly::{
        assemble_matrix, assemble_rhs, default_sigma, edge_traces, jump_mean, CoeffVector,
        SystemMatrix,
    };
    pub use crate::dgspace::{
        BrokenFunction, DgSpace, DiscreteFunction, ErrorFunction, ScalarField,
    };
    pub use crate::experiments::{Domain, Problem};
    pub use crate::linsolve::{solve, SolveMethod, SolveOptions, SolveReport};
    pub use crate::mesh::{build_lshape_mesh, build_square_mesh, refine_uniform, Mesh, Point2};
    pub use crate::norms::{
        error_broken_h1, error_l2, error_linf, norm_vp, Exponent, Region,
    };
    pub use crate::{Error, Result};
}
