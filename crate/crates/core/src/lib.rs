//! Moment bounds and sector densities for GL(2) Hecke eigenvalues.
//!
//! The crate has three layers:
//!
//! - exact symbolic layer: [`rep_ring`] (virtual characters of GL(2) and
//!   Clebsch–Gordan bookkeeping), [`pole_calculus`] (certified pole orders
//!   at `s = 1` for products of incomplete L-functions), and
//!   [`moment_constants`] (the moment constants `q3, q4, q6, q8` as exact
//!   rationals and cosine polynomials);
//! - numerical layer: [`optimizer`] (the boundary system coupling the
//!   fourth/sixth/eighth moment constraints, the eigenvalue-magnitude
//!   density bound, and the resulting sector guarantees) and [`rays`]
//!   (argument-ray geometry for low-order central characters);
//! - data layer: [`empirical`] (eigenvalue datasets, truncated Dirichlet
//!   moments, sector occupancy, synthetic generators).
//!
//! All symbolic computations are exact (arbitrary-precision integers and
//! rationals); the numerical layer is deterministic `f64`.

pub mod empirical;
pub mod moment_constants;
pub mod optimizer;
pub mod pole_calculus;
pub mod rays;
pub mod rep_ring;

pub use moment_constants::{moment_bounds, FourierCosPoly, MomentBounds};
pub use optimizer::{solve_boundary, BoundarySolution, SectorResult};
pub use pole_calculus::{Factorization, Hypotheses, LFactor, PoleInterval};
pub use rep_ring::{Monomial, SymDetClass, VirtualCharacter};
