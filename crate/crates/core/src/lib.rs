//! Exact symbolic calculus for invariant-form models of compact complex
//! manifolds: wedge products over Gaussian-rational polynomial coefficients,
//! de Rham / Dolbeault / Bott-Chern / Aeppli cohomology of finite bigraded
//! differential algebras, and the Beauville-Bogomolov-Fujiki form.

pub mod bbf;
pub mod dga;
pub mod exterior;
pub mod grass;
pub mod linalg;
pub mod parse;
pub mod sampling;
pub mod scalar;
pub mod workbench;

pub use exterior::{Algebra, Bidegree, Form, Generator, Monomial};
pub use scalar::{Assignment, GaussianRational, PolyScalar, ScalarFraction, Var, VarTable};
