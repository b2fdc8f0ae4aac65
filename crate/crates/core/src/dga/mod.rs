//! Finite bigraded differential algebras given by structure equations, and
//! their de Rham, Dolbeault, Bott-Chern and Aeppli cohomology.

mod builders;
mod cohomology;
mod model;

pub use builders::{kodaira, nakamura, torus, torus4_deformed, torus_lambda, Torus4Deformed};
pub use cohomology::{
    cohomology, ddbar_criterion, frolicher, lambda_map, CohomologyError, CohomologyReport,
    DdbarCriterion, Frolicher, LambdaMap, Slot, Theory,
};
pub use model::{IntegrabilityError, ModelError, StructureModel, Violation, ViolationKind};
