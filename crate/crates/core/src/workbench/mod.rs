//! Model files, built-in scenarios and reports.

mod custom;
mod modelfile;
mod report;
mod scenarios;

use thiserror::Error;

pub use custom::{load_scenarios, run_custom, CustomScenario, CustomStep};
pub use modelfile::{load_model, parse_model, write_model, ModelFileError};
pub use report::{Quantity, Report, Source, Value, EXIT_ERROR};
pub use scenarios::{
    published_torus2_gram, published_x_block, find, list_scenarios, run_many, run_scenario,
    Scenario,
};

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error(transparent)]
    ModelFile(#[from] ModelFileError),
    #[error("{0}")]
    Step(String),
}

macro_rules! step_error {
    ($($t:ty),*) => {
        $(impl From<$t> for WorkbenchError {
            fn from(e: $t) -> Self {
                WorkbenchError::Step(e.to_string())
            }
        })*
    };
}

step_error!(
    crate::bbf::BbfError,
    crate::dga::ModelError,
    crate::dga::CohomologyError,
    crate::grass::GrassError,
    crate::parse::ParseError,
    crate::exterior::ExteriorError,
    crate::scalar::ScalarError
);
