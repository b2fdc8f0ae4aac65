//! User scenario files.
//!
//! ```toml
//! [[scenario]]
//! id = "kodaira-betti"
//! description = "first Betti number"
//! model = "kodaira.toml"
//!
//! [[scenario.step]]
//! name = "b1"
//! op = "cohomology"
//! theory = "de-rham"
//! degree = 1
//! expected = "3"
//! ```
//!
//! Model paths are relative to the scenario file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::modelfile::load_model;
use super::report::{Report, Source, Value};
use super::WorkbenchError;
use crate::bbf::{bilinear, make_symplectic, q_sigma};
use crate::dga::{cohomology, ddbar_criterion, Slot, StructureModel, Theory};
use crate::exterior::Bidegree;
use crate::grass::embedding_degree;
use crate::parse::{parse_form, parse_scalar_free};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    scenario: Vec<CustomScenario>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomScenario {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub model: Option<PathBuf>,
    #[serde(default)]
    pub step: Vec<CustomStep>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomStep {
    pub name: String,
    pub op: String,
    pub expected: String,
    pub theory: Option<String>,
    pub degree: Option<usize>,
    pub bidegree: Option<[usize; 2]>,
    pub sigma: Option<String>,
    pub form: Option<String>,
    pub other: Option<String>,
    pub n: Option<usize>,
}

pub fn load_scenarios(path: impl AsRef<Path>) -> Result<Vec<CustomScenario>, WorkbenchError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path)
        .map_err(|e| WorkbenchError::Step(format!("cannot read {}: {e}", path.display())))?;
    let file: ScenarioFile = toml::from_str(&src)
        .map_err(|e| WorkbenchError::Step(format!("{}: {}", path.display(), e.message())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(file
        .scenario
        .into_iter()
        .map(|mut s| {
            s.model = s.model.map(|m| base.join(m));
            s
        })
        .collect())
}

fn need<'a, T>(v: &'a Option<T>, step: &str, field: &str) -> Result<&'a T, WorkbenchError> {
    v.as_ref()
        .ok_or_else(|| WorkbenchError::Step(format!("step `{step}` needs `{field}`")))
}

fn slot(step: &CustomStep) -> Result<Slot, WorkbenchError> {
    match (step.degree, step.bidegree) {
        (Some(k), None) => Ok(Slot::Degree(k)),
        (None, Some([p, q])) => Ok(Slot::Bidegree(Bidegree::new(p, q))),
        _ => Err(WorkbenchError::Step(format!(
            "step `{}` needs exactly one of `degree` and `bidegree`",
            step.name
        ))),
    }
}

fn parse_bool(s: &str) -> Result<bool, WorkbenchError> {
    match s.trim() {
        "true" | "holds" => Ok(true),
        "false" | "fails" => Ok(false),
        other => Err(WorkbenchError::Step(format!(
            "expected a boolean, got `{other}`"
        ))),
    }
}

fn evaluate(
    model: Option<&StructureModel>,
    step: &CustomStep,
) -> Result<(Value, Value), WorkbenchError> {
    let model =
        || model.ok_or_else(|| WorkbenchError::Step(format!("step `{}` needs a model", step.name)));
    let int = |s: &str| -> Result<Value, WorkbenchError> {
        s.trim()
            .parse::<i64>()
            .map(Value::Int)
            .map_err(|_| WorkbenchError::Step(format!("expected an integer, got `{s}`")))
    };
    match step.op.as_str() {
        "cohomology" => {
            let theory: Theory = need(&step.theory, &step.name, "theory")?
                .parse()
                .map_err(WorkbenchError::Step)?;
            let d = cohomology(model()?, theory, slot(step)?)?.dimension;
            Ok((Value::from(d), int(&step.expected)?))
        }
        "ddbar" => {
            let k = *need(&step.degree, &step.name, "degree")?;
            let c = ddbar_criterion(model()?, k)?;
            Ok((
                Value::from(c.holds),
                Value::from(parse_bool(&step.expected)?),
            ))
        }
        "q" | "bilinear" => {
            let m = model()?;
            let sigma = parse_form(need(&step.sigma, &step.name, "sigma")?, m.algebra())?;
            let s = make_symplectic(m, &sigma)?;
            let f = parse_form(need(&step.form, &step.name, "form")?, m.algebra())?;
            let value = if step.op == "q" {
                q_sigma(&s, &f)?
            } else {
                let g = parse_form(need(&step.other, &step.name, "other")?, m.algebra())?;
                bilinear(&s, &f, &g)?
            };
            Ok((
                Value::from(value),
                Value::from(parse_scalar_free(&step.expected)?),
            ))
        }
        "integrate" => {
            let m = model()?;
            let f = parse_form(need(&step.form, &step.name, "form")?, m.algebra())?;
            Ok((
                Value::from(f.integrate()),
                Value::from(parse_scalar_free(&step.expected)?),
            ))
        }
        "d" => {
            let m = model()?;
            let f = parse_form(need(&step.form, &step.name, "form")?, m.algebra())?;
            let expected = parse_form(&step.expected, m.algebra())?;
            Ok((Value::from(m.apply_d(&f)?), Value::from(expected)))
        }
        "embedding-degree" => {
            let n = *need(&step.n, &step.name, "n")?;
            Ok((Value::from(embedding_degree(n)?), int(&step.expected)?))
        }
        other => Err(WorkbenchError::Step(format!("unknown operation `{other}`"))),
    }
}

pub fn run_custom(s: &CustomScenario) -> Report {
    let mut report = Report::new(&s.id, &s.description);
    let model = match s.model.as_ref().map(load_model).transpose() {
        Ok(m) => m,
        Err(e) => {
            report.fail(e.to_string());
            return report;
        }
    };
    for step in &s.step {
        match evaluate(model.as_ref(), step) {
            Ok((value, expected)) => report.check(step.name.clone(), value, expected, Source::User),
            Err(e) => {
                report.fail(format!("step `{}`: {e}", step.name));
                break;
            }
        }
    }
    report
}
