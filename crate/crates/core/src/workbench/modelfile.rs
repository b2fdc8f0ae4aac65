//! TOML model files.
//!
//! ```toml
//! name = "kodaira"
//! volume = ["w1", "w2", "wb1", "wb2"]
//!
//! [[variable]]
//! name = "mu"
//! conjugate = "mub"
//!
//! [[generator]]
//! name = "w1"
//! bidegree = [1, 0]
//! conjugate = "wb1"
//!
//! [[differential]]
//! generator = "w2"
//! terms = [{ coefficient = 1, monomial = "w1^wb1" }]
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::dga::{IntegrabilityError, ModelError, StructureModel};
use crate::exterior::{Algebra, Bidegree, Form, Monomial};
use crate::parse::parse_scalar;
use crate::scalar::{Conjugation, PolyScalar, Var, VarTable};

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{}field `{field}`: {message}", line.map(|l| format!("line {l}, ")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        field: String,
        message: String,
    },
    #[error(transparent)]
    Integrability(IntegrabilityError),
    #[error(transparent)]
    Model(ModelError),
}

impl ModelFileError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ModelFileError::Parse { line, .. } => *line,
            _ => None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: Option<String>,
    #[serde(default)]
    variable: Vec<RawVariable>,
    #[serde(default)]
    generator: Vec<RawGenerator>,
    #[serde(default)]
    differential: Vec<RawDifferential>,
    volume: Option<Spanned<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    name: Spanned<String>,
    conjugate: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: Spanned<String>,
    bidegree: Spanned<[usize; 2]>,
    conjugate: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDifferential {
    generator: Spanned<String>,
    #[serde(default)]
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coefficient: Spanned<RawCoefficient>,
    monomial: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCoefficient {
    Int(i64),
    Text(String),
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    fn line(&self, offset: usize) -> usize {
        self.src[..offset.min(self.src.len())].matches('\n').count() + 1
    }

    fn err<T>(
        &self,
        span: &Spanned<T>,
        field: String,
        message: impl Into<String>,
    ) -> ModelFileError {
        ModelFileError::Parse {
            line: Some(self.line(span.span().start)),
            field,
            message: message.into(),
        }
    }
}

pub fn load_model(path: impl AsRef<Path>) -> Result<StructureModel, ModelFileError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|e| ModelFileError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let fallback = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
    parse_model(&src, fallback)
}

/// Parses and validates a model document. `default_name` is used when the
/// document has no `name` key.
pub fn parse_model(src: &str, default_name: &str) -> Result<StructureModel, ModelFileError> {
    let ctx = Ctx { src };
    let raw: RawModel = toml::from_str(src).map_err(|e| {
        let line = e.span().map(|s| ctx.line(s.start));
        ModelFileError::Parse {
            line,
            field: "document".into(),
            message: e.message().to_string(),
        }
    })?;

    let mut vars = VarTable::new();
    for (k, v) in raw.variable.iter().enumerate() {
        let result = match &v.conjugate {
            None => vars.declare_real(v.name.get_ref()).map(|_| ()),
            Some(c) => vars.declare_pair(v.name.get_ref(), c.get_ref()).map(|_| ()),
        };
        result.map_err(|e| ctx.err(&v.name, format!("variable[{k}].name"), e.to_string()))?;
    }

    let mut b = Algebra::builder().vars(vars);
    let mut pairs = BTreeSet::new();
    for (k, g) in raw.generator.iter().enumerate() {
        let bidegree = match *g.bidegree.get_ref() {
            [1, 0] => Bidegree::HOLOMORPHIC,
            [0, 1] => Bidegree::ANTIHOLOMORPHIC,
            [p, q] => {
                return Err(ctx.err(
                    &g.bidegree,
                    format!("generator[{k}].bidegree"),
                    format!("generators have bidegree [1, 0] or [0, 1], got [{p}, {q}]"),
                ))
            }
        };
        b = b.generator(g.name.get_ref(), bidegree);
        if let Some(c) = &g.conjugate {
            let (x, y) = (g.name.get_ref().clone(), c.get_ref().clone());
            let pair = if bidegree == Bidegree::HOLOMORPHIC {
                (x, y)
            } else {
                (y, x)
            };
            if !raw
                .generator
                .iter()
                .any(|h| h.name.get_ref() == c.get_ref())
            {
                return Err(ctx.err(
                    c,
                    format!("generator[{k}].conjugate"),
                    format!("undeclared generator `{}`", c.get_ref()),
                ));
            }
            pairs.insert(pair);
        }
    }
    for (h, a) in &pairs {
        b = b.conjugate(h, a);
    }
    if let Some(vol) = &raw.volume {
        b = b.volume(vol.get_ref());
    }
    let alg = b.build().map_err(|e| {
        let (line, field) = match &raw.volume {
            Some(v) if matches!(e, crate::exterior::ExteriorError::InvalidVolume(_))
                || matches!(&e, crate::exterior::ExteriorError::UnknownGenerator(n) if v.get_ref().contains(n)) =>
            {
                (Some(ctx.line(v.span().start)), "volume".to_string())
            }
            _ => (None, "generator".to_string()),
        };
        ModelFileError::Parse {
            line,
            field,
            message: e.to_string(),
        }
    })?;

    let mut diffs = Vec::new();
    for (k, d) in raw.differential.iter().enumerate() {
        let gen = d.generator.get_ref();
        if alg.position(gen).is_none() {
            return Err(ctx.err(
                &d.generator,
                format!("differential[{k}].generator"),
                format!("undeclared generator `{gen}`"),
            ));
        }
        let mut form = Form::zero(&alg);
        for (t, term) in d.terms.iter().enumerate() {
            let c = match term.coefficient.get_ref() {
                RawCoefficient::Int(n) => PolyScalar::from_int(*n),
                RawCoefficient::Text(s) => parse_scalar(s, alg.vars()).map_err(|e| {
                    ctx.err(
                        &term.coefficient,
                        format!("differential[{k}].terms[{t}].coefficient"),
                        e.to_string(),
                    )
                })?,
            };
            let names: Vec<&str> = term.monomial.get_ref().split('^').map(str::trim).collect();
            let m = Form::product(&alg, &names).map_err(|e| {
                ctx.err(
                    &term.monomial,
                    format!("differential[{k}].terms[{t}].monomial"),
                    e.to_string(),
                )
            })?;
            form += &m.scale(&c);
        }
        diffs.push((gen.clone(), form));
    }
    let name = raw.name.as_deref().unwrap_or(default_name);
    StructureModel::new(name, &alg, diffs).map_err(|e| match e {
        ModelError::Integrability(i) => ModelFileError::Integrability(i),
        other => ModelFileError::Model(other),
    })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn monomial_text(alg: &Algebra, m: Monomial) -> String {
    m.positions()
        .map(|p| alg.generator(p).name.as_str())
        .collect::<Vec<_>>()
        .join("^")
}

/// Renders a model in the format read by [`parse_model`].
pub fn write_model(model: &StructureModel) -> String {
    let alg = model.algebra();
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", quote(model.name()));
    let (vol, neg) = alg.volume();
    let mut names: Vec<&str> = vol
        .positions()
        .map(|p| alg.generator(p).name.as_str())
        .collect();
    if neg && names.len() >= 2 {
        names.swap(0, 1);
    }
    let quoted: Vec<String> = names.iter().map(|n| quote(n)).collect();
    let _ = writeln!(out, "volume = [{}]", quoted.join(", "));
    let volume = Var::volume();
    let mut seen = BTreeSet::new();
    for (v, c) in alg.vars().iter() {
        if *v == volume || seen.contains(v) {
            continue;
        }
        let _ = writeln!(out, "\n[[variable]]\nname = {}", quote(v.name()));
        if let Conjugation::Pair(w) = c {
            let _ = writeln!(out, "conjugate = {}", quote(w.name()));
            seen.insert(w.clone());
        }
        seen.insert(v.clone());
    }
    for g in alg.generators() {
        let _ = writeln!(
            out,
            "\n[[generator]]\nname = {}\nbidegree = [{}, {}]",
            quote(&g.name),
            g.bidegree.p,
            g.bidegree.q
        );
        if let Some(c) = g.conjugate {
            let _ = writeln!(out, "conjugate = {}", quote(&alg.generator(c).name));
        }
    }
    for (pos, g) in alg.generators().iter().enumerate() {
        let d = model.differential(pos);
        if d.is_zero() {
            continue;
        }
        let _ = writeln!(
            out,
            "\n[[differential]]\ngenerator = {}\nterms = [",
            quote(&g.name)
        );
        for (m, c) in d.terms() {
            let _ = writeln!(
                out,
                "  {{ coefficient = {}, monomial = {} }},",
                quote(&c.to_string()),
                quote(&monomial_text(alg, *m))
            );
        }
        out.push_str("]\n");
    }
    out
}
