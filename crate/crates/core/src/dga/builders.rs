use std::sync::Arc;

use num_traits::{One, Zero};

use super::model::{ModelError, StructureModel};
use crate::exterior::{Algebra, Form};
use crate::scalar::{GaussianRational, PolyScalar, VarTable};

fn index_name(prefix: &str, i: usize, j: usize, wide: bool) -> String {
    if wide {
        format!("{prefix}{i}_{j}")
    } else {
        format!("{prefix}{i}{j}")
    }
}

/// The complex torus of dimension `dim`: generators `x1..x{dim}` with
/// conjugates `xb1..xb{dim}`, zero differential, and scalar variables
/// `l{ij}`/`lb{ij}` (for `i < j`) and `mu`/`mub`.
pub fn torus(dim: usize) -> StructureModel {
    let wide = dim > 9;
    let mut vars = VarTable::new();
    for i in 1..=dim {
        for j in i + 1..=dim {
            vars.declare_pair(&index_name("l", i, j, wide), &index_name("lb", i, j, wide))
                .expect("fresh names");
        }
    }
    vars.declare_pair("mu", "mub").expect("fresh names");
    let mut b = Algebra::builder().vars(vars);
    for i in 1..=dim {
        b = b.pair(&format!("x{i}"), &format!("xb{i}"));
    }
    let alg = b.build().expect("valid torus algebra");
    StructureModel::free(&format!("torus{dim}"), &alg)
}

/// `Σ_{i<j} l_{ij} x_i ∧ x_j` on a torus model.
pub fn torus_lambda(model: &StructureModel) -> Form {
    let alg = model.algebra();
    let dim = alg.holomorphic_count();
    let wide = dim > 9;
    let mut sigma = Form::zero(alg);
    for i in 1..=dim {
        for j in i + 1..=dim {
            let c = PolyScalar::var_name(&index_name("l", i, j, wide));
            let m =
                Form::product(alg, &[&format!("x{i}"), &format!("x{j}")]).expect("torus generator");
            sigma += &m.scale(&c);
        }
    }
    sigma
}

/// The standard Kodaira surface: `dw1 = 0`, `dw2 = w1 ∧ wb1` and the
/// conjugate equations, with scalar variables `mu`/`mub`.
pub fn kodaira() -> StructureModel {
    let mut vars = VarTable::new();
    vars.declare_pair("mu", "mub").expect("fresh names");
    let alg = Algebra::builder()
        .vars(vars)
        .pair("w1", "wb1")
        .pair("w2", "wb2")
        .build()
        .expect("valid Kodaira algebra");
    let w1wb1 = Form::product(&alg, &["w1", "wb1"]).expect("generators exist");
    StructureModel::new(
        "kodaira",
        &alg,
        [
            ("w2".to_string(), w1wb1.clone()),
            ("wb2".to_string(), -w1wb1),
        ],
    )
    .expect("Kodaira equations are integrable")
}

fn nakamura_algebra() -> Arc<Algebra> {
    Algebra::builder()
        .holomorphic("phi1")
        .holomorphic("phi2")
        .holomorphic("phi3")
        .holomorphic("phi4")
        .antiholomorphic("om1")
        .antiholomorphic("om2")
        .antiholomorphic("om3")
        .antiholomorphic("om4")
        .conjugate("phi1", "om1")
        .conjugate("phi4", "om4")
        .build()
        .expect("valid Nakamura algebra")
}

/// The deformed Nakamura threefold times an elliptic curve at a numeric
/// parameter `t` with `|t| < 1`.
///
/// Only `phi1 <-> om1` and `phi4 <-> om4` are conjugate pairs: `om2` and
/// `om3` carry the factor `e^{±z1}` rather than its conjugate.
pub fn nakamura(t: &GaussianRational) -> Result<StructureModel, ModelError> {
    let norm = t.norm_sqr();
    if norm >= One::one() {
        return Err(ModelError::ParameterOutOfRange(format!(
            "|t|^2 = {norm} must be below 1"
        )));
    }
    let alg = nakamura_algebra();
    let c = (GaussianRational::one() - GaussianRational::from(norm))
        .inv()
        .expect("1 - |t|^2 is positive");
    let tc = t * &c;
    let k = |x: &GaussianRational| PolyScalar::constant(x.clone());
    let p = |names: &[&str]| Form::product(&alg, names).expect("generators exist");
    let d = [
        (
            "phi2",
            p(&["phi1", "phi2"]) * -k(&c) + p(&["phi2", "om1"]) * k(&tc),
        ),
        (
            "phi3",
            p(&["phi1", "phi3"]) * k(&c) - p(&["phi3", "om1"]) * k(&tc),
        ),
        (
            "om2",
            p(&["phi1", "om2"]) * -k(&c) - p(&["om1", "om2"]) * k(&tc),
        ),
        (
            "om3",
            p(&["phi1", "om3"]) * k(&c) + p(&["om1", "om3"]) * k(&tc),
        ),
    ];
    let name = if t.is_zero() {
        "nakamura".to_string()
    } else {
        format!("nakamura(t={t})")
    };
    StructureModel::new(&name, &alg, d.into_iter().map(|(g, f)| (g.to_string(), f)))
}

/// The 4-torus with the coframe deformation `w1 = x1 + t1 xb3`,
/// `w2 = x2 + t2 xb4`, `w3 = x3 + t1 xb1`, `w4 = x4 + t2 xb2`.
#[derive(Debug, Clone)]
pub struct Torus4Deformed {
    pub model: StructureModel,
    /// `x1^x2 + x3^x4`.
    pub sigma: Form,
    /// `w1^w2 + w3^w4 + t3 w1^w3 + t4 w2^w4`.
    pub sigma_t: Form,
    pub coframe: [Form; 4],
}

pub fn torus4_deformed() -> Torus4Deformed {
    let mut vars = VarTable::new();
    vars.declare_pairs([("t1", "tb1"), ("t2", "tb2"), ("t3", "tb3"), ("t4", "tb4")])
        .expect("fresh names");
    let alg = Algebra::builder()
        .vars(vars)
        .pair("x1", "xb1")
        .pair("x2", "xb2")
        .pair("x3", "xb3")
        .pair("x4", "xb4")
        .build()
        .expect("valid torus algebra");
    let model = StructureModel::free("torus4-deformed", &alg);
    let g = |n: &str| Form::generator(&alg, n).expect("generator exists");
    let t = |n: &str| PolyScalar::var_name(n);
    let coframe = [
        g("x1") + g("xb3") * t("t1"),
        g("x2") + g("xb4") * t("t2"),
        g("x3") + g("xb1") * t("t1"),
        g("x4") + g("xb2") * t("t2"),
    ];
    let [w1, w2, w3, w4] = &coframe;
    let sigma_t = w1 * w2 + w3 * w4 + (w1 * w3) * t("t3") + (w2 * w4) * t("t4");
    let sigma = g("x1") * g("x2") + g("x3") * g("x4");
    Torus4Deformed {
        model,
        sigma,
        sigma_t,
        coframe,
    }
}
