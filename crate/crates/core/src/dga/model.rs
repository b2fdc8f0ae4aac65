use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use super::cohomology::{CohomologyReport, Slot, Theory};
use crate::exterior::{same_algebra, Algebra, Bidegree, ExteriorError, Form};
use crate::scalar::{Assignment, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// `d(d g) ≠ 0`.
    DSquared,
    /// `d g` has a component outside `(p+1, q) ⊕ (p, q+1)`.
    TypeSplitting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub generator: String,
    pub kind: ViolationKind,
    pub residual: Form,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::DSquared => write!(f, "d(d {}) = {}", self.generator, self.residual),
            ViolationKind::TypeSplitting => write!(
                f,
                "d {} has a forbidden component {}",
                self.generator, self.residual
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct IntegrabilityError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for IntegrabilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(
            f,
            "structure equations are not integrable: {}",
            parts.join("; ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Integrability(#[from] IntegrabilityError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("the differential of `{0}` is not a homogeneous 2-form")]
    BadDifferential(String),
    #[error("form belongs to a different model")]
    ModelMismatch,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
}

struct ModelInner {
    name: String,
    alg: Arc<Algebra>,
    d: Vec<Form>,
    del: Vec<Form>,
    delbar: Vec<Form>,
    cache: RwLock<HashMap<(Theory, Slot), Arc<CohomologyReport>>>,
}

/// A validated bigraded differential algebra. Cloning is cheap.
#[derive(Clone)]
pub struct StructureModel(Arc<ModelInner>);

impl fmt::Debug for StructureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StructureModel")
            .field("name", &self.0.name)
            .field("generators", &self.0.alg.len())
            .finish()
    }
}

/// Applies the graded derivation determined by its values on generators.
fn derive(op: &[Form], f: &Form) -> Form {
    let alg = f.algebra();
    let mut out = Form::zero(alg);
    for (m, c) in f.terms() {
        for pos in m.positions() {
            let below = m.below(pos);
            let above = m.above(pos);
            let sign = below.degree() % 2 == 1;
            for (dm, dc) in op[pos].terms() {
                let Some((s1, left)) = below.wedge(*dm) else {
                    continue;
                };
                let Some((s2, full)) = left.wedge(above) else {
                    continue;
                };
                let k = c * dc;
                out.add_term(full, if sign ^ s1 ^ s2 { -k } else { k });
            }
        }
    }
    out
}

/// Checks `d² = 0` and the bidegree splitting of `d` on every generator.
pub(crate) fn violations(alg: &Arc<Algebra>, d: &[Form]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (pos, g) in alg.generators().iter().enumerate() {
        let forbidden = if g.bidegree == Bidegree::HOLOMORPHIC {
            Bidegree::new(0, 2)
        } else {
            Bidegree::new(2, 0)
        };
        let bad = d[pos].bidegree_component(forbidden);
        if !bad.is_zero() {
            out.push(Violation {
                generator: g.name.clone(),
                kind: ViolationKind::TypeSplitting,
                residual: bad,
            });
        }
        let dd = derive(d, &d[pos]);
        if !dd.is_zero() {
            out.push(Violation {
                generator: g.name.clone(),
                kind: ViolationKind::DSquared,
                residual: dd,
            });
        }
    }
    out
}

impl StructureModel {
    /// Builds and validates a model. Generators missing from `differentials`
    /// are closed.
    pub fn new(
        name: &str,
        alg: &Arc<Algebra>,
        differentials: impl IntoIterator<Item = (String, Form)>,
    ) -> Result<Self, ModelError> {
        let mut d = vec![Form::zero(alg); alg.len()];
        for (gen, form) in differentials {
            let pos = alg
                .position(&gen)
                .ok_or_else(|| ExteriorError::UnknownGenerator(gen.clone()))?;
            if !same_algebra(form.algebra(), alg) {
                return Err(ModelError::ModelMismatch);
            }
            if !form.is_zero() && form.degree() != Some(2) {
                return Err(ModelError::BadDifferential(gen));
            }
            d[pos] = form;
        }
        Self::from_differentials(name, alg, d)
    }

    fn from_differentials(
        name: &str,
        alg: &Arc<Algebra>,
        d: Vec<Form>,
    ) -> Result<Self, ModelError> {
        let v = violations(alg, &d);
        if !v.is_empty() {
            return Err(IntegrabilityError { violations: v }.into());
        }
        let (del, delbar) = alg
            .generators()
            .iter()
            .zip(&d)
            .map(|(g, dg)| {
                let b = g.bidegree;
                (
                    dg.bidegree_component(Bidegree::new(b.p + 1, b.q)),
                    dg.bidegree_component(Bidegree::new(b.p, b.q + 1)),
                )
            })
            .unzip();
        Ok(StructureModel(Arc::new(ModelInner {
            name: name.to_string(),
            alg: alg.clone(),
            d,
            del,
            delbar,
            cache: RwLock::new(HashMap::new()),
        })))
    }

    /// A model with all differentials zero.
    pub fn free(name: &str, alg: &Arc<Algebra>) -> Self {
        Self::new(name, alg, []).expect("the zero differential is integrable")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.0.alg
    }

    /// The differential of the generator at canonical position `pos`.
    pub fn differential(&self, pos: usize) -> &Form {
        &self.0.d[pos]
    }

    pub fn has_zero_differential(&self) -> bool {
        self.0.d.iter().all(Form::is_zero)
    }

    /// Whether every structure constant is a number.
    pub fn is_specialized(&self) -> bool {
        self.0
            .d
            .iter()
            .all(|f| f.terms().all(|(_, c)| c.as_constant().is_some()))
    }

    /// Evaluates parameters in the structure equations and revalidates.
    pub fn specialize(&self, assignment: &Assignment) -> Result<Self, ModelError> {
        let d = self
            .0
            .d
            .iter()
            .map(|f| f.substitute(assignment))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_differentials(&self.0.name, &self.0.alg, d)
    }

    fn check(&self, f: &Form) -> Result<(), ModelError> {
        if same_algebra(f.algebra(), &self.0.alg) {
            Ok(())
        } else {
            Err(ModelError::ModelMismatch)
        }
    }

    pub fn apply_d(&self, f: &Form) -> Result<Form, ModelError> {
        self.check(f)?;
        Ok(derive(&self.0.d, f))
    }

    pub fn apply_del(&self, f: &Form) -> Result<Form, ModelError> {
        self.check(f)?;
        Ok(derive(&self.0.del, f))
    }

    pub fn apply_delbar(&self, f: &Form) -> Result<Form, ModelError> {
        self.check(f)?;
        Ok(derive(&self.0.delbar, f))
    }

    /// `d f`. Panics if `f` belongs to another algebra.
    pub fn d(&self, f: &Form) -> Form {
        self.apply_d(f).expect("form belongs to this model")
    }

    /// `∂ f`. Panics if `f` belongs to another algebra.
    pub fn del(&self, f: &Form) -> Form {
        self.apply_del(f).expect("form belongs to this model")
    }

    /// `∂̄ f`. Panics if `f` belongs to another algebra.
    pub fn delbar(&self, f: &Form) -> Form {
        self.apply_delbar(f).expect("form belongs to this model")
    }

    pub(crate) fn cached(&self, key: &(Theory, Slot)) -> Option<Arc<CohomologyReport>> {
        self.0.cache.read().ok()?.get(key).cloned()
    }

    /// Stores a report unless another thread got there first; either way the
    /// stored report is returned.
    pub(crate) fn store(
        &self,
        key: (Theory, Slot),
        report: CohomologyReport,
    ) -> Arc<CohomologyReport> {
        match self.0.cache.write() {
            Ok(mut cache) => cache.entry(key).or_insert_with(|| Arc::new(report)).clone(),
            Err(_) => Arc::new(report),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{kodaira, nakamura, torus};
    use crate::parse::parse_form;
    use crate::scalar::GaussianRational;

    #[test]
    fn torus_validates() {
        let m = torus(2);
        assert!(m.has_zero_differential());
        assert_eq!(m.algebra().len(), 4);
    }

    #[test]
    fn kodaira_validates_and_splits() {
        let m = kodaira();
        let a = m.algebra();
        let w2 = Form::generator(a, "w2").unwrap();
        assert_eq!(m.delbar(&w2), parse_form("w1^wb1", a).unwrap());
        assert!(m.del(&w2).is_zero());
    }

    #[test]
    fn nakamura_validates() {
        let t = GaussianRational::ratio(1, 2);
        assert!(nakamura(&t).is_ok());
        let t = GaussianRational::from_parts(0, 1);
        assert!(matches!(
            nakamura(&t),
            Err(ModelError::ParameterOutOfRange(_))
        ));
    }

    fn three_holomorphic() -> Arc<Algebra> {
        Algebra::builder()
            .pair("g1", "gb1")
            .pair("g2", "gb2")
            .pair("g3", "gb3")
            .pair("g4", "gb4")
            .build()
            .unwrap()
    }

    #[test]
    fn cyclic_two_step_equations_are_closed() {
        // dg1 = g2^g3, dg2 = g1^g3: every term of d(d g) carries g3 twice.
        let a = three_holomorphic();
        let diffs = [
            ("g1".to_string(), parse_form("g2^g3", &a).unwrap()),
            ("g2".to_string(), parse_form("g1^g3", &a).unwrap()),
        ];
        assert!(StructureModel::new("cyclic", &a, diffs).is_ok());
    }

    #[test]
    fn non_integrable_equations_are_rejected() {
        let a = three_holomorphic();
        let diffs = [
            ("g1".to_string(), parse_form("g2^g3", &a).unwrap()),
            ("g3".to_string(), parse_form("g1^g4", &a).unwrap()),
        ];
        let err = StructureModel::new("bad", &a, diffs).unwrap_err();
        let ModelError::Integrability(e) = err else {
            panic!("expected an integrability error");
        };
        assert_eq!(e.violations.len(), 2);
        assert!(e
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::DSquared));
        assert_eq!(e.violations[0].generator, "g1");
        assert_eq!(
            e.violations[0].residual,
            parse_form("g1^g2^g4", &a).unwrap()
        );
        assert_eq!(e.violations[1].generator, "g3");
        assert_eq!(
            e.violations[1].residual,
            parse_form("g2^g3^g4", &a).unwrap()
        );
    }

    #[test]
    fn wrong_type_is_rejected() {
        let a = three_holomorphic();
        let diffs = [("g1".to_string(), parse_form("gb2^gb3", &a).unwrap())];
        let ModelError::Integrability(e) = StructureModel::new("bad", &a, diffs).unwrap_err()
        else {
            panic!("expected an integrability error");
        };
        assert_eq!(e.violations[0].kind, ViolationKind::TypeSplitting);
    }

    #[test]
    fn differential_must_be_a_two_form() {
        let a = three_holomorphic();
        let diffs = [("g1".to_string(), parse_form("g2", &a).unwrap())];
        assert_eq!(
            StructureModel::new("bad", &a, diffs).unwrap_err(),
            ModelError::BadDifferential("g1".into())
        );
    }

    #[test]
    fn constants_are_closed() {
        let m = kodaira();
        let c = Form::scalar(m.algebra(), crate::scalar::PolyScalar::from_int(7));
        assert!(m.d(&c).is_zero());
    }

    #[test]
    fn foreign_forms_are_rejected() {
        let m = kodaira();
        let other = torus(2);
        let x1 = Form::generator(other.algebra(), "x1").unwrap();
        assert_eq!(m.apply_d(&x1).unwrap_err(), ModelError::ModelMismatch);
    }
}
