use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use super::model::StructureModel;
use crate::exterior::{same_algebra, Bidegree, Form, Monomial};
use crate::linalg::{Echelon, Matrix};
use crate::scalar::GaussianRational;

type Q = GaussianRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    DeRham,
    Dolbeault,
    BottChern,
    Aeppli,
}

impl Theory {
    pub const ALL: [Theory; 4] = [
        Theory::DeRham,
        Theory::Dolbeault,
        Theory::BottChern,
        Theory::Aeppli,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Theory::DeRham => "de-rham",
            Theory::Dolbeault => "dolbeault",
            Theory::BottChern => "bott-chern",
            Theory::Aeppli => "aeppli",
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theory {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "de-rham" | "derham" | "dr" => Ok(Theory::DeRham),
            "dolbeault" | "dol" => Ok(Theory::Dolbeault),
            "bott-chern" | "bottchern" | "bc" => Ok(Theory::BottChern),
            "aeppli" | "a" => Ok(Theory::Aeppli),
            other => Err(format!("unknown cohomology theory `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Degree(usize),
    Bidegree(Bidegree),
}

impl Slot {
    pub fn bi(p: usize, q: usize) -> Self {
        Slot::Bidegree(Bidegree::new(p, q))
    }

    fn shifted(&self, by: Bidegree) -> Slot {
        match self {
            Slot::Degree(k) => Slot::Degree(k + by.total()),
            Slot::Bidegree(b) => Slot::bi(b.p + by.p, b.q + by.q),
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Degree(k) => write!(f, "{k}"),
            Slot::Bidegree(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("model has unspecialized parameters; specialize them to numbers first")]
    UnspecializedParameters,
    #[error("{theory} cohomology is not indexed by {slot}")]
    InvalidSlot { theory: Theory, slot: Slot },
    #[error("form is not a cocycle for {0}")]
    NotClosed(Theory),
    #[error("form does not belong to the slot {0}")]
    WrongSlot(Slot),
    #[error("form belongs to a different model")]
    ModelMismatch,
    #[error("multiplier is not homogeneous")]
    NotHomogeneous,
}

/// One cohomology group with representatives and the data needed to
/// express further classes in that basis.
#[derive(Debug, Clone)]
pub struct CohomologyReport {
    pub theory: Theory,
    pub slot: Slot,
    pub dimension: usize,
    pub basis: Vec<Form>,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    cocycle: Matrix,
    /// Representatives followed by an independent spanning set of coboundaries.
    frame: Matrix,
}

impl CohomologyReport {
    fn coords(&self, f: &Form) -> Result<Vec<Q>, CohomologyError> {
        let mut v = vec![Q::zero(); self.monomials.len()];
        for (m, c) in f.terms() {
            let k = self
                .index
                .get(m)
                .ok_or(CohomologyError::WrongSlot(self.slot))?;
            v[*k] = c
                .as_constant()
                .ok_or(CohomologyError::UnspecializedParameters)?;
        }
        Ok(v)
    }

    /// Coordinates of `[f]` in the report basis.
    pub fn class_of(&self, f: &Form) -> Result<Vec<Q>, CohomologyError> {
        if let Some(b) = self.basis.first() {
            if !same_algebra(b.algebra(), f.algebra()) {
                return Err(CohomologyError::ModelMismatch);
            }
        }
        let v = self.coords(f)?;
        if !self.cocycle.mul_vec(&v).iter().all(Zero::is_zero) {
            return Err(CohomologyError::NotClosed(self.theory));
        }
        let x = self
            .frame
            .solve(&v)
            .expect("every cocycle lies in representatives plus coboundaries");
        Ok(x[..self.dimension].to_vec())
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }
}

type Op = fn(&StructureModel, &Form) -> Form;

fn op_d(m: &StructureModel, f: &Form) -> Form {
    m.d(f)
}
fn op_del(m: &StructureModel, f: &Form) -> Form {
    m.del(f)
}
fn op_delbar(m: &StructureModel, f: &Form) -> Form {
    m.delbar(f)
}
fn op_ddbar(m: &StructureModel, f: &Form) -> Form {
    m.del(&m.delbar(f))
}

fn space(model: &StructureModel, slot: Slot) -> Vec<Monomial> {
    let alg = model.algebra();
    match slot {
        Slot::Degree(k) if k <= alg.len() => alg.monomials_of_degree(k),
        Slot::Degree(_) => Vec::new(),
        Slot::Bidegree(b) => alg.monomials_of_bidegree(b),
    }
}

fn lower(slot: Slot, dp: usize, dq: usize) -> Option<Slot> {
    match slot {
        Slot::Degree(k) => k.checked_sub(dp + dq).map(Slot::Degree),
        Slot::Bidegree(b) => Some(Slot::bi(b.p.checked_sub(dp)?, b.q.checked_sub(dq)?)),
    }
}

/// Images of the monomials of `src` under `op`, as coordinate columns over `dst`.
fn images(model: &StructureModel, op: Op, src: &[Monomial], dst: &[Monomial]) -> Vec<Vec<Q>> {
    let alg = model.algebra();
    let index: HashMap<Monomial, usize> = dst.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    src.iter()
        .map(|m| {
            let image = op(model, &Form::monomial(alg, *m));
            let mut col = vec![Q::zero(); dst.len()];
            for (t, c) in image.terms() {
                let k = index[t];
                col[k] = c.as_constant().expect("specialized model");
            }
            col
        })
        .collect()
}

fn operator_matrix(model: &StructureModel, op: Op, src: &[Monomial], dst: &[Monomial]) -> Matrix {
    Matrix::from_columns(dst.len(), &images(model, op, src, dst))
}

fn target(slot: Slot, dp: usize, dq: usize) -> Slot {
    slot.shifted(Bidegree::new(dp, dq))
}

fn compute(model: &StructureModel, theory: Theory, slot: Slot) -> CohomologyReport {
    let c = space(model, slot);
    let n = c.len();
    let cocycle_ops: Vec<(Op, Slot)> = match theory {
        Theory::DeRham => vec![(op_d, target(slot, 1, 0))],
        Theory::Dolbeault => vec![(op_delbar, target(slot, 0, 1))],
        Theory::BottChern => vec![
            (op_del, target(slot, 1, 0)),
            (op_delbar, target(slot, 0, 1)),
        ],
        Theory::Aeppli => vec![(op_ddbar, target(slot, 1, 1))],
    };
    let cocycle = cocycle_ops
        .iter()
        .map(|(op, s)| operator_matrix(model, *op, &c, &space(model, *s)))
        .reduce(|a, b| a.vstack(&b))
        .unwrap_or_else(|| Matrix::zeros(0, n));
    let boundary_ops: Vec<(Op, Option<Slot>)> = match theory {
        Theory::DeRham => vec![(op_d, lower(slot, 1, 0))],
        Theory::Dolbeault => vec![(op_delbar, lower(slot, 0, 1))],
        Theory::BottChern => vec![(op_ddbar, lower(slot, 1, 1))],
        Theory::Aeppli => vec![(op_del, lower(slot, 1, 0)), (op_delbar, lower(slot, 0, 1))],
    };
    let mut echelon = Echelon::new(n);
    let mut boundaries = Vec::new();
    for (op, src) in boundary_ops {
        let Some(src) = src else { continue };
        for col in images(model, op, &space(model, src), &c) {
            if echelon.insert(&col) {
                boundaries.push(col);
            }
        }
    }
    let mut reps = Vec::new();
    for z in cocycle.kernel() {
        if echelon.insert(&z) {
            reps.push(z);
        }
    }
    let alg = model.algebra();
    let basis = reps
        .iter()
        .map(|v| Form::from_coordinates(alg, &c, v))
        .collect();
    let mut frame_cols = reps.clone();
    frame_cols.extend(boundaries);
    CohomologyReport {
        theory,
        slot,
        dimension: reps.len(),
        basis,
        index: c.iter().enumerate().map(|(k, m)| (*m, k)).collect(),
        monomials: c,
        cocycle,
        frame: Matrix::from_columns(n, &frame_cols),
    }
}

/// Computes (or fetches from the model's memo) one cohomology group.
pub fn cohomology(
    model: &StructureModel,
    theory: Theory,
    slot: Slot,
) -> Result<Arc<CohomologyReport>, CohomologyError> {
    match (theory, slot) {
        (Theory::DeRham, Slot::Degree(_)) => {}
        (Theory::DeRham, _) | (_, Slot::Degree(_)) => {
            return Err(CohomologyError::InvalidSlot { theory, slot })
        }
        _ => {}
    }
    if !model.is_specialized() {
        return Err(CohomologyError::UnspecializedParameters);
    }
    let key = (theory, slot);
    if let Some(r) = model.cached(&key) {
        return Ok(r);
    }
    Ok(model.store(key, compute(model, theory, slot)))
}

/// Both sides of `2 b_k ≤ Σ_{p+q=k} h^{p,q}_BC + h^{p,q}_A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DdbarCriterion {
    pub k: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

fn bidegrees_of_total(model: &StructureModel, k: usize) -> Vec<Bidegree> {
    let alg = model.algebra();
    let (h, a) = (alg.holomorphic_count(), alg.antiholomorphic_count());
    (0..=k)
        .filter(|&p| p <= h && k - p <= a)
        .map(|p| Bidegree::new(p, k - p))
        .collect()
}

pub fn ddbar_criterion(
    model: &StructureModel,
    k: usize,
) -> Result<DdbarCriterion, CohomologyError> {
    let b = cohomology(model, Theory::DeRham, Slot::Degree(k))?.dimension;
    let mut rhs = 0;
    for bd in bidegrees_of_total(model, k) {
        rhs += cohomology(model, Theory::BottChern, Slot::Bidegree(bd))?.dimension;
        rhs += cohomology(model, Theory::Aeppli, Slot::Bidegree(bd))?.dimension;
    }
    Ok(DdbarCriterion {
        k,
        lhs: 2 * b,
        rhs,
        holds: 2 * b == rhs,
    })
}

/// `b_k` against `Σ_{p+q=k} h^{p,q}_∂̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frolicher {
    pub k: usize,
    pub betti: usize,
    pub hodge_sum: usize,
}

impl Frolicher {
    pub fn degenerates(&self) -> bool {
        self.betti == self.hodge_sum
    }
}

pub fn frolicher(model: &StructureModel, k: usize) -> Result<Frolicher, CohomologyError> {
    let betti = cohomology(model, Theory::DeRham, Slot::Degree(k))?.dimension;
    let mut hodge_sum = 0;
    for bd in bidegrees_of_total(model, k) {
        hodge_sum += cohomology(model, Theory::Dolbeault, Slot::Bidegree(bd))?.dimension;
    }
    Ok(Frolicher {
        k,
        betti,
        hodge_sum,
    })
}

/// The map `[α] ↦ [Ω ∧ α]` between two slots of one theory.
#[derive(Debug, Clone)]
pub struct LambdaMap {
    pub source: Arc<CohomologyReport>,
    pub target: Arc<CohomologyReport>,
    /// `target.dimension × source.dimension`.
    pub matrix: Matrix,
}

pub fn lambda_map(
    model: &StructureModel,
    omega: &Form,
    theory: Theory,
    source: Slot,
) -> Result<LambdaMap, CohomologyError> {
    if !same_algebra(omega.algebra(), model.algebra()) {
        return Err(CohomologyError::ModelMismatch);
    }
    let shift = omega.bidegree().ok_or(CohomologyError::NotHomogeneous)?;
    let closed = match theory {
        Theory::DeRham => model.d(omega).is_zero(),
        Theory::Dolbeault => model.delbar(omega).is_zero(),
        Theory::BottChern | Theory::Aeppli => {
            model.del(omega).is_zero() && model.delbar(omega).is_zero()
        }
    };
    if !closed {
        return Err(CohomologyError::NotClosed(theory));
    }
    let src = cohomology(model, theory, source)?;
    let tgt = cohomology(model, theory, source.shifted(shift))?;
    let columns = src
        .basis
        .iter()
        .map(|a| tgt.class_of(&(omega * a)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LambdaMap {
        matrix: Matrix::from_columns(tgt.dimension, &columns),
        source: src,
        target: tgt,
    })
}
