//! The Beauville–Bogomolov–Fujiki form attached to a complex symplectic
//! form on an invariant-form model.
//!
//! Integrals keep the volume variable `V` formal. [`normalize`] is the
//! presentation step `V ↦ 1/(μμ̄)`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::dga::{ModelError, StructureModel};
use crate::exterior::{same_algebra, Algebra, Bidegree, ExteriorError, Form, Monomial};
use crate::scalar::{
    Assignment, GaussianRational, PolyScalar, ScalarError, ScalarFraction, Var, VarTable,
};

use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BbfError {
    #[error("form is not d-closed: d({form}) = {residual}")]
    NotClosed { form: String, residual: String },
    #[error("symplectic form must have bidegree (2,0), got {0}")]
    NotHolomorphicTwoForm(String),
    #[error("expected a form of total degree 2")]
    NotTwoForm,
    #[error("expected a (1,1)-form")]
    NotType11,
    #[error("sigma is degenerate: sigma^n = 0")]
    DegenerateSymplectic,
    #[error("model needs a positive even number of holomorphic generators, found {0}")]
    OddHolomorphic(usize),
    #[error("antisymmetric matrix has odd size {0}")]
    OddSize(usize),
    #[error("closed-form Gram entries are not available: {0}")]
    UnsupportedBasis(String),
    #[error("form belongs to a different model")]
    ModelMismatch,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A model together with a closed non-degenerate `(2,0)`-form `σ`.
#[derive(Debug, Clone)]
pub struct SymplecticSpace {
    model: StructureModel,
    sigma: Form,
    sigma_bar: Form,
    half_dim: usize,
    mu: PolyScalar,
    mu_bar: PolyScalar,
    nu: BTreeMap<(usize, usize), PolyScalar>,
    /// `∫(σσ̄)^n`.
    top: PolyScalar,
    /// `(σσ̄)^{n-1}`.
    ss_pow: Form,
    /// `σ^{n-1} σ̄^n`.
    p_form: Form,
    /// `σ^n σ̄^{n-1}`.
    q_form: Form,
}

fn check_closed(model: &StructureModel, f: &Form) -> Result<(), BbfError> {
    let df = model.apply_d(f)?;
    if df.is_zero() {
        Ok(())
    } else {
        Err(BbfError::NotClosed {
            form: f.to_string(),
            residual: df.to_string(),
        })
    }
}

fn check_two_form(model: &StructureModel, f: &Form) -> Result<(), BbfError> {
    if !same_algebra(f.algebra(), model.algebra()) {
        return Err(BbfError::ModelMismatch);
    }
    if !f.is_zero() && f.degree() != Some(2) {
        return Err(BbfError::NotTwoForm);
    }
    check_closed(model, f)
}

pub fn make_symplectic(model: &StructureModel, sigma: &Form) -> Result<SymplecticSpace, BbfError> {
    let alg = model.algebra();
    if !same_algebra(sigma.algebra(), alg) {
        return Err(BbfError::ModelMismatch);
    }
    if sigma.is_zero() {
        return Err(BbfError::DegenerateSymplectic);
    }
    match sigma.bidegree() {
        Some(b) if b == Bidegree::new(2, 0) => {}
        Some(b) => return Err(BbfError::NotHolomorphicTwoForm(b.to_string())),
        None => return Err(BbfError::NotHolomorphicTwoForm("mixed".into())),
    }
    let h = alg.holomorphic_count();
    if h == 0 || h % 2 == 1 {
        return Err(BbfError::OddHolomorphic(h));
    }
    check_closed(model, sigma)?;
    let n = h / 2;
    let top = alg.holomorphic_top();
    let mu = sigma.power(n as u32).coefficient(top);
    if mu.is_zero() {
        return Err(BbfError::DegenerateSymplectic);
    }
    let lower = sigma.power(n as u32 - 1);
    let mut nu = BTreeMap::new();
    for i in 0..h {
        for j in i + 1..h {
            let m = Monomial::from_bits(top.bits() & !(1u128 << i) & !(1u128 << j));
            nu.insert((i + 1, j + 1), lower.coefficient(m));
        }
    }
    let sigma_bar = sigma.conjugate()?;
    let mu_bar = mu.conjugate(alg.vars())?;
    let ss = sigma * &sigma_bar;
    let ss_pow = ss.power(n as u32 - 1);
    let p_form = &lower * &sigma_bar.power(n as u32);
    let q_form = &sigma.power(n as u32) * &sigma_bar.power(n as u32 - 1);
    let top_integral = (&ss_pow * &ss).integrate();
    Ok(SymplecticSpace {
        model: model.clone(),
        sigma: sigma.clone(),
        sigma_bar,
        half_dim: n,
        mu,
        mu_bar,
        nu,
        top: top_integral,
        ss_pow,
        p_form,
        q_form,
    })
}

impl SymplecticSpace {
    pub fn model(&self) -> &StructureModel {
        &self.model
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.model.algebra()
    }

    pub fn sigma(&self) -> &Form {
        &self.sigma
    }

    pub fn sigma_bar(&self) -> &Form {
        &self.sigma_bar
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    /// Coefficient of `σ^n` on the holomorphic top monomial.
    pub fn mu(&self) -> &PolyScalar {
        &self.mu
    }

    pub fn mu_bar(&self) -> &PolyScalar {
        &self.mu_bar
    }

    /// `ν_{ij}` for `1 ≤ i < j ≤ 2n`.
    pub fn nu(&self, i: usize, j: usize) -> PolyScalar {
        let key = if i < j { (i, j) } else { (j, i) };
        self.nu.get(&key).cloned().unwrap_or_else(PolyScalar::zero)
    }

    pub fn nus(&self) -> &BTreeMap<(usize, usize), PolyScalar> {
        &self.nu
    }

    /// `∫(σσ̄)^n`.
    pub fn top_integral(&self) -> &PolyScalar {
        &self.top
    }

    pub fn specialize(&self, assignment: &Assignment) -> Result<SymplecticSpace, BbfError> {
        let model = self.model.specialize(assignment)?;
        let sigma = self.sigma.substitute(assignment)?.rebase(model.algebra())?;
        make_symplectic(&model, &sigma)
    }

    fn vars(&self) -> &VarTable {
        self.model.algebra().vars()
    }
}

/// `q_σ(α) = (n/2)·∫(σσ̄)^n·∫α²(σσ̄)^{n-1} + (1-n)·∫ασ^{n-1}σ̄^n·∫ασ^nσ̄^{n-1}`.
pub fn q_sigma(s: &SymplecticSpace, alpha: &Form) -> Result<PolyScalar, BbfError> {
    check_two_form(&s.model, alpha)?;
    let n = s.half_dim as i64;
    let first = (&(alpha * alpha) * &s.ss_pow).integrate();
    let half_n = GaussianRational::ratio(n, 2);
    let mut q = (&s.top * &first).scale(&half_n);
    if n != 1 {
        let a = (alpha * &s.p_form).integrate();
        let b = (alpha * &s.q_form).integrate();
        q += &(&a * &b).scale(&GaussianRational::from_int(1 - n));
    }
    Ok(q)
}

/// The polarization of [`q_sigma`], so that `bilinear(α, α) = q_σ(α)`.
pub fn bilinear(s: &SymplecticSpace, psi: &Form, eta: &Form) -> Result<PolyScalar, BbfError> {
    check_two_form(&s.model, psi)?;
    check_two_form(&s.model, eta)?;
    let n = s.half_dim as i64;
    let first = (&(psi * eta) * &s.ss_pow).integrate();
    let mut out = (&s.top * &first).scale(&GaussianRational::ratio(n, 2));
    if n != 1 {
        let cross = &(psi * &s.p_form).integrate() * &(eta * &s.q_form).integrate()
            + &(eta * &s.p_form).integrate() * &(psi * &s.q_form).integrate();
        out += &cross.scale(&GaussianRational::ratio(1 - n, 2));
    }
    Ok(out)
}

/// Substitutes `V ↦ 1/(μμ̄)` in a polynomial.
pub fn normalize(s: &SymplecticSpace, p: &PolyScalar) -> ScalarFraction {
    let v = Var::volume();
    let m = &s.mu * &s.mu_bar;
    let coeffs = p.coefficients_in(&v);
    let top = coeffs.keys().next_back().copied().unwrap_or(0);
    let mut num = PolyScalar::zero();
    for (k, c) in &coeffs {
        num += &(c * &m.pow(top - k));
    }
    ScalarFraction::new(num, m.pow(top)).expect("mu is nonzero")
}

pub fn normalize_fraction(s: &SymplecticSpace, f: &ScalarFraction) -> ScalarFraction {
    normalize(s, f.numerator())
        .checked_div(&normalize(s, f.denominator()))
        .expect("denominator stays nonzero")
}

/// Strictly upper-triangular storage of an antisymmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMatrix {
    size: usize,
    upper: BTreeMap<(usize, usize), PolyScalar>,
}

impl AntisymmetricMatrix {
    pub fn new(size: usize) -> Self {
        Self {
            size,
            upper: BTreeMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Sets `λ_{ij}` (0-based) and implicitly `λ_{ji} = -λ_{ij}`.
    pub fn set(&mut self, i: usize, j: usize, value: PolyScalar) {
        assert!(
            i < self.size && j < self.size && i != j,
            "index out of range"
        );
        if i < j {
            self.upper.insert((i, j), value);
        } else {
            self.upper.insert((j, i), -value);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> PolyScalar {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => PolyScalar::zero(),
            Less => self
                .upper
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(PolyScalar::zero),
            Greater => -self
                .upper
                .get(&(j, i))
                .cloned()
                .unwrap_or_else(PolyScalar::zero),
        }
    }

    /// The coefficient matrix of a holomorphic 2-form: `σ = Σ λ_{ij} x_i x_j`.
    pub fn of_form(sigma: &Form) -> Self {
        let alg = sigma.algebra();
        let mut out = Self::new(alg.holomorphic_count());
        for (m, c) in sigma.terms() {
            let pos: Vec<usize> = m.positions().collect();
            if pos.len() == 2 && pos[1] < alg.holomorphic_count() {
                out.set(pos[0], pos[1], c.clone());
            }
        }
        out
    }

    /// Numeric entries, when every `λ_{ij}` is a constant.
    pub fn to_matrix(&self) -> Option<crate::linalg::Matrix> {
        let mut out = crate::linalg::Matrix::zeros(self.size, self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                out[(i, j)] = self.get(i, j).as_constant()?;
            }
        }
        Some(out)
    }
}

/// Expansion along the first row.
pub fn pfaffian(a: &AntisymmetricMatrix) -> Result<PolyScalar, BbfError> {
    if a.size % 2 == 1 {
        return Err(BbfError::OddSize(a.size));
    }
    let idx: Vec<usize> = (0..a.size).collect();
    Ok(pf_rec(a, &idx))
}

fn pf_rec(a: &AntisymmetricMatrix, idx: &[usize]) -> PolyScalar {
    if idx.is_empty() {
        return PolyScalar::one();
    }
    let first = idx[0];
    let mut out = PolyScalar::zero();
    for k in 1..idx.len() {
        let entry = a.get(first, idx[k]);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[k]).collect();
        let term = &entry * &pf_rec(a, &rest);
        if k % 2 == 1 {
            out += &term;
        } else {
            out -= &term;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GramMode {
    /// Entrywise [`bilinear`] with `V` formal.
    Oracle,
    /// Torus entry formulas with denominator `2μμ̄`.
    ClosedForm,
}

impl std::str::FromStr for GramMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "oracle" => Ok(GramMode::Oracle),
            "closed-form" | "closed_form" | "closed" => Ok(GramMode::ClosedForm),
            other => Err(format!("unknown Gram mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub mode: GramMode,
    pub entries: Vec<Vec<ScalarFraction>>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn block(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Vec<Vec<ScalarFraction>> {
        rows.map(|i| self.entries[i][cols.clone()].to_vec())
            .collect()
    }

    pub fn normalized(&self, s: &SymplecticSpace) -> GramMatrix {
        GramMatrix {
            mode: self.mode,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| normalize_fraction(s, e)).collect())
                .collect(),
        }
    }
}

pub fn gram_matrix(
    s: &SymplecticSpace,
    basis: &[Form],
    mode: GramMode,
) -> Result<GramMatrix, BbfError> {
    let entries = match mode {
        GramMode::Oracle => {
            let mut rows = vec![vec![ScalarFraction::zero(); basis.len()]; basis.len()];
            for i in 0..basis.len() {
                for j in i..basis.len() {
                    let e = ScalarFraction::from_poly(bilinear(s, &basis[i], &basis[j])?);
                    rows[j][i] = e.clone();
                    rows[i][j] = e;
                }
            }
            rows
        }
        GramMode::ClosedForm => {
            if !s.model.has_zero_differential() || !s.algebra().has_full_conjugation() {
                return Err(BbfError::UnsupportedBasis(
                    "closed form needs a torus model".into(),
                ));
            }
            let keys = basis
                .iter()
                .map(|b| torus_key(s.algebra(), b))
                .collect::<Result<Vec<_>, _>>()?;
            let den = (&s.mu * &s.mu_bar).scale(&GaussianRational::from_int(2));
            let mut rows = Vec::with_capacity(basis.len());
            for a in &keys {
                let mut row = Vec::with_capacity(basis.len());
                for b in &keys {
                    let num = &(&a.coeff * &b.coeff) * &closed_entry(s, a.kind, b.kind)?;
                    row.push(ScalarFraction::new(num, den.clone())?);
                }
                rows.push(row);
            }
            rows
        }
    };
    Ok(GramMatrix { mode, entries })
}

/// Indices are 1-based torus coordinates; conjugate generators carry the
/// index of their holomorphic partner.
#[derive(Debug, Clone, Copy)]
enum TorusPair {
    Holo(usize, usize),
    Mixed(usize, usize),
    Anti(usize, usize),
}

struct TorusKey {
    kind: TorusPair,
    coeff: PolyScalar,
}

fn torus_key(alg: &Arc<Algebra>, f: &Form) -> Result<TorusKey, BbfError> {
    let unsupported =
        || BbfError::UnsupportedBasis(format!("`{f}` is not a multiple of a standard monomial"));
    if f.len() != 1 {
        return Err(unsupported());
    }
    let (m, c) = f.terms().next().expect("one term");
    let pos: Vec<usize> = m.positions().collect();
    if pos.len() != 2 {
        return Err(unsupported());
    }
    let h = alg.holomorphic_count();
    let index = |p: usize| -> usize {
        if p < h {
            p + 1
        } else {
            alg.generator(p).conjugate.expect("full conjugation") + 1
        }
    };
    let (i, j) = (index(pos[0]), index(pos[1]));
    let mut coeff = c.clone();
    let kind = match (pos[0] < h, pos[1] < h) {
        (true, true) => TorusPair::Holo(i, j),
        (true, false) => TorusPair::Mixed(i, j),
        (false, false) => {
            if i < j {
                TorusPair::Anti(i, j)
            } else {
                coeff = -coeff;
                TorusPair::Anti(j, i)
            }
        }
        (false, true) => unreachable!("canonical order puts holomorphic generators first"),
    };
    Ok(TorusKey { kind, coeff })
}

fn parity_sign(e: usize) -> PolyScalar {
    if e.is_multiple_of(2) {
        PolyScalar::one()
    } else {
        -PolyScalar::one()
    }
}

/// Numerator over `2μμ̄` of one closed-form entry.
fn closed_entry(s: &SymplecticSpace, a: TorusPair, b: TorusPair) -> Result<PolyScalar, BbfError> {
    use TorusPair::*;
    let nubar = |i, j| s.nu(i, j).conjugate(s.vars());
    Ok(match (a, b) {
        (Holo(al, be), Anti(ga, de)) | (Anti(ga, de), Holo(al, be)) => {
            &parity_sign(al + be + ga + de) * &(&s.nu(al, be) * &nubar(ga, de)?)
        }
        (Mixed(al, be), Mixed(ga, de)) => {
            if al == ga || be == de {
                return Ok(PolyScalar::zero());
            }
            let base = al + be + ga + de;
            let e = if (al < ga) == (be < de) {
                base + 1
            } else {
                base
            };
            let n = GaussianRational::from_int(s.half_dim as i64);
            let nu = s.nu(al.min(ga), al.max(ga));
            let nb = nubar(be.min(de), be.max(de))?;
            (&parity_sign(e) * &(&nu * &nb)).scale(&n)
        }
        _ => PolyScalar::zero(),
    })
}

/// `x_i x_j` for `i < j`, then `x_i x̄_j` row-major, then `x̄_i x̄_j`.
pub fn torus_standard_basis(model: &StructureModel) -> Vec<Form> {
    let alg = model.algebra();
    let h = alg.holomorphic_count();
    let x = |i: usize| Form::monomial(alg, Monomial::generator(i));
    let xb = |i: usize| {
        let c = alg
            .generator(i)
            .conjugate
            .expect("torus generators have conjugates");
        Form::monomial(alg, Monomial::generator(c))
    };
    let mut out = Vec::new();
    for i in 0..h {
        for j in i + 1..h {
            out.push(&x(i) * &x(j));
        }
    }
    for i in 0..h {
        for j in 0..h {
            out.push(&x(i) * &xb(j));
        }
    }
    for i in 0..h {
        for j in i + 1..h {
            out.push(&xb(i) * &xb(j));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockOrthogonality {
    pub pairs_checked: usize,
    /// Pairs from blocks that should vanish but do not.
    pub violations: Vec<(String, String)>,
}

impl BlockOrthogonality {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `⟨(2,0),(2,0)⟩ = ⟨(0,2),(0,2)⟩ = 0` and `⟨(2,0)⊕(0,2),(1,1)⟩ = 0`
/// over all degree-2 monomials.
pub fn check_block_orthogonality(s: &SymplecticSpace) -> Result<BlockOrthogonality, BbfError> {
    let alg = s.algebra();
    let classes: Vec<Vec<Form>> = [
        Bidegree::new(2, 0),
        Bidegree::new(1, 1),
        Bidegree::new(0, 2),
    ]
    .iter()
    .map(|b| {
        alg.monomials_of_bidegree(*b)
            .into_iter()
            .map(|m| Form::monomial(alg, m))
            .collect()
    })
    .collect();
    let blocks = [(0, 0), (2, 2), (0, 1), (2, 1)];
    let mut report = BlockOrthogonality {
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for (a, b) in blocks {
        for (i, f) in classes[a].iter().enumerate() {
            let start = if a == b { i } else { 0 };
            for g in &classes[b][start..] {
                report.pairs_checked += 1;
                if !bilinear(s, f, g)?.is_zero() {
                    report.violations.push((f.to_string(), g.to_string()));
                }
            }
        }
    }
    Ok(report)
}

/// Both sides of `∫(σσ̄)^n·∫α^{n+1}σ̄^{n-1} = (n+1)λ^{n-1} q_σ(α)` for
/// `α = λσ + α₁₁ + mubar·σ̄`, with the intermediate integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct VanishingIdentity {
    pub alpha: Form,
    pub lhs: PolyScalar,
    pub rhs: PolyScalar,
    pub q: PolyScalar,
    /// `∫α^{n+1}σ̄^{n-1}`.
    pub top_power: PolyScalar,
    /// `∫α₁₁²(σσ̄)^{n-1}`.
    pub mixed: PolyScalar,
}

impl VanishingIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn vanishing_identity(
    s: &SymplecticSpace,
    lambda: &PolyScalar,
    alpha11: &Form,
    mubar: &PolyScalar,
) -> Result<VanishingIdentity, BbfError> {
    if !same_algebra(alpha11.algebra(), s.algebra()) {
        return Err(BbfError::ModelMismatch);
    }
    if !alpha11.is_zero() && alpha11.bidegree() != Some(Bidegree::new(1, 1)) {
        return Err(BbfError::NotType11);
    }
    let alpha = &(&s.sigma.scale(lambda) + alpha11) + &s.sigma_bar.scale(mubar);
    check_closed(&s.model, &alpha)?;
    let n = s.half_dim as u32;
    let top_power = (&alpha.power(n + 1) * &s.sigma_bar.power(n - 1)).integrate();
    let lhs = &s.top * &top_power;
    let q = q_sigma(s, &alpha)?;
    let rhs = (&lambda.pow(n - 1) * &q).scale(&GaussianRational::from_int(n as i64 + 1));
    let mixed = (&(alpha11 * alpha11) * &s.ss_pow).integrate();
    Ok(VanishingIdentity {
        alpha,
        lhs,
        rhs,
        q,
        top_power,
        mixed,
    })
}

/// `8(q₁ + q₂) − 4(∫φ₁σ̄₁ − ∫φ₂σ̄₂)(∫φ₁σ₁ − ∫φ₂σ₂)` for a product of two
/// surfaces with `∫σᵢσ̄ᵢ = 1`.
pub fn product_q(
    q1: &PolyScalar,
    q2: &PolyScalar,
    p1s: &PolyScalar,
    p1sb: &PolyScalar,
    p2s: &PolyScalar,
    p2sb: &PolyScalar,
) -> PolyScalar {
    (q1 + q2).scale(&GaussianRational::from_int(8))
        - (&(p1sb - p2sb) * &(p1s - p2s)).scale(&GaussianRational::from_int(4))
}

/// Factor pairings for the product formula with the first factor replaced
/// by the 2-torus form `τ = (1+t)(x1x2 + t x1x̄1 − t x2x̄2 − t² x̄1x̄2)`
/// and the second factor left at `φ₂ = σ₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct KummerSurrogate {
    pub tau: Form,
    pub q1: PolyScalar,
    pub q2: PolyScalar,
    pub p1s: PolyScalar,
    pub p1sb: PolyScalar,
    pub p2s: PolyScalar,
    pub p2sb: PolyScalar,
    pub value: PolyScalar,
}

/// Computes the surrogate in the variable `t` (conjugate `tb`), with every
/// integral taken on a 2-torus with `σ = x1x2` and normalized by `V = 1`.
pub fn kummer_surrogate() -> KummerSurrogate {
    let mut vars = VarTable::new();
    vars.declare_pair("t", "tb").expect("fresh names");
    let alg = Algebra::builder()
        .vars(vars)
        .pair("x1", "xb1")
        .pair("x2", "xb2")
        .build()
        .expect("valid torus algebra");
    let model = StructureModel::free("torus2", &alg);
    let sigma = Form::product(&alg, &["x1", "x2"]).expect("generators exist");
    let space = make_symplectic(&model, &sigma).expect("x1^x2 is symplectic");
    let t = PolyScalar::var_name("t");
    let one = PolyScalar::one();
    let p = |a: &str, b: &str| Form::product(&alg, &[a, b]).expect("generators exist");
    let tau = (&p("x1", "x2") + &p("x1", "xb1").scale(&t)
        - p("x2", "xb2").scale(&t)
        - p("xb1", "xb2").scale(&t.pow(2)))
    .scale(&(&one + &t));
    let at_unit_volume = |x: PolyScalar| x.substitute_poly(&Var::volume(), &one);
    let q = |f: &Form| at_unit_volume(q_sigma(&space, f).expect("torus forms are closed"));
    let pair = |f: &Form, g: &Form| at_unit_volume((f * g).integrate());
    let k = KummerSurrogate {
        q1: q(&tau),
        q2: q(&sigma),
        p1s: pair(&tau, &sigma),
        p1sb: pair(&tau, space.sigma_bar()),
        p2s: pair(&sigma, &sigma),
        p2sb: pair(&sigma, space.sigma_bar()),
        value: PolyScalar::zero(),
        tau,
    };
    KummerSurrogate {
        value: product_q(&k.q1, &k.q2, &k.p1s, &k.p1sb, &k.p2s, &k.p2sb),
        ..k
    }
}
