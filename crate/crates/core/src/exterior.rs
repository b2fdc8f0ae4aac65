//! The free bigraded exterior algebra on a finite set of (1,0) and (0,1)
//! generators, with polynomial coefficients.
//!
//! Generators are stored in canonical order: every holomorphic generator in
//! declaration order, then every anti-holomorphic one. A [`Monomial`] is a
//! bitmask over these canonical positions and always denotes the product of
//! its factors in increasing position.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::{
    forward_owned_binop, join_signed, render_scalar_term, Assignment, GaussianRational, PolyScalar,
    ScalarError, VarTable,
};

pub const MAX_GENERATORS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("forms belong to different algebras")]
    AlgebraMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("`{0}` is both a generator and a scalar variable")]
    NameClash(String),
    #[error("generator `{0}` has no declared conjugate")]
    MissingConjugate(String),
    #[error("inconsistent conjugate declaration for `{0}`")]
    BadConjugate(String),
    #[error("invalid volume monomial: {0}")]
    InvalidVolume(String),
    #[error("at most {MAX_GENERATORS} generators are supported, got {0}")]
    TooManyGenerators(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A bidegree `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub p: usize,
    pub q: usize,
}

impl Bidegree {
    pub const HOLOMORPHIC: Bidegree = Bidegree { p: 1, q: 0 };
    pub const ANTIHOLOMORPHIC: Bidegree = Bidegree { p: 0, q: 1 };

    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn total(&self) -> usize {
        self.p + self.q
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.q, self.p)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub bidegree: Bidegree,
    /// Ordinal within its bidegree class.
    pub index: usize,
    /// Canonical position of the conjugate generator, if declared.
    pub conjugate: Option<usize>,
}

/// A wedge monomial as a set of canonical generator positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u128) -> Self {
        Monomial(bits)
    }

    pub fn generator(pos: usize) -> Self {
        Monomial(1u128 << pos)
    }

    pub fn bits(&self) -> u128 {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.0 >> pos & 1 == 1
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let pos = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(pos)
        })
    }

    /// `self ∧ other` as a sign and monomial, or `None` when a factor repeats.
    pub fn wedge(self, other: Monomial) -> Option<(bool, Monomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        for pos in other.positions() {
            swaps += (self.0 >> pos >> 1).count_ones();
        }
        Some((swaps % 2 == 1, Monomial(self.0 | other.0)))
    }

    /// The factors at positions below `pos`.
    pub fn below(&self, pos: usize) -> Monomial {
        Monomial(self.0 & ((1u128 << pos) - 1))
    }

    /// The factors at positions above `pos`.
    pub fn above(&self, pos: usize) -> Monomial {
        if pos >= 127 {
            Monomial(0)
        } else {
            Monomial(self.0 & !((1u128 << (pos + 1)) - 1))
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & diff & diff.wrapping_neg() != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({:?})", self.positions().collect::<Vec<_>>())
    }
}

/// Generator declarations, conjugation data, scalar variables and the volume
/// monomial of a free bigraded algebra.
#[derive(Debug, PartialEq, Eq)]
pub struct Algebra {
    generators: Vec<Generator>,
    by_name: HashMap<String, usize>,
    vars: VarTable,
    holomorphic: u128,
    volume: Monomial,
    volume_negative: bool,
}

#[derive(Debug, Clone, Default)]
pub struct AlgebraBuilder {
    holomorphic: Vec<String>,
    antiholomorphic: Vec<String>,
    conjugates: Vec<(String, String)>,
    vars: VarTable,
    volume: Option<Vec<String>>,
}

impl AlgebraBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vars(mut self, vars: VarTable) -> Self {
        self.vars = vars;
        self
    }

    pub fn holomorphic(mut self, name: &str) -> Self {
        self.holomorphic.push(name.to_string());
        self
    }

    pub fn antiholomorphic(mut self, name: &str) -> Self {
        self.antiholomorphic.push(name.to_string());
        self
    }

    pub fn generator(self, name: &str, bidegree: Bidegree) -> Self {
        if bidegree == Bidegree::HOLOMORPHIC {
            self.holomorphic(name)
        } else {
            self.antiholomorphic(name)
        }
    }

    /// Declares `holo` and `anti` as mutually conjugate generators.
    pub fn conjugate(mut self, holo: &str, anti: &str) -> Self {
        self.conjugates.push((holo.to_string(), anti.to_string()));
        self
    }

    /// Adds a conjugate pair of generators.
    pub fn pair(self, holo: &str, anti: &str) -> Self {
        self.holomorphic(holo)
            .antiholomorphic(anti)
            .conjugate(holo, anti)
    }

    /// The volume monomial as an ordered product of generator names. The
    /// default is every generator in canonical order.
    pub fn volume<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.volume = Some(names.iter().map(|s| s.as_ref().to_string()).collect());
        self
    }

    pub fn build(self) -> Result<Arc<Algebra>, ExteriorError> {
        let total = self.holomorphic.len() + self.antiholomorphic.len();
        if total > MAX_GENERATORS {
            return Err(ExteriorError::TooManyGenerators(total));
        }
        let mut generators = Vec::with_capacity(total);
        let mut by_name = HashMap::new();
        let classes = [
            (&self.holomorphic, Bidegree::HOLOMORPHIC),
            (&self.antiholomorphic, Bidegree::ANTIHOLOMORPHIC),
        ];
        for (names, bidegree) in classes {
            for (index, name) in names.iter().enumerate() {
                if by_name.insert(name.clone(), generators.len()).is_some() {
                    return Err(ExteriorError::DuplicateGenerator(name.clone()));
                }
                if self.vars.lookup(name).is_some() || name == "i" {
                    return Err(ExteriorError::NameClash(name.clone()));
                }
                generators.push(Generator {
                    name: name.clone(),
                    bidegree,
                    index,
                    conjugate: None,
                });
            }
        }
        for (a, b) in &self.conjugates {
            let ia = *by_name
                .get(a)
                .ok_or_else(|| ExteriorError::UnknownGenerator(a.clone()))?;
            let ib = *by_name
                .get(b)
                .ok_or_else(|| ExteriorError::UnknownGenerator(b.clone()))?;
            if generators[ia].bidegree == generators[ib].bidegree {
                return Err(ExteriorError::BadConjugate(a.clone()));
            }
            for (x, y) in [(ia, ib), (ib, ia)] {
                match generators[x].conjugate {
                    Some(existing) if existing != y => {
                        return Err(ExteriorError::BadConjugate(generators[x].name.clone()))
                    }
                    _ => generators[x].conjugate = Some(y),
                }
            }
        }
        let holomorphic = if self.holomorphic.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.holomorphic.len()) - 1
        };
        let (volume, volume_negative) = match &self.volume {
            None => {
                let bits = if total == 128 {
                    u128::MAX
                } else {
                    (1u128 << total) - 1
                };
                (Monomial(bits), false)
            }
            Some(names) => {
                let mut acc = (false, Monomial::ONE);
                for name in names {
                    let pos = *by_name
                        .get(name)
                        .ok_or_else(|| ExteriorError::UnknownGenerator(name.clone()))?;
                    let (neg, m) = acc
                        .1
                        .wedge(Monomial::generator(pos))
                        .ok_or_else(|| ExteriorError::InvalidVolume(format!("`{name}` repeats")))?;
                    acc = (acc.0 ^ neg, m);
                }
                if acc.1.degree() != total {
                    return Err(ExteriorError::InvalidVolume(
                        "the volume must contain every generator".into(),
                    ));
                }
                (acc.1, acc.0)
            }
        };
        Ok(Arc::new(Algebra {
            generators,
            by_name,
            vars: self.vars,
            holomorphic,
            volume,
            volume_negative,
        }))
    }
}

impl Algebra {
    pub fn builder() -> AlgebraBuilder {
        AlgebraBuilder::new()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn generator(&self, pos: usize) -> &Generator {
        &self.generators[pos]
    }

    pub fn holomorphic_count(&self) -> usize {
        self.holomorphic.count_ones() as usize
    }

    pub fn antiholomorphic_count(&self) -> usize {
        self.len() - self.holomorphic_count()
    }

    /// Canonical position of the `index`-th generator of the given class.
    pub fn class_position(&self, bidegree: Bidegree, index: usize) -> usize {
        if bidegree == Bidegree::HOLOMORPHIC {
            index
        } else {
            self.holomorphic_count() + index
        }
    }

    pub fn bidegree_of(&self, m: Monomial) -> Bidegree {
        let p = (m.0 & self.holomorphic).count_ones() as usize;
        Bidegree::new(p, m.degree() - p)
    }

    /// The product of all holomorphic generators.
    pub fn holomorphic_top(&self) -> Monomial {
        Monomial(self.holomorphic)
    }

    pub fn antiholomorphic_top(&self) -> Monomial {
        Monomial(self.volume.0 & !self.holomorphic)
    }

    /// The volume monomial and whether its declared ordering is odd relative
    /// to canonical order.
    pub fn volume(&self) -> (Monomial, bool) {
        (self.volume, self.volume_negative)
    }

    pub fn has_full_conjugation(&self) -> bool {
        self.generators.iter().all(|g| g.conjugate.is_some())
    }

    /// Every monomial of total degree `k`, ascending.
    pub fn monomials_of_degree(&self, k: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        subsets(0, self.len(), k, 0, &mut out);
        out.sort();
        out
    }

    /// Every monomial of bidegree `(p, q)`, ascending.
    pub fn monomials_of_bidegree(&self, b: Bidegree) -> Vec<Monomial> {
        let h = self.holomorphic_count();
        if b.p > h || b.q > self.len() - h {
            return Vec::new();
        }
        let mut holo = Vec::new();
        subsets(0, h, b.p, 0, &mut holo);
        let mut anti = Vec::new();
        subsets(h, self.len(), b.q, 0, &mut anti);
        let mut out: Vec<Monomial> = holo
            .iter()
            .flat_map(|a| anti.iter().map(move |c| Monomial(a.0 | c.0)))
            .collect();
        out.sort();
        out
    }

    fn render_monomial(&self, m: Monomial) -> String {
        m.positions()
            .map(|p| self.generators[p].name.as_str())
            .collect::<Vec<_>>()
            .join("^")
    }
}

fn subsets(start: usize, end: usize, k: usize, acc: u128, out: &mut Vec<Monomial>) {
    if k == 0 {
        out.push(Monomial(acc));
        return;
    }
    for pos in start..end {
        if end - pos < k {
            break;
        }
        subsets(pos + 1, end, k - 1, acc | 1u128 << pos, out);
    }
}

pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An element of the exterior algebra with polynomial coefficients.
#[derive(Clone)]
pub struct Form {
    alg: Arc<Algebra>,
    terms: BTreeMap<Monomial, PolyScalar>,
}

impl Form {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        Self {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<Algebra>) -> Self {
        Self::scalar(alg, PolyScalar::one())
    }

    pub fn scalar(alg: &Arc<Algebra>, c: PolyScalar) -> Self {
        Self::term(alg, Monomial::ONE, c)
    }

    pub fn term(alg: &Arc<Algebra>, m: Monomial, c: PolyScalar) -> Self {
        let mut f = Self::zero(alg);
        f.add_term(m, c);
        f
    }

    pub fn monomial(alg: &Arc<Algebra>, m: Monomial) -> Self {
        Self::term(alg, m, PolyScalar::one())
    }

    pub fn generator(alg: &Arc<Algebra>, name: &str) -> Result<Self, ExteriorError> {
        let pos = alg
            .position(name)
            .ok_or_else(|| ExteriorError::UnknownGenerator(name.to_string()))?;
        Ok(Self::monomial(alg, Monomial::generator(pos)))
    }

    /// The ordered wedge product of the named generators.
    pub fn product(alg: &Arc<Algebra>, names: &[&str]) -> Result<Self, ExteriorError> {
        names.iter().try_fold(Self::one(alg), |acc, n| {
            Ok(acc.wedge_unchecked(&Self::generator(alg, n)?))
        })
    }

    /// The volume form, normalized so that it integrates to `V`.
    pub fn volume(alg: &Arc<Algebra>) -> Self {
        let (m, neg) = alg.volume();
        let c = if neg {
            -PolyScalar::one()
        } else {
            PolyScalar::one()
        };
        Self::term(alg, m, c)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PolyScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> PolyScalar {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: PolyScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// The common total degree of the stored monomials, if homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(|m| self.alg.bidegree_of(*m));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn scale(&self, c: &PolyScalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        let mut out = Self::zero(&self.alg);
        for (m, k) in &self.terms {
            out.add_term(*m, k * c);
        }
        out
    }

    pub fn scale_gr(&self, c: &GaussianRational) -> Self {
        self.scale(&PolyScalar::constant(c.clone()))
    }

    pub fn wedge(&self, other: &Form) -> Result<Form, ExteriorError> {
        if !same_algebra(&self.alg, &other.alg) {
            return Err(ExteriorError::AlgebraMismatch);
        }
        Ok(self.wedge_unchecked(other))
    }

    fn wedge_unchecked(&self, other: &Form) -> Form {
        let mut out = Form::zero(&self.alg);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((neg, m)) = m1.wedge(*m2) {
                    let c = c1 * c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// `self^k` by repeated squaring; `f^0` is the unit.
    pub fn power(&self, mut k: u32) -> Form {
        let mut base = self.clone();
        let mut acc = Form::one(&self.alg);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.wedge_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.wedge_unchecked(&base);
            }
        }
        acc
    }

    /// The antilinear involution swapping each generator with its conjugate.
    pub fn conjugate(&self) -> Result<Form, ExteriorError> {
        let mut out = Form::zero(&self.alg);
        for (m, c) in &self.terms {
            let (neg, image) = self.conjugate_monomial(*m)?;
            let cc = c.conjugate(self.alg.vars())?;
            out.add_term(image, if neg { -cc } else { cc });
        }
        Ok(out)
    }

    fn conjugate_monomial(&self, m: Monomial) -> Result<(bool, Monomial), ExteriorError> {
        let mut acc = (false, Monomial::ONE);
        for pos in m.positions() {
            let g = self.alg.generator(pos);
            let c = g
                .conjugate
                .ok_or_else(|| ExteriorError::MissingConjugate(g.name.clone()))?;
            let (neg, next) = acc
                .1
                .wedge(Monomial::generator(c))
                .expect("conjugation is injective on generators");
            acc = (acc.0 ^ neg, next);
        }
        Ok(acc)
    }

    /// `∫ f`: the coefficient of the volume monomial times `V`.
    pub fn integrate(&self) -> PolyScalar {
        let (vol, neg) = self.alg.volume();
        let c = self.coefficient(vol);
        let c = if neg { -c } else { c };
        c * PolyScalar::volume()
    }

    pub fn bidegree_component(&self, b: Bidegree) -> Form {
        self.filter(|m| self.alg.bidegree_of(m) == b)
    }

    pub fn degree_component(&self, k: usize) -> Form {
        self.filter(|m| m.degree() == k)
    }

    /// Every nonzero bidegree component.
    pub fn components(&self) -> BTreeMap<Bidegree, Form> {
        let mut out: BTreeMap<Bidegree, Form> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(self.alg.bidegree_of(*m))
                .or_insert_with(|| Form::zero(&self.alg))
                .add_term(*m, c.clone());
        }
        out
    }

    fn filter(&self, keep: impl Fn(Monomial) -> bool) -> Form {
        Form {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(**m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn substitute(&self, assignment: &Assignment) -> Result<Form, ScalarError> {
        let mut out = Form::zero(&self.alg);
        for (m, c) in &self.terms {
            out.add_term(*m, c.substitute(assignment, self.alg.vars())?);
        }
        Ok(out)
    }

    /// Moves the form into another algebra that declares the same generator names.
    pub fn rebase(&self, alg: &Arc<Algebra>) -> Result<Form, ExteriorError> {
        let mut out = Form::zero(alg);
        for (m, c) in &self.terms {
            let mut acc = (false, Monomial::ONE);
            for pos in m.positions() {
                let name = &self.alg.generator(pos).name;
                let target = alg
                    .position(name)
                    .ok_or_else(|| ExteriorError::UnknownGenerator(name.clone()))?;
                let (neg, next) = acc
                    .1
                    .wedge(Monomial::generator(target))
                    .expect("distinct names");
                acc = (acc.0 ^ neg, next);
            }
            out.add_term(acc.1, if acc.0 { -c.clone() } else { c.clone() });
        }
        Ok(out)
    }

    /// `Some` when every coefficient is a number.
    pub fn constant_coefficients(&self) -> Option<Vec<(Monomial, GaussianRational)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.as_constant().map(|k| (*m, k)))
            .collect()
    }

    pub fn from_coordinates(
        alg: &Arc<Algebra>,
        basis: &[Monomial],
        coords: &[GaussianRational],
    ) -> Form {
        let mut out = Form::zero(alg);
        for (m, c) in basis.iter().zip(coords) {
            if !c.is_zero() {
                out.add_term(*m, PolyScalar::constant(c.clone()));
            }
        }
        out
    }

    fn check(&self, other: &Form) {
        assert!(
            same_algebra(&self.alg, &other.alg),
            "forms belong to different algebras"
        );
    }
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl Eq for Form {}

impl Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

/// `*` on forms is the wedge product. Panics on an algebra mismatch; use
/// [`Form::wedge`] for the checked variant.
impl Mul<&Form> for &Form {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        self.check(rhs);
        self.wedge_unchecked(rhs)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

forward_owned_binop!(Form, Add, add);
forward_owned_binop!(Form, Sub, sub);
forward_owned_binop!(Form, Mul, mul);

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        self.check(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        self.check(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl Mul<&PolyScalar> for &Form {
    type Output = Form;
    fn mul(self, rhs: &PolyScalar) -> Form {
        self.scale(rhs)
    }
}

impl Mul<PolyScalar> for Form {
    type Output = Form;
    fn mul(self, rhs: PolyScalar) -> Form {
        self.scale(&rhs)
    }
}

impl fmt::Display for Form {
    /// Renders as a flat sum such as `x1^x2 - 2*t1*x3^xb1`, which the
    /// expression parser reads back to the same form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mono = self.alg.render_monomial(*m);
            for (pp, k) in c.terms() {
                let (neg, body) = render_scalar_term(pp, k);
                let body = match (m.degree(), body.as_str()) {
                    (0, _) => body,
                    (_, "1") => mono.clone(),
                    _ => format!("{body}*{mono}"),
                };
                parts.push((neg, body));
            }
        }
        f.write_str(&join_signed(parts))
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn torus4() -> Arc<Algebra> {
        let mut vars = VarTable::new();
        vars.declare_pairs([("t1", "tb1"), ("t2", "tb2")]).unwrap();
        Algebra::builder()
            .vars(vars)
            .pair("x1", "xb1")
            .pair("x2", "xb2")
            .pair("x3", "xb3")
            .pair("x4", "xb4")
            .build()
            .unwrap()
    }

    fn g(alg: &Arc<Algebra>, names: &[&str]) -> Form {
        Form::product(alg, names).unwrap()
    }

    #[test]
    fn values_are_thread_safe() {
        fn check<T: Send + Sync>() {}
        check::<Form>();
        check::<Arc<Algebra>>();
    }

    #[test]
    fn repeated_generator_vanishes() {
        let a = torus4();
        assert!((g(&a, &["x1"]) * g(&a, &["x1"])).is_zero());
    }

    #[test]
    fn anticommutation_of_generators() {
        let a = torus4();
        assert_eq!(g(&a, &["x2", "x1"]), -g(&a, &["x1", "x2"]));
    }

    #[test]
    fn standard_symplectic_square() {
        let a = torus4();
        let s = g(&a, &["x1", "x2"]) + g(&a, &["x3", "x4"]);
        let expected = g(&a, &["x1", "x2", "x3", "x4"]).scale(&PolyScalar::from_int(2));
        assert_eq!(&s * &s, expected);
        assert_eq!(s.power(2), expected);
    }

    #[test]
    fn power_zero_is_unit() {
        let a = torus4();
        assert_eq!(g(&a, &["x1"]).power(0), Form::one(&a));
        assert!(g(&a, &["x1", "xb1"]).power(2).is_zero());
    }

    #[test]
    fn conjugation_of_generators() {
        let a = torus4();
        assert_eq!(g(&a, &["x1"]).conjugate().unwrap(), g(&a, &["xb1"]));
        assert_eq!(
            g(&a, &["x1", "xb2"]).conjugate().unwrap(),
            -g(&a, &["x2", "xb1"])
        );
    }

    #[test]
    fn integration() {
        let a = torus4();
        assert_eq!(Form::volume(&a).integrate(), PolyScalar::volume());
        let s = g(&a, &["x1", "x2"]) + g(&a, &["x3", "x4"]);
        let ss = &s * &s.conjugate().unwrap();
        assert_eq!(
            ss.power(2).integrate(),
            PolyScalar::volume() * PolyScalar::from_int(4)
        );
        assert!(g(&a, &["x1", "x2", "xb1"]).integrate().is_zero());
    }

    #[test]
    fn declared_volume_order_sets_sign() {
        let a = Algebra::builder()
            .pair("w1", "wb1")
            .pair("w2", "wb2")
            .volume(&["w1", "wb1", "w2", "wb2"])
            .build()
            .unwrap();
        assert_eq!(
            g(&a, &["w1", "wb1", "w2", "wb2"]).integrate(),
            PolyScalar::volume()
        );
        assert_eq!(
            g(&a, &["w1", "w2", "wb1", "wb2"]).integrate(),
            -PolyScalar::volume()
        );
    }

    #[test]
    fn bidegree_projection() {
        let a = torus4();
        let f = g(&a, &["x1", "x2"]) + g(&a, &["x1", "xb1"]);
        assert_eq!(
            f.bidegree_component(Bidegree::new(1, 1)),
            g(&a, &["x1", "xb1"])
        );
        assert!(f.bidegree_component(Bidegree::new(0, 2)).is_zero());
        let sum = f
            .components()
            .values()
            .fold(Form::zero(&a), |acc, c| acc + c);
        assert_eq!(sum, f);
    }

    #[test]
    fn rendering() {
        let a = torus4();
        let f = g(&a, &["x3", "x4"]) + g(&a, &["x1", "x2"]);
        assert_eq!(f.to_string(), "x1^x2 + x3^x4");
        let k = PolyScalar::var_name("t1") * PolyScalar::from_int(-2) + PolyScalar::one();
        assert_eq!(
            g(&a, &["x1", "xb1"]).scale(&k).to_string(),
            "x1^xb1 - 2*t1*x1^xb1"
        );
        assert_eq!(Form::zero(&a).to_string(), "0");
    }

    #[test]
    fn monomial_enumeration_counts() {
        let a = torus4();
        assert_eq!(a.monomials_of_degree(2).len(), 28);
        assert_eq!(a.monomials_of_bidegree(Bidegree::new(1, 1)).len(), 16);
        assert_eq!(a.monomials_of_bidegree(Bidegree::new(5, 0)).len(), 0);
    }

    #[test]
    fn monomial_order_is_degree_then_lex() {
        let m = |v: &[usize]| Monomial(v.iter().fold(0u128, |b, p| b | 1 << p));
        assert!(m(&[0, 1]) < m(&[0, 2]));
        assert!(m(&[0, 3]) < m(&[1, 2]));
        assert!(m(&[5]) < m(&[0, 1]));
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = torus4();
        let b = Algebra::builder().pair("y1", "yb1").build().unwrap();
        assert_eq!(
            g(&a, &["x1"]).wedge(&g(&b, &["y1"])).unwrap_err(),
            ExteriorError::AlgebraMismatch
        );
    }

    fn arb_form(alg: Arc<Algebra>, degree: usize) -> impl Strategy<Value = Form> {
        let basis = alg.monomials_of_degree(degree);
        let n = basis.len();
        prop::collection::vec((0..n, -3i64..=3, -2i64..=2, prop::bool::ANY), 1..5).prop_map(
            move |terms| {
                let mut f = Form::zero(&alg);
                for (k, re, im, with_var) in terms {
                    let mut c = PolyScalar::constant(GaussianRational::from_parts(re, im));
                    if with_var {
                        c = c * PolyScalar::var_name("t1");
                    }
                    f.add_term(basis[k], c);
                }
                f
            },
        )
    }

    fn arb_homogeneous() -> impl Strategy<Value = Form> {
        (0usize..=4).prop_flat_map(|d| arb_form(torus4(), d))
    }

    proptest! {
        #[test]
        fn graded_commutativity(a in arb_homogeneous(), b in arb_homogeneous()) {
            let sign = if a.degree().unwrap_or(0) * b.degree().unwrap_or(0) % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(&a * &b, (&b * &a).scale(&PolyScalar::from_int(sign)));
        }

        #[test]
        fn associativity(a in arb_homogeneous(), b in arb_homogeneous(), c in arb_homogeneous()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn conjugation_is_multiplicative(a in arb_homogeneous(), b in arb_homogeneous()) {
            let lhs = (&a * &b).conjugate().unwrap();
            prop_assert_eq!(lhs, a.conjugate().unwrap() * b.conjugate().unwrap());
            prop_assert_eq!(a.conjugate().unwrap().conjugate().unwrap(), a);
        }

        #[test]
        fn integration_commutes_with_conjugation(f in arb_form(torus4(), 8)) {
            let vars = f.algebra().vars().clone();
            prop_assert_eq!(
                f.conjugate().unwrap().integrate(),
                f.integrate().conjugate(&vars).unwrap()
            );
        }

        #[test]
        fn integration_is_linear(f in arb_form(torus4(), 8), h in arb_form(torus4(), 8), re in -3i64..3) {
            let c = PolyScalar::from_int(re) * PolyScalar::var_name("t2");
            prop_assert_eq!(
                (&f + &h.scale(&c)).integrate(),
                f.integrate() + &c * &h.integrate()
            );
        }
    }
}
