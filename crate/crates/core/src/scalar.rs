//! Exact coefficients: Gaussian rationals, polynomials over them in named
//! formal parameters, and fraction pairs of such polynomials.
//!
//! Every variable is an interned name. Conjugation is not a property of the
//! variable itself but of a [`VarTable`], which pairs each variable with its
//! formal conjugate (`t1 <-> tb1`) or declares it real (`V`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Name of the formal total volume `∫ Vol`, declared real in every table.
pub const VOLUME_VAR: &str = "V";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("variable `{0}` has no conjugation declaration")]
    UnknownVariable(String),
    #[error("assignment is not conjugation-consistent at `{0}`")]
    ConjugationMismatch(String),
    #[error("variable `{0}` is already declared")]
    DuplicateVariable(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// A number `re + im·i` with both parts exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num/den + 0i`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    pub fn from_parts(re: i64, im: i64) -> Self {
        Self::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn i() -> Self {
        Self::from_parts(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self * &inv)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Rendering used inside larger expressions: a leading sign flag plus an
    /// unsigned body. Values with both parts nonzero come back parenthesized.
    fn signed_parts(&self) -> (bool, String) {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => (self.re.is_negative(), render_rational(&self.re.abs())),
            (true, false) => {
                let mag = self.im.abs();
                let body = if mag.is_one() {
                    "i".to_string()
                } else {
                    format!("{}*i", render_rational(&mag))
                };
                (self.im.is_negative(), body)
            }
            (false, false) => (false, format!("({self})")),
        }
    }
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", render_rational(&self.re));
        }
        let mag = self.im.abs();
        let imag = if mag.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", render_rational(&mag))
        };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{imag}")
            } else {
                write!(f, "{imag}")
            }
        } else {
            write!(f, "{} {sign} {imag}", render_rational(&self.re))
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned_binop {
    ($ty:ty, $tr:ident, $m:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty {
                (&self).$m(rhs)
            }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                self.$m(&rhs)
            }
        }
    };
}
pub(crate) use forward_owned_binop;

forward_owned_binop!(GaussianRational, Add, add);
forward_owned_binop!(GaussianRational, Sub, sub);
forward_owned_binop!(GaussianRational, Mul, mul);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

/// An interned variable name. Ordered by name so that every rendering is
/// independent of creation order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn volume() -> Self {
        Var::new(VOLUME_VAR)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conjugation {
    Real,
    Pair(Var),
}

/// The conjugation declarations for a family of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    entries: BTreeMap<Var, Conjugation>,
}

impl Default for VarTable {
    fn default() -> Self {
        Self::new()
    }
}

impl VarTable {
    /// A table holding only the real volume variable `V`.
    pub fn new() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(Var::volume(), Conjugation::Real);
        Self { entries }
    }

    pub fn declare_real(&mut self, name: &str) -> Result<Var, ScalarError> {
        let v = Var::new(name);
        if self.entries.contains_key(&v) {
            return Err(ScalarError::DuplicateVariable(name.to_string()));
        }
        self.entries.insert(v.clone(), Conjugation::Real);
        Ok(v)
    }

    /// Declares `name` and `conj_name` as a conjugate pair. Passing the same
    /// name twice declares a real variable.
    pub fn declare_pair(&mut self, name: &str, conj_name: &str) -> Result<(Var, Var), ScalarError> {
        if name == conj_name {
            let v = self.declare_real(name)?;
            return Ok((v.clone(), v));
        }
        let a = Var::new(name);
        let b = Var::new(conj_name);
        for v in [&a, &b] {
            if self.entries.contains_key(v) {
                return Err(ScalarError::DuplicateVariable(v.name().to_string()));
            }
        }
        self.entries.insert(a.clone(), Conjugation::Pair(b.clone()));
        self.entries.insert(b.clone(), Conjugation::Pair(a.clone()));
        Ok((a, b))
    }

    /// Declares a batch of pairs sharing a naming scheme, e.g. `t1..t4` with
    /// conjugates `tb1..tb4`.
    pub fn declare_pairs<'a>(
        &mut self,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<(), ScalarError> {
        for (a, b) in pairs {
            self.declare_pair(a, b)?;
        }
        Ok(())
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.entries.contains_key(v)
    }

    pub fn lookup(&self, name: &str) -> Option<&Var> {
        self.entries.get_key_value(&Var::new(name)).map(|(k, _)| k)
    }

    pub fn conjugate_of(&self, v: &Var) -> Result<Var, ScalarError> {
        match self.entries.get(v) {
            Some(Conjugation::Real) => Ok(v.clone()),
            Some(Conjugation::Pair(w)) => Ok(w.clone()),
            None => Err(ScalarError::UnknownVariable(v.name().to_string())),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Conjugation)> {
        self.entries.iter()
    }

    /// Merges the declarations of `other` into `self`; identical redeclarations
    /// are accepted.
    pub fn merge(&mut self, other: &VarTable) -> Result<(), ScalarError> {
        for (v, c) in &other.entries {
            match self.entries.get(v) {
                Some(existing) if existing == c => {}
                Some(_) => return Err(ScalarError::DuplicateVariable(v.name().to_string())),
                None => {
                    self.entries.insert(v.clone(), c.clone());
                }
            }
        }
        Ok(())
    }
}

/// A product of variable powers, kept sorted by variable with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PowerProduct(Vec<(Var, u32)>);

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        PowerProduct(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    /// Drops the factor of `v`, returning the remaining product and the removed exponent.
    pub fn split_off(&self, v: &Var) -> (PowerProduct, u32) {
        let e = self.exponent(v);
        let rest = self.0.iter().filter(|(w, _)| w != v).cloned().collect();
        (PowerProduct(rest), e)
    }

    fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        PowerProduct(out)
    }

    /// Whether `self` divides `other`.
    fn divides(&self, other: &PowerProduct) -> bool {
        self.0.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    fn div_exact(&self, divisor: &PowerProduct) -> PowerProduct {
        PowerProduct(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let r = e - divisor.exponent(v);
                    (r > 0).then(|| (v.clone(), r))
                })
                .collect(),
        )
    }

    pub(crate) fn gcd(&self, other: &PowerProduct) -> PowerProduct {
        PowerProduct(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let m = (*e).min(other.exponent(v));
                    (m > 0).then(|| (v.clone(), m))
                })
                .collect(),
        )
    }
}

impl Ord for PowerProduct {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PowerProduct {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Values assigned to variables by [`PolyScalar::substitute`].
pub type Assignment = BTreeMap<Var, GaussianRational>;

/// A sparse polynomial with Gaussian-rational coefficients. Zero
/// coefficients are never stored, so equality is term-map equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyScalar {
    terms: BTreeMap<PowerProduct, GaussianRational>,
}

impl PolyScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut p = Self::zero();
        p.add_term(PowerProduct::one(), c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn var(v: &Var) -> Self {
        Self::var_name(v.name())
    }

    pub fn var_name(name: &str) -> Self {
        let mut p = Self::zero();
        p.add_term(PowerProduct::var(Var::new(name)), GaussianRational::one());
        p
    }

    /// The formal volume `V`.
    pub fn volume() -> Self {
        Self::var_name(VOLUME_VAR)
    }

    pub fn monomial(c: GaussianRational, m: PowerProduct) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PowerProduct, &GaussianRational)> {
        self.terms.iter()
    }

    /// `Some(c)` when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(PowerProduct::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(PowerProduct::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: PowerProduct, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Antilinear involution swapping every variable with its declared conjugate.
    pub fn conjugate(&self, table: &VarTable) -> Result<Self, ScalarError> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut factors: Vec<(Var, u32)> = Vec::with_capacity(m.0.len());
            for (v, e) in &m.0 {
                factors.push((table.conjugate_of(v)?, *e));
            }
            factors.sort_by(|a, b| a.0.cmp(&b.0));
            out.add_term(PowerProduct(factors), c.conj());
        }
        Ok(out)
    }

    /// Evaluates the assigned variables, leaving the rest formal.
    ///
    /// A pair partner that is not assigned is forced to the conjugate value;
    /// if both partners are assigned they must be conjugate to each other, and
    /// real variables only accept real values.
    pub fn substitute(
        &self,
        assignment: &Assignment,
        table: &VarTable,
    ) -> Result<Self, ScalarError> {
        let full = complete_assignment(assignment, table)?;
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (v, e) in &m.0 {
                match full.get(v) {
                    Some(val) => coeff = &coeff * &val.pow(*e),
                    None => rest.push((v.clone(), *e)),
                }
            }
            out.add_term(PowerProduct(rest), coeff);
        }
        Ok(out)
    }

    /// Replaces variable `v` by the polynomial `value`.
    pub fn substitute_poly(&self, v: &Var, value: &PolyScalar) -> Self {
        let mut out = Self::zero();
        let mut powers: BTreeMap<u32, PolyScalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            let p = powers.entry(e).or_insert_with(|| value.pow(e)).clone();
            out += &(&PolyScalar::monomial(c.clone(), rest) * &p);
        }
        out
    }

    /// Splits into coefficients of the powers of `v`: `self = Σ_k c_k v^k`.
    pub fn coefficients_in(&self, v: &Var) -> BTreeMap<u32, PolyScalar> {
        let mut out: BTreeMap<u32, PolyScalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// The positive rational gcd of all real and imaginary parts (zero for zero).
    pub fn rational_content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            for part in [&c.re, &c.im] {
                if part.is_zero() {
                    continue;
                }
                num = num.gcd(part.numer());
                den = den.lcm(part.denom());
            }
        }
        BigRational::new(num, den)
    }

    /// The largest power product dividing every term.
    pub fn monomial_content(&self) -> PowerProduct {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return PowerProduct::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    /// Exact division by a power product that divides every term.
    pub fn div_power_product(&self, m: &PowerProduct) -> Option<Self> {
        if !self.terms.keys().all(|t| m.divides(t)) {
            return None;
        }
        Some(Self {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.div_exact(m), c.clone()))
                .collect(),
        })
    }
}

fn complete_assignment(
    assignment: &Assignment,
    table: &VarTable,
) -> Result<Assignment, ScalarError> {
    let mut full = assignment.clone();
    for (v, val) in assignment {
        match table.conjugate_of(v) {
            Ok(w) if &w == v => {
                if !val.is_real() {
                    return Err(ScalarError::ConjugationMismatch(v.name().to_string()));
                }
            }
            Ok(w) => match assignment.get(&w) {
                Some(other) if *other != val.conj() => {
                    return Err(ScalarError::ConjugationMismatch(v.name().to_string()))
                }
                Some(_) => {}
                None => {
                    full.insert(w, val.conj());
                }
            },
            Err(_) => {}
        }
    }
    Ok(full)
}

impl From<GaussianRational> for PolyScalar {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for PolyScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add<&PolyScalar> for &PolyScalar {
    type Output = PolyScalar;
    fn add(self, rhs: &PolyScalar) -> PolyScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&PolyScalar> for &PolyScalar {
    type Output = PolyScalar;
    fn sub(self, rhs: &PolyScalar) -> PolyScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&PolyScalar> for &PolyScalar {
    type Output = PolyScalar;
    fn mul(self, rhs: &PolyScalar) -> PolyScalar {
        let mut out = PolyScalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &PolyScalar {
    type Output = PolyScalar;
    fn neg(self) -> PolyScalar {
        PolyScalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for PolyScalar {
    type Output = PolyScalar;
    fn neg(self) -> PolyScalar {
        -&self
    }
}

forward_owned_binop!(PolyScalar, Add, add);
forward_owned_binop!(PolyScalar, Sub, sub);
forward_owned_binop!(PolyScalar, Mul, mul);

impl AddAssign<&PolyScalar> for PolyScalar {
    fn add_assign(&mut self, rhs: &PolyScalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&PolyScalar> for PolyScalar {
    fn sub_assign(&mut self, rhs: &PolyScalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl MulAssign<&PolyScalar> for PolyScalar {
    fn mul_assign(&mut self, rhs: &PolyScalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for PolyScalar {
    fn sum<I: Iterator<Item = PolyScalar>>(iter: I) -> Self {
        iter.fold(PolyScalar::zero(), |acc, p| acc + p)
    }
}

/// Renders a single `coefficient * product` term as a sign and an unsigned body.
pub(crate) fn render_scalar_term(m: &PowerProduct, c: &GaussianRational) -> (bool, String) {
    let (neg, body) = c.signed_parts();
    if m.is_one() {
        return (neg, body);
    }
    if body == "1" {
        (neg, m.to_string())
    } else {
        (neg, format!("{body}*{m}"))
    }
}

pub(crate) fn join_signed(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (k, (neg, body)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (0, false) => out.push_str(&body),
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
    }
    out
}

impl fmt::Display for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&join_signed(
            self.terms.iter().map(|(m, c)| render_scalar_term(m, c)),
        ))
    }
}

impl fmt::Debug for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `numerator / denominator` with equality by cross-multiplication.
#[derive(Clone)]
pub struct ScalarFraction {
    numerator: PolyScalar,
    denominator: PolyScalar,
}

impl ScalarFraction {
    pub fn new(numerator: PolyScalar, denominator: PolyScalar) -> Result<Self, ScalarError> {
        if denominator.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self {
            numerator,
            denominator,
        }
        .reduced())
    }

    pub fn from_poly(p: PolyScalar) -> Self {
        Self {
            numerator: p,
            denominator: PolyScalar::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(PolyScalar::zero())
    }

    pub fn numerator(&self) -> &PolyScalar {
        &self.numerator
    }

    pub fn denominator(&self) -> &PolyScalar {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Removes integer content and common power products, and folds constant
    /// denominators into the numerator.
    fn reduced(self) -> Self {
        let Self {
            mut numerator,
            mut denominator,
        } = self;
        if numerator.is_zero() {
            return Self::from_poly(numerator);
        }
        let common = numerator
            .monomial_content()
            .gcd(&denominator.monomial_content());
        if !common.is_one() {
            numerator = numerator.div_power_product(&common).unwrap_or(numerator);
            denominator = denominator
                .div_power_product(&common)
                .unwrap_or(denominator);
        }
        if let Some(c) = denominator.as_constant() {
            let inv = c.inv().expect("denominator is nonzero");
            return Self::from_poly(numerator.scale(&inv));
        }
        let cn = numerator.rational_content();
        let cd = denominator.rational_content();
        let factor = GaussianRational::from(&cn / &cd);
        numerator = numerator.scale(&GaussianRational::from(cn.recip()));
        denominator = denominator.scale(&GaussianRational::from(cd.recip()));
        numerator = numerator.scale(&factor);
        Self {
            numerator,
            denominator,
        }
    }

    pub fn conjugate(&self, table: &VarTable) -> Result<Self, ScalarError> {
        Self::new(
            self.numerator.conjugate(table)?,
            self.denominator.conjugate(table)?,
        )
    }

    pub fn substitute(
        &self,
        assignment: &Assignment,
        table: &VarTable,
    ) -> Result<Self, ScalarError> {
        Self::new(
            self.numerator.substitute(assignment, table)?,
            self.denominator.substitute(assignment, table)?,
        )
    }

    pub fn checked_div(&self, rhs: &ScalarFraction) -> Result<Self, ScalarError> {
        Self::new(
            &self.numerator * &rhs.denominator,
            &self.denominator * &rhs.numerator,
        )
    }
}

impl PartialEq for ScalarFraction {
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl Eq for ScalarFraction {}

impl From<PolyScalar> for ScalarFraction {
    fn from(p: PolyScalar) -> Self {
        Self::from_poly(p)
    }
}

impl Add<&ScalarFraction> for &ScalarFraction {
    type Output = ScalarFraction;
    fn add(self, rhs: &ScalarFraction) -> ScalarFraction {
        if self.denominator == rhs.denominator {
            return ScalarFraction {
                numerator: &self.numerator + &rhs.numerator,
                denominator: self.denominator.clone(),
            }
            .reduced();
        }
        ScalarFraction {
            numerator: &self.numerator * &rhs.denominator + &rhs.numerator * &self.denominator,
            denominator: &self.denominator * &rhs.denominator,
        }
        .reduced()
    }
}

impl Sub<&ScalarFraction> for &ScalarFraction {
    type Output = ScalarFraction;
    fn sub(self, rhs: &ScalarFraction) -> ScalarFraction {
        self + &(-rhs)
    }
}

impl Mul<&ScalarFraction> for &ScalarFraction {
    type Output = ScalarFraction;
    fn mul(self, rhs: &ScalarFraction) -> ScalarFraction {
        ScalarFraction {
            numerator: &self.numerator * &rhs.numerator,
            denominator: &self.denominator * &rhs.denominator,
        }
        .reduced()
    }
}

impl Neg for &ScalarFraction {
    type Output = ScalarFraction;
    fn neg(self) -> ScalarFraction {
        ScalarFraction {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }
}

forward_owned_binop!(ScalarFraction, Add, add);
forward_owned_binop!(ScalarFraction, Sub, sub);
forward_owned_binop!(ScalarFraction, Mul, mul);

impl fmt::Display for ScalarFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            return write!(f, "{}", self.numerator);
        }
        let num = if self.numerator.len() > 1 {
            format!("({})", self.numerator)
        } else {
            self.numerator.to_string()
        };
        let den = self.denominator.to_string();
        let atomic = den.chars().all(|c| c.is_alphanumeric() || c == '_');
        if atomic {
            write!(f, "{num} / {den}")
        } else {
            write!(f, "{num} / ({den})")
        }
    }
}

impl fmt::Debug for ScalarFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table() -> VarTable {
        let mut t = VarTable::new();
        t.declare_pairs([("t1", "tb1"), ("t2", "tb2")]).unwrap();
        t
    }

    fn v(name: &str) -> PolyScalar {
        PolyScalar::var_name(name)
    }

    fn gr(re: i64, im: i64) -> PolyScalar {
        PolyScalar::constant(GaussianRational::from_parts(re, im))
    }

    #[test]
    fn conjugate_i() {
        let i = PolyScalar::constant(GaussianRational::i());
        assert_eq!(i.conjugate(&table()).unwrap(), gr(0, -1));
    }

    #[test]
    fn conjugate_declared_pair() {
        assert_eq!(v("t1").conjugate(&table()).unwrap(), v("tb1"));
    }

    #[test]
    fn conjugate_is_antilinear() {
        let s = gr(3, 0) + gr(0, 2) * v("t1") * v("tb2");
        let expected = gr(3, 0) - gr(0, 2) * v("tb1") * v("t2");
        assert_eq!(s.conjugate(&table()).unwrap(), expected);
    }

    #[test]
    fn conjugate_unknown_variable() {
        let err = v("lambda").conjugate(&table()).unwrap_err();
        assert_eq!(err, ScalarError::UnknownVariable("lambda".into()));
    }

    #[test]
    fn substitute_evaluates() {
        let s = v("t1") * v("t2");
        let a: Assignment = [
            (Var::new("t1"), GaussianRational::from_int(2)),
            (Var::new("t2"), GaussianRational::from_int(3)),
        ]
        .into();
        assert_eq!(s.substitute(&a, &table()).unwrap(), PolyScalar::from_int(6));
    }

    #[test]
    fn substitute_forces_conjugate() {
        let a: Assignment = [(Var::new("t1"), GaussianRational::i())].into();
        assert_eq!(v("tb1").substitute(&a, &table()).unwrap(), gr(0, -1));
    }

    #[test]
    fn substitute_leaves_unassigned() {
        let s = PolyScalar::volume().pow(2);
        assert_eq!(s.substitute(&Assignment::new(), &table()).unwrap(), s);
    }

    #[test]
    fn substitute_rejects_inconsistent_pair() {
        let a: Assignment = [
            (Var::new("t1"), GaussianRational::i()),
            (Var::new("tb1"), GaussianRational::i()),
        ]
        .into();
        assert!(matches!(
            v("t1").substitute(&a, &table()),
            Err(ScalarError::ConjugationMismatch(_))
        ));
    }

    #[test]
    fn substitute_rejects_complex_value_for_real() {
        let a: Assignment = [(Var::volume(), GaussianRational::i())].into();
        assert!(v("V").substitute(&a, &table()).is_err());
    }

    #[test]
    fn rendering() {
        let s = gr(3, 0) - gr(0, 2) * v("t1") * v("tb2").pow(2) + gr(1, 1) * v("t2");
        assert_eq!(s.to_string(), "3 + (1 + i)*t2 - 2*i*t1*tb2^2");
        assert_eq!(PolyScalar::zero().to_string(), "0");
        assert_eq!(
            PolyScalar::constant(GaussianRational::ratio(-3, 4)).to_string(),
            "-3/4"
        );
    }

    #[test]
    fn fraction_cross_multiplication() {
        let a = ScalarFraction::new(v("t1") * PolyScalar::from_int(2), v("t1") * v("t2")).unwrap();
        let b = ScalarFraction::new(PolyScalar::from_int(4), v("t2") * PolyScalar::from_int(2))
            .unwrap();
        assert_eq!(a, b);
        assert!(ScalarFraction::new(v("t1"), PolyScalar::zero()).is_err());
    }

    #[test]
    fn fraction_reduction_folds_constant_denominator() {
        let f = ScalarFraction::new(
            PolyScalar::volume() * PolyScalar::from_int(4),
            PolyScalar::from_int(2),
        )
        .unwrap();
        assert!(f.denominator().is_one());
        assert_eq!(
            f.numerator(),
            &(PolyScalar::volume() * PolyScalar::from_int(2))
        );
    }

    fn arb_gr() -> impl Strategy<Value = GaussianRational> {
        (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(a, b, d)| {
            GaussianRational::new(
                BigRational::new(a.into(), d.into()),
                BigRational::from_integer(b.into()),
            )
        })
    }

    fn arb_poly() -> impl Strategy<Value = PolyScalar> {
        let vars = prop::sample::select(vec!["t1", "tb1", "t2", "tb2", "V"]);
        let term = (arb_gr(), prop::collection::vec((vars, 1u32..3), 0..3));
        prop::collection::vec(term, 0..5).prop_map(|terms| {
            terms
                .into_iter()
                .map(|(c, fs)| {
                    fs.into_iter()
                        .fold(PolyScalar::constant(c), |acc, (name, e)| {
                            acc * v(name).pow(e)
                        })
                })
                .sum()
        })
    }

    fn arb_assignment() -> impl Strategy<Value = Assignment> {
        (arb_gr(), arb_gr(), -3i64..3).prop_map(|(a, b, vol)| {
            [
                (Var::new("t1"), a),
                (Var::new("t2"), b),
                (Var::volume(), GaussianRational::from_int(vol)),
            ]
            .into()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn conjugation_is_multiplicative_involution(a in arb_poly(), b in arb_poly()) {
            let t = table();
            let ab = (&a * &b).conjugate(&t).unwrap();
            prop_assert_eq!(ab, a.conjugate(&t).unwrap() * b.conjugate(&t).unwrap());
            prop_assert_eq!(a.conjugate(&t).unwrap().conjugate(&t).unwrap(), a);
        }

        #[test]
        fn substitution_is_a_ring_map(a in arb_poly(), b in arb_poly(), asg in arb_assignment()) {
            let t = table();
            let s = |p: &PolyScalar| p.substitute(&asg, &t).unwrap();
            prop_assert_eq!(s(&(&a * &b)), s(&a) * s(&b));
            prop_assert_eq!(s(&(&a + &b)), s(&a) + s(&b));
        }

        #[test]
        fn fraction_equality_is_an_equivalence(
            a in arb_poly(), b in arb_poly(), c in arb_poly(), k in arb_poly()
        ) {
            prop_assume!(!b.is_zero() && !k.is_zero() && !c.is_zero());
            let x = ScalarFraction::new(a.clone(), b.clone()).unwrap();
            let y = ScalarFraction::new(&a * &k, &b * &k).unwrap();
            let z = ScalarFraction::new(&a * &k * &c, &b * &k * &c).unwrap();
            prop_assert!(x == x.clone());
            prop_assert_eq!(x == y, y == x);
            prop_assert!(x == y && y == z && x == z);
        }
    }
}
