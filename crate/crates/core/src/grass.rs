//! Plücker coordinates of `W ↦ Λ²W` along the Schubert line
//! `W(α:β) = Span{x₁, …, x_{n-1}, αx_n + βx_{n+1}}` in a `2n`-dimensional space.

use std::sync::Arc;

use thiserror::Error;

use crate::exterior::{Algebra, Form, Monomial};
use crate::scalar::{PolyScalar, PowerProduct, Var, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrassError {
    #[error("n must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("n = {0} needs more than 128 generators for the bivector algebra")]
    TooLarge(usize),
    #[error("Plücker coordinates are not homogeneous of one degree")]
    Inhomogeneous,
}

/// `max n` for which `C(2n, 2) ≤ 128`.
pub const MAX_N: usize = 8;

/// The reduced Plücker coordinates of one Schubert line.
#[derive(Debug, Clone)]
pub struct PlueckerCurve {
    pub n: usize,
    /// Algebra with generators `y{a}_{b}` standing for `x_a ∧ x_b`.
    pub algebra: Arc<Algebra>,
    /// Nonzero coordinates against monomials of `Λ^{C(n,2)}Λ²V`, ascending.
    pub coordinates: Vec<(Monomial, PolyScalar)>,
    /// The common factor removed from every coordinate.
    pub content: PolyScalar,
}

pub fn alpha() -> Var {
    Var::new("alpha")
}

pub fn beta() -> Var {
    Var::new("beta")
}

fn y_name(a: usize, b: usize) -> String {
    format!("y{a}_{b}")
}

/// Index pairs `(a, b)`, `1 ≤ a < b ≤ 2n`, in generator order.
pub fn bivector_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 1..=2 * n {
        for b in a + 1..=2 * n {
            out.push((a, b));
        }
    }
    out
}

fn bivector_algebra(n: usize) -> Arc<Algebra> {
    let mut vars = VarTable::new();
    vars.declare_real("alpha").expect("fresh name");
    vars.declare_real("beta").expect("fresh name");
    let mut b = Algebra::builder().vars(vars);
    for (i, j) in bivector_pairs(n) {
        b = b.holomorphic(&y_name(i, j));
    }
    b.build().expect("valid bivector algebra")
}

pub fn pluecker_curve(n: usize) -> Result<PlueckerCurve, GrassError> {
    if n < 2 {
        return Err(GrassError::TooSmall(n));
    }
    if n > MAX_N {
        return Err(GrassError::TooLarge(n));
    }
    let alg = bivector_algebra(n);
    let y = |a: usize, b: usize| Form::generator(&alg, &y_name(a, b)).expect("generator exists");
    let a = PolyScalar::var(&alpha());
    let b = PolyScalar::var(&beta());
    let mut big = Form::one(&alg);
    for i in 1..n {
        for j in i + 1..n {
            big = &big * &y(i, j);
        }
    }
    for i in 1..n {
        let w = &y(i, n).scale(&a) + &y(i, n + 1).scale(&b);
        big = &big * &w;
    }
    let raw: Vec<(Monomial, PolyScalar)> = big.terms().map(|(m, c)| (*m, c.clone())).collect();
    let content = common_content(raw.iter().map(|(_, c)| c));
    let coordinates = raw
        .into_iter()
        .map(|(m, c)| (m, divide_content(&c, &content)))
        .collect();
    Ok(PlueckerCurve {
        n,
        algebra: alg,
        coordinates,
        content,
    })
}

/// gcd of rational contents times the common power product.
fn common_content<'a>(polys: impl Iterator<Item = &'a PolyScalar>) -> PolyScalar {
    use num_integer::Integer;
    let mut num: Option<num_bigint::BigInt> = None;
    let mut pp: Option<PowerProduct> = None;
    for p in polys {
        let c = p.rational_content();
        assert!(
            c.is_integer(),
            "Plücker coordinates have integer coefficients"
        );
        let c = c.to_integer();
        num = Some(match num {
            None => c,
            Some(g) => g.gcd(&c),
        });
        let m = p.monomial_content();
        pp = Some(match pp {
            None => m,
            Some(g) => g.gcd(&m),
        });
    }
    let num = num.unwrap_or_else(|| 1.into());
    let c = crate::scalar::GaussianRational::from(num_rational::BigRational::from_integer(num));
    PolyScalar::monomial(c, pp.unwrap_or_else(PowerProduct::one))
}

fn divide_content(p: &PolyScalar, content: &PolyScalar) -> PolyScalar {
    let (m, c) = content
        .terms()
        .next()
        .expect("content is a nonzero monomial");
    p.div_power_product(m)
        .expect("content divides every coordinate")
        .scale(&c.inv().expect("content is nonzero"))
}

impl PlueckerCurve {
    /// The coordinate at `∏_{1≤i<j≤n} y_{ij}`.
    pub fn distinguished(&self) -> PolyScalar {
        let mut bits = 0u128;
        for (k, (_, b)) in bivector_pairs(self.n).into_iter().enumerate() {
            if b <= self.n {
                bits |= 1 << k;
            }
        }
        let m = Monomial::from_bits(bits);
        self.coordinates
            .iter()
            .find(|(x, _)| *x == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(PolyScalar::zero)
    }

    /// Common total degree of the reduced coordinates.
    pub fn degree(&self) -> Result<u32, GrassError> {
        let mut degrees = self.coordinates.iter().map(|(_, c)| {
            if c.is_homogeneous() {
                c.total_degree()
            } else {
                None
            }
        });
        let first = degrees.next().flatten().ok_or(GrassError::Inhomogeneous)?;
        if degrees.all(|d| d == Some(first)) {
            Ok(first)
        } else {
            Err(GrassError::Inhomogeneous)
        }
    }
}

/// Order of vanishing of `p` at `α = 0`.
pub fn alpha_order(p: &PolyScalar) -> Option<u32> {
    let a = alpha();
    p.terms().map(|(m, _)| m.exponent(&a)).min()
}

pub fn embedding_degree(n: usize) -> Result<u32, GrassError> {
    pluecker_curve(n)?.degree()
}
