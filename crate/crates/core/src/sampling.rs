//! Seeded random inputs for property checks and scenarios.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{Algebra, Bidegree, Form, Monomial};
use crate::scalar::{Assignment, Conjugation, GaussianRational, PolyScalar, Var};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(a + b i) / d` with `|a|, |b| ≤ bound` and `1 ≤ d ≤ 3`.
pub fn gaussian_rational(rng: &mut SampleRng, bound: i64) -> GaussianRational {
    let re = rng.random_range(-bound..=bound);
    let im = rng.random_range(-bound..=bound);
    let d = rng.random_range(1..=3);
    GaussianRational::from_parts(re, im)
        .checked_div(&GaussianRational::from_int(d))
        .expect("nonzero denominator")
}

pub fn nonzero_gaussian_rational(rng: &mut SampleRng, bound: i64) -> GaussianRational {
    loop {
        let c = gaussian_rational(rng, bound);
        if !num_traits::Zero::is_zero(&c) {
            return c;
        }
    }
}

/// Random values for every declared variable of `alg` except `V`; a
/// conjugate pair gets one value and its conjugate.
pub fn assignment(rng: &mut SampleRng, alg: &Algebra, bound: i64) -> Assignment {
    let mut out = Assignment::new();
    let volume = Var::volume();
    for (v, conj) in alg.vars().iter() {
        if *v == volume || v.name() == "i" || out.contains_key(v) {
            continue;
        }
        match conj {
            Conjugation::Real => {
                let c = GaussianRational::from(gaussian_rational(rng, bound).re().clone());
                out.insert(v.clone(), c);
            }
            Conjugation::Pair(w) => {
                let c = gaussian_rational(rng, bound);
                out.insert(w.clone(), c.conj());
                out.insert(v.clone(), c);
            }
        }
    }
    out
}

/// A sum of up to `terms` distinct monomials from `pool` with random
/// constant coefficients.
pub fn form_from(
    rng: &mut SampleRng,
    alg: &Arc<Algebra>,
    pool: &[Monomial],
    terms: usize,
    bound: i64,
) -> Form {
    let mut out = Form::zero(alg);
    for m in pool.choose_multiple(rng, terms.min(pool.len())) {
        out.add_term(*m, PolyScalar::constant(gaussian_rational(rng, bound)));
    }
    out
}

pub fn form_of_degree(rng: &mut SampleRng, alg: &Arc<Algebra>, k: usize, terms: usize) -> Form {
    form_from(rng, alg, &alg.monomials_of_degree(k), terms, 4)
}

pub fn form_of_bidegree(
    rng: &mut SampleRng,
    alg: &Arc<Algebra>,
    b: Bidegree,
    terms: usize,
) -> Form {
    form_from(rng, alg, &alg.monomials_of_bidegree(b), terms, 4)
}
