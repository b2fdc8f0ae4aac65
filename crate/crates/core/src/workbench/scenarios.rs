//! Built-in scenarios. Each one runs its steps in order against a fresh set
//! of models.

use std::thread;
use std::time::Instant;

use num_traits::Zero;

use super::report::{Report, Source};
use super::WorkbenchError;
use crate::bbf::{
    check_block_orthogonality, gram_matrix, kummer_surrogate, make_symplectic, product_q, q_sigma,
    torus_standard_basis, vanishing_identity, GramMatrix, GramMode, SymplecticSpace,
};
use crate::dga::{
    cohomology, ddbar_criterion, frolicher, kodaira, lambda_map, nakamura, torus, torus4_deformed,
    torus_lambda, ModelError, Slot, StructureModel, Theory,
};
use crate::exterior::{Bidegree, Form};
use crate::grass::{alpha_order, pluecker_curve};
use crate::linalg::Matrix;
use crate::parse::{parse_form, parse_scalar_free};
use crate::sampling;
use crate::scalar::{GaussianRational, PolyScalar, ScalarFraction, Var};

type StepFn = fn(&mut Report) -> Result<(), WorkbenchError>;

pub struct Scenario {
    pub id: &'static str,
    pub description: &'static str,
    run: StepFn,
}

const SCENARIOS: &[Scenario] = &[
    Scenario {
        id: "torus2-gram",
        description: "Gram matrix of the BBF form on a complex 2-torus",
        run: torus2_gram,
    },
    Scenario {
        id: "torus4-gram",
        description: "Gram matrix blocks of the BBF form on a complex 4-torus",
        run: torus4_gram,
    },
    Scenario {
        id: "torus4-deformed",
        description: "q of the deformed symplectic form on a complex 4-torus",
        run: torus4_deformed_scenario,
    },
    Scenario {
        id: "bbf-vanishing",
        description: "the identity (∫(σσ̄)^n)(∫α^{n+1}σ̄^{n-1}) = (n+1)λ^{n-1}q(α) on tori",
        run: bbf_vanishing,
    },
    Scenario {
        id: "kodaira",
        description: "cohomology, ddbar criterion and Gram matrix of the Kodaira surface",
        run: kodaira_scenario,
    },
    Scenario {
        id: "kodaira-lambda",
        description: "wedge with the conjugate symplectic form on Kodaira Dolbeault cohomology",
        run: kodaira_lambda,
    },
    Scenario {
        id: "nakamura",
        description: "deformed Nakamura model: integrability and the symplectic form σ_t",
        run: nakamura_scenario,
    },
    Scenario {
        id: "k3-product",
        description: "q on a product of two surfaces, with a deformed 2-torus factor",
        run: k3_product,
    },
    Scenario {
        id: "grass-degree",
        description: "degree of W ↦ Λ²W along a Schubert line",
        run: grass_degree,
    },
];

pub fn list_scenarios() -> Vec<(&'static str, &'static str)> {
    SCENARIOS.iter().map(|s| (s.id, s.description)).collect()
}

pub fn find(id: &str) -> Option<&'static Scenario> {
    SCENARIOS.iter().find(|s| s.id == id)
}

impl Scenario {
    pub fn run(&self, timing: bool) -> Report {
        let start = Instant::now();
        let mut report = Report::new(self.id, self.description);
        if let Err(e) = (self.run)(&mut report) {
            report.fail(e.to_string());
        }
        if timing {
            report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
        }
        report
    }
}

pub fn run_scenario(id: &str) -> Result<Report, WorkbenchError> {
    find(id)
        .map(|s| s.run(false))
        .ok_or_else(|| WorkbenchError::UnknownScenario(id.to_string()))
}

/// Runs scenarios on separate threads; reports come back in input order.
pub fn run_many(ids: &[&str], timing: bool) -> Result<Vec<Report>, WorkbenchError> {
    let scenarios = ids
        .iter()
        .map(|id| find(id).ok_or_else(|| WorkbenchError::UnknownScenario(id.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(thread::scope(|s| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|sc| s.spawn(move || sc.run(timing)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread"))
            .collect()
    }))
}

fn poly(s: &str) -> PolyScalar {
    parse_scalar_free(s).expect("valid literal")
}

fn frac(num: PolyScalar, den: &PolyScalar) -> ScalarFraction {
    ScalarFraction::new(num, den.clone()).expect("nonzero denominator")
}

fn two_mu_mubar(s: &SymplecticSpace) -> PolyScalar {
    (s.mu() * s.mu_bar()).scale(&GaussianRational::from_int(2))
}

/// The published 2-torus Gram matrix: anti-diagonal `±1/(2μμ̄)`.
pub fn published_torus2_gram(s: &SymplecticSpace) -> Vec<Vec<ScalarFraction>> {
    let signs = [1, -1, 1, 1, -1, 1];
    let den = two_mu_mubar(s);
    (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    if i + j == 5 {
                        frac(PolyScalar::from_int(signs[i]), &den)
                    } else {
                        ScalarFraction::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// The published `X` block of the 4-torus Gram matrix, rows `x_ix_j` and
/// columns `x̄_kx̄_l` in lexicographic order.
pub fn published_x_block(s: &SymplecticSpace) -> Vec<Vec<ScalarFraction>> {
    const SIGNS: [[i64; 6]; 6] = [
        [1, -1, 1, 1, -1, 1],
        [-1, 1, -1, -1, 1, -1],
        [1, -1, 1, 1, -1, 1],
        [1, -1, 1, 1, -1, 1],
        [-1, 1, -1, -1, 1, -1],
        [1, -1, 1, 1, -1, 1],
    ];
    const LAMBDA: [&str; 6] = ["l34", "l24", "l23", "l14", "l13", "l12"];
    const LAMBDA_BAR: [&str; 6] = ["lb34", "lb24", "lb23", "lb14", "lb13", "lb12"];
    let den = two_mu_mubar(s);
    (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let num = (&poly(LAMBDA[i]) * &poly(LAMBDA_BAR[j]))
                        .scale(&GaussianRational::from_int(SIGNS[i][j]));
                    frac(num, &den)
                })
                .collect()
        })
        .collect()
}

fn torus2_gram(r: &mut Report) -> Result<(), WorkbenchError> {
    let m = torus(2);
    let s = make_symplectic(&m, &parse_form("mu*x1^x2", m.algebra())?)?;
    let basis = torus_standard_basis(&m);
    let expected = published_torus2_gram(&s);
    let oracle = gram_matrix(&s, &basis, GramMode::Oracle)?.normalized(&s);
    let closed = gram_matrix(&s, &basis, GramMode::ClosedForm)?;
    r.check(
        "gram (oracle, V = 1/(mu mub))",
        oracle.entries,
        expected.clone(),
        Source::Published,
    );
    r.check(
        "gram (closed form)",
        closed.entries,
        expected,
        Source::Published,
    );
    let mut rng = sampling::rng(2);
    let mut agree = 0usize;
    let trials = 10usize;
    for _ in 0..trials {
        let mu = sampling::nonzero_gaussian_rational(&mut rng, 6);
        let a = [(Var::new("mu"), mu)].into_iter().collect();
        let sp = s.specialize(&a)?;
        let want = published_torus2_gram(&sp);
        let o = gram_matrix(&sp, &basis_of(&sp), GramMode::Oracle)?.normalized(&sp);
        let c = gram_matrix(&sp, &basis_of(&sp), GramMode::ClosedForm)?;
        if o.entries == want && c.entries == want {
            agree += 1;
        }
    }
    r.check(
        "random mu specializations matching",
        agree,
        trials,
        Source::Published,
    );
    Ok(())
}

fn basis_of(s: &SymplecticSpace) -> Vec<Form> {
    torus_standard_basis(s.model())
}

fn block_is_zero(
    g: &GramMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> bool {
    g.block(rows, cols)
        .iter()
        .flatten()
        .all(ScalarFraction::is_zero)
}

fn four_torus_zero_pattern(g: &GramMatrix) -> bool {
    let (h, m, a) = (0..6, 6..22, 22..28);
    block_is_zero(g, h.clone(), h.clone())
        && block_is_zero(g, h.clone(), m.clone())
        && block_is_zero(g, m.clone(), h.clone())
        && block_is_zero(g, m.clone(), a.clone())
        && block_is_zero(g, a.clone(), m)
        && block_is_zero(g, a.clone(), a)
}

fn torus4_gram(r: &mut Report) -> Result<(), WorkbenchError> {
    let m = torus(4);
    let s = make_symplectic(&m, &torus_lambda(&m))?;
    let basis = torus_standard_basis(&m);
    let orth = check_block_orthogonality(&s)?;
    r.check(
        "block orthogonality on all degree-2 monomials",
        orth.holds(),
        true,
        Source::Published,
    );
    let oracle = gram_matrix(&s, &basis, GramMode::Oracle)?.normalized(&s);
    let closed = gram_matrix(&s, &basis, GramMode::ClosedForm)?;
    r.check(
        "zero blocks (oracle)",
        four_torus_zero_pattern(&oracle),
        true,
        Source::Published,
    );
    r.check(
        "zero blocks (closed form)",
        four_torus_zero_pattern(&closed),
        true,
        Source::Published,
    );
    let x = published_x_block(&s);
    r.check(
        "X block (oracle)",
        oracle.block(0..6, 22..28),
        x.clone(),
        Source::Published,
    );
    r.check(
        "X block (closed form)",
        closed.block(0..6, 22..28),
        x,
        Source::Published,
    );
    let y = oracle.block(6..22, 6..22);
    let y_symmetric = (0..16).all(|i| (0..i).all(|j| y[i][j] == y[j][i]));
    r.check("Y block symmetric", y_symmetric, true, Source::Definition);
    let nonzero = y.iter().flatten().filter(|e| !e.is_zero()).count();
    r.check(
        "Y block nonzero entries (α≠γ, β≠δ)",
        nonzero,
        144usize,
        Source::Oracle,
    );
    r.check(
        "Y block closed form agrees with oracle",
        closed.block(6..22, 6..22) == y,
        true,
        Source::Oracle,
    );
    let mut rng = sampling::rng(4);
    let trials = 10usize;
    let mut agree = 0usize;
    let mut tried = 0;
    while tried < trials {
        let a = sampling::assignment(&mut rng, m.algebra(), 3);
        let Ok(sp) = s.specialize(&a) else { continue };
        tried += 1;
        let want = published_x_block_at(&sp, &a);
        let o = gram_matrix(&sp, &basis_of(&sp), GramMode::Oracle)?.normalized(&sp);
        let c = gram_matrix(&sp, &basis_of(&sp), GramMode::ClosedForm)?;
        if o.block(0..6, 22..28) == want
            && c.block(0..6, 22..28) == want
            && four_torus_zero_pattern(&o)
        {
            agree += 1;
        }
    }
    r.check(
        "random lambda specializations matching X",
        agree,
        trials,
        Source::Published,
    );
    Ok(())
}

fn published_x_block_at(
    s: &SymplecticSpace,
    a: &crate::scalar::Assignment,
) -> Vec<Vec<ScalarFraction>> {
    const SIGNS: [i64; 6] = [1, -1, 1, 1, -1, 1];
    const NAMES: [&str; 6] = ["l34", "l24", "l23", "l14", "l13", "l12"];
    let den = two_mu_mubar(s);
    let lam: Vec<GaussianRational> = NAMES.iter().map(|n| a[&Var::new(n)].clone()).collect();
    (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let c = &(&lam[i] * &lam[j].conj())
                        * &GaussianRational::from_int(SIGNS[i] * SIGNS[j]);
                    frac(PolyScalar::constant(c), &den)
                })
                .collect()
        })
        .collect()
}

fn torus4_deformed_scenario(r: &mut Report) -> Result<(), WorkbenchError> {
    let td = torus4_deformed();
    let s = make_symplectic(&td.model, &td.sigma)?;
    let (sg, sb, st) = (&td.sigma, s.sigma_bar(), &td.sigma_t);
    r.check(
        "∫(σσ̄)²",
        (sg * sb).power(2).integrate(),
        poly("4*V"),
        Source::Published,
    );
    r.check(
        "∫σ_t²σσ̄",
        (&(&st.power(2) * sg) * sb).integrate(),
        poly("4*t1*t2*V - 4*t1*t2*t3*t4*V"),
        Source::Published,
    );
    r.check(
        "∫σ_tσσ̄²",
        (&(st * sg) * &sb.power(2)).integrate(),
        poly("4*V"),
        Source::Published,
    );
    r.check(
        "∫σ_tσ²σ̄",
        (&(st * &sg.power(2)) * sb).integrate(),
        poly("4*t1*t2*V"),
        Source::Published,
    );
    r.check(
        "q(σ_t)",
        q_sigma(&s, st)?,
        poly("-16*t1*t2*t3*t4*V^2"),
        Source::Published,
    );
    r.check(
        "q(σ)",
        q_sigma(&s, sg)?,
        PolyScalar::zero(),
        Source::Published,
    );
    Ok(())
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn vanishing_on(
    r: &mut Report,
    label: &str,
    model: &StructureModel,
    seed: u64,
    trials: usize,
) -> Result<(), WorkbenchError> {
    let mut rng = sampling::rng(seed);
    let generic = make_symplectic(model, &torus_lambda(model))?;
    let alg = model.algebra();
    let (mut holds, mut q_ok, mut top_ok, mut done) = (0usize, 0usize, 0usize, 0usize);
    while done < trials {
        let a = sampling::assignment(&mut rng, alg, 3);
        let Ok(s) = generic.specialize(&a) else {
            continue;
        };
        done += 1;
        let lambda = PolyScalar::constant(sampling::gaussian_rational(&mut rng, 4));
        let mubar = PolyScalar::constant(sampling::gaussian_rational(&mut rng, 4));
        let a11 = sampling::form_of_bidegree(&mut rng, s.algebra(), Bidegree::new(1, 1), 4);
        let v = vanishing_identity(&s, &lambda, &a11, &mubar)?;
        holds += v.holds() as usize;
        let n = s.half_dim() as u32;
        let i = s.top_integral();
        let half_n = GaussianRational::ratio(n as i64, 2);
        let q_expected = &(&(&lambda * &mubar) * &i.pow(2)) + &(i * &v.mixed).scale(&half_n);
        q_ok += (v.q == q_expected) as usize;
        let top_expected = &(&(&lambda.pow(n) * &mubar) * i)
            .scale(&GaussianRational::from_int(n as i64 + 1))
            + &(&lambda.pow(n - 1) * &v.mixed)
                .scale(&GaussianRational::from_int(binomial(n + 1, 2)));
        top_ok += (v.top_power == top_expected) as usize;
    }
    r.check(
        format!("identity holds ({label}, random decompositions)"),
        holds,
        trials,
        Source::Published,
    );
    r.check(
        format!("q(α) = λ·mubar·I² + (n/2)·I·∫α₁₁²(σσ̄)^{{n-1}} ({label})"),
        q_ok,
        trials,
        Source::Published,
    );
    r.check(
        format!(
            "∫α^{{n+1}}σ̄^{{n-1}} = (n+1)λ^n·mubar·I + C(n+1,2)λ^{{n-1}}∫α₁₁²(σσ̄)^{{n-1}} ({label})"
        ),
        top_ok,
        trials,
        Source::Oracle,
    );
    Ok(())
}

fn bbf_vanishing(r: &mut Report) -> Result<(), WorkbenchError> {
    vanishing_on(r, "2-torus", &torus(2), 5, 20)?;
    vanishing_on(r, "4-torus", &torus(4), 6, 20)?;
    let m = torus(4);
    let s = make_symplectic(&m, &parse_form("x1^x2 + x3^x4", m.algebra())?)?;
    let v = vanishing_identity(
        &s,
        &PolyScalar::one(),
        &Form::zero(m.algebra()),
        &PolyScalar::zero(),
    )?;
    r.check("α = σ: lhs", v.lhs, PolyScalar::zero(), Source::Definition);
    r.check("α = σ: rhs", v.rhs, PolyScalar::zero(), Source::Definition);
    Ok(())
}

fn dim(m: &StructureModel, t: Theory, s: Slot) -> Result<usize, WorkbenchError> {
    Ok(cohomology(m, t, s)?.dimension)
}

fn span_rank(m: &StructureModel, k: usize, forms: &[&str]) -> Result<usize, WorkbenchError> {
    let report = cohomology(m, Theory::DeRham, Slot::Degree(k))?;
    let cols = forms
        .iter()
        .map(|f| Ok(report.class_of(&parse_form(f, m.algebra())?)?))
        .collect::<Result<Vec<_>, WorkbenchError>>()?;
    Ok(Matrix::from_columns(report.dimension, &cols).rank())
}

fn kodaira_scenario(r: &mut Report) -> Result<(), WorkbenchError> {
    let m = kodaira();
    let dr = |k| dim(&m, Theory::DeRham, Slot::Degree(k));
    let dol = |p, q| dim(&m, Theory::Dolbeault, Slot::bi(p, q));
    r.check("b1", dr(1)?, 3usize, Source::Published);
    r.check("b2", dr(2)?, 4usize, Source::Published);
    r.check("h^{1,0}", dol(1, 0)?, 1usize, Source::Published);
    r.check("h^{0,1}", dol(0, 1)?, 2usize, Source::Published);
    r.check("h^{2,0}", dol(2, 0)?, 1usize, Source::Published);
    r.check("h^{1,1}", dol(1, 1)?, 2usize, Source::Published);
    r.check("h^{0,2}", dol(0, 2)?, 1usize, Source::Published);
    r.check(
        "rank of {w1, wb1, w2 + wb2} in H^1",
        span_rank(&m, 1, &["w1", "wb1", "w2 + wb2"])?,
        3usize,
        Source::Published,
    );
    r.check(
        "rank of {w1^w2, w1^wb2, w2^wb1, wb1^wb2} in H^2",
        span_rank(&m, 2, &["w1^w2", "w1^wb2", "w2^wb1", "wb1^wb2"])?,
        4usize,
        Source::Published,
    );
    r.check(
        "Frölicher b1 = h^{1,0} + h^{0,1}",
        frolicher(&m, 1)?.degenerates(),
        true,
        Source::Published,
    );
    r.check(
        "Frölicher b2 = h^{2,0} + h^{1,1} + h^{0,2}",
        frolicher(&m, 2)?.degenerates(),
        true,
        Source::Published,
    );
    let bc = |p, q| dim(&m, Theory::BottChern, Slot::bi(p, q));
    let ae = |p, q| dim(&m, Theory::Aeppli, Slot::bi(p, q));
    r.check("h_BC^{1,0}", bc(1, 0)?, 1usize, Source::Oracle);
    r.check("h_BC^{0,1}", bc(0, 1)?, 1usize, Source::Oracle);
    r.check("h_A^{1,0}", ae(1, 0)?, 2usize, Source::Oracle);
    r.check("h_A^{0,1}", ae(0, 1)?, 2usize, Source::Oracle);
    let k1 = ddbar_criterion(&m, 1)?;
    r.check(
        "ddbar equality 2b1 = Σ h_BC + h_A at k = 1",
        k1.holds,
        false,
        Source::Published,
    );
    let k2 = ddbar_criterion(&m, 2)?;
    r.check("ddbar equality at k = 2", k2.holds, false, Source::Oracle);
    let s = make_symplectic(&m, &parse_form("mu*w1^w2", m.algebra())?)?;
    let basis: Vec<Form> = ["w1^w2", "w1^wb2", "w2^wb1", "wb1^wb2"]
        .iter()
        .map(|f| parse_form(f, m.algebra()))
        .collect::<Result<_, _>>()?;
    let g = gram_matrix(&s, &basis, GramMode::Oracle)?.normalized(&s);
    let den = two_mu_mubar(&s);
    let expected: Vec<Vec<ScalarFraction>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    if i + j == 3 {
                        frac(PolyScalar::one(), &den)
                    } else {
                        ScalarFraction::zero()
                    }
                })
                .collect()
        })
        .collect();
    r.check(
        "gram (V = 1/(mu mub))",
        g.entries,
        expected,
        Source::Published,
    );
    Ok(())
}

fn kodaira_lambda(r: &mut Report) -> Result<(), WorkbenchError> {
    let m = kodaira();
    let a = m.algebra();
    let w2 = parse_form("w2", a)?;
    r.check(
        "∂̄w2",
        m.apply_delbar(&w2)?,
        parse_form("w1^wb1", a)?,
        Source::Published,
    );
    r.check(
        "∂̄(w2^wb2)",
        m.apply_delbar(&parse_form("w2^wb2", a)?)?,
        parse_form("w1^wb1^wb2", a)?,
        Source::Published,
    );
    let h12 = cohomology(&m, Theory::Dolbeault, Slot::bi(1, 2))?;
    let class = h12.class_of(&parse_form("w1^wb1^wb2", a)?)?;
    r.check(
        "[w1^wb1^wb2] = 0 in H^{1,2}",
        class.iter().all(Zero::is_zero),
        true,
        Source::Published,
    );
    let omega_bar = parse_form("w1^w2", a)?.conjugate()?;
    let map = lambda_map(&m, &omega_bar, Theory::Dolbeault, Slot::bi(1, 0))?;
    r.check(
        "dim H^{1,0}",
        map.source.dimension,
        1usize,
        Source::Published,
    );
    r.check(
        "Λ on H^{1,0} → H^{1,2} is zero",
        map.matrix.is_zero(),
        true,
        Source::Published,
    );
    Ok(())
}

fn nakamura_scenario(r: &mut Report) -> Result<(), WorkbenchError> {
    for t in [
        GaussianRational::ratio(1, 2),
        GaussianRational::from_parts(1, 1)
            .checked_div(&3.into())
            .expect("3 ≠ 0"),
    ] {
        let m = nakamura(&t);
        r.check(
            format!("t = {t}: d² = 0 and type splitting"),
            m.is_ok(),
            true,
            Source::Published,
        );
        let m = m?;
        let a = m.algebra();
        let sigma_t = parse_form("phi1^phi4 + phi2^phi3", a)?;
        r.check(
            format!("t = {t}: dσ_t"),
            m.apply_d(&sigma_t)?,
            Form::zero(a),
            Source::Published,
        );
        let sq = sigma_t.power(2);
        r.check(
            format!("t = {t}: σ_t² ≠ 0"),
            !sq.is_zero(),
            true,
            Source::Published,
        );
        r.check(
            format!("t = {t}: σ_t²"),
            sq,
            parse_form("2*phi1^phi2^phi3^phi4", a)?,
            Source::Definition,
        );
    }
    let out_of_range = matches!(
        nakamura(&GaussianRational::i()),
        Err(ModelError::ParameterOutOfRange(_))
    );
    r.check(
        "t = i rejected (|t| = 1)",
        out_of_range,
        true,
        Source::Definition,
    );
    Ok(())
}

fn k3_product(r: &mut Report) -> Result<(), WorkbenchError> {
    let v = |n: &str| poly(n);
    let (q1, q2, p1s, p1sb, p2s, p2sb) =
        (v("q1"), v("q2"), v("p1s"), v("p1sb"), v("p2s"), v("p2sb"));
    let computed = product_q(&q1, &q2, &p1s, &p1sb, &p2s, &p2sb);
    r.check(
        "product formula",
        computed.clone(),
        poly("8*q1 + 8*q2 - 4*(p1sb - p2sb)*(p1s - p2s)"),
        Source::Published,
    );
    // 4∫φ²σσ̄ − ∫φσσ̄²·∫φσ²σ̄ with ∫φᵢ² = 2qᵢ and the factor integrals.
    let two = GaussianRational::from_int(2);
    let j = (&(&(&q1 + &q2) + &(&p1s * &p2sb)) + &(&p1sb * &p2s)).scale(&two);
    let k = (&p1sb + &p2sb).scale(&two);
    let l = (&p1s + &p2s).scale(&two);
    let components = j.scale(&GaussianRational::from_int(4)) - &k * &l;
    r.check(
        "product formula from the component integrals",
        computed,
        components,
        Source::Oracle,
    );
    let z = PolyScalar::zero();
    let one = PolyScalar::one();
    r.check(
        "φ = σ",
        product_q(&z, &z, &z, &one, &z, &one),
        z.clone(),
        Source::Definition,
    );
    let k = kummer_surrogate();
    r.check(
        "surrogate ∫φ₁σ₁",
        k.p1s.clone(),
        poly("-t^2 - t^3"),
        Source::Oracle,
    );
    r.check(
        "surrogate ∫φ₁σ̄₁",
        k.p1sb.clone(),
        poly("1 + t"),
        Source::Oracle,
    );
    r.check("surrogate q₁(φ₁)", k.q1.clone(), z.clone(), Source::Oracle);
    r.check(
        "surrogate q",
        k.value.clone(),
        poly("4*t^3 + 4*t^4"),
        Source::Oracle,
    );
    let at = |x: GaussianRational| -> Result<PolyScalar, WorkbenchError> {
        let a = [(Var::new("t"), x)].into_iter().collect();
        Ok(k.value.substitute(&a, k.tau.algebra().vars())?)
    };
    r.check(
        "surrogate q ≠ 0 at t = 1/10",
        !at(GaussianRational::ratio(1, 10))?.is_zero(),
        true,
        Source::Published,
    );
    r.check(
        "surrogate q at t = 0",
        at(GaussianRational::from_int(0))?,
        z,
        Source::Definition,
    );
    Ok(())
}

fn grass_degree(r: &mut Report) -> Result<(), WorkbenchError> {
    for n in 2..=5usize {
        let c = pluecker_curve(n)?;
        r.check(
            format!("n = {n}: degree"),
            c.degree()?,
            (n - 1) as u32,
            Source::Published,
        );
        r.check(
            format!("n = {n}: vanishing order of the distinguished coordinate at α = 0"),
            alpha_order(&c.distinguished()).unwrap_or(0),
            (n - 1) as u32,
            Source::Published,
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_is_stable() {
        let ids: Vec<_> = list_scenarios().into_iter().map(|(id, _)| id).collect();
        assert!(ids.len() >= 9);
        assert!(ids.contains(&"torus4-deformed"));
        assert!(ids.contains(&"grass-degree"));
        assert_eq!(
            ids,
            list_scenarios()
                .into_iter()
                .map(|(id, _)| id)
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn unknown_scenario() {
        assert!(matches!(
            run_scenario("nosuch"),
            Err(WorkbenchError::UnknownScenario(_))
        ));
    }

    #[test]
    fn deformed_torus_report() {
        let r = run_scenario("torus4-deformed").unwrap();
        assert!(r.passed, "{}", r.to_text());
        let q = r.quantities.iter().find(|q| q.name == "q(σ_t)").unwrap();
        assert!(q.matched);
    }
}
