//! The eleven acceptance criteria, each exact. Prints one line per criterion
//! and exits nonzero on any failure not listed in `KNOWN`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use wb_core::bbf::{
    bilinear, make_symplectic, pfaffian, q_sigma, AntisymmetricMatrix, SymplecticSpace,
};
use wb_core::dga::{
    cohomology, kodaira, nakamura, torus, torus_lambda, Slot, StructureModel, Theory,
};
use wb_core::exterior::{Bidegree, Form, Monomial};
use wb_core::grass::{alpha, beta, bivector_pairs, embedding_degree, pluecker_curve};
use wb_core::linalg::Matrix;
use wb_core::sampling;
use wb_core::workbench::run_scenario;
use wb_core::{GaussianRational, PolyScalar};

type Checks = Vec<(String, bool)>;
type Criterion = (usize, &'static str, fn() -> Checks);

/// Sub-checks that fail because the criterion contradicts the mathematics.
const KNOWN: &[(usize, &str)] = &[(7, "kodaira: ddbar equality 2b1 = Σ h_BC + h_A at k = 1")];

fn scenario(id: &str) -> Checks {
    let r = run_scenario(id).expect("built-in scenario");
    let mut out: Checks = r
        .quantities
        .iter()
        .map(|q| {
            let label = format!("{id}: {}", q.name);
            if !q.matched {
                eprintln!(
                    "    {id}: {} computed {}, expected {}",
                    q.name, q.value, q.expected
                );
            }
            (label, q.matched)
        })
        .collect();
    if let Some(e) = r.error {
        out.push((format!("{id}: error {e}"), false));
    }
    out
}

fn c(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

fn random_space(m: &StructureModel, rng: &mut sampling::SampleRng) -> SymplecticSpace {
    let generic = make_symplectic(m, &torus_lambda(m)).expect("generic σ");
    loop {
        let a = sampling::assignment(rng, m.algebra(), 3);
        if let Ok(s) = generic.specialize(&a) {
            return s;
        }
    }
}

fn ac1() -> Checks {
    let start = Instant::now();
    let mut out = scenario("torus4-deformed");
    let elapsed = start.elapsed();
    out.push((
        format!("runtime {elapsed:?} < 1 s"),
        elapsed < Duration::from_secs(1),
    ));
    out
}

fn ac5() -> Checks {
    let mut rng = sampling::rng(505);
    let mut out = Checks::new();
    for n in [1usize, 2] {
        let m = torus(2 * n);
        let trials = 20;
        let mut ok = 0;
        for _ in 0..trials {
            let s = random_space(&m, &mut rng);
            let k = sampling::nonzero_gaussian_rational(&mut rng, 4);
            let scaled = make_symplectic(&m, &s.sigma().scale_gr(&k)).expect("cσ is symplectic");
            let alpha = sampling::form_of_degree(&mut rng, m.algebra(), 2, 5);
            let factor = PolyScalar::constant((&k * &k.conj()).pow(2 * n as u32 - 1));
            let lhs = q_sigma(&scaled, &alpha).unwrap();
            let rhs = &factor * &q_sigma(&s, &alpha).unwrap();
            ok += (lhs == rhs) as usize;
        }
        out.push((
            format!("q_(cσ) = (c c̄)^(2n-1) q_σ, n = {n}, {trials} cases"),
            ok == trials,
        ));
    }
    out
}

fn factorial(n: i64) -> i64 {
    (1..=n).product()
}

fn ac6() -> Checks {
    let mut rng = sampling::rng(606);
    let mut out = Checks::new();
    for n in [1usize, 2, 3] {
        let m = torus(2 * n);
        let nf = PolyScalar::from_int(factorial(n as i64));
        if n <= 2 {
            let s = make_symplectic(&m, &torus_lambda(&m)).unwrap();
            let pf = pfaffian(&AntisymmetricMatrix::of_form(s.sigma())).unwrap();
            out.push((
                format!("symbolic μ = n!·Pf(λ), n = {n}"),
                *s.mu() == &nf * &pf,
            ));
        }
        let trials = 20;
        let mut ok = 0;
        for _ in 0..trials {
            let s = random_space(&m, &mut rng);
            let pf = pfaffian(&AntisymmetricMatrix::of_form(s.sigma())).unwrap();
            ok += (*s.mu() == &nf * &pf) as usize;
        }
        out.push((
            format!("μ = n!·Pf(λ) on random λ, n = {n}, {trials} cases"),
            ok == trials,
        ));
    }
    // Pf² = det fixes the Pfaffian independently of the wedge expansion.
    let mut ok = 0;
    for _ in 0..20 {
        let mut a = AntisymmetricMatrix::new(6);
        for i in 0..6 {
            for j in i + 1..6 {
                a.set(
                    i,
                    j,
                    PolyScalar::constant(sampling::gaussian_rational(&mut rng, 5)),
                );
            }
        }
        let pf = pfaffian(&a).unwrap().as_constant().unwrap();
        ok += (&pf * &pf == a.to_matrix().unwrap().determinant()) as usize;
    }
    out.push(("Pf² = det on 20 random 6×6 matrices".into(), ok == 20));
    out
}

fn coordinates(f: &Form, basis: &[Monomial]) -> Vec<GaussianRational> {
    basis
        .iter()
        .map(|m| {
            f.coefficient(*m)
                .as_constant()
                .expect("constant coefficients")
        })
        .collect()
}

fn op_columns(
    m: &StructureModel,
    op: fn(&StructureModel, &Form) -> Form,
    from: Option<Bidegree>,
    to: Bidegree,
) -> Vec<Vec<GaussianRational>> {
    let alg = m.algebra();
    let target = alg.monomials_of_bidegree(to);
    let Some(from) = from else { return Vec::new() };
    alg.monomials_of_bidegree(from)
        .into_iter()
        .map(|mono| coordinates(&op(m, &Form::monomial(alg, mono)), &target))
        .collect()
}

fn rank_of(rows: usize, cols: &[Vec<GaussianRational>]) -> usize {
    if cols.is_empty() || rows == 0 {
        0
    } else {
        Matrix::from_columns(rows, cols).rank()
    }
}

fn shift(b: Bidegree, dp: isize, dq: isize) -> Option<Bidegree> {
    let p = b.p as isize + dp;
    let q = b.q as isize + dq;
    (p >= 0 && q >= 0 && p <= 2 && q <= 2).then(|| Bidegree::new(p as usize, q as usize))
}

fn del(m: &StructureModel, f: &Form) -> Form {
    m.del(f)
}

fn delbar(m: &StructureModel, f: &Form) -> Form {
    m.delbar(f)
}

fn ddbar(m: &StructureModel, f: &Form) -> Form {
    m.del(&m.delbar(f))
}

/// Bott-Chern and Aeppli numbers from ranks of explicit operator matrices.
fn brute_bc_a(m: &StructureModel, b: Bidegree) -> (usize, usize) {
    let alg = m.algebra();
    let dim = |x: Option<Bidegree>| x.map_or(0, |x| alg.monomials_of_bidegree(x).len());
    let here = dim(Some(b));
    let mut stacked = Vec::new();
    if let Some(t) = shift(b, 1, 0) {
        stacked = op_columns(m, del, Some(b), t);
    }
    if let Some(t) = shift(b, 0, 1) {
        let lower = op_columns(m, delbar, Some(b), t);
        stacked = if stacked.is_empty() {
            lower
        } else {
            stacked
                .into_iter()
                .zip(lower)
                .map(|(mut a, l)| {
                    a.extend(l);
                    a
                })
                .collect()
        };
    }
    let stacked_rows = dim(shift(b, 1, 0)) + dim(shift(b, 0, 1));
    let ker_both = here - rank_of(stacked_rows, &stacked);
    let im_ddbar = rank_of(here, &op_columns(m, ddbar, shift(b, -1, -1), b));
    let ker_ddbar = match shift(b, 1, 1) {
        Some(t) => here - rank_of(dim(Some(t)), &op_columns(m, ddbar, Some(b), t)),
        None => here,
    };
    let mut sums = op_columns(m, del, shift(b, -1, 0), b);
    sums.extend(op_columns(m, delbar, shift(b, 0, -1), b));
    (ker_both - im_ddbar, ker_ddbar - rank_of(here, &sums))
}

fn ac7() -> Checks {
    let mut out = scenario("kodaira");
    out.extend(scenario("kodaira-lambda"));
    let m = kodaira();
    let mut agree = true;
    for p in 0..=2 {
        for q in 0..=2 {
            let b = Bidegree::new(p, q);
            let (bc, a) = brute_bc_a(&m, b);
            let lib_bc = cohomology(&m, Theory::BottChern, Slot::Bidegree(b))
                .unwrap()
                .dimension;
            let lib_a = cohomology(&m, Theory::Aeppli, Slot::Bidegree(b))
                .unwrap()
                .dimension;
            if (bc, a) != (lib_bc, lib_a) {
                eprintln!("    ({p},{q}): rank oracle ({bc}, {a}), library ({lib_bc}, {lib_a})");
                agree = false;
            }
        }
    }
    out.push((
        "Bott-Chern/Aeppli numbers agree with the rank oracle".into(),
        agree,
    ));
    out
}

/// `∏_{i<j<n} y_ij · ∏_{i<n} (α y_{i,n} + β y_{i,n+1})` expanded term by term,
/// each sign the parity of the permutation sorting the factor sequence.
fn pluecker_oracle(n: usize) -> Vec<(u128, i64, u32)> {
    let pairs = bivector_pairs(n);
    let idx = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap();
    let fixed: Vec<usize> = (1..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| idx(i, j))
        .collect();
    let mut out = Vec::new();
    for subset in 0u32..(1 << (n - 1)) {
        let mut seq = fixed.clone();
        for i in 1..n {
            let chosen = subset >> (i - 1) & 1 == 1;
            seq.push(if chosen { idx(i, n) } else { idx(i, n + 1) });
        }
        let inversions: usize = (0..seq.len())
            .map(|a| (a + 1..seq.len()).filter(|&b| seq[a] > seq[b]).count())
            .sum();
        let bits = seq.iter().fold(0u128, |acc, &k| acc | 1 << k);
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        out.push((bits, sign, subset.count_ones()));
    }
    out.sort();
    out
}

fn ac10() -> Checks {
    let mut out = scenario("grass-degree");
    for n in 2..=5 {
        out.push((
            format!("embedding_degree({n}) = {}", n - 1),
            embedding_degree(n).ok() == Some(n as u32 - 1),
        ));
    }
    for n in 2..=5 {
        let curve = pluecker_curve(n).unwrap();
        let (a, b) = (PolyScalar::var(&alpha()), PolyScalar::var(&beta()));
        let expected: Vec<(u128, PolyScalar)> = pluecker_oracle(n)
            .into_iter()
            .map(|(bits, sign, k)| (bits, (&a.pow(k) * &b.pow(n as u32 - 1 - k)).scale(&c(sign))))
            .collect();
        let mut got: Vec<(u128, PolyScalar)> = curve
            .coordinates
            .iter()
            .map(|(m, p)| (m.bits(), p.clone()))
            .collect();
        got.sort_by_key(|(bits, _)| *bits);
        out.push((
            format!("n = {n}: coordinates match the permutation-parity expansion"),
            got == expected,
        ));
        out.push((
            format!("n = {n}: content is 1"),
            curve.content == PolyScalar::one(),
        ));
    }
    out
}

const CASES: u32 = 128;

fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases: CASES,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn property(name: &str, test: impl Fn(u64) -> Result<(), TestCaseError>) -> (String, bool) {
    let result = runner().run(&any::<u64>(), test);
    if let Err(e) = &result {
        eprintln!("    {name}: {e}");
    }
    (format!("{name} ({CASES} cases)"), result.is_ok())
}

fn sign(k: usize) -> PolyScalar {
    PolyScalar::from_int(if k.is_multiple_of(2) { 1 } else { -1 })
}

fn ac11() -> Checks {
    let models = [
        torus(3),
        kodaira(),
        nakamura(&GaussianRational::ratio(1, 2)).unwrap(),
    ];
    let conj_models = [torus(2), torus(4), kodaira()];
    let pick = |seed: u64| {
        (
            &models[(seed % models.len() as u64) as usize],
            sampling::rng(seed),
        )
    };
    let random_form = |rng: &mut sampling::SampleRng, m: &StructureModel| {
        let k = rand::Rng::random_range(rng, 0..=3usize);
        (k, sampling::form_of_degree(rng, m.algebra(), k, 4))
    };
    let mut out = Checks::new();
    out.push(property("graded commutativity", |seed| {
        let (m, mut rng) = pick(seed);
        let (j, a) = random_form(&mut rng, m);
        let (k, b) = random_form(&mut rng, m);
        prop_assert_eq!(&a * &b, (&b * &a).scale(&sign(j * k)));
        Ok(())
    }));
    out.push(property("Leibniz rule for d, ∂ and ∂̄", |seed| {
        let (m, mut rng) = pick(seed);
        let (j, a) = random_form(&mut rng, m);
        let (_, b) = random_form(&mut rng, m);
        let ops: [fn(&StructureModel, &Form) -> Form; 3] = [|m, f| m.d(f), del, delbar];
        for op in ops {
            let rhs = &(&op(m, &a) * &b) + &(&a * &op(m, &b)).scale(&sign(j));
            prop_assert_eq!(op(m, &(&a * &b)), rhs);
        }
        Ok(())
    }));
    out.push(property(
        "d² = 0, ∂² = 0, ∂̄² = 0, ∂∂̄ + ∂̄∂ = 0",
        |seed| {
            let (m, mut rng) = pick(seed);
            let (_, a) = random_form(&mut rng, m);
            prop_assert!(m.d(&m.d(&a)).is_zero());
            prop_assert!(m.del(&m.del(&a)).is_zero());
            prop_assert!(m.delbar(&m.delbar(&a)).is_zero());
            prop_assert!((&m.del(&m.delbar(&a)) + &m.delbar(&m.del(&a))).is_zero());
            Ok(())
        },
    ));
    let tori = [torus(2), torus(4)];
    out.push(property("polarization q(α) = ⟨α, α⟩", |seed| {
        let mut rng = sampling::rng(seed);
        let m = &tori[(seed % 2) as usize];
        let s = random_space(m, &mut rng);
        let a = sampling::form_of_degree(&mut rng, m.algebra(), 2, 5);
        let b = sampling::form_of_degree(&mut rng, m.algebra(), 2, 5);
        let qa = q_sigma(&s, &a).unwrap();
        let qb = q_sigma(&s, &b).unwrap();
        let ab = bilinear(&s, &a, &b).unwrap();
        prop_assert_eq!(bilinear(&s, &a, &a).unwrap(), qa.clone());
        prop_assert_eq!(ab.clone(), bilinear(&s, &b, &a).unwrap());
        prop_assert_eq!(
            q_sigma(&s, &(&a + &b)).unwrap(),
            &(&qa + &qb) + &ab.scale(&c(2))
        );
        Ok(())
    }));
    out.push(property("∫ conj(f) = conj(∫ f)", |seed| {
        let mut rng = sampling::rng(seed);
        let m = &conj_models[(seed % 3) as usize];
        let alg = m.algebra();
        let top = alg.len();
        let j = rand::Rng::random_range(&mut rng, 0..=top);
        let a = sampling::form_of_degree(&mut rng, alg, j, 4);
        let b = sampling::form_of_degree(&mut rng, alg, top - j, 4);
        let f = &a * &b;
        prop_assert_eq!(
            f.conjugate().unwrap().integrate(),
            f.integrate().conjugate(alg.vars()).unwrap()
        );
        Ok(())
    }));
    out
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "4-torus deformation q(σ_t) = -16 t1 t2 t3 t4 V²", ac1),
        (2, "2-torus Gram matrix, oracle and closed form", || {
            scenario("torus2-gram")
        }),
        (3, "4-torus Gram blocks", || scenario("torus4-gram")),
        (4, "vanishing identity on 2- and 4-tori", || {
            scenario("bbf-vanishing")
        }),
        (5, "rescaling law", ac5),
        (6, "μ = n!·Pf(λ)", ac6),
        (7, "Kodaira surface", ac7),
        (8, "Nakamura model", || scenario("nakamura")),
        (9, "product formula and Kummer surrogate", || {
            scenario("k3-product")
        }),
        (10, "Plücker degrees", ac10),
        (11, "property suites", ac11),
    ];
    let mut unexpected = 0;
    for (id, title, run) in criteria {
        let checks = run();
        let failed: Vec<&String> = checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n)
            .collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!("AC{id:<2} {verdict}  {title} ({} checks)", checks.len());
        for name in failed {
            let known = KNOWN.contains(&(id, name.as_str()));
            println!(
                "       failed: {name}{}",
                if known { " [known]" } else { "" }
            );
            unexpected += (!known) as usize;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
