//! The bundled verification suite: one entry per checkable claim.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use rand::Rng;
use serde::Serialize;

use qortho::algebra::{complementarity_report, intersection_dim, reconstruct, spanning_decomposition, OperatorAlgebra, ReportConfig};
use qortho::bell::{bell_algebra, bell_complementarity, bell_expectation, bell_unitary};
use qortho::block::{adjoint_closure_check, frame_defect, pauli_block_unitary, unitary_defect, weyl_block_unitary};
use qortho::cartan::{cartan_n, cartan_scan, class_member, four_family_dim4, pauli_triplet, CartanClass, CartanParams, SignedWord};
use qortho::entropy::{mu_slack, sanchez_slack, ObservableSpec, State};
use qortho::family::{family_search, SearchOutcome, Strategy};
use qortho::fermion::{car_partition_check, jordan_wigner, two_mode_v};
use qortho::matrix::{haar_unitary_with, pauli, pauli2, phase, Matrix, C64, I, ONE, ZERO};
use qortho::rng::stream_rng;
use qortho::weyl::{deviation_matrix, mub_prime, pauli_partition_dim4, Basis};
use qortho::{Result, Tolerance};

use crate::RunConfig;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst defect (or smallest slack) observed.
    pub measured: f64,
    /// The claim being checked.
    pub anchor: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub eps: f64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

struct Outcome {
    passed: bool,
    measured: f64,
    detail: String,
}

type CheckFn = fn(&RunConfig) -> Result<Outcome>;

const CHECKS: [(&str, &str, CheckFn); 10] = [
    ("mub-prime", "clock and shift classes give p+1 mutually unbiased bases in prime dimension p", check_mub_prime),
    ("mub-dim4-pauli", "the five commuting Pauli triples determine 5 mutually unbiased bases in dimension 4", check_pauli_partition),
    ("complementarity-equivalence", "the four complementarity conditions agree for homogeneous subalgebras", check_equivalence),
    ("useful-unitaries", "block unitaries with an orthonormal block basis are useful; Haar unitaries are not", check_useful),
    ("cartan-classes", "N is useful iff |c_i|^2 = 1/4 iff two angles are pi/4 mod pi/2", check_cartan),
    ("intersection-and-family", "conjugates by useful unitaries meet M2 (x) CI nontrivially; at most 4 complementary copies of M2 in M4", check_intersection_family),
    ("uncertainty", "entropic uncertainty bounds hold and are attained at basis states of unbiased pairs", check_uncertainty),
    ("car", "subalgebras generated by disjoint fermion modes are complementary", check_car),
    ("bell", "the Bell algebra is complementary to every conjugate of a local algebra by one of its unitaries", check_bell),
    ("spanning-decomposition", "four complementary M2 copies and their commutative complement span M4", check_spanning),
];

pub fn run_suite(cfg: &RunConfig) -> SuiteReport {
    let checks: Vec<CheckResult> = CHECKS
        .iter()
        .map(|(name, anchor, f)| {
            let (passed, measured, detail) = match f(cfg) {
                Ok(o) => (o.passed, o.measured, o.detail),
                Err(e) => (false, f64::NAN, format!("error: {e}")),
            };
            CheckResult { name: name.to_string(), passed, measured, anchor: anchor.to_string(), detail }
        })
        .collect();
    SuiteReport {
        seed: cfg.seed,
        eps: cfg.eps.eps,
        samples: cfg.samples,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn check_mub_prime(cfg: &RunConfig) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut counts_ok = true;
    for p in [2usize, 3, 5, 7] {
        let bases = mub_prime(p, cfg.eps)?;
        counts_ok &= bases.len() == p + 1;
        worst = worst.max(max_entry(&deviation_matrix(&bases)?));
    }
    Ok(Outcome {
        passed: counts_ok && worst <= cfg.eps.eps,
        measured: worst,
        detail: format!("p in {{2,3,5,7}}, counts p+1: {counts_ok}, max deviation {worst:.3e}"),
    })
}

fn check_pauli_partition(cfg: &RunConfig) -> Result<Outcome> {
    let bases = pauli_partition_dim4(cfg.eps)?;
    let worst = max_entry(&deviation_matrix(&bases)?);
    Ok(Outcome {
        passed: bases.len() == 5 && worst <= cfg.eps.eps,
        measured: worst,
        detail: format!("{} bases, max of 10 pairwise deviations {worst:.3e}", bases.len()),
    })
}

fn max_entry(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().copied().fold(0.0, f64::max)
}

/// Homogeneous pairs of five kinds, alternating complementary and not.
pub fn equivalence_pairs(count: usize, seed: u64, tol: Tolerance) -> Result<Vec<(OperatorAlgebra, OperatorAlgebra, bool)>> {
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = stream_rng(seed, "equivalence", i as u64);
        let comp = (i / 5) % 2 == 0;
        let pair = match i % 5 {
            0 => {
                let g = haar_unitary_with(4, &mut rng);
                let w = if comp {
                    let class = CartanClass::all()[rng.random_range(0..3)];
                    let p = class_member(class, rng.random_range(0.0..2.0 * PI), rng.random_range(0..4), rng.random_range(0..4));
                    haar_unitary_with(2, &mut rng).kron(&haar_unitary_with(2, &mut rng)) * cartan_n(p)
                } else {
                    haar_unitary_with(4, &mut rng)
                };
                (OperatorAlgebra::factor(&g, 2, 2, tol)?, OperatorAlgebra::factor(&(&g * w), 2, 2, tol)?)
            }
            1 => {
                let g = haar_unitary_with(9, &mut rng);
                let w = if comp {
                    let f = Basis::fourier(3).to_matrix();
                    let d1 = Matrix::diagonal(&[0; 3].map(|_| phase(rng.random_range(0.0..2.0 * PI))));
                    let d2 = Matrix::diagonal(&[0; 3].map(|_| phase(rng.random_range(0.0..2.0 * PI))));
                    weyl_block_unitary(3, &(d1 * f * d2), tol)?.w
                } else {
                    haar_unitary_with(9, &mut rng)
                };
                (OperatorAlgebra::factor(&g, 3, 3, tol)?, OperatorAlgebra::factor(&(&g * w), 3, 3, tol)?)
            }
            2 => {
                let n = 2 + (i / 10) % 4;
                let g = haar_unitary_with(n, &mut rng);
                let other = if comp { &g * Basis::fourier(n).to_matrix() } else { haar_unitary_with(n, &mut rng) };
                (
                    OperatorAlgebra::diagonal_in(&Basis::from_unitary(&g, tol)?),
                    OperatorAlgebra::diagonal_in(&Basis::from_unitary(&other, tol)?),
                )
            }
            3 => {
                let m = if comp {
                    bell_unitary([0; 4].map(|_| rng.random_range(0.0..2.0 * PI)))
                } else {
                    haar_unitary_with(4, &mut rng)
                };
                (bell_algebra().algebra, OperatorAlgebra::factor(&m, 2, 2, tol)?)
            }
            _ => {
                let g = haar_unitary_with(4, &mut rng);
                let u = haar_unitary_with(2, &mut rng);
                let h = &u * pauli(3) * u.adjoint();
                let gen = if comp { h.kron(&Matrix::identity(2)) } else { Matrix::identity(2).kron(&h) };
                let a = OperatorAlgebra::commutative_generated_by(&[gen], tol)?.conjugate(&g);
                (a, OperatorAlgebra::factor(&g, 2, 2, tol)?)
            }
        };
        out.push((pair.0, pair.1, comp));
    }
    Ok(out)
}

fn check_equivalence(cfg: &RunConfig) -> Result<Outcome> {
    let pairs = equivalence_pairs(200, cfg.seed, cfg.eps)?;
    let mut disagreements = 0;
    let mut wrong_verdict = 0;
    let mut positives = 0;
    for (i, (a, b, comp)) in pairs.iter().enumerate() {
        let rc = ReportConfig { samples: 4, seed: stream_rng_seed(cfg.seed, i), tol: cfg.eps, minimal_projections: true };
        let r = complementarity_report(a, b, &rc)?;
        if !r.all_agree() {
            disagreements += 1;
        }
        if r.complementary() != *comp {
            wrong_verdict += 1;
        }
        positives += r.complementary() as usize;
    }
    Ok(Outcome {
        passed: disagreements == 0 && wrong_verdict == 0,
        measured: disagreements as f64,
        detail: format!(
            "{} pairs ({positives} complementary), {disagreements} with disagreeing conditions, {wrong_verdict} with unexpected verdict",
            pairs.len()
        ),
    })
}

fn stream_rng_seed(seed: u64, i: usize) -> u64 {
    qortho::rng::stream_seed(seed, "equivalence-projections", i as u64)
}

/// Blocks of the second printed qubit example: `[[-i s2, s1], [s3, I]] / sqrt 2`.
pub fn printed_weyl_blocks() -> Vec<Vec<Matrix>> {
    let s = FRAC_1_SQRT_2;
    vec![
        vec![pauli(2).scale(-I * s), pauli(1).scale_re(s)],
        vec![pauli(3).scale_re(s), Matrix::identity(2).scale_re(s)],
    ]
}

fn check_useful(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.eps;
    let paulik = unitary_defect(&pauli_block_unitary(), 2, 2, tol)?;
    let printed = frame_defect(&printed_weyl_blocks(), 2, 2);
    let lr = unitary_defect(&qortho::algebra::swap(2, 2), 2, 2, tol)?;
    let c = Matrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])?;
    let weyl = weyl_block_unitary(2, &c, tol)?.w;
    let weyl_defect = unitary_defect(&weyl, 2, 2, tol)?;
    let mut closure = true;
    for w in [pauli_block_unitary(), qortho::algebra::swap(2, 2), weyl.clone()] {
        closure &= adjoint_closure_check(&w, 2, 2, tol)?;
    }
    let mut min_haar = f64::INFINITY;
    for i in 0..100 {
        let w = haar_unitary_with(4, &mut stream_rng(cfg.seed, "useful-haar", i));
        min_haar = min_haar.min(unitary_defect(&w, 2, 2, tol)?);
        closure &= adjoint_closure_check(&w, 2, 2, tol)?;
    }
    let worst = paulik.max(printed).max(lr).max(weyl_defect);
    Ok(Outcome {
        passed: worst <= tol.eps && min_haar > 1e-3 && closure,
        measured: worst,
        detail: format!(
            "defects: first qubit example {paulik:.3e}, printed clock/shift blocks {printed:.3e}, swap {lr:.3e}, \
             clock/shift unitary {weyl_defect:.3e}; min Haar defect {min_haar:.3e}; adjoint closure {closure}"
        ),
    })
}

fn check_cartan(cfg: &RunConfig) -> Result<Outcome> {
    let scan = cartan_scan(20, 1000, cfg.seed, cfg.eps);
    let n3 = Matrix::from_rows(&[
        vec![ONE, ZERO, ZERO, ZERO],
        vec![ZERO, ZERO, I, ZERO],
        vec![ZERO, I, ZERO, ZERO],
        vec![ZERO, ZERO, ZERO, ONE],
    ])?;
    let n = cartan_n(CartanParams::new(FRAC_PI_4, FRAC_PI_4, 0.0));
    let n_err = n.distance(&n3);
    let triplet = pauli_triplet(&n, cfg.eps)?;
    let expected = [SignedWord::new(1, 2, 3), SignedWord::new(-1, 1, 3), SignedWord::new(1, 3, 0)];
    let mut conj_err: f64 = 0.0;
    for (k, w) in expected.iter().enumerate() {
        conj_err = conj_err.max((&n * pauli2(0, k + 1) * n.adjoint()).distance(&w.to_matrix()));
    }
    let worst = n_err.max(conj_err);
    Ok(Outcome {
        passed: scan.all_agree() && triplet.words == Some(expected) && worst <= cfg.eps.eps,
        measured: worst.max(scan.disagreements.len() as f64),
        detail: format!(
            "{} points ({} useful), {} disagreements; N3 entry error {n_err:.3e}, conjugation error {conj_err:.3e}",
            scan.points,
            scan.useful_points,
            scan.disagreements.len()
        ),
    })
}

fn check_intersection_family(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.eps;
    let local = OperatorAlgebra::local_left(2, 2);
    let mut min_dim = usize::MAX;
    for i in 0..100 {
        let mut rng = stream_rng(cfg.seed, "intersection", i);
        let class = CartanClass::all()[rng.random_range(0..3)];
        let p = class_member(class, rng.random_range(0.0..2.0 * PI), rng.random_range(0..4), rng.random_range(0..4));
        let w = haar_unitary_with(2, &mut rng).kron(&haar_unitary_with(2, &mut rng)) * cartan_n(p);
        min_dim = min_dim.min(intersection_dim(&OperatorAlgebra::factor(&w, 2, 2, tol)?, &local)?);
    }
    let four = family_search(2, 4, Strategy::PauliTriplet, cfg.seed, 100_000, tol)?;
    let five = family_search(2, 5, Strategy::PauliTriplet, cfg.seed, 100_000, tol)?;
    let five_random = family_search(2, 5, Strategy::CartanRandom, cfg.seed, 100_000, tol)?;
    let four_defect = four.family().max_defect();
    let four_ok = matches!(&four, SearchOutcome::Found { family, .. } if family.len() == 4 && family.defects.len() == 4);
    Ok(Outcome {
        passed: min_dim >= 2 && four_ok && four_defect <= tol.eps && !five.is_found() && !five_random.is_found(),
        measured: four_defect,
        detail: format!(
            "min intersection dim {min_dim}; k=4 found: {} (max of 6 defects {four_defect:.3e}); \
             k=5 found: {} after {} trials, random search found: {} after {} trials",
            four.is_found(),
            five.is_found(),
            five.trials(),
            five_random.is_found(),
            five_random.trials()
        ),
    })
}

fn check_uncertainty(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.eps;
    let floor = -10.0 * tol.eps;
    let mut min_slack = f64::INFINITY;
    let mut attain: f64 = 0.0;
    for n in 2..=5usize {
        let a = ObservableSpec::from_basis(&Basis::standard(n));
        let b = ObservableSpec::from_basis(&Basis::fourier(n));
        for i in 0..cfg.samples {
            let mut rng = stream_rng(cfg.seed, "uncertainty-mu", (n * 1_000_000 + i) as u64);
            min_slack = min_slack.min(mu_slack(&a, &b, &State::random_pure(n, &mut rng))?);
            min_slack = min_slack.min(mu_slack(&a, &b, &State::random_mixed(n, 3, &mut rng))?);
        }
        for v in &Basis::standard(n).vectors {
            attain = attain.max(mu_slack(&a, &b, &State::pure(v, tol)?)?.abs());
        }
    }
    let mut min_sanchez = f64::INFINITY;
    let mut closed_form_err = 0.0;
    for n in [2usize, 3] {
        let obs: Vec<ObservableSpec> = mub_prime(n, tol)?.iter().map(ObservableSpec::from_basis).collect();
        for i in 0..cfg.samples {
            let mut rng = stream_rng(cfg.seed, "uncertainty-sanchez", (n * 1_000_000 + i) as u64);
            min_sanchez = min_sanchez.min(sanchez_slack(&obs, &State::random_pure(n, &mut rng), tol)?);
        }
        if n == 2 {
            let s = sanchez_slack(&obs, &State::pure(&Basis::standard(2).vectors[0], tol)?, tol)?;
            closed_form_err = (s - (2.0 * 2f64.ln() - 3.0 * 1.5f64.ln())).abs();
        }
    }
    let passed = min_slack >= floor && attain <= 10.0 * tol.eps && min_sanchez >= floor && closed_form_err <= 10.0 * tol.eps;
    Ok(Outcome {
        passed,
        measured: min_slack.min(min_sanchez),
        detail: format!(
            "min two-observable slack {min_slack:.3e}, basis-state slack {attain:.3e}, \
             min multi-observable slack {min_sanchez:.3e}, dim-2 closed-form error {closed_form_err:.3e}"
        ),
    })
}

/// Unordered bipartitions of `0..n` into two nonempty parts.
pub fn bipartitions(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    (1..(1usize << (n - 1)))
        .map(|mask| {
            let (a, b): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| mask >> i & 1 == 1);
            (a, b)
        })
        .collect()
}

fn check_car(cfg: &RunConfig) -> Result<Outcome> {
    let sys = jordan_wigner(2)?;
    let a1 = Matrix::from_real_rows(&[&[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0], &[0.0; 4], &[0.0; 4]])?;
    let a2 = Matrix::from_real_rows(&[&[0.0, 1.0, 0.0, 0.0], &[0.0; 4], &[0.0, 0.0, 0.0, -1.0], &[0.0; 4]])?;
    let exact = sys.ops[0] == a1 && sys.ops[1] == a2;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 2..=4 {
        let sys = jordan_wigner(n)?;
        for (j1, j2) in bipartitions(n) {
            worst = worst.max(car_partition_check(&sys, &j1, &j2)?);
            count += 1;
        }
    }
    let v = unitary_defect(&two_mode_v(), 2, 2, cfg.eps)?;
    Ok(Outcome {
        passed: exact && worst <= cfg.eps.eps && v <= cfg.eps.eps,
        measured: worst.max(v),
        detail: format!("two-mode operators exact: {exact}; {count} partitions, max defect {worst:.3e}; V defect {v:.3e}"),
    })
}

fn check_bell(cfg: &RunConfig) -> Result<Outcome> {
    let mut expectation_err: f64 = 0.0;
    for k in 0..4 {
        let target = Matrix::identity(4).scale(pauli(k).tau());
        for x in [Matrix::identity(2).kron(&pauli(k)), pauli(k).kron(&Matrix::identity(2))] {
            expectation_err = expectation_err.max(bell_expectation(&x)?.distance(&target));
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let mut rng = stream_rng(cfg.seed, "bell", i);
        let m = bell_unitary([0; 4].map(|_| rng.random_range(0.0..2.0 * PI)));
        worst = worst.max(bell_complementarity(&m, cfg.eps)?.max_defect());
    }
    Ok(Outcome {
        passed: expectation_err == 0.0 && worst <= cfg.eps.eps,
        measured: worst,
        detail: format!("local expectation error {expectation_err:.3e}; max defect over 100 unitaries {worst:.3e}"),
    })
}

fn check_spanning(cfg: &RunConfig) -> Result<Outcome> {
    let algebras = four_family_dim4(cfg.eps)?.all_algebras();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let mut rng = stream_rng(cfg.seed, "spanning", i);
        let x = Matrix::from_fn(4, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let parts = spanning_decomposition(&algebras, &x, cfg.eps)?;
        worst = worst.max(reconstruct(x.tau(), &parts).distance(&x));
    }
    Ok(Outcome {
        passed: worst <= 10.0 * cfg.eps.eps,
        measured: worst,
        detail: format!("{} algebras, max reconstruction error over 100 operators {worst:.3e}", algebras.len()),
    })
}
