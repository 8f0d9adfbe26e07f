//! Entropies of observables and POVMs, and the entropic uncertainty bounds.
//!
//! Logarithms are natural; [`nats_to_bits`] converts.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{haar_unitary_with, random_unit_vector, Matrix, Tolerance};
use crate::rng::stream_rng;
use crate::weyl::Basis;

/// Denominators below this are left out of the POVM bound.
pub const POVM_DENOMINATOR_FLOOR: f64 = 1e-12;

pub fn nats_to_bits(x: f64) -> f64 {
    x / std::f64::consts::LN_2
}

/// `-t log t`, with `eta(0) = 0` and small negative rounding clamped to 0.
pub fn eta(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -t * t.ln()
    }
}

fn check_psd(m: &Matrix, tol: Tolerance) -> std::result::Result<(), String> {
    if !m.is_hermitian(tol) {
        return Err("not Hermitian".into());
    }
    let min = m.min_eigenvalue();
    if min < -tol.eps.max(1e-9) {
        return Err(format!("negative eigenvalue {min:.3e}"));
    }
    Ok(())
}

/// Density matrix.
#[derive(Clone, Debug, Serialize)]
pub struct State {
    pub rho: Matrix,
}

impl State {
    pub fn new(rho: Matrix, tol: Tolerance) -> Result<Self> {
        check_psd(&rho, tol).map_err(Error::InvalidState)?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > tol.eps.max(1e-9) || tr.im.abs() > tol.eps.max(1e-9) {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        Ok(State { rho })
    }

    /// `|v><v|` for a unit vector `v`.
    pub fn pure(v: &[crate::matrix::C64], tol: Tolerance) -> Result<Self> {
        State::new(Matrix::projector(v), tol)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        State { rho: Matrix::identity(n).scale_re(1.0 / n as f64) }
    }

    pub fn random_pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        State { rho: Matrix::projector(&random_unit_vector(n, rng)) }
    }

    /// Convex combination of `rank` random pure states with uniform random weights.
    pub fn random_mixed<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Self {
        let weights: Vec<f64> = (0..rank.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        let rho = weights
            .iter()
            .fold(Matrix::zeros(n), |acc, w| acc + Matrix::projector(&random_unit_vector(n, rng)).scale_re(w / total));
        State { rho }
    }

    /// `lambda a + (1 - lambda) b`.
    pub fn mix(lambda: f64, a: &State, b: &State) -> Self {
        State { rho: a.rho.scale_re(lambda) + b.rho.scale_re(1.0 - lambda) }
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn expectation(&self, x: &Matrix) -> f64 {
        (&self.rho * x).trace().re
    }
}

/// Spectral projections of an observable.
#[derive(Clone, Debug, Serialize)]
pub struct ObservableSpec {
    pub projections: Vec<Matrix>,
}

impl ObservableSpec {
    pub fn new(projections: Vec<Matrix>, tol: Tolerance) -> Result<Self> {
        let n = projections.first().map(Matrix::dim).ok_or_else(|| Error::InvalidObservable("no projections".into()))?;
        let eps = tol.eps.max(1e-9);
        let mut sum = Matrix::zeros(n);
        for (i, p) in projections.iter().enumerate() {
            if p.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
            }
            if !p.is_projection(tol) {
                return Err(Error::InvalidObservable(format!("element {i} is not a projection")));
            }
            for q in &projections[..i] {
                if (p * q).max_abs() > eps {
                    return Err(Error::InvalidObservable("projections are not orthogonal".into()));
                }
            }
            sum = sum + p;
        }
        if !sum.approx_eq(&Matrix::identity(n), tol) {
            return Err(Error::InvalidObservable("projections do not sum to the identity".into()));
        }
        Ok(ObservableSpec { projections })
    }

    pub fn from_basis(b: &Basis) -> Self {
        ObservableSpec { projections: b.projections() }
    }

    pub fn dim(&self) -> usize {
        self.projections[0].dim()
    }

    pub fn is_maximal_abelian(&self) -> bool {
        self.projections.len() == self.dim() && self.projections.iter().all(|p| (p.trace().re - 1.0).abs() < 1e-9)
    }

    /// `U P_i U*` for every projection.
    pub fn conjugate(&self, u: &Matrix) -> Self {
        let adj = u.adjoint();
        ObservableSpec { projections: self.projections.iter().map(|p| u * p * &adj).collect() }
    }

    fn distribution(&self, s: &State) -> Result<Vec<f64>> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: s.dim() });
        }
        Ok(self.projections.iter().map(|p| s.expectation(p)).collect())
    }
}

/// `H(A, rho) = sum_i eta(Tr rho P_i)`.
pub fn observable_entropy(a: &ObservableSpec, s: &State) -> Result<f64> {
    Ok(a.distribution(s)?.into_iter().map(eta).sum())
}

fn require_maximal(a: &ObservableSpec) -> Result<()> {
    if a.is_maximal_abelian() {
        Ok(())
    } else {
        Err(Error::InvalidObservable("projections must all have rank one".into()))
    }
}

/// `c = sqrt(max_ij Tr P_i Q_j)` for two nondegenerate observables.
pub fn mu_constant(a: &ObservableSpec, b: &ObservableSpec) -> Result<f64> {
    require_maximal(a)?;
    require_maximal(b)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let mut c2: f64 = 0.0;
    for p in &a.projections {
        for q in &b.projections {
            c2 = c2.max((p * q).trace().re);
        }
    }
    Ok(c2.sqrt().min(1.0))
}

/// `H(A) + H(B) + 2 log c`, nonnegative by the Maassen-Uffink bound.
pub fn mu_slack(a: &ObservableSpec, b: &ObservableSpec, s: &State) -> Result<f64> {
    let c = mu_constant(a, b)?;
    Ok(observable_entropy(a, s)? + observable_entropy(b, s)? + 2.0 * c.ln())
}

#[derive(Clone, Debug, Serialize)]
pub struct Povm {
    pub effects: Vec<Matrix>,
}

impl Povm {
    pub fn new(effects: Vec<Matrix>, tol: Tolerance) -> Result<Self> {
        let n = effects.first().map(Matrix::dim).ok_or_else(|| Error::InvalidPovm("no effects".into()))?;
        let mut sum = Matrix::zeros(n);
        for (i, e) in effects.iter().enumerate() {
            if e.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: e.dim() });
            }
            check_psd(e, tol).map_err(|m| Error::InvalidPovm(format!("effect {i}: {m}")))?;
            sum = sum + e;
        }
        if !sum.approx_eq(&Matrix::identity(n), tol) {
            return Err(Error::InvalidPovm("effects do not sum to the identity".into()));
        }
        Ok(Povm { effects })
    }

    pub fn trivial(n: usize) -> Self {
        Povm { effects: vec![Matrix::identity(n)] }
    }

    pub fn from_observable(a: &ObservableSpec) -> Self {
        Povm { effects: a.projections.clone() }
    }

    /// `{E, I - E}` with `E` having Haar eigenvectors and uniform eigenvalues in `[0, 1]`.
    pub fn random_two_effect<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let u = haar_unitary_with(n, rng);
        let d = Matrix::diagonal(&(0..n).map(|_| crate::matrix::C64::new(rng.random::<f64>(), 0.0)).collect::<Vec<_>>());
        let e = &u * d * u.adjoint();
        let f = Matrix::identity(n) - &e;
        Povm { effects: vec![e, f] }
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }
}

/// `H(E, phi) = sum_i eta(<phi, E_i phi>)`.
pub fn povm_entropy(e: &Povm, phi: &[crate::matrix::C64]) -> Result<f64> {
    if phi.len() != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: phi.len() });
    }
    Ok(e.effects.iter().map(|x| eta(x.sandwich(phi, phi).re)).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct PovmSlack {
    pub slack: f64,
    pub entropy_e: f64,
    pub entropy_f: f64,
    /// `sup_ij |<phi, E_i F_j phi>| / (<phi, E_i phi> <phi, F_j phi>)` over the kept terms.
    pub sup: f64,
    /// Pairs `(i, j)` left out because a denominator fell below the floor.
    pub skipped: Vec<(usize, usize)>,
}

/// `H(E) + H(F) + 2 log sup_ij |<phi, E_i F_j phi>| / (<phi, E_i phi> <phi, F_j phi>)`.
pub fn povm_slack(e: &Povm, f: &Povm, phi: &[crate::matrix::C64]) -> Result<PovmSlack> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: f.dim() });
    }
    let norm = crate::matrix::vector_norm(phi);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("vector has norm {norm}, expected 1")));
    }
    let entropy_e = povm_entropy(e, phi)?;
    let entropy_f = povm_entropy(f, phi)?;
    let pe: Vec<f64> = e.effects.iter().map(|x| x.sandwich(phi, phi).re).collect();
    let pf: Vec<f64> = f.effects.iter().map(|x| x.sandwich(phi, phi).re).collect();
    let mut sup: f64 = 0.0;
    let mut skipped = Vec::new();
    for (i, ei) in e.effects.iter().enumerate() {
        for (j, fj) in f.effects.iter().enumerate() {
            if pe[i] < POVM_DENOMINATOR_FLOOR || pf[j] < POVM_DENOMINATOR_FLOOR {
                skipped.push((i, j));
                continue;
            }
            sup = sup.max((ei * fj).sandwich(phi, phi).norm() / (pe[i] * pf[j]));
        }
    }
    Ok(PovmSlack { slack: entropy_e + entropy_f + 2.0 * sup.ln(), entropy_e, entropy_f, sup, skipped })
}

/// Largest `| Tr P_i Q_j - 1/n |` over the rank-one projections of two observables.
pub fn observable_unbiasedness(a: &ObservableSpec, b: &ObservableSpec) -> Result<f64> {
    require_maximal(a)?;
    require_maximal(b)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let target = 1.0 / a.dim() as f64;
    let mut worst: f64 = 0.0;
    for p in &a.projections {
        for q in &b.projections {
            worst = worst.max(((p * q).trace().re - target).abs());
        }
    }
    Ok(worst)
}

/// `sum_k H(A_k) - (n + 1) log((n + 1) / 2)` for `n + 1` pairwise unbiased observables.
pub fn sanchez_slack(observables: &[ObservableSpec], s: &State, tol: Tolerance) -> Result<f64> {
    let n = s.dim();
    if observables.len() != n + 1 {
        return Err(Error::InvalidArgument(format!("expected {} observables, got {}", n + 1, observables.len())));
    }
    let mut worst: f64 = 0.0;
    for (i, a) in observables.iter().enumerate() {
        for b in &observables[..i] {
            worst = worst.max(observable_unbiasedness(a, b)?);
        }
    }
    if worst > tol.eps.max(1e-9) {
        return Err(Error::NotUnbiased { deviation: worst });
    }
    let total = observables.iter().map(|a| observable_entropy(a, s)).sum::<Result<f64>>()?;
    let k = (n + 1) as f64;
    Ok(total - k * (k / 2.0).ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    /// Standard and Fourier bases.
    Mub,
    /// Standard and a Haar-random basis.
    Random,
}

impl std::str::FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mub" => Ok(PairKind::Mub),
            "random" => Ok(PairKind::Random),
            other => Err(Error::InvalidArgument(format!("unknown pair '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn of(values: &[f64], bins: usize) -> Self {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if values.is_empty() || bins == 0 {
            return Histogram { edges: Vec::new(), counts: Vec::new() };
        }
        let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
        let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0; bins];
        for &v in values {
            let idx = (((v - lo) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        Histogram { edges, counts }
    }
}

/// A basis state of the first observable and the slack it produces.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub basis_index: usize,
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UncertaintyReport {
    pub dim: usize,
    pub pair: PairKind,
    pub samples: usize,
    pub c: f64,
    pub bound_nats: f64,
    pub bound_bits: f64,
    pub min_slack: f64,
    pub min_slack_bits: f64,
    pub violations: usize,
    pub histogram: Histogram,
    pub witnesses: Vec<Witness>,
}

/// Maassen-Uffink slacks over Haar-random pure states, one seeded stream per sample.
pub fn uncertainty_scan(dim: usize, pair: PairKind, samples: usize, seed: u64, tol: Tolerance) -> Result<UncertaintyReport> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {dim}")));
    }
    let std_basis = Basis::standard(dim);
    let other = match pair {
        PairKind::Mub => Basis::fourier(dim),
        PairKind::Random => Basis::from_unitary(&haar_unitary_with(dim, &mut stream_rng(seed, "uncertainty-pair", 0)), tol)?,
    };
    let a = ObservableSpec::from_basis(&std_basis);
    let b = ObservableSpec::from_basis(&other);
    let c = mu_constant(&a, &b)?;
    let slacks = (0..samples)
        .map(|i| mu_slack(&a, &b, &State::random_pure(dim, &mut stream_rng(seed, "uncertainty", i as u64))))
        .collect::<Result<Vec<f64>>>()?;
    let witnesses = std_basis
        .vectors
        .iter()
        .enumerate()
        .map(|(i, v)| Ok(Witness { basis_index: i, slack: mu_slack(&a, &b, &State::pure(v, tol)?)? }))
        .collect::<Result<Vec<_>>>()?;
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(UncertaintyReport {
        dim,
        pair,
        samples,
        c,
        bound_nats: -2.0 * c.ln(),
        bound_bits: nats_to_bits(-2.0 * c.ln()),
        min_slack,
        min_slack_bits: nats_to_bits(min_slack),
        violations: slacks.iter().filter(|&&s| s < -tol.eps).count(),
        histogram: Histogram::of(&slacks, 10),
        witnesses,
    })
}
