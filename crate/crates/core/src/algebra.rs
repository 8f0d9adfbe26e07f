//! Unital *-subalgebras of `M_n(C)` and their complementarity.
//!
//! An [`OperatorAlgebra`] is stored as an orthonormal basis for the normalized
//! Hilbert-Schmidt inner product whose first element is the identity; the
//! remaining elements span the traceless part. The structure tag is declared by
//! the constructor (and verified where that is cheap), it is not inferred.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{hs_inner_unchecked, random_unit_vector, Matrix, Tolerance, C64, I, ONE, ZERO};

/// Relative threshold below which a residual counts as linearly dependent.
pub const RANK_TOL: f64 = 1e-8;

/// Orthonormal (normalized Hilbert-Schmidt) basis under construction.
#[derive(Clone, Debug)]
pub(crate) struct OrthoSpan {
    dim: usize,
    basis: Vec<Matrix>,
}

impl OrthoSpan {
    pub(crate) fn new(dim: usize) -> Self {
        OrthoSpan { dim, basis: Vec::new() }
    }

    pub(crate) fn len(&self) -> usize {
        self.basis.len()
    }

    fn residual(&self, m: &Matrix) -> Matrix {
        let mut r = m.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let c = hs_inner_unchecked(b, &r);
                if c.norm() > 0.0 {
                    r = r - b.scale(c);
                }
            }
        }
        r
    }

    /// Adds `m` if it is independent of the current span; returns whether it was added.
    pub(crate) fn insert(&mut self, m: &Matrix) -> bool {
        debug_assert_eq!(m.dim(), self.dim);
        let norm = m.hs_norm();
        if norm < 1e-14 {
            return false;
        }
        let r = self.residual(m);
        let rn = r.hs_norm();
        if rn <= RANK_TOL * norm {
            return false;
        }
        self.basis.push(r.scale_re(1.0 / rn));
        true
    }

    pub(crate) fn into_basis(self) -> Vec<Matrix> {
        self.basis
    }
}

#[derive(Clone, Debug)]
pub enum Structure {
    Commutative,
    /// `conjugator (C I_outer (x) M_inner) conjugator*`.
    Factor { conjugator: Matrix, outer: usize, inner: usize },
    General,
}

impl Structure {
    pub fn tag(&self) -> &'static str {
        match self {
            Structure::Commutative => "commutative",
            Structure::Factor { .. } => "factor",
            Structure::General => "general",
        }
    }
}

#[derive(Clone, Debug)]
pub struct OperatorAlgebra {
    ambient_dim: usize,
    basis: Vec<Matrix>,
    structure: Structure,
}

impl OperatorAlgebra {
    /// Smallest unital *-algebra containing `generators`.
    ///
    /// The span starts as `{I} + generators + adjoints`; every basis element is
    /// then multiplied on the right by each generator and adjoint until no new
    /// direction appears. Words in the generators span the generated algebra,
    /// and that span is closed under right multiplication by the generators.
    pub fn generated_by(generators: &[Matrix]) -> Result<Self> {
        let dim = match generators.first() {
            Some(g) => g.dim(),
            None => return Err(Error::InvalidArgument("need at least one generator".into())),
        };
        Self::generated_in(dim, generators)
    }

    /// As [`OperatorAlgebra::generated_by`] with an explicit ambient dimension (empty list gives `C I`).
    pub fn generated_in(dim: usize, generators: &[Matrix]) -> Result<Self> {
        for g in generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
            }
        }
        let mut letters: Vec<Matrix> = Vec::with_capacity(2 * generators.len());
        for g in generators {
            letters.push(g.clone());
            letters.push(g.adjoint());
        }
        let mut span = OrthoSpan::new(dim);
        span.insert(&Matrix::identity(dim));
        for l in &letters {
            span.insert(l);
        }
        let mut next = 0;
        while next < span.len() {
            let b = span.basis[next].clone();
            for l in &letters {
                span.insert(&(&b * l));
            }
            next += 1;
        }
        Ok(OperatorAlgebra { ambient_dim: dim, basis: span.into_basis(), structure: Structure::General })
    }

    /// Generated algebra, declared commutative; fails if two generators do not commute.
    pub fn commutative_generated_by(generators: &[Matrix], tol: Tolerance) -> Result<Self> {
        let mut alg = Self::generated_by(generators)?;
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i..] {
                let norm = a.commutator(b).frobenius_norm();
                let norm_adj = a.commutator(&b.adjoint()).frobenius_norm();
                if norm.max(norm_adj) > tol.eps.max(1e-9) {
                    return Err(Error::NonCommuting { norm: norm.max(norm_adj) });
                }
            }
        }
        alg.structure = Structure::Commutative;
        Ok(alg)
    }

    pub fn scalars(dim: usize) -> Self {
        OperatorAlgebra { ambient_dim: dim, basis: vec![Matrix::identity(dim)], structure: Structure::Commutative }
    }

    /// Operators diagonal in the given orthonormal basis (a maximal Abelian subalgebra).
    pub fn diagonal_in(basis: &crate::weyl::Basis) -> Self {
        let n = basis.n;
        let projections = basis.projections();
        let elements = (0..n)
            .map(|k| {
                projections.iter().enumerate().fold(Matrix::zeros(n), |acc, (i, p)| {
                    acc + p.scale(crate::matrix::phase(2.0 * std::f64::consts::PI * ((i * k) % n) as f64 / n as f64))
                })
            })
            .collect();
        OperatorAlgebra { ambient_dim: n, basis: elements, structure: Structure::Commutative }
    }

    /// `conjugator (C I_outer (x) M_inner) conjugator*`.
    pub fn factor(conjugator: &Matrix, outer: usize, inner: usize, tol: Tolerance) -> Result<Self> {
        let dim = outer * inner;
        if conjugator.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: conjugator.dim() });
        }
        let defect = conjugator.unitarity_defect();
        if defect > tol.eps.max(1e-9) {
            return Err(Error::NotUnitary { defect });
        }
        let local = crate::weyl::weyl_basis(inner);
        let id = Matrix::identity(outer);
        let adj = conjugator.adjoint();
        let basis = local
            .iter()
            .map(|b| conjugator * id.kron(b) * &adj)
            .collect();
        Ok(OperatorAlgebra {
            ambient_dim: dim,
            basis,
            structure: Structure::Factor { conjugator: conjugator.clone(), outer, inner },
        })
    }

    /// `C I_outer (x) M_inner`.
    pub fn local_right(outer: usize, inner: usize) -> Self {
        Self::factor(&Matrix::identity(outer * inner), outer, inner, Tolerance::default())
            .expect("identity is unitary")
    }

    /// `M_left (x) C I_right`.
    pub fn local_left(left: usize, right: usize) -> Self {
        Self::factor(&swap(right, left), right, left, Tolerance::default()).expect("swap is unitary")
    }

    /// The whole of `M_dim`.
    pub fn full(dim: usize) -> Self {
        Self::local_right(1, dim)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// Basis of the traceless part.
    pub fn traceless_basis(&self) -> &[Matrix] {
        &self.basis[1..]
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// `u A u*` for every element; factor conjugators compose.
    pub fn conjugate(&self, u: &Matrix) -> Self {
        let adj = u.adjoint();
        let basis = self.basis.iter().map(|b| u * b * &adj).collect();
        let structure = match &self.structure {
            Structure::Factor { conjugator, outer, inner } => {
                Structure::Factor { conjugator: u * conjugator, outer: *outer, inner: *inner }
            }
            other => other.clone(),
        };
        OperatorAlgebra { ambient_dim: self.ambient_dim, basis, structure }
    }

    /// Declares the algebra commutative after checking that the basis commutes.
    pub fn into_commutative(mut self, tol: Tolerance) -> Result<Self> {
        let norm = self.max_commutator();
        if norm > tol.eps.max(1e-9) {
            return Err(Error::NonCommuting { norm });
        }
        self.structure = Structure::Commutative;
        Ok(self)
    }

    pub fn max_commutator(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                worst = worst.max(a.commutator(b).frobenius_norm());
            }
        }
        worst
    }

    /// Largest norm of the component of `b_i b_j` or `b_i*` outside the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            worst = worst.max((a.adjoint() - self.project(&a.adjoint())).hs_norm());
            for b in &self.basis {
                let p = a * b;
                worst = worst.max((&p - self.project(&p)).hs_norm());
            }
        }
        worst
    }

    fn project(&self, x: &Matrix) -> Matrix {
        self.basis
            .iter()
            .fold(Matrix::zeros(self.ambient_dim), |acc, b| acc + b.scale(hs_inner_unchecked(b, x)))
    }

    pub fn contains(&self, x: &Matrix, tol: Tolerance) -> bool {
        x.dim() == self.ambient_dim && (x - self.project(x)).hs_norm() <= tol.eps * x.hs_norm().max(1.0)
    }

    /// Same linear span.
    pub fn same_span(&self, other: &OperatorAlgebra, tol: Tolerance) -> bool {
        self.dim() == other.dim() && other.basis.iter().all(|b| self.contains(b, tol))
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: dim });
        }
        Ok(())
    }
}

/// Swap `C^a (x) C^b -> C^b (x) C^a`.
pub fn swap(a: usize, b: usize) -> Matrix {
    let mut s = Matrix::zeros(a * b);
    for i in 0..a {
        for j in 0..b {
            s.set(j * a + i, i * b + j, ONE);
        }
    }
    s
}

/// Trace-preserving conditional expectation: the Hilbert-Schmidt orthogonal projection.
pub fn conditional_expectation(alg: &OperatorAlgebra, x: &Matrix) -> Result<Matrix> {
    alg.check_dim(x.dim())?;
    Ok(alg.project(x))
}

/// `max |<a, b>|` over traceless basis elements; zero exactly for quasi-orthogonal algebras.
pub fn quasi_orthogonality_defect(a1: &OperatorAlgebra, a2: &OperatorAlgebra) -> Result<f64> {
    a1.check_dim(a2.ambient_dim)?;
    let mut worst: f64 = 0.0;
    for a in a1.traceless_basis() {
        for b in a2.traceless_basis() {
            worst = worst.max(hs_inner_unchecked(a, b).norm());
        }
    }
    Ok(worst)
}

/// Minimal projections of a commutative algebra (all of them) or a factor (a spanning grid).
///
/// For a factor `W (C I (x) M_m) W*` the grid is `W (I (x) |v><v|) W*` for
/// `v` among `e_i`, `(e_i + e_j)/sqrt 2` and `(e_i + i e_j)/sqrt 2`; these
/// projections linearly span the factor.
pub fn minimal_projections(alg: &OperatorAlgebra) -> Result<Vec<Matrix>> {
    match &alg.structure {
        Structure::Commutative => commutative_projections(alg),
        Structure::Factor { conjugator, outer, inner } => {
            Ok(grid_vectors(*inner).iter().map(|v| factor_projection(conjugator, *outer, v)).collect())
        }
        Structure::General => Err(Error::Unsupported(
            "minimal projections need a commutative or factor algebra".into(),
        )),
    }
}

fn factor_projection(conjugator: &Matrix, outer: usize, v: &[C64]) -> Matrix {
    let local = Matrix::identity(outer).kron(&Matrix::projector(v));
    conjugator * local * conjugator.adjoint()
}

fn grid_vectors(m: usize) -> Vec<Vec<C64>> {
    let unit = |i: usize| (0..m).map(|k| if k == i { ONE } else { ZERO }).collect::<Vec<_>>();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<Vec<C64>> = (0..m).map(unit).collect();
    for i in 0..m {
        for j in (i + 1)..m {
            for c in [ONE, I] {
                let mut v = vec![ZERO; m];
                v[i] = C64::new(s, 0.0);
                v[j] = c * s;
                out.push(v);
            }
        }
    }
    out
}

fn commutative_projections(alg: &OperatorAlgebra) -> Result<Vec<Matrix>> {
    let n = alg.ambient_dim;
    // A generic Hermitian element separates the joint eigenspaces; a commutative
    // algebra has exactly as many minimal projections as its dimension.
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + attempt);
        let mut h = Matrix::zeros(n);
        for b in alg.traceless_basis() {
            let herm = (b + b.adjoint()).scale_re(0.5);
            let anti = (b - b.adjoint()).scale(C64::new(0.0, -0.5));
            h = h + herm.scale_re(rng.random_range(0.5..1.5)) + anti.scale_re(rng.random_range(0.5..1.5));
        }
        let (vals, vecs) = h.eigh();
        let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut projections: Vec<Matrix> = Vec::new();
        let mut last: Option<f64> = None;
        for (val, v) in vals.iter().zip(&vecs) {
            let p = Matrix::projector(v);
            match (last, projections.last_mut()) {
                (Some(prev), Some(acc)) if (val - prev).abs() < 1e-6 * scale => *acc = &*acc + p,
                _ => projections.push(p),
            }
            last = Some(*val);
        }
        if projections.len() == alg.dim() {
            return Ok(projections);
        }
    }
    Err(Error::Unsupported("could not separate the joint spectrum; is the algebra commutative?".into()))
}

/// Whether all minimal projections have the same normalized trace.
pub fn is_homogeneous(alg: &OperatorAlgebra, tol: Tolerance) -> Result<bool> {
    match &alg.structure {
        Structure::Factor { .. } => Ok(true),
        Structure::Commutative => {
            let traces: Vec<f64> = commutative_projections(alg)?.iter().map(|p| p.tau().re).collect();
            let first = traces[0];
            Ok(traces.iter().all(|t| (t - first).abs() <= tol.eps.max(1e-9)))
        }
        Structure::General => Err(Error::Unsupported("homogeneity needs a commutative or factor algebra".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub defect: f64,
}

impl ConditionCheck {
    fn new(defect: f64, tol: Tolerance) -> Self {
        ConditionCheck { holds: defect <= tol.eps, defect }
    }
}

/// The four equivalent complementarity conditions for homogeneous algebras.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplementarityReport {
    /// `tau(PQ) = tau(P) tau(Q)` for minimal projections.
    pub cond_i: Option<ConditionCheck>,
    /// Quasi-orthogonality.
    pub cond_ii: ConditionCheck,
    /// `tau(ab) = tau(a) tau(b)`.
    pub cond_iii: ConditionCheck,
    /// `E_1` restricted to the second algebra is `tau(.) I`.
    pub cond_iv: ConditionCheck,
}

impl ComplementarityReport {
    pub fn all_agree(&self) -> bool {
        let v = self.cond_ii.holds;
        self.cond_iii.holds == v && self.cond_iv.holds == v && self.cond_i.is_none_or(|c| c.holds == v)
    }

    pub fn complementary(&self) -> bool {
        self.cond_ii.holds
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReportConfig {
    /// Extra random minimal projections per factor, on top of the spanning grid.
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerance,
    /// Evaluate condition (i); fails on algebras tagged `general`.
    pub minimal_projections: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { samples: 4, seed: 0, tol: Tolerance::default(), minimal_projections: true }
    }
}

pub fn complementarity_report(
    a1: &OperatorAlgebra,
    a2: &OperatorAlgebra,
    cfg: &ReportConfig,
) -> Result<ComplementarityReport> {
    a1.check_dim(a2.ambient_dim)?;
    let tol = cfg.tol;
    let cond_ii = ConditionCheck::new(quasi_orthogonality_defect(a1, a2)?, tol);

    let mut iii: f64 = 0.0;
    for a in &a1.basis {
        for b in &a2.basis {
            iii = iii.max(((a * b).tau() - a.tau() * b.tau()).norm());
        }
    }

    let mut iv: f64 = 0.0;
    for b in &a2.basis {
        let e = a1.project(b);
        iv = iv.max((e - Matrix::identity(a1.ambient_dim).scale(b.tau())).hs_norm());
    }

    let cond_i = if cfg.minimal_projections {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let p1 = sampled_projections(a1, cfg.samples, &mut rng)?;
        let p2 = sampled_projections(a2, cfg.samples, &mut rng)?;
        let mut worst: f64 = 0.0;
        for p in &p1 {
            for q in &p2 {
                worst = worst.max(((p * q).tau() - p.tau() * q.tau()).norm());
            }
        }
        Some(ConditionCheck::new(worst, tol))
    } else {
        None
    };

    Ok(ComplementarityReport {
        cond_i,
        cond_ii,
        cond_iii: ConditionCheck::new(iii, tol),
        cond_iv: ConditionCheck::new(iv, tol),
    })
}

fn sampled_projections(alg: &OperatorAlgebra, samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Matrix>> {
    let mut out = minimal_projections(alg)?;
    if let Structure::Factor { conjugator, outer, inner } = &alg.structure {
        for _ in 0..samples {
            let v = random_unit_vector(*inner, rng);
            out.push(factor_projection(conjugator, *outer, &v));
        }
    }
    Ok(out)
}

/// Components `E_i(x)` of `x` in a spanning family of pairwise quasi-orthogonal algebras.
///
/// `x = -tau(x)(r-1) I + sum_i E_i(x)`, see [`reconstruct`].
pub fn spanning_decomposition(algebras: &[OperatorAlgebra], x: &Matrix, tol: Tolerance) -> Result<Vec<Matrix>> {
    let dim = x.dim();
    for a in algebras {
        a.check_dim(dim)?;
    }
    for (i, a) in algebras.iter().enumerate() {
        for b in &algebras[i + 1..] {
            let defect = quasi_orthogonality_defect(a, b)?;
            if defect > tol.eps {
                return Err(Error::NotQuasiOrthogonal { defect });
            }
        }
    }
    let mut span = OrthoSpan::new(dim);
    for a in algebras {
        for b in &a.basis {
            span.insert(b);
        }
    }
    if span.len() < dim * dim {
        return Err(Error::SpanDeficiency { achieved: span.len(), required: dim * dim });
    }
    Ok(algebras.iter().map(|a| a.project(x)).collect())
}

/// `-tau(x)(r-1) I + sum_i E_i(x)` for the `r` components of [`spanning_decomposition`].
pub fn reconstruct(tau_x: C64, components: &[Matrix]) -> Matrix {
    let dim = components[0].dim();
    let r = components.len() as f64;
    components
        .iter()
        .fold(Matrix::identity(dim).scale(-tau_x * (r - 1.0)), |acc, c| acc + c)
}

/// Dimension of the intersection of the two spans: `dim A1 + dim A2 - dim(A1 + A2)`.
pub fn intersection_dim(a1: &OperatorAlgebra, a2: &OperatorAlgebra) -> Result<usize> {
    a1.check_dim(a2.ambient_dim)?;
    let mut span = OrthoSpan::new(a1.ambient_dim);
    for b in a1.basis.iter().chain(&a2.basis) {
        span.insert(b);
    }
    Ok(a1.dim() + a2.dim() - span.len())
}

/// Upper bound on the size of a pairwise complementary family of `alg_dim`-dimensional
/// subalgebras of `M_ambient`: `(ambient^2 - 1) / (alg_dim - 1)`.
pub fn family_size_bound(ambient: usize, alg_dim: usize) -> usize {
    assert!(alg_dim >= 2);
    (ambient * ambient - 1) / (alg_dim - 1)
}
