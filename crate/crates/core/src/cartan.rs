//! Two-qubit Cartan parameters and the classification of useful `N` matrices.
//!
//! `N(alpha, beta, gamma) = exp(i alpha s1s1) exp(i beta s2s2) exp(i gamma s3s3)`
//! equals `sum_k c_k sigma_k (x) sigma_k`. `N` is useful exactly when every
//! `|c_k|^2 = 1/4`, which happens when two of the three angles are
//! `pi/4 (mod pi/2)`; the class `N_i` leaves the `i`-th angle free.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{intersection_dim, OperatorAlgebra};
use crate::block::{conjugated_algebra, frame_defect};
use crate::error::{Error, Result};
use crate::matrix::{exp_sigma, hs_inner_unchecked, pauli, pauli2, Matrix, Tolerance, C64, I};

/// Angles within this distance (mod pi/2) of pi/4 count as class angles.
pub const CLASS_ANGLE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl CartanParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        CartanParams { alpha, beta, gamma }
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CartanCoeffs {
    pub c: [C64; 4],
}

impl CartanCoeffs {
    /// `sum_k c_k sigma_k (x) sigma_k`.
    pub fn to_matrix(&self) -> Matrix {
        (0..4).fold(Matrix::zeros(4), |acc, k| acc + pauli2(k, k).scale(self.c[k]))
    }

    pub fn norm_sqr_sum(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max_k | |c_k|^2 - 1/4 |`.
    pub fn quarter_deviation(&self) -> f64 {
        self.c.iter().map(|z| (z.norm_sqr() - 0.25).abs()).fold(0.0, f64::max)
    }
}

pub fn cartan_n(p: CartanParams) -> Matrix {
    exp_sigma(1, p.alpha).expect("k = 1")
        * exp_sigma(2, p.beta).expect("k = 2")
        * exp_sigma(3, p.gamma).expect("k = 3")
}

pub fn cartan_coeffs(p: CartanParams) -> CartanCoeffs {
    let (sa, ca) = p.alpha.sin_cos();
    let (sb, cb) = p.beta.sin_cos();
    let (sg, cg) = p.gamma.sin_cos();
    CartanCoeffs {
        c: [
            C64::new(ca * cb * cg, sa * sb * sg),
            C64::new(ca * sb * sg, sa * cb * cg),
            C64::new(sa * cb * sg, ca * sb * cg),
            C64::new(sa * sb * cg, ca * cb * sg),
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanClass {
    N1,
    N2,
    N3,
}

impl CartanClass {
    /// Index `i` of the free angle, 1-based like the Pauli label it pairs with.
    pub fn index(self) -> usize {
        match self {
            CartanClass::N1 => 1,
            CartanClass::N2 => 2,
            CartanClass::N3 => 3,
        }
    }

    pub fn all() -> [CartanClass; 3] {
        [CartanClass::N1, CartanClass::N2, CartanClass::N3]
    }
}

/// Distance of `x` (mod pi/2) from pi/4.
pub fn quarter_distance(x: f64) -> f64 {
    (x - FRAC_PI_4).rem_euclid(FRAC_PI_2).min(FRAC_PI_2 - (x - FRAC_PI_4).rem_euclid(FRAC_PI_2))
}

fn is_class_angle(x: f64) -> bool {
    quarter_distance(x) < CLASS_ANGLE_TOL
}

/// All classes the parameters belong to (several when all three angles are class angles).
pub fn classes(p: CartanParams) -> Vec<CartanClass> {
    let [a, b, g] = p.angles().map(is_class_angle);
    let mut out = Vec::new();
    if b && g {
        out.push(CartanClass::N1);
    }
    if a && g {
        out.push(CartanClass::N2);
    }
    if a && b {
        out.push(CartanClass::N3);
    }
    out
}

/// First class containing `p`, or `None` outside the useful set.
pub fn classify(p: CartanParams) -> Option<CartanClass> {
    classes(p).first().copied()
}

/// Usefulness defect of `cartan_n(p)` read as a 2 x 2 grid of 2 x 2 blocks.
pub fn cartan_defect(p: CartanParams) -> f64 {
    let n = cartan_n(p);
    let blocks: Vec<Vec<Matrix>> = (0..2).map(|i| (0..2).map(|j| n.block(i, j, 2)).collect()).collect();
    frame_defect(&blocks, 2, 2)
}

/// Expansion of a 4 x 4 matrix in the basis `sigma_i (x) sigma_j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PauliExpansion {
    pub coords: [[C64; 4]; 4],
}

impl PauliExpansion {
    pub fn of(x: &Matrix) -> Self {
        let mut coords = [[C64::new(0.0, 0.0); 4]; 4];
        for (i, row) in coords.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = hs_inner_unchecked(&pauli2(i, j), x);
            }
        }
        PauliExpansion { coords }
    }

    /// The single signed word this expansion reduces to, if any.
    pub fn as_signed_word(&self, tol: Tolerance) -> Option<SignedWord> {
        let mut found = None;
        for i in 0..4 {
            for j in 0..4 {
                let c = self.coords[i][j];
                if c.norm() <= tol.eps.max(1e-9) {
                    continue;
                }
                if found.is_some() {
                    return None;
                }
                let sign = if (c.re - 1.0).abs() <= 1e-9 && c.im.abs() <= 1e-9 {
                    1
                } else if (c.re + 1.0).abs() <= 1e-9 && c.im.abs() <= 1e-9 {
                    -1
                } else {
                    return None;
                };
                found = Some(SignedWord { sign, left: i, right: j });
            }
        }
        found
    }
}

/// `sign * sigma_left (x) sigma_right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignedWord {
    pub sign: i8,
    pub left: usize,
    pub right: usize,
}

impl SignedWord {
    pub fn new(sign: i8, left: usize, right: usize) -> Self {
        SignedWord { sign, left, right }
    }

    pub fn to_matrix(&self) -> Matrix {
        pauli2(self.left, self.right).scale_re(self.sign as f64)
    }
}

impl std::fmt::Display for SignedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{s}s{}s{}", self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PauliTriplet {
    /// Expansions of `w (I (x) sigma_k) w*`, k = 1, 2, 3.
    pub images: Vec<PauliExpansion>,
    /// Set when each image is a single signed Pauli word.
    pub words: Option<[SignedWord; 3]>,
}

pub fn pauli_triplet(w: &Matrix, tol: Tolerance) -> Result<PauliTriplet> {
    if w.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: w.dim() });
    }
    let defect = w.unitarity_defect();
    if defect > tol.eps.max(1e-9) {
        return Err(Error::NotUnitary { defect });
    }
    let adj = w.adjoint();
    let images: Vec<PauliExpansion> =
        (1..=3).map(|k| PauliExpansion::of(&(w * pauli2(0, k) * &adj))).collect();
    let words: Option<Vec<SignedWord>> = images.iter().map(|e| e.as_signed_word(tol)).collect();
    Ok(PauliTriplet { images, words: words.map(|v| [v[0], v[1], v[2]]) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub class: CartanClass,
    /// Sign `s` with `N (I (x) sigma_i) N* = s sigma_i (x) I`.
    pub sign: i8,
    pub residual: f64,
    pub holds: bool,
}

/// Checks `N (I (x) sigma_i) N* = +- sigma_i (x) I` for the class `N_i` of `p`.
pub fn lemma_sign_check(p: CartanParams, tol: Tolerance) -> Result<LemmaCheck> {
    let class = classify(p).ok_or(Error::Unclassified)?;
    let i = class.index();
    let n = cartan_n(p);
    let image = &n * pauli2(0, i) * n.adjoint();
    let target = pauli2(i, 0);
    let sign: i8 = if hs_inner_unchecked(&target, &image).re >= 0.0 { 1 } else { -1 };
    let residual = image.distance(&target.scale_re(sign as f64));
    Ok(LemmaCheck { class, sign, residual, holds: residual <= tol.eps })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionCheck {
    pub class: CartanClass,
    /// `dim(A1 /\ (M_2 (x) C I))`, at least 2 by the theorem.
    pub intersection_dim: usize,
    /// Distance of the witness `L1 sigma_i L1* (x) I` from `A1`.
    pub witness_residual: f64,
}

/// Intersection of `A1 = (L1 (x) L2) N (C I (x) M_2) N* (L1 (x) L2)*` with `M_2 (x) C I`.
pub fn intersection_theorem_check(l1: &Matrix, l2: &Matrix, p: CartanParams, tol: Tolerance) -> Result<IntersectionCheck> {
    for l in [l1, l2] {
        if l.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: l.dim() });
        }
        let defect = l.unitarity_defect();
        if defect > tol.eps.max(1e-9) {
            return Err(Error::NotUnitary { defect });
        }
    }
    let class = classify(p).ok_or(Error::Unclassified)?;
    let w = l1.kron(l2) * cartan_n(p);
    let a1 = conjugated_algebra(&w, 2, 2, tol)?;
    let b = OperatorAlgebra::local_left(2, 2);
    let dim = intersection_dim(&a1, &b)?;
    let i = class.index();
    let witness = (l1 * pauli(i) * l1.adjoint()).kron(&Matrix::identity(2));
    let projected = crate::algebra::conditional_expectation(&a1, &witness)?;
    Ok(IntersectionCheck { class, intersection_dim: dim, witness_residual: witness.distance(&projected) })
}

/// Representative parameters of a class: the free angle plus integer offsets for the fixed ones.
pub fn class_member(class: CartanClass, free: f64, k1: i32, k2: i32) -> CartanParams {
    let fixed = |k: i32| FRAC_PI_4 + k as f64 * FRAC_PI_2;
    match class {
        CartanClass::N1 => CartanParams::new(free, fixed(k1), fixed(k2)),
        CartanClass::N2 => CartanParams::new(fixed(k1), free, fixed(k2)),
        CartanClass::N3 => CartanParams::new(fixed(k1), fixed(k2), free),
    }
}

/// Unitary `W` with `W (I_k (x) sigma_1) W* = a` and `W (I_k (x) sigma_2) W* = b`.
///
/// `a` and `b` must be anticommuting Hermitian unitaries of even dimension `2k`;
/// then `W (I (x) sigma_3) W* = -i a b`.
pub fn pair_conjugator(a: &Matrix, b: &Matrix, tol: Tolerance) -> Result<Matrix> {
    let dim = a.dim();
    if b.dim() != dim || dim % 2 != 0 {
        return Err(Error::DimensionMismatch { expected: dim, found: b.dim() });
    }
    let anti = a.anticommutator(b).frobenius_norm();
    if anti > tol.eps.max(1e-9) {
        return Err(Error::InvalidArgument(format!("operators do not anticommute ({anti:.3e})")));
    }
    let c = (a * b).scale(-I);
    let (vals, vecs) = c.eigh();
    let plus: Vec<&Vec<C64>> = vals.iter().zip(&vecs).filter(|(v, _)| **v > 0.0).map(|(_, u)| u).collect();
    if plus.len() != dim / 2 {
        return Err(Error::InvalidArgument("-i a b does not have a balanced spectrum".into()));
    }
    let mut w = Matrix::zeros(dim);
    for (x, u) in plus.iter().enumerate() {
        let au = a.apply(u);
        for r in 0..dim {
            w.set(r, 2 * x, u[r]);
            w.set(r, 2 * x + 1, au[r]);
        }
    }
    Ok(w)
}

/// Two-qubit Pauli words `(i, j)` spanning (with `I`) a copy of `M_2`, one triple per algebra.
pub const FOUR_FAMILY_TRIPLETS: [[(usize, usize); 3]; 4] = [
    [(0, 1), (1, 3), (1, 2)],
    [(3, 1), (1, 1), (2, 0)],
    [(1, 0), (2, 2), (3, 2)],
    [(0, 2), (2, 3), (2, 1)],
];

/// Words spanning, with `I`, the commutative complement of the four triplet algebras.
pub const FOUR_FAMILY_COMPLEMENT: [(usize, usize); 3] = [(0, 3), (3, 0), (3, 3)];

/// Factor algebra spanned by `I` and a triple of pairwise anticommuting Pauli words.
pub fn triplet_algebra(triple: &[(usize, usize); 3], tol: Tolerance) -> Result<(OperatorAlgebra, Matrix)> {
    let a = pauli2(triple[0].0, triple[0].1);
    let b = pauli2(triple[1].0, triple[1].1);
    let w = pair_conjugator(&a, &b, tol)?;
    let alg = OperatorAlgebra::factor(&w, 2, 2, tol)?;
    let c = pauli2(triple[2].0, triple[2].1);
    if !alg.contains(&c, Tolerance { eps: tol.eps.max(1e-9) }) {
        return Err(Error::InvalidArgument("third word is not in the algebra of the first two".into()));
    }
    Ok((alg, w))
}

#[derive(Clone, Debug)]
pub struct FourFamily {
    pub algebras: Vec<OperatorAlgebra>,
    /// Unitaries carrying `C I (x) M_2` onto each algebra.
    pub conjugators: Vec<Matrix>,
    pub complement: OperatorAlgebra,
}

impl FourFamily {
    /// The four factors followed by the commutative complement.
    pub fn all_algebras(&self) -> Vec<OperatorAlgebra> {
        let mut v = self.algebras.clone();
        v.push(self.complement.clone());
        v
    }
}

/// Four pairwise complementary copies of `M_2` in `M_4` and their commutative complement.
pub fn four_family_dim4(tol: Tolerance) -> Result<FourFamily> {
    let mut algebras = Vec::with_capacity(4);
    let mut conjugators = Vec::with_capacity(4);
    for triple in &FOUR_FAMILY_TRIPLETS {
        let (alg, w) = triplet_algebra(triple, tol)?;
        algebras.push(alg);
        conjugators.push(w);
    }
    let gens: Vec<Matrix> = FOUR_FAMILY_COMPLEMENT.iter().map(|&(i, j)| pauli2(i, j)).collect();
    let complement = OperatorAlgebra::commutative_generated_by(&gens, tol)?;
    Ok(FourFamily { algebras, conjugators, complement })
}

/// Tolerance on `| |c_k|^2 - 1/4 |` when reading usefulness off the coefficients.
pub const COEFF_TOL: f64 = 1e-9;

/// Class membership, the coefficient criterion and the block defect at one point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScanPoint {
    pub params: CartanParams,
    pub in_class: bool,
    pub quarter_coeffs: bool,
    pub useful: bool,
}

impl ScanPoint {
    pub fn evaluate(params: CartanParams, tol: Tolerance) -> Self {
        ScanPoint {
            params,
            in_class: classify(params).is_some(),
            quarter_coeffs: cartan_coeffs(params).quarter_deviation() <= COEFF_TOL,
            useful: cartan_defect(params) <= tol.eps,
        }
    }

    pub fn agrees(&self) -> bool {
        self.in_class == self.quarter_coeffs && self.quarter_coeffs == self.useful
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub grid: usize,
    pub random: usize,
    pub points: usize,
    pub useful_points: usize,
    pub class_counts: [usize; 3],
    pub disagreements: Vec<ScanPoint>,
}

impl ScanReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Three-way agreement on the grid `(j pi / grid)^3`, `j < grid`, and on `random` extra points.
///
/// Half of the random points are drawn uniformly, half from a random class with a
/// uniformly random free angle.
pub fn cartan_scan(grid: usize, random: usize, seed: u64, tol: Tolerance) -> ScanReport {
    let step = std::f64::consts::PI / grid.max(1) as f64;
    let mut params = Vec::with_capacity(grid.pow(3) + random);
    for a in 0..grid {
        for b in 0..grid {
            for g in 0..grid {
                params.push(CartanParams::new(a as f64 * step, b as f64 * step, g as f64 * step));
            }
        }
    }
    for i in 0..random {
        let mut rng = crate::rng::stream_rng(seed, "cartan-scan", i as u64);
        let tau = 2.0 * std::f64::consts::PI;
        if i % 2 == 0 {
            params.push(CartanParams::new(rng.random_range(0.0..tau), rng.random_range(0.0..tau), rng.random_range(0.0..tau)));
        } else {
            let class = CartanClass::all()[rng.random_range(0..3)];
            params.push(class_member(class, rng.random_range(0.0..tau), rng.random_range(-4..4), rng.random_range(-4..4)));
        }
    }
    let mut report = ScanReport { grid, random, points: params.len(), useful_points: 0, class_counts: [0; 3], disagreements: Vec::new() };
    for p in params {
        let pt = ScanPoint::evaluate(p, tol);
        if pt.useful {
            report.useful_points += 1;
        }
        for c in classes(p) {
            report.class_counts[c.index() - 1] += 1;
        }
        if !pt.agrees() {
            report.disagreements.push(pt);
        }
    }
    report
}
