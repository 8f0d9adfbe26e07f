//! The commutative algebra of the Bell basis and its complementarity to local algebras.

use serde::Serialize;

use crate::algebra::{conditional_expectation, quasi_orthogonality_defect, OperatorAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{hs_inner_unchecked, pauli2, phase, Matrix, Tolerance, C64};

#[derive(Clone, Debug)]
pub struct BellAlgebra {
    pub algebra: OperatorAlgebra,
    pub p_plus: Matrix,
    pub p_minus: Matrix,
    pub q_plus: Matrix,
    pub q_minus: Matrix,
}

/// `[[a, 0, 0, b], [0, c, d, 0], [0, d, c, 0], [b, 0, 0, a]]`.
pub fn c_form(a: C64, b: C64, c: C64, d: C64) -> Matrix {
    let z = C64::new(0.0, 0.0);
    Matrix::from_rows(&[vec![a, z, z, b], vec![z, c, d, z], vec![z, d, c, z], vec![b, z, z, a]]).expect("4 x 4")
}

/// `kappa(C) = (a + b, a - b, c + d, c - d)` read off the entries of a C-form matrix.
pub fn kappa(x: &Matrix) -> [C64; 4] {
    let (a, b, c, d) = (x.get(0, 0), x.get(0, 3), x.get(1, 1), x.get(1, 2));
    [a + b, a - b, c + d, c - d]
}

pub fn bell_algebra() -> BellAlgebra {
    let (z, h) = (C64::new(0.0, 0.0), C64::new(0.5, 0.0));
    let (p_plus, p_minus) = (c_form(h, h, z, z), c_form(h, -h, z, z));
    let (q_plus, q_minus) = (c_form(z, z, h, h), c_form(z, z, h, -h));
    let gens: Vec<Matrix> = (1..4).map(|k| pauli2(k, k)).collect();
    let algebra = OperatorAlgebra::commutative_generated_by(&gens, Tolerance::default()).expect("Pauli diagonal commutes");
    BellAlgebra { algebra, p_plus, p_minus, q_plus, q_minus }
}

impl BellAlgebra {
    /// `[P+, P-, Q+, Q-]`.
    pub fn projections(&self) -> [&Matrix; 4] {
        [&self.p_plus, &self.p_minus, &self.q_plus, &self.q_minus]
    }

    /// `sum_k values[k] R_k` over the projections in the order of [`Self::projections`].
    pub fn spectral(&self, values: [C64; 4]) -> Matrix {
        self.projections().iter().zip(values).fold(Matrix::zeros(4), |acc, (p, v)| acc + p.scale(v))
    }

    /// The Bell vectors `(|00> +- |11>)/sqrt 2`, `(|01> +- |10>)/sqrt 2`.
    pub fn bell_vectors() -> [Vec<C64>; 4] {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        [vec![s, z, z, s], vec![s, z, z, -s], vec![z, s, s, z], vec![z, s, -s, z]]
    }
}

/// `E_C(sum c_ij sigma_i (x) sigma_j) = sum c_ii sigma_i (x) sigma_i`.
pub fn bell_expectation(x: &Matrix) -> Result<Matrix> {
    if x.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: x.dim() });
    }
    Ok((0..4).fold(Matrix::zeros(4), |acc, k| {
        let s = pauli2(k, k);
        let c = hs_inner_unchecked(&s, x);
        acc + s.scale(c)
    }))
}

/// Unitary `sum_k e^{i phases[k]} R_k` in the Bell algebra.
pub fn bell_unitary(phases: [f64; 4]) -> Matrix {
    bell_algebra().spectral(phases.map(phase))
}

#[derive(Clone, Debug, Serialize)]
pub struct BellReport {
    /// Defect of `M (C I (x) M_2) M*` against the Bell algebra.
    pub defect_right: f64,
    /// Defect of `M (M_2 (x) C I) M*` against the Bell algebra.
    pub defect_left: f64,
    pub membership_residual: f64,
    pub unitarity_defect: f64,
}

impl BellReport {
    pub fn max_defect(&self) -> f64 {
        self.defect_right.max(self.defect_left)
    }
}

/// Complementarity defects of the Bell algebra against the conjugated local algebras.
pub fn bell_complementarity(m: &Matrix, tol: Tolerance) -> Result<BellReport> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: m.dim() });
    }
    let unitarity_defect = m.unitarity_defect();
    if unitarity_defect > tol.eps.max(1e-9) {
        return Err(Error::NotUnitary { defect: unitarity_defect });
    }
    let residual = bell_expectation(m)?.distance(m);
    if residual > tol.eps.max(1e-9) {
        return Err(Error::NotInBellAlgebra { residual });
    }
    let bell = bell_algebra();
    let right = OperatorAlgebra::local_right(2, 2).conjugate(m);
    let left = OperatorAlgebra::local_left(2, 2).conjugate(m);
    Ok(BellReport {
        defect_right: quasi_orthogonality_defect(&right, &bell.algebra)?,
        defect_left: quasi_orthogonality_defect(&left, &bell.algebra)?,
        membership_residual: residual,
        unitarity_defect,
    })
}

/// `quasi_orthogonality_defect(M (C I (x) M_2) M*, C)`.
pub fn bell_complementarity_defect(m: &Matrix, tol: Tolerance) -> Result<f64> {
    Ok(bell_complementarity(m, tol)?.defect_right)
}

/// Checks `E_C` against the generic orthogonal projection onto the Bell algebra.
pub fn expectation_agreement(x: &Matrix) -> Result<f64> {
    let bell = bell_algebra();
    Ok(bell_expectation(x)?.distance(&conditional_expectation(&bell.algebra, x)?))
}
