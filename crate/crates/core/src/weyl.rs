//! Clock and shift unitaries and mutually unbiased bases built from them.
//!
//! `X` is the cyclic shift `X e_i = e_{i+1}` and `Z = diag(1, q, ..., q^{n-1})`
//! with `q = e^{2 pi i / n}`, so that `Z X = q X Z`. The displacement operators
//! are `S_{j,k} = sum_m q^{mj} |e_m><e_{m+k}| = Z^j X^{-k}`; they multiply as
//! `S_{j,k} S_{u,v} = q^{ku} S_{j+u,k+v}` and two of them commute exactly when
//! `ku = jv (mod n)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{inner_product, pauli2, phase, phase_angle, Matrix, Tolerance, C64, ONE, ZERO};

/// Index pair `(j, k)` of `S_{j,k}`.
pub type WeylIndex = (usize, usize);

#[derive(Clone, Debug)]
pub struct WeylSystem {
    pub n: usize,
    pub q: C64,
    pub x: Matrix,
    pub z: Matrix,
}

pub fn weyl_system(n: usize) -> Result<WeylSystem> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Weyl system needs n >= 2, got {n}")));
    }
    let q = phase(2.0 * PI / n as f64);
    let x = Matrix::from_fn(n, |i, j| if i == (j + 1) % n { ONE } else { ZERO });
    let z = Matrix::diagonal(&(0..n).map(|i| q_pow(q, n, i)).collect::<Vec<_>>());
    Ok(WeylSystem { n, q, x, z })
}

// q^e computed from the reduced exponent to avoid accumulating rounding.
fn q_pow(_q: C64, n: usize, e: usize) -> C64 {
    phase(2.0 * PI * (e % n) as f64 / n as f64)
}

impl WeylSystem {
    pub fn q_pow(&self, e: usize) -> C64 {
        q_pow(self.q, self.n, e)
    }

    /// `S_{j,k}`; indices are reduced modulo `n`.
    pub fn s(&self, j: usize, k: usize) -> Matrix {
        weyl_s(self, j, k)
    }
}

/// `S_{j,k} = sum_m q^{mj} |e_m><e_{m+k}|`.
pub fn weyl_s(sys: &WeylSystem, j: usize, k: usize) -> Matrix {
    let n = sys.n;
    let (j, k) = (j % n, k % n);
    Matrix::from_fn(n, |r, c| if c == (r + k) % n { sys.q_pow(r * j) } else { ZERO })
}

/// `{S_{j,k}}` in dimension `m`: an orthonormal unitary basis of `M_m` starting with `I`.
pub fn weyl_basis(m: usize) -> Vec<Matrix> {
    if m == 1 {
        return vec![Matrix::identity(1)];
    }
    let sys = weyl_system(m).expect("m >= 2");
    (0..m).flat_map(|j| (0..m).map(move |k| (j, k))).map(|(j, k)| sys.s(j, k)).collect()
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Partition of the `p^2 - 1` nonzero index pairs into `p + 1` punctured lines through the origin.
///
/// Class 0 is the line through `(0, 1)`, class `t + 1` the line through `(1, t)`.
/// Within a class the pairs are the multiples `lambda * direction`, `lambda = 1..p-1`.
pub fn commuting_classes_prime(p: usize) -> Result<Vec<Vec<WeylIndex>>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let directions = std::iter::once((0, 1)).chain((0..p).map(|t| (1, t)));
    Ok(directions
        .map(|(a, b)| (1..p).map(|l| ((l * a) % p, (l * b) % p)).collect())
        .collect())
}

/// Orthonormal basis of `C^n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Basis {
    pub n: usize,
    pub vectors: Vec<Vec<C64>>,
}

impl Basis {
    pub fn new(vectors: Vec<Vec<C64>>, tol: Tolerance) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::InvalidArgument("basis must be nonempty".into()));
        }
        for v in &vectors {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        let basis = Basis { n, vectors };
        let defect = basis.to_matrix().unitarity_defect();
        if defect > tol.eps.max(1e-9) {
            return Err(Error::InvalidArgument(format!(
                "vectors are not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(basis)
    }

    pub fn standard(n: usize) -> Self {
        let vectors = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ONE } else { ZERO }).collect())
            .collect();
        Basis { n, vectors }
    }

    /// `f_k = n^{-1/2} sum_j q^{jk} e_j`.
    pub fn fourier(n: usize) -> Self {
        let s = 1.0 / (n as f64).sqrt();
        let vectors = (0..n)
            .map(|k| (0..n).map(|j| phase(2.0 * PI * ((j * k) % n) as f64 / n as f64) * s).collect())
            .collect();
        Basis { n, vectors }
    }

    /// Columns of a unitary.
    pub fn from_unitary(u: &Matrix, tol: Tolerance) -> Result<Self> {
        Basis::new((0..u.dim()).map(|j| u.column(j)).collect(), tol)
    }

    /// Unitary whose columns are the basis vectors.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.vectors[j][i])
    }

    pub fn projections(&self) -> Vec<Matrix> {
        self.vectors.iter().map(|v| Matrix::projector(v)).collect()
    }
}

/// `max_{j,k} | |<e_j, f_k>|^2 - 1/n |`.
pub fn unbiasedness_deviation(b1: &Basis, b2: &Basis) -> Result<f64> {
    if b1.n != b2.n {
        return Err(Error::DimensionMismatch { expected: b1.n, found: b2.n });
    }
    let target = 1.0 / b1.n as f64;
    let mut worst: f64 = 0.0;
    for e in &b1.vectors {
        for f in &b2.vectors {
            worst = worst.max((inner_product(e, f).norm_sqr() - target).abs());
        }
    }
    Ok(worst)
}

/// Largest pairwise deviation within a list of bases, together with the full matrix.
pub fn deviation_matrix(bases: &[Basis]) -> Result<Vec<Vec<f64>>> {
    let mut out = vec![vec![0.0; bases.len()]; bases.len()];
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            let d = unbiasedness_deviation(&bases[i], &bases[j])?;
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    Ok(out)
}

/// Joint eigenbasis of the operators `S_{j,k}` for the pairs of `class`.
pub fn eigenbasis_of_class(sys: &WeylSystem, class: &[WeylIndex], tol: Tolerance) -> Result<Basis> {
    let ops: Vec<Matrix> = class.iter().map(|&(j, k)| sys.s(j, k)).collect();
    joint_eigenbasis(&ops, tol)
}

/// Joint eigenbasis of pairwise commuting normal matrices.
///
/// The first operator is diagonalized and each degenerate eigenspace is refined
/// with the next operator. Vectors are ordered by the eigenvalue phase angle of
/// the first operator, ties broken by the following operators. Each vector's
/// first non-negligible component is made real and positive.
pub fn joint_eigenbasis(ops: &[Matrix], tol: Tolerance) -> Result<Basis> {
    let n = ops.first().map(Matrix::dim).ok_or_else(|| {
        Error::InvalidArgument("need at least one operator to diagonalize".into())
    })?;
    for (a, op) in ops.iter().enumerate() {
        if op.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: op.dim() });
        }
        for other in &ops[a + 1..] {
            let norm = op.commutator(other).frobenius_norm();
            if norm > tol.eps.max(1e-9) {
                return Err(Error::NonCommuting { norm });
            }
        }
    }
    let start = Subspace { vectors: crate::weyl::Basis::standard(n).vectors, key: Vec::new() };
    let mut spaces = vec![start];
    for op in ops {
        spaces = spaces.into_iter().flat_map(|s| s.split(op)).collect();
    }
    spaces.sort_by(|a, b| {
        a.key
            .iter()
            .zip(&b.key)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut vectors = Vec::with_capacity(n);
    for s in spaces {
        for mut v in s.vectors {
            fix_phase(&mut v);
            vectors.push(v);
        }
    }
    Basis::new(vectors, tol)
}

struct Subspace {
    vectors: Vec<Vec<C64>>,
    key: Vec<f64>,
}

// Offset that separates phases e^{i a} != e^{i b}: eigenvalues of
// (e^{-it} M + e^{it} M*)/2 are cos(a - t), which collide only when a + b = 2t.
const SPLIT_OFFSET: f64 = 0.123_456_789;
const CLUSTER_GAP: f64 = 1e-7;

impl Subspace {
    fn split(self, op: &Matrix) -> Vec<Subspace> {
        let d = self.vectors.len();
        // restriction M = Q* op Q
        let images: Vec<Vec<C64>> = self.vectors.iter().map(|v| op.apply(v)).collect();
        let m = Matrix::from_fn(d, |i, j| inner_product(&self.vectors[i], &images[j]));
        let rot = phase(-SPLIT_OFFSET);
        let h = (m.scale(rot) + m.adjoint().scale(rot.conj())).scale_re(0.5);
        let (vals, vecs) = h.eigh();
        let lift = |c: &Vec<C64>| -> Vec<C64> {
            let mut out = vec![ZERO; self.vectors[0].len()];
            for (coef, q) in c.iter().zip(&self.vectors) {
                for (o, x) in out.iter_mut().zip(q) {
                    *o += coef * x;
                }
            }
            out
        };
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..d {
            match groups.last_mut() {
                Some(g) if (vals[i] - vals[*g.last().unwrap()]).abs() < CLUSTER_GAP => g.push(i),
                _ => groups.push(vec![i]),
            }
        }
        groups
            .into_iter()
            .map(|g| {
                let first = &vecs[g[0]];
                let eigenvalue = m.sandwich(first, first);
                let mut key = self.key.clone();
                let mut angle = phase_angle(eigenvalue);
                if angle > 2.0 * PI - 1e-9 {
                    angle = 0.0;
                }
                key.push(angle);
                Subspace { vectors: g.iter().map(|&i| lift(&vecs[i])).collect(), key }
            })
            .collect()
    }
}

fn fix_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-8) {
        let rot = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= rot);
    }
}

/// Mutually unbiased bases for prime `p`, one per commuting class.
pub fn mub_prime(p: usize, tol: Tolerance) -> Result<Vec<Basis>> {
    let sys = weyl_system(p)?;
    commuting_classes_prime(p)?
        .iter()
        .map(|class| eigenbasis_of_class(&sys, class, tol))
        .collect()
}

/// The five commuting triples of two-qubit Pauli words, as `(i, j)` for `sigma_i (x) sigma_j`.
pub const PAULI_PARTITION_DIM4: [[(usize, usize); 3]; 5] = [
    [(0, 1), (1, 0), (1, 1)],
    [(0, 2), (2, 0), (2, 2)],
    [(0, 3), (3, 0), (3, 3)],
    [(1, 2), (2, 3), (3, 1)],
    [(1, 3), (2, 1), (3, 2)],
];

/// Joint eigenbases of the five commuting Pauli triples in dimension 4.
pub fn pauli_partition_dim4(tol: Tolerance) -> Result<Vec<Basis>> {
    PAULI_PARTITION_DIM4
        .iter()
        .map(|triple| {
            let ops: Vec<Matrix> = triple.iter().map(|&(i, j)| pauli2(i, j)).collect();
            joint_eigenbasis(&ops, tol)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{hs_inner, pauli};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn qubit_case_is_pauli() {
        let sys = weyl_system(2).unwrap();
        assert!(sys.x.approx_eq(&pauli(1), tol()));
        assert!(sys.z.approx_eq(&pauli(3), tol()));
        assert!(weyl_system(1).is_err());
    }

    #[test]
    fn clock_shift_commutation() {
        for n in 2..=7 {
            let sys = weyl_system(n).unwrap();
            assert!(sys.x.pow(n).approx_eq(&Matrix::identity(n), tol()));
            assert!(sys.z.pow(n).approx_eq(&Matrix::identity(n), tol()));
            assert!((&sys.z * &sys.x).approx_eq(&(&sys.x * &sys.z).scale(sys.q), tol()));
            for k in 0..n {
                for l in 0..n {
                    let lhs = sys.z.pow(k) * sys.x.pow(l);
                    let rhs = (sys.x.pow(l) * sys.z.pow(k)).scale(sys.q_pow(k * l));
                    assert!(lhs.approx_eq(&rhs, tol()), "n={n} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn s_is_clock_times_inverse_shift() {
        for n in 2..=5 {
            let sys = weyl_system(n).unwrap();
            for j in 0..n {
                for k in 0..n {
                    let expected = sys.z.pow(j) * sys.x.pow((n - k) % n);
                    assert!(sys.s(j, k).approx_eq(&expected, tol()));
                }
            }
        }
    }

    #[test]
    fn s_product_rule_and_orthogonality() {
        for n in [2, 3, 5] {
            let sys = weyl_system(n).unwrap();
            assert!(sys.s(0, 0).approx_eq(&Matrix::identity(n), tol()));
            for j in 0..n {
                for k in 0..n {
                    let a = sys.s(j, k);
                    if (j, k) != (0, 0) {
                        assert!(a.trace().norm() < 1e-12);
                    }
                    for u in 0..n {
                        for v in 0..n {
                            let b = sys.s(u, v);
                            let prod = sys.s(j + u, k + v).scale(sys.q_pow(k * u));
                            assert!((&a * &b).approx_eq(&prod, tol()));
                            let ip = hs_inner(&a, &b).unwrap();
                            let delta = if (j, k) == (u, v) { 1.0 } else { 0.0 };
                            assert!((ip - C64::new(delta, 0.0)).norm() < 1e-12);
                            let commute = (k * u) % n == (j * v) % n;
                            assert_eq!(a.commutes_with(&b, tol()), commute);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn classes_for_small_primes() {
        assert_eq!(commuting_classes_prime(2).unwrap(), vec![vec![(0, 1)], vec![(1, 0)], vec![(1, 1)]]);
        assert_eq!(commuting_classes_prime(4).unwrap_err(), Error::NotPrime(4));
        assert_eq!(commuting_classes_prime(1).unwrap_err(), Error::NotPrime(1));
    }

    // Independent oracle: enumerate lines through the origin of Z_p^2 by brute force.
    fn lines_by_enumeration(p: usize) -> Vec<std::collections::BTreeSet<WeylIndex>> {
        let mut lines: Vec<std::collections::BTreeSet<WeylIndex>> = Vec::new();
        for a in 0..p {
            for b in 0..p {
                if (a, b) == (0, 0) {
                    continue;
                }
                let line: std::collections::BTreeSet<_> =
                    (1..p).map(|l| ((l * a) % p, (l * b) % p)).collect();
                if !lines.contains(&line) {
                    lines.push(line);
                }
            }
        }
        lines
    }

    #[test]
    fn classes_match_line_enumeration() {
        for p in [3, 5, 7] {
            let classes = commuting_classes_prime(p).unwrap();
            let oracle = lines_by_enumeration(p);
            assert_eq!(classes.len(), p + 1);
            assert_eq!(oracle.len(), p + 1);
            let mut all = std::collections::BTreeSet::new();
            for class in &classes {
                assert_eq!(class.len(), p - 1);
                let set: std::collections::BTreeSet<_> = class.iter().copied().collect();
                assert!(oracle.contains(&set));
                for &(j, k) in class {
                    for &(u, v) in class {
                        assert_eq!((k * u) % p, (j * v) % p);
                    }
                    assert!(all.insert((j, k)), "classes overlap");
                }
            }
            assert_eq!(all.len(), p * p - 1);
        }
    }

    #[test]
    fn qubit_eigenbases() {
        let sys = weyl_system(2).unwrap();
        let z_basis = eigenbasis_of_class(&sys, &[(1, 0)], tol()).unwrap();
        assert!(z_basis.to_matrix().approx_eq(&Matrix::identity(2), tol()));
        let x_basis = eigenbasis_of_class(&sys, &[(0, 1)], tol()).unwrap();
        let s = FRAC_1_SQRT_2;
        let expected = Matrix::from_real_rows(&[&[s, s], &[s, -s]]).unwrap();
        assert!(x_basis.to_matrix().approx_eq(&expected, tol()), "{:?}", x_basis.to_matrix());
    }

    #[test]
    fn eigenbasis_diagonalizes_class_operators() {
        let sys = weyl_system(5).unwrap();
        for class in commuting_classes_prime(5).unwrap() {
            let basis = eigenbasis_of_class(&sys, &class, tol()).unwrap();
            let u = basis.to_matrix();
            for &(j, k) in &class {
                let d = u.adjoint() * sys.s(j, k) * &u;
                let off: f64 = (0..5)
                    .flat_map(|r| (0..5).map(move |c| (r, c)))
                    .filter(|(r, c)| r != c)
                    .map(|(r, c)| d.get(r, c).norm())
                    .fold(0.0, f64::max);
                assert!(off < 1e-10);
            }
        }
    }

    #[test]
    fn eigenbasis_rejects_noncommuting_class() {
        let sys = weyl_system(3).unwrap();
        let err = eigenbasis_of_class(&sys, &[(1, 0), (0, 1)], tol()).unwrap_err();
        assert!(matches!(err, Error::NonCommuting { .. }));
    }

    #[test]
    fn prime_mubs_are_unbiased() {
        for p in [2, 3, 5, 7] {
            let bases = mub_prime(p, tol()).unwrap();
            assert_eq!(bases.len(), p + 1);
            for row in deviation_matrix(&bases).unwrap() {
                for d in row {
                    assert!(d <= 1e-10, "p={p} deviation {d}");
                }
            }
        }
    }

    #[test]
    fn deviation_examples() {
        let std4 = Basis::standard(4);
        assert!((unbiasedness_deviation(&std4, &std4).unwrap() - 0.75).abs() < 1e-15);
        assert!(unbiasedness_deviation(&std4, &Basis::fourier(4)).unwrap() < 1e-15);
        assert!(unbiasedness_deviation(&std4, &Basis::standard(3)).is_err());
    }

    #[test]
    fn dim4_pauli_partition() {
        for triple in PAULI_PARTITION_DIM4 {
            for &(a, b) in &triple {
                for &(c, d) in &triple {
                    assert!(pauli2(a, b).commutes_with(&pauli2(c, d), tol()));
                }
            }
        }
        let bases = pauli_partition_dim4(tol()).unwrap();
        assert_eq!(bases.len(), 5);
        for (i, row) in deviation_matrix(&bases).unwrap().iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                if i != j {
                    assert!(*d <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn eigenbasis_is_reproducible() {
        let a = mub_prime(7, tol()).unwrap();
        let b = mub_prime(7, tol()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.vectors, y.vectors);
        }
    }
}
