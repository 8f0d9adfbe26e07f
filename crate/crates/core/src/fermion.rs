//! Fermionic mode operators in the Jordan-Wigner representation.
//!
//! Subalgebras generated by disjoint sets of modes are complementary, since
//! `tau(ab) = tau(a) tau(b)` whenever `a` and `b` live on disjoint modes.

use serde::Serialize;

use crate::algebra::{quasi_orthogonality_defect, OperatorAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{pauli, tensor_all, Matrix, ONE, ZERO};
use crate::rng::stream_rng;

pub const MAX_MODES: usize = 6;

#[derive(Clone, Debug)]
pub struct FermionSystem {
    pub n_modes: usize,
    /// Annihilation operators, mode `i` at index `i`.
    pub ops: Vec<Matrix>,
}

/// `a_i = sigma_3^{(x) i} (x) [[0, 1], [0, 0]] (x) I^{(x) (n - i - 1)}`, modes counted from 0.
pub fn jordan_wigner(n: usize) -> Result<FermionSystem> {
    if !(1..=MAX_MODES).contains(&n) {
        return Err(Error::InvalidArgument(format!("number of modes must be in 1..={MAX_MODES}, got {n}")));
    }
    let lower = Matrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).expect("2 x 2");
    let ops = (0..n)
        .map(|i| {
            let factors: Vec<Matrix> = (0..n)
                .map(|k| match k.cmp(&i) {
                    std::cmp::Ordering::Less => pauli(3),
                    std::cmp::Ordering::Equal => lower.clone(),
                    std::cmp::Ordering::Greater => Matrix::identity(2),
                })
                .collect();
            tensor_all(&factors)
        })
        .collect();
    Ok(FermionSystem { n_modes: n, ops })
}

impl FermionSystem {
    pub fn dim(&self) -> usize {
        1 << self.n_modes
    }

    /// Largest deviation from `{a_i, a_j} = 0` and `{a_i, a_j*} = delta_ij I`.
    pub fn car_residual(&self) -> f64 {
        let id = Matrix::identity(self.dim());
        let mut worst: f64 = 0.0;
        for (i, a) in self.ops.iter().enumerate() {
            for (j, b) in self.ops.iter().enumerate() {
                worst = worst.max(a.anticommutator(b).max_abs());
                let target = if i == j { id.clone() } else { Matrix::zeros(self.dim()) };
                worst = worst.max((a.anticommutator(&b.adjoint()) - target).max_abs());
            }
        }
        worst
    }

    /// The *-algebra generated by the modes in `modes`.
    pub fn mode_algebra(&self, modes: &[usize]) -> Result<OperatorAlgebra> {
        let gens = modes
            .iter()
            .map(|&i| {
                self.ops
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::Partition(format!("mode {} out of range", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        OperatorAlgebra::generated_in(self.dim(), &gens)
    }

    fn check_partition(&self, j1: &[usize], j2: &[usize]) -> Result<()> {
        if j1.is_empty() || j2.is_empty() {
            return Err(Error::Partition("both parts must be nonempty".into()));
        }
        let mut seen = vec![false; self.n_modes];
        for &i in j1.iter().chain(j2) {
            if i >= self.n_modes {
                return Err(Error::Partition(format!("mode {} out of range 1..={}", i + 1, self.n_modes)));
            }
            if seen[i] {
                return Err(Error::Partition(format!("mode {} appears twice", i + 1)));
            }
            seen[i] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Partition(format!("mode {} is not covered", missing + 1)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CarReport {
    pub n_modes: usize,
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
    pub dim1: usize,
    pub dim2: usize,
    pub car_residual: f64,
    pub defect: f64,
    /// `max |tau(ab) - tau(a) tau(b)|` over random normalized elements.
    pub tau_factorization: f64,
}

/// Quasi-orthogonality defect of the algebras generated by the modes `j1` and `j2` (0-based).
pub fn car_partition_check(sys: &FermionSystem, j1: &[usize], j2: &[usize]) -> Result<f64> {
    sys.check_partition(j1, j2)?;
    quasi_orthogonality_defect(&sys.mode_algebra(j1)?, &sys.mode_algebra(j2)?)
}

fn random_element<R: rand::Rng>(alg: &OperatorAlgebra, rng: &mut R) -> Matrix {
    let mut x = Matrix::zeros(alg.ambient_dim());
    for b in alg.basis() {
        let c = crate::matrix::C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        x = x + b.scale(c);
    }
    let norm = x.hs_norm();
    x.scale_re(1.0 / norm)
}

pub fn car_report(sys: &FermionSystem, j1: &[usize], j2: &[usize], samples: usize, seed: u64) -> Result<CarReport> {
    sys.check_partition(j1, j2)?;
    let a1 = sys.mode_algebra(j1)?;
    let a2 = sys.mode_algebra(j2)?;
    let mut tau_factorization: f64 = 0.0;
    for s in 0..samples {
        let mut rng = stream_rng(seed, "car", s as u64);
        let a = random_element(&a1, &mut rng);
        let b = random_element(&a2, &mut rng);
        tau_factorization = tau_factorization.max(((&a * &b).tau() - a.tau() * b.tau()).norm());
    }
    Ok(CarReport {
        n_modes: sys.n_modes,
        part1: j1.to_vec(),
        part2: j2.to_vec(),
        dim1: a1.dim(),
        dim2: a2.dim(),
        car_residual: sys.car_residual(),
        defect: quasi_orthogonality_defect(&a1, &a2)?,
        tau_factorization,
    })
}

/// The unitary carrying the first-mode algebra onto the second for two modes.
pub fn two_mode_v() -> Matrix {
    Matrix::from_real_rows(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, -1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]])
        .expect("4 x 4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::unitary_defect;
    use crate::matrix::Tolerance;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn two_modes_match_display() {
        let sys = jordan_wigner(2).unwrap();
        let a1 = Matrix::from_real_rows(&[&[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0], &[0.0; 4], &[0.0; 4]]).unwrap();
        let a2 = Matrix::from_real_rows(&[&[0.0, 1.0, 0.0, 0.0], &[0.0; 4], &[0.0, 0.0, 0.0, -1.0], &[0.0; 4]]).unwrap();
        assert_eq!(sys.ops[0], a1);
        assert_eq!(sys.ops[1], a2);
    }

    fn block_form_1(a: f64, b: f64, c: f64, d: f64) -> Matrix {
        Matrix::from_real_rows(&[&[a, 0.0, b, 0.0], &[0.0, a, 0.0, b], &[c, 0.0, d, 0.0], &[0.0, c, 0.0, d]]).unwrap()
    }

    fn block_form_2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
        Matrix::from_real_rows(&[&[a, b, 0.0, 0.0], &[c, d, 0.0, 0.0], &[0.0, 0.0, a, -b], &[0.0, 0.0, -c, d]]).unwrap()
    }

    #[test]
    fn two_mode_algebras_match_block_forms() {
        let sys = jordan_wigner(2).unwrap();
        let a1 = sys.mode_algebra(&[0]).unwrap();
        let a2 = sys.mode_algebra(&[1]).unwrap();
        assert_eq!((a1.dim(), a2.dim()), (4, 4));
        let units = [(1.0, 0.0, 0.0, 0.0), (0.0, 1.0, 0.0, 0.0), (0.0, 0.0, 1.0, 0.0), (0.0, 0.0, 0.0, 1.0)];
        let f1: Vec<Matrix> = units.iter().map(|&(a, b, c, d)| block_form_1(a, b, c, d)).collect();
        let f2: Vec<Matrix> = units.iter().map(|&(a, b, c, d)| block_form_2(a, b, c, d)).collect();
        let t = Tolerance::new(1e-9).unwrap();
        assert!(a1.same_span(&OperatorAlgebra::generated_in(4, &f1).unwrap(), t));
        assert!(a2.same_span(&OperatorAlgebra::generated_in(4, &f2).unwrap(), t));
        assert!(car_partition_check(&sys, &[0], &[1]).unwrap() <= 1e-12);
    }

    #[test]
    fn v_maps_first_algebra_to_second() {
        let sys = jordan_wigner(2).unwrap();
        let a1 = sys.mode_algebra(&[0]).unwrap();
        let a2 = sys.mode_algebra(&[1]).unwrap();
        let v = two_mode_v();
        assert!(v.is_unitary(tol()));
        assert!(a1.conjugate(&v).same_span(&a2, Tolerance::new(1e-9).unwrap()));
        assert!(unitary_defect(&v, 2, 2, tol()).unwrap() <= 1e-12);
    }

    #[test]
    fn car_relations() {
        for n in 1..=5 {
            assert!(jordan_wigner(n).unwrap().car_residual() <= 1e-12);
        }
        assert!(jordan_wigner(0).is_err());
        assert!(jordan_wigner(7).is_err());
    }

    #[test]
    fn partitions_are_complementary() {
        let sys3 = jordan_wigner(3).unwrap();
        assert!(car_partition_check(&sys3, &[0], &[1, 2]).unwrap() <= 1e-10);
        assert!(car_partition_check(&sys3, &[0, 2], &[1]).unwrap() <= 1e-10);
        let sys4 = jordan_wigner(4).unwrap();
        assert!(car_partition_check(&sys4, &[0, 1], &[2, 3]).unwrap() <= 1e-10);
        assert!(car_partition_check(&sys4, &[1], &[0, 2, 3]).unwrap() <= 1e-10);
    }

    #[test]
    fn mode_algebra_dimensions() {
        let sys = jordan_wigner(3).unwrap();
        assert_eq!(sys.mode_algebra(&[1]).unwrap().dim(), 4);
        assert_eq!(sys.mode_algebra(&[0, 2]).unwrap().dim(), 16);
        assert_eq!(sys.mode_algebra(&[0, 1, 2]).unwrap().dim(), 64);
    }

    #[test]
    fn report_and_tau_factorization() {
        let sys = jordan_wigner(3).unwrap();
        let r = car_report(&sys, &[0, 2], &[1], 50, 7).unwrap();
        assert!(r.tau_factorization <= 1e-12);
        assert_eq!((r.dim1, r.dim2), (16, 4));
    }

    #[test]
    fn bad_partitions() {
        let sys = jordan_wigner(3).unwrap();
        assert!(matches!(car_partition_check(&sys, &[0], &[1]), Err(Error::Partition(_))));
        assert!(matches!(car_partition_check(&sys, &[0, 1], &[1, 2]), Err(Error::Partition(_))));
        assert!(matches!(car_partition_check(&sys, &[], &[0, 1, 2]), Err(Error::Partition(_))));
        assert!(matches!(car_partition_check(&sys, &[0, 1], &[3]), Err(Error::Partition(_))));
    }
}
