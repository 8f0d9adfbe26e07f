//! Block unitaries `W = sum E_ij (x) W_ij` and the usefulness criterion.
//!
//! `W (C I (x) M_m) W*` is complementary to `C I (x) M_m` exactly when the
//! blocks satisfy `(m/n) sum_ij |W_ij><W_ij| = I` on the operator space `M_m`,
//! where `|W_ij>` is the block vectorized with the plain trace inner product.

use serde::Serialize;

use crate::algebra::OperatorAlgebra;
use crate::error::{Error, Result};
use crate::matrix::{inner_product, pauli, Matrix, Tolerance, C64, I};
use crate::weyl::weyl_system;

#[derive(Clone, Debug)]
pub struct BlockUnitary {
    pub n: usize,
    pub m: usize,
    pub w: Matrix,
    /// `blocks[i][j]` is the `(i, j)` block of size `m`.
    pub blocks: Vec<Vec<Matrix>>,
}

fn check_unitary(w: &Matrix, tol: Tolerance) -> Result<()> {
    let defect = w.unitarity_defect();
    if defect > tol.eps.max(1e-9) {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

/// Cuts `w` (dimension `n m`) into its `n x n` grid of `m x m` blocks.
pub fn split_blocks(w: &Matrix, n: usize, m: usize, tol: Tolerance) -> Result<BlockUnitary> {
    if n == 0 || m == 0 || w.dim() != n * m {
        return Err(Error::DimensionMismatch { expected: n * m, found: w.dim() });
    }
    check_unitary(w, tol)?;
    let blocks = (0..n).map(|i| (0..n).map(|j| w.block(i, j, m)).collect()).collect();
    Ok(BlockUnitary { n, m, w: w.clone(), blocks })
}

/// `sum_ij E_ij (x) blocks[i][j]`.
pub fn assemble(blocks: &[Vec<Matrix>]) -> Result<Matrix> {
    let n = blocks.len();
    let m = blocks.first().and_then(|r| r.first()).map(Matrix::dim).unwrap_or(0);
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("empty block grid".into()));
    }
    let mut w = Matrix::zeros(n * m);
    for (i, row) in blocks.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        for (j, b) in row.iter().enumerate() {
            if b.dim() != m {
                return Err(Error::DimensionMismatch { expected: m, found: b.dim() });
            }
            for r in 0..m {
                for c in 0..m {
                    w.set(i * m + r, j * m + c, b.get(r, c));
                }
            }
        }
    }
    Ok(w)
}

impl BlockUnitary {
    pub fn from_blocks(blocks: Vec<Vec<Matrix>>, tol: Tolerance) -> Result<Self> {
        let w = assemble(&blocks)?;
        let n = blocks.len();
        let m = blocks[0][0].dim();
        check_unitary(&w, tol)?;
        Ok(BlockUnitary { n, m, w, blocks })
    }

    /// `max_j || sum_i W_ij* W_ij - I ||`, zero for every unitary.
    pub fn column_identity_defect(&self) -> f64 {
        (0..self.n)
            .map(|j| {
                let s = (0..self.n).fold(Matrix::zeros(self.m), |acc, i| {
                    acc + self.blocks[i][j].adjoint() * &self.blocks[i][j]
                });
                s.distance(&Matrix::identity(self.m))
            })
            .fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> BlockUnitary {
        let w = self.w.adjoint();
        let blocks = (0..self.n).map(|i| (0..self.n).map(|j| w.block(i, j, self.m)).collect()).collect();
        BlockUnitary { n: self.n, m: self.m, w, blocks }
    }
}

/// `|| (m/n) sum_ij |W_ij><W_ij| - I ||_F` for an arbitrary `n x n` grid of `m x m` blocks.
pub fn frame_defect(blocks: &[Vec<Matrix>], n: usize, m: usize) -> f64 {
    let d = m * m;
    let vecs: Vec<Vec<C64>> = blocks.iter().flatten().map(Matrix::entries).collect();
    let scale = m as f64 / n as f64;
    let mut total = 0.0;
    for r in 0..d {
        for c in 0..d {
            let f: C64 = vecs.iter().map(|v| v[r] * v[c].conj()).sum();
            let target = if r == c { 1.0 } else { 0.0 };
            total += (f * scale - C64::new(target, 0.0)).norm_sqr();
        }
    }
    total.sqrt()
}

pub fn usefulness_defect(bu: &BlockUnitary) -> f64 {
    frame_defect(&bu.blocks, bu.n, bu.m)
}

/// Usefulness defect of a unitary read as an `n x n` grid of `m x m` blocks.
pub fn unitary_defect(w: &Matrix, n: usize, m: usize, tol: Tolerance) -> Result<f64> {
    Ok(usefulness_defect(&split_blocks(w, n, m, tol)?))
}

pub fn is_useful(w: &Matrix, n: usize, m: usize, tol: Tolerance) -> Result<bool> {
    Ok(unitary_defect(w, n, m, tol)? <= tol.eps)
}

/// Gram matrix `Tr(W_ij* W_kl)` of the blocks, in row-major block order.
pub fn block_gram(bu: &BlockUnitary) -> Vec<Vec<C64>> {
    let vecs: Vec<Vec<C64>> = bu.blocks.iter().flatten().map(Matrix::entries).collect();
    vecs.iter().map(|a| vecs.iter().map(|b| inner_product(a, b)).collect()).collect()
}

/// `W (C I_n (x) M_m) W*`, tagged as a factor with conjugator `w`.
pub fn conjugated_algebra(w: &Matrix, n: usize, m: usize, tol: Tolerance) -> Result<OperatorAlgebra> {
    if w.dim() != n * m {
        return Err(Error::DimensionMismatch { expected: n * m, found: w.dim() });
    }
    OperatorAlgebra::factor(w, n, m, tol)
}

/// Block unitary with blocks `W_rs = c_rs X^{r+1} Z^{s+1}` built from clock and shift.
///
/// Exponents run from 1 to `n` (so `X^n = Z^n = I` lands in the last row and
/// column). `c` must be unitary with every `|c_rs|^2 = 1/n`.
pub fn weyl_block_unitary(n: usize, c: &Matrix, tol: Tolerance) -> Result<BlockUnitary> {
    if c.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
    }
    check_unitary(c, tol)?;
    let target = 1.0 / n as f64;
    for r in 0..n {
        for s in 0..n {
            let dev = (c.get(r, s).norm_sqr() - target).abs();
            if dev > tol.eps.max(1e-9) {
                return Err(Error::InvalidArgument(format!(
                    "coefficient ({r},{s}) has |c|^2 = {:.6}, expected 1/{n}",
                    c.get(r, s).norm_sqr()
                )));
            }
        }
    }
    let sys = weyl_system(n)?;
    let blocks = (0..n)
        .map(|r| (0..n).map(|s| (sys.x.pow(r + 1) * sys.z.pow(s + 1)).scale(c.get(r, s))).collect())
        .collect();
    BlockUnitary::from_blocks(blocks, tol)
}

/// Whether usefulness of `w` and of `w*` agree.
pub fn adjoint_closure_check(w: &Matrix, n: usize, m: usize, tol: Tolerance) -> Result<bool> {
    let bu = split_blocks(w, n, m, tol)?;
    let a = usefulness_defect(&bu) <= tol.eps;
    let b = usefulness_defect(&bu.adjoint()) <= tol.eps;
    Ok(a == b)
}

#[derive(Clone, Debug, Serialize)]
pub struct UsefulnessReport {
    pub n: usize,
    pub m: usize,
    pub defect: f64,
    pub adjoint_defect: f64,
    pub useful: bool,
    pub column_identity_defect: f64,
}

pub fn usefulness_report(w: &Matrix, n: usize, m: usize, tol: Tolerance) -> Result<UsefulnessReport> {
    let bu = split_blocks(w, n, m, tol)?;
    let defect = usefulness_defect(&bu);
    Ok(UsefulnessReport {
        n,
        m,
        defect,
        adjoint_defect: usefulness_defect(&bu.adjoint()),
        useful: defect <= tol.eps,
        column_identity_defect: bu.column_identity_defect(),
    })
}

/// `(1/sqrt 2) [[I, sigma_3], [sigma_1, i sigma_2]]`, a useful two-qubit unitary.
pub fn pauli_block_unitary() -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let blocks = vec![
        vec![pauli(0).scale_re(s), pauli(3).scale_re(s)],
        vec![pauli(1).scale_re(s), pauli(2).scale(I * s)],
    ];
    assemble(&blocks).expect("2x2 grid of 2x2 blocks")
}
