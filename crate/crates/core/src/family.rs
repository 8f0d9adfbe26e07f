//! Search for pairwise complementary families `W_i (C I (x) M_n) W_i*` in `M_{n^2}`.
//!
//! Two members are complementary when `W_j* W_i` is useful. A failed search is
//! an ordinary outcome, reported with the best partial family and the trial count.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::algebra::OperatorAlgebra;
use crate::block::{unitary_defect, weyl_block_unitary};
use crate::cartan::{cartan_n, class_member, triplet_algebra, CartanClass, FOUR_FAMILY_TRIPLETS};
use crate::error::{Error, Result};
use crate::matrix::{pauli, Matrix, Tolerance, C64};
use crate::rng::stream_rng;

/// Consecutive rejections before the greedy search starts over.
pub const RESTART_AFTER: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    PauliTriplet,
    CartanRandom,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::PauliTriplet => "pauli-triplet",
            Strategy::CartanRandom => "cartan-random",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pauli-triplet" => Ok(Strategy::PauliTriplet),
            "cartan-random" => Ok(Strategy::CartanRandom),
            other => Err(Error::InvalidArgument(format!("unknown strategy '{other}'"))),
        }
    }
}

/// Pairwise complementary family.
///
/// `members[0] = I`; the algebras are `frame W_i (C I (x) M_n) W_i* frame*`.
#[derive(Clone, Debug, Serialize)]
pub struct Family {
    pub n: usize,
    pub frame: Matrix,
    pub members: Vec<Matrix>,
    #[serde(skip)]
    pub algebras: Vec<OperatorAlgebra>,
    /// `defects[i][j]` is the usefulness defect of `W_j* W_i`.
    pub defects: Vec<Vec<f64>>,
}

impl Family {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max_defect(&self) -> f64 {
        self.defects
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row[..i].iter().copied())
            .fold(0.0, f64::max)
    }

    fn build(n: usize, frame: Matrix, members: Vec<Matrix>, tol: Tolerance) -> Result<Self> {
        let k = members.len();
        let mut defects = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..i {
                let d = unitary_defect(&(members[j].adjoint() * &members[i]), n, n, tol)?;
                defects[i][j] = d;
                defects[j][i] = d;
            }
        }
        let algebras = members
            .iter()
            .map(|w| OperatorAlgebra::factor(&(&frame * w), n, n, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Family { n, frame, members, algebras, defects })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchFailure {
    pub requested: usize,
    pub best: Family,
    pub trials: u64,
    /// True when the whole candidate space was searched before the budget ran out.
    pub exhausted: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum SearchOutcome {
    Found { family: Family, trials: u64 },
    Failed(SearchFailure),
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    pub fn trials(&self) -> u64 {
        match self {
            SearchOutcome::Found { trials, .. } => *trials,
            SearchOutcome::Failed(f) => f.trials,
        }
    }

    pub fn family(&self) -> &Family {
        match self {
            SearchOutcome::Found { family, .. } => family,
            SearchOutcome::Failed(f) => &f.best,
        }
    }
}

/// Looks for `k` unitaries in `M_{n^2}` with every `W_j* W_i` (i > j) useful.
pub fn family_search(n: usize, k: usize, strategy: Strategy, seed: u64, budget: u64, tol: Tolerance) -> Result<SearchOutcome> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("outer dimension must be at least 2, got {n}")));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("family size must be at least 2, got {k}")));
    }
    match strategy {
        Strategy::PauliTriplet => {
            if n != 2 {
                return Err(Error::Unsupported("pauli-triplet search is defined for dimension 4 only".into()));
            }
            pauli_triplet_search(k, budget, tol)
        }
        Strategy::CartanRandom => greedy_search(n, k, seed, budget, tol),
    }
}

/// Unordered sets of three pairwise anticommuting two-qubit Pauli words.
///
/// The known four-family triples come first, in their listed order.
pub fn anticommuting_triples() -> Vec<[(usize, usize); 3]> {
    let words: Vec<(usize, usize)> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).skip(1).collect();
    let anticommute = |a: (usize, usize), b: (usize, usize)| {
        let clash = |x: usize, y: usize| x != 0 && y != 0 && x != y;
        clash(a.0, b.0) ^ clash(a.1, b.1)
    };
    let product = |a: (usize, usize), b: (usize, usize)| {
        let mul = |x: usize, y: usize| if x == 0 { y } else if y == 0 || x == y { x ^ y } else { 6 - x - y };
        (mul(a.0, b.0), mul(a.1, b.1))
    };
    let mut seen: Vec<[(usize, usize); 3]> = Vec::new();
    let mut out: Vec<[(usize, usize); 3]> = FOUR_FAMILY_TRIPLETS.to_vec();
    for t in &out {
        let mut s = *t;
        s.sort();
        seen.push(s);
    }
    for (ia, &a) in words.iter().enumerate() {
        for &b in &words[ia + 1..] {
            if !anticommute(a, b) {
                continue;
            }
            let c = product(a, b);
            let mut s = [a, b, c];
            s.sort();
            if !seen.contains(&s) {
                seen.push(s);
                out.push([a, b, c]);
            }
        }
    }
    out
}

struct Clique<'a> {
    compat: &'a [Vec<Option<f64>>],
    k: usize,
    budget: u64,
    trials: u64,
    best: Vec<usize>,
    best_defect: f64,
    out_of_budget: bool,
}

impl Clique<'_> {
    fn defect_of(&self, set: &[usize]) -> f64 {
        let mut d: f64 = 0.0;
        for (x, &i) in set.iter().enumerate() {
            for &j in &set[..x] {
                d = d.max(self.compat[i][j].unwrap_or(f64::INFINITY));
            }
        }
        d
    }

    fn record(&mut self, set: &[usize]) {
        let d = self.defect_of(set);
        if set.len() > self.best.len() || (set.len() == self.best.len() && d < self.best_defect) {
            self.best = set.to_vec();
            self.best_defect = d;
        }
    }

    fn extend(&mut self, set: &mut Vec<usize>) -> bool {
        self.record(set);
        if set.len() == self.k {
            return true;
        }
        let start = set.last().map_or(0, |&i| i + 1);
        for cand in start..self.compat.len() {
            if self.trials >= self.budget {
                self.out_of_budget = true;
                return false;
            }
            self.trials += 1;
            if set.iter().all(|&j| self.compat[cand][j].is_some()) {
                set.push(cand);
                if self.extend(set) {
                    return true;
                }
                set.pop();
                if self.out_of_budget {
                    return false;
                }
            }
        }
        false
    }
}

fn pauli_triplet_search(k: usize, budget: u64, tol: Tolerance) -> Result<SearchOutcome> {
    let triples = anticommuting_triples();
    let conjugators = triples
        .iter()
        .map(|t| triplet_algebra(t, tol).map(|(_, w)| w))
        .collect::<Result<Vec<_>>>()?;
    let c = conjugators.len();
    let mut trials = 0u64;
    let mut compat = vec![vec![None; c]; c];
    let mut out_of_budget = false;
    'outer: for i in 0..c {
        for j in 0..i {
            if trials >= budget {
                out_of_budget = true;
                break 'outer;
            }
            trials += 1;
            let d = unitary_defect(&(conjugators[j].adjoint() * &conjugators[i]), 2, 2, tol)?;
            if d <= tol.eps {
                compat[i][j] = Some(d);
                compat[j][i] = Some(d);
            }
        }
    }
    let mut search = Clique { compat: &compat, k, budget, trials, best: Vec::new(), best_defect: f64::INFINITY, out_of_budget };
    let found = !out_of_budget && search.extend(&mut Vec::new());
    let mut chosen = search.best.clone();
    if chosen.is_empty() {
        chosen.push(0);
    }
    let frame = conjugators[chosen[0]].clone();
    let frame_adj = frame.adjoint();
    let members: Vec<Matrix> = chosen.iter().map(|&i| &frame_adj * &conjugators[i]).collect();
    let family = Family::build(2, frame, members, tol)?;
    let trials = search.trials;
    if found {
        Ok(SearchOutcome::Found { family, trials })
    } else {
        Ok(SearchOutcome::Failed(SearchFailure { requested: k, best: family, trials, exhausted: !search.out_of_budget }))
    }
}

/// The 24 single-qubit Clifford unitaries, up to phase.
pub fn clifford_group() -> Vec<Matrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = (pauli(1) + pauli(3)).scale_re(s);
    let phase = Matrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0)]);
    let same = |a: &Matrix, b: &Matrix| (a.adjoint() * b).trace().norm() > 2.0 - 1e-9;
    let mut group = vec![Matrix::identity(2)];
    let mut frontier = 0;
    while frontier < group.len() {
        let g = group[frontier].clone();
        frontier += 1;
        for gen in [&h, &phase] {
            let next = &g * gen;
            if !group.iter().any(|x| same(x, &next)) {
                group.push(next);
            }
        }
    }
    group
}

struct Sampler {
    n: usize,
    clifford: Vec<Matrix>,
}

impl Sampler {
    fn draw<R: Rng>(&self, rng: &mut R, tol: Tolerance) -> Result<Matrix> {
        if self.n == 2 {
            let class = CartanClass::all()[rng.random_range(0..3)];
            let free = rng.random_range(0..8) as f64 * FRAC_PI_4;
            let p = class_member(class, free, rng.random_range(0..4), rng.random_range(0..4));
            let l1 = &self.clifford[rng.random_range(0..self.clifford.len())];
            let l2 = &self.clifford[rng.random_range(0..self.clifford.len())];
            return Ok(l1.kron(l2) * cartan_n(p));
        }
        let n = self.n;
        let root = |k: usize| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % n) as f64 / n as f64);
        let d1: Vec<C64> = (0..n).map(|_| root(rng.random_range(0..n))).collect();
        let d2: Vec<C64> = (0..n).map(|_| root(rng.random_range(0..n))).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let norm = 1.0 / (n as f64).sqrt();
        let c = Matrix::from_fn(n, |r, s| d1[r] * root(r * perm[s]) * d2[perm[s]] * norm);
        Ok(weyl_block_unitary(n, &c, tol)?.w)
    }
}

fn greedy_search(n: usize, k: usize, seed: u64, budget: u64, tol: Tolerance) -> Result<SearchOutcome> {
    let sampler = Sampler { n, clifford: clifford_group() };
    let mut rng = stream_rng(seed, "family-search", n as u64);
    let identity = Matrix::identity(n * n);
    let mut members = vec![identity.clone()];
    let mut best = members.clone();
    let mut best_defect = 0.0f64;
    let mut rejections = 0usize;
    let mut trials = 0u64;
    while members.len() < k && trials < budget {
        trials += 1;
        let cand = sampler.draw(&mut rng, tol)?;
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for w in &members {
            let d = unitary_defect(&(w.adjoint() * &cand), n, n, tol)?;
            worst = worst.max(d);
            if d > tol.eps {
                ok = false;
                break;
            }
        }
        if ok {
            members.push(cand);
            rejections = 0;
            if members.len() > best.len() || (members.len() == best.len() && worst < best_defect) {
                best = members.clone();
                best_defect = worst;
            }
        } else {
            rejections += 1;
            if rejections >= RESTART_AFTER {
                members = vec![identity.clone()];
                rejections = 0;
            }
        }
    }
    let family = Family::build(n, identity, best, tol)?;
    if family.len() >= k {
        Ok(SearchOutcome::Found { family, trials })
    } else {
        Ok(SearchOutcome::Failed(SearchFailure { requested: k, best: family, trials, exhausted: false }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quasi_orthogonality_defect;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn twenty_triples() {
        let t = anticommuting_triples();
        assert_eq!(t.len(), 20);
        assert_eq!(t[..4], FOUR_FAMILY_TRIPLETS[..]);
    }

    #[test]
    fn clifford_has_24_elements() {
        let g = clifford_group();
        assert_eq!(g.len(), 24);
        for u in &g {
            assert!(u.is_unitary(tol()));
        }
    }

    #[test]
    fn pauli_triplet_finds_four() {
        let out = family_search(2, 4, Strategy::PauliTriplet, 0, 100_000, tol()).unwrap();
        assert!(out.is_found());
        let fam = out.family();
        assert_eq!(fam.len(), 4);
        assert!(fam.members[0].approx_eq(&Matrix::identity(4), tol()));
        assert!(fam.max_defect() <= 1e-10);
        for (i, a) in fam.algebras.iter().enumerate() {
            for b in &fam.algebras[..i] {
                assert!(quasi_orthogonality_defect(a, b).unwrap() <= 1e-10);
            }
        }
        let fixed = crate::cartan::four_family_dim4(tol()).unwrap();
        for (a, b) in fam.algebras.iter().zip(&fixed.algebras) {
            assert!(a.same_span(b, Tolerance::new(1e-9).unwrap()));
        }
    }

    #[test]
    fn pauli_triplet_rejects_five() {
        for budget in [10, 1_000, 100_000] {
            let out = family_search(2, 5, Strategy::PauliTriplet, 0, budget, tol()).unwrap();
            assert!(!out.is_found());
            assert!(out.family().len() <= 4);
            assert!(out.trials() <= budget);
        }
        let SearchOutcome::Failed(f) = family_search(2, 5, Strategy::PauliTriplet, 0, 100_000, tol()).unwrap() else {
            panic!()
        };
        assert!(f.exhausted);
        assert_eq!(f.best.len(), 4);
    }

    #[test]
    fn cartan_random_dim4() {
        let out = family_search(2, 3, Strategy::CartanRandom, 1, 100_000, tol()).unwrap();
        assert!(out.is_found());
        assert!(out.family().max_defect() <= 1e-10);
        let out = family_search(2, 5, Strategy::CartanRandom, 1, 2_000, tol()).unwrap();
        assert!(!out.is_found());
        assert_eq!(out.trials(), 2_000);
    }

    #[test]
    fn weyl_probes_dim9() {
        let out = family_search(3, 2, Strategy::CartanRandom, 4, 1_000, tol()).unwrap();
        assert!(out.is_found());
        let fam = out.family();
        assert!(fam.max_defect() <= 1e-10);
        assert!(quasi_orthogonality_defect(&fam.algebras[0], &fam.algebras[1]).unwrap() <= 1e-10);
    }

    #[test]
    fn deterministic_in_seed() {
        let a = family_search(2, 4, Strategy::CartanRandom, 9, 20_000, tol()).unwrap();
        let b = family_search(2, 4, Strategy::CartanRandom, 9, 20_000, tol()).unwrap();
        assert_eq!(a.trials(), b.trials());
        assert_eq!(a.family().members, b.family().members);
    }

    #[test]
    fn bad_arguments() {
        assert!(family_search(1, 2, Strategy::CartanRandom, 0, 10, tol()).is_err());
        assert!(family_search(2, 1, Strategy::CartanRandom, 0, 10, tol()).is_err());
        assert!(family_search(3, 2, Strategy::PauliTriplet, 0, 10, tol()).is_err());
        assert_eq!("pauli-triplet".parse::<Strategy>().unwrap(), Strategy::PauliTriplet);
        assert!("x".parse::<Strategy>().is_err());
    }
}
