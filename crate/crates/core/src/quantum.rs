//! Density matrices, purity, and the action-constrained graph search.
//!
//! Quantum logical entropy is `1 − tr(ρ²)`: the chance that two independent
//! measurements in the eigenbasis disagree. For a diagonal ρ built from a
//! partition it is exactly the partition's logical entropy.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::automorphism::{for_each_automorphism, SearchLimits};
use crate::error::{Error, Result};
use crate::graph::{default_ids, DistinctionGraph, PartitionView};
use crate::to_f64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const DENSITY_TOL: f64 = 1e-10;
pub const ORTHONORMAL_TOL: f64 = 1e-8;
const PROB_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidDensityMatrix(msg));
        if !m.is_square() || m.nrows() == 0 {
            return bad(format!("shape {}x{}", m.nrows(), m.ncols()));
        }
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return bad("non-finite entry".into());
        }
        let n = m.nrows();
        for i in 0..n {
            for j in i..n {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > DENSITY_TOL {
                    return bad(format!("not Hermitian at ({i}, {j})"));
                }
            }
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return bad(format!("trace {tr}"));
        }
        if let Some(l) = m.clone().symmetric_eigenvalues().iter().find(|&&l| l < -DENSITY_TOL) {
            return bad(format!("negative eigenvalue {l}"));
        }
        Ok(DensityMatrix { m })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.m.clone().symmetric_eigenvalues().iter().copied().collect()
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::LengthMismatch);
        }
        DensityMatrix::new(u * &self.m * u.adjoint())
    }
}

/// `Σ p_i |φ_i⟩⟨φ_i|`.
pub fn density_from_mixture(states: &[CVector], probs: &[f64]) -> Result<DensityMatrix> {
    if states.is_empty() || states.len() != probs.len() {
        return Err(Error::LengthMismatch);
    }
    if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::BadDistribution("negative or non-finite probability".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::BadDistribution(format!("probabilities sum to {total}")));
    }
    let n = states[0].len();
    if states.iter().any(|s| s.len() != n) {
        return Err(Error::LengthMismatch);
    }
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().skip(i) {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (a.dotc(b) - Complex64::new(expect, 0.0)).norm() > ORTHONORMAL_TOL {
                return Err(Error::NotOrthonormal);
            }
        }
    }
    let mut m = CMatrix::zeros(n, n);
    for (s, &p) in states.iter().zip(probs) {
        m += s * s.adjoint() * Complex64::new(p, 0.0);
    }
    DensityMatrix::new(m)
}

/// `1 − tr(ρ²)`, computed as `1 − Σ |ρ_ij|²`.
pub fn quantum_logical_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - rho.m.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// `1 − Σ λ²` over the eigenvalues; agrees with [`quantum_logical_entropy`].
pub fn spectral_logical_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - rho.eigenvalues().iter().map(|l| l * l).sum::<f64>()
}

/// Diagonal mixture with the cell probabilities, one basis state per cell.
pub fn density_from_partition(p: &PartitionView) -> DensityMatrix {
    let diag = CVector::from_iterator(p.cells().len(), p.probabilities().into_iter().map(|q| Complex64::new(to_f64(q), 0.0)));
    DensityMatrix { m: CMatrix::from_diagonal(&diag) }
}

/// Haar-distributed unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal folded back into `Q`.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Action `a(x)` and amplitude `A(x)` per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionAssignment {
    actions: Vec<Complex64>,
    amplitudes: Vec<Complex64>,
}

impl ActionAssignment {
    /// With `normalized`, the amplitudes must sum to 1.
    pub fn new(actions: Vec<Complex64>, amplitudes: Vec<Complex64>, normalized: bool) -> Result<Self> {
        if actions.len() != amplitudes.len() {
            return Err(Error::LengthMismatch);
        }
        if actions.iter().chain(&amplitudes).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParameter("non-finite action or amplitude".into()));
        }
        if normalized {
            let s: Complex64 = amplitudes.iter().sum();
            if (s - Complex64::new(1.0, 0.0)).norm() > PROB_TOL {
                return Err(Error::BadDistribution(format!("amplitudes sum to {s}")));
            }
        }
        Ok(ActionAssignment { actions, amplitudes })
    }

    /// Uniform amplitudes `1/n`.
    pub fn uniform(actions: Vec<Complex64>) -> Result<Self> {
        let n = actions.len();
        if n == 0 {
            return Err(Error::EmptyList);
        }
        Self::new(actions, vec![Complex64::new(1.0 / n as f64, 0.0); n], true)
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn actions(&self) -> &[Complex64] {
        &self.actions
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `Σ A(x) a(x)`.
    pub fn expected_action(&self) -> Complex64 {
        self.actions.iter().zip(&self.amplitudes).map(|(a, w)| a * w).sum()
    }
}

fn exact_key(z: &Complex64) -> (u64, u64) {
    // +0.0 and -0.0 compare equal, so they share a key
    let canon = |x: f64| if x == 0.0 { 0.0f64.to_bits() } else { x.to_bits() };
    (canon(z.re), canon(z.im))
}

/// Automorphisms `σ` of `g` with `a(σ(x)) = a(x)` for every node. `None`
/// compares actions exactly; `Some(tol)` accepts `|a(σx) − a(x)| ≤ tol`.
pub fn action_preserving_automorphisms(
    g: &DistinctionGraph,
    act: &ActionAssignment,
    tolerance: Option<f64>,
    limits: SearchLimits,
) -> Result<u64> {
    if act.len() != g.len() {
        return Err(Error::LengthMismatch);
    }
    let mut count = 0u64;
    match tolerance {
        None => {
            let keys: Vec<(u64, u64)> = act.actions.iter().map(exact_key).collect();
            for_each_automorphism(g, &keys, limits, |_| count += 1)?;
        }
        Some(tol) => {
            let a = &act.actions;
            for_each_automorphism(g, &vec![(); g.len()], limits, |p| {
                if p.iter().enumerate().all(|(x, &y)| (a[y] - a[x]).norm() <= tol) {
                    count += 1;
                }
            })?;
        }
    }
    Ok(count)
}

/// Largest node count the exhaustive graph search accepts.
pub const QUANGRAPH_MAX_NODES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct QuangraphResult {
    /// Every maximizing graph, ordered by link bitmask over pairs `(u<v)` in
    /// lexicographic order.
    pub graphs: Vec<DistinctionGraph>,
    pub automorphisms: u64,
}

/// Graphs on `n` nodes with the most action-preserving automorphisms, given
/// that the assignment meets `|Σ A a − expected| ≤ tol`.
pub fn quangraph_search(
    act: &ActionAssignment,
    expected: Complex64,
    tol: f64,
    action_tolerance: Option<f64>,
    limits: SearchLimits,
) -> Result<QuangraphResult> {
    let n = act.len();
    if n == 0 {
        return Err(Error::EmptyList);
    }
    if n > QUANGRAPH_MAX_NODES {
        return Err(Error::SearchBudgetExceeded { budget: limits.budget });
    }
    let got = act.expected_action();
    if !((got - expected).norm() <= tol) {
        return Err(Error::InfeasibleConstraint(format!("expected action {got} is not within {tol} of {expected}")));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let ids = default_ids(n);
    let mut best = 0u64;
    let mut graphs = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let links: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
        let g = DistinctionGraph::with_nodes_and_links(&ids, &links)?;
        let c = action_preserving_automorphisms(&g, act, action_tolerance, limits)?;
        if c > best {
            best = c;
            graphs.clear();
        }
        if c == best {
            graphs.push(g);
        }
    }
    Ok(QuangraphResult { graphs, automorphisms: best })
}
