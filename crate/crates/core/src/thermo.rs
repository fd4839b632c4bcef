//! Thermodynamic analogues on distinction graphs.
//!
//! Microstates of a graph are its automorphisms. With integer node weights,
//! the most likely weighting under a sum constraint is the one preserved by
//! the most automorphisms; on partition graphs with cell-constant weights this
//! agrees with the Gibbs distribution, which [`gibbs_reference`] solves for
//! directly.

use std::collections::BTreeMap;

use crate::automorphism::{self, SearchLimits};
use crate::error::{Error, Result};
use crate::graph::{self, DistinctionGraph, PartitionView};
use crate::weighted::WeightedDistinctionGraph;
use crate::to_f64;

pub use crate::automorphism::automorphisms;

/// `ln(#automorphisms)`.
pub fn microstate_entropy(g: &DistinctionGraph, limits: SearchLimits) -> Result<f64> {
    let count = automorphism::count_labeled_automorphisms(g, &vec![(); g.len()], limits)?;
    Ok((count as f64).ln())
}

/// Closed-form automorphism count of a partition graph, split into the
/// permutations inside cells and the swaps of equal-size cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MicrostateDecomposition {
    /// `Π n_i!`
    pub within_cells: u128,
    /// `Π_s m_s!` where `m_s` is the number of cells of size `s`.
    pub cell_swaps: u128,
}

impl MicrostateDecomposition {
    pub fn total(&self) -> u128 {
        self.within_cells * self.cell_swaps
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn microstate_decomposition(p: &PartitionView) -> MicrostateDecomposition {
    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    let mut within = 1u128;
    for s in p.sizes() {
        within *= factorial(s);
        *by_size.entry(s).or_default() += 1;
    }
    let swaps = by_size.values().map(|&m| factorial(m)).product();
    MicrostateDecomposition { within_cells: within, cell_swaps: swaps }
}

/// Integer weight per node drawn from a finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeWeighting {
    values: Vec<i64>,
}

impl NodeWeighting {
    pub fn new(values: Vec<i64>, alphabet: &[i64]) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !alphabet.contains(v)) {
            return Err(Error::InvalidParameter(format!("weight {v} not in alphabet")));
        }
        Ok(NodeWeighting { values })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }
}

/// Automorphisms of `g` that also map every node to a node of equal weight.
pub fn weight_preserving_automorphisms(
    g: &DistinctionGraph,
    w: &NodeWeighting,
    limits: SearchLimits,
) -> Result<u64> {
    automorphism::count_labeled_automorphisms(g, w.values(), limits)
}

/// Restriction on the graph a weighting is placed on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StructuralConstraint {
    None,
    PartitionGraph,
    /// Every node degree strictly below `m`.
    MaxDegree(usize),
    /// `|h(G) − target| ≤ tolerance`.
    Graphtropy { target: f64, tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightingConstraint {
    pub target_sum: i64,
    pub structural: StructuralConstraint,
}

impl WeightingConstraint {
    pub fn sum(target_sum: i64) -> Self {
        WeightingConstraint { target_sum, structural: StructuralConstraint::None }
    }
}

fn check_structure(g: &DistinctionGraph, c: StructuralConstraint) -> Result<()> {
    match c {
        StructuralConstraint::None => Ok(()),
        StructuralConstraint::PartitionGraph => graph::as_partition(g)
            .map(|_| ())
            .map_err(|e| Error::InfeasibleConstraint(e.to_string())),
        StructuralConstraint::MaxDegree(m) => match (0..g.len()).find(|&u| g.degree(u) >= m) {
            Some(u) => Err(Error::InfeasibleConstraint(format!("node {u} has degree ≥ {m}"))),
            None => Ok(()),
        },
        StructuralConstraint::Graphtropy { target, tolerance } => {
            let h = to_f64(graph::graphtropy(g)?);
            if (h - target).abs() <= tolerance {
                Ok(())
            } else {
                Err(Error::InfeasibleConstraint(format!("graphtropy {h} not within {tolerance} of {target}")))
            }
        }
    }
}

/// Optimal weightings and the automorphism count they share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxLikelihood {
    pub optima: Vec<NodeWeighting>,
    pub automorphisms: u64,
}

/// Exhaustive search for the weightings with the most weight-preserving
/// automorphisms among those summing to the target. Ties are all returned,
/// sorted lexicographically in node order.
pub fn max_likelihood_weighting(
    g: &DistinctionGraph,
    alphabet: &[i64],
    constraint: &WeightingConstraint,
    limits: SearchLimits,
) -> Result<MaxLikelihood> {
    let mut alphabet = alphabet.to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    if alphabet.is_empty() {
        return Err(Error::InvalidParameter("empty alphabet".into()));
    }
    check_structure(g, constraint.structural)?;
    let n = g.len();
    let (lo, hi) = (alphabet[0], alphabet[alphabet.len() - 1]);
    let k = constraint.target_sum;
    if k < lo * n as i64 || k > hi * n as i64 {
        return Err(Error::InfeasibleConstraint(format!("no weighting of {n} nodes sums to {k}")));
    }
    let group = automorphisms(g, limits)?;

    let mut best: Option<(u64, Vec<Vec<i64>>)> = None;
    let mut checks = 0u64;
    let mut current = Vec::with_capacity(n);
    let mut found = false;
    let mut visit = |w: &[i64]| -> Result<()> {
        found = true;
        checks += group.len() as u64;
        if checks > limits.budget {
            return Err(Error::SearchBudgetExceeded { budget: limits.budget });
        }
        let count = group.iter().filter(|p| (0..n).all(|u| w[p[u]] == w[u])).count() as u64;
        match &mut best {
            Some((c, list)) if *c == count => list.push(w.to_vec()),
            Some((c, _)) if *c > count => {}
            _ => best = Some((count, vec![w.to_vec()])),
        }
        Ok(())
    };
    enumerate_sums(&alphabet, n, k, &mut current, &mut visit)?;
    if !found {
        return Err(Error::InfeasibleConstraint(format!("no weighting of {n} nodes sums to {k}")));
    }
    let (count, mut list) = best.expect("found at least one weighting");
    list.sort_unstable();
    Ok(MaxLikelihood {
        optima: list.into_iter().map(|values| NodeWeighting { values }).collect(),
        automorphisms: count,
    })
}

fn enumerate_sums(
    alphabet: &[i64],
    n: usize,
    remaining: i64,
    current: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    let left = (n - current.len()) as i64;
    if left == 0 {
        return if remaining == 0 { visit(current) } else { Ok(()) };
    }
    let (lo, hi) = (alphabet[0], alphabet[alphabet.len() - 1]);
    for &a in alphabet {
        let rest = remaining - a;
        if rest < lo * (left - 1) || rest > hi * (left - 1) {
            continue;
        }
        current.push(a);
        enumerate_sums(alphabet, n, rest, current, visit)?;
        current.pop();
    }
    Ok(())
}

/// Gibbs cell distribution `p_i ∝ |B_i|·exp(−β n_i)` meeting a mean constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsSolution {
    pub beta: f64,
    pub probabilities: Vec<f64>,
    pub mean: f64,
    /// The target sits at the smallest or largest value; β is infinite.
    pub boundary: bool,
}

const GIBBS_TOL: f64 = 1e-10;

fn gibbs_at(sizes: &[f64], values: &[f64], beta: f64) -> (Vec<f64>, f64) {
    let logits: Vec<f64> = sizes.iter().zip(values).map(|(s, v)| s.ln() - beta * v).collect();
    let top = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / z).collect();
    let mean = p.iter().zip(values).map(|(p, v)| p * v).sum();
    (p, mean)
}

/// Solves `Σ n_i p_i(β) = K/N` for β by bisection on the (decreasing) mean.
pub fn gibbs_reference(p: &PartitionView, values: &[i64], k: i64) -> Result<GibbsSolution> {
    let sizes = p.sizes();
    if values.len() != sizes.len() {
        return Err(Error::InvalidParameter(format!("{} values for {} cells", values.len(), sizes.len())));
    }
    let target = k as f64 / p.node_count() as f64;
    let vals: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    let sz: Vec<f64> = sizes.iter().map(|&s| s as f64).collect();
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if target < min - GIBBS_TOL || target > max + GIBBS_TOL {
        return Err(Error::NoFeasibleBeta { target, min, max });
    }
    if max - min <= GIBBS_TOL {
        let (probabilities, mean) = gibbs_at(&sz, &vals, 0.0);
        return Ok(GibbsSolution { beta: 0.0, probabilities, mean, boundary: false });
    }
    let edge = |at: f64, beta: f64| {
        let mass: Vec<f64> = vals.iter().zip(&sz).map(|(v, s)| if *v == at { *s } else { 0.0 }).collect();
        let z: f64 = mass.iter().sum();
        GibbsSolution { beta, probabilities: mass.iter().map(|m| m / z).collect(), mean: at, boundary: true }
    };
    if (target - min).abs() <= GIBBS_TOL {
        return Ok(edge(min, f64::INFINITY));
    }
    if (target - max).abs() <= GIBBS_TOL {
        return Ok(edge(max, f64::NEG_INFINITY));
    }

    let mean_at = |b: f64| gibbs_at(&sz, &vals, b).1;
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while mean_at(lo) < target {
        lo *= 2.0;
    }
    while mean_at(hi) > target {
        hi *= 2.0;
    }
    let mut beta = 0.5 * (lo + hi);
    for _ in 0..500 {
        beta = 0.5 * (lo + hi);
        let m = mean_at(beta);
        if (m - target).abs() <= GIBBS_TOL {
            break;
        }
        if m > target {
            lo = beta;
        } else {
            hi = beta;
        }
    }
    let (probabilities, mean) = gibbs_at(&sz, &vals, beta);
    Ok(GibbsSolution { beta, probabilities, mean, boundary: false })
}

/// Which permutations the automorphism distance averages over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PermutationSet {
    /// Automorphisms of the graph linking pairs with `μ > 0`.
    #[default]
    SupportAutomorphisms,
    /// Every permutation of the nodes.
    Full,
}

/// Bernoulli KL divergence `KL(p ‖ q)` with `0·ln 0 = 0`.
pub fn bernoulli_kl(p: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).ln()
        }
    };
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// Mean over the chosen permutations `s` of the mean per-pair KL divergence
/// between the midpoint distinctness of `G` and that of `s(G)`.
///
/// `s(G)` gives pair `{a,b}` the weight `G` gives `{s⁻¹(a), s⁻¹(b)}`.
pub fn weighted_automorphism_distance(
    wg: &WeightedDistinctionGraph,
    set: PermutationSet,
    limits: SearchLimits,
) -> Result<f64> {
    let n = wg.len();
    if n < 2 {
        return Ok(0.0);
    }
    let base = match set {
        PermutationSet::SupportAutomorphisms => wg.support_graph(),
        PermutationSet::Full => DistinctionGraph::edgeless(n),
    };
    let mu: Vec<Vec<f64>> = (0..n).map(|a| (0..n).map(|b| wg.mu(a, b)).collect()).collect();
    let pairs = (n * (n - 1) / 2) as f64;
    let mut total = 0.0;
    let mut count = 0u64;
    automorphism::for_each_automorphism(&base, &vec![(); n], limits, |s| {
        let inv = automorphism::inverse(s);
        let mut sum = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                sum += bernoulli_kl(mu[a][b], mu[inv[a]][inv[b]]);
            }
        }
        total += sum / pairs;
        count += 1;
    })?;
    Ok(total / count as f64)
}
