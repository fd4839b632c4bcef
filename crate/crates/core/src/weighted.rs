//! Interval-weighted distinction graphs.
//!
//! Each unordered pair carries an interval `d(u,v)` bounding the probability
//! that the observer distinguishes `u` from `v`. This is the complement of the
//! unweighted convention: a crisp link corresponds to `d = [0,0]`, a crisp dit
//! to `d = [1,1]`. Pairs not listed default to `[1,1]`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::DistinctionGraph;

/// Probability interval `[lo, hi]` with `0 ≤ lo ≤ hi ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalWeight {
    lo: f64,
    hi: f64,
}

impl IntervalWeight {
    pub const ZERO: IntervalWeight = IntervalWeight { lo: 0.0, hi: 0.0 };
    pub const ONE: IntervalWeight = IntervalWeight { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        // written so that NaN fails
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(IntervalWeight { lo, hi })
    }

    pub fn point(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Strict containment: `self.lo > other.lo` and `self.hi < other.hi`.
    pub fn strictly_within(&self, other: &IntervalWeight) -> bool {
        self.lo > other.lo && self.hi < other.hi
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }
}

/// A weighted dit `(u, v, w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedDit {
    pub u: usize,
    pub v: usize,
    pub w: IntervalWeight,
}

/// True when `e1`'s interval is strictly inside `e2`'s.
pub fn edge_refines(e1: &WeightedDit, e2: &WeightedDit) -> Result<bool> {
    let same = (e1.u, e1.v) == (e2.u, e2.v) || (e1.u, e1.v) == (e2.v, e2.u);
    if !same {
        return Err(Error::PairMismatch);
    }
    Ok(e1.w.strictly_within(&e2.w))
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDistinctionGraph {
    nodes: Vec<String>,
    node_weights: Option<Vec<i64>>,
    distinctness: BTreeMap<(usize, usize), IntervalWeight>,
}

impl WeightedDistinctionGraph {
    /// Graph on `nodes` with every pair fully distinct.
    pub fn new(nodes: Vec<String>, node_weights: Option<Vec<i64>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for id in &nodes {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateNode(id.clone()));
            }
        }
        if let Some(w) = &node_weights {
            if w.len() != nodes.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} node weights for {} nodes",
                    w.len(),
                    nodes.len()
                )));
            }
        }
        Ok(WeightedDistinctionGraph { nodes, node_weights, distinctness: BTreeMap::new() })
    }

    /// Crisp conversion: links become `[0,0]`, everything else stays `[1,1]`.
    pub fn from_graph(g: &DistinctionGraph) -> Self {
        let mut wg = WeightedDistinctionGraph {
            nodes: g.nodes().to_vec(),
            node_weights: None,
            distinctness: BTreeMap::new(),
        };
        for (u, v) in g.links() {
            wg.distinctness.insert((u, v), IntervalWeight::ZERO);
        }
        wg
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == id)
    }

    pub fn node_weights(&self) -> Option<&[i64]> {
        self.node_weights.as_deref()
    }

    pub fn set_node_weights(&mut self, weights: Vec<i64>) -> Result<()> {
        if weights.len() != self.len() {
            return Err(Error::InvalidParameter("node weight count".into()));
        }
        self.node_weights = Some(weights);
        Ok(())
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u == v || u >= self.len() || v >= self.len() {
            return Err(Error::InvalidPair(u, v));
        }
        Ok(())
    }

    pub fn set_distinctness(&mut self, u: usize, v: usize, d: IntervalWeight) -> Result<()> {
        self.check_pair(u, v)?;
        self.distinctness.insert(key(u, v), d);
        Ok(())
    }

    /// `d(u,v)`; `[0,0]` on the diagonal, `[1,1]` for unlisted pairs.
    pub fn distinctness(&self, u: usize, v: usize) -> IntervalWeight {
        if u == v {
            return IntervalWeight::ZERO;
        }
        self.distinctness.get(&key(u, v)).copied().unwrap_or(IntervalWeight::ONE)
    }

    /// Midpoint distinctness `μ_uv`.
    pub fn mu(&self, u: usize, v: usize) -> f64 {
        self.distinctness(u, v).midpoint()
    }

    /// Explicitly stored pairs, `u < v`.
    pub fn stored_pairs(&self) -> impl Iterator<Item = ((usize, usize), IntervalWeight)> + '_ {
        self.distinctness.iter().map(|(k, w)| (*k, *w))
    }

    /// Crisp graph linking the pairs with `d = [0,0]`, if every pair is crisp.
    pub fn to_graph(&self) -> Option<DistinctionGraph> {
        let mut links = Vec::new();
        for (&(u, v), w) in &self.distinctness {
            if *w == IntervalWeight::ZERO {
                links.push((u, v));
            } else if *w != IntervalWeight::ONE {
                return None;
            }
        }
        DistinctionGraph::with_nodes_and_links(&self.nodes, &links).ok()
    }

    /// Graph linking every pair with `μ > 0`.
    pub fn support_graph(&self) -> DistinctionGraph {
        let n = self.len();
        let mut g = DistinctionGraph::with_nodes_and_links(&self.nodes, &[]).expect("nodes validated");
        for u in 0..n {
            for v in u + 1..n {
                if self.mu(u, v) > 0.0 {
                    g.link(u, v);
                }
            }
        }
        g
    }
}

/// Mean ordered-pair distinctness over `N²` (diagonal contributes 0), per endpoint.
pub fn weighted_graphtropy(wg: &WeightedDistinctionGraph) -> Result<IntervalWeight> {
    let n = wg.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let (mut lo, mut hi) = (0.0, 0.0);
    for u in 0..n {
        for v in u + 1..n {
            let d = wg.distinctness(u, v);
            lo += d.lo;
            hi += d.hi;
        }
    }
    let norm = (n * n) as f64;
    Ok(IntervalWeight { lo: 2.0 * lo / norm, hi: 2.0 * hi / norm })
}

/// Tolerances of an ε-automorphism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonParams {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
}

impl EpsilonParams {
    pub fn new(eps1: f64, eps2: f64, eps3: f64) -> Result<Self> {
        if [eps1, eps2, eps3].iter().any(|e| !(*e >= 0.0)) {
            return Err(Error::InvalidParameter("epsilons must be nonnegative".into()));
        }
        Ok(EpsilonParams { eps1, eps2, eps3 })
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation);
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation);
        }
    }
    Ok(())
}

/// Checks the three ε-automorphism inequalities for every node and node pair:
///
/// - `|w_a − w_Φ(a)| < ε₁`
/// - `1 − ε₂ < μ_ab / μ_Φ(a)Φ(b) < 1 + ε₂`
/// - `μ_ab · μ_Φ(a)Φ(b) · (|w_a − w_Φ(a)| + |w_b − w_Φ(b)|) < ε₃`
///
/// A ratio with both means zero counts as 1. A zero image mean under a
/// nonzero source mean is reported as [`Error::DivisionByZeroMu`].
pub fn epsilon_automorphism_check(
    wg: &WeightedDistinctionGraph,
    perm: &[usize],
    eps: &EpsilonParams,
) -> Result<bool> {
    let n = wg.len();
    check_permutation(perm, n)?;
    let w = wg.node_weights().ok_or(Error::MissingNodeWeights)?;
    let shift = |a: usize| (w[a] - w[perm[a]]).abs() as f64;

    if (0..n).any(|a| !(shift(a) < eps.eps1)) {
        return Ok(false);
    }
    let mut holds = true;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let mu = wg.mu(a, b);
            let mu_img = wg.mu(perm[a], perm[b]);
            let ratio = if mu_img == 0.0 {
                if mu != 0.0 {
                    return Err(Error::DivisionByZeroMu(perm[a], perm[b]));
                }
                1.0
            } else {
                mu / mu_img
            };
            if !(1.0 - eps.eps2 < ratio && ratio < 1.0 + eps.eps2) {
                holds = false;
            }
            if !(mu * mu_img * (shift(a) + shift(b)) < eps.eps3) {
                holds = false;
            }
        }
    }
    Ok(holds)
}
