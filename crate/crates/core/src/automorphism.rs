//! Automorphism enumeration by backtracking over a refined coloring.
//!
//! Node colors (optionally seeded by node labels such as weights or actions)
//! are refined to a stable coloring; an automorphism can only map a node to a
//! node of the same stable color. The search then extends a partial map one
//! node at a time, checking the link relation against every mapped node.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::DistinctionGraph;

/// Limits for exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest node count accepted.
    pub max_nodes: usize,
    /// Maximum number of candidate checks before giving up.
    pub budget: u64,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 16, budget: DEFAULT_BUDGET }
    }
}

impl SearchLimits {
    pub fn with_budget(budget: u64) -> Self {
        SearchLimits { budget, ..Self::default() }
    }
}

/// Stable coloring reached by repeated neighborhood refinement of `initial`.
///
/// Color ids are assigned by sorting signatures, so the result depends only on
/// the graph and the initial labels, never on node order.
pub fn refine_colors<T: Ord + Clone>(g: &DistinctionGraph, initial: &[T]) -> Vec<usize> {
    let n = g.len();
    let mut colors = canonical_ids(initial);
    let mut classes = distinct(&colors);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|u| {
                let mut nb: Vec<usize> = g.neighbors(u).map(|v| colors[v]).collect();
                nb.sort_unstable();
                (colors[u], nb)
            })
            .collect();
        let next = canonical_ids(&sigs);
        let next_classes = distinct(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn canonical_ids<T: Ord + Clone>(labels: &[T]) -> Vec<usize> {
    let mut sorted: Vec<&T> = labels.iter().collect();
    sorted.sort();
    sorted.dedup();
    let ids: BTreeMap<&T, usize> = sorted.into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    labels.iter().map(|t| ids[t]).collect()
}

fn distinct(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

struct Search<'a, F> {
    g: &'a DistinctionGraph,
    colors: Vec<usize>,
    order: Vec<usize>,
    image: Vec<usize>,
    used: Vec<bool>,
    checks: u64,
    budget: u64,
    visit: F,
}

impl<F: FnMut(&[usize])> Search<'_, F> {
    fn run(&mut self, depth: usize) -> Result<()> {
        if depth == self.order.len() {
            (self.visit)(&self.image);
            return Ok(());
        }
        let u = self.order[depth];
        for cand in 0..self.g.len() {
            if self.used[cand] || self.colors[cand] != self.colors[u] {
                continue;
            }
            self.checks += 1;
            if self.checks > self.budget {
                return Err(Error::SearchBudgetExceeded { budget: self.budget });
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&w| self.g.is_linked(u, w) == self.g.is_linked(cand, self.image[w]));
            if !consistent {
                continue;
            }
            self.image[u] = cand;
            self.used[cand] = true;
            self.run(depth + 1)?;
            self.used[cand] = false;
        }
        Ok(())
    }
}

/// Calls `visit` with every automorphism that also preserves `labels`.
/// `perm[u]` is the image of node `u`.
pub fn for_each_automorphism<T, F>(
    g: &DistinctionGraph,
    labels: &[T],
    limits: SearchLimits,
    visit: F,
) -> Result<()>
where
    T: Ord + Clone,
    F: FnMut(&[usize]),
{
    let n = g.len();
    if n > limits.max_nodes {
        return Err(Error::GraphTooLarge { n, limit: limits.max_nodes });
    }
    if labels.len() != n {
        return Err(Error::InvalidParameter(format!("{} labels for {} nodes", labels.len(), n)));
    }
    let colors = refine_colors(g, labels);
    let mut class_size = vec![0usize; distinct(&colors)];
    for &c in &colors {
        class_size[c] += 1;
    }
    // smallest classes first, then prefer nodes tied to already placed ones
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for _ in 0..n {
        let next = (0..n)
            .filter(|&u| !placed[u])
            .min_by_key(|&u| {
                let tied = order.iter().filter(|&&w| g.is_linked(u, w)).count();
                (class_size[colors[u]], std::cmp::Reverse(tied), u)
            })
            .expect("unplaced node exists");
        placed[next] = true;
        order.push(next);
    }
    let mut search = Search {
        g,
        colors,
        order,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        checks: 0,
        budget: limits.budget,
        visit,
    };
    search.run(0)
}

/// All automorphisms of `g`, sorted lexicographically.
pub fn automorphisms(g: &DistinctionGraph, limits: SearchLimits) -> Result<Vec<Vec<usize>>> {
    labeled_automorphisms(g, &vec![(); g.len()], limits)
}

/// All automorphisms of `g` that preserve `labels`, sorted lexicographically.
pub fn labeled_automorphisms<T: Ord + Clone>(
    g: &DistinctionGraph,
    labels: &[T],
    limits: SearchLimits,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_automorphism(g, labels, limits, |p| out.push(p.to_vec()))?;
    out.sort_unstable();
    Ok(out)
}

pub fn count_labeled_automorphisms<T: Ord + Clone>(
    g: &DistinctionGraph,
    labels: &[T],
    limits: SearchLimits,
) -> Result<u64> {
    let mut count = 0u64;
    for_each_automorphism(g, labels, limits, |_| count += 1)?;
    Ok(count)
}

/// Orbits of the node set under a permutation group, each sorted, ordered by
/// smallest member.
pub fn orbits(n: usize, group: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while root[r] != r {
            r = root[r];
        }
        root[x] = r;
        r
    }
    for p in group {
        for (u, &v) in p.iter().enumerate() {
            let (a, b) = (find(&mut root, u), find(&mut root, v));
            if a != b {
                root[a.max(b)] = a.min(b);
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for u in 0..n {
        let r = find(&mut root, u);
        by_root.entry(r).or_default().push(u);
    }
    by_root.into_values().collect()
}

pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p ∘ q)(u) = p(q(u))
    q.iter().map(|&x| p[x]).collect()
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (u, &v) in p.iter().enumerate() {
        inv[v] = u;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let lim = SearchLimits::default();
        assert_eq!(automorphisms(&DistinctionGraph::edgeless(3), lim).unwrap().len(), 6);
        assert_eq!(automorphisms(&DistinctionGraph::complete(3), lim).unwrap().len(), 6);
        let k2k2 = DistinctionGraph::from_indices(crate::graph::default_ids(4), &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(automorphisms(&k2k2, lim).unwrap().len(), 8);
        assert_eq!(automorphisms(&DistinctionGraph::edgeless(1), lim).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn limits_are_enforced() {
        let big = DistinctionGraph::edgeless(17);
        assert_eq!(
            automorphisms(&big, SearchLimits::default()),
            Err(Error::GraphTooLarge { n: 17, limit: 16 })
        );
        let lim = SearchLimits { max_nodes: 16, budget: 100 };
        assert_eq!(
            automorphisms(&DistinctionGraph::edgeless(8), lim),
            Err(Error::SearchBudgetExceeded { budget: 100 })
        );
    }

    #[test]
    fn refinement_separates_degrees() {
        // path 0-1-2: the middle node is alone in its class
        let p3 = DistinctionGraph::from_indices(crate::graph::default_ids(3), &[(0, 1), (1, 2)]).unwrap();
        let c = refine_colors(&p3, &[(); 3]);
        assert_eq!(c[0], c[2]);
        assert_ne!(c[0], c[1]);
        assert_eq!(orbits(3, &automorphisms(&p3, SearchLimits::default()).unwrap()), vec![vec![0, 2], vec![1]]);
    }
}
