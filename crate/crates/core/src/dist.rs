//! Distributions over pairs of graphs.
//!
//! A [`GraphDistribution`] puts weight `w(x,y)` on pairs of graphs drawn over
//! two fixed node lists. Several pairs can share the same co-normal product,
//! so `w` is turned into a density by dividing by the size of that class.

use crate::error::{Error, Result};
use crate::graph::{conormal_product, DistinctionGraph};

const WEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GraphDistribution {
    x_nodes: Vec<String>,
    y_nodes: Vec<String>,
    support: Vec<(DistinctionGraph, DistinctionGraph, f64)>,
    // class id of each support entry, by labeled equality of products
    class_of: Vec<usize>,
    class_size: Vec<usize>,
}

impl GraphDistribution {
    /// Node lists are taken from the first support entry.
    pub fn new(support: Vec<(DistinctionGraph, DistinctionGraph, f64)>) -> Result<Self> {
        let (x0, y0) = match support.first() {
            Some((x, y, _)) => (x.nodes().to_vec(), y.nodes().to_vec()),
            None => return Err(Error::BadDistribution("empty support".into())),
        };
        let mut total = 0.0;
        for (x, y, w) in &support {
            if x.nodes() != x0.as_slice() || y.nodes() != y0.as_slice() {
                return Err(Error::NodeSetMismatch);
            }
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::BadDistribution(format!("invalid weight {w}")));
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::BadDistribution(format!("weights sum to {total}")));
        }
        let products: Vec<DistinctionGraph> = support.iter().map(|(x, y, _)| conormal_product(x, y)).collect();
        let mut class_of = Vec::with_capacity(support.len());
        let mut reps: Vec<usize> = Vec::new();
        let mut class_size: Vec<usize> = Vec::new();
        for (i, p) in products.iter().enumerate() {
            match reps.iter().position(|&r| products[r] == *p) {
                Some(c) => {
                    class_of.push(c);
                    class_size[c] += 1;
                }
                None => {
                    class_of.push(reps.len());
                    reps.push(i);
                    class_size.push(1);
                }
            }
        }
        Ok(GraphDistribution { x_nodes: x0, y_nodes: y0, support, class_of, class_size })
    }

    /// Product distribution `w(x,y) = w₁(x)·w₂(y)`.
    pub fn independent(xs: &[(DistinctionGraph, f64)], ys: &[(DistinctionGraph, f64)]) -> Result<Self> {
        let mut support = Vec::with_capacity(xs.len() * ys.len());
        for (x, wx) in xs {
            for (y, wy) in ys {
                support.push((x.clone(), y.clone(), wx * wy));
            }
        }
        Self::new(support)
    }

    pub fn support(&self) -> &[(DistinctionGraph, DistinctionGraph, f64)] {
        &self.support
    }

    pub fn x_nodes(&self) -> &[String] {
        &self.x_nodes
    }

    pub fn y_nodes(&self) -> &[String] {
        &self.y_nodes
    }

    fn position(&self, x: &DistinctionGraph, y: &DistinctionGraph) -> Result<usize> {
        self.support
            .iter()
            .position(|(sx, sy, _)| sx == x && sy == y)
            .ok_or(Error::NotInSupport)
    }

    /// Number of support pairs with the same co-normal product as `x ⊗ y`,
    /// counting `(x,y)` itself.
    pub fn equivalence_class_size(&self, x: &DistinctionGraph, y: &DistinctionGraph) -> Result<usize> {
        let i = self.position(x, y)?;
        Ok(self.class_size[self.class_of[i]])
    }

    /// `w(x,y) / n(x,y)`.
    pub fn density(&self, x: &DistinctionGraph, y: &DistinctionGraph) -> Result<f64> {
        let i = self.position(x, y)?;
        Ok(self.support[i].2 / self.class_size[self.class_of[i]] as f64)
    }

    fn check(&self, r: &ReferencePair) -> Result<()> {
        let n = match r.side {
            Side::X => self.x_nodes.len(),
            Side::Y => self.y_nodes.len(),
        };
        if r.u == r.v || r.u >= n || r.v >= n {
            return Err(Error::InvalidReferencePair(format!("({}, {}) on {} nodes", r.u, r.v, n)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

/// An ordered node pair on one side of the distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferencePair {
    pub side: Side,
    pub u: usize,
    pub v: usize,
}

impl ReferencePair {
    pub fn x(u: usize, v: usize) -> Self {
        ReferencePair { side: Side::X, u, v }
    }

    pub fn y(u: usize, v: usize) -> Self {
        ReferencePair { side: Side::Y, u, v }
    }

    fn is_dit_in(&self, x: &DistinctionGraph, y: &DistinctionGraph) -> bool {
        match self.side {
            Side::X => x.is_dit(self.u, self.v),
            Side::Y => y.is_dit(self.u, self.v),
        }
    }
}

/// Probability that the reference pair is a dit of its side's graph.
pub fn dist_h(d: &GraphDistribution, r: &ReferencePair) -> Result<f64> {
    d.check(r)?;
    Ok(d.support.iter().filter(|(x, y, _)| r.is_dit_in(x, y)).map(|(_, _, w)| w).sum())
}

/// Probability that `rx` is a dit of `x` and `ry` a dit of `y` simultaneously.
pub fn dist_joint_h(d: &GraphDistribution, rx: &ReferencePair, ry: &ReferencePair) -> Result<f64> {
    if rx.side != Side::X || ry.side != Side::Y {
        return Err(Error::InvalidReferencePair("expected an x-side and a y-side pair".into()));
    }
    d.check(rx)?;
    d.check(ry)?;
    Ok(d
        .support
        .iter()
        .filter(|(x, y, _)| rx.is_dit_in(x, y) && ry.is_dit_in(x, y))
        .map(|(_, _, w)| w)
        .sum())
}

/// `h(x) + h(y) − h(x,y)`.
pub fn dist_mutual(d: &GraphDistribution, rx: &ReferencePair, ry: &ReferencePair) -> Result<f64> {
    let joint = dist_joint_h(d, rx, ry)?;
    Ok(dist_h(d, rx)? + dist_h(d, ry)? - joint)
}

/// Average of `dist_h` over all `N²` ordered pairs of one side, the diagonal
/// included (it is never a dit). Equals the expected graphtropy of that side.
pub fn dist_h_average(d: &GraphDistribution, side: Side) -> f64 {
    let n = match side {
        Side::X => d.x_nodes.len(),
        Side::Y => d.y_nodes.len(),
    };
    if n == 0 {
        return 0.0;
    }
    let dits: f64 = d
        .support
        .iter()
        .map(|(x, y, w)| {
            let g = if side == Side::X { x } else { y };
            w * g.dit_count() as f64
        })
        .sum();
    dits / (n * n) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> DistinctionGraph {
        DistinctionGraph::complete(2)
    }

    fn e2() -> DistinctionGraph {
        DistinctionGraph::edgeless(2)
    }

    #[test]
    fn class_sizes_and_density() {
        let d = GraphDistribution::new(vec![(k2(), k2(), 1.0)]).unwrap();
        assert_eq!(d.equivalence_class_size(&k2(), &k2()).unwrap(), 1);
        assert_eq!(d.density(&k2(), &k2()).unwrap(), 1.0);

        // K2 ⊗ anything is complete, so (K2,K2) and (K2,E2) share a product
        let d = GraphDistribution::new(vec![(k2(), k2(), 0.5), (k2(), e2(), 0.5)]).unwrap();
        assert_eq!(d.equivalence_class_size(&k2(), &e2()).unwrap(), 2);
        assert_eq!(d.density(&k2(), &k2()).unwrap(), 0.25);
        assert_eq!(d.equivalence_class_size(&e2(), &e2()), Err(Error::NotInSupport));

        let d = GraphDistribution::new(vec![(e2(), e2(), 0.5), (k2(), e2(), 0.5), (e2(), k2(), 0.0)]).unwrap();
        assert_eq!(d.equivalence_class_size(&e2(), &e2()).unwrap(), 1);
        assert_eq!(d.density(&e2(), &k2()).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(GraphDistribution::new(vec![]).is_err());
        assert!(GraphDistribution::new(vec![(k2(), k2(), 0.7)]).is_err());
        assert!(GraphDistribution::new(vec![(k2(), k2(), 1.5), (e2(), e2(), -0.5)]).is_err());
        assert_eq!(
            GraphDistribution::new(vec![(k2(), k2(), 0.5), (DistinctionGraph::complete(3), k2(), 0.5)]),
            Err(Error::NodeSetMismatch)
        );
    }

    #[test]
    fn reference_pair_probabilities() {
        let d = GraphDistribution::new(vec![(e2(), e2(), 1.0)]).unwrap();
        assert_eq!(dist_h(&d, &ReferencePair::x(0, 1)).unwrap(), 1.0);
        assert_eq!(dist_h(&d, &ReferencePair::y(1, 0)).unwrap(), 1.0);

        let d = GraphDistribution::new(vec![(k2(), k2(), 1.0)]).unwrap();
        let (rx, ry) = (ReferencePair::x(0, 1), ReferencePair::y(0, 1));
        assert_eq!(dist_h(&d, &rx).unwrap(), 0.0);
        assert_eq!(dist_mutual(&d, &rx, &ry).unwrap(), 0.0);

        assert!(dist_h(&d, &ReferencePair::x(0, 0)).is_err());
        assert!(dist_h(&d, &ReferencePair::x(0, 2)).is_err());
        assert!(dist_joint_h(&d, &ry, &rx).is_err());
    }

    #[test]
    fn average_matches_expected_graphtropy() {
        let d = GraphDistribution::new(vec![(e2(), k2(), 0.25), (k2(), k2(), 0.75)]).unwrap();
        // 0.25 · h(E2) = 0.25 · 1/2
        assert_eq!(dist_h_average(&d, Side::X), 0.125);
        assert_eq!(dist_h_average(&d, Side::Y), 0.0);
    }
}
