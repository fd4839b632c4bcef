//! Distinction graphs and graphtropy.
//!
//! A link between two nodes means the observer cannot tell them apart. Every
//! ordered pair of distinct, unlinked nodes is a *dit*; graphtropy is the dit
//! count over `N²`. A node is never a dit with itself.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::Rational;

/// Square symmetric bit matrix backing the link relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    #[inline]
    fn get(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize, on: bool) {
        let w = &mut self.bits[u * self.words + v / 64];
        if on {
            *w |= 1 << (v % 64);
        } else {
            *w &= !(1 << (v % 64));
        }
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    fn ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// An ordered pair of nodes the observer can distinguish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DitPair {
    pub u: usize,
    pub v: usize,
}

/// Node-ordered undirected graph whose links mean "indistinguishable".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistinctionGraph {
    nodes: Vec<String>,
    adj: BitMatrix,
}

impl DistinctionGraph {
    /// Builds a graph from identifiers and links given by identifier.
    ///
    /// Links are deduplicated and symmetric: `(a,b)` and `(b,a)` are the same link.
    pub fn new<S, I, L, A, B>(nodes: I, links: L) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = S>,
        L: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, id) in nodes.iter().enumerate() {
            if index.insert(id.as_str(), i).is_some() {
                return Err(Error::DuplicateNode(id.clone()));
            }
        }
        let mut pairs = Vec::new();
        for (a, b) in links {
            let (a, b) = (a.as_ref(), b.as_ref());
            let u = *index.get(a).ok_or_else(|| Error::UnknownNode(a.to_string()))?;
            let v = *index.get(b).ok_or_else(|| Error::UnknownNode(b.to_string()))?;
            if u == v {
                return Err(Error::SelfLink(a.to_string()));
            }
            pairs.push((u, v));
        }
        let mut g = DistinctionGraph { adj: BitMatrix::new(nodes.len()), nodes };
        for (u, v) in pairs {
            g.link(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from identifiers and links given by node index.
    pub fn from_indices<S, I>(nodes: I, links: &[(usize, usize)]) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = S>,
    {
        let g = Self::new(nodes, std::iter::empty::<(&str, &str)>())?;
        g.with_links(links)
    }

    fn with_links(mut self, links: &[(usize, usize)]) -> Result<Self> {
        let n = self.len();
        for &(u, v) in links {
            for i in [u, v] {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
            }
            if u == v {
                return Err(Error::SelfLink(self.nodes[u].clone()));
            }
            self.link(u, v);
        }
        Ok(self)
    }

    /// Graph with no links on nodes named `0..n`.
    pub fn edgeless(n: usize) -> Self {
        Self::new(default_ids(n), std::iter::empty::<(&str, &str)>()).expect("default ids are unique")
    }

    /// Complete graph on nodes named `0..n`.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::edgeless(n);
        for u in 0..n {
            for v in u + 1..n {
                g.link(u, v);
            }
        }
        g
    }

    /// Partition graph linking exactly the nodes that share a label.
    pub fn from_labels<T: Ord>(nodes: Vec<String>, labels: &[T]) -> Result<Self> {
        if nodes.len() != labels.len() {
            return Err(Error::InvalidParameter(format!("{} labels for {} nodes", labels.len(), nodes.len())));
        }
        let mut g = Self::new(nodes, std::iter::empty::<(&str, &str)>())?;
        let mut groups: std::collections::BTreeMap<&T, Vec<usize>> = std::collections::BTreeMap::new();
        for (u, l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(u);
        }
        let words = g.adj.words;
        for members in groups.values() {
            let mut mask = vec![0u64; words];
            for &u in members {
                mask[u / 64] |= 1 << (u % 64);
            }
            for &u in members {
                let row = &mut g.adj.bits[u * words..(u + 1) * words];
                row.copy_from_slice(&mask);
                row[u / 64] &= !(1 << (u % 64));
            }
        }
        Ok(g)
    }

    /// Edgeless graph on the given nodes plus the given index links.
    pub fn with_nodes_and_links(nodes: &[String], links: &[(usize, usize)]) -> Result<Self> {
        Self::from_indices(nodes.iter().cloned(), links)
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

    /// True when `u` and `v` are linked. A node is never linked to itself.
    #[inline]
    pub fn is_linked(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    /// True when `u` and `v` are linked or equal.
    #[inline]
    pub fn linked_or_equal(&self, u: usize, v: usize) -> bool {
        u == v || self.adj.get(u, v)
    }

    /// True when the ordered pair `(u,v)` is a dit.
    #[inline]
    pub fn is_dit(&self, u: usize, v: usize) -> bool {
        !self.linked_or_equal(u, v)
    }

    /// Adds the link `{u,v}`. Panics on out-of-range indices or `u == v`.
    pub fn link(&mut self, u: usize, v: usize) {
        assert!(u != v, "self links are not stored");
        self.adj.set(u, v, true);
        self.adj.set(v, u, true);
    }

    /// Removes the link `{u,v}` if present.
    pub fn unlink(&mut self, u: usize, v: usize) {
        self.adj.set(u, v, false);
        self.adj.set(v, u, false);
    }

    pub fn set_link(&mut self, u: usize, v: usize, on: bool) {
        if on {
            self.link(u, v)
        } else {
            self.unlink(u, v)
        }
    }

    pub fn link_count(&self) -> usize {
        self.adj.ones() / 2
    }

    /// Links as index pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn links(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::with_capacity(self.link_count());
        for u in 0..n {
            for v in u + 1..n {
                if self.is_linked(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.is_linked(u, v))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of ordered dits, `N² − N − 2·|links|`.
    pub fn dit_count(&self) -> usize {
        let n = self.len();
        n * n - n - 2 * self.link_count()
    }

    pub fn dit_set(&self) -> BTreeSet<DitPair> {
        let n = self.len();
        let mut out = BTreeSet::new();
        for u in 0..n {
            for v in 0..n {
                if self.is_dit(u, v) {
                    out.insert(DitPair { u, v });
                }
            }
        }
        out
    }

    /// Same ordered node list.
    pub fn same_nodes(&self, other: &DistinctionGraph) -> bool {
        self.nodes == other.nodes
    }

    /// Copy of this graph with its link set intersected with `other`'s.
    pub fn intersect_links(&self, other: &DistinctionGraph) -> Result<DistinctionGraph> {
        if !self.same_nodes(other) {
            return Err(Error::NodeSetMismatch);
        }
        let mut g = self.clone();
        for (w, o) in g.adj.bits.iter_mut().zip(&other.adj.bits) {
            *w &= *o;
        }
        Ok(g)
    }

    /// Number of ordered pairs that are dits of both graphs.
    fn shared_dit_count(&self, other: &DistinctionGraph) -> usize {
        // dit(G) ∩ dit(H) = off-diagonal pairs linked in neither graph
        let n = self.len();
        let either = self
            .adj
            .bits
            .iter()
            .zip(&other.adj.bits)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum::<usize>();
        n * n - n - either
    }
}

/// Identifiers `"0"`, `"1"`, ... used by the convenience constructors.
pub fn default_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn ratio(num: usize, den: usize) -> Rational {
    Rational::new(num as i64, den as i64)
}

/// `|dit(G)| / N²`.
pub fn graphtropy(g: &DistinctionGraph) -> Result<Rational> {
    let n = g.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(ratio(g.dit_count(), n * n))
}

/// Probability that a dit of `h` is also a dit of `g`.
pub fn conditional_graphtropy(g: &DistinctionGraph, h: &DistinctionGraph) -> Result<Rational> {
    if !g.same_nodes(h) {
        return Err(Error::NodeSetMismatch);
    }
    let given = h.dit_count();
    if given == 0 {
        return Err(Error::UndefinedConditional);
    }
    Ok(ratio(g.shared_dit_count(h), given))
}

/// `|dit(G) ∩ dit(H)| / N²`.
pub fn mutual_graphtropy(g: &DistinctionGraph, h: &DistinctionGraph) -> Result<Rational> {
    if !g.same_nodes(h) {
        return Err(Error::NodeSetMismatch);
    }
    let n = g.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(ratio(g.shared_dit_count(h), n * n))
}

fn escape_id(id: &str) -> String {
    let mut out = String::with_capacity(id.len());
    for c in id.chars() {
        if matches!(c, '\\' | ',' | '(' | ')') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// Co-normal product: `(g,h) ~ (g',h')` iff `g ≃ g'` or `h ≃ h'`, where `≃`
/// is "linked or equal". Its dit set is exactly `dit(G) × dit(H)`.
///
/// Node `(i, j)` sits at index `i * |H| + j` and is named `(gi,hj)`.
pub fn conormal_product(g: &DistinctionGraph, h: &DistinctionGraph) -> DistinctionGraph {
    let (ng, nh) = (g.len(), h.len());
    let mut nodes = Vec::with_capacity(ng * nh);
    for a in g.nodes() {
        for b in h.nodes() {
            nodes.push(format!("({},{})", escape_id(a), escape_id(b)));
        }
    }
    let n = ng * nh;
    let mut adj = BitMatrix::new(n);
    for x in 0..n {
        let (gi, hi) = (x / nh, x % nh);
        for y in x + 1..n {
            let (gj, hj) = (y / nh, y % nh);
            if g.linked_or_equal(gi, gj) || h.linked_or_equal(hi, hj) {
                adj.set(x, y, true);
                adj.set(y, x, true);
            }
        }
    }
    DistinctionGraph { nodes, adj }
}

/// Disjoint union with no cross links. Node order is `G`'s nodes then `H`'s.
///
/// When the two identifier sets overlap, every identifier is prefixed with
/// `0.` (left) or `1.` (right); otherwise identifiers are kept.
pub fn disjoint_union(g: &DistinctionGraph, h: &DistinctionGraph) -> DistinctionGraph {
    let left: BTreeSet<&str> = g.nodes().iter().map(String::as_str).collect();
    let clash = h.nodes().iter().any(|id| left.contains(id.as_str()));
    let nodes: Vec<String> = if clash {
        g.nodes()
            .iter()
            .map(|id| format!("0.{id}"))
            .chain(h.nodes().iter().map(|id| format!("1.{id}")))
            .collect()
    } else {
        g.nodes().iter().chain(h.nodes()).cloned().collect()
    };
    let off = g.len();
    let mut adj = BitMatrix::new(nodes.len());
    for (u, v) in g.links() {
        adj.set(u, v, true);
        adj.set(v, u, true);
    }
    for (u, v) in h.links() {
        adj.set(u + off, v + off, true);
        adj.set(v + off, u + off, true);
    }
    DistinctionGraph { nodes, adj }
}

/// The closed-form union value `(h(G)·|U_G| + h(H)·|U_H|) / (|U_G| + |U_H|)`.
///
/// This is a size-weighted mean of the component graphtropies. It does not
/// equal `graphtropy(disjoint_union(G, H))`, which also counts every
/// cross-component pair as a dit (P3 ⊕ K2: 2/15 here versus 14/25 raw).
pub fn union_graphtropy_weighted_mean(g: &DistinctionGraph, h: &DistinctionGraph) -> Result<Rational> {
    let hg = graphtropy(g)?;
    let hh = graphtropy(h)?;
    let (ng, nh) = (g.len() as i64, h.len() as i64);
    Ok((hg * ng + hh * nh) / (ng + nh))
}

/// Partition of the node indices into disjoint cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionView {
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl PartitionView {
    /// Validates that `cells` are nonempty, disjoint and cover `0..n`.
    /// Cells are normalized: members sorted, cells ordered by first member.
    pub fn new(n: usize, mut cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for cell in &mut cells {
            if cell.is_empty() {
                return Err(Error::InvalidPartition("empty cell".into()));
            }
            cell.sort_unstable();
            for &i in cell.iter() {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, len: n });
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("node {i} in two cells")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("node {i} not covered")));
        }
        cells.sort_unstable_by_key(|c| c[0]);
        Ok(PartitionView { n, cells })
    }

    /// Consecutive cells with the given sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut cells = Vec::with_capacity(sizes.len());
        let mut next = 0;
        for &s in sizes {
            cells.push((next..next + s).collect());
            next += s;
        }
        Self::new(next, cells)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Cell probabilities `|B_i| / N`; they sum to exactly 1.
    pub fn probabilities(&self) -> Vec<Rational> {
        self.cells.iter().map(|c| ratio(c.len(), self.n)).collect()
    }

    /// Partition graph: every cell a clique, no links between cells.
    pub fn to_graph(&self, nodes: &[String]) -> Result<DistinctionGraph> {
        if nodes.len() != self.n {
            return Err(Error::NodeSetMismatch);
        }
        let mut g = DistinctionGraph::with_nodes_and_links(nodes, &[])?;
        for cell in &self.cells {
            for (k, &u) in cell.iter().enumerate() {
                for &v in &cell[k + 1..] {
                    g.link(u, v);
                }
            }
        }
        Ok(g)
    }
}

/// Reads `g` as a partition when indistinguishability is transitive.
///
/// On failure the error carries a witness `u~v, v~w, u!~w`.
pub fn as_partition(g: &DistinctionGraph) -> Result<PartitionView> {
    let n = g.len();
    for v in 0..n {
        let nb: Vec<usize> = g.neighbors(v).collect();
        for (k, &u) in nb.iter().enumerate() {
            for &w in &nb[k + 1..] {
                if !g.is_linked(u, w) {
                    return Err(Error::NotAPartitionGraph { u, v, w });
                }
            }
        }
    }
    // transitive, so each connected component is a clique: the cell of u is u plus its neighbors
    let mut assigned = vec![false; n];
    let mut cells = Vec::new();
    for u in 0..n {
        if assigned[u] {
            continue;
        }
        let cell: Vec<usize> = std::iter::once(u).chain(g.neighbors(u)).collect();
        for &x in &cell {
            assigned[x] = true;
        }
        cells.push(cell);
    }
    PartitionView::new(n, cells)
}

/// `1 − Σ p_i²`.
pub fn logical_entropy(p: &PartitionView) -> Rational {
    let sq: Rational = p.probabilities().iter().map(|q| q * q).sum();
    Rational::from_integer(1) - sq
}
