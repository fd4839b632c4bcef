//! Memory graphs, forgetting, and the ternary-event refinement model.
//!
//! An observer that remembers everything keeps a pair distinct once it has
//! ever seen it distinct, so its memory graph is the intersection of all the
//! link sets it has observed and its graphtropy can only grow. Forgetting
//! breaks that.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{graphtropy, DistinctionGraph};
use crate::rng::{seeded, seeded_stream};
use crate::weighted::{IntervalWeight, WeightedDistinctionGraph};
use crate::Rational;

/// Running join of observed graphs: a pair stays linked only while every
/// observation so far linked it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryGraph {
    graph: DistinctionGraph,
}

impl MemoryGraph {
    pub fn new(first: DistinctionGraph) -> Self {
        MemoryGraph { graph: first }
    }

    pub fn observe(&mut self, g: &DistinctionGraph) -> Result<()> {
        self.graph = self.graph.intersect_links(g)?;
        Ok(())
    }

    pub fn graph(&self) -> &DistinctionGraph {
        &self.graph
    }

    pub fn graphtropy(&self) -> Rational {
        graphtropy(&self.graph).unwrap_or_default()
    }
}

pub fn memory_join(trace: &[DistinctionGraph]) -> Result<MemoryGraph> {
    let (first, rest) = trace.split_first().ok_or(Error::EmptyTrace)?;
    let mut m = MemoryGraph::new(first.clone());
    for g in rest {
        m.observe(g)?;
    }
    Ok(m)
}

/// Memory graphtropy after each step (index 0 is the first observation) and
/// the steps where it strictly decreased.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryTrajectory {
    pub graphtropy: Vec<Rational>,
    pub violations: Vec<usize>,
}

impl MemoryTrajectory {
    fn from_values(graphtropy: Vec<Rational>) -> Self {
        let violations = graphtropy.windows(2).enumerate().filter(|(_, w)| w[1] < w[0]).map(|(i, _)| i + 1).collect();
        MemoryTrajectory { graphtropy, violations }
    }
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{name} = {p} is not a probability")));
    }
    Ok(())
}

/// World starts as `K_n`; at every step each pair's link flips with
/// probability `flip_p`, and the memory observes the new world.
pub fn run_second_law_sim(n: usize, steps: usize, flip_p: f64, seed: u64) -> Result<MemoryTrajectory> {
    run_forgetting_sim(n, steps, flip_p, 0.0, seed)
}

/// As [`run_second_law_sim`], but before each observation every remembered
/// dit is forgotten (its link restored) with probability `forget_p`.
///
/// Forgetting draws from its own stream, so the world evolves identically for
/// every `forget_p` at a given seed.
pub fn run_forgetting_sim(n: usize, steps: usize, flip_p: f64, forget_p: f64, seed: u64) -> Result<MemoryTrajectory> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    check_prob("flip probability", flip_p)?;
    check_prob("forget probability", forget_p)?;
    let mut world_rng = seeded(seed);
    let mut forget_rng = seeded_stream(seed, 1);
    let mut world = DistinctionGraph::complete(n);
    let mut memory = MemoryGraph::new(world.clone());
    let mut values = Vec::with_capacity(steps + 1);
    values.push(memory.graphtropy());
    for _ in 0..steps {
        for u in 0..n {
            for v in u + 1..n {
                if world_rng.random_bool(flip_p) {
                    world.set_link(u, v, !world.is_linked(u, v));
                }
            }
        }
        if forget_p > 0.0 {
            for u in 0..n {
                for v in u + 1..n {
                    if !memory.graph.is_linked(u, v) && forget_rng.random_bool(forget_p) {
                        memory.graph.link(u, v);
                    }
                }
            }
        }
        memory.observe(&world)?;
        values.push(memory.graphtropy());
    }
    Ok(MemoryTrajectory::from_values(values))
}

/// Step sizes for weighted memory updates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryUpdateParams {
    delta_distinct: f64,
    delta_same: f64,
    forget_prob: f64,
}

impl MemoryUpdateParams {
    pub fn new(delta_distinct: f64, delta_same: f64, forget_prob: f64) -> Result<Self> {
        if !(delta_same > 0.0 && delta_same < delta_distinct && delta_distinct.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < delta_same ({delta_same}) < delta_distinct ({delta_distinct})"
            )));
        }
        check_prob("forget probability", forget_prob)?;
        Ok(MemoryUpdateParams { delta_distinct, delta_same, forget_prob })
    }

    pub fn delta_distinct(&self) -> f64 {
        self.delta_distinct
    }

    pub fn delta_same(&self) -> f64 {
        self.delta_same
    }

    pub fn forget_prob(&self) -> f64 {
        self.forget_prob
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    Distinct,
    Same,
}

/// Shifts the pair's distinctness interval up by `delta_distinct` or down by
/// `delta_same`, then slides it back inside `[0,1]` (shrinking only when it
/// cannot fit).
pub fn weighted_memory_update(
    wg: &WeightedDistinctionGraph,
    u: usize,
    v: usize,
    obs: Observation,
    params: &MemoryUpdateParams,
) -> Result<WeightedDistinctionGraph> {
    if u == v || u >= wg.len() || v >= wg.len() {
        return Err(Error::InvalidPair(u, v));
    }
    let d = wg.distinctness(u, v);
    let shift = match obs {
        Observation::Distinct => params.delta_distinct,
        Observation::Same => -params.delta_same,
    };
    let (mut lo, mut hi) = (d.lo() + shift, d.hi() + shift);
    if hi > 1.0 {
        lo -= hi - 1.0;
        hi = 1.0;
    }
    if lo < 0.0 {
        hi = (hi - lo).min(1.0);
        lo = 0.0;
    }
    let mut out = wg.clone();
    out.set_distinctness(u, v, IntervalWeight::new(lo.max(0.0), hi)?)?;
    Ok(out)
}

/// One ternary event `a * b = c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TernaryEvent {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl TernaryEvent {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        TernaryEvent { a, b, c }
    }
}

/// Membership masks of the six properties an event induces, over `n` nodes.
///
/// For `e = (a,b,c)`:
/// 0. `x` with `(x,b,c)` in history
/// 1. `x` with `(a,x,c)`
/// 2. `x` with `(a,b,x)`
/// 3. `x` with some `(x,y,c)`
/// 4. `x` with some `(x,b,y)`
/// 5. `x` with some `(y,x,c)`
pub fn properties_of_event(n: usize, e: &TernaryEvent, history: &[TernaryEvent]) -> [Vec<bool>; 6] {
    let mut p: [Vec<bool>; 6] = std::array::from_fn(|_| vec![false; n]);
    let mut mark = |k: usize, x: usize| {
        if x < n {
            p[k][x] = true;
        }
    };
    for h in history {
        if h.b == e.b && h.c == e.c {
            mark(0, h.a);
        }
        if h.a == e.a && h.c == e.c {
            mark(1, h.b);
        }
        if h.a == e.a && h.b == e.b {
            mark(2, h.c);
        }
        if h.c == e.c {
            mark(3, h.a);
            mark(5, h.b);
        }
        if h.b == e.b {
            mark(4, h.a);
        }
    }
    p
}

/// Partition of `0..n` as a cell id per node, ids in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedPartition {
    cell_of: Vec<usize>,
    sizes: Vec<usize>,
}

impl RefinedPartition {
    pub fn single(n: usize) -> Self {
        RefinedPartition { cell_of: vec![0; n], sizes: if n == 0 { vec![] } else { vec![n] } }
    }

    pub fn cell_of(&self) -> &[usize] {
        &self.cell_of
    }

    pub fn cell_count(&self) -> usize {
        self.sizes.len()
    }

    /// Splits every cell by the given node predicates.
    pub fn refine(&mut self, predicates: &[Vec<bool>]) {
        let mut ids: BTreeMap<(usize, u64), usize> = BTreeMap::new();
        let mut order: Vec<(usize, u64)> = Vec::new();
        let keys: Vec<(usize, u64)> = (0..self.cell_of.len())
            .map(|x| {
                let bits = predicates.iter().enumerate().fold(0u64, |acc, (k, p)| acc | (p[x] as u64) << k);
                (self.cell_of[x], bits)
            })
            .collect();
        for k in &keys {
            if !ids.contains_key(k) {
                ids.insert(*k, order.len());
                order.push(*k);
            }
        }
        self.sizes = vec![0; order.len()];
        for (x, k) in keys.iter().enumerate() {
            let c = ids[k];
            self.cell_of[x] = c;
            self.sizes[c] += 1;
        }
    }

    /// Shannon entropy of the cell-size distribution, in nats.
    pub fn shannon_nats(&self) -> f64 {
        let n = self.cell_of.len() as f64;
        self.sizes.iter().map(|&s| s as f64 / n).map(|p| -p * p.ln()).sum::<f64>() + 0.0
    }

    /// `1 − Σ (size/n)²`.
    pub fn logical_entropy(&self) -> Rational {
        let n = self.cell_of.len() as i64;
        if n == 0 {
            return Rational::default();
        }
        let sq: i64 = self.sizes.iter().map(|&s| (s * s) as i64).sum();
        Rational::new(n * n - sq, n * n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MepStep {
    pub cells: usize,
    pub shannon_nats: f64,
    pub logical: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MepTrajectory {
    /// Entry 0 is the single-cell start; entry `t` follows event `t`.
    pub steps: Vec<MepStep>,
    pub events: Vec<TernaryEvent>,
    pub partition: RefinedPartition,
}

/// Draws `n_events` uniform events; after each one the partition is refined by
/// the six properties of that event against the history including it.
pub fn run_mep_sim(n: usize, n_events: usize, seed: u64) -> Result<MepTrajectory> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = seeded(seed);
    let mut part = RefinedPartition::single(n);
    let snapshot = |p: &RefinedPartition| MepStep {
        cells: p.cell_count(),
        shannon_nats: p.shannon_nats(),
        logical: p.logical_entropy(),
    };
    let mut steps = vec![snapshot(&part)];
    let mut events = Vec::with_capacity(n_events);
    for _ in 0..n_events {
        let e = TernaryEvent::new(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
        events.push(e);
        let props = properties_of_event(n, &e, &events);
        part.refine(&props);
        steps.push(snapshot(&part));
    }
    Ok(MepTrajectory { steps, events, partition: part })
}
