//! Dynamic distinction graphs.
//!
//! A [`Ddg`] holds directed links `x → y` whose weight `p` is the probability
//! that the observer cannot notice `x` turning into `y`; its distinctness is
//! `1 − p`. Causal rules say "when this link (or rule) moved in direction D,
//! `lag` steps later that link (or rule) moves too, scaled by `multiplier`".
//! Rules that target rules adjust the target's confidence, which gates how
//! strongly it fires.
//!
//! Stepping is synchronous: every effect is computed from the state before the
//! step, then all of them are applied at once and clamped to `[0,1]`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::DistinctionGraph;
use crate::rng::seeded;
use crate::weighted::WeightedDistinctionGraph;

/// Changes smaller than this are not events.
pub const CHANGE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    More,
    Less,
}

impl Direction {
    fn of(change: f64) -> Option<Direction> {
        if change > CHANGE_EPS {
            Some(Direction::More)
        } else if change < -CHANGE_EPS {
            Some(Direction::Less)
        } else {
            None
        }
    }

    fn sign(self) -> f64 {
        match self {
            Direction::More => 1.0,
            Direction::Less => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Trend {
    Increasing,
    Decreasing,
    #[default]
    Steady,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DLink {
    pub from: usize,
    pub to: usize,
    p: f64,
    pub trend: Trend,
}

impl DLink {
    pub fn new(from: usize, to: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("link weight {p} outside [0,1]")));
        }
        Ok(DLink { from, to, p, trend: Trend::Steady })
    }

    /// Probability the change `from → to` goes unnoticed.
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn distinctness(&self) -> f64 {
        1.0 - self.p
    }
}

/// What a rule watches or drives: a directed link or another rule, by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Link(usize),
    Rule(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trigger {
    pub target: Target,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausalRule {
    pub antecedent: Trigger,
    pub consequent: Trigger,
    pub multiplier: f64,
    pub lag: usize,
    pub confidence: f64,
}

impl CausalRule {
    fn rule_refs(&self) -> impl Iterator<Item = usize> + '_ {
        [self.antecedent.target, self.consequent.target].into_iter().filter_map(|t| match t {
            Target::Rule(r) => Some(r),
            Target::Link(_) => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
struct Change {
    links: Vec<f64>,
    rules: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ddg {
    nodes: Vec<String>,
    counts: Vec<u64>,
    dlinks: Vec<DLink>,
    rules: Vec<CausalRule>,
    // most recent step first
    history: VecDeque<Change>,
}

impl Ddg {
    pub fn new(nodes: Vec<String>, counts: Option<Vec<u64>>, dlinks: Vec<DLink>, rules: Vec<CausalRule>) -> Result<Self> {
        let n = nodes.len();
        let mut seen = BTreeSet::new();
        for id in &nodes {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateNode(id.clone()));
            }
        }
        let counts = counts.unwrap_or_else(|| vec![1; n]);
        if counts.len() != n {
            return Err(Error::InvalidParameter(format!("{} counts for {} nodes", counts.len(), n)));
        }
        let mut pairs = BTreeSet::new();
        for l in &dlinks {
            if l.from >= n || l.to >= n {
                return Err(Error::IndexOutOfRange { index: l.from.max(l.to), len: n });
            }
            if l.from == l.to {
                return Err(Error::SelfLink(nodes[l.from].clone()));
            }
            if !pairs.insert((l.from, l.to)) {
                return Err(Error::InvalidParameter(format!("duplicate link {} -> {}", nodes[l.from], nodes[l.to])));
            }
            if !(0.0..=1.0).contains(&l.p) {
                return Err(Error::InvalidParameter("link weight outside [0,1]".into()));
            }
        }
        for (i, r) in rules.iter().enumerate() {
            for t in [r.antecedent.target, r.consequent.target] {
                match t {
                    Target::Link(l) if l >= dlinks.len() => {
                        return Err(Error::InvalidReference(format!("rule {i} names link {l}")))
                    }
                    Target::Rule(j) if j >= rules.len() => {
                        return Err(Error::InvalidReference(format!("rule {i} names rule {j}")))
                    }
                    _ => {}
                }
            }
            if r.lag == 0 {
                return Err(Error::InvalidParameter(format!("rule {i} has lag 0")));
            }
            if !(r.multiplier >= 0.0 && r.multiplier.is_finite()) {
                return Err(Error::InvalidParameter(format!("rule {i} multiplier {}", r.multiplier)));
            }
            if !(0.0..=1.0).contains(&r.confidence) {
                return Err(Error::InvalidParameter(format!("rule {i} confidence {}", r.confidence)));
            }
        }
        check_acyclic(&rules)?;
        Ok(Ddg { nodes, counts, dlinks, rules, history: VecDeque::new() })
    }

    /// Each link of `g` becomes a pair of directed links with `p = 1`.
    pub fn from_graph(g: &DistinctionGraph) -> Self {
        let mut dlinks = Vec::new();
        for (u, v) in g.links() {
            dlinks.push(DLink { from: u, to: v, p: 1.0, trend: Trend::Steady });
            dlinks.push(DLink { from: v, to: u, p: 1.0, trend: Trend::Steady });
        }
        Ddg { nodes: g.nodes().to_vec(), counts: vec![1; g.len()], dlinks, rules: Vec::new(), history: VecDeque::new() }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn dlinks(&self) -> &[DLink] {
        &self.dlinks
    }

    pub fn rules(&self) -> &[CausalRule] {
        &self.rules
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == id)
    }

    pub fn link_index(&self, from: usize, to: usize) -> Option<usize> {
        self.dlinks.iter().position(|l| l.from == from && l.to == to)
    }

    /// Distinctness of every link, in link order.
    pub fn distinctness(&self) -> Vec<f64> {
        self.dlinks.iter().map(DLink::distinctness).collect()
    }

    fn history_len(&self) -> usize {
        self.rules.iter().map(|r| r.lag).max().unwrap_or(1)
    }

    fn past_change(&self, lag: usize, t: Target) -> f64 {
        self.history.get(lag - 1).map_or(0.0, |c| match t {
            Target::Link(l) => c.links[l],
            Target::Rule(r) => c.rules[r],
        })
    }

    /// One step with no outside input.
    pub fn step(&self, delta: f64) -> Result<Ddg> {
        self.step_with(delta, &[])
    }

    /// One step; `stimuli` are outside distinctness changes `(link, amount)`
    /// applied together with the rule effects.
    pub fn step_with(&self, delta: f64, stimuli: &[(usize, f64)]) -> Result<Ddg> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("step size {delta}")));
        }
        let mut link_push = vec![0.0; self.dlinks.len()];
        let mut rule_push = vec![0.0; self.rules.len()];
        for &(l, amount) in stimuli {
            if l >= self.dlinks.len() {
                return Err(Error::IndexOutOfRange { index: l, len: self.dlinks.len() });
            }
            if !amount.is_finite() {
                return Err(Error::InvalidParameter(format!("stimulus {amount}")));
            }
            link_push[l] += amount;
        }
        for r in &self.rules {
            let change = self.past_change(r.lag, r.antecedent.target);
            if Direction::of(change) != Some(r.antecedent.direction) {
                continue;
            }
            let effect = r.consequent.direction.sign() * delta * r.multiplier * r.confidence * change.abs();
            match r.consequent.target {
                Target::Link(l) => link_push[l] += effect,
                Target::Rule(j) => rule_push[j] += effect,
            }
        }
        let mut next = self.clone();
        let mut change = Change { links: vec![0.0; self.dlinks.len()], rules: vec![0.0; self.rules.len()] };
        for (i, l) in next.dlinks.iter_mut().enumerate() {
            let old = l.distinctness();
            l.p = 1.0 - (old + link_push[i]).clamp(0.0, 1.0);
            change.links[i] = l.distinctness() - old;
            l.trend = match Direction::of(change.links[i]) {
                Some(Direction::More) => Trend::Increasing,
                Some(Direction::Less) => Trend::Decreasing,
                None => Trend::Steady,
            };
        }
        for (j, r) in next.rules.iter_mut().enumerate() {
            let old = r.confidence;
            r.confidence = (old + rule_push[j]).clamp(0.0, 1.0);
            change.rules[j] = r.confidence - old;
        }
        next.history.push_front(change);
        next.history.truncate(self.history_len());
        Ok(next)
    }

    /// Runs `stimuli.len()` steps and returns the distinctness trace, starting
    /// with the current state.
    pub fn run(&self, delta: f64, stimuli: &[Vec<(usize, f64)>]) -> Result<(Ddg, LinkTrace)> {
        let mut cur = self.clone();
        let mut values = vec![cur.distinctness()];
        for s in stimuli {
            cur = cur.step_with(delta, s)?;
            values.push(cur.distinctness());
        }
        let links = self.dlinks.iter().map(|l| (self.nodes[l.from].clone(), self.nodes[l.to].clone())).collect();
        Ok((cur, LinkTrace { links, values }))
    }
}

fn check_acyclic(rules: &[CausalRule]) -> Result<()> {
    // 0 = unvisited, 1 = on stack, 2 = done
    fn visit(i: usize, rules: &[CausalRule], state: &mut [u8]) -> Result<()> {
        match state[i] {
            1 => return Err(Error::RuleCycle(i)),
            2 => return Ok(()),
            _ => {}
        }
        state[i] = 1;
        for j in rules[i].rule_refs() {
            if j == i {
                return Err(Error::RuleCycle(i));
            }
            visit(j, rules, state)?;
        }
        state[i] = 2;
        Ok(())
    }
    let mut state = vec![0u8; rules.len()];
    for i in 0..rules.len() {
        visit(i, rules, &mut state)?;
    }
    Ok(())
}

/// Number of distinct rules connected to node `x`: rules that touch a link
/// incident to `x`, plus every rule linked to those through rule references
/// in either direction.
pub fn node_complexity(ddg: &Ddg, x: usize) -> Result<usize> {
    if x >= ddg.nodes.len() {
        return Err(Error::IndexOutOfRange { index: x, len: ddg.nodes.len() });
    }
    check_acyclic(&ddg.rules)?;
    let incident = |t: Target| matches!(t, Target::Link(l) if ddg.dlinks[l].from == x || ddg.dlinks[l].to == x);
    let mut reached: BTreeSet<usize> = BTreeSet::new();
    let mut stack: Vec<usize> = (0..ddg.rules.len())
        .filter(|&i| incident(ddg.rules[i].antecedent.target) || incident(ddg.rules[i].consequent.target))
        .collect();
    while let Some(i) = stack.pop() {
        if !reached.insert(i) {
            continue;
        }
        stack.extend(ddg.rules[i].rule_refs());
        stack.extend((0..ddg.rules.len()).filter(|&j| ddg.rules[j].rule_refs().any(|k| k == i)));
    }
    Ok(reached.len())
}

/// Distinctness of named links over time; `values[t][l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkTrace {
    pub links: Vec<(String, String)>,
    pub values: Vec<Vec<f64>>,
}

impl LinkTrace {
    pub fn new(links: Vec<(String, String)>, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.iter().any(|row| row.len() != links.len()) {
            return Err(Error::LengthMismatch);
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite trace value".into()));
        }
        Ok(LinkTrace { links, values })
    }

    /// Midpoint distinctness of every unordered pair `u < v`.
    pub fn from_weighted(seq: &[WeightedDistinctionGraph]) -> Result<Self> {
        let first = seq.first().ok_or(Error::EmptyTrace)?;
        let n = first.len();
        let mut links = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                links.push((first.nodes()[u].clone(), first.nodes()[v].clone()));
            }
        }
        let mut values = Vec::with_capacity(seq.len());
        for g in seq {
            if g.nodes() != first.nodes() {
                return Err(Error::NodeSetMismatch);
            }
            values.push((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).map(|(u, v)| g.mu(u, v)).collect());
        }
        Ok(LinkTrace { links, values })
    }

    /// Crisp observations: a pair is `1` when it is a dit, `0` when linked.
    pub fn from_graphs(seq: &[DistinctionGraph]) -> Result<Self> {
        let wseq: Vec<WeightedDistinctionGraph> = seq.iter().map(WeightedDistinctionGraph::from_graph).collect();
        Self::from_weighted(&wseq)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiningParams {
    pub min_confidence: f64,
    pub max_lag: usize,
    pub min_support: usize,
}

impl Default for MiningParams {
    fn default() -> Self {
        MiningParams { min_confidence: 0.9, max_lag: 3, min_support: 3 }
    }
}

/// A mined rule; link targets index into the trace's links.
#[derive(Debug, Clone, PartialEq)]
pub struct MinedRule {
    pub rule: CausalRule,
    pub support: usize,
}

/// Rules `(link a moved D at t) ⇒ (link c moved D' at t + lag)` whose
/// confidence and support clear the thresholds. Sorted by antecedent, lag,
/// then consequent.
pub fn mine_rules(trace: &LinkTrace, params: &MiningParams) -> Result<Vec<MinedRule>> {
    if params.max_lag == 0 {
        return Err(Error::InvalidParameter("max_lag must be at least 1".into()));
    }
    if trace.len() <= params.max_lag {
        return Err(Error::TraceTooShort { len: trace.len(), max_lag: params.max_lag });
    }
    let n_links = trace.links.len();
    // changes[t][l] is the change into time t + 1
    let changes: Vec<Vec<f64>> =
        trace.values.windows(2).map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect()).collect();
    let mut out = Vec::new();
    for la in 0..n_links {
        for da in [Direction::More, Direction::Less] {
            for lag in 1..=params.max_lag {
                let times: Vec<usize> = (0..changes.len().saturating_sub(lag))
                    .filter(|&t| Direction::of(changes[t][la]) == Some(da))
                    .collect();
                if times.is_empty() {
                    continue;
                }
                for lc in 0..n_links {
                    for dc in [Direction::More, Direction::Less] {
                        let mut co = 0usize;
                        let mut ratio_sum = 0.0;
                        for &t in &times {
                            let c = changes[t + lag][lc];
                            if Direction::of(c) == Some(dc) {
                                co += 1;
                                ratio_sum += c.abs() / changes[t][la].abs();
                            }
                        }
                        let confidence = co as f64 / times.len() as f64;
                        if co >= params.min_support.max(1) && confidence >= params.min_confidence {
                            out.push(MinedRule {
                                rule: CausalRule {
                                    antecedent: Trigger { target: Target::Link(la), direction: da },
                                    consequent: Trigger { target: Target::Link(lc), direction: dc },
                                    multiplier: ratio_sum / co as f64,
                                    lag,
                                    confidence,
                                },
                                support: co,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A DDG with planted link-to-link rules and the noise-free trace it produces.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedTrace {
    pub ddg: Ddg,
    pub trace: LinkTrace,
}

/// Rule `i` drives link `2i + 1` (`c_i → d_i`, starting at distinctness 0.5)
/// from link `2i` (`a_i → b_i`), which receives small random pushes with
/// probability 0.3 per step. Multipliers lie in `[0.25, 2]`, lags in
/// `1..=max_lag`, confidence 1.
pub fn generate_planted(n_rules: usize, max_lag: usize, length: usize, seed: u64) -> Result<PlantedTrace> {
    if n_rules == 0 || max_lag == 0 || length == 0 {
        return Err(Error::InvalidParameter("rules, lag and length must be positive".into()));
    }
    let mut rng = seeded(seed);
    let mut nodes = Vec::new();
    let mut dlinks = Vec::new();
    let mut rules = Vec::new();
    let dir = |rng: &mut crate::rng::SimRng| if rng.random_bool(0.5) { Direction::More } else { Direction::Less };
    for i in 0..n_rules {
        let base = nodes.len();
        for name in ["a", "b", "c", "d"] {
            nodes.push(format!("{name}{i}"));
        }
        dlinks.push(DLink::new(base, base + 1, 1.0 - rng.random_range(0.3..0.7))?);
        dlinks.push(DLink::new(base + 2, base + 3, 0.5)?);
        rules.push(CausalRule {
            antecedent: Trigger { target: Target::Link(2 * i), direction: dir(&mut rng) },
            consequent: Trigger { target: Target::Link(2 * i + 1), direction: dir(&mut rng) },
            multiplier: rng.random_range(0.25..=2.0),
            lag: rng.random_range(1..=max_lag),
            confidence: 1.0,
        });
    }
    let ddg = Ddg::new(nodes, None, dlinks, rules)?;
    let mut cur = ddg.clone();
    let mut values = vec![cur.distinctness()];
    for _ in 1..length {
        let mut stimuli = Vec::new();
        for i in 0..n_rules {
            if rng.random_bool(0.3) {
                let d = cur.dlinks[2 * i].distinctness();
                let mut amount = rng.random_range(1e-4..=1e-3);
                if rng.random_bool(0.5) {
                    amount = -amount;
                }
                if !(0.2..=0.8).contains(&(d + amount)) {
                    amount = -amount;
                }
                stimuli.push((2 * i, amount));
            }
        }
        cur = cur.step_with(1.0, &stimuli)?;
        values.push(cur.distinctness());
    }
    let trace = ddg.run(1.0, &[])?.1;
    let trace = LinkTrace { links: trace.links, values };
    Ok(PlantedTrace { ddg, trace })
}

/// An observer DDG with a sensitivity in `[0,1]` per node (0 = not a sensor).
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverSpec {
    ddg: Ddg,
    sensitivity: Vec<f64>,
}

impl ObserverSpec {
    pub fn new(ddg: Ddg, sensitivity: Vec<f64>) -> Result<Self> {
        if sensitivity.len() != ddg.nodes.len() {
            return Err(Error::LengthMismatch);
        }
        if sensitivity.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(Error::InvalidParameter("sensitivity outside [0,1]".into()));
        }
        Ok(ObserverSpec { ddg, sensitivity })
    }

    /// Full sensitivity on the named nodes, none elsewhere.
    pub fn with_sensors(ddg: Ddg, sensors: &[usize]) -> Result<Self> {
        let mut s = vec![0.0; ddg.nodes.len()];
        for &x in sensors {
            *s.get_mut(x).ok_or(Error::IndexOutOfRange { index: x, len: ddg.nodes.len() })? = 1.0;
        }
        Self::new(ddg, s)
    }

    pub fn ddg(&self) -> &Ddg {
        &self.ddg
    }

    /// Distinctness of every link after each step, driven by a per-step
    /// vector of stimulus intensities per node. A sensor `s` pushes each of its
    /// outgoing links by `sensitivity[s] · intensity[s]`.
    pub fn respond(&self, delta: f64, sequence: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let mut cur = self.ddg.clone();
        let mut out = Vec::with_capacity(sequence.len());
        for step in sequence {
            if step.len() != self.sensitivity.len() {
                return Err(Error::LengthMismatch);
            }
            let stimuli: Vec<(usize, f64)> = cur
                .dlinks
                .iter()
                .enumerate()
                .filter_map(|(i, l)| {
                    let push = self.sensitivity[l.from] * step[l.from];
                    (push != 0.0).then_some((i, push))
                })
                .collect();
            cur = cur.step_with(delta, &stimuli)?;
            out.push(cur.distinctness());
        }
        Ok(out)
    }
}

/// Links two categories when the observer's mean response trajectories to
/// their stimulus sequences never differ by more than `tolerance`.
pub fn derive_observer_graph(
    obs: &ObserverSpec,
    stimuli: &BTreeMap<String, Vec<Vec<Vec<f64>>>>,
    delta: f64,
    tolerance: f64,
) -> Result<DistinctionGraph> {
    let mut len = None;
    let mut means = Vec::with_capacity(stimuli.len());
    for (cat, seqs) in stimuli {
        if seqs.is_empty() {
            return Err(Error::EmptyCategory(cat.clone()));
        }
        let mut mean: Vec<Vec<f64>> = Vec::new();
        for seq in seqs {
            if *len.get_or_insert(seq.len()) != seq.len() {
                return Err(Error::LengthMismatch);
            }
            let traj = obs.respond(delta, seq)?;
            if mean.is_empty() {
                mean = traj;
            } else {
                for (m, t) in mean.iter_mut().zip(&traj) {
                    for (a, b) in m.iter_mut().zip(t) {
                        *a += b;
                    }
                }
            }
        }
        let k = seqs.len() as f64;
        mean.iter_mut().flatten().for_each(|a| *a /= k);
        means.push(mean);
    }
    let mut links = Vec::new();
    for i in 0..means.len() {
        for j in i + 1..means.len() {
            let gap = means[i]
                .iter()
                .flatten()
                .zip(means[j].iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if gap <= tolerance {
                links.push((i, j));
            }
        }
    }
    let names: Vec<String> = stimuli.keys().cloned().collect();
    DistinctionGraph::with_nodes_and_links(&names, &links)
}

/// Replaces node `x` by `k` copies `x#0 .. x#k-1` that are fully linked to each
/// other (`p = 1` both ways). Each copy inherits `x`'s links; every rule that
/// depends on those links, directly or through other rules, is duplicated per
/// copy. History is cleared.
#[allow(clippy::needless_range_loop)]
pub fn expand_node(ddg: &Ddg, x: usize, k: usize) -> Result<Ddg> {
    let n = ddg.nodes.len();
    if x >= n {
        return Err(Error::IndexOutOfRange { index: x, len: n });
    }
    if k == 0 {
        return Err(Error::InvalidParameter("expansion needs at least one copy".into()));
    }
    // new node order: others keep relative order, copies take x's place
    let mut nodes = Vec::with_capacity(n + k - 1);
    let mut counts = Vec::with_capacity(n + k - 1);
    let mut new_index = vec![0; n];
    let mut copies = Vec::with_capacity(k);
    for u in 0..n {
        if u == x {
            for i in 0..k {
                copies.push(nodes.len());
                nodes.push(format!("{}#{i}", ddg.nodes[x]));
                counts.push(ddg.counts[x]);
            }
        } else {
            new_index[u] = nodes.len();
            nodes.push(ddg.nodes[u].clone());
            counts.push(ddg.counts[u]);
        }
    }
    let incident = |l: &DLink| l.from == x || l.to == x;
    let mut dlinks = Vec::new();
    // link_map[copy][old link] = new link index
    let mut link_map = vec![vec![usize::MAX; ddg.dlinks.len()]; k];
    for (li, l) in ddg.dlinks.iter().enumerate() {
        if incident(l) {
            for (c, &cx) in copies.iter().enumerate() {
                let from = if l.from == x { cx } else { new_index[l.from] };
                let to = if l.to == x { cx } else { new_index[l.to] };
                link_map[c][li] = dlinks.len();
                dlinks.push(DLink { from, to, p: l.p, trend: Trend::Steady });
            }
        } else {
            let idx = dlinks.len();
            for m in link_map.iter_mut() {
                m[li] = idx;
            }
            dlinks.push(DLink { from: new_index[l.from], to: new_index[l.to], ..l.clone() });
        }
    }
    for &a in &copies {
        for &b in &copies {
            if a != b {
                dlinks.push(DLink { from: a, to: b, p: 1.0, trend: Trend::Steady });
            }
        }
    }
    // rules in dependency order so referenced rules are mapped first
    let order = topo_order(&ddg.rules);
    let mut dependent = vec![false; ddg.rules.len()];
    for &i in &order {
        let r = &ddg.rules[i];
        dependent[i] = [r.antecedent.target, r.consequent.target].iter().any(|t| match *t {
            Target::Link(l) => incident(&ddg.dlinks[l]),
            Target::Rule(j) => dependent[j],
        });
    }
    let mut rules = Vec::new();
    let mut rule_map = vec![vec![usize::MAX; ddg.rules.len()]; k];
    for &i in &order {
        let r = &ddg.rules[i];
        let versions = if dependent[i] { k } else { 1 };
        for c in 0..versions {
            let map = |t: Target| match t {
                Target::Link(l) => Target::Link(link_map[c][l]),
                Target::Rule(j) => Target::Rule(rule_map[c][j]),
            };
            let idx = rules.len();
            rules.push(CausalRule {
                antecedent: Trigger { target: map(r.antecedent.target), ..r.antecedent },
                consequent: Trigger { target: map(r.consequent.target), ..r.consequent },
                ..r.clone()
            });
            if dependent[i] {
                rule_map[c][i] = idx;
            } else {
                for m in rule_map.iter_mut() {
                    m[i] = idx;
                }
            }
        }
    }
    Ddg::new(nodes, Some(counts), dlinks, rules)
}

fn topo_order(rules: &[CausalRule]) -> Vec<usize> {
    fn visit(i: usize, rules: &[CausalRule], done: &mut [bool], out: &mut Vec<usize>) {
        if done[i] {
            return;
        }
        done[i] = true;
        for j in rules[i].rule_refs() {
            visit(j, rules, done, out);
        }
        out.push(i);
    }
    let mut done = vec![false; rules.len()];
    let mut out = Vec::with_capacity(rules.len());
    for i in 0..rules.len() {
        visit(i, rules, &mut done, &mut out);
    }
    out
}

/// A causal link between amplitude components with a complex multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumCausalLink {
    pub source: usize,
    pub target: usize,
    pub alpha: Complex64,
}

/// Matrix with entry `(target, source)` summing the multipliers of the links
/// between them.
pub fn compile_quantum(links: &[QuantumCausalLink], n: usize) -> Result<DMatrix<Complex64>> {
    let mut m = DMatrix::zeros(n, n);
    for l in links {
        if l.source >= n || l.target >= n {
            return Err(Error::IndexOutOfRange { index: l.source.max(l.target), len: n });
        }
        if !(l.alpha.re.is_finite() && l.alpha.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite multiplier".into()));
        }
        m[(l.target, l.source)] += l.alpha;
    }
    Ok(m)
}

pub fn apply(m: &DMatrix<Complex64>, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    if m.ncols() != v.len() {
        return Err(Error::LengthMismatch);
    }
    Ok(m * v)
}

/// `M†M = I` entrywise within `tol`.
pub fn is_unitary(m: &DMatrix<Complex64>, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let p = m.adjoint() * m;
    let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
    (p - id).iter().all(|z| z.norm() <= tol)
}

/// One link per nonzero entry, ordered by source then target.
pub fn derive_links(m: &DMatrix<Complex64>) -> Vec<QuantumCausalLink> {
    let mut out = Vec::new();
    for source in 0..m.ncols() {
        for target in 0..m.nrows() {
            let alpha = m[(target, source)];
            if alpha != Complex64::new(0.0, 0.0) {
                out.push(QuantumCausalLink { source, target, alpha });
            }
        }
    }
    out
}
