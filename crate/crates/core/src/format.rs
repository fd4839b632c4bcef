//! JSON file formats.
//!
//! Every parser takes the file contents and either returns a typed value or a
//! [`FormatError`]: `Parse` for text that is not JSON at all, `Schema` for JSON
//! of the wrong shape (with a JSON pointer to the offending field), and
//! `Invalid` for well-shaped data the domain types reject.
//!
//! Graph files look like
//! `{"nodes":[{"id":"a","weight":null}],"links":[{"u":"a","v":"b"}]}`.
//! Links with `d_lo`/`d_hi`, or nodes with a weight, make the file weighted;
//! `dlinks` or `rules` make it a DDG. Node order in the file is the node order
//! of the result.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::ddg::{CausalRule, DLink, Ddg, Direction, LinkTrace, ObserverSpec, QuantumCausalLink, Target, Trend, Trigger};
use crate::dist::GraphDistribution;
use crate::error::Error;
use crate::graph::DistinctionGraph;
use crate::quantum::{ActionAssignment, CMatrix, DensityMatrix};
use crate::weighted::{IntervalWeight, WeightedDistinctionGraph};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("invalid input: {0}")]
    Invalid(#[from] Error),
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Schema { pointer: pointer.into(), message: message.into() }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Deserializes `text`, separating syntax errors from shape errors.
pub fn from_json<T: DeserializeOwned>(text: &str) -> FormatResult<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = match serde_path_to_error::deserialize::<_, T>(&mut de) {
        Ok(v) => v,
        Err(e) => {
            let pointer = pointer_of(e.path());
            let inner = e.into_inner();
            return Err(match inner.classify() {
                serde_json::error::Category::Data => schema(pointer, inner.to_string()),
                _ => FormatError::Parse(inner.to_string()),
            });
        }
    };
    de.end().map_err(|e| FormatError::Parse(e.to_string()))?;
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkRec {
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_hi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrendRec {
    Increasing,
    Decreasing,
    Steady,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DLinkRec {
    pub from: String,
    pub to: String,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trend: Option<TrendRec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirRec {
    More,
    Less,
}

/// Either a directed link (`from`, `to`) or a rule index (`rule`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriggerRec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<usize>,
    pub dir: DirRec,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleRec {
    pub ante: TriggerRec,
    pub cons: TriggerRec,
    pub alpha: f64,
    pub lag: usize,
    #[serde(default = "one")]
    pub conf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub nodes: Vec<NodeRec>,
    #[serde(default)]
    pub links: Vec<LinkRec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dlinks: Option<Vec<DLinkRec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<RuleRec>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Plain,
    Weighted,
    Ddg,
}

impl GraphFile {
    pub fn kind(&self) -> GraphKind {
        if self.dlinks.is_some() || self.rules.is_some() {
            GraphKind::Ddg
        } else if self.links.iter().any(|l| l.d_lo.is_some() || l.d_hi.is_some())
            || self.nodes.iter().any(|n| n.weight.is_some())
        {
            GraphKind::Weighted
        } else {
            GraphKind::Plain
        }
    }

    fn ids(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.id.clone()).collect()
    }

    fn index(&self, ids: &[String], id: &str, at: String) -> FormatResult<usize> {
        ids.iter().position(|n| n == id).ok_or_else(|| schema(at, format!("unknown node {id:?}")))
    }

    fn reject_ddg_fields(&self, base: &str) -> FormatResult<()> {
        if self.dlinks.is_some() {
            return Err(schema(format!("{base}/dlinks"), "directed links need a DDG"));
        }
        if self.rules.is_some() {
            return Err(schema(format!("{base}/rules"), "rules need a DDG"));
        }
        if let Some(i) = self.nodes.iter().position(|n| n.count.is_some()) {
            return Err(schema(format!("{base}/nodes/{i}/count"), "counts need a DDG"));
        }
        Ok(())
    }

    /// Plain graph; weights and distinctness values are rejected.
    pub fn to_plain(&self, base: &str) -> FormatResult<DistinctionGraph> {
        self.reject_ddg_fields(base)?;
        if let Some(i) = self.nodes.iter().position(|n| n.weight.is_some()) {
            return Err(schema(format!("{base}/nodes/{i}/weight"), "node weights need a weighted graph"));
        }
        let ids = self.ids();
        let mut links = Vec::with_capacity(self.links.len());
        for (i, l) in self.links.iter().enumerate() {
            if l.d_lo.is_some() || l.d_hi.is_some() {
                return Err(schema(format!("{base}/links/{i}"), "distinctness needs a weighted graph"));
            }
            let u = self.index(&ids, &l.u, format!("{base}/links/{i}/u"))?;
            let v = self.index(&ids, &l.v, format!("{base}/links/{i}/v"))?;
            links.push((u, v));
        }
        Ok(DistinctionGraph::from_indices(ids, &links)?)
    }

    /// Weighted graph; a link without `d_lo`/`d_hi` means `[0,0]`.
    pub fn to_weighted(&self, base: &str) -> FormatResult<WeightedDistinctionGraph> {
        self.reject_ddg_fields(base)?;
        let ids = self.ids();
        let weights: Option<Vec<i64>> = if self.nodes.iter().any(|n| n.weight.is_some()) {
            let mut w = Vec::with_capacity(self.nodes.len());
            for (i, n) in self.nodes.iter().enumerate() {
                w.push(n.weight.ok_or_else(|| schema(format!("{base}/nodes/{i}/weight"), "every node needs a weight"))?);
            }
            Some(w)
        } else {
            None
        };
        let mut wg = WeightedDistinctionGraph::new(ids.clone(), weights)?;
        for (i, l) in self.links.iter().enumerate() {
            let u = self.index(&ids, &l.u, format!("{base}/links/{i}/u"))?;
            let v = self.index(&ids, &l.v, format!("{base}/links/{i}/v"))?;
            let d = match (l.d_lo, l.d_hi) {
                (None, None) => IntervalWeight::ZERO,
                (Some(lo), Some(hi)) => IntervalWeight::new(lo, hi)?,
                _ => return Err(schema(format!("{base}/links/{i}"), "d_lo and d_hi go together")),
            };
            wg.set_distinctness(u, v, d)?;
        }
        Ok(wg)
    }

    /// DDG; undirected links become both directed links with `p = 1`.
    pub fn to_ddg(&self, base: &str) -> FormatResult<Ddg> {
        let ids = self.ids();
        if let Some(i) = self.nodes.iter().position(|n| n.weight.is_some()) {
            return Err(schema(format!("{base}/nodes/{i}/weight"), "node weights are not part of a DDG"));
        }
        let mut dlinks = Vec::new();
        for (i, l) in self.links.iter().enumerate() {
            if l.d_lo.is_some() || l.d_hi.is_some() {
                return Err(schema(format!("{base}/links/{i}"), "use dlinks for weighted DDG links"));
            }
            let u = self.index(&ids, &l.u, format!("{base}/links/{i}/u"))?;
            let v = self.index(&ids, &l.v, format!("{base}/links/{i}/v"))?;
            if u == v {
                return Err(Error::SelfLink(l.u.clone()).into());
            }
            dlinks.push(DLink::new(u, v, 1.0)?);
            dlinks.push(DLink::new(v, u, 1.0)?);
        }
        for (i, l) in self.dlinks.iter().flatten().enumerate() {
            let from = self.index(&ids, &l.from, format!("{base}/dlinks/{i}/from"))?;
            let to = self.index(&ids, &l.to, format!("{base}/dlinks/{i}/to"))?;
            let mut d = DLink::new(from, to, l.p)?;
            d.trend = match l.trend.unwrap_or(TrendRec::Steady) {
                TrendRec::Increasing => Trend::Increasing,
                TrendRec::Decreasing => Trend::Decreasing,
                TrendRec::Steady => Trend::Steady,
            };
            dlinks.push(d);
        }
        let mut rules = Vec::new();
        for (i, r) in self.rules.iter().flatten().enumerate() {
            let trig = |t: &TriggerRec, at: String| -> FormatResult<Trigger> {
                let target = match (&t.from, &t.to, t.rule) {
                    (Some(f), Some(to), None) => {
                        let f = self.index(&ids, f, format!("{at}/from"))?;
                        let to = self.index(&ids, to, format!("{at}/to"))?;
                        let l = dlinks
                            .iter()
                            .position(|d| d.from == f && d.to == to)
                            .ok_or_else(|| schema(at.clone(), "no such directed link"))?;
                        Target::Link(l)
                    }
                    (None, None, Some(j)) => Target::Rule(j),
                    _ => return Err(schema(at, "give either from/to or rule")),
                };
                let direction = match t.dir {
                    DirRec::More => Direction::More,
                    DirRec::Less => Direction::Less,
                };
                Ok(Trigger { target, direction })
            };
            rules.push(CausalRule {
                antecedent: trig(&r.ante, format!("{base}/rules/{i}/ante"))?,
                consequent: trig(&r.cons, format!("{base}/rules/{i}/cons"))?,
                multiplier: r.alpha,
                lag: r.lag,
                confidence: r.conf,
            });
        }
        let counts = if self.nodes.iter().any(|n| n.count.is_some()) {
            Some(self.nodes.iter().map(|n| n.count.unwrap_or(1)).collect())
        } else {
            None
        };
        Ok(Ddg::new(ids, counts, dlinks, rules)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyGraph {
    Plain(DistinctionGraph),
    Weighted(WeightedDistinctionGraph),
    Ddg(Ddg),
}

/// Graph file of any kind, detected from the fields present.
pub fn parse_graph(text: &str) -> FormatResult<AnyGraph> {
    let f: GraphFile = from_json(text)?;
    Ok(match f.kind() {
        GraphKind::Plain => AnyGraph::Plain(f.to_plain("")?),
        GraphKind::Weighted => AnyGraph::Weighted(f.to_weighted("")?),
        GraphKind::Ddg => AnyGraph::Ddg(f.to_ddg("")?),
    })
}

pub fn parse_plain_graph(text: &str) -> FormatResult<DistinctionGraph> {
    from_json::<GraphFile>(text)?.to_plain("")
}

pub fn parse_weighted_graph(text: &str) -> FormatResult<WeightedDistinctionGraph> {
    from_json::<GraphFile>(text)?.to_weighted("")
}

pub fn parse_ddg(text: &str) -> FormatResult<Ddg> {
    from_json::<GraphFile>(text)?.to_ddg("")
}

pub fn graph_file(g: &DistinctionGraph) -> GraphFile {
    let ids = g.nodes();
    GraphFile {
        nodes: ids.iter().map(|id| NodeRec { id: id.clone(), weight: None, count: None }).collect(),
        links: g
            .links()
            .into_iter()
            .map(|(u, v)| LinkRec { u: ids[u].clone(), v: ids[v].clone(), d_lo: None, d_hi: None })
            .collect(),
        dlinks: None,
        rules: None,
    }
}

/// Every stored pair is written with its interval.
pub fn weighted_file(wg: &WeightedDistinctionGraph) -> GraphFile {
    let ids = wg.nodes();
    let weights = wg.node_weights();
    GraphFile {
        nodes: ids
            .iter()
            .enumerate()
            .map(|(i, id)| NodeRec { id: id.clone(), weight: weights.map(|w| w[i]), count: None })
            .collect(),
        links: wg
            .stored_pairs()
            .map(|((u, v), d)| LinkRec { u: ids[u].clone(), v: ids[v].clone(), d_lo: Some(d.lo()), d_hi: Some(d.hi()) })
            .collect(),
        dlinks: None,
        rules: None,
    }
}

/// All directed links are written explicitly, so link indices survive a
/// round trip.
pub fn ddg_file(g: &Ddg) -> GraphFile {
    let ids = g.nodes();
    let trig = |t: &Trigger| {
        let dir = match t.direction {
            Direction::More => DirRec::More,
            Direction::Less => DirRec::Less,
        };
        match t.target {
            Target::Link(l) => {
                let d = &g.dlinks()[l];
                TriggerRec { from: Some(ids[d.from].clone()), to: Some(ids[d.to].clone()), rule: None, dir }
            }
            Target::Rule(r) => TriggerRec { from: None, to: None, rule: Some(r), dir },
        }
    };
    GraphFile {
        nodes: ids
            .iter()
            .zip(g.counts())
            .map(|(id, &c)| NodeRec { id: id.clone(), weight: None, count: Some(c) })
            .collect(),
        links: Vec::new(),
        dlinks: Some(
            g.dlinks()
                .iter()
                .map(|d| DLinkRec {
                    from: ids[d.from].clone(),
                    to: ids[d.to].clone(),
                    p: d.p(),
                    trend: Some(match d.trend {
                        Trend::Increasing => TrendRec::Increasing,
                        Trend::Decreasing => TrendRec::Decreasing,
                        Trend::Steady => TrendRec::Steady,
                    }),
                })
                .collect(),
        ),
        rules: Some(
            g.rules()
                .iter()
                .map(|r| RuleRec {
                    ante: trig(&r.antecedent),
                    cons: trig(&r.consequent),
                    alpha: r.multiplier,
                    lag: r.lag,
                    conf: r.confidence,
                })
                .collect(),
        ),
    }
}

pub fn rational_json(r: Rational) -> Value {
    json!({ "num": r.numer(), "den": r.denom() })
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistEntry {
    x: GraphFile,
    y: GraphFile,
    w: f64,
}

/// List of `{"x": <graph>, "y": <graph>, "w": <weight>}`.
pub fn parse_distribution(text: &str) -> FormatResult<GraphDistribution> {
    let entries: Vec<DistEntry> = from_json(text)?;
    let mut support = Vec::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        support.push((e.x.to_plain(&format!("/{i}/x"))?, e.y.to_plain(&format!("/{i}/y"))?, e.w));
    }
    Ok(GraphDistribution::new(support)?)
}

/// A complex number as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRec(pub f64, pub f64);

impl From<ComplexRec> for Complex64 {
    fn from(c: ComplexRec) -> Self {
        Complex64::new(c.0, c.1)
    }
}

impl From<Complex64> for ComplexRec {
    fn from(c: Complex64) -> Self {
        ComplexRec(c.re, c.im)
    }
}

/// Rows of `[re, im]` entries.
pub fn parse_density_matrix(text: &str) -> FormatResult<DensityMatrix> {
    let rows: Vec<Vec<ComplexRec>> = from_json(text)?;
    let n = rows.len();
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(schema(format!("/{i}"), format!("expected {n} entries")));
    }
    let m = CMatrix::from_fn(n, n, |i, j| rows[i][j].into());
    Ok(DensityMatrix::new(m)?)
}

pub fn matrix_json(m: &CMatrix) -> Value {
    let rows: Vec<Vec<ComplexRec>> =
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect()).collect();
    json!(rows)
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionsFile {
    actions: Vec<ComplexRec>,
    #[serde(default)]
    amplitudes: Option<Vec<ComplexRec>>,
    #[serde(default = "yes")]
    normalized: bool,
    #[serde(default)]
    expected: Option<ComplexRec>,
}

/// Actions with optional amplitudes (uniform when absent) and an optional
/// expected action.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionsInput {
    pub assignment: ActionAssignment,
    pub expected: Option<Complex64>,
}

pub fn parse_actions(text: &str) -> FormatResult<ActionsInput> {
    let f: ActionsFile = from_json(text)?;
    let actions: Vec<Complex64> = f.actions.into_iter().map(Into::into).collect();
    let assignment = match f.amplitudes {
        None => ActionAssignment::uniform(actions)?,
        Some(a) => ActionAssignment::new(actions, a.into_iter().map(Into::into).collect(), f.normalized)?,
    };
    Ok(ActionsInput { assignment, expected: f.expected.map(Into::into) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceLinkRec {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceFile {
    #[serde(default)]
    links: Option<Vec<TraceLinkRec>>,
    #[serde(default)]
    values: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    graphs: Option<Vec<GraphFile>>,
}

/// Either `{"links": [...], "values": [[...], ...]}` or `{"graphs": [...]}`
/// (a sequence of plain or weighted graphs on the same nodes).
pub fn parse_trace(text: &str) -> FormatResult<LinkTrace> {
    let f: TraceFile = from_json(text)?;
    match (f.links, f.values, f.graphs) {
        (Some(links), Some(values), None) => {
            let links = links.into_iter().map(|l| (l.from, l.to)).collect();
            Ok(LinkTrace::new(links, values)?)
        }
        (None, None, Some(graphs)) => {
            let mut seq = Vec::with_capacity(graphs.len());
            for (i, g) in graphs.iter().enumerate() {
                let base = format!("/graphs/{i}");
                seq.push(match g.kind() {
                    GraphKind::Plain => WeightedDistinctionGraph::from_graph(&g.to_plain(&base)?),
                    GraphKind::Weighted => g.to_weighted(&base)?,
                    GraphKind::Ddg => return Err(schema(base, "expected a plain or weighted graph")),
                });
            }
            Ok(LinkTrace::from_weighted(&seq)?)
        }
        _ => Err(schema("/", "give either links and values, or graphs")),
    }
}

pub fn trace_json(t: &LinkTrace) -> Value {
    let links: Vec<TraceLinkRec> =
        t.links.iter().map(|(f, to)| TraceLinkRec { from: f.clone(), to: to.clone() }).collect();
    json!({ "links": links, "values": t.values })
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct StimuliFile {
    #[serde(default)]
    sensors: Option<Vec<String>>,
    #[serde(default)]
    sensitivity: Option<Vec<f64>>,
    categories: BTreeMap<String, Vec<Vec<Vec<f64>>>>,
}

/// Observer sensors and, per category, its stimulus sequences. A sequence is
/// one intensity vector (one entry per DDG node) per step.
#[derive(Debug, Clone, PartialEq)]
pub struct StimuliInput {
    sensors: Option<Vec<String>>,
    sensitivity: Option<Vec<f64>>,
    pub categories: BTreeMap<String, Vec<Vec<Vec<f64>>>>,
}

impl StimuliInput {
    /// Sensors by node id, or a sensitivity per node; every node senses fully
    /// when neither is given.
    pub fn observer(&self, ddg: &Ddg) -> FormatResult<ObserverSpec> {
        match (&self.sensors, &self.sensitivity) {
            (Some(ids), None) => {
                let mut idx = Vec::with_capacity(ids.len());
                for (i, id) in ids.iter().enumerate() {
                    idx.push(ddg.index_of(id).ok_or_else(|| schema(format!("/sensors/{i}"), format!("unknown node {id:?}")))?);
                }
                Ok(ObserverSpec::with_sensors(ddg.clone(), &idx)?)
            }
            (None, Some(s)) => Ok(ObserverSpec::new(ddg.clone(), s.clone())?),
            (None, None) => Ok(ObserverSpec::new(ddg.clone(), vec![1.0; ddg.nodes().len()])?),
            (Some(_), Some(_)) => Err(schema("/", "give sensors or sensitivity, not both")),
        }
    }
}

pub fn parse_stimuli(text: &str) -> FormatResult<StimuliInput> {
    let f: StimuliFile = from_json(text)?;
    Ok(StimuliInput { sensors: f.sensors, sensitivity: f.sensitivity, categories: f.categories })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantumLinkRec {
    source: usize,
    target: usize,
    alpha: ComplexRec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantumFile {
    n: usize,
    links: Vec<QuantumLinkRec>,
}

/// `{"n": dim, "links": [{"source", "target", "alpha": [re, im]}]}`.
pub fn parse_quantum_links(text: &str) -> FormatResult<(usize, Vec<QuantumCausalLink>)> {
    let f: QuantumFile = from_json(text)?;
    let links = f
        .links
        .into_iter()
        .map(|l| QuantumCausalLink { source: l.source, target: l.target, alpha: l.alpha.into() })
        .collect();
    Ok((f.n, links))
}

pub fn quantum_links_json(n: usize, links: &[QuantumCausalLink]) -> Value {
    let links: Vec<QuantumLinkRec> =
        links.iter().map(|l| QuantumLinkRec { source: l.source, target: l.target, alpha: l.alpha.into() }).collect();
    json!(QuantumFile { n, links })
}
