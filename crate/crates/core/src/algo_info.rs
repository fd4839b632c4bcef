//! Graphtropy and algorithmic information.
//!
//! Two kinds of numbers live here and are kept apart: closed-form
//! *predictions* (`1 − 2^(K−M−1)` and its compressible variant, evaluated as
//! written, out-of-range results flagged rather than clamped) and *measured*
//! values from a bounded-observer simulation. The simulated observer is a
//! seeded random GF(2) projection of each bit string onto `K` bits, so it can
//! tell apart at most `2^K` classes of states.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{self, DistinctionGraph};
use crate::rng::{seeded, SimRng};
use crate::Rational;

/// A predicted graphtropy and whether it lies in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub value: f64,
    pub in_range: bool,
}

impl Prediction {
    fn new(value: f64) -> Self {
        Prediction { value, in_range: (0.0..=1.0).contains(&value) }
    }
}

/// `1 − 2^(K−M−1)` for observer complexity `K` and state complexity `M` (bits).
pub fn predicted_graphtropy(k: u64, m: u64) -> Prediction {
    let exp = k as f64 - m as f64 - 1.0;
    Prediction::new(1.0 - exp.exp2())
}

/// `1 − 2^(K − S/D − 1)` for states of size `S` with compression ratio `D ≥ 1`.
pub fn predicted_graphtropy_compressible(k: u64, s: f64, d: f64) -> Result<Prediction> {
    if !(d >= 1.0) {
        return Err(Error::InvalidCompressionRatio(d));
    }
    Ok(Prediction::new(1.0 - (k as f64 - s / d - 1.0).exp2()))
}

/// Collision-based distinction rate of a uniform observer with `2^K` cells.
pub fn uniform_observer_graphtropy(k: u32) -> f64 {
    1.0 - (-(k as f64)).exp2()
}

/// Energy levels and the fraction of nodes at each.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    values: Vec<i64>,
    fractions: Vec<Rational>,
}

impl EnergySpectrum {
    pub fn new(values: Vec<i64>, fractions: Vec<Rational>) -> Result<Self> {
        if values.len() != fractions.len() || values.is_empty() {
            return Err(Error::InvalidParameter("spectrum values and fractions differ in length".into()));
        }
        let total: Rational = fractions.iter().sum();
        if total != Rational::from_integer(1) || fractions.iter().any(|f| *f < Rational::from_integer(0)) {
            return Err(Error::BadDistribution(format!("fractions sum to {total}")));
        }
        Ok(EnergySpectrum { values, fractions })
    }

    /// Distinct node weights with their exact node fractions, in ascending order.
    pub fn from_weights(weights: &[i64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyList);
        }
        let mut counts = std::collections::BTreeMap::new();
        for &w in weights {
            *counts.entry(w).or_insert(0i64) += 1;
        }
        let n = weights.len() as i64;
        let (values, fractions) = counts.into_iter().map(|(v, c)| (v, Rational::new(c, n))).unzip();
        Ok(EnergySpectrum { values, fractions })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn fractions(&self) -> &[Rational] {
        &self.fractions
    }

    /// `Σ_j E_j p(E_j)`.
    pub fn energy(&self) -> Rational {
        self.values.iter().zip(&self.fractions).map(|(&v, f)| f * v).sum()
    }
}

/// `(Σ v_i) / N`.
pub fn graph_energy(weights: &[i64]) -> Result<Rational> {
    if weights.is_empty() {
        return Err(Error::EmptyList);
    }
    Ok(Rational::new(weights.iter().sum(), weights.len() as i64))
}

/// Deterministic lossless compressor over bit strings; compressed length is a
/// computable upper-bound proxy for algorithmic information.
pub trait Compressor {
    fn compress(&self, bits: &[bool]) -> Vec<bool>;
}

pub fn compressor_complexity<C: Compressor + ?Sized>(c: &C, bits: &[bool]) -> usize {
    c.compress(bits).len()
}

/// Bit-level LZ77 with Elias-gamma coded lengths.
///
/// Stream: `γ(n+1)` header, then tokens. `0 γ(len) <len raw bits>` is a literal
/// run; `1 γ(dist) γ(len)` copies `len` bits starting `dist` back (overlap
/// allowed). A match is taken only when it is shorter than the bits it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lz77Bits {
    pub window: usize,
}

impl Default for Lz77Bits {
    fn default() -> Self {
        Lz77Bits { window: 4096 }
    }
}

fn gamma_len(x: usize) -> usize {
    2 * (usize::BITS - 1 - x.leading_zeros()) as usize + 1
}

fn put_gamma(out: &mut Vec<bool>, x: usize) {
    debug_assert!(x >= 1);
    let bits = (usize::BITS - x.leading_zeros()) as usize;
    out.extend(std::iter::repeat_n(false, bits - 1));
    for i in (0..bits).rev() {
        out.push(x >> i & 1 == 1);
    }
}

fn get_gamma(bits: &[bool], pos: &mut usize) -> Option<usize> {
    let mut zeros = 0;
    while !*bits.get(*pos)? {
        zeros += 1;
        *pos += 1;
        if zeros >= usize::BITS as usize {
            return None;
        }
    }
    let mut x = 0usize;
    for _ in 0..=zeros {
        x = x << 1 | *bits.get(*pos)? as usize;
        *pos += 1;
    }
    Some(x)
}

impl Lz77Bits {
    fn flush(out: &mut Vec<bool>, run: &mut Vec<bool>) {
        if !run.is_empty() {
            out.push(false);
            put_gamma(out, run.len());
            out.append(run);
        }
    }

    /// Inverse of [`Compressor::compress`]; `None` on a malformed stream.
    pub fn decompress(&self, bits: &[bool]) -> Option<Vec<bool>> {
        self.decompress_limited(bits, usize::MAX)
    }

    /// Like [`Lz77Bits::decompress`], but also `None` when the stream declares
    /// more than `max_len` output bits. Use this on untrusted input.
    pub fn decompress_limited(&self, bits: &[bool], max_len: usize) -> Option<Vec<bool>> {
        let mut pos = 0;
        let n = get_gamma(bits, &mut pos)?.checked_sub(1)?;
        if n > max_len {
            return None;
        }
        let mut out = Vec::with_capacity(n.min(bits.len().saturating_mul(64)));
        while out.len() < n {
            let flag = *bits.get(pos)?;
            pos += 1;
            let len = get_gamma(bits, &mut pos)?;
            if flag {
                let dist = len;
                let len = get_gamma(bits, &mut pos)?;
                if dist > out.len() || out.len().checked_add(len)? > n {
                    return None;
                }
                let start = out.len() - dist;
                for i in 0..len {
                    let b = out[start + i];
                    out.push(b);
                }
            } else {
                if out.len().checked_add(len)? > n {
                    return None;
                }
                out.extend_from_slice(bits.get(pos..pos.checked_add(len)?)?);
                pos += len;
            }
        }
        (pos == bits.len()).then_some(out)
    }
}

impl Compressor for Lz77Bits {
    fn compress(&self, bits: &[bool]) -> Vec<bool> {
        let n = bits.len();
        let mut out = Vec::new();
        put_gamma(&mut out, n + 1);
        let mut run = Vec::new();
        let mut i = 0;
        while i < n {
            let (mut best_len, mut best_dist) = (0, 0);
            for dist in 1..=i.min(self.window) {
                let start = i - dist;
                let mut len = 0;
                while i + len < n && bits[start + len] == bits[i + len] {
                    len += 1;
                }
                if len > best_len {
                    (best_len, best_dist) = (len, dist);
                    if i + len == n {
                        break;
                    }
                }
            }
            if best_len > 0 && 1 + gamma_len(best_dist) + gamma_len(best_len) < best_len {
                Self::flush(&mut out, &mut run);
                out.push(true);
                put_gamma(&mut out, best_dist);
                put_gamma(&mut out, best_len);
                i += best_len;
            } else {
                run.push(bits[i]);
                i += 1;
            }
        }
        Self::flush(&mut out, &mut run);
        out
    }
}

/// Largest observer size accepted by the simulation.
pub const MAX_OBSERVER_BITS: u32 = 24;

/// Seeded random linear map from bit strings onto `k`-bit cell labels.
#[derive(Debug, Clone)]
pub struct RandomProjection {
    rows: Vec<Vec<u64>>,
}

fn pack(bits: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

impl RandomProjection {
    pub fn new(k: u32, max_len: usize, rng: &mut SimRng) -> Result<Self> {
        if k > MAX_OBSERVER_BITS {
            return Err(Error::TooManyCells(k));
        }
        let words = max_len.div_ceil(64);
        let rows = (0..k).map(|_| (0..words).map(|_| rng.random::<u64>()).collect()).collect();
        Ok(RandomProjection { rows })
    }

    /// Cell of a state: bit `j` is the parity of `row_j · x`. States are
    /// zero-padded to the projection width.
    pub fn cell(&self, state: &[bool]) -> u32 {
        let x = pack(state);
        let mut cell = 0u32;
        for (j, row) in self.rows.iter().enumerate() {
            let parity = row.iter().zip(&x).map(|(r, w)| (r & w).count_ones()).sum::<u32>() & 1;
            cell |= parity << j;
        }
        cell
    }
}

/// Result of projecting states through a bounded observer.
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverGraph {
    pub graph: DistinctionGraph,
    pub cells: Vec<u32>,
    pub measured: Rational,
}

/// Nodes are the states (named `s0, s1, ...`); two states are linked iff the
/// observer puts them in the same cell.
pub fn empirical_observer_graph(states: &[Vec<bool>], k: u32, seed: u64) -> Result<ObserverGraph> {
    if states.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut rng = seeded(seed);
    let width = states.iter().map(Vec::len).max().unwrap_or(0);
    let proj = RandomProjection::new(k, width, &mut rng)?;
    let cells: Vec<u32> = states.iter().map(|s| proj.cell(s)).collect();
    let nodes = (0..states.len()).map(|i| format!("s{i}")).collect();
    let graph = DistinctionGraph::from_labels(nodes, &cells)?;
    let measured = graph::graphtropy(&graph)?;
    Ok(ObserverGraph { graph, cells, measured })
}

/// Uniform random bit strings of a fixed length.
pub fn random_states(n: usize, bits: usize, rng: &mut SimRng) -> Vec<Vec<bool>> {
    (0..n).map(|_| (0..bits).map(|_| rng.random::<bool>()).collect()).collect()
}

/// One predicted-versus-measured comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRow {
    pub k: u32,
    pub state_bits: usize,
    pub n_states: usize,
    /// `1 − 2^(K−M−1)` with `M` the state length.
    pub predicted: Prediction,
    /// `1 − 2^(−K)`.
    pub uniform: f64,
    pub measured: Rational,
}

/// Random states of `state_bits` bits projected by a `k`-bit observer.
/// States and projection use independent streams of the same seed.
pub fn simulate_observer(n_states: usize, state_bits: usize, k: u32, seed: u64) -> Result<SimulationRow> {
    let mut rng = crate::rng::seeded_stream(seed, 1);
    let states = random_states(n_states, state_bits, &mut rng);
    let obs = empirical_observer_graph(&states, k, seed)?;
    Ok(SimulationRow {
        k,
        state_bits,
        n_states,
        predicted: predicted_graphtropy(k as u64, state_bits as u64),
        uniform: uniform_observer_graphtropy(k),
        measured: obs.measured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::to_f64;

    #[test]
    fn predictions() {
        let p = predicted_graphtropy(3, 10);
        assert_eq!(p.value, 0.99609375);
        assert!(p.in_range);
        assert_eq!(predicted_graphtropy(11, 10).value, 0.0);
        let p = predicted_graphtropy(13, 10);
        assert_eq!(p.value, -3.0);
        assert!(!p.in_range);

        assert_eq!(predicted_graphtropy_compressible(2, 16.0, 2.0).unwrap().value, 0.9921875);
        assert_eq!(predicted_graphtropy_compressible(3, 10.0, 1.0).unwrap(), predicted_graphtropy(3, 10));
        assert_eq!(predicted_graphtropy_compressible(3, 1e6, 1.0).unwrap().value, 1.0);
        assert_eq!(predicted_graphtropy_compressible(3, 10.0, 0.5), Err(Error::InvalidCompressionRatio(0.5)));
    }

    #[test]
    fn energies() {
        assert_eq!(graph_energy(&[1, 2, 3]).unwrap(), Rational::from_integer(2));
        assert_eq!(graph_energy(&[7; 5]).unwrap(), Rational::from_integer(7));
        assert_eq!(graph_energy(&[]), Err(Error::EmptyList));
        let s = EnergySpectrum::new(vec![1, 3], vec![Rational::new(1, 2), Rational::new(1, 2)]).unwrap();
        assert_eq!(s.energy(), graph_energy(&[1, 1, 3, 3]).unwrap());
        assert_eq!(EnergySpectrum::from_weights(&[1, 1, 3, 3]).unwrap(), s);
        assert!(EnergySpectrum::new(vec![1], vec![Rational::new(1, 2)]).is_err());
    }

    #[test]
    fn compressor_examples() {
        let c = Lz77Bits::default();
        let empty = c.compress(&[]);
        assert_eq!(empty, vec![true]);

        let periodic: Vec<bool> = (0..2048).map(|i| i % 2 == 1).collect();
        let len = compressor_complexity(&c, &periodic);
        assert!(len * 4 < periodic.len(), "{len}");
        assert_eq!(c.decompress(&c.compress(&periodic)).unwrap(), periodic);

        let random = random_states(1, 1024, &mut seeded(11)).pop().unwrap();
        let len = compressor_complexity(&c, &random);
        assert!(len >= 1024 - 32, "{len}");
        assert_eq!(c.decompress(&c.compress(&random)).unwrap(), random);
        assert_eq!(compressor_complexity(&c, &random), len);
    }

    #[test]
    fn decompress_rejects_garbage() {
        let c = Lz77Bits::default();
        assert_eq!(c.decompress(&[]), None);
        assert_eq!(c.decompress(&[false, false]), None);
        // header claims 2 bits, match reaches back past the start
        let mut bad = Vec::new();
        put_gamma(&mut bad, 3);
        bad.push(true);
        put_gamma(&mut bad, 5);
        put_gamma(&mut bad, 2);
        assert_eq!(c.decompress(&bad), None);
        // literal run whose length would overflow the position
        let mut huge = Vec::new();
        put_gamma(&mut huge, usize::MAX);
        huge.push(false);
        put_gamma(&mut huge, usize::MAX - 1);
        assert_eq!(c.decompress(&huge), None);
    }

    #[test]
    fn limited_decompress_checks_declared_length() {
        let c = Lz77Bits::default();
        let bits = vec![true; 500];
        let z = c.compress(&bits);
        assert_eq!(c.decompress_limited(&z, 500), Some(bits));
        assert_eq!(c.decompress_limited(&z, 499), None);
    }

    #[test]
    fn observer_graph_examples() {
        let states = random_states(20, 16, &mut seeded(3));
        let g = empirical_observer_graph(&states, 0, 5).unwrap();
        assert_eq!(g.graph.link_count(), 20 * 19 / 2);
        assert_eq!(g.measured, Rational::from_integer(0));

        let same = vec![vec![true, false, true]; 2];
        for seed in 0..20 {
            assert!(empirical_observer_graph(&same, 8, seed).unwrap().graph.is_linked(0, 1));
        }
        assert_eq!(empirical_observer_graph(&same, 40, 0), Err(Error::TooManyCells(40)));
    }

    #[test]
    fn observer_graph_matches_cell_collision_count() {
        let states = random_states(256, 32, &mut seeded(17));
        let obs = empirical_observer_graph(&states, 4, 17).unwrap();
        // oracle: count colliding ordered pairs straight from the cell labels
        let n = states.len();
        let mut same = 0;
        for a in 0..n {
            for b in 0..n {
                if a != b && obs.cells[a] == obs.cells[b] {
                    same += 1;
                }
            }
        }
        assert_eq!(obs.measured, Rational::new((n * n - n - same) as i64, (n * n) as i64));
        assert!((to_f64(obs.measured) - uniform_observer_graphtropy(4)).abs() <= 0.02);
    }
}
