use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use graphtropy::algo_info::{self, EnergySpectrum};
use graphtropy::automorphism::{self, SearchLimits};
use graphtropy::ddg::{self, Direction, MiningParams, Target, Trigger};
use graphtropy::dist::{self, ReferencePair, Side};
use graphtropy::format::{self, rational_json, FormatError};
use graphtropy::graph::{self, PartitionView};
use graphtropy::thermo::{self, PermutationSet, StructuralConstraint, WeightingConstraint};
use graphtropy::weighted::{self, EpsilonParams};
use graphtropy::{observer, quantum, to_f64, DistinctionGraph, Rational};
use nalgebra::DVector;
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::*;

pub const BUDGET_ENV: &str = "GRAPHTROPY_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Domain(#[from] graphtropy::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn input<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Input(msg.into()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn limits() -> CliResult<SearchLimits> {
    match std::env::var(BUDGET_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(SearchLimits::default()),
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(b) if b > 0 => Ok(SearchLimits::with_budget(b)),
            _ => input(format!("{BUDGET_ENV} must be a positive integer, got {v:?}")),
        },
        Err(e) => input(format!("{BUDGET_ENV}: {e}")),
    }
}

fn plain(path: &Path) -> CliResult<DistinctionGraph> {
    Ok(format::parse_plain_graph(&read(path)?)?)
}

fn graph_json(g: &DistinctionGraph) -> Value {
    serde_json::to_value(format::graph_file(g)).expect("graph file serializes")
}

/// Infinite and NaN floats become `null`.
fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn emit_json(v: Value) -> String {
    let mut s = serde_json::to_string(&v).expect("json value serializes");
    s.push('\n');
    s
}

enum Report {
    Json(Value),
    /// Rows plus the seed echoed in a leading comment line.
    Table { seed: u64, header: Vec<&'static str>, rows: Vec<Vec<String>>, json: Value },
}

fn render(r: Report, format: Option<OutputFormat>) -> CliResult<String> {
    match (r, format) {
        (Report::Json(v), None | Some(OutputFormat::Json)) => Ok(emit_json(v)),
        (Report::Json(_), Some(OutputFormat::Csv)) => input("csv output is only available for simulations"),
        (Report::Table { json, .. }, Some(OutputFormat::Json)) => Ok(emit_json(json)),
        (Report::Table { seed, header, rows, .. }, None | Some(OutputFormat::Csv)) => {
            let mut w = csv::Writer::from_writer(format!("# seed={seed}\n").into_bytes());
            let io = |e: csv::Error| CliError::Input(e.to_string());
            w.write_record(&header).map_err(io)?;
            for row in rows {
                w.write_record(&row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn dispatch(cmd: Command, format: Option<OutputFormat>) -> CliResult<String> {
    let report = match cmd {
        Command::Compute(a) => {
            let g = plain(&a.input)?;
            Report::Json(json!({ "graphtropy": rational_json(graph::graphtropy(&g)?) }))
        }
        Command::Conditional(a) => {
            let (g, h) = (plain(&a.g)?, plain(&a.h)?);
            Report::Json(json!({ "conditional": rational_json(graph::conditional_graphtropy(&g, &h)?) }))
        }
        Command::Mutual(a) => {
            let (g, h) = (plain(&a.g)?, plain(&a.h)?);
            Report::Json(json!({ "mutual": rational_json(graph::mutual_graphtropy(&g, &h)?) }))
        }
        Command::Product(a) => {
            let (g, h) = (plain(&a.g)?, plain(&a.h)?);
            let p = graph::conormal_product(&g, &h);
            Report::Json(json!({ "graph": graph_json(&p), "graphtropy": rational_json(graph::graphtropy(&p)?) }))
        }
        Command::Union(a) => {
            let (g, h) = (plain(&a.g)?, plain(&a.h)?);
            let u = graph::disjoint_union(&g, &h);
            Report::Json(json!({
                "graph": graph_json(&u),
                "graphtropy": rational_json(graph::graphtropy(&u)?),
                "weighted_mean": rational_json(graph::union_graphtropy_weighted_mean(&g, &h)?),
            }))
        }
        Command::Partition(a) => partition(a)?,
        Command::Weighted(a) => weighted(a)?,
        Command::Dist(a) => distribution(a)?,
        Command::Thermo(c) => thermo_cmd(c)?,
        Command::Algoinfo(c) => algo(c)?,
        Command::Secondlaw(c) => second_law(c)?,
        Command::Mep(MepCommand::Run(a)) => mep(a)?,
        Command::Ddg(c) => ddg_cmd(c)?,
        Command::Quantum(c) => quantum_cmd(c)?,
    };
    render(report, format)
}

fn partition(a: PartitionArgs) -> CliResult<Report> {
    let (view, ids) = match (a.input, a.sizes) {
        (Some(path), _) => {
            let g = plain(&path)?;
            (graph::as_partition(&g)?, g.nodes().to_vec())
        }
        (None, Some(sizes)) => {
            let view = PartitionView::from_sizes(&sizes)?;
            let ids = graph::default_ids(view.node_count());
            (view, ids)
        }
        (None, None) => return input("give --input or --sizes"),
    };
    let cells: Vec<Vec<&str>> = view.cells().iter().map(|c| c.iter().map(|&i| ids[i].as_str()).collect()).collect();
    let probs: Vec<Value> = view.probabilities().into_iter().map(rational_json).collect();
    Ok(Report::Json(json!({
        "cells": cells,
        "sizes": view.sizes(),
        "probabilities": probs,
        "logical_entropy": rational_json(graph::logical_entropy(&view)),
    })))
}

fn weighted(a: WeightedArgs) -> CliResult<Report> {
    let wg = format::parse_weighted_graph(&read(&a.input)?)?;
    let h = weighted::weighted_graphtropy(&wg)?;
    let mut out = json!({ "graphtropy": { "lo": h.lo(), "hi": h.hi() } });
    if let (Some(perm), Some(eps)) = (a.perm, a.eps) {
        let &[e1, e2, e3] = eps.as_slice() else {
            return input("--eps takes exactly three values");
        };
        let params = EpsilonParams::new(e1, e2, e3)?;
        out["epsilon_automorphism"] = json!(weighted::epsilon_automorphism_check(&wg, &perm, &params)?);
    }
    Ok(Report::Json(out))
}

fn pair(ids: &[String], given: &[String], flag: &str) -> CliResult<(usize, usize)> {
    let [u, v] = given else {
        return input(format!("--{flag} takes two node ids"));
    };
    let find = |id: &String| {
        ids.iter().position(|x| x == id).ok_or_else(|| CliError::Input(format!("--{flag}: unknown node {id:?}")))
    };
    Ok((find(u)?, find(v)?))
}

fn distribution(a: DistArgs) -> CliResult<Report> {
    let d = format::parse_distribution(&read(&a.input)?)?;
    let mut out = json!({
        "x_average": real(dist::dist_h_average(&d, Side::X)),
        "y_average": real(dist::dist_h_average(&d, Side::Y)),
    });
    let rx = match &a.x {
        Some(x) => {
            let (u, v) = pair(d.x_nodes(), x, "x")?;
            Some(ReferencePair::x(u, v))
        }
        None => None,
    };
    let ry = match &a.y {
        Some(y) => {
            let (u, v) = pair(d.y_nodes(), y, "y")?;
            Some(ReferencePair::y(u, v))
        }
        None => None,
    };
    if let Some(rx) = &rx {
        out["h_x"] = real(dist::dist_h(&d, rx)?);
    }
    if let Some(ry) = &ry {
        out["h_y"] = real(dist::dist_h(&d, ry)?);
    }
    if let (Some(rx), Some(ry)) = (&rx, &ry) {
        out["joint"] = real(dist::dist_joint_h(&d, rx, ry)?);
        out["mutual"] = real(dist::dist_mutual(&d, rx, ry)?);
    }
    Ok(Report::Json(out))
}

fn structure(s: &str) -> CliResult<StructuralConstraint> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| x.parse::<f64>().map_err(|_| CliError::Input(format!("bad number {x:?} in --structure")));
    match parts.as_slice() {
        ["none"] => Ok(StructuralConstraint::None),
        ["partition"] => Ok(StructuralConstraint::PartitionGraph),
        ["maxdeg", m] => m
            .parse()
            .map(StructuralConstraint::MaxDegree)
            .map_err(|_| CliError::Input(format!("bad degree {m:?} in --structure"))),
        ["graphtropy", t, tol] => Ok(StructuralConstraint::Graphtropy { target: num(t)?, tolerance: num(tol)? }),
        _ => input(format!("unknown structure {s:?}")),
    }
}

fn thermo_cmd(c: ThermoCommand) -> CliResult<Report> {
    let limits = limits()?;
    Ok(Report::Json(match c {
        ThermoCommand::Autos(a) => {
            let g = plain(&a.input)?;
            let group = automorphism::automorphisms(&g, limits)?;
            let orbits: Vec<Vec<&str>> = automorphism::orbits(g.len(), &group)
                .iter()
                .map(|o| o.iter().map(|&i| g.nodes()[i].as_str()).collect())
                .collect();
            json!({
                "automorphisms": group.len(),
                "microstate_entropy": real((group.len() as f64).ln()),
                "orbits": orbits,
            })
        }
        ThermoCommand::Maxlik(a) => {
            let g = plain(&a.input)?;
            let constraint = WeightingConstraint { target_sum: a.k, structural: structure(&a.structure)? };
            let ml = thermo::max_likelihood_weighting(&g, &a.alphabet, &constraint, limits)?;
            let optima: Vec<&[i64]> = ml.optima.iter().map(|w| w.values()).collect();
            json!({ "automorphisms": ml.automorphisms, "optima": optima })
        }
        ThermoCommand::Gibbs(a) => {
            let view = PartitionView::from_sizes(&a.sizes)?;
            let s = thermo::gibbs_reference(&view, &a.values, a.k)?;
            json!({
                "beta": real(s.beta),
                "boundary": s.boundary,
                "mean": real(s.mean),
                "probabilities": s.probabilities.iter().map(|&p| real(p)).collect::<Vec<_>>(),
            })
        }
        ThermoCommand::Wdist(a) => {
            let wg = format::parse_weighted_graph(&read(&a.input)?)?;
            let set = if a.full { PermutationSet::Full } else { PermutationSet::SupportAutomorphisms };
            json!({ "distance": real(thermo::weighted_automorphism_distance(&wg, set, limits)?) })
        }
    }))
}

fn algo(c: AlgoCommand) -> CliResult<Report> {
    match c {
        AlgoCommand::Predict(a) => {
            let p = match (a.m, a.s, a.d) {
                (Some(m), _, _) => algo_info::predicted_graphtropy(a.k, m),
                (None, Some(s), Some(d)) => algo_info::predicted_graphtropy_compressible(a.k, s, d)?,
                _ => return input("give --m, or --s and --d"),
            };
            Ok(Report::Json(json!({ "predicted": real(p.value), "in_range": p.in_range })))
        }
        AlgoCommand::Simulate(a) => {
            if a.k.is_empty() {
                return input("--k needs at least one value");
            }
            let mut rows = Vec::new();
            let mut json_rows = Vec::new();
            for &k in &a.k {
                let r = algo_info::simulate_observer(a.states, a.bits, k, a.seed)?;
                let measured = to_f64(r.measured);
                rows.push(vec![
                    r.k.to_string(),
                    r.state_bits.to_string(),
                    r.n_states.to_string(),
                    r.predicted.value.to_string(),
                    r.predicted.in_range.to_string(),
                    r.uniform.to_string(),
                    r.measured.numer().to_string(),
                    r.measured.denom().to_string(),
                    measured.to_string(),
                ]);
                json_rows.push(json!({
                    "k": r.k,
                    "state_bits": r.state_bits,
                    "n_states": r.n_states,
                    "predicted": real(r.predicted.value),
                    "in_range": r.predicted.in_range,
                    "uniform": real(r.uniform),
                    "measured": rational_json(r.measured),
                }));
            }
            Ok(Report::Table {
                seed: a.seed,
                header: vec![
                    "k",
                    "state_bits",
                    "n_states",
                    "predicted",
                    "in_range",
                    "uniform",
                    "measured_num",
                    "measured_den",
                    "measured",
                ],
                rows,
                json: json!({ "seed": a.seed, "rows": json_rows }),
            })
        }
        AlgoCommand::Energy(a) => {
            let spectrum = EnergySpectrum::from_weights(&a.weights)?;
            let fractions: Vec<Value> = spectrum.fractions().iter().map(|&f| rational_json(f)).collect();
            Ok(Report::Json(json!({
                "energy": rational_json(algo_info::graph_energy(&a.weights)?),
                "values": spectrum.values(),
                "fractions": fractions,
            })))
        }
    }
}

fn ratio_cells(r: Rational) -> [String; 3] {
    [r.numer().to_string(), r.denom().to_string(), to_f64(r).to_string()]
}

fn second_law(c: SecondLawCommand) -> CliResult<Report> {
    let (args, traj) = match c {
        SecondLawCommand::Run(a) => {
            let t = observer::run_second_law_sim(a.nodes, a.steps, a.flip, a.seed)?;
            (a, t)
        }
        SecondLawCommand::Forget(a) => {
            let t = observer::run_forgetting_sim(a.run.nodes, a.run.steps, a.run.flip, a.forget, a.run.seed)?;
            (a.run, t)
        }
    };
    let mut violations = 0usize;
    let mut rows = Vec::with_capacity(traj.graphtropy.len());
    for (step, &h) in traj.graphtropy.iter().enumerate() {
        if traj.violations.binary_search(&step).is_ok() {
            violations += 1;
        }
        let [num, den, val] = ratio_cells(h);
        rows.push(vec![step.to_string(), num, den, val, violations.to_string()]);
    }
    let values: Vec<Value> = traj.graphtropy.iter().map(|&h| rational_json(h)).collect();
    Ok(Report::Table {
        seed: args.seed,
        header: vec!["step", "graphtropy_num", "graphtropy_den", "graphtropy", "violations"],
        rows,
        json: json!({ "seed": args.seed, "graphtropy": values, "violations": traj.violations }),
    })
}

fn mep(a: MepArgs) -> CliResult<Report> {
    let traj = observer::run_mep_sim(a.nodes, a.events, a.seed)?;
    let rows = traj
        .steps
        .iter()
        .enumerate()
        .map(|(t, s)| {
            let [num, den, val] = ratio_cells(s.logical);
            vec![t.to_string(), s.cells.to_string(), num, den, val, s.shannon_nats.to_string()]
        })
        .collect();
    let steps: Vec<Value> = traj
        .steps
        .iter()
        .map(|s| json!({ "cells": s.cells, "logical": rational_json(s.logical), "shannon_nats": real(s.shannon_nats) }))
        .collect();
    Ok(Report::Table {
        seed: a.seed,
        header: vec!["step", "cells", "logical_num", "logical_den", "logical", "shannon_nats"],
        rows,
        json: json!({ "seed": a.seed, "steps": steps }),
    })
}

fn push_arg(d: &ddg::Ddg, s: &str) -> CliResult<(usize, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    let [from, to, amount] = parts.as_slice() else {
        return input(format!("--push expects from,to,amount, got {s:?}"));
    };
    let idx = |id: &str| d.index_of(id).ok_or_else(|| CliError::Input(format!("--push: unknown node {id:?}")));
    let (u, v) = (idx(from)?, idx(to)?);
    let link = d.link_index(u, v).ok_or_else(|| CliError::Input(format!("--push: no dlink {from}->{to}")))?;
    let amount = amount.parse().map_err(|_| CliError::Input(format!("--push: bad amount {amount:?}")))?;
    Ok((link, amount))
}

fn trigger_json(links: &[(String, String)], t: &Trigger) -> Value {
    let dir = match t.direction {
        Direction::More => "more",
        Direction::Less => "less",
    };
    match t.target {
        Target::Link(l) => json!({ "from": links[l].0, "to": links[l].1, "dir": dir }),
        Target::Rule(r) => json!({ "rule": r, "dir": dir }),
    }
}

fn ddg_json(d: &ddg::Ddg) -> Value {
    serde_json::to_value(format::ddg_file(d)).expect("ddg file serializes")
}

fn ddg_cmd(c: DdgCommand) -> CliResult<Report> {
    Ok(Report::Json(match c {
        DdgCommand::Step(a) => {
            let d = format::parse_ddg(&read(&a.input)?)?;
            let mut stimuli = vec![Vec::new(); a.steps];
            let pushes = a.push.iter().map(|p| push_arg(&d, p)).collect::<CliResult<Vec<_>>>()?;
            match stimuli.first_mut() {
                Some(first) => *first = pushes,
                None if !pushes.is_empty() => return input("--push needs --steps ≥ 1"),
                None => {}
            }
            let (next, trace) = d.run(a.delta, &stimuli)?;
            json!({ "ddg": ddg_json(&next), "trace": format::trace_json(&trace) })
        }
        DdgCommand::Mine(a) => {
            let trace = format::parse_trace(&read(&a.input)?)?;
            let params = MiningParams { min_confidence: a.min_confidence, max_lag: a.max_lag, min_support: a.min_support };
            let rules: Vec<Value> = ddg::mine_rules(&trace, &params)?
                .iter()
                .map(|m| {
                    json!({
                        "ante": trigger_json(&trace.links, &m.rule.antecedent),
                        "cons": trigger_json(&trace.links, &m.rule.consequent),
                        "alpha": real(m.rule.multiplier),
                        "lag": m.rule.lag,
                        "conf": real(m.rule.confidence),
                        "support": m.support,
                    })
                })
                .collect();
            json!({ "rules": rules })
        }
        DdgCommand::Observe(a) => {
            let d = format::parse_ddg(&read(&a.input)?)?;
            let stimuli = format::parse_stimuli(&read(&a.stimuli)?)?;
            let obs = stimuli.observer(&d)?;
            let g = ddg::derive_observer_graph(&obs, &stimuli.categories, a.delta, a.tolerance)?;
            json!({ "graph": graph_json(&g), "graphtropy": rational_json(graph::graphtropy(&g)?) })
        }
        DdgCommand::Complexity(a) => {
            let d = format::parse_ddg(&read(&a.input)?)?;
            let mut out = BTreeMap::new();
            for (i, id) in d.nodes().iter().enumerate() {
                out.insert(id.clone(), ddg::node_complexity(&d, i)?);
            }
            json!({ "complexity": out })
        }
        DdgCommand::Quantum(a) => {
            let (n, links) = format::parse_quantum_links(&read(&a.input)?)?;
            let m = ddg::compile_quantum(&links, n)?;
            let mut out = json!({ "matrix": format::matrix_json(&m), "unitary": ddg::is_unitary(&m, 1e-9) });
            if let Some(state) = a.state {
                let pairs: Vec<(f64, f64)> =
                    serde_json::from_str(&state).map_err(|e| CliError::Input(format!("--state: {e}")))?;
                let v = DVector::from_iterator(pairs.len(), pairs.into_iter().map(|(re, im)| Complex64::new(re, im)));
                let r = ddg::apply(&m, &v)?;
                out["state"] = r.iter().map(|z| json!([real(z.re), real(z.im)])).collect();
            }
            out
        }
        DdgCommand::Plant(a) => {
            let p = ddg::generate_planted(a.rules, a.max_lag, a.length, a.seed)?;
            json!({ "seed": a.seed, "ddg": ddg_json(&p.ddg), "trace": format::trace_json(&p.trace) })
        }
    }))
}

fn quantum_cmd(c: QuantumCommand) -> CliResult<Report> {
    Ok(Report::Json(match c {
        QuantumCommand::Purity(a) => {
            let rho = format::parse_density_matrix(&read(&a.rho)?)?;
            let eig: Vec<Value> = rho.eigenvalues().into_iter().map(real).collect();
            json!({
                "logical_entropy": real(quantum::quantum_logical_entropy(&rho)),
                "spectral": real(quantum::spectral_logical_entropy(&rho)),
                "eigenvalues": eig,
            })
        }
        QuantumCommand::Quangraph(a) => {
            let limits = limits()?;
            let acts = format::parse_actions(&read(&a.actions)?)?;
            let expected = match a.expected.as_deref() {
                Some(&[re, im]) => Complex64::new(re, im),
                Some(_) => return input("--expected takes re,im"),
                None => acts.expected.unwrap_or_else(|| acts.assignment.expected_action()),
            };
            let r = quantum::quangraph_search(&acts.assignment, expected, a.tol, a.action_tol, limits)?;
            let graphs: Vec<Value> = r.graphs.iter().map(graph_json).collect();
            json!({ "automorphisms": r.automorphisms, "graphs": graphs })
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_structures() {
        assert_eq!(structure("none").unwrap(), StructuralConstraint::None);
        assert_eq!(structure("maxdeg:2").unwrap(), StructuralConstraint::MaxDegree(2));
        assert_eq!(
            structure("graphtropy:0.5:0.01").unwrap(),
            StructuralConstraint::Graphtropy { target: 0.5, tolerance: 0.01 }
        );
        assert!(structure("maxdeg:x").is_err());
        assert!(structure("graphtropy:0.5").is_err());
    }

    #[test]
    fn reference_pair_lookup() {
        let ids = vec!["a".to_string(), "b".to_string()];
        assert_eq!(pair(&ids, &["b".into(), "a".into()], "x").unwrap(), (1, 0));
        assert_eq!(pair(&ids, &["a".into()], "x").unwrap_err().exit_code(), 2);
        assert_eq!(pair(&ids, &["a".into(), "q".into()], "x").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn non_finite_reals_are_null() {
        assert_eq!(real(f64::INFINITY), Value::Null);
        assert_eq!(real(f64::NAN), Value::Null);
        assert_eq!(real(0.5), json!(0.5));
    }
}
