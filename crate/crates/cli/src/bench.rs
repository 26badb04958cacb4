//! Benchmark table: per graph size, mean bounds of the dynamic agents and of
//! the static hierarchy levels over the same random instances.

use std::fmt::Write as _;
use std::path::Path;

use dynproof::agent::{evaluate, EvalPolicy};
use dynproof::features::TripletClassTable;
use dynproof::graphs::Graph;
use dynproof::hierarchy::{solve_level_with, verify_static_certificate, LevelOptions, LpSize};
use dynproof::rng::stream;
use dynproof::{QNetwork64, Rational, Scalar};
use num_traits::Zero;
use rand::Rng as _;
use rayon::prelude::*;

pub const SUMMARY_HEADER: &str = "# dynproof-bench v1";
pub const DETAIL_HEADER: &str = "# dynproof-bench-detail v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agent {
    Random,
    Scripted,
    Model,
}

impl Agent {
    pub fn name(self) -> &'static str {
        match self {
            Agent::Random => "random",
            Agent::Scripted => "scripted",
            Agent::Model => "model",
        }
    }
}

pub struct BenchSettings<'a> {
    pub sizes: Vec<usize>,
    pub count: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub agents: Vec<Agent>,
    pub levels: Vec<usize>,
    pub horizon: usize,
    pub degree_cap: usize,
    pub seed: u64,
    pub model: Option<(&'a QNetwork64, &'a TripletClassTable)>,
    pub level_options: LevelOptions,
    pub certs_dir: Option<&'a Path>,
}

pub struct Instance {
    pub n: usize,
    pub index: usize,
    pub p: f64,
    pub graph_seed: u64,
    pub graph: Graph,
}

/// One bound on one instance.
pub struct Record {
    pub method: String,
    pub bound: Rational,
    /// Proof steps for agents, nonzero multipliers for static levels.
    pub proof_size: usize,
    pub lp: Option<LpSize>,
}

/// Graph `i` of size `n` comes from the stream `"graph/n"` of `seed`, so
/// adding sizes or raising `count` leaves earlier instances unchanged.
pub fn instances(n: usize, count: usize, p_min: f64, p_max: f64, seed: u64) -> Vec<Instance> {
    let mut rng = stream(seed, &format!("graph/{n}"));
    (0..count)
        .map(|index| {
            let p = rng.gen_range(p_min..=p_max);
            let graph_seed: u64 = rng.gen();
            Instance {
                n,
                index,
                p,
                graph_seed,
                graph: Graph::random_gnp(n, p, graph_seed),
            }
        })
        .collect()
}

fn run_instance(inst: &Instance, s: &BenchSettings<'_>) -> dynproof::Result<Vec<Record>> {
    let mut out = Vec::new();
    let agent_seed = dynproof::rng::sub_seed(s.seed, &format!("agent/{}", inst.n)).wrapping_add(inst.index as u64);
    for &agent in &s.agents {
        let policy = match agent {
            Agent::Random => EvalPolicy::Random,
            Agent::Scripted => EvalPolicy::Scripted,
            Agent::Model => {
                let (net, table) = s.model.expect("model agent requires a loaded model");
                EvalPolicy::Greedy { net, table }
            }
        };
        let report = evaluate(&policy, std::slice::from_ref(&inst.graph), s.horizon, s.degree_cap, agent_seed)?;
        let trace = &report.traces[0];
        if let Some(dir) = s.certs_dir {
            let path = dir.join(format!("n{}_{}_{}.json", inst.n, inst.index, agent.name()));
            std::fs::write(path, trace.to_json())?;
        }
        out.push(Record {
            method: agent.name().to_string(),
            bound: report.bounds[0].clone(),
            proof_size: trace.steps.len(),
            lp: None,
        });
    }
    for &level in &s.levels {
        let sol = solve_level_with(&inst.graph, level, s.level_options)?;
        let report = verify_static_certificate(&sol.certificate)?;
        if let Some(dir) = s.certs_dir {
            let path = dir.join(format!("n{}_{}_l{}.json", inst.n, inst.index, level));
            std::fs::write(path, sol.certificate.to_json())?;
        }
        out.push(Record {
            method: format!("l{level}"),
            bound: report.bound,
            proof_size: sol.certificate.terms.len(),
            lp: Some(sol.size),
        });
    }
    Ok(out)
}

pub struct BenchOutput {
    pub summary: String,
    pub detail: String,
}

fn methods(s: &BenchSettings<'_>) -> Vec<String> {
    s.agents
        .iter()
        .map(|a| a.name().to_string())
        .chain(s.levels.iter().map(|l| format!("l{l}")))
        .collect()
}

fn summary_columns(s: &BenchSettings<'_>) -> String {
    let mut cols = vec!["n".to_string(), "count".into(), "p_min".into(), "p_max".into()];
    for a in &s.agents {
        cols.push(format!("{}_mean", a.name()));
        cols.push(format!("{}_steps_mean", a.name()));
    }
    for l in &s.levels {
        for c in ["mean", "mean_exact", "pairs_mean", "columns_mean", "rows_mean"] {
            cols.push(format!("l{l}_{c}"));
        }
    }
    cols.join(",")
}

/// Runs every instance in parallel; rows are assembled in instance order so
/// the CSV does not depend on scheduling.
pub fn run(s: &BenchSettings<'_>) -> dynproof::Result<BenchOutput> {
    let mut summary = format!("{SUMMARY_HEADER}\n{}\n", summary_columns(s));
    let mut detail = format!(
        "{DETAIL_HEADER}\nn,index,p,graph_seed,method,bound,bound_f64,proof_size,lp_pairs,lp_columns,lp_rows\n"
    );
    let names = methods(s);
    for &n in &s.sizes {
        let insts = instances(n, s.count, s.p_min, s.p_max, s.seed);
        let results: Vec<Vec<Record>> = insts.par_iter().map(|i| run_instance(i, s)).collect::<Result<_, _>>()?;
        for (inst, recs) in insts.iter().zip(&results) {
            for r in recs {
                let (pairs, cols, rows) = r
                    .lp
                    .map(|z| (z.pairs.to_string(), z.columns.to_string(), z.rows.to_string()))
                    .unwrap_or_default();
                let _ = writeln!(
                    detail,
                    "{},{},{:.6},{},{},{},{:.6},{},{},{},{}",
                    inst.n,
                    inst.index,
                    inst.p,
                    inst.graph_seed,
                    r.method,
                    r.bound,
                    r.bound.to_f64_lossy(),
                    r.proof_size,
                    pairs,
                    cols,
                    rows
                );
            }
        }
        let count = insts.len().max(1);
        let mut row = vec![n.to_string(), s.count.to_string(), format!("{}", s.p_min), format!("{}", s.p_max)];
        for name in &names {
            let recs: Vec<&Record> = results.iter().flat_map(|rs| rs.iter().filter(|r| &r.method == name)).collect();
            let total = recs.iter().fold(Rational::zero(), |acc, r| acc + &r.bound);
            let exact = total / Rational::from_integer((count as i64).into());
            let mean_steps = recs.iter().map(|r| r.proof_size as f64).sum::<f64>() / count as f64;
            row.push(format!("{:.4}", exact.to_f64_lossy()));
            match recs.first().and_then(|r| r.lp) {
                None => row.push(format!("{mean_steps:.2}")),
                Some(_) => {
                    let avg = |f: fn(&LpSize) -> usize| {
                        recs.iter().map(|r| f(r.lp.as_ref().unwrap()) as f64).sum::<f64>() / count as f64
                    };
                    row.push(exact.to_string());
                    row.push(format!("{:.1}", avg(|z| z.pairs)));
                    row.push(format!("{:.1}", avg(|z| z.columns)));
                    row.push(format!("{:.1}", avg(|z| z.rows)));
                }
            }
        }
        summary.push_str(&row.join(","));
        summary.push('\n');
    }
    Ok(BenchOutput { summary, detail })
}
