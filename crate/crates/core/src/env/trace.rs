//! Proof traces: the derivation steps and final combination behind a bound.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Provenance, ProverState};
use crate::error::ParseError;
use crate::graphs::io::GraphJson;
use crate::graphs::Graph;
use crate::poly::text::{from_machine, to_machine, MachineTerm};
use crate::poly::{FactorKind, LinearFactor};
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::Poly;

/// Source of a nonnegative polynomial: an axiom or an earlier step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Premise {
    Axiom(LinearFactor),
    Step(usize),
}

/// `0 <= poly = premise * factor`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub poly: Poly,
    pub parent: Premise,
    pub factor: LinearFactor,
}

/// A self-contained certificate that `claimed_bound - objective >= 0` on
/// every stable set of `graph`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofTrace {
    pub graph: Graph,
    pub objective: Poly,
    pub steps: Vec<TraceStep>,
    pub combination: Vec<(Premise, Rational)>,
    pub claimed_bound: Rational,
}

/// Minimal trace for the current bound: the memory entries with positive
/// multiplier plus every derivation step they depend on.
pub fn extract_proof(state: &ProverState) -> ProofTrace {
    let memory = state.memory();
    let support: Vec<usize> = state
        .lambdas()
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_zero())
        .map(|(k, _)| k)
        .collect();
    let mut needed = BTreeSet::new();
    let mut stack = support.clone();
    while let Some(k) = stack.pop() {
        if let Provenance::Derived { parent, .. } = memory[k].provenance {
            if needed.insert(k) {
                stack.push(parent);
            }
        }
    }
    let mut step_of = vec![usize::MAX; memory.len()];
    let premise = |k: usize, step_of: &[usize]| match memory[k].provenance {
        Provenance::Axiom(f) => Premise::Axiom(f),
        Provenance::Derived { .. } => Premise::Step(step_of[k]),
    };
    let mut steps = Vec::with_capacity(needed.len());
    for &k in &needed {
        let Provenance::Derived { parent, factor } = memory[k].provenance else {
            unreachable!()
        };
        steps.push(TraceStep {
            poly: memory[k].poly.clone(),
            parent: premise(parent, &step_of),
            factor,
        });
        step_of[k] = steps.len() - 1;
    }
    let combination = support
        .iter()
        .map(|&k| (premise(k, &step_of), state.lambdas()[k].clone()))
        .collect();
    ProofTrace {
        graph: state.graph().clone(),
        objective: state.objective().clone(),
        steps,
        combination,
        claimed_bound: state.bound().clone(),
    }
}

pub fn factor_to_string(f: LinearFactor) -> String {
    match f.kind {
        FactorKind::Var => format!("x{}", f.var + 1),
        FactorKind::OneMinusVar => format!("1-x{}", f.var + 1),
    }
}

pub fn factor_from_str(s: &str) -> Result<LinearFactor, ParseError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (one_minus, rest) = match compact.strip_prefix("1-") {
        Some(r) => (true, r),
        None => (false, compact.as_str()),
    };
    let idx: usize = rest
        .strip_prefix('x')
        .and_then(|d| d.parse().ok())
        .filter(|&i| i > 0)
        .ok_or_else(|| ParseError::Polynomial {
            input: s.to_string(),
            reason: "expected x<k> or 1-x<k>".into(),
        })?;
    Ok(if one_minus {
        LinearFactor::one_minus(idx - 1)
    } else {
        LinearFactor::var(idx - 1)
    })
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PremiseJson {
    Axiom(String),
    Step(usize),
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    poly: Vec<MachineTerm>,
    parent: PremiseJson,
    factor: String,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    premise: PremiseJson,
    lambda: String,
}

#[derive(Serialize, Deserialize)]
struct TraceJson {
    format: String,
    version: u32,
    graph: GraphJson,
    objective: Vec<MachineTerm>,
    steps: Vec<StepJson>,
    combination: Vec<TermJson>,
    claimed_bound: String,
}

const FORMAT: &str = "dynproof-trace";
const VERSION: u32 = 1;

fn premise_to_json(p: Premise) -> PremiseJson {
    match p {
        Premise::Axiom(f) => PremiseJson::Axiom(factor_to_string(f)),
        Premise::Step(k) => PremiseJson::Step(k),
    }
}

fn premise_from_json(p: PremiseJson) -> Result<Premise, ParseError> {
    Ok(match p {
        PremiseJson::Axiom(s) => Premise::Axiom(factor_from_str(&s)?),
        PremiseJson::Step(k) => Premise::Step(k),
    })
}

impl ProofTrace {
    pub fn to_json(&self) -> String {
        let j = TraceJson {
            format: FORMAT.into(),
            version: VERSION,
            graph: GraphJson::from(&self.graph),
            objective: to_machine(&self.objective),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    poly: to_machine(&s.poly),
                    parent: premise_to_json(s.parent),
                    factor: factor_to_string(s.factor),
                })
                .collect(),
            combination: self
                .combination
                .iter()
                .map(|(p, l)| TermJson {
                    premise: premise_to_json(*p),
                    lambda: format_rational(l),
                })
                .collect(),
            claimed_bound: format_rational(&self.claimed_bound),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    /// Parses the JSON form. Polynomials must be reduced for the embedded
    /// graph; derivations are not checked here.
    pub fn from_json(s: &str) -> crate::Result<Self> {
        let j: TraceJson = serde_json::from_str(s).map_err(ParseError::from)?;
        if j.format != FORMAT || j.version != VERSION {
            return Err(ParseError::Graph(format!("unsupported trace format {} v{}", j.format, j.version)).into());
        }
        let graph = Graph::try_from(j.graph)?;
        let ctx = graph.context();
        let objective = from_machine(&j.objective, &ctx)?;
        let mut steps = Vec::with_capacity(j.steps.len());
        for s in j.steps {
            steps.push(TraceStep {
                poly: from_machine(&s.poly, &ctx)?,
                parent: premise_from_json(s.parent)?,
                factor: factor_from_str(&s.factor)?,
            });
        }
        let mut combination = Vec::with_capacity(j.combination.len());
        for t in j.combination {
            combination.push((premise_from_json(t.premise)?, parse_rational(&t.lambda)?));
        }
        Ok(Self {
            graph,
            objective,
            steps,
            combination,
            claimed_bound: parse_rational(&j.claimed_bound)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_strings() {
        for f in [LinearFactor::var(0), LinearFactor::one_minus(11)] {
            assert_eq!(factor_from_str(&factor_to_string(f)).unwrap(), f);
        }
        assert_eq!(factor_from_str(" 1 - x4").unwrap(), LinearFactor::one_minus(3));
        assert!(factor_from_str("x0").is_err());
        assert!(factor_from_str("2-x1").is_err());
    }
}
