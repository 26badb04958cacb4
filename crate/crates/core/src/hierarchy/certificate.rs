use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::generator_poly;
use crate::env::{VerificationReport, VerifyError};
use crate::error::ParseError;
use crate::graphs::io::GraphJson;
use crate::graphs::Graph;
use crate::poly::text::{from_machine, to_infix, to_machine, MachineTerm};
use crate::poly::Monomial;
use crate::scalar::{display_rational, format_rational, parse_rational, Rational};
use crate::Poly;

#[derive(Clone, Debug, PartialEq)]
pub struct StaticTerm {
    pub alpha: Monomial,
    pub beta: Monomial,
    pub lambda: Rational,
}

/// `claimed_bound - objective = Σ λ x^α (1-x)^β` in the quotient ring of `graph`.
#[derive(Clone, Debug, PartialEq)]
pub struct StaticCertificate {
    pub graph: Graph,
    pub level: usize,
    pub objective: Poly,
    pub terms: Vec<StaticTerm>,
    pub claimed_bound: Rational,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    alpha: Vec<usize>,
    beta: Vec<usize>,
    lambda: String,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    format: String,
    version: u32,
    graph: GraphJson,
    level: usize,
    objective: Vec<MachineTerm>,
    terms: Vec<TermJson>,
    claimed_bound: String,
}

const FORMAT: &str = "dynproof-static";
const VERSION: u32 = 1;

fn one_based(m: &Monomial) -> Vec<usize> {
    m.vars().map(|v| v + 1).collect()
}

fn zero_based(v: &[usize]) -> Result<Monomial, ParseError> {
    if v.contains(&0) {
        return Err(ParseError::Graph("variable indices are 1-based".into()));
    }
    Ok(Monomial::from_vars(v.iter().map(|i| i - 1)))
}

impl StaticCertificate {
    pub fn to_json(&self) -> String {
        let j = CertificateJson {
            format: FORMAT.into(),
            version: VERSION,
            graph: GraphJson::from(&self.graph),
            level: self.level,
            objective: to_machine(&self.objective),
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    alpha: one_based(&t.alpha),
                    beta: one_based(&t.beta),
                    lambda: format_rational(&t.lambda),
                })
                .collect(),
            claimed_bound: format_rational(&self.claimed_bound),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        let j: CertificateJson = serde_json::from_str(s).map_err(ParseError::from)?;
        if j.format != FORMAT || j.version != VERSION {
            return Err(ParseError::Graph(format!("unsupported certificate format {} v{}", j.format, j.version)).into());
        }
        let graph = Graph::try_from(j.graph)?;
        let objective = from_machine(&j.objective, &graph.context())?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            terms.push(StaticTerm {
                alpha: zero_based(&t.alpha)?,
                beta: zero_based(&t.beta)?,
                lambda: parse_rational(&t.lambda)?,
            });
        }
        Ok(Self {
            graph,
            level: j.level,
            objective,
            terms,
            claimed_bound: parse_rational(&j.claimed_bound)?,
        })
    }
}

/// Checks `λ ≥ 0`, `|α| + |β| ≤ level`, disjoint supports, and the identity.
pub fn verify_static_certificate(cert: &StaticCertificate) -> Result<VerificationReport, VerifyError> {
    let ctx = cert.graph.context();
    for m in cert.objective.monomials() {
        ctx.check_monomial(m)
            .map_err(|e| VerifyError::Malformed(format!("objective: {e}")))?;
    }
    let mut residual = Poly::constant(cert.claimed_bound.clone()).sub(&cert.objective);
    for (index, t) in cert.terms.iter().enumerate() {
        let bad = |why: &str| VerifyError::Malformed(format!("term {index}: {why}"));
        if t.alpha.degree() + t.beta.degree() > cert.level {
            return Err(bad("exceeds the level"));
        }
        if !t.alpha.is_disjoint(&t.beta) {
            return Err(bad("alpha and beta overlap"));
        }
        if t.alpha.max_var().max(t.beta.max_var()).is_some_and(|v| v >= ctx.n()) {
            return Err(bad("variable out of range"));
        }
        if t.lambda.is_negative() {
            return Err(VerifyError::NegativeLambda {
                index,
                lambda: display_rational(&t.lambda),
            });
        }
        residual.add_scaled(&generator_poly(&t.alpha, &t.beta, &ctx), &-t.lambda.clone());
    }
    if !residual.is_zero() {
        return Err(VerifyError::IdentityMismatch {
            residual: to_infix(&residual),
        });
    }
    Ok(VerificationReport {
        bound: cert.claimed_bound.clone(),
        steps: 0,
        combination_terms: cert.terms.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::solve_level;
    use crate::scalar::rat;

    #[test]
    fn k2_certificate_round_trip() {
        let sol = solve_level(&Graph::complete(2), 2).unwrap();
        assert_eq!(sol.bound, rat(1, 1));
        let cert = StaticCertificate::from_json(&sol.certificate.to_json()).unwrap();
        assert_eq!(cert, sol.certificate);
        assert_eq!(verify_static_certificate(&cert).unwrap().bound, rat(1, 1));
    }

    #[test]
    fn tampered_lambda() {
        let mut cert = solve_level(&Graph::cycle(5), 2).unwrap().certificate;
        cert.terms[0].lambda = -cert.terms[0].lambda.clone();
        assert!(matches!(verify_static_certificate(&cert), Err(VerifyError::NegativeLambda { .. })));
        cert.terms[0].lambda = rat(7, 1);
        assert!(matches!(verify_static_certificate(&cert), Err(VerifyError::IdentityMismatch { .. })));
    }

    #[test]
    fn constant_generator_alone_fails() {
        let g = Graph::complete(3);
        let cert = StaticCertificate {
            objective: Poly::sum_of_vars(3),
            graph: g,
            level: 2,
            terms: vec![StaticTerm {
                alpha: Monomial::one(),
                beta: Monomial::one(),
                lambda: rat(3, 1),
            }],
            claimed_bound: rat(3, 1),
        };
        assert!(matches!(verify_static_certificate(&cert), Err(VerifyError::IdentityMismatch { .. })));
    }
}
