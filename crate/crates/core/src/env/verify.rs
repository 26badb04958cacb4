//! Independent exact checker for [`ProofTrace`]s.

use num_traits::Signed;
use thiserror::Error;

use super::trace::{Premise, ProofTrace};
use crate::poly::text::to_infix;
use crate::poly::{LinearFactor, QuotientContext};
use crate::scalar::{display_rational, Rational};
use crate::Poly;

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("malformed trace: {0}")]
    Malformed(String),
    #[error("step {step} refers to step {parent}, which is not earlier")]
    ForwardReference { step: usize, parent: usize },
    #[error("step {step} claims {claimed} but the product is {actual}")]
    StepMismatch { step: usize, claimed: String, actual: String },
    #[error("combination term {index} refers to missing step {step}")]
    DanglingPremise { index: usize, step: usize },
    #[error("combination term {index} has negative multiplier {lambda}")]
    NegativeLambda { index: usize, lambda: String },
    #[error("combination does not equal bound minus objective; residual {residual}")]
    IdentityMismatch { residual: String },
}

/// Summary of an accepted trace.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub bound: Rational,
    pub steps: usize,
    pub combination_terms: usize,
}

fn check_poly(p: &Poly, ctx: &QuotientContext, what: &str) -> Result<(), VerifyError> {
    for m in p.monomials() {
        ctx.check_monomial(m)
            .map_err(|e| VerifyError::Malformed(format!("{what}: {e}")))?;
    }
    Ok(())
}

fn check_factor(f: LinearFactor, ctx: &QuotientContext, what: &str) -> Result<(), VerifyError> {
    ctx.check_var(f.var)
        .map_err(|e| VerifyError::Malformed(format!("{what}: {e}")))
}

/// Re-derives every step, checks multipliers and the final identity
/// `claimed_bound - objective = Σ λ p` in the quotient ring.
pub fn verify(trace: &ProofTrace) -> Result<VerificationReport, VerifyError> {
    let ctx = trace.graph.context();
    check_poly(&trace.objective, &ctx, "objective")?;
    let premise_poly = |p: Premise, derived: &[Poly]| -> Poly {
        match p {
            Premise::Axiom(f) => f.to_poly(),
            Premise::Step(j) => derived[j].clone(),
        }
    };
    let mut derived: Vec<Poly> = Vec::with_capacity(trace.steps.len());
    for (k, s) in trace.steps.iter().enumerate() {
        check_poly(&s.poly, &ctx, &format!("step {k}"))?;
        check_factor(s.factor, &ctx, &format!("step {k} factor"))?;
        match s.parent {
            Premise::Step(j) if j >= k => return Err(VerifyError::ForwardReference { step: k, parent: j }),
            Premise::Axiom(f) => check_factor(f, &ctx, &format!("step {k} parent"))?,
            Premise::Step(_) => {}
        }
        let actual = premise_poly(s.parent, &derived).mul_linear(s.factor, &ctx);
        if actual != s.poly {
            return Err(VerifyError::StepMismatch {
                step: k,
                claimed: to_infix(&s.poly),
                actual: to_infix(&actual),
            });
        }
        derived.push(actual);
    }
    let mut residual = Poly::constant(trace.claimed_bound.clone()).sub(&trace.objective);
    for (index, (p, lambda)) in trace.combination.iter().enumerate() {
        match *p {
            Premise::Step(step) if step >= derived.len() => {
                return Err(VerifyError::DanglingPremise { index, step })
            }
            Premise::Axiom(f) => check_factor(f, &ctx, &format!("combination term {index}"))?,
            Premise::Step(_) => {}
        }
        if lambda.is_negative() {
            return Err(VerifyError::NegativeLambda {
                index,
                lambda: display_rational(lambda),
            });
        }
        residual.add_scaled(&premise_poly(*p, &derived), &-lambda.clone());
    }
    if !residual.is_zero() {
        return Err(VerifyError::IdentityMismatch {
            residual: to_infix(&residual),
        });
    }
    Ok(VerificationReport {
        bound: trace.claimed_bound.clone(),
        steps: trace.steps.len(),
        combination_terms: trace.combination.len(),
    })
}
