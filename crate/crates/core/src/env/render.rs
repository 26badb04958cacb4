//! Human-readable proof listing and its parser.
//!
//! ```text
//! Graph: n=3; edges: 1-2 2-3
//! Objective: x1 + x2 + x3
//! Proof that 2 - (x1 + x2 + x3) >= 0:
//! [Step 0] 0 <= -x1 - x2 + 1 = (-x1 + 1) * (-x2 + 1)
//! 0 <= 1 * [Step 0] + 1 * (-x3 + 1) = -x1 - x2 - x3 + 2
//! ```

use std::fmt::Write;

use super::trace::{Premise, ProofTrace, TraceStep};
use crate::error::ParseError;
use crate::graphs::Graph;
use crate::poly::text::{parse_reduced, to_infix};
use crate::poly::{LinearFactor, QuotientContext};
use crate::scalar::{display_rational, parse_rational, Rational};
use crate::Poly;

fn premise_text(p: Premise) -> String {
    match p {
        Premise::Axiom(f) => format!("({})", to_infix(&f.to_poly::<Rational>())),
        Premise::Step(k) => format!("[Step {k}]"),
    }
}

pub fn render_proof(trace: &ProofTrace) -> String {
    let mut out = String::new();
    let edges: Vec<String> = trace.graph.edges().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect();
    writeln!(out, "Graph: n={}; edges: {}", trace.graph.n(), edges.join(" ")).unwrap();
    writeln!(out, "Objective: {}", to_infix(&trace.objective)).unwrap();
    writeln!(
        out,
        "Proof that {} - ({}) >= 0:",
        display_rational(&trace.claimed_bound),
        to_infix(&trace.objective)
    )
    .unwrap();
    for (k, s) in trace.steps.iter().enumerate() {
        writeln!(
            out,
            "[Step {k}] 0 <= {} = {} * ({})",
            to_infix(&s.poly),
            premise_text(s.parent),
            to_infix(&s.factor.to_poly::<Rational>())
        )
        .unwrap();
    }
    let terms: Vec<String> = trace
        .combination
        .iter()
        .map(|(p, l)| format!("{} * {}", display_rational(l), premise_text(*p)))
        .collect();
    let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    let rhs = Poly::constant(trace.claimed_bound.clone()).sub(&trace.objective);
    writeln!(out, "0 <= {lhs} = {}", to_infix(&rhs)).unwrap();
    out
}

struct LineParser<'a> {
    line: usize,
    ctx: &'a QuotientContext,
}

impl LineParser<'_> {
    fn err(&self, reason: impl Into<String>) -> ParseError {
        ParseError::ProofText {
            line: self.line,
            reason: reason.into(),
        }
    }

    fn poly(&self, src: &str) -> Result<Poly, ParseError> {
        parse_reduced(src.trim(), self.ctx).map_err(|e| self.err(e.to_string()))
    }

    fn factor(&self, src: &str) -> Result<LinearFactor, ParseError> {
        LinearFactor::from_poly(&self.poly(src)?).ok_or_else(|| self.err(format!("{src:?} is not x_i or 1 - x_i")))
    }

    /// Reads `[Step k]` or `(<linear factor>)` at the start of `s`.
    fn premise<'s>(&self, s: &'s str) -> Result<(Premise, &'s str), ParseError> {
        if let Some(rest) = s.strip_prefix("[Step ") {
            let (num, rest) = rest.split_once(']').ok_or_else(|| self.err("unclosed [Step"))?;
            let k = num.trim().parse().map_err(|_| self.err(format!("bad step number {num:?}")))?;
            Ok((Premise::Step(k), rest))
        } else if let Some(rest) = s.strip_prefix('(') {
            let (inner, rest) = rest.split_once(')').ok_or_else(|| self.err("unclosed ("))?;
            Ok((Premise::Axiom(self.factor(inner)?), rest))
        } else {
            Err(self.err(format!("expected a premise at {s:?}")))
        }
    }
}

fn parse_graph_line(line: &str, n_line: usize) -> Result<Graph, ParseError> {
    let bad = |r: &str| ParseError::ProofText {
        line: n_line,
        reason: r.to_string(),
    };
    let rest = line.strip_prefix("Graph: n=").ok_or_else(|| bad("expected 'Graph: n=..'"))?;
    let (n, edges) = rest.split_once(';').ok_or_else(|| bad("expected ';'"))?;
    let n: usize = n.trim().parse().map_err(|_| bad("bad node count"))?;
    let edges = edges.trim().strip_prefix("edges:").ok_or_else(|| bad("expected 'edges:'"))?;
    let mut list = Vec::new();
    for tok in edges.split_whitespace() {
        let (a, b) = tok.split_once('-').ok_or_else(|| bad("edge must be a-b"))?;
        let a: usize = a.parse().map_err(|_| bad("bad edge endpoint"))?;
        let b: usize = b.parse().map_err(|_| bad("bad edge endpoint"))?;
        if a == 0 || b == 0 {
            return Err(bad("node numbers are 1-based"));
        }
        list.push((a - 1, b - 1));
    }
    Graph::new(n, list).map_err(|e| bad(&e.to_string()))
}

/// Parses the output of [`render_proof`]. Derivations are not checked, but
/// the right-hand side of the final line must equal bound minus objective.
pub fn parse_proof_text(text: &str) -> Result<ProofTrace, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let missing = |what: &str| ParseError::ProofText {
        line: 0,
        reason: format!("missing {what} line"),
    };
    let (ln, line) = lines.next().ok_or_else(|| missing("graph"))?;
    let graph = parse_graph_line(line, ln)?;
    let ctx = graph.context();

    let (ln, line) = lines.next().ok_or_else(|| missing("objective"))?;
    let p = LineParser { line: ln, ctx: &ctx };
    let objective = p.poly(line.strip_prefix("Objective:").ok_or_else(|| p.err("expected 'Objective:'"))?)?;

    let (ln, line) = lines.next().ok_or_else(|| missing("header"))?;
    let p = LineParser { line: ln, ctx: &ctx };
    let bound_text = line
        .strip_prefix("Proof that ")
        .and_then(|r| r.split_once(" - "))
        .map(|(b, _)| b)
        .ok_or_else(|| p.err("expected 'Proof that <bound> - (..) >= 0:'"))?;
    let claimed_bound: Rational = parse_rational(bound_text.trim()).map_err(|e| p.err(e.to_string()))?;

    let mut steps = Vec::new();
    for (ln, line) in lines.by_ref() {
        let p = LineParser { line: ln, ctx: &ctx };
        if let Some(rest) = line.strip_prefix("[Step ") {
            let (num, rest) = rest.split_once(']').ok_or_else(|| p.err("unclosed [Step"))?;
            if num.trim().parse::<usize>().ok() != Some(steps.len()) {
                return Err(p.err(format!("expected step {}", steps.len())));
            }
            let rest = rest.trim().strip_prefix("0 <=").ok_or_else(|| p.err("expected '0 <='"))?;
            let (poly, rhs) = rest.split_once('=').ok_or_else(|| p.err("expected '='"))?;
            let (parent, rest) = p.premise(rhs.trim())?;
            let factor = rest.trim().strip_prefix('*').ok_or_else(|| p.err("expected '*'"))?.trim();
            let factor = factor
                .strip_prefix('(')
                .and_then(|f| f.strip_suffix(')'))
                .ok_or_else(|| p.err("factor must be parenthesized"))?;
            steps.push(TraceStep {
                poly: p.poly(poly)?,
                parent,
                factor: p.factor(factor)?,
            });
            continue;
        }
        let mut rest = line.strip_prefix("0 <=").ok_or_else(|| p.err("expected a step or the final line"))?.trim();
        let mut combination = Vec::new();
        if let Some(r) = rest.strip_prefix("0 =") {
            rest = r;
        } else {
            loop {
                let (coef, r) = rest.split_once(" * ").ok_or_else(|| p.err("expected '<lambda> * <premise>'"))?;
                let lambda = parse_rational(coef.trim()).map_err(|e| p.err(e.to_string()))?;
                let (premise, r) = p.premise(r.trim_start())?;
                combination.push((premise, lambda));
                let r = r.trim_start();
                if let Some(r) = r.strip_prefix('+') {
                    rest = r.trim_start();
                } else if let Some(r) = r.strip_prefix('=') {
                    rest = r;
                    break;
                } else {
                    return Err(p.err("expected '+' or '='"));
                }
            }
        }
        let rhs = p.poly(rest)?;
        if rhs != Poly::constant(claimed_bound.clone()).sub(&objective) {
            return Err(p.err("right-hand side is not bound minus objective"));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(ParseError::ProofText {
                line: ln,
                reason: "trailing content".into(),
            });
        }
        return Ok(ProofTrace {
            graph,
            objective,
            steps,
            combination,
            claimed_bound,
        });
    }
    Err(missing("final"))
}
