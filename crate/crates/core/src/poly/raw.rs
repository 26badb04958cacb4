use super::{Monomial, PolyError, Polynomial, QuotientContext};
use crate::scalar::Scalar;

/// A power product with arbitrary exponents, as `(variable, exponent)` pairs.
/// Variables may repeat; exponents add.
pub type RawMonomial = Vec<(usize, u32)>;

/// Unreduced polynomial with integer exponents. Exists only as input to
/// [`reduce`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RawPolynomial<S> {
    terms: Vec<(RawMonomial, S)>,
}

impl<S: Scalar> RawPolynomial<S> {
    pub fn from_terms<I: IntoIterator<Item = (RawMonomial, S)>>(terms: I) -> Self {
        Self {
            terms: terms.into_iter().collect(),
        }
    }

    pub fn terms(&self) -> &[(RawMonomial, S)] {
        &self.terms
    }

    pub fn push(&mut self, m: RawMonomial, c: S) {
        self.terms.push((m, c));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    /// Formal product, no simplification.
    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                terms.push((m, ca.clone() * cb.clone()));
            }
        }
        Self { terms }
    }

    /// Exact evaluation at a real point.
    pub fn eval(&self, point: &[S]) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m {
                for _ in 0..e {
                    t = t * point[v].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }
}

/// Normal form in the quotient ring: exponents clamp to one and any monomial
/// containing an edge pair vanishes.
pub fn reduce<S: Scalar>(p: &RawPolynomial<S>, ctx: &QuotientContext) -> Result<Polynomial<S>, PolyError> {
    let mut out = Polynomial::zero();
    for (m, c) in &p.terms {
        for &(v, _) in m {
            ctx.check_var(v)?;
        }
        let mono = Monomial::from_vars(m.iter().filter(|(_, e)| *e > 0).map(|&(v, _)| v));
        if ctx.is_reduced(&mono) {
            out.add_term(mono, c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type R = RawPolynomial<Rational>;

    fn lin(i: usize) -> R {
        R::from_terms([(vec![], rat(1, 1)), (vec![(i, 1)], rat(-1, 1))])
    }

    #[test]
    fn both_rules_fire() {
        // x1^2 + x1 x2 with edge (1,2) -> x1
        let ctx = QuotientContext::new(2, &[(0, 1)]).unwrap();
        let p = R::from_terms([(vec![(0, 2)], rat(1, 1)), (vec![(0, 1), (1, 1)], rat(1, 1))]);
        assert_eq!(reduce(&p, &ctx).unwrap(), Polynomial::var(0));
    }

    #[test]
    fn k2_product_of_complements() {
        let ctx = QuotientContext::new(2, &[(0, 1)]).unwrap();
        let p = reduce(&lin(0).mul(&lin(1)), &ctx).unwrap();
        let expect = Polynomial::constant(rat(1, 1))
            .sub(&Polynomial::var(0))
            .sub(&Polynomial::var(1));
        assert_eq!(p, expect);
    }

    #[test]
    fn boolean_idempotence_kills_x_times_complement() {
        let ctx = QuotientContext::hypercube(1);
        let x = R::from_terms([(vec![(0, 1)], rat(1, 1))]);
        assert!(reduce(&x.mul(&lin(0)), &ctx).unwrap().is_zero());
    }

    #[test]
    fn out_of_range_variable_is_malformed() {
        let ctx = QuotientContext::hypercube(2);
        let p = R::from_terms([(vec![(2, 1)], rat(1, 1))]);
        assert!(matches!(
            reduce(&p, &ctx),
            Err(PolyError::VariableOutOfRange { var: 2, n: 2 })
        ));
    }
}
