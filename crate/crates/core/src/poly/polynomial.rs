use std::collections::btree_map::Entry;
use std::collections::BTreeMap;


use super::{Monomial, PolyError, QuotientContext, RawPolynomial};
use crate::scalar::Scalar;

/// Which of the two linear hypercube axioms multiplies a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorKind {
    /// `x_i`
    Var,
    /// `1 - x_i`
    OneMinusVar,
}

/// A linear factor `x_i` or `1 - x_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearFactor {
    pub var: usize,
    pub kind: FactorKind,
}

impl LinearFactor {
    pub fn var(var: usize) -> Self {
        Self {
            var,
            kind: FactorKind::Var,
        }
    }

    pub fn one_minus(var: usize) -> Self {
        Self {
            var,
            kind: FactorKind::OneMinusVar,
        }
    }

    pub fn to_poly<S: Scalar>(&self) -> Polynomial<S> {
        match self.kind {
            FactorKind::Var => Polynomial::var(self.var),
            FactorKind::OneMinusVar => Polynomial::one_minus_var(self.var),
        }
    }

    /// Recognizes `x_i` and `1 - x_i`.
    pub fn from_poly<S: Scalar>(p: &Polynomial<S>) -> Option<Self> {
        let terms: Vec<_> = p.terms().collect();
        match terms.as_slice() {
            [(m, c)] if m.degree() == 1 && c.is_one() => Some(Self::var(m.max_var()?)),
            [(one, c0), (m, c1)]
                if one.is_one() && c0.is_one() && m.degree() == 1 && (-(*c1).clone()).is_one() =>
            {
                Some(Self::one_minus(m.max_var()?))
            }
            _ => None,
        }
    }
}

/// Sparse multilinear polynomial, reduced with respect to some
/// [`QuotientContext`]. Terms are kept in canonical monomial order and zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<S> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for Polynomial<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i), S::one())
    }

    pub fn one_minus_var(i: usize) -> Self {
        let mut p = Self::constant(S::one());
        p.add_term(Monomial::var(i), -S::one());
        p
    }

    /// `sum_i x_i` over `n` variables: the stable-set objective.
    pub fn sum_of_vars(n: usize) -> Self {
        Self {
            terms: (0..n).map(|i| (Monomial::var(i), S::one())).collect(),
        }
    }

    /// Builds from already multilinear terms, checking reducedness against `ctx`.
    pub fn from_reduced_terms<I>(terms: I, ctx: &QuotientContext) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let mut p = Self::zero();
        for (m, c) in terms {
            ctx.check_monomial(&m)?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Accumulates `c * m` without reduction; callers guarantee `m` is reduced.
    pub(crate) fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        // canonical order sorts by degree first
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Monomial::one())
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    /// Product with `x_i` or `1 - x_i`, reduced in `ctx`.
    pub fn mul_linear(&self, factor: LinearFactor, ctx: &QuotientContext) -> Self {
        let i = factor.var;
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let shifted = if ctx.can_extend(m, i) {
                Some(m.with_var(i))
            } else {
                None
            };
            match factor.kind {
                FactorKind::Var => {
                    if let Some(mi) = shifted {
                        out.add_term(mi, c.clone());
                    }
                }
                FactorKind::OneMinusVar => {
                    out.add_term(m.clone(), c.clone());
                    if let Some(mi) = shifted {
                        out.add_term(mi, -c.clone());
                    }
                }
            }
        }
        out
    }

    /// General product, reduced in `ctx`.
    pub fn mul(&self, other: &Self, ctx: &QuotientContext) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m = a.union(b);
                if ctx.is_reduced(&m) {
                    out.add_term(m, ca.clone() * cb.clone());
                }
            }
        }
        out
    }

    /// Relabels every variable `i` to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permute(perm), c.clone()))
                .collect(),
        }
    }

    /// Evaluates at a 0/1 point.
    pub fn eval_boolean(&self, point: &[bool]) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            if m.vars().all(|v| point[v]) {
                acc = acc + c.clone();
            }
        }
        acc
    }

    /// Lifts into the raw (integer exponent) representation.
    pub fn to_raw(&self) -> RawPolynomial<S> {
        RawPolynomial::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.vars().map(|v| (v, 1)).collect(), c.clone())),
        )
    }

    /// Maps coefficients into another scalar type.
    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type P = Polynomial<Rational>;

    fn lin(i: usize) -> P {
        P::one_minus_var(i)
    }

    #[test]
    fn sequential_clique_products_stay_linear() {
        // K3: (1 - x1 - x2)(1 - x3) = 1 - x1 - x2 - x3
        let k3 = QuotientContext::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let p = lin(0).mul_linear(LinearFactor::one_minus(1), &k3);
        assert_eq!(p, P::constant(rat(1, 1)).sub(&P::var(0)).sub(&P::var(1)));
        let q = p.mul_linear(LinearFactor::one_minus(2), &k3);
        assert_eq!(q, P::constant(rat(1, 1)).sub(&P::sum_of_vars(3)));
        assert_eq!(q.degree(), 1);
    }

    #[test]
    fn multiplying_by_neighbour_of_every_monomial_gives_zero() {
        let ctx = QuotientContext::new(3, &[(0, 2), (1, 2)]).unwrap();
        let p = P::var(0).add(&P::var(1).scale(&rat(3, 1)));
        assert!(p.mul_linear(LinearFactor::var(2), &ctx).is_zero());
    }

    #[test]
    fn c7_reference_first_step() {
        let c7: Vec<_> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
        let ctx = QuotientContext::new(7, &c7).unwrap();
        let p = lin(2).mul_linear(LinearFactor::one_minus(1), &ctx);
        assert_eq!(p, P::constant(rat(1, 1)).sub(&P::var(1)).sub(&P::var(2)));
    }

    #[test]
    fn add_scale_permute() {
        assert!(P::var(0).sub(&P::var(0)).is_zero());
        let p = lin(0).scale(&rat(1, 5));
        assert_eq!(p.constant_term(), rat(1, 5));
        assert_eq!(p.coeff(&Monomial::var(0)), rat(-1, 5));
        // x1 + 2 x1 x3 under 1->2, 2->3, 3->1 is x2 + 2 x1 x2
        let m = P::var(0).add(&P::monomial(Monomial::from_vars([0, 2]), rat(2, 1)));
        let expect = P::var(1).add(&P::monomial(Monomial::from_vars([0, 1]), rat(2, 1)));
        assert_eq!(m.permute(&[1, 2, 0]), expect);
    }

    #[test]
    fn factor_recognition() {
        assert_eq!(
            LinearFactor::from_poly(&lin(4)),
            Some(LinearFactor::one_minus(4))
        );
        assert_eq!(LinearFactor::from_poly(&P::var(2)), Some(LinearFactor::var(2)));
        assert_eq!(LinearFactor::from_poly(&P::var(2).scale(&rat(2, 1))), None);
        assert_eq!(LinearFactor::from_poly(&P::constant(rat(1, 1))), None);
    }

    #[test]
    fn degree_of_zero_is_zero() {
        assert_eq!(P::zero().degree(), 0);
        assert_eq!(P::monomial(Monomial::from_vars([1, 4]), rat(-1, 1)).degree(), 2);
    }
}
