use super::{Monomial, PolyError};

/// The Boolean quotient `x_i^2 = x_i` plus `x_i x_j = 0` for every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientContext {
    n: usize,
    adjacency: Vec<Vec<bool>>,
    edges: Vec<(usize, usize)>,
}

impl QuotientContext {
    /// Edges are unordered 0-based pairs; duplicates are ignored.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, PolyError> {
        let mut adjacency = vec![vec![false; n]; n];
        let mut list = Vec::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(PolyError::VariableOutOfRange { var: a.max(b), n });
            }
            if a == b {
                return Err(PolyError::SelfLoop(a));
            }
            if !adjacency[a][b] {
                adjacency[a][b] = true;
                adjacency[b][a] = true;
                list.push((a.min(b), a.max(b)));
            }
        }
        list.sort_unstable();
        Ok(Self {
            n,
            adjacency,
            edges: list,
        })
    }

    /// Pure Boolean hypercube with no edge relations.
    pub fn hypercube(n: usize) -> Self {
        Self::new(n, &[]).expect("no edges")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adjacency[a][b]
    }

    /// True when the monomial survives reduction (contains no edge pair).
    pub fn is_reduced(&self, m: &Monomial) -> bool {
        let vars: Vec<usize> = m.vars().collect();
        for (k, &a) in vars.iter().enumerate() {
            for &b in &vars[k + 1..] {
                if self.adjacency[a][b] {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `x_i * m` survives, given `m` already reduced.
    pub fn can_extend(&self, m: &Monomial, i: usize) -> bool {
        m.vars().all(|v| v == i || !self.adjacency[v][i])
    }

    pub fn check_var(&self, i: usize) -> Result<(), PolyError> {
        if i < self.n {
            Ok(())
        } else {
            Err(PolyError::VariableOutOfRange { var: i, n: self.n })
        }
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<(), PolyError> {
        if let Some(v) = m.max_var() {
            self.check_var(v)?;
        }
        if self.is_reduced(m) {
            Ok(())
        } else {
            Err(PolyError::NotReduced(m.to_string()))
        }
    }

    /// All reduced monomials of degree at most `max_degree`, in canonical order.
    pub fn reduced_monomials(&self, max_degree: usize) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        let mut frontier = vec![Monomial::one()];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for m in &frontier {
                let start = m.max_var().map_or(0, |v| v + 1);
                for i in start..self.n {
                    if self.can_extend(m, i) {
                        next.push(m.with_var(i));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        out
    }
}
