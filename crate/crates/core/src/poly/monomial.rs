use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A multilinear monomial: a set of distinct variable indices (0-based).
///
/// Ordered by degree first, then lexicographically on the sorted index list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    vars: SmallVec<[u32; 4]>,
}

impl Monomial {
    /// The constant monomial `1`.
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        Self {
            vars: SmallVec::from_slice(&[i as u32]),
        }
    }

    /// Builds from any index list; duplicates collapse since `x_i^2 = x_i`.
    pub fn from_vars<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        let mut v: SmallVec<[u32; 4]> = vars.into_iter().map(|i| i as u32).collect();
        v.sort_unstable();
        v.dedup();
        Self { vars: v }
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.vars.iter().map(|&v| v as usize)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.vars.binary_search(&(i as u32)).is_ok()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.vars.last().map(|&v| v as usize)
    }

    /// Product in the Boolean ring: the union of the variable sets.
    pub fn union(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.vars, &other.vars);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { vars: out }
    }

    pub fn with_var(&self, i: usize) -> Monomial {
        if self.contains(i) {
            return self.clone();
        }
        let mut vars = self.vars.clone();
        let pos = vars.partition_point(|&v| v < i as u32);
        vars.insert(pos, i as u32);
        Monomial { vars }
    }

    pub fn is_disjoint(&self, other: &Monomial) -> bool {
        self.vars.iter().all(|v| other.vars.binary_search(v).is_err())
    }

    /// Relabels through `perm`, where `perm[i]` is the image of variable `i`.
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        Monomial::from_vars(self.vars().map(|v| perm[v]))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vars
            .len()
            .cmp(&other.vars.len())
            .then_with(|| self.vars.cmp(&other.vars))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// 1-based rendering, `x1*x3`, or `1` for the constant.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return f.write_str("1");
        }
        for (k, v) in self.vars.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{}", v + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_degree_then_lex() {
        let mut ms = vec![
            Monomial::from_vars([1, 2]),
            Monomial::var(3),
            Monomial::one(),
            Monomial::from_vars([0, 5]),
            Monomial::var(0),
        ];
        ms.sort();
        let shown: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, ["1", "x1", "x4", "x1*x6", "x2*x3"]);
    }

    #[test]
    fn union_and_insert() {
        let a = Monomial::from_vars([0, 3]);
        let b = Monomial::from_vars([3, 1]);
        assert_eq!(a.union(&b), Monomial::from_vars([0, 1, 3]));
        assert_eq!(a.with_var(2), Monomial::from_vars([0, 2, 3]));
        assert_eq!(a.with_var(3), a);
        assert!(!a.is_disjoint(&b));
        assert!(a.is_disjoint(&Monomial::var(1)));
    }
}
