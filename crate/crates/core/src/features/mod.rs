//! Relabeling-invariant features of (memory element, objective, action).
//!
//! Two monomial triplets are equivalent when one simultaneous variable
//! relabeling maps one onto the other. For multilinear monomials the orbit
//! is determined by how many variables fall into each of the seven nonempty
//! membership patterns (in `m1`? in `m2`? in `m3`?), which is the
//! [`ClassKey`]. The feature vector sums `m_α f_β a_γ` per class.

use std::collections::HashMap;
use std::fmt::Write;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("monomial {monomial} exceeds the class table degree {max_degree}")]
    DegreeCap { monomial: String, max_degree: usize },
    #[error("class tables are enumerated only up to degree 3, got {0}")]
    TableTooLarge(usize),
}

/// Variable counts per membership pattern; index `s - 1` holds pattern `s`
/// where bit 0 is `m1`, bit 1 is `m2`, bit 2 is `m3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey(pub [u8; 7]);

impl ClassKey {
    pub fn of(m1: &Monomial, m2: &Monomial, m3: &Monomial) -> Self {
        let mut counts = [0u8; 7];
        let (mut i, mut j, mut k) = (m1.vars().peekable(), m2.vars().peekable(), m3.vars().peekable());
        loop {
            let next = [i.peek(), j.peek(), k.peek()].into_iter().flatten().min().copied();
            let Some(v) = next else { break };
            let mut s = 0;
            if i.peek() == Some(&v) {
                s |= 1;
                i.next();
            }
            if j.peek() == Some(&v) {
                s |= 2;
                j.next();
            }
            if k.peek() == Some(&v) {
                s |= 4;
                k.next();
            }
            counts[s - 1] += 1;
        }
        ClassKey(counts)
    }

    /// Mixed-radix code with digits `0..=max_degree`.
    pub fn code(&self, max_degree: usize) -> usize {
        self.0.iter().fold(0, |acc, &c| acc * (max_degree + 1) + c as usize)
    }

    /// Degrees of the three monomials.
    pub fn degrees(&self) -> [usize; 3] {
        let mut d = [0; 3];
        for (s, &c) in (1..=7).zip(&self.0) {
            for (bit, deg) in d.iter_mut().enumerate() {
                if s >> bit & 1 == 1 {
                    *deg += c as usize;
                }
            }
        }
        d
    }

    /// A triplet in this class on variables `0..k`.
    pub fn representative(&self) -> [Monomial; 3] {
        let mut vars: [Vec<usize>; 3] = Default::default();
        let mut next = 0;
        for (s, &c) in (1..=7usize).zip(&self.0) {
            for _ in 0..c {
                for (bit, v) in vars.iter_mut().enumerate() {
                    if s >> bit & 1 == 1 {
                        v.push(next);
                    }
                }
                next += 1;
            }
        }
        vars.map(Monomial::from_vars)
    }
}

/// All classes of triplets whose monomials have degree at most `max_degree`.
#[derive(Clone, Debug)]
pub struct TripletClassTable {
    max_degree: usize,
    keys: Vec<ClassKey>,
    /// Class index by [`ClassKey::code`]; `u32::MAX` marks impossible keys.
    lookup: Vec<u32>,
}

pub fn build_class_table(max_degree: usize) -> Result<TripletClassTable, FeatureError> {
    if max_degree > 3 {
        return Err(FeatureError::TableTooLarge(max_degree));
    }
    let mut keys = Vec::new();
    let mut counts = [0u8; 7];
    fn rec(pos: usize, counts: &mut [u8; 7], max_degree: usize, keys: &mut Vec<ClassKey>) {
        if pos == 7 {
            keys.push(ClassKey(*counts));
            return;
        }
        for c in 0..=max_degree as u8 {
            counts[pos] = c;
            if ClassKey(*counts).degrees().iter().all(|&d| d <= max_degree) {
                rec(pos + 1, counts, max_degree, keys);
            }
        }
        counts[pos] = 0;
    }
    rec(0, &mut counts, max_degree, &mut keys);
    keys.sort();
    let mut lookup = vec![u32::MAX; (max_degree + 1).pow(7)];
    for (i, k) in keys.iter().enumerate() {
        lookup[k.code(max_degree)] = i as u32;
    }
    Ok(TripletClassTable {
        max_degree,
        keys,
        lookup,
    })
}

impl TripletClassTable {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[ClassKey] {
        &self.keys
    }

    fn check(&self, m: &Monomial) -> Result<(), FeatureError> {
        if m.degree() > self.max_degree {
            return Err(FeatureError::DegreeCap {
                monomial: m.to_string(),
                max_degree: self.max_degree,
            });
        }
        Ok(())
    }

    /// Class index of `(m1, m2, m3)`.
    pub fn class_of(&self, m1: &Monomial, m2: &Monomial, m3: &Monomial) -> Result<usize, FeatureError> {
        self.check(m1)?;
        self.check(m2)?;
        self.check(m3)?;
        Ok(self.index_of(m1, m2, m3))
    }

    /// Class index of monomials already known to respect the degree cap.
    fn index_of(&self, m1: &Monomial, m2: &Monomial, m3: &Monomial) -> usize {
        self.lookup[ClassKey::of(m1, m2, m3).code(self.max_degree)] as usize
    }

    /// One line per class in index order: counts and a representative.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, k) in self.keys.iter().enumerate() {
            let [a, b, c] = k.representative();
            let counts: Vec<String> = k.0.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{i}\t{}\t({a}, {b}, {c})", counts.join(" ")).unwrap();
        }
        out
    }

    /// SHA-256 of [`dump`](Self::dump) with the degree, hex encoded.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("max_degree={}\n", self.max_degree));
        h.update(self.dump());
        hex::encode(h.finalize())
    }

    /// Class-sum vector `z_c = Σ_{class(α,β,γ) = c} m_α f_β a_γ`.
    pub fn featurize<S: Scalar>(
        &self,
        m: &Polynomial<S>,
        f: &Polynomial<S>,
        a: &Polynomial<S>,
    ) -> Result<Vec<f64>, FeatureError> {
        let mut z = vec![0.0; self.len()];
        Featurizer::new(self, f)?.featurize_into(m, a, &mut z)?;
        Ok(z)
    }
}

/// Featurization against one fixed objective `f`.
///
/// For every pair `(α, γ)` the sums `Σ_β f_β` per class are memoized. Each
/// such sum and each final class sum is accumulated in sorted order over a
/// multiset that relabeling leaves unchanged, so `z` is bitwise invariant
/// under simultaneous relabeling of `m`, `f` and `a`.
pub struct Featurizer<'a> {
    table: &'a TripletClassTable,
    f: Vec<(Monomial, f64)>,
    memo: HashMap<(Monomial, Monomial), Vec<(u32, f64)>>,
    scratch: Vec<(u32, f64)>,
}

fn sorted_sums(items: &mut [(u32, f64)], mut emit: impl FnMut(u32, f64)) {
    items.sort_unstable_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut i = 0;
    while i < items.len() {
        let c = items[i].0;
        let mut acc = 0.0;
        while i < items.len() && items[i].0 == c {
            acc += items[i].1;
            i += 1;
        }
        emit(c, acc);
    }
}

impl<'a> Featurizer<'a> {
    pub fn new<S: Scalar>(table: &'a TripletClassTable, f: &Polynomial<S>) -> Result<Self, FeatureError> {
        let f = f
            .terms()
            .map(|(b, c)| table.check(b).map(|_| (b.clone(), c.to_f64_lossy())))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            table,
            f,
            memo: HashMap::new(),
            scratch: Vec::new(),
        })
    }

    pub fn table(&self) -> &TripletClassTable {
        self.table
    }

    fn partial(&mut self, al: &Monomial, g: &Monomial) -> &[(u32, f64)] {
        let table = self.table;
        let f = &self.f;
        self.memo.entry((al.clone(), g.clone())).or_insert_with(|| {
            let mut items: Vec<(u32, f64)> = f.iter().map(|(b, c)| (table.index_of(al, b, g) as u32, *c)).collect();
            let mut out = Vec::new();
            sorted_sums(&mut items, |c, v| out.push((c, v)));
            out
        })
    }

    /// Writes `z(m, f, a)` into `z`, which must have the table's length.
    pub fn featurize_into<S: Scalar>(
        &mut self,
        m: &Polynomial<S>,
        a: &Polynomial<S>,
        z: &mut [f64],
    ) -> Result<(), FeatureError> {
        z.iter_mut().for_each(|v| *v = 0.0);
        let mut scratch = std::mem::take(&mut self.scratch);
        scratch.clear();
        for (al, _) in m.terms() {
            self.table.check(al)?;
        }
        for (g, _) in a.terms() {
            self.table.check(g)?;
        }
        for (al, cm) in m.terms() {
            let cm = cm.to_f64_lossy();
            for (g, ca) in a.terms() {
                let w = cm * ca.to_f64_lossy();
                for &(c, v) in self.partial(al, g) {
                    scratch.push((c, w * v));
                }
            }
        }
        sorted_sums(&mut scratch, |c, v| z[c as usize] = v);
        self.scratch = scratch;
        Ok(())
    }

    pub fn featurize<S: Scalar>(&mut self, m: &Polynomial<S>, a: &Polynomial<S>) -> Result<Vec<f64>, FeatureError> {
        let mut z = vec![0.0; self.table.len()];
        self.featurize_into(m, a, &mut z)?;
        Ok(z)
    }
}
