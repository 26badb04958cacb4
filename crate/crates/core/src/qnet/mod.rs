//! Symmetric Q-network.
//!
//! ```text
//! q(s, a) = head( max( max_i tower_mem(z(m_i, f, a)), max_j tower_eq(z(e_j, f, a)) ) )
//! tower(z) = relu(W2 relu(W1 z + b1) + b2)
//! head(h)  = w2 · relu(W1 h + b1) + b2
//! ```
//!
//! All maxima are elementwise. Gradients through a max go to the lowest
//! index among tied maximizers, with the memory branch before the equality
//! branch.

mod cache;
mod io;
mod optim;

use rand::Rng as _;
use thiserror::Error;

pub use cache::{features_for, q_all_actions_uncached, q_value, ActionCache, StateActionInput};
pub use optim::RmsProp;

use crate::scalar::NetFloat;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("memory is empty")]
    EmptyMemory,
    #[error("input width {got} does not match the network width {expected}")]
    InputWidth { expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("action cache is stale: {0}")]
    StaleCache(String),
    #[error("class table hash {found} does not match the expected {expected}")]
    HashMismatch { expected: String, found: String },
    #[error("bad model file: {0}")]
    Format(String),
    #[error(transparent)]
    Feature(#[from] crate::features::FeatureError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const TENSOR_NAMES: [&str; 12] = [
    "mem.w1", "mem.b1", "mem.w2", "mem.b2", "eq.w1", "eq.b1", "eq.w2", "eq.b2", "head.w1", "head.b1", "head.w2", "head.b2",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Memory,
    Equality,
}

impl Branch {
    fn offset(self) -> usize {
        match self {
            Branch::Memory => 0,
            Branch::Equality => 4,
        }
    }
}

const HEAD: usize = 8;

/// Parameter tensors in [`TENSOR_NAMES`] order. Weights are stored
/// input-major (`[fan_in, fan_out]`), so `y = b + Σ_j x_j W[j, ..]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Params<F> {
    pub tensors: Vec<Vec<F>>,
}

impl<F: NetFloat> Params<F> {
    pub fn zeros_like(&self) -> Self {
        Self {
            tensors: self.tensors.iter().map(|t| vec![F::zero(); t.len()]).collect(),
        }
    }

    pub fn fill_zero(&mut self) {
        for t in &mut self.tensors {
            t.iter_mut().for_each(|v| *v = F::zero());
        }
    }

    pub fn scale(&mut self, c: F) {
        for t in &mut self.tensors {
            t.iter_mut().for_each(|v| *v = *v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (t, o) in self.tensors.iter_mut().zip(&other.tensors) {
            t.iter_mut().zip(o).for_each(|(a, b)| *a = *a + *b);
        }
    }

    pub fn len(&self) -> usize {
        self.tensors.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, flat: usize) -> F {
        let (t, i) = self.locate(flat);
        self.tensors[t][i]
    }

    pub fn set(&mut self, flat: usize, v: F) {
        let (t, i) = self.locate(flat);
        self.tensors[t][i] = v;
    }

    fn locate(&self, mut flat: usize) -> (usize, usize) {
        for (t, v) in self.tensors.iter().enumerate() {
            if flat < v.len() {
                return (t, flat);
            }
            flat -= v.len();
        }
        panic!("flat index out of range");
    }
}

/// Activations of one tower application.
#[derive(Clone, Debug)]
pub struct TowerActivations<F> {
    pub hidden: Vec<F>,
    pub out: Vec<F>,
}

/// Intermediate values of one `q(s, a)` evaluation.
#[derive(Clone, Debug)]
pub struct Forward<F> {
    pub mem: Vec<TowerActivations<F>>,
    pub eq: Vec<TowerActivations<F>>,
    /// Winning branch and element for every coordinate of `h`.
    pub route: Vec<(Branch, usize)>,
    pub h: Vec<F>,
    pub head_hidden: Vec<F>,
    pub q: F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QNetwork<F> {
    input: usize,
    width: usize,
    params: Params<F>,
    table_hash: String,
    version: u64,
}

fn affine<F: NetFloat>(w: &[F], b: &[F], x: &[F], out: &mut Vec<F>) {
    out.clear();
    out.extend_from_slice(b);
    let n = b.len();
    for (j, &xj) in x.iter().enumerate() {
        if xj == F::zero() {
            continue;
        }
        let row = &w[j * n..(j + 1) * n];
        for (o, &wv) in out.iter_mut().zip(row) {
            *o = *o + xj * wv;
        }
    }
}

fn relu<F: NetFloat>(v: &mut [F]) {
    for x in v {
        if !(*x > F::zero()) {
            *x = F::zero();
        }
    }
}

/// Elementwise max with lowest-index ties.
fn max_route<F: NetFloat>(items: &[&[F]], width: usize) -> (Vec<F>, Vec<usize>) {
    let mut best = items[0].to_vec();
    let mut arg = vec![0; width];
    for (i, v) in items.iter().enumerate().skip(1) {
        for k in 0..width {
            if v[k] > best[k] {
                best[k] = v[k];
                arg[k] = i;
            }
        }
    }
    (best, arg)
}

impl<F: NetFloat> QNetwork<F> {
    /// Uniform `[-1/√fan_in, 1/√fan_in]` initialization from `rng`.
    pub fn new(input: usize, width: usize, table_hash: &str, rng: &mut crate::rng::Rng) -> Self {
        let shapes = Self::shapes_for(input, width);
        let tensors = shapes
            .iter()
            .map(|&(fan_in, fan_out, is_bias)| {
                let bound = 1.0 / (fan_in as f64).sqrt();
                let len = if is_bias { fan_out } else { fan_in * fan_out };
                (0..len)
                    .map(|_| F::from_f64(rng.gen_range(-bound..=bound)).unwrap())
                    .collect()
            })
            .collect();
        Self {
            input,
            width,
            params: Params { tensors },
            table_hash: table_hash.to_string(),
            version: 0,
        }
    }

    /// All-zero parameters.
    pub fn zeros(input: usize, width: usize, table_hash: &str) -> Self {
        let tensors = Self::shapes_for(input, width)
            .iter()
            .map(|&(i, o, bias)| vec![F::zero(); if bias { o } else { i * o }])
            .collect();
        Self {
            input,
            width,
            params: Params { tensors },
            table_hash: table_hash.to_string(),
            version: 0,
        }
    }

    /// `(fan_in, fan_out, is_bias)` per tensor.
    fn shapes_for(input: usize, width: usize) -> [(usize, usize, bool); 12] {
        let tower = |i: usize| [(i, width, false), (i, width, true), (width, width, false), (width, width, true)];
        let [a, b, c, d] = tower(input);
        [
            a,
            b,
            c,
            d,
            a,
            b,
            c,
            d,
            (width, width, false),
            (width, width, true),
            (width, 1, false),
            (width, 1, true),
        ]
    }

    /// Row-major shapes of the stored tensors.
    pub fn tensor_shapes(&self) -> Vec<Vec<usize>> {
        Self::shapes_for(self.input, self.width)
            .iter()
            .map(|&(i, o, bias)| if bias { vec![o] } else { vec![i, o] })
            .collect()
    }

    pub fn input_width(&self) -> usize {
        self.input
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn table_hash(&self) -> &str {
        &self.table_hash
    }

    /// Bumped on every parameter change; caches compare against it.
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn params(&self) -> &Params<F> {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut Params<F> {
        self.version += 1;
        &mut self.params
    }

    pub fn tower(&self, branch: Branch, z: &[F]) -> TowerActivations<F> {
        let o = branch.offset();
        let t = &self.params.tensors;
        let mut hidden = Vec::with_capacity(self.width);
        affine(&t[o], &t[o + 1], z, &mut hidden);
        relu(&mut hidden);
        let mut out = Vec::with_capacity(self.width);
        affine(&t[o + 2], &t[o + 3], &hidden, &mut out);
        relu(&mut out);
        TowerActivations { hidden, out }
    }

    /// Head applied to the aggregated vector; returns `(hidden, q)`.
    pub fn head(&self, h: &[F]) -> (Vec<F>, F) {
        let t = &self.params.tensors;
        let mut hidden = Vec::with_capacity(self.width);
        affine(&t[HEAD], &t[HEAD + 1], h, &mut hidden);
        relu(&mut hidden);
        let mut q = t[HEAD + 3][0];
        for (a, w) in hidden.iter().zip(&t[HEAD + 2]) {
            q = q + *a * *w;
        }
        (hidden, q)
    }

    /// Elementwise max of the two branch aggregates; an empty equality set
    /// leaves the memory aggregate.
    pub fn combine(&self, mem: &[F], eq: Option<&[F]>) -> Vec<F> {
        match eq {
            None => mem.to_vec(),
            Some(e) => mem.iter().zip(e).map(|(a, b)| if *b > *a { *b } else { *a }).collect(),
        }
    }

    fn check_input(&self, z: &[Vec<F>]) -> Result<(), NetError> {
        match z.iter().find(|v| v.len() != self.input) {
            Some(v) => Err(NetError::InputWidth {
                expected: self.input,
                got: v.len(),
            }),
            None => Ok(()),
        }
    }

    pub fn forward(&self, input: &StateActionInput<F>) -> Result<Forward<F>, NetError> {
        if input.mem.is_empty() {
            return Err(NetError::EmptyMemory);
        }
        self.check_input(&input.mem)?;
        self.check_input(&input.eq)?;
        let mem: Vec<_> = input.mem.iter().map(|z| self.tower(Branch::Memory, z)).collect();
        let eq: Vec<_> = input.eq.iter().map(|z| self.tower(Branch::Equality, z)).collect();
        let (vm, am) = max_route(&mem.iter().map(|a| a.out.as_slice()).collect::<Vec<_>>(), self.width);
        let mut route: Vec<(Branch, usize)> = am.into_iter().map(|i| (Branch::Memory, i)).collect();
        let h = if eq.is_empty() {
            vm
        } else {
            let (ve, ae) = max_route(&eq.iter().map(|a| a.out.as_slice()).collect::<Vec<_>>(), self.width);
            for k in 0..self.width {
                if ve[k] > vm[k] {
                    route[k] = (Branch::Equality, ae[k]);
                }
            }
            self.combine(&vm, Some(&ve))
        };
        let (head_hidden, q) = self.head(&h);
        Ok(Forward {
            mem,
            eq,
            route,
            h,
            head_hidden,
            q,
        })
    }

    /// Accumulates `upstream * dq/dθ` into `grads`.
    pub fn backward(&self, input: &StateActionInput<F>, fwd: &Forward<F>, upstream: F, grads: &mut Params<F>) {
        let t = &self.params.tensors;
        let w = self.width;
        let g = &mut grads.tensors;
        // head
        g[HEAD + 3][0] = g[HEAD + 3][0] + upstream;
        let mut d_hidden = vec![F::zero(); w];
        for k in 0..w {
            g[HEAD + 2][k] = g[HEAD + 2][k] + upstream * fwd.head_hidden[k];
            if fwd.head_hidden[k] > F::zero() {
                d_hidden[k] = upstream * t[HEAD + 2][k];
            }
        }
        let mut d_h = vec![F::zero(); w];
        for (k, &dk) in d_hidden.iter().enumerate() {
            if dk == F::zero() {
                continue;
            }
            g[HEAD + 1][k] = g[HEAD + 1][k] + dk;
            for j in 0..w {
                g[HEAD][j * w + k] = g[HEAD][j * w + k] + fwd.h[j] * dk;
                d_h[j] = d_h[j] + t[HEAD][j * w + k] * dk;
            }
        }
        // route to tower elements
        let mut per_elem: Vec<((Branch, usize), Vec<F>)> = Vec::new();
        for (k, &(branch, i)) in fwd.route.iter().enumerate() {
            if d_h[k] == F::zero() {
                continue;
            }
            let pos = match per_elem.iter().position(|(key, _)| *key == (branch, i)) {
                Some(p) => p,
                None => {
                    per_elem.push(((branch, i), vec![F::zero(); w]));
                    per_elem.len() - 1
                }
            };
            per_elem[pos].1[k] = d_h[k];
        }
        for ((branch, i), d_out) in per_elem {
            let (acts, z) = match branch {
                Branch::Memory => (&fwd.mem[i], &input.mem[i]),
                Branch::Equality => (&fwd.eq[i], &input.eq[i]),
            };
            self.tower_backward(branch, z, acts, &d_out, g);
        }
    }

    fn tower_backward(&self, branch: Branch, z: &[F], acts: &TowerActivations<F>, d_out: &[F], g: &mut [Vec<F>]) {
        let o = branch.offset();
        let t = &self.params.tensors;
        let w = self.width;
        let mut d_pre2 = vec![F::zero(); w];
        for k in 0..w {
            if acts.out[k] > F::zero() {
                d_pre2[k] = d_out[k];
            }
        }
        let mut d_hidden = vec![F::zero(); w];
        for (k, &dk) in d_pre2.iter().enumerate() {
            if dk == F::zero() {
                continue;
            }
            g[o + 3][k] = g[o + 3][k] + dk;
            for j in 0..w {
                g[o + 2][j * w + k] = g[o + 2][j * w + k] + acts.hidden[j] * dk;
                d_hidden[j] = d_hidden[j] + t[o + 2][j * w + k] * dk;
            }
        }
        for k in 0..w {
            if !(acts.hidden[k] > F::zero()) || d_hidden[k] == F::zero() {
                continue;
            }
            let dk = d_hidden[k];
            g[o + 1][k] = g[o + 1][k] + dk;
            for (j, &zj) in z.iter().enumerate() {
                if zj != F::zero() {
                    g[o][j * w + k] = g[o][j * w + k] + zj * dk;
                }
            }
        }
    }

    /// Fails on the first non-finite parameter.
    pub fn check_finite(&self) -> Result<(), NetError> {
        for (name, t) in TENSOR_NAMES.iter().zip(&self.params.tensors) {
            if t.iter().any(|v| !v.is_finite()) {
                return Err(NetError::NonFinite((*name).to_string()));
            }
        }
        Ok(())
    }

    /// Converts to another float type.
    pub fn cast<G: NetFloat>(&self) -> QNetwork<G> {
        QNetwork {
            input: self.input,
            width: self.width,
            params: Params {
                tensors: self
                    .params
                    .tensors
                    .iter()
                    .map(|t| t.iter().map(|v| G::from(*v).unwrap()).collect())
                    .collect(),
            },
            table_hash: self.table_hash.clone(),
            version: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn random_input(rng: &mut crate::rng::Rng, input: usize, mem: usize, eq: usize) -> StateActionInput<f64> {
        let mut v = |k: usize| -> Vec<Vec<f64>> {
            (0..k)
                .map(|_| (0..input).map(|_| if rng.gen_bool(0.5) { rng.gen_range(-2.0..2.0) } else { 0.0 }).collect())
                .collect()
        };
        StateActionInput { mem: v(mem), eq: v(eq) }
    }

    #[test]
    fn zero_network_is_constant() {
        let net = QNetwork::<f64>::zeros(5, 4, "h");
        let mut rng = stream(1, "t");
        let a = random_input(&mut rng, 5, 3, 2);
        assert_eq!(net.forward(&a).unwrap().q, 0.0);
        let mut net = net;
        net.params_mut().tensors[11][0] = 0.25;
        assert_eq!(net.forward(&a).unwrap().q, 0.25);
    }

    #[test]
    fn empty_memory_rejected() {
        let net = QNetwork::<f64>::zeros(5, 4, "h");
        let r = net.forward(&StateActionInput { mem: vec![], eq: vec![] });
        assert!(matches!(r, Err(NetError::EmptyMemory)));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = stream(3, "grad");
        for trial in 0..5 {
            let net = QNetwork::<f64>::new(6, 8, "h", &mut rng);
            let input = random_input(&mut rng, 6, 4, if trial % 2 == 0 { 3 } else { 0 });
            let fwd = net.forward(&input).unwrap();
            let mut g = net.params().zeros_like();
            net.backward(&input, &fwd, 1.0, &mut g);
            let mut probe = net.clone();
            for flat in (0..g.len()).step_by(7) {
                let x = net.params().get(flat);
                let eps = 1e-6;
                probe.params_mut().set(flat, x + eps);
                let up = probe.forward(&input).unwrap().q;
                probe.params_mut().set(flat, x - eps);
                let down = probe.forward(&input).unwrap().q;
                probe.params_mut().set(flat, x);
                let fd = (up - down) / (2.0 * eps);
                let an = g.get(flat);
                assert!((fd - an).abs() <= 1e-5 * (1.0 + fd.abs().max(an.abs())), "{flat}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn memory_order_invariance() {
        let mut rng = stream(4, "order");
        let net = QNetwork::<f64>::new(6, 8, "h", &mut rng);
        let input = random_input(&mut rng, 6, 5, 3);
        let mut shuffled = input.clone();
        shuffled.mem.reverse();
        shuffled.eq.rotate_left(1);
        assert_eq!(net.forward(&input).unwrap().q, net.forward(&shuffled).unwrap().q);
    }

    #[test]
    fn generic_f32() {
        let mut rng = stream(5, "f32");
        let net = QNetwork::<f64>::new(6, 8, "h", &mut rng);
        let input = random_input(&mut rng, 6, 3, 2);
        let q64 = net.forward(&input).unwrap().q;
        let net32: QNetwork<f32> = net.cast();
        let input32 = StateActionInput {
            mem: input.mem.iter().map(|v| v.iter().map(|&x| x as f32).collect()).collect(),
            eq: input.eq.iter().map(|v| v.iter().map(|&x| x as f32).collect()).collect(),
        };
        assert!((net32.forward(&input32).unwrap().q as f64 - q64).abs() < 1e-4);
    }
}
