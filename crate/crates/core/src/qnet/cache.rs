use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::{Branch, NetError, QNetwork};
use crate::env::{Action, ProverState};
use crate::features::{Featurizer, TripletClassTable};
use crate::scalar::NetFloat;
use crate::Poly;

/// Feature vectors `z(m_i, f, a)` and `z(e_j, f, a)` for one action.
#[derive(Clone, Debug, PartialEq)]
pub struct StateActionInput<F> {
    pub mem: Vec<Vec<F>>,
    pub eq: Vec<Vec<F>>,
}

struct Features<'a> {
    inner: Featurizer<'a>,
    z: Vec<f64>,
}

impl<'a> Features<'a> {
    fn new(table: &'a TripletClassTable, f: &Poly) -> Result<Self, NetError> {
        Ok(Self {
            inner: Featurizer::new(table, f)?,
            z: vec![0.0; table.len()],
        })
    }

    fn z<F: NetFloat>(&mut self, m: &Poly, a: &Poly) -> Result<Vec<F>, NetError> {
        self.inner.featurize_into(m, a, &mut self.z)?;
        Ok(self.z.iter().map(|&v| F::from_f64(v).unwrap()).collect())
    }
}

fn product_of(state: &ProverState, action: Action) -> Result<&Poly, NetError> {
    state
        .candidates()
        .iter()
        .find(|c| c.action == action)
        .map(|c| &c.product)
        .ok_or_else(|| NetError::StaleCache(format!("{action:?} is not a legal action")))
}

/// Features of every memory entry and equality against the action's lemma.
pub fn features_for<F: NetFloat>(
    table: &TripletClassTable,
    state: &ProverState,
    action: Action,
) -> Result<StateActionInput<F>, NetError> {
    let a = product_of(state, action)?;
    let mut fz = Features::new(table, state.objective())?;
    let mem = state.memory().iter().map(|m| fz.z(&m.poly, a)).collect::<Result<_, _>>()?;
    let eq = state.equalities().iter().map(|e| fz.z(e, a)).collect::<Result<_, _>>()?;
    Ok(StateActionInput { mem, eq })
}

/// `q(s, a)` from scratch.
pub fn q_value<F: NetFloat>(
    net: &QNetwork<F>,
    table: &TripletClassTable,
    state: &ProverState,
    action: Action,
) -> Result<F, NetError> {
    Ok(net.forward(&features_for(table, state, action)?)?.q)
}

/// `q(s, a)` for every legal action without any caching.
pub fn q_all_actions_uncached<F: NetFloat>(
    net: &QNetwork<F>,
    table: &TripletClassTable,
    state: &ProverState,
) -> Result<Vec<F>, NetError> {
    state
        .candidates()
        .iter()
        .map(|c| q_value(net, table, state, c.action))
        .collect()
}

fn elementwise_max<F: NetFloat>(acc: &mut [F], v: &[F]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if *b > *a {
            *a = *b;
        }
    }
}

struct Entry<F> {
    mem_max: Vec<F>,
    eq_max: Option<Vec<F>>,
    stamp: usize,
}

/// Per-action running maxima of both towers for one episode and one fixed
/// parameter version. Old actions only fold in memory entries added since
/// their stamp.
pub struct ActionCache<'t, F> {
    net_version: Option<u64>,
    instance: Option<u64>,
    entries: HashMap<Action, Entry<F>>,
    features: Option<(u64, Features<'t>)>,
}

impl<F: NetFloat> Default for ActionCache<'_, F> {
    fn default() -> Self {
        Self::new()
    }
}

fn instance_key(state: &ProverState) -> u64 {
    let mut h = DefaultHasher::new();
    state.graph().hash(&mut h);
    state.objective().hash(&mut h);
    h.finish()
}

impl<'t, F: NetFloat> ActionCache<'t, F> {
    pub fn new() -> Self {
        Self {
            net_version: None,
            instance: None,
            entries: HashMap::new(),
            features: None,
        }
    }

    pub fn reset(&mut self) {
        *self = Self::new();
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// [`features_for`] reusing this cache's memoized objective sums.
    pub fn features_for(
        &mut self,
        table: &'t TripletClassTable,
        state: &ProverState,
        action: Action,
    ) -> Result<StateActionInput<F>, NetError> {
        let a = product_of(state, action)?;
        let fz = self.featurizer(table, state)?;
        let mem = state.memory().iter().map(|m| fz.z(&m.poly, a)).collect::<Result<_, _>>()?;
        let eq = state.equalities().iter().map(|e| fz.z(e, a)).collect::<Result<_, _>>()?;
        Ok(StateActionInput { mem, eq })
    }

    fn featurizer(&mut self, table: &'t TripletClassTable, state: &ProverState) -> Result<&mut Features<'t>, NetError> {
        let key = instance_key(state);
        if !matches!(&self.features, Some((k, _)) if *k == key) {
            self.features = Some((key, Features::new(table, state.objective())?));
        }
        Ok(&mut self.features.as_mut().unwrap().1)
    }

    /// `q(s, a)` for every legal action, in candidate order.
    pub fn q_all_actions(
        &mut self,
        net: &QNetwork<F>,
        table: &'t TripletClassTable,
        state: &ProverState,
    ) -> Result<Vec<F>, NetError> {
        if state.memory().is_empty() {
            return Err(NetError::EmptyMemory);
        }
        let key = instance_key(state);
        match (self.net_version, self.instance) {
            (Some(v), _) if v != net.version() => {
                return Err(NetError::StaleCache("network parameters changed".into()))
            }
            (_, Some(i)) if i != key => return Err(NetError::StaleCache("different problem instance".into())),
            _ => {}
        }
        self.net_version = Some(net.version());
        self.instance = Some(key);
        let memory = state.memory();
        if !matches!(&self.features, Some((k, _)) if *k == key) {
            self.features = Some((key, Features::new(table, state.objective())?));
        }
        let fz = &mut self.features.as_mut().unwrap().1;
        let mut out = Vec::with_capacity(state.candidates().len());
        for c in state.candidates() {
            let a = &c.product;
            let entry = match self.entries.get_mut(&c.action) {
                Some(e) => {
                    if e.stamp > memory.len() {
                        return Err(NetError::StaleCache(format!(
                            "entry for {:?} covers {} memory entries, state has {}",
                            c.action,
                            e.stamp,
                            memory.len()
                        )));
                    }
                    for m in &memory[e.stamp..] {
                        let v = net.tower(Branch::Memory, &fz.z(&m.poly, a)?).out;
                        elementwise_max(&mut e.mem_max, &v);
                    }
                    e.stamp = memory.len();
                    e
                }
                None => {
                    let mut mem_max: Option<Vec<F>> = None;
                    for m in memory {
                        let v = net.tower(Branch::Memory, &fz.z(&m.poly, a)?).out;
                        match &mut mem_max {
                            Some(acc) => elementwise_max(acc, &v),
                            None => mem_max = Some(v),
                        }
                    }
                    let mut eq_max: Option<Vec<F>> = None;
                    for e in state.equalities() {
                        let v = net.tower(Branch::Equality, &fz.z(e, a)?).out;
                        match &mut eq_max {
                            Some(acc) => elementwise_max(acc, &v),
                            None => eq_max = Some(v),
                        }
                    }
                    self.entries.entry(c.action).or_insert(Entry {
                        mem_max: mem_max.expect("memory is nonempty"),
                        eq_max,
                        stamp: memory.len(),
                    })
                }
            };
            let h = net.combine(&entry.mem_max, entry.eq_max.as_deref());
            out.push(net.head(&h).1);
        }
        let legal: HashSet<Action> = state.candidates().iter().map(|c| c.action).collect();
        self.entries.retain(|a, _| legal.contains(a));
        Ok(out)
    }
}
