use std::collections::VecDeque;
use std::sync::Arc;

use rand::seq::index::sample;

use crate::env::{Action, ProverState};
use crate::graphs::Graph;
use crate::qnet::StateActionInput;
use crate::rng::Rng;
use crate::scalar::Rational;

/// One environment step. The state is stored compactly as the graph plus
/// the action history that led to it; `input` caches its features for the
/// taken action.
#[derive(Clone, Debug)]
pub struct Transition<F> {
    pub graph: Arc<Graph>,
    pub degree_cap: usize,
    pub history: Vec<Action>,
    pub action: Action,
    pub reward: f64,
    /// `max_a' q(s', a')` under the acting network at the time `s'` was seen.
    pub next_value: f64,
    pub terminal: bool,
    pub input: StateActionInput<F>,
}

impl<F> Transition<F> {
    /// Rebuilds the state before the action by replaying the history.
    pub fn state(&self) -> crate::Result<ProverState> {
        let mut s = ProverState::init(&self.graph, self.degree_cap)?;
        for a in &self.history {
            s.apply(*a)?;
        }
        Ok(s)
    }

    /// Recomputes the exact reward through the LP.
    pub fn exact_reward(&self) -> crate::Result<Rational> {
        Ok(self.state()?.apply(self.action)?)
    }

    pub fn target(&self, discount: f64) -> f64 {
        if self.terminal {
            self.reward
        } else {
            self.reward + discount * self.next_value
        }
    }
}

/// FIFO ring buffer with uniform sampling.
#[derive(Clone, Debug)]
pub struct ReplayBuffer<T> {
    capacity: usize,
    items: VecDeque<T>,
}

impl<T> ReplayBuffer<T> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self {
            capacity,
            items: VecDeque::with_capacity(capacity),
        }
    }

    pub fn push(&mut self, item: T) {
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(item);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.items.iter()
    }

    /// `min(k, len)` distinct items chosen uniformly.
    pub fn sample(&self, rng: &mut Rng, k: usize) -> Vec<&T> {
        let k = k.min(self.items.len());
        sample(rng, self.items.len(), k).into_iter().map(|i| &self.items[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifo_eviction() {
        let mut b = ReplayBuffer::new(3);
        for i in 0..5 {
            b.push(i);
        }
        assert_eq!(b.iter().copied().collect::<Vec<_>>(), [2, 3, 4]);
        let mut rng = crate::rng::stream(0, "replay");
        let s = b.sample(&mut rng, 10);
        assert_eq!(s.len(), 3);
    }
}
