use super::{Graph, GraphError};

/// Largest instance the exact oracle accepts.
pub const MAX_ALPHA_NODES: usize = 30;

struct Search {
    adj: Vec<u64>,
    best: u64,
    best_size: u32,
}

impl Search {
    /// Greedy clique cover of `cand`; each clique holds at most one stable node.
    fn cover_bound(&self, mut cand: u64) -> u32 {
        let mut cliques = 0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique_ok = self.adj[v] & cand;
            cand &= !(1 << v);
            while clique_ok != 0 {
                let u = clique_ok.trailing_zeros() as usize;
                cand &= !(1 << u);
                clique_ok &= self.adj[u];
            }
            cliques += 1;
        }
        cliques
    }

    fn run(&mut self, chosen: u64, cand: u64) {
        let size = chosen.count_ones();
        if cand == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = chosen;
            }
            return;
        }
        if size + self.cover_bound(cand) <= self.best_size {
            return;
        }
        // branch on the candidate with most candidate neighbours
        let mut v = cand.trailing_zeros() as usize;
        let mut most = 0;
        let mut rest = cand;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[u] & cand).count_ones();
            if d > most {
                most = d;
                v = u;
            }
        }
        self.run(chosen | 1 << v, cand & !(1 << v) & !self.adj[v]);
        if most > 0 {
            self.run(chosen, cand & !(1 << v));
        }
    }
}

/// Exact α(G) with a witness, by branch and bound with a greedy
/// clique-cover bound. Returns 0-based nodes in increasing order.
pub fn max_stable_set(g: &Graph) -> Result<(usize, Vec<usize>), GraphError> {
    let n = g.n();
    if n > MAX_ALPHA_NODES {
        return Err(GraphError::TooLarge {
            n,
            limit: MAX_ALPHA_NODES,
        });
    }
    let mut adj = vec![0u64; n];
    for (a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let mut s = Search {
        adj,
        best: 0,
        best_size: 0,
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    s.run(0, all);
    let witness: Vec<usize> = (0..n).filter(|&v| s.best >> v & 1 == 1).collect();
    Ok((witness.len(), witness))
}
