//! Dinic max-flow with f64 capacities, used for the Lagrangian min-cut solves.

pub struct MaxFlow {
    to: Vec<usize>,
    cap: Vec<f64>,
    adj: Vec<Vec<usize>>,
    min_pos_cap: f64,
}

impl MaxFlow {
    pub fn new(nodes: usize) -> Self {
        MaxFlow {
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
            min_pos_cap: f64::INFINITY,
        }
    }

    /// Arc u→v with capacity `cap` and reverse capacity `rcap`.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: f64, rcap: f64) {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(rcap);
        self.adj[v].push(id + 1);
        for c in [cap, rcap] {
            if c > 0.0 {
                self.min_pos_cap = self.min_pos_cap.min(c);
            }
        }
    }

    /// Saturation threshold: tied to the smallest real capacity so huge
    /// Lagrangian source arcs cannot drown out mesh edges.
    fn eps(&self) -> f64 {
        if self.min_pos_cap.is_finite() {
            self.min_pos_cap * 1e-12
        } else {
            0.0
        }
    }

    fn bfs(&self, s: usize, t: usize, eps: f64) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > eps && level[v] == u32::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (level[t] != u32::MAX).then_some(level)
    }

    fn dfs(
        &mut self,
        u: usize,
        t: usize,
        pushed: f64,
        level: &[u32],
        iter: &mut [usize],
        eps: f64,
    ) -> f64 {
        if u == t {
            return pushed;
        }
        while iter[u] < self.adj[u].len() {
            let a = self.adj[u][iter[u]];
            let v = self.to[a];
            if self.cap[a] > eps && level[v] == level[u] + 1 {
                let d = self.dfs(v, t, pushed.min(self.cap[a]), level, iter, eps);
                if d > eps {
                    self.cap[a] -= d;
                    self.cap[a ^ 1] += d;
                    return d;
                }
            }
            iter[u] += 1;
        }
        0.0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let eps = self.eps();
        let mut flow = 0.0;
        while let Some(level) = self.bfs(s, t, eps) {
            let mut iter = vec![0usize; self.adj.len()];
            loop {
                let d = self.dfs(s, t, f64::INFINITY, &level, &mut iter, eps);
                if d <= eps {
                    break;
                }
                flow += d;
            }
        }
        flow
    }

    /// Nodes reachable from `s` in the residual graph: the minimal source side
    /// of the min cut. Call after `max_flow`.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let eps = self.eps();
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > eps && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}
