//! Maximum flow with exact rational capacities.
//!
//! The networks here are tiny (a dozen nodes), so a plain shortest-augmenting
//! path search is more than enough. Capacities and flows are rationals, which
//! keeps downstream feasibility checks exact.

use crate::num::Rat;
use num_traits::{Signed, Zero};
use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Edge {
    to: usize,
    cap: Rat,
}

/// A directed flow network over nodes `0..n`.
#[derive(Clone, Debug)]
pub struct FlowNet {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

/// Handle to an edge added with [`FlowNet::add_edge`], usable to read back
/// the flow it carries after [`FlowNet::max_flow`].
#[derive(Clone, Copy, Debug)]
pub struct EdgeId(usize);

impl FlowNet {
    pub fn new(nodes: usize) -> FlowNet {
        FlowNet { adj: vec![Vec::new(); nodes], edges: Vec::new() }
    }

    pub fn nodes(&self) -> usize {
        self.adj.len()
    }

    /// Adds a directed edge with the given capacity. Panics on a negative
    /// capacity.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: Rat) -> EdgeId {
        assert!(!cap.is_negative(), "edge capacity must be nonnegative");
        let id = self.edges.len();
        self.adj[from].push(id);
        self.edges.push(Edge { to, cap });
        self.adj[to].push(id + 1);
        self.edges.push(Edge { to: from, cap: Rat::zero() });
        EdgeId(id)
    }

    /// Runs max flow from `s` to `t` and returns its value. Residual state is
    /// kept, so [`FlowNet::flow_on`] reports per-edge flows afterwards.
    pub fn max_flow(&mut self, s: usize, t: usize) -> Rat {
        assert_ne!(s, t, "source and sink must differ");
        let mut total = Rat::zero();
        loop {
            // Breadth-first search for a shortest residual path.
            let mut prev_edge: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            'bfs: while let Some(u) = queue.pop_front() {
                for &eid in &self.adj[u] {
                    let e = &self.edges[eid];
                    if !seen[e.to] && e.cap.is_positive() {
                        seen[e.to] = true;
                        prev_edge[e.to] = Some(eid);
                        if e.to == t {
                            break 'bfs;
                        }
                        queue.push_back(e.to);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            // Bottleneck along the path, then push.
            let mut bottleneck: Option<Rat> = None;
            let mut v = t;
            while let Some(eid) = prev_edge[v] {
                let cap = &self.edges[eid].cap;
                if bottleneck.as_ref().is_none_or(|b| cap < b) {
                    bottleneck = Some(cap.clone());
                }
                v = self.edges[eid ^ 1].to;
            }
            let push = bottleneck.expect("path found implies at least one edge");
            let mut v = t;
            while let Some(eid) = prev_edge[v] {
                self.edges[eid].cap -= &push;
                self.edges[eid ^ 1].cap += &push;
                v = self.edges[eid ^ 1].to;
            }
            total += push;
        }
    }

    /// Flow currently carried by `edge`, equal to the capacity moved onto its
    /// reverse twin.
    pub fn flow_on(&self, edge: EdgeId) -> &Rat {
        &self.edges[edge.0 ^ 1].cap
    }
}
