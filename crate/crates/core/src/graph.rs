//! Simple undirected graphs and the directed-bond coordinate system.
//!
//! Edge `k` (stored with endpoints `i < j`) owns the directed bonds
//! `2k = i→j` and `2k+1 = j→i`, so reversal is `d ^ 1`. Every matrix indexed by
//! bonds inherits this order.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Clone, Debug)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<f64>>,
    /// `(neighbour, edge index)` per vertex, in edge order.
    adjacency: Vec<Vec<(usize, usize)>>,
    edge_lookup: HashMap<(usize, usize), usize>,
    connected: bool,
}

impl Graph {
    /// Validates and builds a graph. Endpoints may be given in either order.
    pub fn new(num_vertices: usize, edges: &[(usize, usize)], weights: Option<Vec<f64>>) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::NoVertices);
        }
        if let Some(w) = &weights {
            if w.len() != edges.len() {
                return Err(Error::WeightCountMismatch {
                    weights: w.len(),
                    edges: edges.len(),
                });
            }
            if let Some((index, &weight)) = w.iter().enumerate().find(|(_, &x)| !(x > 0.0 && x.is_finite())) {
                return Err(Error::NonPositiveWeight { index, weight });
            }
        }
        let mut adjacency = vec![Vec::new(); num_vertices];
        let mut edge_lookup = HashMap::with_capacity(edges.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for (index, &(a, b)) in edges.iter().enumerate() {
            for vertex in [a, b] {
                if vertex >= num_vertices {
                    return Err(Error::VertexOutOfRange {
                        index,
                        vertex,
                        num_vertices,
                    });
                }
            }
            if a == b {
                return Err(Error::SelfLoop { index, vertex: a });
            }
            let (u, v) = (a.min(b), a.max(b));
            if edge_lookup.insert((u, v), index).is_some() {
                return Err(Error::DuplicateEdge { index, u, v });
            }
            adjacency[u].push((v, index));
            adjacency[v].push((u, index));
            normalized.push((u, v));
        }
        let connected = bfs_reaches_all(&adjacency);
        Ok(Self {
            num_vertices,
            edges: normalized,
            weights,
            adjacency,
            edge_lookup,
            connected,
        })
    }

    pub fn unweighted(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(num_vertices, edges, None)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j)` with `i < j`, in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Weight of edge `k`; 1 for unweighted graphs.
    pub fn weight(&self, k: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[k])
    }

    /// The same graph with every weight set to 1.
    pub fn with_unit_weights(&self) -> Graph {
        let mut g = self.clone();
        g.weights = Some(vec![1.0; self.edges.len()]);
        g
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().map(|&(j, _)| j)
    }

    /// `(neighbour, edge index)` pairs at vertex `i`.
    pub fn incident(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn edge_between(&self, i: usize, j: usize) -> Option<usize> {
        self.edge_lookup.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge_between(i, j).is_some()
    }

    pub fn valency(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn degrees(&self) -> VertexDegrees {
        let valency = (0..self.num_vertices).map(|i| self.valency(i)).collect();
        let weighted_valency = (0..self.num_vertices)
            .map(|i| self.adjacency[i].iter().map(|&(_, k)| self.weight(k)).sum())
            .collect();
        VertexDegrees {
            valency,
            weighted_valency,
        }
    }

    /// The common valency if every vertex has the same one.
    pub fn regular_valency(&self) -> Option<usize> {
        let v = self.valency(0);
        (1..self.num_vertices).all(|i| self.valency(i) == v).then_some(v)
    }

    pub fn require_regular(&self) -> Result<usize> {
        self.regular_valency().ok_or(Error::NotRegular)
    }

    /// Number of independent cycles, `B − V + 1`.
    pub fn rank(&self) -> Result<usize> {
        if !self.connected {
            return Err(Error::Disconnected);
        }
        Ok(self.num_edges() + 1 - self.num_vertices)
    }

    /// 0/1 adjacency matrix.
    pub fn connectivity_matrix(&self) -> ComplexMatrix {
        self.adjacency_with(|_| 1.0)
    }

    /// Adjacency matrix carrying the edge weights.
    pub fn weighted_connectivity_matrix(&self) -> ComplexMatrix {
        self.adjacency_with(|k| self.weight(k))
    }

    fn adjacency_with(&self, w: impl Fn(usize) -> f64) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.num_vertices, self.num_vertices);
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            m[(i, j)].re = w(k);
            m[(j, i)].re = w(k);
        }
        m
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![None; self.num_vertices];
        for root in 0..self.num_vertices {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(false);
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                let s = side[i].unwrap();
                for j in self.neighbors(i) {
                    match side[j] {
                        None => {
                            side[j] = Some(!s);
                            queue.push_back(j);
                        }
                        Some(t) if t == s => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    pub fn directed_bonds(&self) -> DirectedBondSpace {
        DirectedBondSpace::new(self)
    }
}

fn bfs_reaches_all(adjacency: &[Vec<(usize, usize)>]) -> bool {
    let mut seen = vec![false; adjacency.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut count = 1;
    while let Some(i) = queue.pop_front() {
        for &(j, _) in &adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                queue.push_back(j);
            }
        }
    }
    count == adjacency.len()
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexDegrees {
    pub valency: Vec<usize>,
    pub weighted_valency: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct DirectedBondSpace {
    origin: Vec<usize>,
    terminus: Vec<usize>,
    weight: Vec<f64>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl DirectedBondSpace {
    fn new(g: &Graph) -> Self {
        let n = 2 * g.num_edges();
        let mut origin = Vec::with_capacity(n);
        let mut terminus = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        let mut outgoing = vec![Vec::new(); g.num_vertices()];
        let mut incoming = vec![Vec::new(); g.num_vertices()];
        for (k, &(i, j)) in g.edges().iter().enumerate() {
            for (o, t) in [(i, j), (j, i)] {
                let d = origin.len();
                origin.push(o);
                terminus.push(t);
                weight.push(g.weight(k));
                outgoing[o].push(d);
                incoming[t].push(d);
            }
        }
        Self {
            origin,
            terminus,
            weight,
            outgoing,
            incoming,
        }
    }

    pub fn len(&self) -> usize {
        self.origin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origin.is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.outgoing.len()
    }

    pub fn origin(&self, d: usize) -> usize {
        self.origin[d]
    }

    pub fn terminus(&self, d: usize) -> usize {
        self.terminus[d]
    }

    pub fn reversal(&self, d: usize) -> usize {
        d ^ 1
    }

    pub fn edge(&self, d: usize) -> usize {
        d / 2
    }

    pub fn weight(&self, d: usize) -> f64 {
        self.weight[d]
    }

    /// Bonds leaving vertex `i`, ascending.
    pub fn outgoing(&self, i: usize) -> &[usize] {
        &self.outgoing[i]
    }

    /// Bonds entering vertex `i`, ascending.
    pub fn incoming(&self, i: usize) -> &[usize] {
        &self.incoming[i]
    }

    /// Bonds that may follow `d`, i.e. those leaving `t(d)`.
    pub fn successors(&self, d: usize) -> &[usize] {
        &self.outgoing[self.terminus[d]]
    }

    pub fn follows(&self, d: usize, next: usize) -> bool {
        self.terminus[d] == self.origin[next]
    }

    /// Non-backtracking (Hashimoto) matrix `W_{d',d} = [d' follows d][d' ≠ d̂]`.
    pub fn non_backtracking_matrix(&self) -> ComplexMatrix {
        let n = self.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for d in 0..n {
            for &e in self.successors(d) {
                if e != self.reversal(d) {
                    m[(e, d)].re = 1.0;
                }
            }
        }
        m
    }
}
