use std::collections::HashSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: f64) -> Self {
        Edge { u, v, w }
    }

    /// The endpoints as `(min, max)`.
    pub fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// A connected simple graph with nonzero edge weights and a potential on every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    potentials: Vec<f64>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl WeightedGraph {
    pub fn new(num_vertices: usize, edges: Vec<Edge>, potentials: Vec<f64>) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if potentials.len() != num_vertices {
            return Err(Error::InvalidGraph(format!(
                "{} potentials for {num_vertices} vertices",
                potentials.len()
            )));
        }
        if let Some(q) = potentials.iter().find(|q| !q.is_finite()) {
            return Err(Error::InvalidGraph(format!("non-finite potential {q}")));
        }
        let mut seen = HashSet::new();
        let mut adjacency = vec![Vec::new(); num_vertices];
        for e in &edges {
            if e.u >= num_vertices || e.v >= num_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) refers to a vertex outside 0..{num_vertices}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {}", e.u)));
            }
            if e.w == 0.0 || !e.w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has weight {}; weights must be finite and nonzero",
                    e.u, e.v, e.w
                )));
            }
            if !seen.insert(e.key()) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", e.u, e.v)));
            }
            adjacency[e.u].push(e.v);
            adjacency[e.v].push(e.u);
        }
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        let g = WeightedGraph {
            potentials,
            edges,
            adjacency,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn num_vertices(&self) -> usize {
        self.potentials.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn potentials(&self) -> &[f64] {
        &self.potentials
    }

    /// Neighbors of `u` in ascending order.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    /// First Betti number `|E| − |V| + 1`.
    pub fn beta(&self) -> usize {
        self.edges.len() + 1 - self.num_vertices()
    }

    pub fn is_tree(&self) -> bool {
        self.beta() == 0
    }

    /// Weight of the edge `{u, v}`, if present.
    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().find(|e| e.key() == key).map(|e| e.w)
    }

    /// Real symmetric matrix with the potentials on the diagonal and edge weights off it.
    pub fn real_matrix(&self) -> DMatrix<f64> {
        let n = self.num_vertices();
        let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.potentials));
        for e in &self.edges {
            h[(e.u, e.v)] = e.w;
            h[(e.v, e.u)] = e.w;
        }
        debug_assert_eq!(h.nrows(), n);
        h
    }
}

pub fn build_h(g: &WeightedGraph) -> HermitianMatrix {
    HermitianMatrix::from_real(&g.real_matrix()).expect("graph matrix is symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = WeightedGraph::new(2, vec![Edge::new(0, 1, -1.0)], vec![0.0, 0.0]).unwrap();
        let h = build_h(&g);
        assert_eq!(h, HermitianMatrix::from_real_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap());
        assert!(g.is_tree());
    }

    #[test]
    fn path_is_tridiagonal() {
        let g = WeightedGraph::new(
            3,
            vec![Edge::new(0, 1, -1.0), Edge::new(1, 2, 0.5)],
            vec![1.0, 2.0, 3.0],
        )
        .unwrap();
        let h = g.real_matrix();
        assert_eq!(h[(0, 2)], 0.0);
        assert_eq!(h[(1, 2)], 0.5);
        assert_eq!(h[(2, 2)], 3.0);
    }

    #[test]
    fn invalid_graphs_rejected() {
        let pot = vec![0.0; 3];
        let loops = WeightedGraph::new(3, vec![Edge::new(1, 1, 1.0)], pot.clone());
        assert!(matches!(loops, Err(Error::InvalidGraph(_))));
        let dup = WeightedGraph::new(
            3,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 0, 2.0), Edge::new(1, 2, 1.0)],
            pot.clone(),
        );
        assert!(matches!(dup, Err(Error::InvalidGraph(_))));
        let zero = WeightedGraph::new(2, vec![Edge::new(0, 1, 0.0)], vec![0.0; 2]);
        assert!(matches!(zero, Err(Error::InvalidGraph(_))));
        let split = WeightedGraph::new(3, vec![Edge::new(0, 1, 1.0)], pot);
        assert!(matches!(split, Err(Error::Disconnected)));
    }
}
