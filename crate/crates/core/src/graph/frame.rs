use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::hermitian::{CMatrix, HermitianMatrix};

/// Spanning tree `T`, the ordered and oriented complement `C`, and the phases on `C`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MagneticFrame {
    pub tree_edges: Vec<(usize, usize)>,
    /// `(u_j, v_j)`: the phase `e^{iα_j}` multiplies `H[u_j, v_j]`.
    pub cycle_edges: Vec<(usize, usize)>,
    pub alpha0: Vec<f64>,
    pub alpha: Vec<f64>,
}

/// Accepts values within 1e-12 of 0 or ±π and snaps them.
fn snap_reference_phase(a: f64) -> Option<f64> {
    if a.abs() <= 1e-12 {
        Some(0.0)
    } else if (a.abs() - PI).abs() <= 1e-12 {
        Some(PI)
    } else {
        None
    }
}

impl MagneticFrame {
    /// Frame with the given oriented cycle edges; the remaining edges must form a spanning tree.
    pub fn new(
        g: &WeightedGraph,
        cycle_edges: Vec<(usize, usize)>,
        alpha0: Vec<f64>,
        alpha: Vec<f64>,
    ) -> Result<Self> {
        let beta = g.beta();
        if beta == 0 {
            return Err(Error::BetaZero);
        }
        if cycle_edges.len() != beta {
            return Err(Error::InvalidGraph(format!(
                "{} cycle edges given, the graph has beta = {beta}",
                cycle_edges.len()
            )));
        }
        if alpha0.len() != beta || alpha.len() != beta {
            return Err(Error::InvalidGraph(format!(
                "phase vectors must have length {beta} (got alpha0 {}, alpha {})",
                alpha0.len(),
                alpha.len()
            )));
        }
        let alpha0 = alpha0
            .iter()
            .map(|&a| {
                snap_reference_phase(a)
                    .ok_or_else(|| Error::InvalidGraph(format!("alpha0 entry {a} is not 0 or pi")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(a) = alpha.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidGraph(format!("non-finite phase {a}")));
        }
        let mut in_cycle = vec![false; g.edges().len()];
        for &(u, v) in &cycle_edges {
            let key = (u.min(v), u.max(v));
            let idx = g
                .edges()
                .iter()
                .position(|e| e.key() == key)
                .ok_or_else(|| Error::InvalidGraph(format!("cycle edge ({u}, {v}) is not an edge")))?;
            if in_cycle[idx] {
                return Err(Error::InvalidGraph(format!("cycle edge ({u}, {v}) listed twice")));
            }
            in_cycle[idx] = true;
        }
        let tree_edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .zip(&in_cycle)
            .filter(|(_, &c)| !c)
            .map(|(e, _)| e.key())
            .collect();
        if !spans(g.num_vertices(), &tree_edges) {
            return Err(Error::InvalidGraph(
                "edges outside the cycle set do not form a spanning tree".into(),
            ));
        }
        Ok(MagneticFrame {
            tree_edges,
            cycle_edges,
            alpha0,
            alpha,
        })
    }

    fn from_tree(g: &WeightedGraph, mut tree_edges: Vec<(usize, usize)>) -> Result<Self> {
        if g.beta() == 0 {
            return Err(Error::BetaZero);
        }
        tree_edges.sort_unstable();
        let mut cycle_edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|e| e.key())
            .filter(|k| tree_edges.binary_search(k).is_err())
            .collect();
        cycle_edges.sort_unstable();
        let beta = cycle_edges.len();
        Ok(MagneticFrame {
            tree_edges,
            cycle_edges,
            alpha0: vec![0.0; beta],
            alpha: vec![0.0; beta],
        })
    }

    pub fn beta(&self) -> usize {
        self.cycle_edges.len()
    }

    pub fn with_alpha(mut self, alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() != self.beta() {
            return Err(Error::InvalidGraph(format!(
                "alpha has length {}, expected {}",
                alpha.len(),
                self.beta()
            )));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn with_alpha0(mut self, alpha0: Vec<f64>) -> Result<Self> {
        if alpha0.len() != self.beta() {
            return Err(Error::InvalidGraph(format!(
                "alpha0 has length {}, expected {}",
                alpha0.len(),
                self.beta()
            )));
        }
        self.alpha0 = alpha0
            .iter()
            .map(|&a| {
                snap_reference_phase(a)
                    .ok_or_else(|| Error::InvalidGraph(format!("alpha0 entry {a} is not 0 or pi")))
            })
            .collect::<Result<_>>()?;
        Ok(self)
    }
}

fn spans(n: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Depth-first spanning tree from vertex 0.
///
/// Vertices are expanded in stack order with neighbors taken in ascending index; a vertex
/// joins the tree through the edge on which it is first discovered. Cycle edges come out
/// sorted and oriented from the smaller to the larger endpoint, with `α° = α = 0`.
pub fn spanning_tree(g: &WeightedGraph) -> Result<MagneticFrame> {
    let n = g.num_vertices();
    let mut discovered = vec![false; n];
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    let mut stack = vec![0];
    discovered[0] = true;
    while let Some(u) = stack.pop() {
        let fresh: Vec<usize> = g.neighbors(u).iter().copied().filter(|&v| !discovered[v]).collect();
        for &v in &fresh {
            discovered[v] = true;
            tree.push((u.min(v), u.max(v)));
        }
        // reversed so that the smallest neighbor is expanded first
        stack.extend(fresh.into_iter().rev());
    }
    if tree.len() + 1 != n {
        return Err(Error::Disconnected);
    }
    MagneticFrame::from_tree(g, tree)
}

/// Breadth-first spanning tree from vertex 0, same conventions as [`spanning_tree`].
pub fn bfs_tree(g: &WeightedGraph) -> Result<MagneticFrame> {
    let n = g.num_vertices();
    let mut seen = vec![false; n];
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                tree.push((u.min(v), u.max(v)));
                queue.push_back(v);
            }
        }
    }
    if tree.len() + 1 != n {
        return Err(Error::Disconnected);
    }
    MagneticFrame::from_tree(g, tree)
}

/// `H(α)` for the phases stored in the frame.
pub fn magnetic_h(g: &WeightedGraph, frame: &MagneticFrame) -> HermitianMatrix {
    magnetic_h_at(g, frame, &frame.alpha)
}

/// `H(α)_{u_j v_j} = e^{iα_j} H_{u_j v_j}` on the cycle edges, `H` elsewhere.
pub fn magnetic_h_at(g: &WeightedGraph, frame: &MagneticFrame, alpha: &[f64]) -> HermitianMatrix {
    assert_eq!(alpha.len(), frame.beta(), "one phase per cycle edge");
    let mut h: CMatrix = g.real_matrix().map(|x| Complex64::new(x, 0.0));
    for (&(u, v), &a) in frame.cycle_edges.iter().zip(alpha) {
        let z = Complex64::from_polar(1.0, a) * h[(u, v)];
        h[(u, v)] = z;
        h[(v, u)] = z.conj();
    }
    HermitianMatrix::new(h).expect("phase-twisted symmetric matrix is Hermitian")
}
