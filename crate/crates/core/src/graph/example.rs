//! The four-vertex lasso: a triangle on vertices 2, 3, 4 with vertex 1 hanging off 2
//! (1-based), every edge weight −1.

use crate::graph::{Edge, WeightedGraph};

pub const LASSO_POTENTIALS: [f64; 4] = [1.0, 2.0, 4.0, 5.0];

pub fn lasso_with(potentials: [f64; 4]) -> WeightedGraph {
    WeightedGraph::new(
        4,
        vec![
            Edge::new(0, 1, -1.0),
            Edge::new(1, 2, -1.0),
            Edge::new(1, 3, -1.0),
            Edge::new(2, 3, -1.0),
        ],
        potentials.to_vec(),
    )
    .expect("lasso is a valid graph")
}

pub fn lasso() -> WeightedGraph {
    lasso_with(LASSO_POTENTIALS)
}
