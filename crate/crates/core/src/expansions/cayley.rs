use crate::semigroup::FiniteSemigroup;

use super::graph::RootedGraph;

/// `RCay(S¹, A)`: one vertex per element of `S¹` (vertex id = element id),
/// rooted at `𝟙`, with an edge `s →a→ s·a` for every element and generator.
pub fn right_cayley(s: &FiniteSemigroup) -> RootedGraph {
    let mut g = RootedGraph::new();
    for e in 0..s.len() {
        g.add_vertex(s.name(e));
    }
    for e in 0..s.len() {
        for a in 0..s.generator_count() {
            g.add_edge(e, a, s.right_mul(e, a));
        }
    }
    g.set_root(s.identity());
    g
}
