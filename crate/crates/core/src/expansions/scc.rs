use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::graph::{EdgeId, RootedGraph, VertexId};

/// Strongly connected components and their condensation.
///
/// Components are numbered in topological order of the condensation, so
/// every edge between components goes from a smaller to a larger id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<VertexId>>,
    pub component_dag: BTreeSet<(usize, usize)>,
}

impl SccDecomposition {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn same(&self, v: VertexId, w: VertexId) -> bool {
        self.component_of[v] == self.component_of[w]
    }

    /// Whether the component of `v` contains a cycle (more than one vertex,
    /// or a self-loop).
    pub fn is_cyclic(&self, g: &RootedGraph, v: VertexId) -> bool {
        let c = self.component_of[v];
        self.components[c].len() > 1
            || g.out_edges(v).iter().any(|&e| g.edge(e).target == v)
    }
}

pub fn scc(g: &RootedGraph) -> SccDecomposition {
    let mut pg: DiGraph<(), ()> = DiGraph::with_capacity(g.vertex_count(), g.edge_count());
    for _ in 0..g.vertex_count() {
        pg.add_node(());
    }
    for e in g.edges() {
        pg.add_edge(NodeIndex::new(e.source), NodeIndex::new(e.target), ());
    }
    // tarjan_scc yields components in reverse topological order
    let mut raw = tarjan_scc(&pg);
    raw.reverse();
    let mut component_of = vec![0; g.vertex_count()];
    let mut components = Vec::with_capacity(raw.len());
    for (c, comp) in raw.into_iter().enumerate() {
        let mut vs: Vec<VertexId> = comp.into_iter().map(|n| n.index()).collect();
        vs.sort_unstable();
        for &v in &vs {
            component_of[v] = c;
        }
        components.push(vs);
    }
    let component_dag = g
        .edges()
        .iter()
        .map(|e| (component_of[e.source], component_of[e.target]))
        .filter(|(a, b)| a != b)
        .collect();
    SccDecomposition {
        component_of,
        components,
        component_dag,
    }
}

/// Edges whose endpoints lie in different strongly connected components.
pub fn transition_edges(g: &RootedGraph, d: &SccDecomposition) -> BTreeSet<EdgeId> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !d.same(e.source, e.target))
        .map(|(id, _)| id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_is_one_component() {
        let mut g = RootedGraph::new();
        let v = g.add_vertex("v");
        g.add_edge(v, 0, v);
        let d = scc(&g);
        assert_eq!(d.count(), 1);
        assert!(d.is_cyclic(&g, v));
        assert!(transition_edges(&g, &d).is_empty());
    }

    #[test]
    fn topological_numbering() {
        let mut g = RootedGraph::new();
        let r = g.add_vertex("r");
        let u = g.add_vertex("u");
        let w = g.add_vertex("w");
        g.add_edge(r, 0, u);
        g.add_edge(u, 0, w);
        g.add_edge(w, 0, u);
        let d = scc(&g);
        assert_eq!(d.count(), 2);
        assert!(d.same(u, w));
        assert!(d.component_of[r] < d.component_of[u]);
        assert_eq!(transition_edges(&g, &d), BTreeSet::from([0]));
        assert!(!d.is_cyclic(&g, r));
    }
}
