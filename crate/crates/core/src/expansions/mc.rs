use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::semigroup::{ElemId, FiniteSemigroup, IDENTITY_NAME};

use super::graph::{EdgeId, RootedGraph, VertexId};
use super::kr::KrGraph;

pub const DEFAULT_MAX_MC: usize = 1_000_000;

/// A vertex of the McCammond expansion: a simple path of `KR` from the
/// root, identified by its label word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McVertex {
    pub word: Vec<usize>,
    pub kr_vertex: VertexId,
    /// The forward edge entering this vertex; `None` for the root.
    pub parent: Option<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct McGraph {
    pub graph: RootedGraph,
    pub vertices: Vec<McVertex>,
    /// `tree[e]` is true for forward (spanning tree) edges, false for
    /// back-edges.
    pub tree: Vec<bool>,
}

impl McGraph {
    /// Enumerates the simple paths of `kr` depth first, labels in generator
    /// order. An edge `p →a→` either extends `p` (forward edge) or returns to
    /// the unique prefix of `p` ending at the same KR vertex (back-edge).
    /// Vertices are numbered by word length, then lexicographically.
    pub fn build(kr: &KrGraph, s: &FiniteSemigroup, cap: usize) -> Result<Self> {
        let g = &kr.graph;
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut kr_of: Vec<VertexId> = vec![g.root()];
        let mut raw_edges: Vec<(usize, usize, usize, bool)> = Vec::new();
        let mut on_path: HashMap<VertexId, usize> = HashMap::from([(g.root(), 0)]);
        // (mc vertex, index of next out-edge to explore)
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];

        while let Some(top) = stack.last_mut() {
            let (p, i) = *top;
            let outs = g.out_edges(kr_of[p]);
            if i == outs.len() {
                on_path.remove(&kr_of[p]);
                stack.pop();
                continue;
            }
            top.1 += 1;
            let edge = g.edge(outs[i]);
            if let Some(&q) = on_path.get(&edge.target) {
                raw_edges.push((p, edge.label, q, false));
                continue;
            }
            if words.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "McCammond expansion size",
                    cap,
                });
            }
            let mut w = words[p].clone();
            w.push(edge.label);
            words.push(w);
            kr_of.push(edge.target);
            let child = words.len() - 1;
            raw_edges.push((p, edge.label, child, true));
            on_path.insert(edge.target, child);
            stack.push((child, 0));
        }

        let mut order: Vec<usize> = (0..words.len()).collect();
        order.sort_by(|&x, &y| {
            words[x]
                .len()
                .cmp(&words[y].len())
                .then_with(|| words[x].cmp(&words[y]))
        });
        let mut new_id = vec![0; words.len()];
        for (n, &old) in order.iter().enumerate() {
            new_id[old] = n;
        }

        let mut graph = RootedGraph::new();
        let mut vertices = Vec::with_capacity(words.len());
        for &old in &order {
            let name = if words[old].is_empty() {
                IDENTITY_NAME.to_string()
            } else {
                s.word_name(&words[old])
            };
            graph.add_vertex(name);
            vertices.push(McVertex {
                word: words[old].clone(),
                kr_vertex: kr_of[old],
                parent: None,
            });
        }
        graph.set_root(new_id[0]);
        raw_edges.sort_by_key(|&(p, a, _, _)| (new_id[p], a));
        let mut tree = Vec::with_capacity(raw_edges.len());
        for (p, a, q, fwd) in raw_edges {
            let e = graph.add_edge(new_id[p], a, new_id[q]);
            tree.push(fwd);
            if fwd {
                vertices[new_id[q]].parent = Some(e);
            }
        }
        Ok(McGraph {
            graph,
            vertices,
            tree,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn back_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.tree.len()).filter(move |&e| !self.tree[e])
    }

    /// The element of `S¹` reached by the vertex word.
    pub fn project(&self, v: VertexId, kr: &KrGraph) -> ElemId {
        kr.vertices[self.vertices[v].kr_vertex].element
    }

    pub fn find_word(&self, word: &[usize]) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.word == word)
    }

    pub fn spanning_tree(&self) -> SpanningTree {
        SpanningTree::from_parents(
            &self.graph,
            self.vertices.iter().map(|v| v.parent).collect(),
        )
    }
}

/// The spanning tree of a graph with the unique simple path property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub parent: Vec<Option<EdgeId>>,
    pub depth: Vec<usize>,
    parent_vertex: Vec<Option<VertexId>>,
}

impl SpanningTree {
    fn from_parents(g: &RootedGraph, parent: Vec<Option<EdgeId>>) -> Self {
        let n = parent.len();
        let parent_vertex: Vec<Option<VertexId>> = parent
            .iter()
            .map(|p| p.map(|e| g.edge(e).source))
            .collect();
        let mut depth = vec![usize::MAX; n];
        fn fill(v: usize, pv: &[Option<usize>], depth: &mut [usize]) -> usize {
            if depth[v] != usize::MAX {
                return depth[v];
            }
            let d = match pv[v] {
                None => 0,
                Some(u) => fill(u, pv, depth) + 1,
            };
            depth[v] = d;
            d
        }
        for v in 0..n {
            fill(v, &parent_vertex, &mut depth);
        }
        SpanningTree {
            parent,
            depth,
            parent_vertex,
        }
    }

    pub fn is_tree_edge(&self, g: &RootedGraph, e: EdgeId) -> bool {
        self.parent[g.edge(e).target] == Some(e)
    }

    pub fn parent_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.parent_vertex[v]
    }

    /// Whether `u` lies on the tree path from the root to `v` (inclusive).
    pub fn is_ancestor(&self, u: VertexId, mut v: VertexId) -> bool {
        while self.depth[v] > self.depth[u] {
            v = self.parent_vertex[v].expect("non-root has a parent");
        }
        u == v
    }

    /// Tree edges from `from` down to `to`; `from` must be an ancestor.
    pub fn path_between(&self, from: VertexId, to: VertexId) -> Result<Vec<EdgeId>> {
        let mut edges = Vec::new();
        let mut v = to;
        while v != from {
            let e = self.parent[v].ok_or(Error::PathNotInGraph)?;
            edges.push(e);
            v = self.parent_vertex[v].ok_or(Error::PathNotInGraph)?;
        }
        edges.reverse();
        Ok(edges)
    }
}

/// Tests the unique simple path property by enumerating simple paths from
/// the root depth first; stops at the first vertex reached twice. Returns the
/// spanning tree when the property holds.
pub fn usp_tree(g: &RootedGraph, cap: usize) -> Result<Option<SpanningTree>> {
    let n = g.vertex_count();
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    let mut reached = vec![false; n];
    let mut on_path = vec![false; n];
    let mut steps = 0usize;
    let root = g.root();
    reached[root] = true;
    on_path[root] = true;
    let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, i) = *top;
        let outs = g.out_edges(v);
        if i == outs.len() {
            on_path[v] = false;
            stack.pop();
            continue;
        }
        top.1 += 1;
        steps += 1;
        if steps > cap {
            return Err(Error::CapExceeded {
                what: "simple path enumeration",
                cap,
            });
        }
        let w = g.edge(outs[i]).target;
        if on_path[w] {
            continue;
        }
        if reached[w] {
            return Ok(None);
        }
        reached[w] = true;
        parent[w] = Some(outs[i]);
        on_path[w] = true;
        stack.push((w, 0));
    }
    if reached.iter().any(|r| !r) {
        return Ok(None);
    }
    Ok(Some(SpanningTree::from_parents(g, parent)))
}

/// The spanning tree given by each vertex's entering tree edge.
pub fn tree_from_parents(g: &RootedGraph, parent: Vec<Option<EdgeId>>) -> SpanningTree {
    SpanningTree::from_parents(g, parent)
}

pub fn check_usp(g: &RootedGraph, cap: usize) -> Result<bool> {
    Ok(usp_tree(g, cap)?.is_some())
}

/// Removes all out-edges of vertices selected by `absorbing` and keeps the
/// part reachable from the root. Returns the new graph and, for each new
/// vertex, the vertex it came from.
pub fn absorbing_restriction(
    g: &RootedGraph,
    absorbing: impl Fn(VertexId) -> bool,
) -> (RootedGraph, Vec<VertexId>) {
    let n = g.vertex_count();
    let mut new_id: Vec<Option<VertexId>> = vec![None; n];
    let mut origin = Vec::new();
    let mut out = RootedGraph::new();
    let root = g.root();
    new_id[root] = Some(out.add_vertex(g.name(root)));
    origin.push(root);
    let mut queue = std::collections::VecDeque::from([root]);
    let mut edges = Vec::new();
    while let Some(v) = queue.pop_front() {
        if absorbing(v) {
            continue;
        }
        for &e in g.out_edges(v) {
            let edge = g.edge(e);
            if new_id[edge.target].is_none() {
                new_id[edge.target] = Some(out.add_vertex(g.name(edge.target)));
                origin.push(edge.target);
                queue.push_back(edge.target);
            }
            edges.push(edge);
        }
    }
    for edge in edges {
        out.add_edge(
            new_id[edge.source].expect("visited"),
            edge.label,
            new_id[edge.target].expect("visited"),
        );
    }
    out.set_root(0);
    (out, origin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansions::kr::DEFAULT_MAX_KR;
    use crate::semigroup::tests::{d2_generators, example_generators};
    use crate::semigroup::DEFAULT_MAX_ELEMENTS;

    fn build(gens: Vec<(String, crate::semigroup::Transformation)>) -> (FiniteSemigroup, KrGraph, McGraph) {
        let s = FiniteSemigroup::generate(&gens, DEFAULT_MAX_ELEMENTS).unwrap();
        let kr = KrGraph::build(&s, DEFAULT_MAX_KR).unwrap();
        let mc = McGraph::build(&kr, &s, DEFAULT_MAX_MC).unwrap();
        (s, kr, mc)
    }

    #[test]
    fn d2_mccammond() {
        let (s, kr, mc) = build(d2_generators());
        assert_eq!(mc.vertex_count(), 15);
        let names: Vec<&str> = (0..15).map(|v| mc.graph.name(v)).collect();
        assert_eq!(
            names,
            [
                "𝟙", "a", "b", "aa", "ab", "ba", "bb", "aab", "aba", "bab", "bba", "aaba",
                "abab", "baba", "bbab"
            ]
        );
        assert_eq!(mc.back_edges().count(), 16);
        assert!(check_usp(&mc.graph, 1_000_000).unwrap());
        assert_eq!(mc.spanning_tree().parent, usp_tree(&mc.graph, 1_000_000).unwrap().unwrap().parent);
        // projection commutes with following words
        for v in 0..mc.vertex_count() {
            assert_eq!(mc.project(v, &kr), s.eval_word(&mc.vertices[v].word));
        }
        let aab = mc.find_word(&[0, 0, 1]).unwrap();
        assert_eq!(mc.project(aab, &kr), s.generator(1));
    }

    #[test]
    fn d2_cayley_graph_is_not_usp() {
        let (_, kr, _) = build(d2_generators());
        assert!(!check_usp(&kr.rcay, 1000).unwrap());
    }

    #[test]
    fn example_mccammond() {
        let (s, kr, mc) = build(example_generators());
        let mut words: Vec<String> = (0..mc.vertex_count())
            .map(|v| mc.graph.name(v).to_string())
            .collect();
        words.sort();
        assert_eq!(words, ["1", "2", "3", "31", "32", "33", "331", "332", "𝟙"]);
        // back-edges off the ideal: only 333 -> 3
        let ideal = s.minimal_ideal().members;
        let off_ideal: Vec<_> = mc
            .back_edges()
            .filter(|&e| !ideal.contains(&mc.project(mc.graph.edge(e).source, &kr)))
            .collect();
        assert_eq!(off_ideal.len(), 1);
        let e = mc.graph.edge(off_ideal[0]);
        assert_eq!(mc.graph.name(e.source), "33");
        assert_eq!(mc.graph.name(e.target), "3");
        assert_eq!(e.label, 2);
    }

    #[test]
    fn path_graph_is_its_own_expansion() {
        let mut g = RootedGraph::new();
        for i in 0..4 {
            g.add_vertex(i.to_string());
        }
        for i in 0..3 {
            g.add_edge(i, 0, i + 1);
        }
        let t = usp_tree(&g, 100).unwrap().unwrap();
        assert_eq!(t.depth, vec![0, 1, 2, 3]);
        assert_eq!(t.path_between(1, 3).unwrap(), vec![1, 2]);
        assert!(t.is_ancestor(1, 3));
        assert!(!t.is_ancestor(3, 1));
    }

    #[test]
    fn restriction_makes_vertices_absorbing() {
        let (s, kr, mc) = build(example_generators());
        let ideal = s.minimal_ideal().members;
        let (g, origin) =
            absorbing_restriction(&mc.graph, |v| ideal.contains(&mc.project(v, &kr)));
        assert_eq!(g.vertex_count(), mc.vertex_count());
        for (v, &o) in origin.iter().enumerate().take(g.vertex_count()) {
            if ideal.contains(&mc.project(o, &kr)) {
                assert!(g.out_edges(v).is_empty());
            }
        }
        assert!(check_usp(&g, 1000).unwrap());
    }
}
