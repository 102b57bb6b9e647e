use std::collections::VecDeque;

pub type VertexId = usize;
pub type EdgeId = usize;

/// A labelled directed edge; `label` indexes the generator alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: VertexId,
    pub label: usize,
    pub target: VertexId,
}

/// A labelled directed graph with a distinguished root.
///
/// Out-edges of a vertex are kept in insertion order, which for every graph
/// built by this crate is the order of the generator labels.
#[derive(Clone, Debug, Default)]
pub struct RootedGraph {
    names: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
    root: VertexId,
}

impl RootedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> VertexId {
        self.names.push(name.into());
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        self.names.len() - 1
    }

    pub fn add_edge(&mut self, source: VertexId, label: usize, target: VertexId) -> EdgeId {
        let id = self.edges.len();
        self.edges.push(Edge {
            source,
            label,
            target,
        });
        self.out[source].push(id);
        self.inc[target].push(id);
        id
    }

    pub fn set_root(&mut self, root: VertexId) {
        self.root = root;
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.inc[v]
    }

    /// The first out-edge of `v` carrying `label`.
    pub fn step(&self, v: VertexId, label: usize) -> Option<EdgeId> {
        self.out[v]
            .iter()
            .copied()
            .find(|&e| self.edges[e].label == label)
    }

    /// Follows a word from the root; `None` if some letter has no edge.
    pub fn follow(&self, word: &[usize]) -> Option<VertexId> {
        word.iter().try_fold(self.root, |v, &a| {
            self.step(v, a).map(|e| self.edges[e].target)
        })
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name)
    }

    /// Breadth-first distances from the root; `None` for unreachable vertices.
    pub fn distances_from_root(&self) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        if self.vertex_count() == 0 {
            return dist;
        }
        dist[self.root] = Some(0);
        let mut queue = VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &e in &self.out[v] {
                let w = self.edges[e].target;
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Breadth-first distances to `target` along edges; `None` if `target`
    /// cannot be reached.
    pub fn distances_to(&self, target: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[target] = Some(0);
        let mut queue = VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &e in &self.inc[v] {
                let u = self.edges[e].source;
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Label words of all walks from the root to `target` with at most
    /// `maxlen` edges, in lexicographic order of edge choices. Walks that
    /// cannot reach `target` within the remaining budget are pruned.
    pub fn walk_words(&self, target: VertexId, maxlen: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
        let dist = self.distances_to(target);
        let mut out = Vec::new();
        let mut word = Vec::new();
        let ok = self.walk_rec(self.root, target, maxlen, &dist, &mut word, &mut out, cap);
        ok.then_some(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_rec(
        &self,
        v: VertexId,
        target: VertexId,
        budget: usize,
        dist: &[Option<usize>],
        word: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> bool {
        match dist[v] {
            Some(d) if d <= budget => {}
            _ => return true,
        }
        if v == target {
            if out.len() >= cap {
                return false;
            }
            out.push(word.clone());
        }
        if budget == 0 {
            return true;
        }
        for &e in &self.out[v] {
            let edge = self.edges[e];
            word.push(edge.label);
            let ok = self.walk_rec(edge.target, target, budget - 1, dist, word, out, cap);
            word.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walks_on_a_cycle() {
        let mut g = RootedGraph::new();
        let r = g.add_vertex("r");
        let v = g.add_vertex("v");
        g.add_edge(r, 0, v);
        g.add_edge(v, 1, r);
        g.set_root(r);
        let words = g.walk_words(v, 5, 100).unwrap();
        assert_eq!(words, vec![vec![0], vec![0, 1, 0], vec![0, 1, 0, 1, 0]]);
        assert!(g.walk_words(v, 5, 2).is_none());
        assert_eq!(g.follow(&[0, 1, 0]), Some(v));
        assert_eq!(g.follow(&[1]), None);
        assert_eq!(g.distances_from_root(), vec![Some(0), Some(1)]);
    }
}
