use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expansions::{to_dot, usp_tree, DotStyle, EdgeId, RootedGraph, SpanningTree, VertexId};

/// A loop graph: a spine `v₀ → … → v_m` where each spine vertex carries
/// loops, and each loop is itself a loop graph closed by one extra edge.
///
/// Loops are shared between the places they occur, so the structure is a DAG
/// even though the graph it describes is a tree of cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopGraph {
    /// Vertices of the source graph visited by the spine.
    pub spine: Vec<VertexId>,
    /// `labels[i]` labels the spine edge `v_i → v_{i+1}`.
    pub labels: Vec<usize>,
    /// `loops[i]` are the loops attached at `v_i`.
    pub loops: Vec<Vec<Arc<Loop>>>,
}

/// A cycle through an attachment vertex `u`: the body's spine leaves `u` and
/// the closing edge returns to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loop {
    /// The source-graph edge closing the cycle.
    pub edge: EdgeId,
    pub closing_label: usize,
    pub body: Arc<LoopGraph>,
}

impl LoopGraph {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn end(&self) -> VertexId {
        *self.spine.last().expect("spine is nonempty")
    }

    pub fn loop_count(&self) -> usize {
        self.loops.iter().map(Vec::len).sum()
    }

    /// Expands the loop graph into an explicit rooted graph. The closing
    /// edges of loops are returned separately. Fails once the vertex count
    /// passes `cap`.
    pub fn flatten(&self, cap: usize) -> Result<(RootedGraph, BTreeSet<EdgeId>, VertexId)> {
        self.flatten_named(&|_| String::new(), cap)
    }

    /// As [`LoopGraph::flatten`], naming each vertex after the source-graph
    /// vertex it copies.
    pub fn flatten_named(
        &self,
        name: &dyn Fn(VertexId) -> String,
        cap: usize,
    ) -> Result<(RootedGraph, BTreeSet<EdgeId>, VertexId)> {
        let mut g = RootedGraph::new();
        let mut closing = BTreeSet::new();
        let root = g.add_vertex(name(self.spine[0]));
        let end = self.flatten_into(&mut g, &mut closing, root, name, cap)?;
        g.set_root(root);
        Ok((g, closing, end))
    }

    fn flatten_into(
        &self,
        g: &mut RootedGraph,
        closing: &mut BTreeSet<EdgeId>,
        start: VertexId,
        name: &dyn Fn(VertexId) -> String,
        cap: usize,
    ) -> Result<VertexId> {
        let mut at = start;
        for i in 0..=self.len() {
            if i > 0 {
                if g.vertex_count() >= cap {
                    return Err(Error::CapExceeded {
                        what: "flattened loop graph size",
                        cap,
                    });
                }
                let v = g.add_vertex(name(self.spine[i]));
                g.add_edge(at, self.labels[i - 1], v);
                at = v;
            }
            for l in &self.loops[i] {
                let last = l.body.flatten_into(g, closing, at, name, cap)?;
                closing.insert(g.add_edge(last, l.closing_label, at));
            }
        }
        Ok(at)
    }

    /// Label words of all paths from the start of the spine to its end with
    /// at most `maxlen` edges, sorted.
    pub fn path_words(&self, maxlen: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
        let (g, _, end) = self.flatten(cap)?;
        let mut words = g
            .walk_words(end, maxlen, cap)
            .ok_or(Error::CapExceeded {
                what: "path enumeration",
                cap,
            })?;
        words.sort();
        Ok(words)
    }

    /// DOT rendering; vertices carry the names of `source`, the graph the
    /// loop graph was drawn from.
    pub fn to_dot(&self, name: &str, source: &RootedGraph, labels: &[String], cap: usize) -> Result<String> {
        let (g, closing, _) = self.flatten_named(&|v| source.name(v).to_string(), cap)?;
        let style = DotStyle {
            highlighted: BTreeSet::new(),
            dashed: closing,
        };
        Ok(to_dot(&g, name, labels, &style))
    }
}

/// Builds loop graphs over a graph with the unique simple path property.
///
/// Every non-tree edge `(y, a, w)` of such a graph returns to an ancestor
/// `w` of `y`, so it closes the cycle `w → … → y → w`. That cycle is the loop
/// attached at `w`; its body is the tree path from `w` to `y` with the loops
/// of its own vertices, and depends only on the edge. Bodies are memoised
/// per edge.
pub struct Pict<'g> {
    graph: &'g RootedGraph,
    tree: SpanningTree,
    memo: HashMap<EdgeId, Arc<Loop>>,
}

impl<'g> Pict<'g> {
    pub fn new(graph: &'g RootedGraph, tree: SpanningTree) -> Self {
        Pict {
            graph,
            tree,
            memo: HashMap::new(),
        }
    }

    /// Checks the unique simple path property before building.
    pub fn checked(graph: &'g RootedGraph, cap: usize) -> Result<Self> {
        let tree = usp_tree(graph, cap)?.ok_or(Error::NotUsp)?;
        Ok(Self::new(graph, tree))
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    /// The loop graph of the simple path from the root to `target`.
    pub fn of_vertex(&mut self, target: VertexId) -> Result<LoopGraph> {
        self.spine(self.graph.root(), target, true)
    }

    /// The loop graph of the simple path spelled by `word`.
    pub fn of_word(&mut self, word: &[usize]) -> Result<LoopGraph> {
        let mut v = self.graph.root();
        for &a in word {
            let e = self.graph.step(v, a).ok_or(Error::PathNotInGraph)?;
            if !self.tree.is_tree_edge(self.graph, e) {
                return Err(Error::PathNotInGraph);
            }
            v = self.graph.edge(e).target;
        }
        self.of_vertex(v)
    }

    fn spine(&mut self, from: VertexId, to: VertexId, with_start: bool) -> Result<LoopGraph> {
        let path = self.tree.path_between(from, to)?;
        let mut spine = vec![from];
        let mut labels = Vec::with_capacity(path.len());
        for &e in &path {
            let edge = self.graph.edge(e);
            labels.push(edge.label);
            spine.push(edge.target);
        }
        let mut loops = Vec::with_capacity(spine.len());
        for (i, &v) in spine.iter().enumerate() {
            if i == 0 && !with_start {
                loops.push(Vec::new());
                continue;
            }
            let mut here = Vec::new();
            for &e in self.graph.in_edges(v) {
                if self.tree.is_tree_edge(self.graph, e) {
                    continue;
                }
                here.push(self.loop_for(e)?);
            }
            loops.push(here);
        }
        Ok(LoopGraph {
            spine,
            labels,
            loops,
        })
    }

    fn loop_for(&mut self, e: EdgeId) -> Result<Arc<Loop>> {
        if let Some(l) = self.memo.get(&e) {
            return Ok(l.clone());
        }
        let edge = self.graph.edge(e);
        if !self.tree.is_ancestor(edge.target, edge.source) {
            return Err(Error::NotUsp);
        }
        let body = self.spine(edge.target, edge.source, false)?;
        let l = Arc::new(Loop {
            edge: e,
            closing_label: edge.label,
            body: Arc::new(body),
        });
        self.memo.insert(e, l.clone());
        Ok(l)
    }
}

/// Compares the label words of walks from the root to `target` in `g` with
/// the path words of `lg`, both up to length `maxlen`.
pub fn paths_bijection_check(
    g: &RootedGraph,
    target: VertexId,
    lg: &LoopGraph,
    maxlen: usize,
    cap: usize,
) -> Result<bool> {
    let mut direct = g.walk_words(target, maxlen, cap).ok_or(Error::CapExceeded {
        what: "path enumeration",
        cap,
    })?;
    direct.sort();
    Ok(direct == lg.path_words(maxlen, cap)?)
}
