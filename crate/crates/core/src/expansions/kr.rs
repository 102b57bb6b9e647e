use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::semigroup::{ElemId, FiniteSemigroup};

use super::cayley::right_cayley;
use super::graph::{EdgeId, RootedGraph, VertexId};
use super::scc::{scc, transition_edges, SccDecomposition};

pub const DEFAULT_MAX_KR: usize = 100_000;

/// A vertex of the Karnofsky–Rhodes expansion: an element of `S¹` together
/// with the set of right Cayley transition edges crossed to reach it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KrVertex {
    pub element: ElemId,
    pub crossed: BTreeSet<EdgeId>,
    /// A shortest word reaching the vertex (first in BFS order).
    pub word: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct KrGraph {
    pub rcay: RootedGraph,
    pub rcay_scc: SccDecomposition,
    pub transitions: BTreeSet<EdgeId>,
    pub graph: RootedGraph,
    pub vertices: Vec<KrVertex>,
}

impl KrGraph {
    /// Builds `KR(S, A)` by breadth-first search over
    /// `(element, crossed set)` pairs starting from `(𝟙, ∅)`.
    pub fn build(s: &FiniteSemigroup, cap: usize) -> Result<Self> {
        let rcay = right_cayley(s);
        let rcay_scc = scc(&rcay);
        let transitions = transition_edges(&rcay, &rcay_scc);

        let mut graph = RootedGraph::new();
        let mut vertices: Vec<KrVertex> = Vec::new();
        let mut index: HashMap<(ElemId, BTreeSet<EdgeId>), VertexId> = HashMap::new();

        let root = KrVertex {
            element: s.identity(),
            crossed: BTreeSet::new(),
            word: Vec::new(),
        };
        index.insert((root.element, root.crossed.clone()), 0);
        graph.add_vertex(crate::semigroup::IDENTITY_NAME);
        vertices.push(root);
        graph.set_root(0);

        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for a in 0..s.generator_count() {
                let (element, crossed, word) = {
                    let cur = &vertices[v];
                    let rc_edge = rcay.step(cur.element, a).expect("RCay is complete");
                    let mut crossed = cur.crossed.clone();
                    if transitions.contains(&rc_edge) {
                        crossed.insert(rc_edge);
                    }
                    let mut word = cur.word.clone();
                    word.push(a);
                    (rcay.edge(rc_edge).target, crossed, word)
                };
                let key = (element, crossed);
                let w = match index.get(&key) {
                    Some(&w) => w,
                    None => {
                        if vertices.len() >= cap {
                            return Err(Error::CapExceeded {
                                what: "Karnofsky–Rhodes expansion size",
                                cap,
                            });
                        }
                        let id = graph.add_vertex(s.word_name(&word));
                        vertices.push(KrVertex {
                            element,
                            crossed: key.1.clone(),
                            word,
                        });
                        index.insert(key, id);
                        queue.push_back(id);
                        id
                    }
                };
                graph.add_edge(v, a, w);
            }
        }
        Ok(KrGraph {
            rcay,
            rcay_scc,
            transitions,
            graph,
            vertices,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// The KR vertex reached by a word from the root.
    pub fn follow(&self, word: &[usize]) -> Option<VertexId> {
        self.graph.follow(word)
    }
}
