//! Right Cayley graphs, transition edges, and the Karnofsky–Rhodes and
//! McCammond expansions.

pub mod cayley;
pub mod dot;
pub mod graph;
pub mod kr;
pub mod mc;
pub mod scc;

pub use cayley::right_cayley;
pub use dot::{to_dot, DotStyle};
pub use graph::{Edge, EdgeId, RootedGraph, VertexId};
pub use kr::{KrGraph, KrVertex, DEFAULT_MAX_KR};
pub use mc::{
    absorbing_restriction, check_usp, usp_tree, McGraph, McVertex, SpanningTree, DEFAULT_MAX_MC,
};
pub use scc::{scc, transition_edges, SccDecomposition};
