//! Loop graphs of simple paths in graphs with the unique simple path
//! property, their Kleene expressions, and the generating functions of
//! those expressions.

pub mod kleene;
pub mod loopgraph;

pub use kleene::{
    algorithm1, algorithm2, concat, epsilon, kleene_counts, kleene_enumerate, kleene_multiset,
    kleene_to_rf, letter, ExpressionCache, loop_graph_expression, star, union, zimin_unionless, Kleene,
    KleeneExpr, LoopRef,
};
pub use loopgraph::{paths_bijection_check, Loop, LoopGraph, Pict};
