//! Exact stationary distributions, hitting-time tails and expected hitting
//! times of finite Markov chains, computed from the Karnofsky–Rhodes and
//! McCammond expansions of the right Cayley graph of the semigroup that
//! drives the chain.
//!
//! The pipeline is:
//!
//! 1. [`semigroup`]: close the generator transformations into a finite
//!    semigroup `S`, adjoin `𝟙` (and optionally a zero `□`), find `K(S)`.
//! 2. [`expansions`]: right Cayley graph, strongly connected components,
//!    transition edges, `KR(S, A)` and `Mc∘KR(S, A)`.
//! 3. [`loopkleene`]: the `Pict` map to loop graphs, Kleene expressions and
//!    their generating functions.
//! 4. [`pipeline`]: per-vertex generating functions, grouping into the
//!    stationary distribution and the `x_□ → 0` limit.
//! 5. [`mixing`]: hitting-time tails, expected hitting time, mixing bounds.
//!
//! Every symbolic result can be checked against the brute-force oracles in
//! [`markov`].

pub mod algebra;
pub mod chainfile;
pub mod error;
pub mod expansions;
pub mod loopkleene;
pub mod markov;
pub mod mixing;
pub mod pipeline;
pub mod report;
pub mod semigroup;

pub use error::{Error, Result};
