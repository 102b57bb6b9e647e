//! Stationary distributions from the McCammond expansion.
//!
//! Both theorems reduce to the same computation: make a set of vertices of
//! `Mc∘KR` absorbing, and for every absorbing vertex reachable from the root
//! sum the weights of all paths that end there. In the left-zero case the
//! absorbing vertices are those projecting into `K(S)`. Otherwise a zero `□`
//! is adjoined, the absorbing vertices are the words `u□`, and the sums are
//! grouped by `[u]_S` and sent through the limit `x_□ → 0`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Monomial, Point, Polynomial, RationalFunction, Var, VarTable, Q};
use crate::error::{Error, Result};
use crate::expansions::{
    absorbing_restriction, KrGraph, McGraph, RootedGraph, SpanningTree, VertexId, DEFAULT_MAX_KR,
    DEFAULT_MAX_MC,
};
use crate::loopkleene::{kleene_counts, kleene_enumerate, ExpressionCache, Kleene, LoopGraph, Pict};
use crate::markov::{apply_matrix, stationary_oracle, transition_matrix, MarkovChainSpec};
use crate::semigroup::{ElemId, FiniteSemigroup, DEFAULT_MAX_ELEMENTS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub max_elements: usize,
    pub max_kr: usize,
    pub max_mc: usize,
    /// Bound on simple-path and walk enumeration steps.
    pub max_paths: usize,
    /// Longest rendered Kleene expression kept in reports.
    pub max_render: usize,
    /// Number of random interior points used for verification.
    pub verify_points: usize,
    pub seed: u64,
    /// Use the adjoined-zero construction even when `K(S)` is left zero.
    pub force_general: bool,
    /// Degree bound for series cross-checks.
    pub series_order: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_kr: DEFAULT_MAX_KR,
            max_mc: DEFAULT_MAX_MC,
            max_paths: 10_000_000,
            max_render: 100_000,
            verify_points: 3,
            seed: 0,
            force_general: false,
            series_order: 40,
        }
    }
}

/// `S`, `KR(S, A)` and `Mc∘KR(S, A)`.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub semigroup: FiniteSemigroup,
    pub kr: KrGraph,
    pub mc: McGraph,
}

impl Expansion {
    pub fn build(semigroup: FiniteSemigroup, opts: &Options) -> Result<Self> {
        let kr = KrGraph::build(&semigroup, opts.max_kr)?;
        let mc = McGraph::build(&kr, &semigroup, opts.max_mc)?;
        Ok(Expansion { semigroup, kr, mc })
    }

    pub fn project(&self, mc_vertex: VertexId) -> ElemId {
        self.mc.project(mc_vertex, &self.kr)
    }
}

/// Generating function of the paths ending at one absorbing vertex.
#[derive(Clone, Debug)]
pub struct TerminalPsi {
    /// Vertex of `Mc∘KR`.
    pub mc_vertex: VertexId,
    pub word: Vec<usize>,
    pub name: String,
    /// Projection of the word to `S¹`.
    pub element: ElemId,
    pub loop_graph: LoopGraph,
    pub kleene: Kleene,
    pub psi: RationalFunction,
}

/// `Mc∘KR` with the selected vertices made absorbing, and the generating
/// function of every reachable absorbing vertex.
#[derive(Clone, Debug)]
pub struct FirstHit {
    pub graph: RootedGraph,
    /// `origin[v]` is the `Mc∘KR` vertex that restricted vertex `v` came from.
    pub origin: Vec<VertexId>,
    pub tree: SpanningTree,
    pub terminals: Vec<TerminalPsi>,
    /// Restricted-graph vertex of each terminal.
    pub terminal_vertices: Vec<VertexId>,
}

impl FirstHit {
    pub fn build(exp: &Expansion, vars: &[Var], absorbing: impl Fn(ElemId) -> bool) -> Result<Self> {
        let mc = &exp.mc;
        let (graph, origin) =
            absorbing_restriction(&mc.graph, |v| absorbing(exp.project(v)));
        // every simple path of the restriction is a simple path of Mc∘KR,
        // so the spanning tree is inherited
        let mut new_of = vec![None; mc.vertex_count()];
        for (v, &o) in origin.iter().enumerate() {
            new_of[o] = Some(v);
        }
        let mut parent = vec![None; graph.vertex_count()];
        for v in 0..graph.vertex_count() {
            if let Some(e) = mc.vertices[origin[v]].parent {
                let edge = mc.graph.edge(e);
                let src = new_of[edge.source].ok_or(Error::NotUsp)?;
                parent[v] = graph.step(src, edge.label);
            }
        }
        let tree = crate::expansions::mc::tree_from_parents(&graph, parent);

        let mut order: Vec<VertexId> = (0..graph.vertex_count())
            .filter(|&v| absorbing(exp.project(origin[v])))
            .collect();
        order.sort_by_key(|&v| origin[v]);

        let mut pict = Pict::new(&graph, tree.clone());
        let mut cache = ExpressionCache::new(vars.to_vec());
        let mut terminals = Vec::with_capacity(order.len());
        for &v in &order {
            let lg = pict.of_vertex(v)?;
            let kleene = cache.expression(&lg)?;
            let psi = cache.rational_function(&kleene)?;
            let o = origin[v];
            terminals.push(TerminalPsi {
                mc_vertex: o,
                word: mc.vertices[o].word.clone(),
                name: mc.graph.name(o).to_string(),
                element: exp.project(o),
                loop_graph: lg,
                kleene,
                psi,
            });
        }
        Ok(FirstHit {
            graph,
            origin,
            tree,
            terminals,
            terminal_vertices: order,
        })
    }

    /// Sum of all terminal generating functions.
    pub fn total(&self) -> RationalFunction {
        self.terminals
            .iter()
            .fold(RationalFunction::zero(), |acc, t| &acc + &t.psi)
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    LeftZero,
    General,
}

#[derive(Clone, Debug)]
pub struct ElementPsi {
    pub element: ElemId,
    pub name: String,
    pub psi: RationalFunction,
}

#[derive(Clone, Debug)]
pub struct StationaryResult {
    pub mode: Mode,
    /// Generator variables; in the general case the last one is `x_□`.
    pub vars: VarTable,
    pub box_var: Option<Var>,
    /// Variable replaced by `1 − Σ others` in the general case.
    pub elim: Option<Var>,
    /// `S` without adjoined zero.
    pub semigroup: FiniteSemigroup,
    pub ideal: Vec<ElemId>,
    pub is_left_zero: bool,
    pub expansion: Expansion,
    pub first_hit: FirstHit,
    /// General case: `lim_{x_□→0} Ψ_{u□}` for each terminal.
    pub limits: Vec<RationalFunction>,
    /// `Ψ^M_w` for each `w ∈ K(S)`.
    pub per_element: Vec<ElementPsi>,
    pub residual: RationalFunction,
}

/// The lexicographically last generator label.
pub fn elimination_var(vars: &VarTable, count: usize) -> Var {
    (0..count)
        .max_by(|&a, &b| vars.label(a).cmp(vars.label(b)))
        .expect("at least one generator")
}

/// Variables of `s`'s generators, one per generator in order.
fn generator_vars(s: &FiniteSemigroup) -> VarTable {
    VarTable::new(s.labels().iter().cloned())
}

pub fn stationary_left_zero(s: &FiniteSemigroup, opts: &Options) -> Result<StationaryResult> {
    let ideal = s.minimal_ideal();
    if !ideal.is_left_zero {
        return Err(Error::NotLeftZero);
    }
    let vars = generator_vars(s);
    let var_ids: Vec<Var> = (0..s.generator_count()).collect();
    let exp = Expansion::build(s.clone(), opts)?;
    let first_hit = FirstHit::build(&exp, &var_ids, |e| ideal.members.contains(&e))?;
    let per_element = ideal
        .members
        .iter()
        .map(|&w| ElementPsi {
            element: w,
            name: s.name(w).to_string(),
            psi: first_hit
                .terminals
                .iter()
                .filter(|t| t.element == w)
                .fold(RationalFunction::zero(), |acc, t| &acc + &t.psi),
        })
        .collect();
    Ok(StationaryResult {
        mode: Mode::LeftZero,
        vars,
        box_var: None,
        elim: None,
        semigroup: s.clone(),
        ideal: ideal.members.iter().copied().collect(),
        is_left_zero: true,
        expansion: exp,
        first_hit,
        limits: Vec::new(),
        per_element,
        residual: RationalFunction::zero(),
    })
}

pub fn stationary_general(s: &FiniteSemigroup, opts: &Options) -> Result<StationaryResult> {
    let ideal = s.minimal_ideal();
    let sb = s.adjoin_zero()?;
    let zero = sb.zero().expect("zero adjoined");
    let mut vars = generator_vars(s);
    let box_var = vars.push(crate::semigroup::BOX_LABEL);
    let var_ids: Vec<Var> = (0..sb.generator_count()).collect();
    let base_vars: Vec<Var> = (0..s.generator_count()).collect();
    let elim = elimination_var(&vars, s.generator_count());

    let exp = Expansion::build(sb.clone(), opts)?;
    let first_hit = FirstHit::build(&exp, &var_ids, |e| e == zero)?;

    let mut groups: BTreeMap<ElemId, RationalFunction> = ideal
        .members
        .iter()
        .map(|&w| (w, RationalFunction::zero()))
        .collect();
    let mut residual = RationalFunction::zero();
    let mut limits = Vec::with_capacity(first_hit.terminals.len());
    for t in &first_hit.terminals {
        let u = &t.word[..t.word.len() - 1];
        let w = sb.eval_word(u);
        match groups.get_mut(&w) {
            Some(acc) => *acc = &*acc + &t.psi,
            None => residual = &residual + &t.psi,
        }
        limits.push(t.psi.limit_box(box_var, elim, &base_vars)?);
    }
    let residual = residual.limit_box(box_var, elim, &base_vars)?;
    if !residual.is_zero() {
        return Err(Error::ResidualMassNonzero(residual.render(&vars)));
    }
    let per_element = groups
        .into_iter()
        .map(|(w, g)| {
            Ok(ElementPsi {
                element: w,
                name: s.name(w).to_string(),
                psi: g.limit_box(box_var, elim, &base_vars)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StationaryResult {
        mode: Mode::General,
        vars,
        box_var: Some(box_var),
        elim: Some(elim),
        semigroup: s.clone(),
        ideal: ideal.members.iter().copied().collect(),
        is_left_zero: ideal.is_left_zero,
        expansion: exp,
        first_hit,
        limits,
        per_element,
        residual,
    })
}

/// Chooses the left-zero theorem when it applies.
pub fn stationary(s: &FiniteSemigroup, opts: &Options) -> Result<StationaryResult> {
    if !opts.force_general && s.minimal_ideal().is_left_zero {
        stationary_left_zero(s, opts)
    } else {
        stationary_general(s, opts)
    }
}

impl StationaryResult {
    /// Number of generators of `S`, i.e. variables other than `x_□`.
    pub fn generator_count(&self) -> usize {
        self.semigroup.generator_count()
    }

    /// Restricts `point` to the generator variables.
    fn eval_point(&self, point: &Point) -> Result<Point> {
        let mut p = Point::new();
        for v in 0..self.generator_count() {
            let x = point
                .get(&v)
                .ok_or_else(|| Error::UnassignedVariable(self.vars.name(v)))?;
            p.insert(v, x.clone());
        }
        Ok(p)
    }

    /// `Ψ^M_w` at a point of the simplex.
    pub fn element_values(&self, point: &Point) -> Result<Vec<Q>> {
        let p = self.eval_point(point)?;
        self.per_element.iter().map(|e| e.psi.eval(&p)).collect()
    }

    /// Pushes `Ψ^M` forward to the states via `k ↦ k(ω₀)` with `ω₀` the
    /// first state.
    pub fn state_values(&self, point: &Point) -> Result<Vec<Q>> {
        let values = self.element_values(point)?;
        let mut out = vec![Q::zero(); self.semigroup.degree()];
        for (e, val) in self.per_element.iter().zip(values) {
            let t = self
                .semigroup
                .transformation(e.element)
                .expect("ideal elements are transformations");
            out[t.apply(0)] += val;
        }
        Ok(out)
    }

    /// `Σ_w Ψ^M_w = 1` after substituting the eliminated variable.
    pub fn normalization_holds(&self) -> Result<bool> {
        let total = self
            .per_element
            .iter()
            .fold(self.residual.clone(), |acc, e| &acc + &e.psi);
        let n = self.generator_count();
        let elim = self.elim.unwrap_or_else(|| elimination_var(&self.vars, n));
        let mut rest = Polynomial::one();
        for v in (0..n).filter(|&v| v != elim) {
            rest = &rest - &Polynomial::var(v);
        }
        let total = total.substitute(elim, &rest)?;
        Ok(total.equals(&RationalFunction::one()))
    }
}

/// Random points of the open simplex with common denominator at most 20.
pub fn random_interior_points(n: usize, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(n.max(2)..=20.max(n));
            // a random composition of d into n positive parts
            let mut cuts: Vec<usize> = (1..d).collect();
            for i in 0..n.saturating_sub(1) {
                let j = rng.gen_range(i..cuts.len());
                cuts.swap(i, j);
            }
            let mut chosen: Vec<usize> = cuts[..n - 1].to_vec();
            chosen.sort_unstable();
            let mut prev = 0;
            let mut point = Point::new();
            for (v, &c) in chosen.iter().chain(std::iter::once(&d)).enumerate() {
                point.insert(v, Q::new((c - prev).into(), d.into()));
                prev = c;
            }
            point
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCheck {
    pub point: Vec<Q>,
    pub symbolic: Vec<Q>,
    /// Exact stationary solve, when the kernel of `T − I` is a line.
    pub oracle: Option<Vec<Q>>,
    pub passed: bool,
    pub detail: String,
}

/// Compares the symbolic stationary distribution against the chain at
/// `point`: equal to the exact kernel vector when it is unique, otherwise
/// fixed by `T`.
pub fn check_point(spec: &MarkovChainSpec, result: &StationaryResult, point: &Point) -> Result<PointCheck> {
    let symbolic = result.state_values(point)?;
    let t = transition_matrix(spec).eval(point)?;
    let point_vec: Vec<Q> = (0..result.generator_count())
        .map(|v| point.get(&v).cloned().unwrap_or_else(Q::zero))
        .collect();
    let total: Q = symbolic.iter().fold(Q::zero(), |a, b| a + b);
    let (oracle, passed, detail) = match stationary_oracle(&t) {
        Ok(pi) => {
            let ok = pi == symbolic;
            let detail = if ok { "matches exact solve" } else { "differs from exact solve" };
            (Some(pi), ok, detail.to_string())
        }
        Err(Error::NotIrreducible(k)) => {
            let ok = apply_matrix(&t, &symbolic) == symbolic && total.is_one();
            (None, ok, format!("kernel dimension {k}; checked T·π = π"))
        }
        Err(e) => return Err(e),
    };
    Ok(PointCheck {
        point: point_vec,
        symbolic,
        oracle,
        passed,
        detail,
    })
}

/// Outcome of the checks run by [`full_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub checks: Vec<PointCheck>,
    pub normalization: bool,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.normalization && self.checks.iter().all(|c| c.passed)
    }

    /// The first failure as an error.
    pub fn failure(&self, vars: &VarTable) -> Option<Error> {
        if let Some(c) = self.checks.iter().find(|c| !c.passed) {
            let point = c
                .point
                .iter()
                .enumerate()
                .map(|(v, x)| format!("{}={x}", vars.name(v)))
                .collect::<Vec<_>>()
                .join(",");
            return Some(Error::VerificationFailed {
                point,
                detail: c.detail.clone(),
            });
        }
        if !self.normalization {
            return Some(Error::VerificationFailed {
                point: "symbolic".into(),
                detail: "stationary functions do not sum to 1".into(),
            });
        }
        None
    }
}

/// Generates `S`, runs the applicable theorem and checks the result at
/// `opts.verify_points` random interior points, plus the chain's own
/// probabilities when they are all numeric.
pub fn full_report(spec: &MarkovChainSpec, opts: &Options) -> Result<(StationaryResult, Verification)> {
    let s = spec.semigroup(opts.max_elements)?;
    let result = stationary(&s, opts)?;
    let n = result.generator_count();
    let mut points = random_interior_points(n, opts.verify_points, opts.seed);
    if let Some(p) = spec.numeric_point() {
        if spec.is_stochastic(&p) && !points.contains(&p) {
            points.push(p);
        }
    }
    let checks = points
        .iter()
        .map(|p| check_point(spec, &result, p))
        .collect::<Result<Vec<_>>>()?;
    let normalization = result.normalization_holds()?;
    Ok((result, Verification { checks, normalization }))
}

/// Agreement of the three path descriptions of one terminal vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCheck {
    pub name: String,
    pub maxlen: usize,
    /// Number of paths of each length `0..=maxlen`.
    pub counts: Vec<u128>,
    pub kleene_matches_loop_graph: bool,
    pub loop_graph_matches_expansion: bool,
    /// Series of `Ψ` below degree `maxlen + 1` equals the sum of path monomials.
    pub series_matches: bool,
}

impl PathCheck {
    pub fn passed(&self) -> bool {
        self.kleene_matches_loop_graph && self.loop_graph_matches_expansion && self.series_matches
    }
}

/// `Σ_w x_{w₁}⋯x_{w_k}` over the given words.
pub fn words_polynomial(words: &[Vec<usize>]) -> Polynomial {
    Polynomial::from_terms(words.iter().map(|w| {
        let m = w
            .iter()
            .fold(Monomial::one(), |m, &a| m.mul(&Monomial::var(a as Var)));
        (m, Q::one())
    }))
}

/// For each terminal: Kleene language, loop-graph paths and first-hit
/// walks agree up to `maxlen`, and so do the series coefficients of `Ψ`.
pub fn path_checks(result: &StationaryResult, maxlen: usize, cap: usize) -> Result<Vec<PathCheck>> {
    let labels: Vec<String> = (0..result.vars.len()).map(|v| result.vars.label(v).to_string()).collect();
    let fh = &result.first_hit;
    fh.terminals
        .iter()
        .zip(&fh.terminal_vertices)
        .map(|(t, &target)| {
            let kleene = kleene_enumerate(&t.kleene, maxlen, &labels)?;
            let looped = t.loop_graph.path_words(maxlen, cap)?;
            let mut direct = fh.graph.walk_words(target, maxlen, cap).ok_or(Error::CapExceeded {
                what: "path enumeration",
                cap,
            })?;
            direct.sort();
            let mut counts = vec![0u128; maxlen + 1];
            for w in &looped {
                counts[w.len()] += 1;
            }
            let series = t.psi.series(maxlen as u32 + 1)?;
            let series_matches = series.coefficients() == &words_polynomial(&looped)
                && kleene_counts(&t.kleene, maxlen)? == counts;
            Ok(PathCheck {
                name: t.name.clone(),
                maxlen,
                counts,
                kleene_matches_loop_graph: kleene == looped,
                loop_graph_matches_expansion: looped == direct,
                series_matches,
            })
        })
        .collect()
}
