//! The Markov chain side: transition matrices of the left action, ergodicity
//! of the transition diagram, an exact stationary solve used as an oracle,
//! Monte Carlo simulation and total variation distance.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{Point, Polynomial, Var, VarTable, Q};
use crate::error::{Error, Result};
use crate::expansions::{scc, RootedGraph};
use crate::semigroup::{FiniteSemigroup, Transformation};

/// Probability attached to a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prob {
    Numeric(Q),
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub label: String,
    /// `action.apply(s)` is `a·s`.
    pub action: Transformation,
    pub prob: Prob,
}

/// A chain on `states` driven by i.i.d. letters: at each step generator `a`
/// is chosen with probability `x_a` and the state moves from `s` to `a·s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovChainSpec {
    pub states: Vec<String>,
    pub generators: Vec<GeneratorSpec>,
}

impl MarkovChainSpec {
    pub fn new(states: Vec<String>, generators: Vec<GeneratorSpec>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Input("at least one state is required".into()));
        }
        if generators.is_empty() {
            return Err(Error::Input("at least one generator is required".into()));
        }
        for g in &generators {
            if g.action.degree() != states.len() {
                return Err(Error::Input(format!(
                    "generator {:?} acts on {} states, expected {}",
                    g.label,
                    g.action.degree(),
                    states.len()
                )));
            }
            if let Prob::Numeric(p) = &g.prob {
                if p.is_negative() || p > &Q::one() {
                    return Err(Error::Input(format!(
                        "probability of generator {:?} is outside [0, 1]",
                        g.label
                    )));
                }
            }
        }
        Ok(MarkovChainSpec { states, generators })
    }

    /// Generators that can fire: symbolic ones and numeric ones with
    /// positive probability.
    pub fn active(&self) -> Vec<&GeneratorSpec> {
        self.generators
            .iter()
            .filter(|g| !matches!(&g.prob, Prob::Numeric(p) if p.is_zero()))
            .collect()
    }

    /// Variable table with one variable per active generator, in order.
    pub fn var_table(&self) -> VarTable {
        VarTable::new(self.active().iter().map(|g| g.label.clone()))
    }

    pub fn semigroup(&self, cap: usize) -> Result<FiniteSemigroup> {
        let gens: Vec<(String, Transformation)> = self
            .active()
            .iter()
            .map(|g| (g.label.clone(), g.action.clone()))
            .collect();
        FiniteSemigroup::generate(&gens, cap)
    }

    /// The numeric point when every active probability is numeric.
    pub fn numeric_point(&self) -> Option<Point> {
        self.active()
            .iter()
            .enumerate()
            .map(|(v, g)| match &g.prob {
                Prob::Numeric(p) => Some((v, p.clone())),
                Prob::Symbolic => None,
            })
            .collect()
    }

    /// Whether the active generator probabilities at `point` sum to one.
    pub fn is_stochastic(&self, point: &Point) -> bool {
        (0..self.active().len())
            .map(|v| point.get(&v).cloned().unwrap_or_else(Q::zero))
            .fold(Q::zero(), |acc, p| acc + p)
            == Q::one()
    }
}

/// `entries[s′][s] = Σ_{a : a·s = s′} x_a`, so columns are distributions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub entries: Vec<Vec<Polynomial>>,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn eval(&self, point: &Point) -> Result<Vec<Vec<Q>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.eval(point)).collect())
            .collect()
    }

    pub fn column_sum(&self, s: usize) -> Polynomial {
        self.entries
            .iter()
            .fold(Polynomial::zero(), |acc, row| &acc + &row[s])
    }
}

pub fn transition_matrix(spec: &MarkovChainSpec) -> TransitionMatrix {
    let n = spec.states.len();
    let mut entries = vec![vec![Polynomial::zero(); n]; n];
    for (v, g) in spec.active().iter().enumerate() {
        for s in 0..n {
            let entry = &mut entries[g.action.apply(s)][s];
            *entry = &*entry + &Polynomial::var(v as Var);
        }
    }
    TransitionMatrix { entries }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ergodicity {
    pub irreducible: bool,
    /// Number of closed communicating classes.
    pub closed_classes: usize,
    /// Period of the first closed class.
    pub period: usize,
}

impl Ergodicity {
    /// Unique stationary distribution reached from every start.
    pub fn is_ergodic_on_closed_class(&self) -> bool {
        self.closed_classes == 1 && self.period == 1
    }
}

fn diagram(spec: &MarkovChainSpec) -> RootedGraph {
    let mut g = RootedGraph::new();
    for s in &spec.states {
        g.add_vertex(s.clone());
    }
    for (a, gen) in spec.active().iter().enumerate() {
        for s in 0..spec.states.len() {
            g.add_edge(s, a, gen.action.apply(s));
        }
    }
    g
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn ergodicity(spec: &MarkovChainSpec) -> Ergodicity {
    let g = diagram(spec);
    let d = scc(&g);
    let closed: Vec<usize> = (0..d.count())
        .filter(|&c| !d.component_dag.iter().any(|&(x, _)| x == c))
        .collect();
    let class = &d.components[closed[0]];
    let c = closed[0];
    // breadth-first depths inside the class
    let mut depth = vec![None; g.vertex_count()];
    depth[class[0]] = Some(0usize);
    let mut queue = std::collections::VecDeque::from([class[0]]);
    while let Some(u) = queue.pop_front() {
        for &e in g.out_edges(u) {
            let w = g.edge(e).target;
            if d.component_of[w] == c && depth[w].is_none() {
                depth[w] = Some(depth[u].unwrap_or(0) + 1);
                queue.push_back(w);
            }
        }
    }
    let mut period = 0;
    for e in g.edges() {
        if d.component_of[e.source] == c && d.component_of[e.target] == c {
            let (du, dv) = (depth[e.source].unwrap_or(0), depth[e.target].unwrap_or(0));
            period = gcd(period, (du + 1).abs_diff(dv));
        }
    }
    Ergodicity {
        irreducible: d.count() == 1,
        closed_classes: closed.len(),
        period,
    }
}

/// Reduced row echelon form over `Q`; returns the pivot columns.
fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// The normalised kernel vector of `T − I`; fails unless the kernel is one
/// dimensional.
pub fn stationary_oracle(t: &[Vec<Q>]) -> Result<Vec<Q>> {
    let n = t.len();
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { &t[i][j] - Q::one() } else { t[i][j].clone() })
                .collect()
        })
        .collect();
    let pivots = rref(&mut m);
    let nullity = n - pivots.len();
    if nullity != 1 {
        return Err(Error::NotIrreducible(nullity));
    }
    let free = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![Q::zero(); n];
    v[free] = Q::one();
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = -m[r][free].clone();
    }
    let total = v.iter().fold(Q::zero(), |acc, x| acc + x);
    if total.is_zero() {
        return Err(Error::NotIrreducible(nullity));
    }
    Ok(v.into_iter().map(|x| x / &total).collect())
}

pub fn apply_matrix(t: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    t.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Q::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

pub fn point_mass(n: usize, s: usize) -> Vec<Q> {
    (0..n).map(|i| if i == s { Q::one() } else { Q::zero() }).collect()
}

/// `max_A |u(A) − v(A)|`, computed as half the ℓ₁ distance.
pub fn tv_distance(u: &[Q], v: &[Q]) -> Q {
    u.iter()
        .zip(v)
        .fold(Q::zero(), |acc, (a, b)| acc + (a - b).abs())
        / Q::from_integer(BigInt::from(2))
}

pub fn tv_distance_f64(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Number of independent random streams used by [`simulate`]. Trial `i`
/// belongs to stream `i * SIM_STREAMS / trials`; stream `c` is
/// `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(c)`. Results therefore
/// do not depend on the number of worker threads.
pub const SIM_STREAMS: u64 = 64;

/// Runs `trials` independent copies of the chain for `steps` steps from
/// `start` and returns the empirical distribution of the final state.
pub fn simulate(
    spec: &MarkovChainSpec,
    point: &Point,
    steps: usize,
    trials: usize,
    start: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let gens = spec.active();
    // letter `a` is chosen when the uniform u64 falls below thresholds[a]
    let scale = Q::from_integer(BigInt::one() << 64);
    let mut cum = Q::zero();
    let mut thresholds = Vec::with_capacity(gens.len());
    for (v, g) in gens.iter().enumerate() {
        let p = point
            .get(&v)
            .ok_or_else(|| Error::UnassignedVariable(g.label.clone()))?;
        cum += p;
        let th = (&cum * &scale).floor().to_integer();
        thresholds.push(th.to_u128().unwrap_or(u128::MAX).min(1u128 << 64));
    }
    if cum != Q::one() {
        return Err(Error::Input("probabilities must sum to 1 to simulate".into()));
    }
    let maps: Vec<&[usize]> = gens.iter().map(|g| g.action.images()).collect();
    let n = spec.states.len();
    let counts = (0..SIM_STREAMS)
        .into_par_iter()
        .map(|c| {
            let lo = (c as usize * trials) / SIM_STREAMS as usize;
            let hi = ((c as usize + 1) * trials) / SIM_STREAMS as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut counts = vec![0u64; n];
            for _ in lo..hi {
                let mut s = start;
                for _ in 0..steps {
                    let u = rng.next_u64() as u128;
                    let a = thresholds.iter().position(|&th| u < th).unwrap_or(maps.len() - 1);
                    s = maps[a][s];
                }
                counts[s] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; n],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / trials.max(1) as f64)
        .collect())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::q;

    pub fn chain(states: &[&str], gens: &[(&str, &[usize], Prob)]) -> MarkovChainSpec {
        MarkovChainSpec::new(
            states.iter().map(|s| s.to_string()).collect(),
            gens.iter()
                .map(|(l, a, p)| GeneratorSpec {
                    label: l.to_string(),
                    action: Transformation::new(a.to_vec()).unwrap(),
                    prob: p.clone(),
                })
                .collect(),
        )
        .unwrap()
    }

    pub fn d2(with_c: bool) -> MarkovChainSpec {
        let p = if with_c { q(1, 3) } else { q(1, 2) };
        let mut gens: Vec<(&str, &[usize], Prob)> = vec![
            ("a", &[1, 0, 3, 2], Prob::Numeric(p.clone())),
            ("b", &[2, 3, 0, 1], Prob::Numeric(p.clone())),
        ];
        if with_c {
            gens.push(("c", &[0, 1, 2, 3], Prob::Numeric(p)));
        }
        chain(&["1", "a", "b", "ab"], &gens)
    }

    pub fn example() -> MarkovChainSpec {
        let third = Prob::Numeric(q(1, 3));
        chain(
            &["1", "2"],
            &[
                ("1", &[0, 0], third.clone()),
                ("2", &[1, 1], third.clone()),
                ("3", &[1, 0], third),
            ],
        )
    }

    #[test]
    fn d2_matrix() {
        let t = transition_matrix(&d2(false));
        let (xa, xb, z) = (Polynomial::var(0), Polynomial::var(1), Polynomial::zero());
        let expected = vec![
            vec![z.clone(), xa.clone(), xb.clone(), z.clone()],
            vec![xa.clone(), z.clone(), z.clone(), xb.clone()],
            vec![xb.clone(), z.clone(), z.clone(), xa.clone()],
            vec![z.clone(), xb, xa, z],
        ];
        assert_eq!(t.entries, expected);
        for s in 0..4 {
            assert_eq!(t.column_sum(s), &Polynomial::var(0) + &Polynomial::var(1));
        }
    }

    #[test]
    fn example_matrix_and_oracle() {
        let spec = example();
        let t = transition_matrix(&spec);
        let (x1, x2, x3) = (Polynomial::var(0), Polynomial::var(1), Polynomial::var(2));
        assert_eq!(t.entries[0], vec![x1.clone(), &x1 + &x3]);
        assert_eq!(t.entries[1], vec![&x2 + &x3, x2]);
        let m = t.eval(&spec.numeric_point().unwrap()).unwrap();
        let pi = stationary_oracle(&m).unwrap();
        assert_eq!(pi, vec![q(1, 2), q(1, 2)]);
        assert_eq!(apply_matrix(&m, &pi), pi);
    }

    #[test]
    fn single_state() {
        let spec = chain(&["s"], &[("e", &[0], Prob::Numeric(q(1, 1)))]);
        let t = transition_matrix(&spec);
        assert_eq!(t.entries, vec![vec![Polynomial::var(0)]]);
        let m = t.eval(&spec.numeric_point().unwrap()).unwrap();
        assert_eq!(stationary_oracle(&m).unwrap(), vec![q(1, 1)]);
        let e = ergodicity(&spec);
        assert!(e.irreducible);
        assert_eq!(e.period, 1);
    }

    #[test]
    fn d2_uniform_and_periods() {
        let spec = d2(true);
        let m = transition_matrix(&spec).eval(&spec.numeric_point().unwrap()).unwrap();
        assert_eq!(stationary_oracle(&m).unwrap(), vec![q(1, 4); 4]);
        assert_eq!(ergodicity(&d2(false)).period, 2);
        assert!(ergodicity(&d2(false)).irreducible);
        assert_eq!(ergodicity(&d2(true)).period, 1);
        assert_eq!(ergodicity(&example()).period, 1);
    }

    #[test]
    fn reducible_oracle_fails() {
        let spec = chain(&["x", "y"], &[("e", &[0, 1], Prob::Numeric(q(1, 1)))]);
        let m = transition_matrix(&spec).eval(&spec.numeric_point().unwrap()).unwrap();
        assert!(matches!(stationary_oracle(&m), Err(Error::NotIrreducible(2))));
    }

    #[test]
    fn tv_examples() {
        let u = vec![q(1, 1), q(0, 1)];
        let v = vec![q(0, 1), q(1, 1)];
        assert_eq!(tv_distance(&u, &u), q(0, 1));
        assert_eq!(tv_distance(&u, &v), q(1, 1));
        assert_eq!(tv_distance(&[q(3, 4), q(1, 4)], &[q(1, 2), q(1, 2)]), q(1, 4));
    }

    #[test]
    fn simulation_is_seeded() {
        let spec = example();
        let p = spec.numeric_point().unwrap();
        let a = simulate(&spec, &p, 50, 20_000, 0, 7).unwrap();
        let b = simulate(&spec, &p, 50, 20_000, 0, 7).unwrap();
        assert_eq!(a, b);
        assert!(tv_distance_f64(&a, &[0.5, 0.5]) < 0.02);
        let det = chain(&["x", "y"], &[("e", &[1, 1], Prob::Numeric(q(1, 1)))]);
        let d = simulate(&det, &det.numeric_point().unwrap(), 3, 100, 0, 1).unwrap();
        assert_eq!(d, vec![0.0, 1.0]);
    }
}
