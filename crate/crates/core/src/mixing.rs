//! Hitting times of the minimal ideal and the mixing bounds they give.
//!
//! `τ` is the number of letters read before the product first lies in
//! `K(S)`. Degree-`ℓ` terms of a first-hit generating function `Ψ` are the
//! paths of length `ℓ`, so `Pr(τ ≥ t) = 1 − Ψ^{<t}/Ψ` and
//! `E[τ] = Σ_i x_i ∂_i Ψ / Ψ`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Point, Polynomial, RationalFunction, Q};
use crate::error::{Error, Result};
use crate::markov::{apply_matrix, tv_distance};
use crate::pipeline::{Expansion, FirstHit, Options, StationaryResult};
use crate::semigroup::ElemId;

/// `Pr(τ ≥ t)` from the truncated power series of `psi`.
pub fn hitting_tail(psi: &RationalFunction, t: u32, point: &Point) -> Result<Q> {
    if t == 0 {
        return Ok(Q::one());
    }
    let total = psi.eval(point)?;
    if total.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let head = psi.series(t)?.eval(point)?;
    Ok(Q::one() - head / total)
}

fn monomial_value(m: &crate::algebra::Monomial, point: &Point) -> Result<Q> {
    let mut acc = Q::one();
    for &(v, e) in m.factors() {
        let x = point
            .get(&v)
            .ok_or_else(|| Error::UnassignedVariable(format!("x{v}")))?;
        acc *= num_traits::pow(x.clone(), e as usize);
    }
    Ok(acc)
}

/// Values at `point` of the homogeneous parts of degree `0..bound`.
fn polynomial_profile(p: &Polynomial, point: &Point, bound: usize) -> Result<Vec<Q>> {
    let mut out = vec![Q::zero(); bound];
    for (m, c) in p.terms() {
        let d = m.degree() as usize;
        if d < bound {
            out[d] += c * monomial_value(m, point)?;
        }
    }
    Ok(out)
}

fn mul_profiles(x: &[Q], y: &[Q]) -> Vec<Q> {
    let n = x.len();
    let mut out = vec![Q::zero(); n];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate().take(n - i) {
            out[i + j] += a * b;
        }
    }
    out
}

/// `[s_0, …, s_{bound−1}]` where `s_k` is the degree-`k` part of the power
/// series of `psi` evaluated at `point`: the probability mass of paths of
/// length `k`. Equivalent to evaluating `psi.series(bound)` degree by degree
/// but works with numbers only.
pub fn degree_profile(psi: &RationalFunction, point: &Point, bound: usize) -> Result<Vec<Q>> {
    let num = polynomial_profile(psi.numerator(), point, bound)?;
    let mut den = vec![Q::zero(); bound];
    if bound > 0 {
        den[0] = Q::one();
    }
    for (f, k) in psi.denominator_factors() {
        let fp = polynomial_profile(f, point, bound)?;
        for _ in 0..*k {
            den = mul_profiles(&den, &fp);
        }
    }
    if bound == 0 {
        return Ok(Vec::new());
    }
    if den[0].is_zero() {
        return Err(Error::NonUnitDenominator);
    }
    let inv0 = den[0].recip();
    let mut s: Vec<Q> = Vec::with_capacity(bound);
    for k in 0..bound {
        let mut acc = num[k].clone();
        for j in 1..=k {
            if !den[j].is_zero() {
                acc -= &den[j] * &s[k - j];
            }
        }
        s.push(acc * &inv0);
    }
    Ok(s)
}

/// `Pr(τ ≥ t)` for `t = 0..=tmax`.
pub fn tail_table(psi: &RationalFunction, point: &Point, tmax: usize) -> Result<Vec<Q>> {
    let total = psi.eval(point)?;
    if total.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let profile = degree_profile(psi, point, tmax)?;
    let mut out = Vec::with_capacity(tmax + 1);
    let mut head = Q::zero();
    out.push(Q::one());
    for s in profile {
        head += s;
        out.push(Q::one() - &head / &total);
    }
    Ok(out)
}

/// `E[τ] = Σ_i x_i ∂_i Ψ / Ψ`.
pub fn expected_tau(psi: &RationalFunction) -> Result<RationalFunction> {
    let mut euler = RationalFunction::zero();
    for v in psi.vars() {
        euler = &euler + &(&RationalFunction::var(v) * &psi.partial(v));
    }
    euler.div(psi)
}

/// The smallest `t` with `E[τ]/(t+1) < ε`, so that Markov's inequality
/// gives `Pr(τ > t) < ε`.
pub fn markov_bound(expected: &Q, epsilon: &Q) -> Result<u64> {
    if expected.is_negative() {
        return Err(Error::Input("expected hitting time is negative".into()));
    }
    if !epsilon.is_positive() {
        return Err(Error::Input("epsilon must be positive".into()));
    }
    let t: BigInt = (expected / epsilon).floor().to_integer();
    u64::try_from(t).map_err(|_| Error::Input("mixing bound does not fit in 64 bits".into()))
}

/// Transition matrix of the walk `k ↦ a·k` on the elements of `K(S)`.
pub fn ideal_walk_matrix(result: &StationaryResult, point: &Point) -> Result<Vec<Vec<Q>>> {
    let s = &result.semigroup;
    let index: std::collections::HashMap<ElemId, usize> =
        result.ideal.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let n = result.ideal.len();
    let mut m = vec![vec![Q::zero(); n]; n];
    for (j, &k) in result.ideal.iter().enumerate() {
        for a in 0..s.generator_count() {
            let x = point
                .get(&a)
                .ok_or_else(|| Error::UnassignedVariable(result.vars.name(a)))?;
            let i = index[&s.left_mul(a, k)];
            m[i][j] += x;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TvRow {
    pub t: usize,
    pub tv: Q,
    /// `Pr(τ > t)`.
    pub tail: Q,
    pub holds: bool,
}

/// Compares `‖T^t δ_start − Ψ^M‖` for the walk on `K(S)` against
/// `Pr(τ > t)` for `t = 0..=tmax`, exactly.
pub fn tv_bound_check(
    result: &StationaryResult,
    point: &Point,
    tmax: usize,
    start: usize,
) -> Result<Vec<TvRow>> {
    if !result.is_left_zero {
        return Err(Error::NotLeftZero);
    }
    if start >= result.ideal.len() {
        return Err(Error::Input(format!("start index {start} outside K(S)")));
    }
    let psi_total = result.first_hit.total();
    let tails = tail_table(&psi_total, point, tmax + 1)?;
    let stationary = result.element_values(point)?;
    let m = ideal_walk_matrix(result, point)?;
    let mut v = crate::markov::point_mass(result.ideal.len(), start);
    let mut rows = Vec::with_capacity(tmax + 1);
    for (t, tail) in tails.iter().skip(1).enumerate() {
        let tv = tv_distance(&v, &stationary);
        rows.push(TvRow {
            t,
            holds: tv <= *tail,
            tv,
            tail: tail.clone(),
        });
        v = apply_matrix(&m, &v);
    }
    Ok(rows)
}

/// First-hit generating functions of `K(S)` for `S` itself (no adjoined
/// zero), grouped by the element hit.
#[derive(Clone, Debug)]
pub struct Hitting {
    pub first_hit: FirstHit,
    pub total: RationalFunction,
    pub per_element: Vec<(ElemId, String, RationalFunction)>,
}

pub fn hitting_functions(result: &StationaryResult, opts: &Options) -> Result<Hitting> {
    let s = &result.semigroup;
    let first_hit = if result.is_left_zero && result.mode == crate::pipeline::Mode::LeftZero {
        result.first_hit.clone()
    } else {
        let exp = Expansion::build(s.clone(), opts)?;
        let vars: Vec<usize> = (0..s.generator_count()).collect();
        FirstHit::build(&exp, &vars, |e| result.ideal.contains(&e))?
    };
    let per_element = result
        .ideal
        .iter()
        .map(|&w| {
            let psi = first_hit
                .terminals
                .iter()
                .filter(|t| t.element == w)
                .fold(RationalFunction::zero(), |acc, t| &acc + &t.psi);
            (w, s.name(w).to_string(), psi)
        })
        .collect();
    Ok(Hitting {
        total: first_hit.total(),
        first_hit,
        per_element,
    })
}

#[derive(Clone, Debug)]
pub struct ConditionalExpectation {
    pub element: ElemId,
    pub name: String,
    pub expected: RationalFunction,
    pub value: Option<Q>,
}

#[derive(Clone, Debug)]
pub struct MixingReport {
    /// `Pr(τ ≥ t)` for `t = 0..=tmax`.
    pub tail: Vec<Q>,
    pub expected_tau: RationalFunction,
    pub expected_value: Q,
    /// `E[τ]` conditioned on the element of `K(S)` hit first.
    pub per_element: Vec<ConditionalExpectation>,
    pub epsilon: Q,
    pub tmix_bound: u64,
    /// Present for left-zero `K(S)`.
    pub tv_rows: Option<Vec<TvRow>>,
}

pub fn mixing_report(
    result: &StationaryResult,
    opts: &Options,
    point: &Point,
    epsilon: &Q,
    tmax: usize,
    start: usize,
) -> Result<MixingReport> {
    let hitting = hitting_functions(result, opts)?;
    let tail = tail_table(&hitting.total, point, tmax)?;
    let expected = expected_tau(&hitting.total)?;
    let expected_value = expected.eval(point)?;
    let per_element = hitting
        .per_element
        .iter()
        .map(|(w, name, psi)| {
            let e = if psi.is_zero() {
                RationalFunction::zero()
            } else {
                expected_tau(psi)?
            };
            let value = if psi.is_zero() { None } else { Some(e.eval(point)?) };
            Ok(ConditionalExpectation {
                element: *w,
                name: name.clone(),
                expected: e,
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tmix_bound = markov_bound(&expected_value, epsilon)?;
    let tv_rows = if result.is_left_zero && result.mode == crate::pipeline::Mode::LeftZero {
        Some(tv_bound_check(result, point, tmax, start)?)
    } else {
        None
    };
    Ok(MixingReport {
        tail,
        expected_tau: expected,
        expected_value,
        per_element,
        epsilon: epsilon.clone(),
        tmix_bound,
        tv_rows,
    })
}
