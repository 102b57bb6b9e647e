use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Monomial, Point, Q, Var, VarTable};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in graded lexicographic order with no zero coefficients,
/// so equal polynomials have identical term maps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Polynomial::monomial(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Polynomial::monomial(Monomial::var(v), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value of a polynomial without variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `point`; every variable of `self` must be assigned.
    pub fn eval(&self, point: &Point) -> Result<Q> {
        let mut powers: HashMap<(Var, u32), Q> = HashMap::new();
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = point
                    .get(&v)
                    .ok_or_else(|| Error::UnassignedVariable(format!("#{v}")))?;
                let p = powers
                    .entry((v, e))
                    .or_insert_with(|| num_traits::pow(x.clone(), e as usize));
                t *= &*p;
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replaces `x_v` by `value`.
    pub fn substitute(&self, v: Var, value: &Polynomial) -> Polynomial {
        let mut powers: Vec<Polynomial> = vec![Polynomial::one()];
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e == 0 {
                out.add_term(rest, c.clone());
                continue;
            }
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            for (n, k) in &powers[e as usize].terms {
                out.add_term(n.mul(&rest), k * c);
            }
        }
        out
    }

    pub fn partial(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(m.lower(v, 1), c * Q::from_integer(e.into()));
            }
        }
        out
    }

    /// Largest `k` with `x_v^k` dividing `self` (0 for the zero polynomial).
    pub fn valuation(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).min().unwrap_or(0)
    }

    /// Divides every term by `x_v^k`; the caller guarantees divisibility.
    pub fn lower_var(&self, v: Var, k: u32) -> Polynomial {
        if k == 0 {
            return self.clone();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.lower(v, k), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous components indexed by degree, up to and excluding `bound`.
    pub fn homogeneous_parts(&self, bound: u32) -> Vec<Polynomial> {
        let mut parts = vec![Polynomial::zero(); bound as usize];
        for (m, c) in &self.terms {
            let d = m.degree();
            if d < bound {
                parts[d as usize].terms.insert(m.clone(), c.clone());
            }
        }
        parts
    }

    pub fn truncate(&self, bound: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quotient = Polynomial::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            for (n, k) in &divisor.terms {
                rem.add_term(n.mul(&qm), -(k * &qc));
            }
            quotient.add_term(qm, qc);
        }
        Some(quotient)
    }

    /// Scales so that the leading coefficient is one; returns the removed
    /// factor alongside.
    pub fn monic(&self) -> (Q, Polynomial) {
        match self.leading_term() {
            None => (Q::one(), Polynomial::zero()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (lc.clone(), self.scale(&lc.recip()))
            }
        }
    }

    /// Renders terms in increasing graded lexicographic order, e.g.
    /// `1 - 2*x_a^2 + x_a^4`.
    pub fn render(&self, vars: &VarTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                parts.push(abs.to_string());
            }
            for &(v, e) in m.factors() {
                let name = vars.name(v);
                if e == 1 {
                    parts.push(name);
                } else {
                    parts.push(format!("{name}^{e}"));
                }
            }
            let _ = write!(s, "{}", parts.join("*"));
        }
        s
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.len() * rhs.len());
        for (m, c) in &self.terms {
            for (n, k) in &rhs.terms {
                let prod = c * k;
                acc.entry(m.mul(n))
                    .and_modify(|x| *x += &prod)
                    .or_insert(prod);
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn x(v: Var) -> Polynomial {
        Polynomial::var(v)
    }

    #[test]
    fn add_and_difference_of_squares() {
        let one = Polynomial::one();
        let sum = &x(0) + &x(1);
        assert_eq!(sum.len(), 2);
        let prod = &(&one - &x(0)) * &(&one + &x(0));
        assert_eq!(prod, &one - &x(0).pow(2));
    }

    #[test]
    fn four_factor_denominator() {
        let one = Polynomial::one();
        let (a, b) = (x(0), x(1));
        let f1 = &(&one - &a) - &b;
        let f2 = &(&one + &a) + &b;
        let f3 = &(&one - &a) + &b;
        let f4 = &(&one + &a) - &b;
        let prod = &(&(&f1 * &f2) * &f3) * &f4;
        let a2 = a.pow(2);
        let b2 = b.pow(2);
        let expected = &(&(&one - &a2.scale(&q(2, 1))) - &b2.scale(&q(2, 1))) + &(&a2 - &b2).pow(2);
        assert_eq!(prod, expected);
    }

    #[test]
    fn exact_division() {
        let one = Polynomial::one();
        let f = &one - &(&x(0) + &x(1));
        let g = &one + &x(2).pow(3);
        let p = &f * &g;
        assert_eq!(p.exact_div(&f), Some(g.clone()));
        assert_eq!((&p + &one).exact_div(&f), None);
    }

    #[test]
    fn substitution_and_valuation() {
        let one = Polynomial::one();
        // x_b := 1 - x_a - x_box in x_a + x_b
        let value = &(&one - &x(0)) - &x(2);
        let p = (&x(0) + &x(1)).substitute(1, &value);
        assert_eq!(p, &one - &x(2));
        let v = (&x(2).pow(2) * &(&x(0) + &x(2))).valuation(2);
        assert_eq!(v, 2);
    }

    #[test]
    fn render_is_graded_lex() {
        let mut names = VarTable::default();
        names.push("a");
        names.push("b");
        let one = Polynomial::one();
        let p = &(&one - &x(0).pow(2).scale(&q(2, 1))) + &x(1);
        assert_eq!(p.render(&names), "1 + x_b - 2*x_a^2");
    }
}
