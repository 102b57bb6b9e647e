//! Exact sparse multivariate polynomials and rational functions over `ℚ`.

mod monomial;
mod polynomial;
mod rational;
mod series;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use rational::RationalFunction;
pub use series::SeriesTruncation;

use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Q = BigRational;

/// Index into a [`VarTable`].
pub type Var = usize;

/// An assignment of exact values to variables.
pub type Point = BTreeMap<Var, Q>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1/3"` or `"0.25"` as an exact rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Input(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Q::new(digits, scale));
    }
    Ok(Q::from_integer(s.parse().map_err(|_| bad())?))
}

/// Names of the variables `x_<label>`, indexed by [`Var`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    labels: Vec<String>,
}

impl VarTable {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(labels: I) -> Self {
        VarTable {
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>) -> Var {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: Var) -> &str {
        &self.labels[v]
    }

    pub fn name(&self, v: Var) -> String {
        match self.labels.get(v) {
            Some(l) => format!("x_{l}"),
            None => format!("x_#{v}"),
        }
    }

    pub fn find(&self, label: &str) -> Option<Var> {
        self.labels.iter().position(|l| l == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational("-2").unwrap(), q(-2, 1));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
