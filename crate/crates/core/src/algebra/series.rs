use num_traits::Zero;

use super::{Point, Polynomial, Q};
use crate::error::Result;

/// The part of a power series of total degree strictly below `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTruncation {
    coefficients: Polynomial,
    bound: u32,
}

impl SeriesTruncation {
    pub fn new(coefficients: Polynomial, bound: u32) -> Self {
        let coefficients = coefficients.truncate(bound);
        SeriesTruncation {
            coefficients,
            bound,
        }
    }

    pub fn coefficients(&self) -> &Polynomial {
        &self.coefficients
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Restriction to a smaller bound.
    pub fn truncate(&self, bound: u32) -> SeriesTruncation {
        SeriesTruncation::new(self.coefficients.clone(), bound.min(self.bound))
    }

    pub fn eval(&self, point: &Point) -> Result<Q> {
        self.coefficients.eval(point)
    }

    /// Sum of the coefficients in each degree `0..bound`: the value of each
    /// homogeneous part with every variable set to one.
    pub fn degree_sums(&self) -> Vec<Q> {
        let mut sums = vec![Q::zero(); self.bound as usize];
        for (m, c) in self.coefficients.terms() {
            sums[m.degree() as usize] += c;
        }
        sums
    }
}
