use std::collections::BTreeSet;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Point, Polynomial, SeriesTruncation, Q, Var, VarTable};
use crate::error::{Error, Result};

/// Quotient of two polynomials with exact rational coefficients.
///
/// The denominator is kept as a product of monic, non-constant factors with
/// multiplicities. Sums use the least common multiple of the factor lists and
/// a factor is cancelled whenever it divides the numerator exactly. No general
/// multivariate GCD is taken, so two equal functions may have different
/// representations: compare with [`RationalFunction::equals`].
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Vec<(Polynomial, u32)>,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction::from_polynomial(Polynomial::zero())
    }

    pub fn one() -> Self {
        RationalFunction::from_polynomial(Polynomial::one())
    }

    pub fn constant(c: Q) -> Self {
        RationalFunction::from_polynomial(Polynomial::constant(c))
    }

    pub fn var(v: Var) -> Self {
        RationalFunction::from_polynomial(Polynomial::var(v))
    }

    pub fn from_polynomial(num: Polynomial) -> Self {
        RationalFunction { num, den: Vec::new() }
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut r = RationalFunction::from_polynomial(num);
        r.push_factor(den, 1);
        r.cancel();
        Ok(r)
    }

    fn push_factor(&mut self, mut f: Polynomial, e: u32) {
        if e == 0 {
            return;
        }
        if f.len() > 1 {
            // monomial content becomes separate single-variable factors
            for v in f.vars() {
                let k = f.valuation(v);
                if k > 0 {
                    f = f.lower_var(v, k);
                    self.push_factor(Polynomial::var(v), k * e);
                }
            }
        }
        if let Some(c) = f.as_constant() {
            debug_assert!(!c.is_zero());
            self.num = self.num.scale(&num_traits::pow(c.recip(), e as usize));
            return;
        }
        let (lc, f) = f.monic();
        if !lc.is_one() {
            self.num = self.num.scale(&num_traits::pow(lc.recip(), e as usize));
        }
        match self.den.iter_mut().find(|(g, _)| *g == f) {
            Some(slot) => slot.1 += e,
            None => self.den.push((f, e)),
        }
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.exact_div(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    /// Monic denominator factors with multiplicities.
    pub fn denominator_factors(&self) -> &[(Polynomial, u32)] {
        &self.den
    }

    /// The expanded denominator.
    pub fn denominator(&self) -> Polynomial {
        self.den
            .iter()
            .fold(Polynomial::one(), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut vars = self.num.vars();
        for (f, _) in &self.den {
            vars.extend(f.vars());
        }
        vars
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut r = self.clone();
        r.num = r.num.scale(c);
        if r.num.is_zero() {
            r.den.clear();
        }
        r
    }

    /// Product of the factors of `self.den` missing from `lcm`.
    fn cofactor(&self, lcm: &[(Polynomial, u32)]) -> Polynomial {
        let mut acc = Polynomial::one();
        for (f, e) in lcm {
            let have = self
                .den
                .iter()
                .find(|(g, _)| g == f)
                .map(|(_, k)| *k)
                .unwrap_or(0);
            if *e > have {
                acc = &acc * &f.pow(e - have);
            }
        }
        acc
    }

    fn lcm(&self, other: &Self) -> Vec<(Polynomial, u32)> {
        let mut out = self.den.clone();
        for (f, e) in &other.den {
            match out.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => out.push((f.clone(), *e)),
            }
        }
        out
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let lcm = self.lcm(other);
        let left = &self.num * &self.cofactor(&lcm);
        let right = &other.num * &other.cofactor(&lcm);
        let num = if negate { &left - &right } else { &left + &right };
        let mut r = RationalFunction { num, den: lcm };
        r.cancel();
        r
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RationalFunction::from_polynomial(self.denominator());
        r.push_factor(self.num.clone(), 1);
        r.cancel();
        Ok(r)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// Equality of rational functions by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        let lcm = self.lcm(other);
        &self.num * &self.cofactor(&lcm) == &other.num * &other.cofactor(&lcm)
    }

    pub fn eval(&self, point: &Point) -> Result<Q> {
        let mut den = Q::one();
        for (f, e) in &self.den {
            let v = f.eval(point)?;
            if v.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            den *= num_traits::pow(v, *e as usize);
        }
        Ok(self.num.eval(point)? / den)
    }

    pub fn substitute(&self, v: Var, value: &Polynomial) -> Result<Self> {
        let mut r = RationalFunction::from_polynomial(self.num.substitute(v, value));
        for (f, e) in &self.den {
            let g = f.substitute(v, value);
            if g.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            r.push_factor(g, *e);
        }
        r.cancel();
        Ok(r)
    }

    /// Partial derivative with respect to `x_v` by the quotient rule.
    pub fn partial(&self, v: Var) -> Self {
        // d(n / ∏ f^e) = (n'·F − n·Σ e·f'·F/f) / (∏ f^e · F) with F = ∏ f.
        let squarefree: Polynomial = self
            .den
            .iter()
            .fold(Polynomial::one(), |acc, (f, _)| &acc * f);
        let mut log_derivative = Polynomial::zero();
        for (i, (f, e)) in self.den.iter().enumerate() {
            let others = self
                .den
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Polynomial::one(), |acc, (_, (g, _))| &acc * g);
            let term = (&f.partial(v) * &others).scale(&Q::from_integer((*e).into()));
            log_derivative = &log_derivative + &term;
        }
        let num = &(&self.num.partial(v) * &squarefree) - &(&self.num * &log_derivative);
        let mut r = RationalFunction::from_polynomial(num);
        for (f, e) in &self.den {
            r.push_factor(f.clone(), e + 1);
        }
        r.cancel();
        r
    }

    /// Power series expansion collected by total degree below `bound`.
    pub fn series(&self, bound: u32) -> Result<SeriesTruncation> {
        let den = self.denominator();
        let c0 = den.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnitDenominator);
        }
        let inv_c0 = c0.recip();
        let den_parts = den.homogeneous_parts(bound);
        let mut inverse: Vec<Polynomial> = Vec::with_capacity(bound as usize);
        for k in 0..bound as usize {
            if k == 0 {
                inverse.push(Polynomial::constant(inv_c0.clone()));
                continue;
            }
            let mut acc = Polynomial::zero();
            for j in 1..=k {
                if den_parts[j].is_zero() || inverse[k - j].is_zero() {
                    continue;
                }
                acc = &acc + &(&den_parts[j] * &inverse[k - j]);
            }
            inverse.push(acc.scale(&(-inv_c0.clone())));
        }
        let num_parts = self.num.homogeneous_parts(bound);
        let mut out = Polynomial::zero();
        for (i, n) in num_parts.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            for inv in inverse.iter().take(bound as usize - i) {
                if !inv.is_zero() {
                    out = &out + &(n * inv);
                }
            }
        }
        Ok(SeriesTruncation::new(out, bound))
    }

    /// The limit `x_box → 0` under the constraint `Σ_{v ∈ vars} x_v + x_box = 1`.
    ///
    /// `elim` is replaced by `1 − Σ_{other v} x_v − x_box`; the powers of
    /// `x_box` dividing numerator and denominator are compared and the
    /// remaining quotient is evaluated at `x_box = 0`.
    pub fn limit_box(&self, box_var: Var, elim: Var, vars: &[Var]) -> Result<Self> {
        let mut value = &Polynomial::one() - &Polynomial::var(box_var);
        for &v in vars.iter().filter(|&&v| v != elim && v != box_var) {
            value = &value - &Polynomial::var(v);
        }
        let num = self.num.substitute(elim, &value);
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let j = num.valuation(box_var);
        let mut k = 0;
        let mut factors = Vec::with_capacity(self.den.len());
        for (f, e) in &self.den {
            let g = f.substitute(elim, &value);
            if g.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            let val = g.valuation(box_var);
            k += val * e;
            factors.push((g.lower_var(box_var, val), *e));
        }
        if j > k {
            return Ok(RationalFunction::zero());
        }
        if j < k {
            return Err(Error::PoleAtLimit {
                numerator: j,
                denominator: k,
            });
        }
        let zero = Polynomial::zero();
        let mut r = RationalFunction::from_polynomial(
            num.lower_var(box_var, j).substitute(box_var, &zero),
        );
        for (g, e) in factors {
            let g0 = g.substitute(box_var, &zero);
            if g0.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            r.push_factor(g0, e);
        }
        r.cancel();
        Ok(r)
    }

    /// `(numerator)/(denominator)` with both sides fully expanded.
    pub fn render(&self, vars: &VarTable) -> String {
        let num = self.num.render(vars);
        if self.den.is_empty() {
            return num;
        }
        // scale so that a nonzero constant term of the denominator is 1
        let den = self.denominator();
        let c = den.constant_term();
        if c.is_zero() || c.is_one() {
            return format!("({})/({})", num, den.render(vars));
        }
        let inv = c.recip();
        format!(
            "({})/({})",
            self.num.scale(&inv).render(vars),
            den.scale(&inv).render(vars)
        )
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_polynomial(p)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.combine(rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.combine(rhs, true)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        let mut r = RationalFunction::from_polynomial(&self.num * &rhs.num);
        r.den = self.den.clone();
        for (f, e) in &rhs.den {
            match r.den.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 += e,
                None => r.den.push((f.clone(), *e)),
            }
        }
        r.cancel();
        r
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
