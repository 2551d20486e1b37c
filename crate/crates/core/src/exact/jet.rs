//! First-order jets: a value with its gradient, exact over Q.

use super::ring::{Rational, Ring};
use crate::error::{Error, Result};
use num_traits::{One, Zero};

/// `value + sum_i grad[i] * eps_i` with `eps_i * eps_j = 0`.
/// A short gradient is padded with zeros.
#[derive(Clone, Debug)]
pub struct Jet {
    pub value: Rational,
    pub grad: Vec<Rational>,
}

impl Jet {
    pub fn constant(value: Rational) -> Self {
        Jet { value, grad: Vec::new() }
    }

    /// The coordinate function `x_i` at value `value`, seeded with `slope`.
    pub fn variable(value: Rational, i: usize, dim: usize, slope: Rational) -> Self {
        let mut grad = vec![Rational::zero(); dim];
        grad[i] = slope;
        Jet { value, grad }
    }

    pub fn partial(&self, i: usize) -> Rational {
        self.grad.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    fn zip(&self, o: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Vec<Rational> {
        let n = self.grad.len().max(o.grad.len());
        (0..n).map(|i| f(&self.partial(i), &o.partial(i))).collect()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = self.value.recip();
        let sq = &inv * &inv;
        Ok(Jet { value: inv, grad: self.grad.iter().map(|g| -(g * &sq)).collect() })
    }
}

impl PartialEq for Jet {
    fn eq(&self, o: &Self) -> bool {
        self.value == o.value && (0..self.grad.len().max(o.grad.len())).all(|i| self.partial(i) == o.partial(i))
    }
}

impl Zero for Jet {
    fn zero() -> Self {
        Jet::constant(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.grad.iter().all(|g| g.is_zero())
    }
}

impl One for Jet {
    fn one() -> Self {
        Jet::constant(Rational::one())
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        self.plus(&o)
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        self.times(&o)
    }
}

impl Ring for Jet {
    fn from_int(n: i64) -> Self {
        Jet::constant(Rational::from_int(n))
    }
    fn plus(&self, o: &Self) -> Self {
        Jet { value: &self.value + &o.value, grad: self.zip(o, |a, b| a + b) }
    }
    fn minus(&self, o: &Self) -> Self {
        Jet { value: &self.value - &o.value, grad: self.zip(o, |a, b| a - b) }
    }
    fn times(&self, o: &Self) -> Self {
        Jet {
            value: &self.value * &o.value,
            grad: self.zip(o, |a, b| a * &o.value + &self.value * b),
        }
    }
    fn negate(&self) -> Self {
        Jet { value: -&self.value, grad: self.grad.iter().map(|g| -g).collect() }
    }
    fn div_exact(&self, o: &Self) -> Result<Self> {
        Ok(self.times(&o.recip()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::rat;

    #[test]
    fn quotient_rule() {
        // f = x / (x + y) at (2, 3): df/dx = y/(x+y)^2, df/dy = -x/(x+y)^2
        let x = Jet::variable(rat(2, 1), 0, 2, rat(1, 1));
        let y = Jet::variable(rat(3, 1), 1, 2, rat(1, 1));
        let f = x.div_exact(&x.plus(&y)).unwrap();
        assert_eq!(f.value, rat(2, 5));
        assert_eq!(f.partial(0), rat(3, 25));
        assert_eq!(f.partial(1), rat(-2, 25));
    }
}
