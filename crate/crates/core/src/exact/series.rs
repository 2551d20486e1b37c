//! Power series in q truncated at a fixed order.

use super::ring::Rational;
use crate::error::{Error, Result};
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Series with coefficients of `q^0..=q^order`.
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs an order");
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> &Rational {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set(&mut self, d: usize, c: Rational) {
        self.coeffs[d] = c;
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(QSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let d = self.order();
        let mut out = QSeries::zero(d);
        for i in 0..=d {
            for j in 0..=(d - i) {
                out.coeffs[i + j] += &self.coeffs[i] * &o.coeffs[j];
            }
        }
        Ok(out)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.order() != o.order() {
            return Err(Error::DimensionMismatch(format!("orders {} and {}", self.order(), o.order())));
        }
        Ok(())
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| match d {
                0 => c.to_string(),
                1 => format!("({c})*q"),
                _ => format!("({c})*q^{d}"),
            })
            .collect();
        write!(f, "{} + O(q^{})", parts.join(" + "), self.order() + 1)
    }
}
