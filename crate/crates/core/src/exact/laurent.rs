//! Sparse multivariate Laurent polynomials over Q.
//!
//! A polynomial carries its ordered variable list. Binary operations on
//! polynomials over different lists first merge the lists (left operand's
//! variables first, then the new ones in order), so constants built with
//! `LaurentPoly::constant` combine with anything.

use super::ring::{parse_rational, Rational, Ring};
use crate::error::{Error, Result};
use crate::exec::Exec;
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

pub type Vars = Arc<Vec<String>>;

#[derive(Clone, Debug)]
pub struct LaurentPoly {
    vars: Vars,
    terms: BTreeMap<Vec<i32>, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<i32>,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct PolyJson {
    variables: Vec<String>,
    terms: Vec<TermJson>,
}

fn empty_vars() -> Vars {
    thread_local! {
        static EMPTY: Vars = Arc::new(Vec::new());
    }
    EMPTY.with(|e| e.clone())
}

pub fn make_vars<S: AsRef<str>>(names: &[S]) -> Vars {
    Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())
}

impl LaurentPoly {
    pub fn zero_in(vars: &Vars) -> Self {
        LaurentPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        LaurentPoly { vars: empty_vars(), terms }
    }

    pub fn constant_in(vars: &Vars, c: Rational) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    pub fn monomial(vars: &Vars, exps: Vec<i32>, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { vars: vars.clone(), terms }
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Vec<i32>, Rational)>) -> Self {
        let mut p = Self::zero_in(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, Rational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, e: Vec<i32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses `self` over `vars`, which must contain all of its variables.
    pub fn with_vars(&self, vars: &Vars) -> Self {
        if Arc::ptr_eq(&self.vars, vars) || *self.vars == **vars {
            return LaurentPoly { vars: vars.clone(), terms: self.terms.clone() };
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("variable missing from target list"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = vec![0; vars.len()];
                for (i, &x) in e.iter().enumerate() {
                    f[map[i]] = x;
                }
                (f, c.clone())
            })
            .collect();
        LaurentPoly { vars: vars.clone(), terms }
    }

    fn merged_vars(&self, o: &Self) -> Vars {
        if Arc::ptr_eq(&self.vars, &o.vars) || *self.vars == *o.vars || o.vars.is_empty() {
            return self.vars.clone();
        }
        if self.vars.is_empty() {
            return o.vars.clone();
        }
        let mut v = (*self.vars).clone();
        for x in o.vars.iter() {
            if !v.contains(x) {
                v.push(x.clone());
            }
        }
        if v.len() == self.vars.len() {
            return self.vars.clone();
        }
        Arc::new(v)
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        let vars = self.merged_vars(o);
        (self.with_vars(&vars), o.with_vars(&vars))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero_in(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &[i32], c: &Rational) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), x * c))
                .collect(),
        }
    }

    /// Product, with the left factor's terms split across workers for
    /// `Exec::Parallel`. Partial sums are merged in a fixed order.
    pub fn mul_with(&self, o: &Self, exec: Exec) -> Self {
        let (a, b) = self.aligned(o);
        let vars = a.vars.clone();
        let left: Vec<(&Vec<i32>, &Rational)> = a.terms.iter().collect();
        let chunk = if exec.is_parallel() && left.len() * b.terms.len() > 4096 {
            (left.len() / 32).max(1)
        } else {
            left.len().max(1)
        };
        let chunks: Vec<&[(&Vec<i32>, &Rational)]> = left.chunks(chunk).collect();
        let partials = exec.map(chunks, |ch| {
            let mut acc: HashMap<Vec<i32>, Rational> = HashMap::new();
            for (ea, ca) in ch {
                for (eb, cb) in &b.terms {
                    let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                    let c = *ca * cb;
                    *acc.entry(e).or_insert_with(Rational::zero) += c;
                }
            }
            acc
        });
        let mut out = LaurentPoly::zero_in(&vars);
        for part in partials {
            for (e, c) in part {
                out.add_term(e, c);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        self.pow_with(e, Exec::Sequential, None)
    }

    /// `self^e`, optionally dropping terms whose degree in `cap.0` exceeds `cap.1`
    /// after every multiplication (valid when that degree is nonnegative in `self`).
    pub fn pow_with(&self, e: u32, exec: Exec, cap: Option<(usize, i32)>) -> Self {
        let trim = |p: Self| -> Self {
            match cap {
                None => p,
                Some((v, m)) => LaurentPoly {
                    vars: p.vars.clone(),
                    terms: p.terms.into_iter().filter(|(ex, _)| ex[v] <= m).collect(),
                },
            }
        };
        let mut result = LaurentPoly::constant_in(&self.vars, Rational::one());
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                result = trim(result.mul_with(&base, exec));
            }
            k >>= 1;
            if k > 0 {
                base = trim(base.mul_with(&base, exec));
            }
        }
        result
    }

    /// Exact quotient in the Laurent ring, or `InexactDivision`.
    pub fn div_exact(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b) = self.aligned(o);
        if a.is_zero() {
            return Ok(a);
        }
        let nv = a.vars.len();
        if b.is_monomial() {
            let (eb, cb) = b.terms.iter().next().unwrap();
            let neg: Vec<i32> = eb.iter().map(|x| -x).collect();
            return Ok(a.mul_monomial(&neg, &cb.recip()));
        }
        let mins = |p: &Self| -> Vec<i32> {
            (0..nv).map(|i| p.terms.keys().map(|e| e[i]).min().unwrap_or(0)).collect()
        };
        let ma = mins(&a);
        let mb = mins(&b);
        let one = Rational::one();
        let mut r = a.mul_monomial(&ma.iter().map(|x| -x).collect::<Vec<_>>(), &one);
        let bp = b.mul_monomial(&mb.iter().map(|x| -x).collect::<Vec<_>>(), &one);
        let (lb, lcb) = bp.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut quo = LaurentPoly::zero_in(&a.vars);
        while let Some((lr, lcr)) = r.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let diff: Vec<i32> = lr.iter().zip(&lb).map(|(x, y)| x - y).collect();
            if diff.iter().any(|&x| x < 0) {
                return Err(Error::InexactDivision);
            }
            let t = lcr / &lcb;
            quo.add_term(diff.clone(), t.clone());
            for (eb, cb) in &bp.terms {
                let e: Vec<i32> = eb.iter().zip(&diff).map(|(x, y)| x + y).collect();
                r.add_term(e, -(cb * &t));
            }
        }
        let shift: Vec<i32> = ma.iter().zip(&mb).map(|(x, y)| x - y).collect();
        Ok(quo.mul_monomial(&shift, &one))
    }

    /// Evaluates at `point` (one value per variable). A polynomial with no
    /// variables is a constant and accepts any point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if !self.vars.is_empty() && point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k == 0 {
                    continue;
                }
                if k < 0 && x.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                t *= Pow::pow(x, k);
            }
            total += t;
        }
        Ok(total)
    }

    /// Evaluates with named values; unnamed variables are an error.
    pub fn eval_named(&self, values: &[(&str, Rational)]) -> Result<Rational> {
        let point = self
            .vars
            .iter()
            .map(|v| {
                values
                    .iter()
                    .find(|(n, _)| n == v)
                    .map(|(_, x)| x.clone())
                    .ok_or_else(|| Error::InvalidInput(format!("no value for {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.eval(&point)
    }

    /// Substitutes a value for one variable, keeping the variable list.
    pub fn substitute(&self, var: usize, x: &Rational) -> Result<Self> {
        let mut out = LaurentPoly::zero_in(&self.vars);
        for (e, c) in &self.terms {
            let k = e[var];
            if k < 0 && x.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let mut f = e.clone();
            f[var] = 0;
            out.add_term(f, c * Pow::pow(x, k));
        }
        Ok(out)
    }

    /// `x_i * d/dx_i`.
    pub fn log_deriv(&self, var: usize) -> Self {
        let mut out = LaurentPoly::zero_in(&self.vars);
        for (e, c) in &self.terms {
            if e[var] != 0 {
                out.add_term(e.clone(), c * Rational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// `d/dx_i`.
    pub fn deriv(&self, var: usize) -> Self {
        let mut out = LaurentPoly::zero_in(&self.vars);
        for (e, c) in &self.terms {
            if e[var] != 0 {
                let mut f = e.clone();
                f[var] -= 1;
                out.add_term(f, c * Rational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Terms whose exponents vanish in every variable of `vars`.
    pub fn constant_term_in(&self, vars: &[usize]) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&i| e[i] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `x_var^deg`, as a polynomial with that exponent zeroed.
    pub fn coefficient_of(&self, var: usize, deg: i32) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[var] == deg)
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f[var] = 0;
                    (f, c.clone())
                })
                .collect(),
        }
    }

    pub fn max_degree(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pj = PolyJson {
            variables: (*self.vars).clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exponents: e.clone(),
                    numerator: c.numer().to_string(),
                    denominator: c.denom().to_string(),
                })
                .collect(),
        };
        serde_json::to_value(pj).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let pj: PolyJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let vars = make_vars(&pj.variables);
        let mut p = LaurentPoly::zero_in(&vars);
        for t in pj.terms {
            if t.exponents.len() != vars.len() {
                return Err(Error::Parse("exponent length".into()));
            }
            let c = parse_rational(&format!("{}/{}", t.numerator, t.denominator))?;
            p.add_term(t.exponents, c);
        }
        Ok(p)
    }

    /// Canonical text form: terms in exponent order, `c*x^e*y` style.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| if k == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], k) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", abs, mono.join("*"))
            };
            match (idx, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body)
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body)
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body)
                }
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, o: &Self) -> bool {
        if Arc::ptr_eq(&self.vars, &o.vars) || *self.vars == *o.vars {
            return self.terms == o.terms;
        }
        let (a, b) = self.aligned(o);
        a.terms == b.terms
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero_in(&empty_vars())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }
}

impl std::ops::Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        self.plus(&o)
    }
}

impl std::ops::Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        self.times(&o)
    }
}

impl Ring for LaurentPoly {
    fn from_int(n: i64) -> Self {
        LaurentPoly::constant(Rational::from_integer(BigInt::from(n)))
    }
    fn plus(&self, o: &Self) -> Self {
        let (mut a, b) = self.aligned(o);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
    fn minus(&self, o: &Self) -> Self {
        let (mut a, b) = self.aligned(o);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
    fn times(&self, o: &Self) -> Self {
        self.mul_with(o, Exec::Sequential)
    }
    fn negate(&self) -> Self {
        self.scale(&-Rational::one())
    }
    fn div_exact(&self, o: &Self) -> Result<Self> {
        LaurentPoly::div_exact(self, o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::rat;

    fn xy() -> (LaurentPoly, LaurentPoly) {
        let v = make_vars(&["x", "y"]);
        (LaurentPoly::var(&v, 0), LaurentPoly::var(&v, 1))
    }

    #[test]
    fn arithmetic_and_text() {
        let (x, y) = xy();
        let p = x.plus(&y).times(&x.minus(&y));
        let expect = x.times(&x).minus(&y.times(&y));
        assert_eq!(p, expect);
        let inv = LaurentPoly::one().div_exact(&x).unwrap();
        assert_eq!(inv.times(&x), LaurentPoly::one());
        assert_eq!(x.plus(&inv.scale(&rat(-3, 2))).to_text(), "-3/2*x^-1 + x");
    }

    #[test]
    fn exact_division() {
        let (x, y) = xy();
        let a = x.plus(&y).pow(3).times(&x.minus(&LaurentPoly::one()));
        let b = x.plus(&y);
        assert_eq!(a.div_exact(&b).unwrap(), x.plus(&y).pow(2).times(&x.minus(&LaurentPoly::one())));
        assert_eq!(x.plus(&LaurentPoly::one()).div_exact(&b), Err(Error::InexactDivision));
        let xi = LaurentPoly::one().div_exact(&x).unwrap();
        let c = b.times(&xi).times(&y.plus(&xi));
        assert_eq!(c.div_exact(&y.plus(&xi)).unwrap(), b.times(&xi));
    }

    #[test]
    fn merge_variables() {
        let a = LaurentPoly::var(&make_vars(&["x"]), 0);
        let b = LaurentPoly::var(&make_vars(&["y"]), 0);
        let s = a.plus(&b);
        assert_eq!(s.vars().len(), 2);
        assert_eq!(s.minus(&b), a);
        assert_eq!(LaurentPoly::constant(rat(2, 1)).plus(&a).eval_named(&[("x", rat(1, 2))]).unwrap(), rat(5, 2));
    }

    #[test]
    fn json_round_trip() {
        let (x, y) = xy();
        let p = x.scale(&rat(-7, 3)).plus(&LaurentPoly::one().div_exact(&y).unwrap());
        assert_eq!(LaurentPoly::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn eval_pole() {
        let (x, _) = xy();
        let p = LaurentPoly::one().div_exact(&x).unwrap();
        assert_eq!(p.eval(&[rat(0, 1), rat(1, 1)]), Err(Error::DivisionByZero));
    }
}
