//! Index combinatorics for `Gr_{n-k}(C^n)`: partitions in the `(n-k) x k`
//! rectangle, their k-subsets, cyclic shifts, Poincare duality, the quantum
//! Monk rule and the insertion coefficients `c_lambda(mu)`.

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Weakly decreasing positive parts (trailing zeros dropped).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("parts {parts:?} are not weakly decreasing"));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The `i x j` rectangle (empty when either side is zero).
    pub fn rect(i: usize, j: usize) -> Self {
        if i == 0 || j == 0 {
            Partition::empty()
        } else {
            Partition(vec![j; i])
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Part `r` (1-based), zero past the length.
    pub fn part(&self, r: usize) -> usize {
        self.0.get(r - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Some `(i, j)` when the partition is the `i x j` rectangle (`(0, 0)` for empty).
    pub fn as_rect(&self) -> Option<(usize, usize)> {
        match self.0.first() {
            None => Some((0, 0)),
            Some(&j) => self.0.iter().all(|&p| p == j).then_some((self.0.len(), j)),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() || s == "∅" || s == "0" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad part {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Strictly increasing elements of `[1, n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KSubset(Vec<usize>);

impl KSubset {
    pub fn new(mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("repeated element in {elems:?}"));
        }
        Ok(KSubset(elems))
    }

    pub fn elems(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// 0-based column indices, for minors.
    pub fn cols0(&self) -> Vec<usize> {
        self.0.iter().map(|x| x - 1).collect()
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// Reduces an integer into `[1, n]` modulo `n`.
pub fn cyc(x: i64, n: usize) -> usize {
    ((x - 1).rem_euclid(n as i64) + 1) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonkTerms {
    pub add_set: Vec<Partition>,
    pub rim: Option<Partition>,
}

/// Context for `Gr_{n-k}(C^n)`: partitions fit `n-k` rows of at most `k` boxes.
#[derive(Debug, Clone)]
pub struct GrassCtx {
    k: usize,
    n: usize,
    partitions: Vec<Partition>,
    subsets: Vec<KSubset>,
    index: HashMap<Partition, usize>,
}

impl GrassCtx {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return invalid(format!("need 1 <= k < n, got k={k}, n={n}"));
        }
        if n > 24 {
            return invalid("n too large");
        }
        let mut subsets: Vec<KSubset> = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                subsets.push(KSubset((1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect()));
            }
        }
        subsets.sort();
        let mut ctx = GrassCtx { k, n, partitions: Vec::new(), subsets: Vec::new(), index: HashMap::new() };
        ctx.partitions = subsets.iter().map(|s| ctx.subset_to_partition(s).unwrap()).collect();
        ctx.index = ctx.partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        ctx.subsets = subsets;
        Ok(ctx)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows of the rectangle.
    pub fn rows(&self) -> usize {
        self.n - self.k
    }

    /// Dimension `k(n-k)`.
    pub fn dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    /// All partitions, ordered lexicographically by their subsets.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn subsets(&self) -> &[KSubset] {
        &self.subsets
    }

    pub fn index_of(&self, lam: &Partition) -> Result<usize> {
        self.index.get(lam).copied().ok_or_else(|| Error::InvalidInput(format!("({lam}) is outside the rectangle")))
    }

    pub fn fits(&self, lam: &Partition) -> bool {
        lam.len() <= self.rows() && lam.part(1) <= self.k
    }

    fn check(&self, lam: &Partition) -> Result<()> {
        if self.fits(lam) {
            Ok(())
        } else {
            invalid(format!("({lam}) does not fit the {}x{} rectangle", self.rows(), self.k))
        }
    }

    fn check_subset(&self, s: &KSubset) -> Result<()> {
        if s.0.len() != self.k || s.0.iter().any(|&x| x == 0 || x > self.n) {
            return invalid(format!("{s} is not a {}-subset of [1,{}]", self.k, self.n));
        }
        Ok(())
    }

    /// Positions of the horizontal steps on the boundary path from the
    /// top-right to the bottom-left corner of the rectangle.
    pub fn partition_to_subset(&self, lam: &Partition) -> Result<KSubset> {
        self.check(lam)?;
        let k = self.k;
        let mut j: Vec<usize> = (1..=k)
            .map(|c| {
                let conj = lam.0.iter().filter(|&&p| p >= c).count();
                (k - c + 1) + conj
            })
            .collect();
        j.sort_unstable();
        Ok(KSubset(j))
    }

    pub fn subset_to_partition(&self, s: &KSubset) -> Result<Partition> {
        self.check_subset(s)?;
        let k = self.k;
        // column c (from the left) has height j_{k-c+1} - (k-c+1)
        let conj: Vec<usize> = (1..=k).map(|c| s.0[k - c] - (k - c + 1)).collect();
        let parts: Vec<usize> = (1..=self.rows()).map(|r| conj.iter().filter(|&&h| h >= r).count()).collect();
        Partition::new(parts)
    }

    pub fn subset_of(&self, lam: &Partition) -> &KSubset {
        &self.subsets[self.index_of(lam).expect("partition in context")]
    }

    /// `J_i = {i+1, ..., i+k}` mod n.
    pub fn interval(&self, i: i64) -> KSubset {
        let mut v: Vec<usize> = (1..=self.k as i64).map(|t| cyc(i + t, self.n)).collect();
        v.sort_unstable();
        KSubset(v)
    }

    /// `{i+1, ..., i+k-1, i+k+1}` mod n.
    pub fn hat_interval(&self, i: i64) -> KSubset {
        let k = self.k as i64;
        let mut v: Vec<usize> = (1..k).map(|t| cyc(i + t, self.n)).collect();
        v.push(cyc(i + k + 1, self.n));
        v.sort_unstable();
        KSubset(v)
    }

    /// `L_i = {i-k+1, ..., i}`.
    pub fn frozen_interval(&self, i: i64) -> KSubset {
        self.interval(i - self.k as i64)
    }

    pub fn mu(&self, i: i64) -> Partition {
        self.subset_to_partition(&self.interval(i)).unwrap()
    }

    pub fn mu_hat(&self, i: i64) -> Partition {
        self.subset_to_partition(&self.hat_interval(i)).unwrap()
    }

    /// `lambda^(m)`: the partition of `J_lambda - m` mod n.
    pub fn cyclic_shift(&self, lam: &Partition, m: i64) -> Result<Partition> {
        let s = self.partition_to_subset(lam)?;
        self.subset_to_partition(&self.shift_subset(&s, m))
    }

    pub fn shift_subset(&self, s: &KSubset, m: i64) -> KSubset {
        let mut v: Vec<usize> = s.0.iter().map(|&x| cyc(x as i64 - m, self.n)).collect();
        v.sort_unstable();
        KSubset(v)
    }

    /// 180-degree rotated complement in the rectangle.
    pub fn poincare_dual(&self, lam: &Partition) -> Result<Partition> {
        self.check(lam)?;
        let r = self.rows();
        Partition::new((1..=r).map(|i| self.k - lam.part(r + 1 - i)).collect())
    }

    /// Quantum Monk rule for `sigma_box * sigma^lambda`.
    pub fn monk_successors(&self, lam: &Partition) -> Result<MonkTerms> {
        self.check(lam)?;
        let r = self.rows();
        let mut add_set = Vec::new();
        for row in 1..=r {
            let cur = lam.part(row);
            if cur < self.k && (row == 1 || lam.part(row - 1) > cur) {
                let mut parts: Vec<usize> = (1..=r).map(|i| lam.part(i)).collect();
                parts[row - 1] += 1;
                add_set.push(Partition::new(parts)?);
            }
        }
        add_set.sort_by_key(|p| self.index_of(p).unwrap());
        let rim = if lam.part(1) == self.k && lam.part(r) >= 1 {
            Some(Partition::new((2..=r).map(|i| lam.part(i) - 1).collect())?)
        } else {
            None
        };
        Ok(MonkTerms { add_set, rim })
    }

    /// `c_lambda(mu)` on subsets: pair the sorted differences and count `m_j > l_j`.
    pub fn c_subsets(&self, jl: &KSubset, jm: &KSubset) -> usize {
        let ms = jm.0.iter().filter(|x| !jl.contains(**x));
        let ls = jl.0.iter().filter(|x| !jm.contains(**x));
        ms.zip(ls).filter(|(m, l)| m > l).count()
    }

    pub fn c_coeff(&self, lam: &Partition, mu: &Partition) -> Result<usize> {
        Ok(self.c_subsets(&self.partition_to_subset(lam)?, &self.partition_to_subset(mu)?))
    }

    /// `c^(m)_lambda(mu)` on subsets.
    pub fn c_shifted_subsets(&self, jl: &KSubset, jm: &KSubset, m: i64) -> i64 {
        let base = self.interval(0);
        let sl = self.shift_subset(jl, m);
        self.c_subsets(&sl, &self.shift_subset(jm, m)) as i64 - self.c_subsets(&sl, &self.shift_subset(&base, m)) as i64
    }

    pub fn c_shifted(&self, lam: &Partition, mu: &Partition, m: i64) -> Result<i64> {
        Ok(self.c_shifted_subsets(&self.partition_to_subset(lam)?, &self.partition_to_subset(mu)?, m))
    }

    /// `c_{lambda^(m)}(empty^(m))`, the constant removed in `c_shifted`.
    pub fn boundary_shift_value(&self, lam: &Partition, m: i64) -> Result<usize> {
        let jl = self.partition_to_subset(lam)?;
        let base = self.interval(0);
        Ok(self.c_subsets(&self.shift_subset(&jl, m), &self.shift_subset(&base, m)))
    }

    /// Closed form for `c_lambda(mu_i)`.
    pub fn boundary_c(&self, lam: &Partition, i: usize) -> Result<usize> {
        let jl = self.partition_to_subset(lam)?;
        if i == 0 || i > self.n {
            return invalid(format!("index {i} outside [1,{}]", self.n));
        }
        Ok(if i <= self.rows() {
            jl.0.iter().filter(|&&x| x <= i).count()
        } else {
            (i + 1..=self.n).filter(|x| !jl.contains(*x)).count()
        })
    }
}

/// True iff `I \ J` and `J \ I` do not interleave around the n-gon.
pub fn weakly_separated(a: &KSubset, b: &KSubset) -> bool {
    let mut tagged: Vec<(usize, bool)> = a
        .0
        .iter()
        .filter(|x| !b.contains(**x))
        .map(|&x| (x, true))
        .chain(b.0.iter().filter(|x| !a.contains(**x)).map(|&x| (x, false)))
        .collect();
    tagged.sort_unstable();
    let m = tagged.len();
    let changes = (0..m).filter(|&i| tagged[i].1 != tagged[(i + m - 1) % m].1).count();
    changes <= 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn subsets_of_distinguished_partitions() {
        let c = GrassCtx::new(3, 5).unwrap();
        assert_eq!(c.partition_to_subset(&p("3")).unwrap().elems(), &[2, 3, 4]);
        assert_eq!(c.partition_to_subset(&Partition::empty()).unwrap().elems(), &[1, 2, 3]);
        assert_eq!(c.partition_to_subset(&p("3,3")).unwrap().elems(), &[3, 4, 5]);
        assert_eq!(c.mu(5), Partition::empty());
        assert_eq!(c.mu(2), p("3,3"));
        assert_eq!(c.mu_hat(2), p("2"));
        assert!(c.partition_to_subset(&p("4")).is_err());
    }

    #[test]
    fn monk_on_gr2c5() {
        let c = GrassCtx::new(3, 5).unwrap();
        let t = c.monk_successors(&p("2,1")).unwrap();
        assert_eq!(t.add_set, vec![p("3,1"), p("2,2")].into_iter().collect::<Vec<_>>().tap_sort(&c));
        assert_eq!(t.rim, None);
        let t = c.monk_successors(&p("3,2")).unwrap();
        assert_eq!((t.add_set, t.rim), (vec![p("3,3")], Some(p("1"))));
        let t = c.monk_successors(&p("3,3")).unwrap();
        assert_eq!((t.add_set, t.rim), (vec![], Some(p("2"))));
    }

    trait TapSort {
        fn tap_sort(self, c: &GrassCtx) -> Self;
    }
    impl TapSort for Vec<Partition> {
        fn tap_sort(mut self, c: &GrassCtx) -> Self {
            self.sort_by_key(|x| c.index_of(x).unwrap());
            self
        }
    }

    #[test]
    fn duality_and_shift() {
        let c = GrassCtx::new(3, 5).unwrap();
        assert_eq!(c.poincare_dual(&p("1")).unwrap(), p("3,2"));
        assert_eq!(c.poincare_dual(&Partition::empty()).unwrap(), p("3,3"));
        for m in 1..=5 {
            let e = c.cyclic_shift(&Partition::empty(), m).unwrap();
            assert_eq!(e, c.mu(5 - m));
        }
    }

    #[test]
    fn separation_examples() {
        let a = KSubset::new(vec![1, 3]).unwrap();
        let b = KSubset::new(vec![2, 4]).unwrap();
        assert!(!weakly_separated(&a, &b));
        assert!(weakly_separated(&a, &a));
    }
}
