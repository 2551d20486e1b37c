//! Labeled seeds of the Grassmannian cluster structure: the rectangles seed,
//! square-move mutation, exchange and weak-separation checks, and the
//! additivity property of the shifted coefficients.

use crate::error::{Error, Result};
use crate::exact::{Matrix, Rational};
use crate::exec::Exec;
use crate::plucker::{minor, random_point};
use crate::report::{CaseOutcome, VerifyReport};
use crate::rng::SeedTree;
use crate::schubert::{weakly_separated, GrassCtx, KSubset, Partition};
use num_traits::One;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet, VecDeque};

/// Quiver with one k-subset label per vertex; `b` is the skew exchange matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    labels: Vec<KSubset>,
    b: Vec<i32>,
    frozen: Vec<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SeedJson {
    labels: Vec<Vec<usize>>,
    arrows: Vec<[usize; 2]>,
    frozen: Vec<usize>,
}

/// Vertices are the rectangles `i x j`, all `(0, j)` and `(i, 0)` merged into
/// the empty partition; arrows go down, right, and diagonally back up-left.
pub fn initial_seed(ctx: &GrassCtx) -> Result<Seed> {
    let (r, k) = (ctx.rows(), ctx.k());
    let key = |i: usize, j: usize| if i == 0 || j == 0 { (0, 0) } else { (i, j) };
    let mut verts = vec![(0, 0)];
    for i in 1..=r {
        for j in 1..=k {
            verts.push((i, j));
        }
    }
    let id = |v: (usize, usize)| verts.iter().position(|&x| x == v).unwrap();
    let nv = verts.len();
    let mut b = vec![0i32; nv * nv];
    let mut add = |a: (usize, usize), c: (usize, usize)| {
        let (a, c) = (key(a.0, a.1), key(c.0, c.1));
        if a != c {
            let (x, y) = (id(a), id(c));
            b[x * nv + y] += 1;
            b[y * nv + x] -= 1;
        }
    };
    for i in 0..=r {
        for j in 0..=k {
            if i < r {
                add((i, j), (i + 1, j));
            }
            if j < k {
                add((i, j), (i, j + 1));
            }
            if i < r && j < k {
                add((i + 1, j + 1), (i, j));
            }
        }
    }
    let frozen: Vec<bool> = verts.iter().map(|&(i, j)| (i, j) == (0, 0) || i == r || j == k).collect();
    for x in 0..nv {
        for y in 0..nv {
            if frozen[x] && frozen[y] {
                b[x * nv + y] = 0;
            }
        }
    }
    let labels = verts
        .iter()
        .map(|&(i, j)| ctx.partition_to_subset(&Partition::rect(i, j)))
        .collect::<Result<Vec<_>>>()?;
    let seed = Seed { labels, b, frozen };
    seed.validate(ctx)?;
    let points = random_points(ctx, SeedTree::new(0).child_str("initial-seed-gate"), 2)?;
    for v in seed.quadrilaterals() {
        for p in &points {
            if !exchange_check(&seed, v, p)? {
                return Err(Error::PrerequisiteFailed(format!(
                    "exchange relation fails at {} in the initial seed",
                    seed.labels[v]
                )));
            }
        }
    }
    Ok(seed)
}

impl Seed {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[KSubset] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &KSubset {
        &self.labels[v]
    }

    pub fn is_frozen(&self, v: usize) -> bool {
        self.frozen[v]
    }

    pub fn b(&self, a: usize, c: usize) -> i32 {
        self.b[a * self.len() + c]
    }

    pub fn vertex_of(&self, s: &KSubset) -> Option<usize> {
        self.labels.iter().position(|x| x == s)
    }

    /// Arrows `(tail, head)` listed with multiplicity.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for c in 0..n {
                for _ in 0..self.b(a, c).max(0) {
                    out.push((a, c));
                }
            }
        }
        out
    }

    /// Tails of arrows into `v`, with multiplicity.
    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.len()).flat_map(|u| std::iter::repeat_n(u, self.b(u, v).max(0) as usize)).collect()
    }

    /// Heads of arrows out of `v`, with multiplicity.
    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.len()).flat_map(|u| std::iter::repeat_n(u, self.b(v, u).max(0) as usize)).collect()
    }

    pub fn is_quadrilateral(&self, v: usize) -> bool {
        !self.frozen[v] && self.in_neighbors(v).len() == 2 && self.out_neighbors(v).len() == 2
    }

    pub fn quadrilaterals(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.is_quadrilateral(v)).collect()
    }

    /// Sorted label set, a key for seeds up to vertex renaming.
    pub fn label_key(&self) -> BTreeSet<KSubset> {
        self.labels.iter().cloned().collect()
    }

    /// Structural invariants: size, distinct and weakly separated labels,
    /// frozen labels the intervals, skew-symmetric `b` with no loops.
    pub fn validate(&self, ctx: &GrassCtx) -> Result<()> {
        let n = self.len();
        let bad = |m: String| Err(Error::InvalidInput(m));
        if n != ctx.dim() + 1 || self.b.len() != n * n || self.frozen.len() != n {
            return bad(format!("seed has {n} vertices, expected {}", ctx.dim() + 1));
        }
        if self.label_key().len() != n {
            return bad("seed labels are not distinct".into());
        }
        for (i, a) in self.labels.iter().enumerate() {
            if a.elems().len() != ctx.k() || a.elems().iter().any(|&x| x == 0 || x > ctx.n()) {
                return bad(format!("label {a} is not a {}-subset of [{}]", ctx.k(), ctx.n()));
            }
            for c in &self.labels[i + 1..] {
                if !weakly_separated(a, c) {
                    return bad(format!("labels {a} and {c} are not weakly separated"));
                }
            }
        }
        let frozen: BTreeSet<KSubset> = (0..n).filter(|&v| self.frozen[v]).map(|v| self.labels[v].clone()).collect();
        let intervals: BTreeSet<KSubset> = (1..=ctx.n() as i64).map(|i| ctx.interval(i)).collect();
        if frozen != intervals || (0..n).filter(|&v| self.frozen[v]).count() != ctx.n() {
            return bad("frozen labels are not the cyclic intervals".into());
        }
        for a in 0..n {
            if self.b(a, a) != 0 {
                return bad("quiver has a loop".into());
            }
            for c in 0..n {
                if self.b(a, c) != -self.b(c, a) {
                    return bad("exchange matrix is not skew-symmetric".into());
                }
            }
        }
        Ok(())
    }

    /// Label replacing `label(v)` under the square move: with `S` the common
    /// part of `v` and its four neighbours, swap `Sac` for `Sbd`.
    pub fn mutated_label(&self, v: usize) -> Result<KSubset> {
        self.check_mutable(v)?;
        let nbrs: Vec<usize> = self.in_neighbors(v).into_iter().chain(self.out_neighbors(v)).collect();
        let own: BTreeSet<usize> = self.labels[v].elems().iter().copied().collect();
        let mut common = own.clone();
        let mut union = BTreeSet::new();
        for &u in &nbrs {
            let l: BTreeSet<usize> = self.labels[u].elems().iter().copied().collect();
            common = common.intersection(&l).copied().collect();
            union.extend(l);
        }
        let abcd: BTreeSet<usize> = union.difference(&common).copied().collect();
        if abcd.len() != 4 {
            return Err(Error::InvalidInput(format!("vertex {} is not a square face", self.labels[v])));
        }
        let new: Vec<usize> = common.iter().copied().chain(abcd.difference(&own).copied()).collect();
        KSubset::new(new)
    }

    fn check_mutable(&self, v: usize) -> Result<()> {
        if v >= self.len() {
            return Err(Error::InvalidInput(format!("no vertex {v}")));
        }
        if self.frozen[v] {
            return Err(Error::InvalidInput(format!("vertex {} is frozen", self.labels[v])));
        }
        if !self.is_quadrilateral(v) {
            return Err(Error::InvalidInput(format!(
                "vertex {} is not quadrilateral ({} in, {} out)",
                self.labels[v],
                self.in_neighbors(v).len(),
                self.out_neighbors(v).len()
            )));
        }
        Ok(())
    }

    /// Square-move mutation at a quadrilateral vertex.
    pub fn mutate(&self, v: usize) -> Result<Seed> {
        let label = self.mutated_label(v)?;
        let n = self.len();
        let mut b = vec![0i32; n * n];
        for a in 0..n {
            for c in 0..n {
                let bac = self.b(a, c);
                b[a * n + c] = if a == v || c == v {
                    -bac
                } else if self.frozen[a] && self.frozen[c] {
                    0
                } else {
                    let (bav, bvc) = (self.b(a, v), self.b(v, c));
                    bac + (bav.abs() * bvc + bav * bvc.abs()) / 2
                };
            }
        }
        let mut labels = self.labels.clone();
        labels[v] = label;
        Ok(Seed { labels, b, frozen: self.frozen.clone() })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = SeedJson {
            labels: self.labels.iter().map(|l| l.elems().to_vec()).collect(),
            arrows: self.arrows().into_iter().map(|(a, c)| [a, c]).collect(),
            frozen: (0..self.len()).filter(|&v| self.frozen[v]).collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json(ctx: &GrassCtx, v: &serde_json::Value) -> Result<Seed> {
        let j: SeedJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let n = j.labels.len();
        let labels = j.labels.into_iter().map(KSubset::new).collect::<Result<Vec<_>>>()?;
        let mut b = vec![0i32; n * n];
        for [a, c] in j.arrows {
            if a >= n || c >= n {
                return Err(Error::Parse(format!("arrow {a}->{c} out of range")));
            }
            b[a * n + c] += 1;
            b[c * n + a] -= 1;
        }
        let mut frozen = vec![false; n];
        for f in j.frozen {
            *frozen.get_mut(f).ok_or_else(|| Error::Parse(format!("frozen vertex {f} out of range")))? = true;
        }
        let seed = Seed { labels, b, frozen };
        seed.validate(ctx)?;
        Ok(seed)
    }
}

fn product(m: &Matrix<Rational>, labels: &[&KSubset]) -> Result<Rational> {
    labels.iter().try_fold(Rational::one(), |acc, s| Ok(acc * minor(m, s)?))
}

/// `p_label(v) p_label'(v) = prod_in p + prod_out p` at the point `m`.
pub fn exchange_check(seed: &Seed, v: usize, m: &Matrix<Rational>) -> Result<bool> {
    exchange_check_with_label(seed, v, &seed.mutated_label(v)?, m)
}

/// The same relation with an arbitrary candidate in place of the new label.
pub fn exchange_check_with_label(seed: &Seed, v: usize, new: &KSubset, m: &Matrix<Rational>) -> Result<bool> {
    seed.check_mutable(v)?;
    let lhs = minor(m, seed.label(v))? * minor(m, new)?;
    let ins: Vec<&KSubset> = seed.in_neighbors(v).into_iter().map(|u| seed.label(u)).collect();
    let outs: Vec<&KSubset> = seed.out_neighbors(v).into_iter().map(|u| seed.label(u)).collect();
    Ok(lhs == product(m, &ins)? + product(m, &outs)?)
}

fn random_points(ctx: &GrassCtx, seed: SeedTree, count: usize) -> Result<Vec<Matrix<Rational>>> {
    (0..count).map(|i| random_point(ctx, seed.child(i as u64), 9).map(|p| p.0)).collect()
}

/// Start seed, mutated vertices, and the RNG seed that chose them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationWalk {
    pub start: Seed,
    pub steps: Vec<usize>,
    pub rng_seed: u64,
}

impl MutationWalk {
    /// Every seed along the walk, the start included.
    pub fn seeds(&self) -> Result<Vec<Seed>> {
        let mut out = vec![self.start.clone()];
        for &v in &self.steps {
            let next = out.last().unwrap().mutate(v)?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Uniformly random quadrilateral mutations from the rectangles seed.
pub fn random_walk(ctx: &GrassCtx, steps: usize, rng_seed: u64) -> Result<MutationWalk> {
    let start = initial_seed(ctx)?;
    let mut rng = SeedTree::new(rng_seed).child_str("walk").rng();
    let mut cur = start.clone();
    let mut path = Vec::with_capacity(steps);
    for _ in 0..steps {
        let quads = cur.quadrilaterals();
        let Some(&v) = quads.choose(&mut rng) else {
            break;
        };
        cur = cur.mutate(v)?;
        path.push(v);
    }
    Ok(MutationWalk { start, steps: path, rng_seed })
}

/// Breadth-first search over quadrilateral mutations for a seed labelled by
/// `J_lambda`; returns the seed and the mutation path. `budget` bounds the
/// number of seeds expanded.
pub fn find_seed_containing(ctx: &GrassCtx, lam: &Partition, budget: usize) -> Result<(Seed, Vec<usize>)> {
    let target = ctx.partition_to_subset(lam)?;
    let start = initial_seed(ctx)?;
    let mut seen: HashSet<BTreeSet<KSubset>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.label_key());
    queue.push_back((start, Vec::new()));
    let mut expanded = 0;
    while let Some((seed, path)) = queue.pop_front() {
        if seed.vertex_of(&target).is_some() {
            return Ok((seed, path));
        }
        if expanded == budget {
            log::debug!("seed search frontier: {}", queue.len() + 1);
            return Err(Error::BudgetExhausted(queue.len() + 1));
        }
        expanded += 1;
        for v in seed.quadrilaterals() {
            let next = seed.mutate(v)?;
            if seen.insert(next.label_key()) {
                let mut p = path.clone();
                p.push(v);
                queue.push_back((next, p));
            }
        }
    }
    Err(Error::NotInDomain(format!("{target} is not reachable by square moves")))
}

/// Whether the additivity statement applies: `J_lambda` labels a mutable
/// vertex of the seed.
pub fn additivity_applies(ctx: &GrassCtx, seed: &Seed, lam: &Partition) -> Result<bool> {
    let j = ctx.partition_to_subset(lam)?;
    Ok(seed.vertex_of(&j).is_some_and(|v| !seed.is_frozen(v)))
}

/// For every mutable vertex `Y` not labelled `J_lambda`, the `c^(m)_lambda`
/// values summed over in-arrows and over out-arrows agree.
pub fn additivity_check(ctx: &GrassCtx, seed: &Seed, lam: &Partition, m: usize) -> Result<bool> {
    if m == 0 || m > ctx.n() {
        return Err(Error::InvalidInput(format!("m = {m} outside [1,{}]", ctx.n())));
    }
    if !additivity_applies(ctx, seed, lam)? {
        return Err(Error::PrerequisiteFailed(format!("J_({lam}) is not a mutable label of the seed")));
    }
    let jl = ctx.partition_to_subset(lam)?;
    let c = |u: usize| ctx.c_shifted_subsets(&jl, seed.label(u), m as i64);
    Ok((0..seed.len()).filter(|&y| !seed.is_frozen(y) && *seed.label(y) != jl).all(|y| {
        let si: i64 = seed.in_neighbors(y).into_iter().map(c).sum();
        let so: i64 = seed.out_neighbors(y).into_iter().map(c).sum();
        si == so
    }))
}

/// Weak separation after every step and the exchange relation at every
/// mutated vertex on `matrices` random points.
pub fn walk_report(ctx: &GrassCtx, steps: usize, rng_seed: u64, matrices: usize, exec: Exec) -> VerifyReport {
    let mut rep = VerifyReport::new("cluster-walk", ctx.k(), ctx.n(), "walk");
    let walk = match random_walk(ctx, steps, rng_seed) {
        Ok(w) => w,
        Err(e) => {
            rep.fail("walk", e.to_string());
            return rep;
        }
    };
    let seeds = match walk.seeds() {
        Ok(s) => s,
        Err(e) => {
            rep.fail("walk", e.to_string());
            return rep;
        }
    };
    let tree = SeedTree::new(rng_seed).child_str("exchange");
    let cases: Vec<usize> = (0..walk.steps.len()).collect();
    let outcomes = exec.map(cases, |s| {
        let (seed, v) = (&seeds[s], walk.steps[s]);
        let case = format!("step {} at {}", s + 1, seed.label(v));
        if let Err(e) = seeds[s + 1].validate(ctx) {
            return CaseOutcome::failed(case, e.to_string(), 0);
        }
        let points = match random_points(ctx, tree.child(s as u64), matrices) {
            Ok(p) => p,
            Err(e) => return CaseOutcome::failed(case, e.to_string(), 0),
        };
        for (i, p) in points.iter().enumerate() {
            match exchange_check(seed, v, p) {
                Ok(true) => {}
                Ok(false) => return CaseOutcome::failed(case, format!("exchange relation fails on matrix {i}"), 0),
                Err(e) => return CaseOutcome::failed(case, e.to_string(), 0),
            }
        }
        CaseOutcome::ok(0)
    });
    rep.absorb(outcomes);
    rep
}

/// Additivity over every seed of a walk, for all applicable `lambda` and all
/// `m`; a `lambda` that no visited seed carries is checked on a seed found by
/// breadth-first search.
pub fn additivity_report(ctx: &GrassCtx, steps: usize, rng_seed: u64, budget: usize, exec: Exec) -> VerifyReport {
    let mut rep = VerifyReport::new("vector-field-additivity", ctx.k(), ctx.n(), "walk");
    let seeds = match random_walk(ctx, steps, rng_seed).and_then(|w| w.seeds()) {
        Ok(s) => s,
        Err(e) => {
            rep.fail("walk", e.to_string());
            return rep;
        }
    };
    let frozen: BTreeSet<KSubset> = (1..=ctx.n() as i64).map(|i| ctx.interval(i)).collect();
    let mut cases: Vec<(Partition, Seed, String)> = Vec::new();
    let mut covered: BTreeSet<KSubset> = BTreeSet::new();
    for (s, seed) in seeds.iter().enumerate() {
        for lam in ctx.partitions() {
            if additivity_applies(ctx, seed, lam).unwrap_or(false) {
                covered.insert(ctx.subset_of(lam).clone());
                cases.push((lam.clone(), seed.clone(), format!("seed {s}")));
            }
        }
    }
    for lam in ctx.partitions() {
        let j = ctx.subset_of(lam);
        if frozen.contains(j) || covered.contains(j) {
            continue;
        }
        match find_seed_containing(ctx, lam, budget) {
            Ok((seed, path)) => cases.push((lam.clone(), seed, format!("search seed after {} moves", path.len()))),
            Err(e) => rep.fail(format!("lambda=({lam})"), e.to_string()),
        }
    }
    let outcomes = exec.map(cases, |(lam, seed, origin)| {
        for m in 1..=ctx.n() {
            match additivity_check(ctx, &seed, &lam, m) {
                Ok(true) => {}
                Ok(false) => return CaseOutcome::failed(format!("lambda=({lam}) m={m} {origin}"), "sums differ", 0),
                Err(e) => return CaseOutcome::failed(format!("lambda=({lam}) m={m} {origin}"), e.to_string(), 0),
            }
        }
        CaseOutcome::ok(0)
    });
    rep.absorb(outcomes);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(v: &[usize]) -> KSubset {
        KSubset::new(v.to_vec()).unwrap()
    }

    #[test]
    fn gr24_single_square() {
        let ctx = GrassCtx::new(2, 4).unwrap();
        let seed = initial_seed(&ctx).unwrap();
        assert_eq!(seed.len(), 5);
        let quads = seed.quadrilaterals();
        assert_eq!(quads.len(), 1);
        let v = quads[0];
        assert_eq!(seed.label(v), &sub(&[1, 3]));
        let new = seed.mutated_label(v).unwrap();
        assert_eq!(new, sub(&[2, 4]));
        let twice = seed.mutate(v).unwrap().mutate(v).unwrap();
        assert_eq!(twice, seed);
        let (p, _) = random_point(&ctx, SeedTree::new(3), 9).unwrap();
        assert!(exchange_check(&seed, v, &p).unwrap());
        assert!(!exchange_check_with_label(&seed, v, &sub(&[1, 4]), &p).unwrap());
    }

    #[test]
    fn search_finds_non_rectangle() {
        let ctx = GrassCtx::new(2, 4).unwrap();
        let lam = ctx.subset_to_partition(&sub(&[2, 4])).unwrap();
        let (seed, path) = find_seed_containing(&ctx, &lam, 10).unwrap();
        assert_eq!(path.len(), 1);
        assert!(seed.vertex_of(&sub(&[2, 4])).is_some());
        let (_, none) = find_seed_containing(&ctx, &Partition::rect(1, 1), 10).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn non_quadrilateral_refused() {
        let ctx = GrassCtx::new(3, 6).unwrap();
        let seed = initial_seed(&ctx).unwrap();
        let frozen = (0..seed.len()).find(|&v| seed.is_frozen(v)).unwrap();
        assert!(seed.mutate(frozen).is_err());
        let bad = (0..seed.len()).find(|&v| !seed.is_frozen(v) && !seed.is_quadrilateral(v));
        if let Some(v) = bad {
            assert!(seed.mutate(v).is_err());
        }
    }

    #[test]
    fn json_round_trip() {
        let ctx = GrassCtx::new(2, 5).unwrap();
        let seeds = random_walk(&ctx, 6, 11).unwrap().seeds().unwrap();
        let last = seeds.last().unwrap();
        assert_eq!(&Seed::from_json(&ctx, &last.to_json()).unwrap(), last);
    }
}
