//! Points of the mirror Grassmannian as `k x n` matrices, their Pluecker
//! coordinates, the anticanonical divisor test and the superpotential `W`.

use crate::error::{invalid, Error, Result};
use crate::exact::{Matrix, Rational, Ring};
use crate::rng::SeedTree;
use crate::schubert::{GrassCtx, KSubset, Partition};
use num_traits::Zero;
use rand::Rng;

/// Maximal minor on the columns of `s`.
pub fn minor<T: Ring>(m: &Matrix<T>, s: &KSubset) -> Result<T> {
    let rows: Vec<usize> = (0..m.rows()).collect();
    if s.elems().len() != m.rows() || s.elems().iter().any(|&c| c == 0 || c > m.cols()) {
        return invalid(format!("{s} does not index a maximal minor of a {}x{} matrix", m.rows(), m.cols()));
    }
    m.minor(&rows, &s.cols0())
}

pub fn plucker<T: Ring>(ctx: &GrassCtx, m: &Matrix<T>, lam: &Partition) -> Result<T> {
    check_shape(ctx, m)?;
    minor(m, &ctx.partition_to_subset(lam)?)
}

/// All Pluecker coordinates in the context's canonical order.
pub fn all_pluckers<T: Ring>(ctx: &GrassCtx, m: &Matrix<T>) -> Result<Vec<T>> {
    check_shape(ctx, m)?;
    ctx.subsets().iter().map(|s| minor(m, s)).collect()
}

fn check_shape<T: Ring>(ctx: &GrassCtx, m: &Matrix<T>) -> Result<()> {
    if m.rows() != ctx.k() || m.cols() != ctx.n() {
        return Err(Error::DimensionMismatch(format!(
            "expected {}x{} matrix, got {}x{}",
            ctx.k(),
            ctx.n(),
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Nonvanishing of all `n` cyclic-interval minors.
pub fn in_check_x<T: Ring>(ctx: &GrassCtx, m: &Matrix<T>) -> bool {
    (1..=ctx.n() as i64).all(|i| minor(m, &ctx.interval(i)).map(|v| !v.is_zero()).unwrap_or(false))
}

/// `W = sum_{i != n-k} p_{mu_hat_i}/p_{mu_i} + q p_{mu_hat_{n-k}}/p_{mu_{n-k}}`.
pub fn eval_w<T: Ring>(ctx: &GrassCtx, m: &Matrix<T>, q: &T) -> Result<T> {
    let (w0, w1) = eval_w_parts(ctx, m)?;
    Ok(w0.plus(&q.times(&w1)))
}

/// `(W|_{q=0}, dW/dq)`.
pub fn eval_w_parts<T: Ring>(ctx: &GrassCtx, m: &Matrix<T>) -> Result<(T, T)> {
    check_shape(ctx, m)?;
    let mut w0 = T::zero();
    let mut w1 = T::zero();
    for i in 1..=ctx.n() as i64 {
        let den_set = ctx.interval(i);
        let den = minor(m, &den_set)?;
        if den.is_zero() {
            return Err(Error::NotInDomain(format!(
                "interval minor p_{den_set} = p_({}) vanishes",
                ctx.mu(i)
            )));
        }
        let t = minor(m, &ctx.hat_interval(i))?.div_exact(&den)?;
        if i == ctx.rows() as i64 {
            w1 = w1.plus(&t);
        } else {
            w0 = w0.plus(&t);
        }
    }
    Ok((w0, w1))
}

/// `M -> M[1]`: columns rotated left by one.
pub fn cyclic_shift_point<T: Ring>(m: &Matrix<T>) -> Matrix<T> {
    let n = m.cols();
    Matrix::from_fn(m.rows(), n, |i, j| m.get(i, (j + 1) % n).clone())
}

/// Bottom `k` rows of an `n x n` matrix: the representative of its coset.
pub fn bottom_rows<T: Ring>(k: usize, g: &Matrix<T>) -> Matrix<T> {
    let n = g.rows();
    let rows: Vec<usize> = (n - k..n).collect();
    let cols: Vec<usize> = (0..g.cols()).collect();
    g.select(&rows, &cols)
}

/// Random rational point of the mirror, entries in `[-bound, bound] \ {0}`,
/// resampled until every interval minor is nonzero.
pub fn random_point(ctx: &GrassCtx, seed: SeedTree, bound: i64) -> Result<(Matrix<Rational>, usize)> {
    if bound < 1 {
        return invalid("entry bound must be positive");
    }
    let mut rng = seed.rng();
    for attempt in 0..1000 {
        let mut entries = Vec::with_capacity(ctx.k() * ctx.n());
        for _ in 0..ctx.k() * ctx.n() {
            let mut a = 0;
            while a == 0 {
                a = rng.gen_range(-bound..=bound);
            }
            entries.push(Rational::from_int(a));
        }
        let m = Matrix::from_fn(ctx.k(), ctx.n(), |i, j| entries[i * ctx.n() + j].clone());
        if in_check_x(ctx, &m) {
            return Ok((m, attempt));
        }
    }
    Err(Error::NotInDomain("random_point gave up after 1000 attempts".into()))
}

/// Scales so that `p_empty = 1`; fails on the hyperplane `p_empty = 0`.
pub fn normalize<T: Ring>(ctx: &GrassCtx, m: &Matrix<T>) -> Result<Vec<T>> {
    let all = all_pluckers(ctx, m)?;
    let e = all[ctx.index_of(&Partition::empty())?].clone();
    if e.is_zero() {
        return Err(Error::NotInDomain("p_empty vanishes".into()));
    }
    if e == T::one() {
        return Ok(all);
    }
    all.iter().map(|p| p.div_exact(&e)).collect()
}

/// Whether two points have proportional Pluecker vectors.
pub fn same_point(ctx: &GrassCtx, a: &Matrix<Rational>, b: &Matrix<Rational>) -> Result<bool> {
    let pa = all_pluckers(ctx, a)?;
    let pb = all_pluckers(ctx, b)?;
    let Some(i) = pa.iter().position(|x| !x.is_zero()) else {
        return invalid("rank-deficient point");
    };
    if pb[i].is_zero() {
        return Ok(false);
    }
    let r = &pb[i] / &pa[i];
    Ok(pa.iter().zip(&pb).all(|(x, y)| &(x * &r) == y) && !r.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;
    use num_traits::One;

    #[test]
    fn standard_point() {
        let ctx = GrassCtx::new(2, 4).unwrap();
        let m = Matrix::from_fn(2, 4, |i, j| if i == j { rat_int(1) } else { rat_int(0) });
        let p = all_pluckers(&ctx, &m).unwrap();
        for (s, v) in ctx.subsets().iter().zip(&p) {
            assert_eq!(v.is_one(), s.elems() == [1, 2]);
        }
        assert!(!in_check_x(&ctx, &m));
        assert!(matches!(eval_w(&ctx, &m, &rat_int(1)), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn random_points_are_members() {
        let ctx = GrassCtx::new(3, 6).unwrap();
        for s in 0..100 {
            let (m, _) = random_point(&ctx, SeedTree::new(7).child(s), 9).unwrap();
            assert!(in_check_x(&ctx, &m));
            assert!(in_check_x(&ctx, &cyclic_shift_point(&m)));
        }
    }
}
