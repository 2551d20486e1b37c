//! The grid-quiver Laurent polynomial model, its torus chart inside the
//! mirror Grassmannian, and the A-series by two independent routes.
//!
//! The grid has rows `1..=n-k` and columns `1..=k`, with a source `(0,1)`
//! carrying `d = 1` and a sink `(n-k,k+1)` carrying `d = q`.

use crate::error::{Error, Result};
use crate::exact::{make_vars, LaurentPoly, Matrix, QSeries, Rational, Ring, Vars};
use crate::exec::Exec;
use crate::plucker::{bottom_rows, eval_w, minor};
use crate::richardson::{w0_word, weyl_rep};
use crate::schubert::{GrassCtx, Partition};
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use std::collections::HashMap;

pub type Vertex = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EhxQuiver {
    pub vertices: Vec<Vertex>,
    /// `(tail, head)` pairs.
    pub arrows: Vec<(Vertex, Vertex)>,
    pub source: Vertex,
    pub sink: Vertex,
}

pub fn ehx_quiver(ctx: &GrassCtx) -> EhxQuiver {
    let (r, k) = (ctx.rows(), ctx.k());
    let source = (0, 1);
    let sink = (r, k + 1);
    let mut vertices = vec![source];
    for i in 1..=r {
        for j in 1..=k {
            vertices.push((i, j));
        }
    }
    vertices.push(sink);
    let has = |v: Vertex| vertices.contains(&v);
    let mut arrows = Vec::new();
    for &(i, j) in &vertices {
        for h in [(i, j + 1), (i + 1, j)] {
            if has(h) {
                arrows.push(((i, j), h));
            }
        }
    }
    EhxQuiver { vertices, arrows, source, sink }
}

/// Variables `d[i][j]` (row-major) followed by `q`.
pub fn torus_vars(ctx: &GrassCtx) -> Vars {
    let mut names = Vec::new();
    for i in 1..=ctx.rows() {
        for j in 1..=ctx.k() {
            names.push(format!("d[{i}][{j}]"));
        }
    }
    names.push("q".into());
    make_vars(&names)
}

/// Index of `d_ij` in the torus variables and in `TorusPoint` values.
pub fn grid_index(ctx: &GrassCtx, i: usize, j: usize) -> usize {
    (i - 1) * ctx.k() + (j - 1)
}

/// `d_ij` as symbolic variables, plus `q`.
pub fn symbolic_torus(ctx: &GrassCtx) -> (Vec<LaurentPoly>, LaurentPoly) {
    let vars = torus_vars(ctx);
    let d = (0..ctx.dim()).map(|i| LaurentPoly::var(&vars, i)).collect();
    (d, LaurentPoly::var(&vars, ctx.dim()))
}

/// Sum over arrows of `d_head / d_tail`.
pub fn ehx_potential(ctx: &GrassCtx) -> LaurentPoly {
    let vars = torus_vars(ctx);
    let quiver = ehx_quiver(ctx);
    let nv = vars.len();
    let expo = |v: Vertex| -> Vec<i32> {
        let mut e = vec![0; nv];
        if v == quiver.sink {
            e[nv - 1] = 1;
        } else if v != quiver.source {
            e[grid_index(ctx, v.0, v.1)] = 1;
        }
        e
    };
    LaurentPoly::from_terms(
        &vars,
        quiver.arrows.iter().map(|&(t, h)| {
            let e: Vec<i32> = expo(h).iter().zip(expo(t)).map(|(a, b)| a - b).collect();
            (e, Rational::one())
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// `s_i` representative.
    S(usize),
    /// `x_index(d_head / d_tail)`; the tail `(0,1)` is the source.
    X { index: usize, head: Vertex, tail: Vertex },
}

/// The factor sequence of `g_(d)`, read column by column from the sink
/// column leftwards. Column `j < k` is preceded by `s_j s_{j+1} ... s_{k-1}`
/// (the sink column by `s_{k+1} ... s_{n-1}`), then the rightmost one-step
/// vertical paths ending in rows `1..=n-k` of that column.
pub fn reading_word(ctx: &GrassCtx) -> Vec<Factor> {
    let (k, n, r) = (ctx.k(), ctx.n(), ctx.rows());
    let mut w: Vec<Factor> = (k + 1..n).map(Factor::S).collect();
    for j in (1..=k).rev() {
        w.extend((j..k).map(Factor::S));
        for i in 1..=r {
            let tail = if i == 1 { (0, 1) } else { (i - 1, j) };
            w.push(Factor::X { index: k + i - 1, head: (i, j), tail });
        }
    }
    w
}

/// Bottom `k` rows of `w_0 g_(d)`, computed by column operations.
pub fn build_matrix_from_torus<T: Ring>(ctx: &GrassCtx, d: &[T]) -> Result<Matrix<T>> {
    if d.len() != ctx.dim() {
        return Err(Error::DimensionMismatch(format!("torus point needs {} coordinates", ctx.dim())));
    }
    if d.iter().any(|x| x.is_zero()) {
        return Err(Error::InvalidInput("torus coordinates must be nonzero".into()));
    }
    let n = ctx.n();
    let w0 = weyl_rep::<T>(n, &w0_word(n))?.matrix;
    let mut m = bottom_rows(ctx.k(), &w0);
    let val = |v: Vertex| -> T {
        if v == (0, 1) {
            T::one()
        } else {
            d[grid_index(ctx, v.0, v.1)].clone()
        }
    };
    for f in reading_word(ctx) {
        match f {
            Factor::S(i) => {
                for r in 0..m.rows() {
                    let a = m.get(r, i - 1).clone();
                    let b = m.get(r, i).clone();
                    m.set(r, i - 1, b.negate());
                    m.set(r, i, a);
                }
            }
            Factor::X { index, head, tail } => {
                let t = val(head).div_exact(&val(tail))?;
                for r in 0..m.rows() {
                    let v = m.get(r, index).plus(&t.times(m.get(r, index - 1)));
                    m.set(r, index, v);
                }
            }
        }
    }
    Ok(m)
}

/// `d_ij = p_{i x j} / p_{(i-1) x (j-1)}`.
pub fn rect_ratios<T: Ring>(ctx: &GrassCtx, m: &Matrix<T>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(ctx.dim());
    for i in 1..=ctx.rows() {
        for j in 1..=ctx.k() {
            let num = minor(m, &ctx.partition_to_subset(&Partition::rect(i, j))?)?;
            let den_p = Partition::rect(i - 1, j - 1);
            let den = minor(m, &ctx.partition_to_subset(&den_p)?)?;
            if den.is_zero() || num.is_zero() {
                return Err(Error::NotInDomain(format!("rectangle minor vanishes near ({},{})", i, j)));
            }
            out.push(num.div_exact(&den)?);
        }
    }
    Ok(out)
}

/// `W(M(d)) - target` as a Laurent polynomial in `d` and `q`.
pub fn pullback_difference(ctx: &GrassCtx, target: &LaurentPoly) -> Result<LaurentPoly> {
    let (d, q) = symbolic_torus(ctx);
    let m = build_matrix_from_torus(ctx, &d)?;
    Ok(eval_w(ctx, &m, &q)?.minus(target))
}

pub fn verify_pullback(ctx: &GrassCtx) -> Result<bool> {
    Ok(pullback_difference(ctx, &ehx_potential(ctx))?.is_zero())
}

/// Symbolic round trip `rect_ratios(build(d)) = d`.
pub fn verify_round_trip(ctx: &GrassCtx) -> Result<bool> {
    let (d, _) = symbolic_torus(ctx);
    let m = build_matrix_from_torus(ctx, &d)?;
    Ok(rect_ratios(ctx, &m)? == d)
}

fn factorial(m: usize) -> BigInt {
    (1..=m).fold(BigInt::one(), |a, b| a * BigInt::from(b))
}

/// Sum over monotone arrays of the binomial products, for one order `m`.
fn closed_numerator(ctx: &GrassCtx, m: usize, exec: Exec) -> BigInt {
    let (r, k) = (ctx.rows(), ctx.k());
    if r < 2 || k < 2 {
        return BigInt::one();
    }
    // interior cells (i, j), 1 <= i < r, 1 <= j < k, filled from the bottom-right
    let cells: Vec<Vertex> = (1..r).rev().flat_map(|i| (1..k).rev().map(move |j| (i, j))).collect();
    let idx = |i: usize, j: usize| (i - 1) * (k - 1) + (j - 1);
    let first_choices: Vec<usize> = (0..=m).collect();
    let partial = exec.map(first_choices, |s0| {
        let mut s = vec![0usize; (r - 1) * (k - 1)];
        let get = |s: &[usize], i: usize, j: usize| if i == r || j == k { m } else { s[idx(i, j)] };
        fn rec(
            pos: usize,
            cells: &[Vertex],
            s: &mut Vec<usize>,
            acc: &BigInt,
            get: &dyn Fn(&[usize], usize, usize) -> usize,
            idx: &dyn Fn(usize, usize) -> usize,
        ) -> BigInt {
            if pos == cells.len() {
                return acc.clone();
            }
            let (i, j) = cells[pos];
            let below = get(s, i + 1, j);
            let right = get(s, i, j + 1);
            let mut total = BigInt::zero();
            for v in 0..=below.min(right) {
                s[idx(i, j)] = v;
                let w = acc
                    * binomial(BigInt::from(below), BigInt::from(v))
                    * binomial(BigInt::from(right), BigInt::from(v));
                total += rec(pos + 1, cells, s, &w, get, idx);
            }
            total
        }
        let (i, j) = cells[0];
        let below = get(&s, i + 1, j);
        let right = get(&s, i, j + 1);
        if s0 > below.min(right) {
            return BigInt::zero();
        }
        s[idx(i, j)] = s0;
        let w = binomial(BigInt::from(below), BigInt::from(s0)) * binomial(BigInt::from(right), BigInt::from(s0));
        rec(1, &cells, &mut s, &w, &get, &idx)
    });
    partial.into_iter().sum()
}

/// A-series from the closed binomial formula, coefficients of `q^0..=q^order`.
pub fn aseries_closed(ctx: &GrassCtx, order: usize, exec: Exec) -> QSeries {
    let n = ctx.n() as u32;
    QSeries::from_coeffs(
        (0..=order)
            .map(|m| Rational::new(closed_numerator(ctx, m, exec), factorial(m).pow(n)))
            .collect(),
    )
}

/// Constant term (in all `d` variables) of `a * b`, as a polynomial in `q`
/// given by its coefficient list up to degree `cap`.
fn constant_term_of_product(a: &LaurentPoly, b: &LaurentPoly, qv: usize, cap: i32) -> Vec<Rational> {
    let mut by_d: HashMap<Vec<i32>, Vec<(i32, &Rational)>> = HashMap::new();
    for (e, c) in b.terms() {
        let mut key = e.clone();
        let qd = key.remove(qv);
        by_d.entry(key).or_default().push((qd, c));
    }
    let mut out = vec![Rational::zero(); cap as usize + 1];
    for (e, c) in a.terms() {
        let mut key: Vec<i32> = e.iter().map(|x| -x).collect();
        let qa = -key.remove(qv);
        if let Some(list) = by_d.get(&key) {
            for (qb, cb) in list {
                let deg = qa + qb;
                if deg <= cap {
                    out[deg as usize] += c * *cb;
                }
            }
        }
    }
    out
}

/// A-series as `[q^d] CT(W^{dn}) / (dn)!`.
pub fn aseries_constterm(ctx: &GrassCtx, order: usize, exec: Exec) -> QSeries {
    let w = ehx_potential(ctx);
    let qv = ctx.dim();
    let n = ctx.n() as u32;
    let mut coeffs = vec![Rational::one()];
    for d in 1..=order as u32 {
        let total = d * n;
        let half = total / 2;
        let a = w.pow_with(half, exec, Some((qv, d as i32)));
        let b = if total - half == half { a.clone() } else { w.pow_with(total - half, exec, Some((qv, d as i32))) };
        log::debug!("W^{} has {} terms, W^{} has {} terms", half, a.num_terms(), total - half, b.num_terms());
        let ct = constant_term_of_product(&a, &b, qv, d as i32);
        coeffs.push(&ct[d as usize] / Rational::from_integer(factorial(total as usize)));
    }
    QSeries::from_coeffs(coeffs)
}

/// Full constant term of `W^m` in the `d` variables, as `q`-coefficients.
pub fn constant_term_power(ctx: &GrassCtx, m: u32) -> Vec<Rational> {
    let w = ehx_potential(ctx);
    let qv = ctx.dim();
    let half = m / 2;
    let a = w.pow(half);
    let b = w.pow(m - half);
    constant_term_of_product(&a, &b, qv, m as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn gr2c5_word_matches_worked_example() {
        let ctx = GrassCtx::new(3, 5).unwrap();
        let w = reading_word(&ctx);
        let s: Vec<String> = w
            .iter()
            .map(|f| match f {
                Factor::S(i) => format!("s{i}"),
                Factor::X { index, head, tail } => format!("x{index}({:?}/{:?})", head, tail),
            })
            .collect();
        assert_eq!(
            s.join(" "),
            "s4 x3((1, 3)/(0, 1)) x4((2, 3)/(1, 3)) s2 x3((1, 2)/(0, 1)) x4((2, 2)/(1, 2)) \
             s1 s2 x3((1, 1)/(0, 1)) x4((2, 1)/(1, 1))"
        );
    }

    #[test]
    fn p1_potential() {
        let ctx = GrassCtx::new(1, 2).unwrap();
        assert_eq!(ehx_potential(&ctx).to_text(), "d[1][1]^-1*q + d[1][1]");
        let a = aseries_closed(&ctx, 3, Exec::Sequential);
        assert_eq!(a.coeffs(), &[rat(1, 1), rat(1, 1), rat(1, 4), rat(1, 36)]);
        assert_eq!(aseries_constterm(&ctx, 3, Exec::Sequential), a);
    }

    #[test]
    fn pullback_small_cases() {
        for (k, n) in [(1, 3), (2, 4), (3, 5), (2, 5)] {
            let ctx = GrassCtx::new(k, n).unwrap();
            assert!(verify_pullback(&ctx).unwrap(), "({k},{n})");
            assert!(verify_round_trip(&ctx).unwrap(), "({k},{n})");
        }
    }

    #[test]
    fn series_agree_gr24() {
        let ctx = GrassCtx::new(2, 4).unwrap();
        let a = aseries_closed(&ctx, 2, Exec::Sequential);
        assert_eq!(a, aseries_constterm(&ctx, 2, Exec::Parallel));
    }
}
