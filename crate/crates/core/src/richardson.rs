//! The Richardson-variety model: Weyl group representatives, factorized
//! unipotents, the map `u_2 -> u_{1,0}` and the superpotential `F`.

use crate::error::{invalid, Error, Result};
use crate::exact::{make_vars, LaurentPoly, Matrix, Rational, Ring, Vars};
use crate::exec::Exec;
use crate::plucker::{bottom_rows, eval_w, in_check_x, minor};
use crate::report::{CaseOutcome, VerifyReport};
use crate::rng::{nonzero_rational, SeedTree};
use crate::schubert::GrassCtx;
use num_traits::One;

/// `I + t E_{a,b}` (1-based).
pub fn elementary<T: Ring>(n: usize, a: usize, b: usize, t: T) -> Matrix<T> {
    let mut m = Matrix::identity(n);
    m.set(a - 1, b - 1, t);
    m
}

pub fn x_i<T: Ring>(n: usize, i: usize, t: T) -> Matrix<T> {
    elementary(n, i, i + 1, t)
}

pub fn y_i<T: Ring>(n: usize, i: usize, t: T) -> Matrix<T> {
    elementary(n, i + 1, i, t)
}

/// `s_i` representative `x_i(1) y_i(-1) x_i(1)`.
pub fn sdot<T: Ring>(n: usize, i: usize) -> Matrix<T> {
    let mut m = Matrix::identity(n);
    m.set(i - 1, i - 1, T::zero());
    m.set(i, i, T::zero());
    m.set(i - 1, i, T::one());
    m.set(i, i - 1, T::one().negate());
    m
}

/// Permutation (one-line, 0-based images) of a word in simple transpositions.
pub fn word_to_perm(n: usize, word: &[usize]) -> Result<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    for &i in word {
        if i == 0 || i >= n {
            return invalid(format!("s_{i} is not a simple reflection for n={n}"));
        }
        p.swap(i - 1, i);
    }
    Ok(p)
}

pub fn inversions(p: &[usize]) -> usize {
    (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
}

/// A reduced word for a permutation, by bubble sort.
pub fn reduced_word(p: &[usize]) -> Vec<usize> {
    let mut q = p.to_vec();
    let mut word = Vec::new();
    loop {
        match (0..q.len().saturating_sub(1)).find(|&i| q[i] > q[i + 1]) {
            None => break,
            Some(i) => {
                q.swap(i, i + 1);
                word.push(i + 1);
            }
        }
    }
    word.reverse();
    word
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylRep<T> {
    pub word: Vec<usize>,
    pub matrix: Matrix<T>,
}

pub fn weyl_rep<T: Ring>(n: usize, word: &[usize]) -> Result<WeylRep<T>> {
    let p = word_to_perm(n, word)?;
    if inversions(&p) != word.len() {
        return invalid(format!("word {word:?} is not reduced"));
    }
    let mut m = Matrix::identity(n);
    for &i in word {
        m = m.mul(&sdot(n, i))?;
    }
    Ok(WeylRep { word: word.to_vec(), matrix: m })
}

/// `s_1 (s_2 s_1) (s_3 s_2 s_1) ...` on the letters `offset+1 .. offset+len-1`.
fn longest_word(offset: usize, len: usize) -> Vec<usize> {
    let mut w = Vec::new();
    for r in 1..len {
        for i in (1..=r).rev() {
            w.push(offset + i);
        }
    }
    w
}

pub fn w0_word(n: usize) -> Vec<usize> {
    longest_word(0, n)
}

/// Longest element of the parabolic subgroup generated by `s_i`, `i != n-k`.
pub fn wp_word(ctx: &GrassCtx) -> Vec<usize> {
    let a = ctx.rows();
    let mut w = longest_word(0, a);
    w.extend(longest_word(a, ctx.k()));
    w
}

/// A reduced word for `w^P = w_0 w_P^{-1}`.
pub fn w_upper_p_word(ctx: &GrassCtx) -> Vec<usize> {
    let n = ctx.n();
    let w0 = word_to_perm(n, &w0_word(n)).unwrap();
    let wp = word_to_perm(n, &wp_word(ctx)).unwrap();
    // w0 = wP_upper * wP  =>  wP_upper = w0 * wP^{-1}
    let mut wp_inv = vec![0; n];
    for (i, &x) in wp.iter().enumerate() {
        wp_inv[x] = i;
    }
    let upper: Vec<usize> = (0..n).map(|i| w0[wp_inv[i]]).collect();
    reduced_word(&upper)
}

/// Inverse of a signed permutation matrix (its transpose).
fn signed_perm_inverse<T: Ring>(m: &Matrix<T>) -> Matrix<T> {
    m.transpose()
}

/// `m_{j,l}` for `j in [1,k]`, `l in [k,n-1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactParams<T> {
    k: usize,
    n: usize,
    values: Vec<T>,
}

impl<T: Ring> FactParams<T> {
    pub fn new(ctx: &GrassCtx, values: Vec<T>) -> Result<Self> {
        if values.len() != ctx.dim() {
            return Err(Error::DimensionMismatch(format!("need {} parameters", ctx.dim())));
        }
        if values.iter().any(|v| v.is_zero()) {
            return invalid("factorization parameters must be nonzero");
        }
        Ok(FactParams { k: ctx.k(), n: ctx.n(), values })
    }

    pub fn get(&self, j: usize, l: usize) -> &T {
        &self.values[(j - 1) * (self.n - self.k) + (l - self.k)]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

pub fn param_vars(ctx: &GrassCtx) -> Vars {
    let mut names = Vec::new();
    for j in 1..=ctx.k() {
        for l in ctx.k()..ctx.n() {
            names.push(format!("m[{j}][{l}]"));
        }
    }
    names.push("q".into());
    make_vars(&names)
}

/// Symbolic parameters over `param_vars`, with `q` as the last variable.
pub fn symbolic_params(ctx: &GrassCtx) -> (FactParams<LaurentPoly>, LaurentPoly) {
    let vars = param_vars(ctx);
    let vals = (0..ctx.dim()).map(|i| LaurentPoly::var(&vars, i)).collect();
    (FactParams::new(ctx, vals).unwrap(), LaurentPoly::var(&vars, ctx.dim()))
}

pub fn random_params(ctx: &GrassCtx, seed: SeedTree) -> FactParams<Rational> {
    let mut rng = seed.rng();
    let vals = (0..ctx.dim()).map(|_| nonzero_rational(&mut rng, 9, 1)).collect();
    FactParams::new(ctx, vals).unwrap()
}

/// `u_2 = u(1) ... u(k)` with `u(j) = x_{alpha_j+..+alpha_k}(m_jk) x_{k+1}(m_{j,k+1}) ... x_{n-1}(m_{j,n-1})`.
pub fn u2_from_params<T: Ring>(ctx: &GrassCtx, f: &FactParams<T>) -> Result<Matrix<T>> {
    let (k, n) = (ctx.k(), ctx.n());
    let mut u = Matrix::identity(n);
    for j in 1..=k {
        u = u.mul(&elementary(n, j, k + 1, f.get(j, k).clone()))?;
        for l in k + 1..n {
            u = u.mul(&x_i(n, l, f.get(j, l).clone()))?;
        }
    }
    Ok(u)
}

/// `w_P w_0^{-1}` as a signed permutation matrix.
pub fn wp_w0inv<T: Ring>(ctx: &GrassCtx) -> Result<Matrix<T>> {
    let n = ctx.n();
    let wp = weyl_rep::<T>(n, &wp_word(ctx))?.matrix;
    let w0 = weyl_rep::<T>(n, &w0_word(n))?.matrix;
    wp.mul(&signed_perm_inverse(&w0))
}

/// The upper unitriangular `u` with `u * a` lower triangular, by upward
/// row elimination; returns `(u, u * a)`.
pub fn lower_by_upper<T: Ring>(a: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let n = a.rows();
    let mut b = a.clone();
    let mut u: Matrix<T> = Matrix::identity(n);
    for c in (1..n).rev() {
        let piv = b.get(c, c).clone();
        if piv.is_zero() {
            return Err(Error::NotInDomain(format!("pivot {} vanishes: point outside U+B-", c + 1)));
        }
        for r in 0..c {
            if b.get(r, c).is_zero() {
                continue;
            }
            let f = b.get(r, c).div_exact(&piv)?;
            for j in 0..n {
                let v = b.get(r, j).minus(&f.times(b.get(c, j)));
                b.set(r, j, v);
                let w = u.get(r, j).minus(&f.times(u.get(c, j)));
                u.set(r, j, w);
            }
        }
    }
    Ok((u, b))
}

#[derive(Debug, Clone)]
pub struct RichardsonPoint<T> {
    pub u2: Matrix<T>,
    pub u10: Matrix<T>,
    pub b: Matrix<T>,
}

/// `mu~(u_2)` together with `b = u_{1,0} w_P w_0^{-1} u_2`.
pub fn mu_tilde<T: Ring>(ctx: &GrassCtx, f: &FactParams<T>) -> Result<RichardsonPoint<T>> {
    let u2 = u2_from_params(ctx, f)?;
    let a = wp_w0inv::<T>(ctx)?.mul(&u2)?;
    let (u10, b) = lower_by_upper(&a)?;
    Ok(RichardsonPoint { u2, u10, b })
}

fn estar<T: Ring>(u: &Matrix<T>, i: usize) -> &T {
    u.get(i - 1, i)
}

/// `F~ = sum_i e_i*(u_2) + sum_{i != n-k} e_i*(u_{1,0}) + q e_{n-k}*(u_{1,0})`.
pub fn f_from_point<T: Ring>(ctx: &GrassCtx, p: &RichardsonPoint<T>, q: &T) -> T {
    let mut s = T::zero();
    for i in 1..ctx.n() {
        s = s.plus(estar(&p.u2, i));
        let e = estar(&p.u10, i);
        s = s.plus(&if i == ctx.rows() { q.times(e) } else { e.clone() });
    }
    s
}

pub fn f_eval<T: Ring>(ctx: &GrassCtx, f: &FactParams<T>, q: &T) -> Result<T> {
    Ok(f_from_point(ctx, &mu_tilde(ctx, f)?, q))
}

/// Both minor-ratio identities for `e_i*` on the given `b`.
pub fn eistar_identities_hold<T: Ring>(ctx: &GrassCtx, u10: &Matrix<T>, u2: &Matrix<T>, b: &Matrix<T>) -> Result<bool> {
    let (k, n) = (ctx.k(), ctx.n());
    let m = bottom_rows(k, b);
    let ratio = |i: i64| -> Result<T> {
        let den = minor(&m, &ctx.interval(i))?;
        if den.is_zero() {
            return Err(Error::NotInDomain(format!("minor on {} vanishes", ctx.interval(i))));
        }
        minor(&m, &ctx.hat_interval(i))?.div_exact(&den)
    };
    for i in 1..n {
        let a = if i < n - k { T::zero() } else { ratio(i as i64)? };
        if *estar(u10, i) != a {
            return Ok(false);
        }
        let bb = if i < k { T::zero() } else { ratio((i - k) as i64)? };
        if *estar(u2, i) != bb {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_eistar<T: Ring>(ctx: &GrassCtx, f: &FactParams<T>) -> Result<bool> {
    let p = mu_tilde(ctx, f)?;
    eistar_identities_hold(ctx, &p.u10, &p.u2, &p.b)
}

/// `F~(f, q) = W(bottom k rows of b, q)`.
pub fn compare_f_w<T: Ring>(ctx: &GrassCtx, f: &FactParams<T>, q: &T) -> Result<bool> {
    if q.is_zero() {
        return invalid("q must be nonzero");
    }
    let p = mu_tilde(ctx, f)?;
    let m = bottom_rows(ctx.k(), &p.b);
    Ok(f_from_point(ctx, &p, q) == eval_w(ctx, &m, q)?)
}

/// Random sweep of `verify_eistar` (`fw = false`) or `compare_f_w` (`fw = true`).
pub fn sweep(ctx: &GrassCtx, fw: bool, samples: usize, seed: u64, exec: Exec) -> VerifyReport {
    let tree = SeedTree::new(seed).child_str("richardson-sample");
    let name = if fw { "fw" } else { "eistar" };
    let outcomes = exec.map_range(samples, |s| {
        let case = tree.child(s as u64);
        for attempt in 0..100u64 {
            let sub = case.child(attempt);
            let f = random_params(ctx, sub);
            let q = nonzero_rational(&mut sub.child(1 << 40).rng(), 9, 4);
            let res = mu_tilde(ctx, &f).and_then(|p| {
                if !in_check_x(ctx, &bottom_rows(ctx.k(), &p.b)) {
                    return Err(Error::NotInDomain("b outside the mirror".into()));
                }
                if !p.u10.is_upper_unitriangular() || !p.b.is_lower_triangular() {
                    return Ok(false);
                }
                if fw {
                    Ok(f_from_point(ctx, &p, &q) == eval_w(ctx, &bottom_rows(ctx.k(), &p.b), &q)?)
                } else {
                    eistar_identities_hold(ctx, &p.u10, &p.u2, &p.b)
                }
            });
            match res {
                Err(Error::NotInDomain(_)) => continue,
                Err(e) => return CaseOutcome::failed(format!("sample {s}"), e.to_string(), attempt as usize),
                Ok(true) => return CaseOutcome::ok(attempt as usize),
                Ok(false) => {
                    let vals: Vec<String> = f.values().iter().map(|v| v.to_string()).collect();
                    return CaseOutcome::failed(format!("sample {s}"), format!("m = [{}]", vals.join(", ")), attempt as usize);
                }
            }
        }
        CaseOutcome::failed(format!("sample {s}"), "no generic point after 100 attempts", 100)
    });
    let mut r = VerifyReport::new(name, ctx.k(), ctx.n(), "point");
    r.absorb(outcomes);
    r
}

/// Symbolic `F~` over `param_vars`.
pub fn f_symbolic(ctx: &GrassCtx) -> Result<LaurentPoly> {
    let (f, q) = symbolic_params(ctx);
    f_eval(ctx, &f, &q)
}

pub fn symbolic_report(ctx: &GrassCtx, fw: bool) -> VerifyReport {
    let (f, q) = symbolic_params(ctx);
    let mut r = VerifyReport::new(if fw { "fw" } else { "eistar" }, ctx.k(), ctx.n(), "symbolic");
    let res = if fw { compare_f_w(ctx, &f, &q) } else { verify_eistar(ctx, &f) };
    r.cases = 1;
    match res {
        Ok(true) => {}
        Ok(false) => r.fail("symbolic", "identity fails"),
        Err(e) => r.fail("symbolic", e.to_string()),
    }
    r
}

pub fn is_identity<T: Ring>(m: &Matrix<T>) -> bool {
    *m == Matrix::identity(m.rows())
}

/// `s_i^4 = 1` and `det s_i = 1` hold for the representative.
pub fn sdot_sanity(n: usize, i: usize) -> Result<bool> {
    let s = sdot::<Rational>(n, i);
    let s2 = s.mul(&s)?;
    Ok(is_identity(&s2.mul(&s2)?) && s.det()? == Rational::one() && !is_identity(&s2))
}
