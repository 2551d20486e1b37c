//! Vector fields `X^(m)_lambda` on the grid torus, the action identities
//! they satisfy against `W`, and the connection matrices read off from them.

use crate::cluster::{find_seed_containing, initial_seed, Seed};
use crate::connection::{monk_matrix, nabla_q_with, nabla_z_with, qz_vars, CohVector};
use crate::ehx::{build_matrix_from_torus, ehx_potential, grid_index, symbolic_torus};
use crate::error::{Error, Result};
use crate::exact::{Jet, LaurentPoly, Matrix, Rational, Ring};
use crate::exec::Exec;
use crate::plucker::minor;
use crate::report::{CaseOutcome, VerifyReport};
use crate::rng::{nonzero_rational, SeedTree};
use crate::schubert::{GrassCtx, KSubset, Partition};
use num_traits::{One, Zero};
use serde::Serialize;

/// Seed-search budget used when a partition is not a rectangle.
pub const SEARCH_BUDGET: usize = 10_000;
const MAX_ATTEMPTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Symbolic,
    Point { points: usize, seed: u64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Symbolic => "symbolic",
            Mode::Point { .. } => "point",
        }
    }
}

/// `sum_ab f_ab d_ab d/dd_ab`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusVectorField<T> {
    pub coeffs: Vec<T>,
}

impl<T: Ring> TorusVectorField<T> {
    /// Value on a function given by its log-derivatives `d_ab dF/dd_ab`.
    pub fn apply(&self, logderivs: &[T]) -> T {
        self.coeffs.iter().zip(logderivs).fold(T::zero(), |acc, (f, g)| acc.plus(&f.times(g)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// A seed together with the partitions indexing its non-empty labels.
#[derive(Debug, Clone)]
pub struct Chart {
    pub seed: Seed,
    pub coords: Vec<usize>,
    pub rect: bool,
}

impl Chart {
    pub fn new(ctx: &GrassCtx, seed: Seed, rect: bool) -> Result<Self> {
        let empty = ctx.partition_to_subset(&Partition::empty())?;
        let coords = seed
            .labels()
            .iter()
            .filter(|l| **l != empty)
            .map(|l| ctx.index_of(&ctx.subset_to_partition(l)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Chart { seed, coords, rect })
    }
}

/// The rectangles seed when `J_lambda` is a rectangle, else a seed found by
/// breadth-first search.
pub fn chart_for(ctx: &GrassCtx, lam: &Partition) -> Result<Chart> {
    let start = initial_seed(ctx)?;
    if start.vertex_of(&ctx.partition_to_subset(lam)?).is_some() {
        return Chart::new(ctx, start, true);
    }
    let (seed, _) = find_seed_containing(ctx, lam, SEARCH_BUDGET)?;
    Chart::new(ctx, seed, false)
}

fn c_of(ctx: &GrassCtx, jl: &KSubset, mu: &Partition, m: usize) -> i64 {
    ctx.c_shifted_subsets(jl, ctx.subset_of(mu), m as i64)
}

/// `c^(m)_lambda` at each chart coordinate, minus its value at the empty
/// label (zero, kept for the normalization `p_empty = 1`).
fn chart_c(ctx: &GrassCtx, chart: &Chart, lam: &Partition, ms: &[usize]) -> Vec<i64> {
    let jl = ctx.subset_of(lam).clone();
    let total = |mu: &Partition| -> i64 { ms.iter().map(|&m| c_of(ctx, &jl, mu, m)).sum() };
    let base = total(&Partition::empty());
    chart.coords.iter().map(|&i| total(&ctx.partitions()[i]) - base).collect()
}

fn all_m(ctx: &GrassCtx) -> Vec<usize> {
    (1..=ctx.n()).collect()
}

/// `p_lambda(M(d))` normalized by `p_empty`.
pub fn plucker_on_torus(ctx: &GrassCtx, lam: &Partition) -> Result<LaurentPoly> {
    let (d, _) = symbolic_torus(ctx);
    let m = build_matrix_from_torus(ctx, &d)?;
    let e = minor(&m, &ctx.partition_to_subset(&Partition::empty())?)?;
    minor(&m, &ctx.partition_to_subset(lam)?)?.div_exact(&e)
}

/// Symbolic data on the torus: all Pluecker coordinates, `W` and its
/// log-derivatives.
#[derive(Debug, Clone)]
pub struct SymbolicModel {
    pub p: Vec<LaurentPoly>,
    pub w: LaurentPoly,
    pub lw: Vec<LaurentPoly>,
    pub q: LaurentPoly,
}

impl SymbolicModel {
    pub fn new(ctx: &GrassCtx) -> Result<Self> {
        let (d, q) = symbolic_torus(ctx);
        let m = build_matrix_from_torus(ctx, &d)?;
        let e = minor(&m, &ctx.partition_to_subset(&Partition::empty())?)?;
        let p = ctx
            .subsets()
            .iter()
            .map(|s| minor(&m, s)?.div_exact(&e))
            .collect::<Result<Vec<_>>>()?;
        let w = ehx_potential(ctx);
        let lw = (0..ctx.dim()).map(|i| w.log_deriv(i)).collect();
        Ok(SymbolicModel { p, w, lw, q })
    }

    fn pl(&self, ctx: &GrassCtx, lam: &Partition) -> Result<&LaurentPoly> {
        Ok(&self.p[ctx.index_of(lam)?])
    }

    fn monk_side(&self, ctx: &GrassCtx, lam: &Partition) -> Result<LaurentPoly> {
        let t = ctx.monk_successors(lam)?;
        let mut acc = LaurentPoly::zero_in(self.q.vars());
        for mu in &t.add_set {
            acc = acc.plus(self.pl(ctx, mu)?);
        }
        if let Some(nu) = &t.rim {
            acc = acc.plus(&self.q.times(self.pl(ctx, nu)?));
        }
        Ok(acc)
    }

    /// `sum p_mu + q p_nu - q^{delta_mn} (p_Lhat_m / p_L_m) p_lambda`.
    pub fn action_rhs(&self, ctx: &GrassCtx, lam: &Partition, m: usize) -> Result<LaurentPoly> {
        let b = boundary_ratio(ctx, m, |s| Ok(self.p[ctx.index_of(&ctx.subset_to_partition(s)?)?].clone()))?;
        let b = if m == ctx.n() { b.times(&self.q) } else { b };
        Ok(self.monk_side(ctx, lam)?.minus(&b.times(self.pl(ctx, lam)?)))
    }

    /// `n (sum p_mu + q p_nu) - W p_lambda`.
    pub fn sum_rhs(&self, ctx: &GrassCtx, lam: &Partition) -> Result<LaurentPoly> {
        let n = Rational::from_int(ctx.n() as i64);
        Ok(self.monk_side(ctx, lam)?.scale(&n).minus(&self.w.times(self.pl(ctx, lam)?)))
    }

    /// The field on the rectangles chart: `f_ij = p_lambda (c_ij - c_{i-1,j-1})`.
    pub fn rect_field(&self, ctx: &GrassCtx, lam: &Partition, ms: &[usize]) -> Result<TorusVectorField<LaurentPoly>> {
        let jl = ctx.subset_of(lam).clone();
        let c = |mu: Partition| -> i64 { ms.iter().map(|&m| c_of(ctx, &jl, &mu, m)).sum() };
        let pl = self.pl(ctx, lam)?;
        let mut coeffs = vec![LaurentPoly::zero_in(self.q.vars()); ctx.dim()];
        for i in 1..=ctx.rows() {
            for j in 1..=ctx.k() {
                let e = c(Partition::rect(i, j)) - c(Partition::rect(i - 1, j - 1));
                coeffs[grid_index(ctx, i, j)] = pl.scale(&Rational::from_int(e));
            }
        }
        Ok(TorusVectorField { coeffs })
    }

    /// `(det D * X W, det D)` with `D` the log-Jacobian of the chart; on the
    /// rectangles chart `det D` is replaced by 1.
    pub fn scaled_action(
        &self,
        ctx: &GrassCtx,
        chart: &Chart,
        lam: &Partition,
        ms: &[usize],
    ) -> Result<(LaurentPoly, LaurentPoly)> {
        if chart.rect {
            let f = self.rect_field(ctx, lam, ms)?;
            return Ok((f.apply(&self.lw), LaurentPoly::constant_in(self.q.vars(), Rational::one())));
        }
        let nn = ctx.dim();
        let d = Matrix::from_fn(nn, nn, |r, ab| self.p[chart.coords[r]].log_deriv(ab));
        let det = d.det()?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let c = chart_c(ctx, chart, lam, ms);
        let pc: Vec<LaurentPoly> = chart
            .coords
            .iter()
            .zip(&c)
            .map(|(&i, &ci)| self.p[i].scale(&Rational::from_int(ci)))
            .collect();
        let all: Vec<usize> = (0..nn).collect();
        let mut acc = LaurentPoly::zero_in(self.q.vars());
        for ab in 0..nn {
            if self.lw[ab].is_zero() {
                continue;
            }
            let cols: Vec<usize> = all.iter().copied().filter(|&x| x != ab).collect();
            let mut row_sum = LaurentPoly::zero_in(self.q.vars());
            for (r, pcr) in pc.iter().enumerate() {
                if pcr.is_zero() {
                    continue;
                }
                let rows: Vec<usize> = all.iter().copied().filter(|&x| x != r).collect();
                let cof = d.minor(&rows, &cols)?;
                let term = cof.times(pcr);
                row_sum = if (ab + r) % 2 == 0 { row_sum.plus(&term) } else { row_sum.minus(&term) };
            }
            acc = acc.plus(&self.lw[ab].times(&row_sum));
        }
        Ok((acc.times(self.pl(ctx, lam)?), det))
    }
}

fn boundary_ratio<T: Ring>(ctx: &GrassCtx, m: usize, p: impl Fn(&KSubset) -> Result<T>) -> Result<T> {
    let i = m as i64 - ctx.k() as i64;
    let den = p(&ctx.interval(i))?;
    if den.is_zero() {
        return Err(Error::NotInDomain("frozen minor vanishes".into()));
    }
    p(&ctx.hat_interval(i))?.div_exact(&den)
}

/// One exact sample: torus point, `q`, Pluecker values and log-gradients,
/// and the log-gradients of both `q`-parts of `W`.
#[derive(Debug, Clone)]
pub struct PointSample {
    pub d: Vec<Rational>,
    pub q: Rational,
    pub p: Vec<Rational>,
    pub lp: Vec<Vec<Rational>>,
    pub w0: Rational,
    pub w1: Rational,
    pub g0: Vec<Rational>,
    pub g1: Vec<Rational>,
}

/// `W` split by `q`-degree, with log-derivatives.
#[derive(Debug, Clone)]
pub struct PointModel {
    w0: LaurentPoly,
    w1: LaurentPoly,
    g0: Vec<LaurentPoly>,
    g1: Vec<LaurentPoly>,
}

impl PointModel {
    pub fn new(ctx: &GrassCtx) -> Self {
        let w = ehx_potential(ctx);
        let qv = ctx.dim();
        let w0 = w.coefficient_of(qv, 0);
        let w1 = w.coefficient_of(qv, 1);
        let g0 = (0..qv).map(|i| w0.log_deriv(i)).collect();
        let g1 = (0..qv).map(|i| w1.log_deriv(i)).collect();
        PointModel { w0, w1, g0, g1 }
    }

    /// Evaluates everything at `(d, q)`; fails if a Pluecker coordinate in
    /// `needed` vanishes.
    pub fn sample(&self, ctx: &GrassCtx, d: Vec<Rational>, q: Rational, needed: &[usize]) -> Result<PointSample> {
        let nn = ctx.dim();
        let jets: Vec<Jet> = d.iter().enumerate().map(|(i, v)| Jet::variable(v.clone(), i, nn, v.clone())).collect();
        let m = build_matrix_from_torus(ctx, &jets)?;
        let e = minor(&m, &ctx.partition_to_subset(&Partition::empty())?)?;
        let inv = e.value.recip();
        let mut p = Vec::with_capacity(ctx.subsets().len());
        let mut lp = Vec::with_capacity(ctx.subsets().len());
        for s in ctx.subsets() {
            let j = minor(&m, s)?;
            p.push(&j.value * &inv);
            lp.push((0..nn).map(|i| j.partial(i) * &inv).collect::<Vec<_>>());
        }
        if let Some(&i) = needed.iter().find(|&&i| p[i].is_zero()) {
            return Err(Error::NotInDomain(format!("p_({}) vanishes", ctx.partitions()[i])));
        }
        let mut full = d.clone();
        full.push(q.clone());
        let ev = |f: &LaurentPoly| f.eval(&full);
        Ok(PointSample {
            w0: ev(&self.w0)?,
            w1: ev(&self.w1)?,
            g0: self.g0.iter().map(ev).collect::<Result<_>>()?,
            g1: self.g1.iter().map(ev).collect::<Result<_>>()?,
            d,
            q,
            p,
            lp,
        })
    }

    /// A random sample with nonzero chart coordinates and a nonsingular
    /// chart Jacobian; returns the sample and the number of rejections.
    pub fn random_sample(&self, ctx: &GrassCtx, chart: &Chart, seed: SeedTree) -> Result<(PointSample, usize)> {
        let mut rng = seed.rng();
        for attempt in 0..MAX_ATTEMPTS {
            let d: Vec<Rational> = (0..ctx.dim()).map(|_| nonzero_rational(&mut rng, 9, 4)).collect();
            let q = nonzero_rational(&mut rng, 9, 4);
            let Ok(s) = self.sample(ctx, d, q, &chart.coords) else {
                continue;
            };
            if jacobian(&s, chart).det_bareiss()?.is_zero() {
                continue;
            }
            return Ok((s, attempt));
        }
        Err(Error::NotInDomain(format!("no admissible point after {MAX_ATTEMPTS} attempts")))
    }
}

fn jacobian(s: &PointSample, chart: &Chart) -> Matrix<Rational> {
    let nn = s.d.len();
    Matrix::from_fn(nn, nn, |r, ab| &s.lp[chart.coords[r]][ab] / &s.p[chart.coords[r]])
}

/// The field at a sample point, by solving the chart Jacobian system.
pub fn field_at_point(
    ctx: &GrassCtx,
    s: &PointSample,
    chart: &Chart,
    lam: &Partition,
    ms: &[usize],
) -> Result<TorusVectorField<Rational>> {
    let pl = &s.p[ctx.index_of(lam)?];
    let rhs: Vec<Rational> = chart_c(ctx, chart, lam, ms).iter().map(|&c| pl * Rational::from_int(c)).collect();
    Ok(TorusVectorField { coeffs: jacobian(s, chart).solve(&rhs)? })
}

fn monk_side_at(ctx: &GrassCtx, s: &PointSample, lam: &Partition) -> Result<Rational> {
    let t = ctx.monk_successors(lam)?;
    let mut acc = Rational::zero();
    for mu in &t.add_set {
        acc += &s.p[ctx.index_of(mu)?];
    }
    if let Some(nu) = &t.rim {
        acc += &s.q * &s.p[ctx.index_of(nu)?];
    }
    Ok(acc)
}

/// `(q^0, q^1)` parts of `q^{delta_mn} (p_Lhat_m / p_L_m) p_lambda` at a sample.
fn boundary_parts(ctx: &GrassCtx, s: &PointSample, lam: &Partition, m: usize) -> Result<(Rational, Rational)> {
    let b = boundary_ratio(ctx, m, |x| Ok(s.p[ctx.index_of(&ctx.subset_to_partition(x)?)?].clone()))?;
    let v = b * &s.p[ctx.index_of(lam)?];
    Ok(if m == ctx.n() { (Rational::zero(), v) } else { (v, Rational::zero()) })
}

/// Left and right sides of the action identity, or of the summed identity
/// when `m` is `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionReport {
    pub lambda: String,
    pub m: Option<usize>,
    pub mode: String,
    pub equal: bool,
    pub points: usize,
    pub resampled: usize,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub detail: Option<String>,
}

fn check_symbolic(ctx: &GrassCtx, model: &SymbolicModel, lam: &Partition, m: Option<usize>) -> Result<ActionReport> {
    let chart = chart_for(ctx, lam)?;
    let ms = m.map(|x| vec![x]).unwrap_or_else(|| all_m(ctx));
    let (lhs, det) = model.scaled_action(ctx, &chart, lam, &ms)?;
    let rhs = match m {
        Some(m) => model.action_rhs(ctx, lam, m)?,
        None => model.sum_rhs(ctx, lam)?,
    };
    let rhs = rhs.times(&det);
    Ok(ActionReport {
        lambda: lam.to_string(),
        m,
        mode: if chart.rect { "symbolic".into() } else { "symbolic-cramer".into() },
        equal: lhs == rhs,
        points: 0,
        resampled: 0,
        lhs: Some(lhs.to_text()),
        rhs: Some(rhs.to_text()),
        detail: None,
    })
}

fn check_points(
    ctx: &GrassCtx,
    model: &PointModel,
    lam: &Partition,
    m: Option<usize>,
    points: usize,
    seed: SeedTree,
) -> Result<ActionReport> {
    let chart = chart_for(ctx, lam)?;
    let ms = m.map(|x| vec![x]).unwrap_or_else(|| all_m(ctx));
    let mut rep = ActionReport {
        lambda: lam.to_string(),
        m,
        mode: "point".into(),
        equal: true,
        points: 0,
        resampled: 0,
        lhs: None,
        rhs: None,
        detail: None,
    };
    for i in 0..points {
        let (s, r) = model.random_sample(ctx, &chart, seed.child(i as u64))?;
        rep.resampled += r;
        let f = field_at_point(ctx, &s, &chart, lam, &ms)?;
        let lhs = f.apply(&s.g0) + &s.q * f.apply(&s.g1);
        let monk = monk_side_at(ctx, &s, lam)?;
        let pl = &s.p[ctx.index_of(lam)?];
        let rhs = match m {
            Some(m) => {
                let (b0, b1) = boundary_parts(ctx, &s, lam, m)?;
                monk - b0 - &s.q * b1
            }
            None => monk * Rational::from_int(ctx.n() as i64) - (&s.w0 + &s.q * &s.w1) * pl,
        };
        rep.points += 1;
        if lhs != rhs {
            rep.equal = false;
            rep.lhs = Some(lhs.to_string());
            rep.rhs = Some(rhs.to_string());
            rep.detail = Some(format!("point {i}: d = {:?}, q = {}", s.d.iter().map(|x| x.to_string()).collect::<Vec<_>>(), s.q));
            break;
        }
    }
    Ok(rep)
}

/// `X^(m)_lambda W_q = sum p_mu + q p_nu - q^{delta_mn} (p_Lhat_m/p_L_m) p_lambda`.
pub fn verify_action_thm(ctx: &GrassCtx, lam: &Partition, m: usize, mode: Mode) -> Result<ActionReport> {
    if m == 0 || m > ctx.n() {
        return Err(Error::InvalidInput(format!("m = {m} outside [1,{}]", ctx.n())));
    }
    match mode {
        Mode::Symbolic => check_symbolic(ctx, &SymbolicModel::new(ctx)?, lam, Some(m)),
        Mode::Point { points, seed } => {
            let tree = SeedTree::new(seed).child_str(&format!("action/{lam}/{m}"));
            check_points(ctx, &PointModel::new(ctx), lam, Some(m), points, tree)
        }
    }
}

/// `sum_m X^(m)_lambda W_q = n (sum p_mu + q p_nu) - W_q p_lambda`.
pub fn verify_sum_thm(ctx: &GrassCtx, lam: &Partition, mode: Mode) -> Result<ActionReport> {
    match mode {
        Mode::Symbolic => check_symbolic(ctx, &SymbolicModel::new(ctx)?, lam, None),
        Mode::Point { points, seed } => {
            let tree = SeedTree::new(seed).child_str(&format!("sum/{lam}"));
            check_points(ctx, &PointModel::new(ctx), lam, None, points, tree)
        }
    }
}

fn outcome(case: String, r: Result<ActionReport>) -> CaseOutcome {
    match r {
        Ok(a) if a.equal => CaseOutcome::ok(a.resampled),
        Ok(a) => CaseOutcome::failed(
            case,
            format!("lhs {} != rhs {} {}", a.lhs.unwrap_or_default(), a.rhs.unwrap_or_default(), a.detail.unwrap_or_default()),
            a.resampled,
        ),
        Err(e) => CaseOutcome::failed(case, e.to_string(), 0),
    }
}

/// The action identity for every `lambda` and every `m`.
pub fn action_report(ctx: &GrassCtx, mode: Mode, exec: Exec) -> VerifyReport {
    let mut rep = VerifyReport::new("action", ctx.k(), ctx.n(), mode.name());
    let cases: Vec<(Partition, usize)> =
        ctx.partitions().iter().flat_map(|l| (1..=ctx.n()).map(move |m| (l.clone(), m))).collect();
    let sym = match mode {
        Mode::Symbolic => match SymbolicModel::new(ctx) {
            Ok(s) => Some(s),
            Err(e) => {
                rep.fail("model", e.to_string());
                return rep;
            }
        },
        Mode::Point { .. } => None,
    };
    let pm = PointModel::new(ctx);
    let outcomes = exec.map(cases, |(lam, m)| {
        let case = format!("lambda=({lam}) m={m}");
        let r = match (mode, &sym) {
            (Mode::Symbolic, Some(s)) => check_symbolic(ctx, s, &lam, Some(m)),
            (Mode::Point { points, seed }, _) => {
                let tree = SeedTree::new(seed).child_str(&format!("action/{lam}/{m}"));
                check_points(ctx, &pm, &lam, Some(m), points, tree)
            }
            _ => unreachable!(),
        };
        outcome(case, r)
    });
    rep.absorb(outcomes);
    rep
}

/// The summed identity for every `lambda`.
pub fn sum_report(ctx: &GrassCtx, mode: Mode, exec: Exec) -> VerifyReport {
    let mut rep = VerifyReport::new("sum", ctx.k(), ctx.n(), mode.name());
    let sym = match mode {
        Mode::Symbolic => match SymbolicModel::new(ctx) {
            Ok(s) => Some(s),
            Err(e) => {
                rep.fail("model", e.to_string());
                return rep;
            }
        },
        Mode::Point { .. } => None,
    };
    let pm = PointModel::new(ctx);
    let outcomes = exec.map(ctx.partitions().to_vec(), |lam| {
        let case = format!("lambda=({lam})");
        let r = match (mode, &sym) {
            (Mode::Symbolic, Some(s)) => check_symbolic(ctx, s, &lam, None),
            (Mode::Point { points, seed }, _) => {
                check_points(ctx, &pm, &lam, None, points, SeedTree::new(seed).child_str(&format!("sum/{lam}")))
            }
            _ => unreachable!(),
        };
        outcome(case, r)
    });
    rep.absorb(outcomes);
    rep
}

/// Closed form of `c_lambda(mu_i)` against the definition, the boundary sum
/// `sum_{m<n} c_{lambda^(m)}(phi^(m)) = |lambda|`, and the vanishing at `m = n`.
pub fn boundary_report(ctx: &GrassCtx) -> VerifyReport {
    let mut rep = VerifyReport::new("boundary-lemmas", ctx.k(), ctx.n(), "exhaustive");
    let mut outcomes = Vec::new();
    for lam in ctx.partitions() {
        for i in 1..=ctx.n() {
            let case = format!("closed form lambda=({lam}) i={i}");
            let def = ctx.c_coeff(lam, &ctx.mu(i as i64));
            let closed = ctx.boundary_c(lam, i);
            outcomes.push(match (def, closed) {
                (Ok(a), Ok(b)) if a == b => CaseOutcome::ok(0),
                (a, b) => CaseOutcome::failed(case, format!("definition {a:?}, closed form {b:?}"), 0),
            });
        }
        let sum: Result<usize> = (1..ctx.n()).map(|m| ctx.boundary_shift_value(lam, m as i64)).sum();
        outcomes.push(match sum {
            Ok(s) if s == lam.size() => CaseOutcome::ok(0),
            other => CaseOutcome::failed(format!("boundary sum lambda=({lam})"), format!("{other:?} vs {}", lam.size()), 0),
        });
        outcomes.push(match ctx.boundary_shift_value(lam, ctx.n() as i64) {
            Ok(0) => CaseOutcome::ok(0),
            other => CaseOutcome::failed(format!("m=n lambda=({lam})"), format!("{other:?}"), 0),
        });
    }
    rep.absorb(outcomes);
    rep
}

/// Matrices of both connection directions on the basis `[p_lambda omega]`
/// (column `lambda` is the image of the basis vector), over `Q[q, z^{+-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GmConnection {
    pub q_dir: Matrix<LaurentPoly>,
    pub z_dir: Matrix<LaurentPoly>,
    pub grading: Vec<i64>,
    pub points_per_column: usize,
}

/// The same matrices built from the quantum Monk pencil.
pub fn dubrovin_matrices(ctx: &GrassCtx) -> Result<(Matrix<LaurentPoly>, Matrix<LaurentPoly>)> {
    let p = monk_matrix(ctx)?;
    let dim = ctx.partitions().len();
    let mut qm = Matrix::zeros(dim, dim);
    let mut zm = Matrix::zeros(dim, dim);
    for (j, lam) in ctx.partitions().iter().enumerate() {
        let e = CohVector::basis(ctx, lam)?;
        let (a, b) = (nabla_q_with(&p, &e), nabla_z_with(&p, &e));
        for i in 0..dim {
            qm.set(i, j, a.coeffs()[i].clone());
            zm.set(i, j, b.coeffs()[i].clone());
        }
    }
    Ok((qm, zm))
}

struct ColumnFit {
    qm: Vec<(Rational, Rational)>,
    zm: Vec<(Rational, Rational)>,
    resampled: usize,
}

/// Fits `R^(n)` and `sum_m R^(m)`, where `R^(m) = X^(m) W + q^{delta_mn}
/// (p_Lhat/p_L) p_lambda`, in the Pluecker basis from exact samples, and
/// confirms the fit on `extra` further samples.
fn fit_column(
    ctx: &GrassCtx,
    model: &PointModel,
    lam: &Partition,
    tree: SeedTree,
    extra: usize,
) -> Result<ColumnFit> {
    let chart = chart_for(ctx, lam)?;
    let dim = ctx.partitions().len();
    let total = dim + extra;
    let mut resampled = 0;
    for round in 0..MAX_ATTEMPTS {
        let round_tree = tree.child(round as u64);
        let mut rows = Vec::with_capacity(total);
        // per sample: [R^(n)_0, R^(n)_1, S_0, S_1]
        let mut vals: Vec<[Rational; 4]> = Vec::with_capacity(total);
        for i in 0..total {
            let (s, r) = model.random_sample(ctx, &chart, round_tree.child(i as u64))?;
            resampled += r;
            let mut parts = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
            for m in 1..=ctx.n() {
                let f = field_at_point(ctx, &s, &chart, lam, &[m])?;
                let (b0, b1) = boundary_parts(ctx, &s, lam, m)?;
                let r0 = f.apply(&s.g0) + b0;
                let r1 = f.apply(&s.g1) + b1;
                if m == ctx.n() {
                    parts[0] = r0.clone();
                    parts[1] = r1.clone();
                }
                parts[2] += r0;
                parts[3] += r1;
            }
            rows.push(s.p.clone());
            vals.push(parts);
        }
        let v = Matrix::from_rows(rows[..dim].to_vec())?;
        if v.det_bareiss()?.is_zero() {
            resampled += 1;
            continue;
        }
        let mut coeffs: Vec<Vec<Rational>> = Vec::with_capacity(4);
        for c in 0..4 {
            let rhs: Vec<Rational> = vals[..dim].iter().map(|x| x[c].clone()).collect();
            let a = v.solve(&rhs)?;
            for (row, val) in rows[dim..].iter().zip(&vals[dim..]) {
                let pred: Rational = row.iter().zip(&a).map(|(x, y)| x * y).sum();
                if pred != val[c] {
                    return Err(Error::PrerequisiteFailed(format!(
                        "fit for lambda=({lam}) disagrees at a confirmation point"
                    )));
                }
            }
            coeffs.push(a);
        }
        let zip = |x: &Vec<Rational>, y: &Vec<Rational>| x.iter().cloned().zip(y.iter().cloned()).collect::<Vec<_>>();
        return Ok(ColumnFit { qm: zip(&coeffs[0], &coeffs[1]), zm: zip(&coeffs[2], &coeffs[3]), resampled });
    }
    Err(Error::NotInDomain("no nonsingular sample set".into()))
}

/// B-side connection matrices: `q`-direction `(1/z) fit(R^(n))`, and
/// `z`-direction `diag(sum_m c_{lambda^(m)}(phi^(m))) - (1/z) fit(sum_m R^(m))`.
/// Refuses if the boundary lemmas or any fit confirmation fail.
pub fn gm_connection_coeffs(ctx: &GrassCtx, seed: u64, exec: Exec) -> Result<GmConnection> {
    let b = boundary_report(ctx);
    if !b.passed() {
        return Err(Error::PrerequisiteFailed(format!("boundary lemmas: {b}")));
    }
    let model = PointModel::new(ctx);
    let tree = SeedTree::new(seed).child_str("gm-connection");
    let extra = 5;
    let cols = exec.map(ctx.partitions().to_vec(), |lam| {
        fit_column(ctx, &model, &lam, tree.child_str(&lam.to_string()), extra)
    });
    let dim = ctx.partitions().len();
    let v = qz_vars();
    let zinv = |c0: &Rational, c1: &Rational| {
        LaurentPoly::from_terms(&v, [(vec![0, -1], c0.clone()), (vec![1, -1], c1.clone())])
    };
    let mut qm = Matrix::zeros(dim, dim);
    let mut zm = Matrix::zeros(dim, dim);
    let mut grading = Vec::with_capacity(dim);
    for (j, col) in cols.into_iter().enumerate() {
        let col = col?;
        let lam = &ctx.partitions()[j];
        let g: i64 = (1..=ctx.n()).map(|m| ctx.boundary_shift_value(lam, m as i64).map(|x| x as i64)).sum::<Result<i64>>()?;
        grading.push(g);
        for i in 0..dim {
            qm.set(i, j, zinv(&col.qm[i].0, &col.qm[i].1));
            let mut z = zinv(&col.zm[i].0, &col.zm[i].1).negate();
            if i == j {
                z = z.plus(&LaurentPoly::constant_in(&v, Rational::from_int(g)));
            }
            zm.set(i, j, z);
        }
        log::debug!("column ({lam}) fitted with {} rejected samples", col.resampled);
    }
    Ok(GmConnection { q_dir: qm, z_dir: zm, grading, points_per_column: dim + extra })
}

/// B-side matrices against the Monk-pencil matrices, entry by entry.
pub fn main_report(ctx: &GrassCtx, seed: u64, exec: Exec) -> VerifyReport {
    let mut rep = VerifyReport::new("main", ctx.k(), ctx.n(), "point-fit");
    let gm = match gm_connection_coeffs(ctx, seed, exec) {
        Ok(g) => g,
        Err(e) => {
            rep.fail("gm_connection_coeffs", e.to_string());
            return rep;
        }
    };
    let (qa, za) = match dubrovin_matrices(ctx) {
        Ok(x) => x,
        Err(e) => {
            rep.fail("dubrovin", e.to_string());
            return rep;
        }
    };
    let dim = ctx.partitions().len();
    let mut outcomes = Vec::new();
    for j in 0..dim {
        for i in 0..dim {
            for (dir, b, a) in [("q", &gm.q_dir, &qa), ("z", &gm.z_dir, &za)] {
                outcomes.push(if b.get(i, j) == a.get(i, j) {
                    CaseOutcome::ok(0)
                } else {
                    CaseOutcome::failed(
                        format!("{dir} entry ({}),({})", ctx.partitions()[i], ctx.partitions()[j]),
                        format!("B-side {} vs A-side {}", b.get(i, j).to_text(), a.get(i, j).to_text()),
                        0,
                    )
                });
            }
        }
    }
    rep.absorb(outcomes);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_pluckers() {
        let ctx = GrassCtx::new(2, 5).unwrap();
        assert_eq!(plucker_on_torus(&ctx, &Partition::empty()).unwrap().to_text(), "1");
        assert_eq!(plucker_on_torus(&ctx, &Partition::rect(1, 1)).unwrap().to_text(), "d[1][1]");
        assert_eq!(plucker_on_torus(&ctx, &Partition::rect(2, 2)).unwrap().to_text(), "d[1][1]*d[2][2]");
    }

    #[test]
    fn jacobian_field_matches_rectangles_field() {
        let ctx = GrassCtx::new(2, 4).unwrap();
        let sym = SymbolicModel::new(&ctx).unwrap();
        let pm = PointModel::new(&ctx);
        let chart = chart_for(&ctx, &Partition::rect(1, 1)).unwrap();
        assert!(chart.rect);
        let (s, _) = pm.random_sample(&ctx, &chart, SeedTree::new(5)).unwrap();
        let mut full = s.d.clone();
        full.push(s.q.clone());
        for lam in ctx.partitions().iter().filter(|l| l.as_rect().is_some() || l.is_empty()) {
            for m in 1..=ctx.n() {
                let f = field_at_point(&ctx, &s, &chart, lam, &[m]).unwrap();
                let g = sym.rect_field(&ctx, lam, &[m]).unwrap();
                let gv: Vec<Rational> = g.coeffs.iter().map(|c| c.eval(&full).unwrap()).collect();
                assert_eq!(f.coeffs, gv, "lambda=({lam}) m={m}");
            }
        }
    }

    #[test]
    fn gr24_action_symbolic() {
        let ctx = GrassCtx::new(2, 4).unwrap();
        let rep = action_report(&ctx, Mode::Symbolic, Exec::Sequential);
        assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn wrong_boundary_term_detected() {
        let ctx = GrassCtx::new(2, 4).unwrap();
        let sym = SymbolicModel::new(&ctx).unwrap();
        let lam = Partition::rect(1, 1);
        let chart = chart_for(&ctx, &lam).unwrap();
        let (lhs, _) = sym.scaled_action(&ctx, &chart, &lam, &[2]).unwrap();
        assert_ne!(lhs, sym.action_rhs(&ctx, &lam, 3).unwrap());
    }
}
