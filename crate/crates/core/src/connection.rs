//! Quantum Monk matrix, the connection pencil in `q` and `z`, the pairing
//! and the flatness check.

use crate::error::{Error, Result};
use crate::exact::{make_vars, LaurentPoly, Matrix, Rational, Ring, Vars};
use crate::schubert::{GrassCtx, Partition};
use num_traits::{One, Zero};
use serde_json::json;
use std::sync::OnceLock;

/// Variables `q`, `z`.
pub fn qz_vars() -> Vars {
    static V: OnceLock<Vars> = OnceLock::new();
    V.get_or_init(|| make_vars(&["q", "z"])).clone()
}

const Q: usize = 0;
const Z: usize = 1;

fn q_poly() -> LaurentPoly {
    LaurentPoly::var(&qz_vars(), Q)
}

fn z_inv() -> LaurentPoly {
    LaurentPoly::monomial(&qz_vars(), vec![0, -1], Rational::one())
}

fn constant(c: Rational) -> LaurentPoly {
    LaurentPoly::constant_in(&qz_vars(), c)
}

/// `M(q) = A + qB` and the grading `Gr`, all with integer entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionPencil {
    pub a: Matrix<Rational>,
    pub b: Matrix<Rational>,
    pub gr: Matrix<Rational>,
    pub n: usize,
}

/// Column `lambda` lists the quantum Monk product `sigma_box * sigma^lambda`.
pub fn monk_matrix(ctx: &GrassCtx) -> Result<ConnectionPencil> {
    let dim = ctx.partitions().len();
    let mut a = Matrix::zeros(dim, dim);
    let mut b = Matrix::zeros(dim, dim);
    for (col, lam) in ctx.partitions().iter().enumerate() {
        let t = ctx.monk_successors(lam)?;
        for mu in &t.add_set {
            a.set(ctx.index_of(mu)?, col, Rational::one());
        }
        if let Some(nu) = &t.rim {
            b.set(ctx.index_of(nu)?, col, Rational::one());
        }
    }
    let gr = Matrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Rational::from_int(ctx.partitions()[i].size() as i64)
        } else {
            Rational::zero()
        }
    });
    Ok(ConnectionPencil { a, b, gr, n: ctx.n() })
}

impl ConnectionPencil {
    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    /// Same pencil with `B` scaled by `factor`. Still flat: the grading
    /// identity is homogeneous in `B`.
    pub fn perturbed(&self, factor: i64) -> Self {
        let f = Rational::from_int(factor);
        ConnectionPencil { b: self.b.map(|x| x * &f), ..self.clone() }
    }

    /// Same pencil with the index `n` in `c1 = n sigma_box` replaced.
    pub fn with_index(&self, n: usize) -> Self {
        ConnectionPencil { n, ..self.clone() }
    }

    /// `A + qB` over `Q[q, z^{+-1}]`.
    pub fn m_of_q(&self) -> Matrix<LaurentPoly> {
        let q = q_poly();
        Matrix::from_fn(self.dim(), self.dim(), |i, j| {
            constant(self.a.get(i, j).clone()).plus(&q.scale(self.b.get(i, j)))
        })
    }

    /// `[Gr, A + qB] = A + (1-n) qB`, checked on both `q`-coefficients.
    pub fn grading_identity(&self) -> bool {
        let comm = |m: &Matrix<Rational>| -> Matrix<Rational> {
            let x = self.gr.mul(m).expect("square");
            let y = m.mul(&self.gr).expect("square");
            Matrix::from_fn(m.rows(), m.cols(), |i, j| x.get(i, j) - y.get(i, j))
        };
        let s = Rational::from_int(1 - self.n as i64);
        comm(&self.a) == self.a && comm(&self.b) == self.b.map(|x| x * &s)
    }
}

/// A section: one `Q[q^{+-1}, z^{+-1}]` coefficient per partition.
#[derive(Debug, Clone, PartialEq)]
pub struct CohVector {
    coeffs: Vec<LaurentPoly>,
}

impl CohVector {
    pub fn new(ctx: &GrassCtx, coeffs: Vec<LaurentPoly>) -> Result<Self> {
        if coeffs.len() != ctx.partitions().len() {
            return Err(Error::DimensionMismatch(format!(
                "section needs {} coefficients, got {}",
                ctx.partitions().len(),
                coeffs.len()
            )));
        }
        let v = qz_vars();
        Ok(CohVector { coeffs: coeffs.iter().map(|c| c.with_vars(&v)).collect() })
    }

    pub fn zero(ctx: &GrassCtx) -> Self {
        CohVector { coeffs: vec![LaurentPoly::zero_in(&qz_vars()); ctx.partitions().len()] }
    }

    pub fn basis(ctx: &GrassCtx, lam: &Partition) -> Result<Self> {
        Self::from_terms(ctx, &[(lam.clone(), constant(Rational::one()))])
    }

    pub fn from_terms(ctx: &GrassCtx, terms: &[(Partition, LaurentPoly)]) -> Result<Self> {
        let mut v = Self::zero(ctx);
        for (lam, c) in terms {
            let i = ctx.index_of(lam)?;
            v.coeffs[i] = v.coeffs[i].plus(&c.with_vars(&qz_vars()));
        }
        Ok(v)
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, ctx: &GrassCtx, lam: &Partition) -> Result<&LaurentPoly> {
        Ok(&self.coeffs[ctx.index_of(lam)?])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn plus(&self, o: &Self) -> Self {
        CohVector { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.plus(b)).collect() }
    }

    pub fn minus(&self, o: &Self) -> Self {
        CohVector { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.minus(b)).collect() }
    }

    pub fn scale(&self, f: &LaurentPoly) -> Self {
        CohVector { coeffs: self.coeffs.iter().map(|a| a.times(f)).collect() }
    }

    fn apply(&self, m: &Matrix<LaurentPoly>) -> Self {
        let coeffs = (0..m.rows())
            .map(|i| {
                let mut acc = LaurentPoly::zero_in(&qz_vars());
                for (j, c) in self.coeffs.iter().enumerate() {
                    if !c.is_zero() && !m.get(i, j).is_zero() {
                        acc = acc.plus(&m.get(i, j).times(c));
                    }
                }
                acc
            })
            .collect();
        CohVector { coeffs }
    }

    fn euler(&self, var: usize) -> Self {
        CohVector { coeffs: self.coeffs.iter().map(|c| c.log_deriv(var)).collect() }
    }

    /// `c1 * sigma^(..) + ...` with `0` for the zero section.
    pub fn to_text(&self, ctx: &GrassCtx) -> String {
        let parts: Vec<String> = ctx
            .partitions()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| format!("({})*s[{}]", c.to_text(), p))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `q d/dq + (1/z) M(q)`.
pub fn nabla_q_with(p: &ConnectionPencil, s: &CohVector) -> CohVector {
    s.euler(Q).plus(&s.apply(&p.m_of_q()).scale(&z_inv()))
}

/// `z d/dz + Gr - (n/z) M(q)`.
pub fn nabla_z_with(p: &ConnectionPencil, s: &CohVector) -> CohVector {
    let gr = p.gr.map(|x| constant(x.clone()));
    let nz = z_inv().scale(&Rational::from_int(p.n as i64));
    s.euler(Z).plus(&s.apply(&gr)).minus(&s.apply(&p.m_of_q()).scale(&nz))
}

pub fn nabla_q(ctx: &GrassCtx, s: &CohVector) -> Result<CohVector> {
    Ok(nabla_q_with(&monk_matrix(ctx)?, s))
}

pub fn nabla_z(ctx: &GrassCtx, s: &CohVector) -> Result<CohVector> {
    Ok(nabla_z_with(&monk_matrix(ctx)?, s))
}

/// `z^N sum_lambda s_lambda t_PD(lambda)`.
pub fn pairing_sa(ctx: &GrassCtx, s: &CohVector, t: &CohVector) -> Result<LaurentPoly> {
    let mut acc = LaurentPoly::zero_in(&qz_vars());
    for (i, lam) in ctx.partitions().iter().enumerate() {
        let j = ctx.index_of(&ctx.poincare_dual(lam)?)?;
        acc = acc.plus(&s.coeffs[i].times(&t.coeffs[j]));
    }
    let zn = LaurentPoly::monomial(&qz_vars(), vec![0, ctx.dim() as i32], Rational::one());
    Ok(acc.times(&zn))
}

/// Curvature `[nabla_q, nabla_z]` applied to each basis vector.
pub fn curvature_columns(ctx: &GrassCtx, p: &ConnectionPencil) -> Result<Vec<CohVector>> {
    ctx.partitions()
        .iter()
        .map(|lam| {
            let e = CohVector::basis(ctx, lam)?;
            let qz = nabla_q_with(p, &nabla_z_with(p, &e));
            let zq = nabla_z_with(p, &nabla_q_with(p, &e));
            Ok(qz.minus(&zq))
        })
        .collect()
}

pub fn flatness_check_with(ctx: &GrassCtx, p: &ConnectionPencil) -> Result<bool> {
    Ok(curvature_columns(ctx, p)?.iter().all(|c| c.is_zero()) && p.grading_identity())
}

pub fn flatness_check(ctx: &GrassCtx) -> Result<bool> {
    flatness_check_with(ctx, &monk_matrix(ctx)?)
}

/// Matrix of `nabla` in the Schubert basis as JSON; `dir` is `"q"` or `"z"`.
pub fn connection_json(ctx: &GrassCtx, dir: &str) -> Result<serde_json::Value> {
    let p = monk_matrix(ctx)?;
    let labels: Vec<String> = ctx.partitions().iter().map(|l| l.to_string()).collect();
    let mut cols = Vec::new();
    for lam in ctx.partitions() {
        let e = CohVector::basis(ctx, lam)?;
        let img = match dir {
            "q" => nabla_q_with(&p, &e),
            "z" => nabla_z_with(&p, &e),
            other => return Err(Error::InvalidInput(format!("direction must be q or z, got {other}"))),
        };
        cols.push(img.coeffs.iter().map(|c| c.to_text()).collect::<Vec<_>>());
    }
    let rows: Vec<Vec<String>> = (0..labels.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    Ok(json!({
        "schema": 1,
        "k": ctx.k(),
        "n": ctx.n(),
        "direction": dir,
        "variables": ["q", "z"],
        "labels": labels,
        "matrix": rows,
    }))
}

/// Builds `c0 + c1 q` over the `q, z` variables, times `z^zexp`.
pub fn qz_term(c0: i64, c1: i64, zexp: i32) -> LaurentPoly {
    let v = qz_vars();
    LaurentPoly::from_terms(
        &v,
        [(vec![0, zexp], Rational::from_int(c0)), (vec![1, zexp], Rational::from_int(c1))],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn p1_pencil() {
        let ctx = GrassCtx::new(1, 2).unwrap();
        let p = monk_matrix(&ctx).unwrap();
        let m = p.m_of_q();
        assert!(m.get(0, 0).is_zero() && m.get(1, 1).is_zero());
        assert_eq!(m.get(1, 0).to_text(), "1");
        assert_eq!(m.get(0, 1).to_text(), "q");
        assert!(flatness_check(&ctx).unwrap());
        assert!(flatness_check_with(&ctx, &p.perturbed(2)).unwrap());
        assert!(!flatness_check_with(&ctx, &p.with_index(3)).unwrap());
    }

    #[test]
    fn empty_class_in_z_direction() {
        let ctx = GrassCtx::new(2, 4).unwrap();
        let img = nabla_z(&ctx, &CohVector::basis(&ctx, &Partition::empty()).unwrap()).unwrap();
        let want = CohVector::from_terms(&ctx, &[(part("1"), qz_term(-4, 0, -1))]).unwrap();
        assert_eq!(img, want);
        assert!(nabla_q(&ctx, &CohVector::zero(&ctx)).unwrap().is_zero());
    }

    #[test]
    fn pairing_dual_pair() {
        let ctx = GrassCtx::new(2, 5).unwrap();
        let e = CohVector::basis(&ctx, &Partition::empty()).unwrap();
        let top = CohVector::basis(&ctx, &Partition::rect(3, 2)).unwrap();
        assert_eq!(pairing_sa(&ctx, &e, &top).unwrap().to_text(), "z^6");
        assert!(pairing_sa(&ctx, &e, &e).unwrap().is_zero());
    }
}
