//! Algebraic invariants as property tests.

use grassmirror::cluster::{initial_seed, random_walk, Seed};
use grassmirror::connection::{monk_matrix, nabla_q, nabla_z, pairing_sa, qz_vars, CohVector};
use grassmirror::ehx::{aseries_closed, aseries_constterm};
use grassmirror::exact::{make_vars, rat};
use grassmirror::fields::{action_report, Mode};
use grassmirror::{Exec, GrassCtx, KSubset, LaurentPoly, Matrix, Partition, Rational, Ring};
use proptest::prelude::*;

fn ctx_strategy() -> impl Strategy<Value = GrassCtx> {
    (2usize..=6).prop_flat_map(|n| (1..n).prop_map(move |k| GrassCtx::new(k, n).unwrap()))
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(a, b)| rat(a, b))
}

fn laurent2() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-2i32..=2, -2i32..=2), small_rat()), 0..5).prop_map(|ts| {
        let vars = make_vars(&["x", "y"]);
        LaurentPoly::from_terms(&vars, ts.into_iter().map(|((a, b), c)| (vec![a, b], c)))
    })
}

fn qz_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((0i32..=2, -2i32..=2), small_rat()), 0..4).prop_map(|ts| {
        LaurentPoly::from_terms(&qz_vars(), ts.into_iter().map(|((a, b), c)| (vec![a, b], c)))
    })
}

fn section(ctx: &GrassCtx, polys: Vec<LaurentPoly>) -> CohVector {
    let dim = ctx.partitions().len();
    let coeffs = (0..dim).map(|i| polys[i % polys.len()].clone()).collect();
    CohVector::new(ctx, coeffs).unwrap()
}

fn apply(m: &Matrix<LaurentPoly>, s: &CohVector) -> Vec<LaurentPoly> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols()).fold(LaurentPoly::zero_in(&qz_vars()), |acc, j| acc.plus(&m.get(i, j).times(&s.coeffs()[j])))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn laplace_matches_bareiss(n in 1usize..=5, entries in prop::collection::vec(-6i64..=6, 25)) {
        let m = Matrix::from_fn(n, n, |i, j| rat(entries[i * 5 + j], 1 + (i + j) as i64 % 3));
        prop_assert_eq!(m.det().unwrap(), m.det_bareiss().unwrap());
    }

    #[test]
    fn determinant_is_multiplicative(a in prop::collection::vec(-4i64..=4, 9), b in prop::collection::vec(-4i64..=4, 9)) {
        let ma = Matrix::from_fn(3, 3, |i, j| rat(a[i * 3 + j], 1));
        let mb = Matrix::from_fn(3, 3, |i, j| rat(b[i * 3 + j], 1));
        let prod = ma.mul(&mb).unwrap();
        prop_assert_eq!(prod.det().unwrap(), ma.det().unwrap() * mb.det().unwrap());
    }

    #[test]
    fn laurent_ring_laws(a in laurent2(), b in laurent2(), c in laurent2()) {
        prop_assert_eq!(a.plus(&b), b.plus(&a));
        prop_assert_eq!(a.times(&b), b.times(&a));
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert!(a.minus(&a).num_terms() == 0);
    }

    #[test]
    fn laurent_exact_division(a in laurent2(), b in laurent2()) {
        prop_assume!(b.num_terms() > 0);
        prop_assert_eq!(a.times(&b).div_exact(&b).unwrap(), a);
    }

    #[test]
    fn laurent_parallel_product(a in laurent2(), b in laurent2()) {
        prop_assert_eq!(a.mul_with(&b, Exec::Parallel), a.mul_with(&b, Exec::Sequential));
    }

    #[test]
    fn laurent_eval_is_a_homomorphism(a in laurent2(), b in laurent2(), x in small_rat(), y in small_rat()) {
        prop_assume!(x != rat(0, 1) && y != rat(0, 1));
        let p = [x, y];
        prop_assert_eq!(a.times(&b).eval(&p).unwrap(), a.eval(&p).unwrap() * b.eval(&p).unwrap());
    }

    #[test]
    fn laurent_json_round_trip(a in laurent2()) {
        prop_assert_eq!(LaurentPoly::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn partitions_and_subsets_biject(ctx in ctx_strategy()) {
        for lam in ctx.partitions() {
            let s = ctx.partition_to_subset(lam).unwrap();
            prop_assert_eq!(s.elems().len(), ctx.k());
            prop_assert_eq!(&ctx.subset_to_partition(&s).unwrap(), lam);
            let text: Partition = lam.to_string().parse().unwrap();
            prop_assert_eq!(&text, lam);
        }
    }

    #[test]
    fn duality_is_an_involution(ctx in ctx_strategy()) {
        for lam in ctx.partitions() {
            let d = ctx.poincare_dual(lam).unwrap();
            prop_assert_eq!(lam.size() + d.size(), ctx.dim());
            prop_assert_eq!(&ctx.poincare_dual(&d).unwrap(), lam);
        }
    }

    #[test]
    fn cyclic_shift_has_order_n(ctx in ctx_strategy()) {
        for s in ctx.subsets() {
            prop_assert_eq!(&ctx.shift_subset(s, ctx.n() as i64), s);
            let back = ctx.shift_subset(&ctx.shift_subset(s, 1), -1);
            prop_assert_eq!(&back, s);
        }
    }

    #[test]
    fn grading_commutator(ctx in ctx_strategy()) {
        prop_assert!(monk_matrix(&ctx).unwrap().grading_identity());
    }

    #[test]
    fn monk_is_self_adjoint(ctx in ctx_strategy(), polys in prop::collection::vec(qz_poly(), 1..4), others in prop::collection::vec(qz_poly(), 1..4)) {
        let m = monk_matrix(&ctx).unwrap().m_of_q();
        let s = section(&ctx, polys);
        let t = section(&ctx, others);
        let ms = CohVector::new(&ctx, apply(&m, &s)).unwrap();
        let mt = CohVector::new(&ctx, apply(&m, &t)).unwrap();
        prop_assert_eq!(pairing_sa(&ctx, &ms, &t).unwrap(), pairing_sa(&ctx, &s, &mt).unwrap());
    }

    #[test]
    fn nabla_obeys_leibniz(ctx in ctx_strategy(), f in qz_poly(), polys in prop::collection::vec(qz_poly(), 1..3)) {
        let s = section(&ctx, polys);
        let fs = s.scale(&f);
        let lhs_q = nabla_q(&ctx, &fs).unwrap();
        let rhs_q = s.scale(&f.log_deriv(0)).plus(&nabla_q(&ctx, &s).unwrap().scale(&f));
        prop_assert_eq!(lhs_q, rhs_q);
        let lhs_z = nabla_z(&ctx, &fs).unwrap();
        let rhs_z = s.scale(&f.log_deriv(1)).plus(&nabla_z(&ctx, &s).unwrap().scale(&f));
        prop_assert_eq!(lhs_z, rhs_z);
    }
}

fn walk_seeds(k: usize, n: usize, steps: usize, rng_seed: u64) -> Vec<Seed> {
    random_walk(&GrassCtx::new(k, n).unwrap(), steps, rng_seed).unwrap().seeds().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mutation_is_an_involution(rng_seed in 0u64..1000, steps in 0usize..8) {
        let ctx = GrassCtx::new(3, 6).unwrap();
        let seed = walk_seeds(3, 6, steps, rng_seed).pop().unwrap();
        for v in seed.quadrilaterals() {
            let back = seed.mutate(v).unwrap().mutate(v).unwrap();
            prop_assert_eq!(back.labels(), seed.labels());
            for a in 0..seed.len() {
                for c in 0..seed.len() {
                    prop_assert_eq!(back.b(a, c), seed.b(a, c));
                }
            }
            prop_assert!(seed.mutate(v).unwrap().validate(&ctx).is_ok());
        }
    }

    #[test]
    fn seed_labels_stay_weakly_separated(rng_seed in 0u64..1000) {
        for seed in walk_seeds(2, 6, 10, rng_seed) {
            let labels: Vec<&KSubset> = seed.labels().iter().collect();
            for a in &labels {
                for b in &labels {
                    prop_assert!(grassmirror::schubert::weakly_separated(a, b));
                }
            }
        }
    }

    #[test]
    fn seed_json_round_trip(rng_seed in 0u64..1000, steps in 0usize..6) {
        let ctx = GrassCtx::new(2, 5).unwrap();
        let seed = walk_seeds(2, 5, steps, rng_seed).pop().unwrap();
        let back = Seed::from_json(&ctx, &seed.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), seed.to_json());
    }
}

#[test]
fn initial_seed_sizes() {
    for (k, n) in [(1, 3), (2, 4), (2, 5), (3, 6), (3, 7)] {
        let ctx = GrassCtx::new(k, n).unwrap();
        let s = initial_seed(&ctx).unwrap();
        assert_eq!(s.len(), k * (n - k) + 1);
        assert!(s.validate(&ctx).is_ok());
    }
}

#[test]
fn execution_policies_agree() {
    let ctx = GrassCtx::new(2, 5).unwrap();
    assert_eq!(aseries_closed(&ctx, 2, Exec::Parallel), aseries_closed(&ctx, 2, Exec::Sequential));
    assert_eq!(aseries_constterm(&ctx, 2, Exec::Parallel), aseries_constterm(&ctx, 2, Exec::Sequential));
    let mode = Mode::Point { points: 4, seed: 5 };
    let par = action_report(&ctx, mode, Exec::Parallel);
    let seq = action_report(&ctx, mode, Exec::Sequential);
    assert!(par.passed());
    assert_eq!(par.to_json(), seq.to_json());
}

#[test]
fn q_series_for_projective_line() {
    let ctx = GrassCtx::new(1, 2).unwrap();
    let a = aseries_constterm(&ctx, 3, Exec::Sequential);
    assert_eq!(a.coeffs(), &[rat(1, 1), rat(1, 1), rat(1, 4), rat(1, 36)]);
}
