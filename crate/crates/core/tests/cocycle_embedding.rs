use coarse_metric::cocycle::{
    bump_value, disjoint_layer_count, layer_norm, AffinePoint, CocycleContext, CocycleLayer,
    SparseFunction,
};
use coarse_metric::group::{FreeGroup, FreeWord, IntegerLattice, LatticePoint};
use coarse_metric::word::{growth_certificate, GrowthCertificate, WeightedGeneratingSet};
use coarse_metric::{Error, Group, MetricView, WordMetric};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pt(k: i64) -> LatticePoint {
    LatticePoint(vec![k])
}

fn z() -> WordMetric<IntegerLattice, i64> {
    let g = IntegerLattice::new(1);
    WordMetric::new(g, WeightedGeneratingSet::uniform(&g, 1).unwrap())
}

fn z_ctx(radius: u64) -> CocycleContext<IntegerLattice, i64> {
    CocycleContext::from_word_metric(&z(), radius).unwrap()
}

fn z_cert() -> GrowthCertificate {
    growth_certificate(&z().sphere_counts(12).unwrap())
}

fn free2() -> WordMetric<FreeGroup, i64> {
    let f = FreeGroup::new(2);
    WordMetric::new(f, WeightedGeneratingSet::uniform(&f, 1).unwrap())
}

/// `max(0, 1 − |x|/n)` on ℤ, written out directly.
fn z_bump(n: u64, x: i64) -> f64 {
    (1.0 - x.abs() as f64 / n as f64).max(0.0)
}

/// `(Σ_h |φⁿ(h − g) − φⁿ(h)|^{2n})^{1/(2n)}` on ℤ by direct summation.
fn z_layer_norm(n: u64, g: i64) -> f64 {
    let lo = -(n as i64) - g.abs();
    let hi = n as i64 + g.abs();
    let s: f64 = (lo..=hi)
        .map(|h| (z_bump(n, h - g) - z_bump(n, h)).abs().powi(2 * n as i32))
        .sum();
    s.powf(1.0 / (2 * n) as f64)
}

#[test]
fn bump_values() {
    let d = MetricView::from_fn("abs", |x: &i64, y: &i64| (x - y).abs());
    assert_eq!(bump_value(3, &0, &0, &d).unwrap(), 1.0);
    assert_eq!(bump_value(3, &0, &3, &d).unwrap(), 0.0);
    assert_eq!(bump_value(3, &0, &9, &d).unwrap(), 0.0);
    assert_eq!(bump_value(2, &0, &1, &d).unwrap(), 0.5);
    assert!(bump_value(0, &0, &1, &d).is_err());
}

#[test]
fn half_ball_values() {
    let ctx = z_ctx(8);
    assert_eq!(ctx.bump(4, &pt(0)), 1.0);
    assert_eq!(ctx.bump(4, &pt(1)), 0.75);
    assert_eq!(ctx.bump(4, &pt(2)), 0.5);
    let sample: Vec<LatticePoint> = (-8..=8).map(pt).collect();
    for n in 1..=8 {
        let r = ctx.half_ball_lower_bound(n, &sample).unwrap();
        assert!(r.passed);
        assert!(r.min_value.unwrap() >= 0.5);
    }
}

#[test]
fn layer_examples() {
    let ctx = z_ctx(10);
    let layer = ctx.cocycle_layer(2, &pt(1)).unwrap();
    assert_eq!(layer.values.get(&pt(0)), -0.5);
    let zero = ctx.cocycle_layer(3, &pt(0)).unwrap();
    assert_eq!(zero.values.support().count(), 0);
    assert_eq!(layer_norm(&zero), 0.0);
    assert!(ctx.cocycle_layer(0, &pt(1)).is_err());
    assert!(ctx.cocycle_layer(11, &pt(1)).is_err());
}

#[test]
fn layer_norms_match_direct_summation() {
    let ctx = z_ctx(10);
    for n in 1..=8 {
        for g in [-7i64, -2, 1, 3, 6] {
            let got = ctx.cocycle_layer(n, &pt(g)).unwrap().norm();
            let want = z_layer_norm(n, g);
            assert!((got - want).abs() <= 1e-12, "n={n} g={g}: {got} vs {want}");
        }
    }
    let single = CocycleLayer {
        n: 1,
        values: SparseFunction::from_map([(pt(0), 0.5)].into_iter().collect()),
    };
    assert_eq!(layer_norm(&single), 0.5);
}

#[test]
fn cocycle_vector_bounds() {
    let ctx = z_ctx(12);
    let cert = z_cert();
    let zero = ctx.cocycle_vector(&pt(0), 8, &cert).unwrap();
    assert_eq!(zero.x_norm, 0.0);
    let v = ctx.cocycle_vector(&pt(4), 8, &cert).unwrap();
    let bound = 2.0 * cert.beta.sqrt() * (cert.alpha / 2.0).exp() * 4.0;
    assert!(v.upper_bound <= bound);
    assert!(v.x_norm <= v.upper_bound);
    let direct: f64 = (1..=8)
        .map(|n| z_layer_norm(n, 4).powi(2))
        .sum::<f64>()
        .sqrt();
    assert!((v.x_norm - direct).abs() < 1e-12);
    assert!(ctx.cocycle_vector(&pt(1), 0, &cert).is_err());
}

#[test]
fn properness_on_integers() {
    let ctx = z_ctx(12);
    let grid: Vec<LatticePoint> = (6..=20).map(pt).collect();
    let report = ctx.properness_report(&grid, 8, &z_cert()).unwrap();
    assert!(report.passed && report.monotone);
    for row in &report.rows {
        let k = disjoint_layer_count(row.distance).unwrap();
        assert!(row.norm_sq >= k as f64 / 4.0);
        assert!(row.disjoint_support_gap <= 1e-12);
    }

    let coarse: Vec<LatticePoint> = [4, 8, 16].into_iter().map(pt).collect();
    let report = ctx.properness_report(&coarse, 8, &z_cert()).unwrap();
    let bounds: Vec<f64> = report.rows.iter().map(|r| r.lower_bound.unwrap()).collect();
    assert_eq!(bounds, vec![0.25, 0.75, 1.75]);

    let near = ctx.properness_report(&[pt(2)], 8, &z_cert()).unwrap();
    assert_eq!(near.rows[0].lower_bound, None);
}

#[test]
fn disjoint_layer_counts() {
    assert_eq!(disjoint_layer_count(2.0), None);
    assert_eq!(disjoint_layer_count(3.0), Some(1));
    assert_eq!(disjoint_layer_count(4.0), Some(1));
    assert_eq!(disjoint_layer_count(5.0), Some(2));
    assert_eq!(disjoint_layer_count(20.0), Some(9));
    for d in 3..=40 {
        let k = disjoint_layer_count(d as f64).unwrap() as f64;
        assert!(d as f64 / 2.0 - 1.0 <= k && k < d as f64 / 2.0);
    }
}

#[test]
fn affine_action_on_free_group() {
    let m = free2();
    let ctx = CocycleContext::from_word_metric(&m, 4).unwrap();
    let ball: Vec<FreeWord> = m.enumerate_ball(2).unwrap().elements().cloned().collect();
    let xi = AffinePoint::from(
        &ctx.cocycle_vector(
            &FreeWord::reduce([1, -2]),
            4,
            &GrowthCertificate {
                alpha: 3f64.ln(),
                beta: 5.0,
                grid_bound: 4,
                growth_rate: None,
            },
        )
        .unwrap(),
    );
    let e = FreeWord::default();
    assert_eq!(ctx.affine_apply(&e, &xi, 4).unwrap(), xi);
    for s in &ball {
        for t in &ball {
            let st = m.group().mul(s, t);
            let lhs = ctx.affine_apply(&st, &xi, 4).unwrap();
            let rhs = ctx
                .affine_apply(s, &ctx.affine_apply(t, &xi, 4).unwrap(), 4)
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
    }
    assert!(matches!(
        ctx.affine_apply(&e, &AffinePoint::zero(3), 4),
        Err(Error::TruncationMismatch { .. })
    ));
}

#[test]
fn cocycle_identity_sweep_on_free_ball() {
    let m = free2();
    let ctx = CocycleContext::from_word_metric(&m, 4).unwrap();
    let ball: Vec<FreeWord> = m.enumerate_ball(2).unwrap().elements().cloned().collect();
    let sweep = ctx.identity_sweep(&ball, 4).unwrap();
    assert_eq!(sweep.pairs, 17 * 17);
    assert!(sweep.passed(1e-12), "{sweep:?}");
    assert!(ctx.identity_sweep(&[], 2).is_err());
}

#[test]
fn embedding_constants_on_integers() {
    let ctx = z_ctx(20);
    let pts: Vec<LatticePoint> = (-10..=10).map(pt).collect();
    let pairs = coarse_metric::coarse::all_pairs(&pts);
    let c = ctx.embedding_constants(&pairs, 8, &z_cert()).unwrap();
    assert!(c.passed());
    assert!(c.c1 > 0.0 && c.c2.is_finite());
    assert_eq!(c.c3, 3.0);
    assert!(c.translation_defect <= 1e-9);
    let json = serde_json::to_value(&c).unwrap();
    assert_eq!(json["N_trunc"], 8);
    assert!(json.get("rows").is_none());

    let mut csv = Vec::new();
    c.write_csv(&mut csv).unwrap();
    assert!(String::from_utf8(csv)
        .unwrap()
        .starts_with("d,norm_lower,norm,norm_plus_tail\n"));

    let close = vec![(pt(0), pt(1)), (pt(3), pt(5))];
    assert!(matches!(
        ctx.embedding_constants(&close, 8, &z_cert()),
        Err(Error::InsufficientRange(_))
    ));
}

#[test]
fn translation_identity_on_free_samples() {
    let m = free2();
    let ctx = CocycleContext::from_word_metric(&m, 6).unwrap();
    let cert = growth_certificate(&m.sphere_counts(6).unwrap());
    let mut ball: Vec<FreeWord> = m.enumerate_ball(3).unwrap().elements().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    ball.shuffle(&mut rng);
    let pairs = coarse_metric::coarse::all_pairs(&ball[..30]);
    let c = ctx.embedding_constants(&pairs, 6, &cert).unwrap();
    assert!(c.translation_defect <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn layers_have_bounded_support_and_size(g in -12i64..=12, n in 1u64..=10) {
        let ctx = z_ctx(12);
        let layer = ctx.cocycle_layer(n, &pt(g)).unwrap();
        for h in layer.values.support() {
            let h = h.0[0];
            prop_assert!(h.abs() < n as i64 || (h - g).abs() < n as i64);
        }
        prop_assert!(layer.values.sup_norm() <= g.abs() as f64 / n as f64 + 1e-15);
    }

    #[test]
    fn bumps_are_lipschitz(n in 1u64..=8, y in -10i64..=10, w in -10i64..=10) {
        let ctx = z_ctx(10);
        let gap = (ctx.bump(n, &pt(y)) - ctx.bump(n, &pt(w))).abs();
        prop_assert!(gap <= (y - w).abs() as f64 / n as f64 + 1e-15);
        prop_assert!((0.0..=1.0).contains(&ctx.bump(n, &pt(y))));
    }

    #[test]
    fn truncation_is_monotone_and_tail_bounds_hold(g in 1i64..=10, lo in 1u64..=6, extra in 1u64..=5) {
        let ctx = z_ctx(12);
        let cert = z_cert();
        let small = ctx.cocycle_vector(&pt(g), lo, &cert).unwrap();
        let large = ctx.cocycle_vector(&pt(g), lo + extra, &cert).unwrap();
        prop_assert!(large.x_norm >= small.x_norm);
        prop_assert!(large.x_norm <= small.upper_bound * (1.0 + 1e-12));
    }

    #[test]
    fn disjoint_support_identity(g in 3i64..=12, n in 1u64..=5) {
        prop_assume!(g as u64 > 2 * n);
        let ctx = z_ctx(12);
        let layer = ctx.cocycle_layer(n, &pt(g)).unwrap();
        let phi = ctx.bump_function(n).unwrap();
        let p = 2 * n as u32;
        let lhs = layer.values.power_sum(p);
        let rhs = phi.translate(ctx.group(), &pt(g)).power_sum(p) + phi.power_sum(p);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn cocycle_identity_on_random_free_words(
        s in prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..4),
        t in prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..4),
        n in 1u64..=4,
    ) {
        let m = free2();
        let ctx = CocycleContext::from_word_metric(&m, 4).unwrap();
        let (s, t) = (FreeWord::reduce(s), FreeWord::reduce(t));
        prop_assert!(ctx.cocycle_identity_defect(n, &s, &t).unwrap() <= 1e-12);
        let layer = ctx.cocycle_layer(n, &t).unwrap();
        prop_assert_eq!(layer.values.translate(m.group(), &s).norm_2n(n), layer.norm());
    }
}
