use approx::assert_abs_diff_eq;
use intconj::convex::{normal_cone, support_function};
use intconj::corpus::{random_poly_fn, rng};
use intconj::{Affine, ExtReal, Interval, PolyConvexFn};
use proptest::prelude::*;

fn objective(f: &PolyConvexFn<f64>, v: f64, x: f64) -> f64 {
    match f.eval(x) {
        ExtReal::Finite(fx) => v * x - fx,
        _ => f64::NEG_INFINITY,
    }
}

/// sup over the grid `[-10, 10]` with step 1e-4 of `v x - f(x)`, polished
/// by ternary search around the best grid point.
fn grid_sup(f: &PolyConvexFn<f64>, v: f64) -> f64 {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..=200_000 {
        let x = -10.0 + k as f64 * 1e-4;
        let o = objective(f, v, x);
        if o > best.0 {
            best = (o, x);
        }
    }
    let (mut a, mut b) = (best.1 - 1e-4, best.1 + 1e-4);
    for _ in 0..100 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if objective(f, v, m1) < objective(f, v, m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    best.0.max(objective(f, v, 0.5 * (a + b)))
}

#[test]
fn conjugate_matches_grid_sup() {
    let mut r = rng(11);
    for _ in 0..40 {
        let f = random_poly_fn(&mut r);
        let g = f.conjugate();
        let d = g.dom();
        for s in [0.1, 0.5, 0.9] {
            let lo = d.lo().max(-5.0);
            let hi = d.hi().min(5.0);
            let v = lo + s * (hi - lo);
            if let ExtReal::Finite(gv) = g.eval(v) {
                assert_abs_diff_eq!(gv, grid_sup(&f, v), epsilon = 1e-6);
            }
        }
    }
}

#[test]
fn spec_conjugate_example_by_grid() {
    let f = PolyConvexFn::from_pairs(&[(-1.0, 0.0), (2.0, -1.0)], Interval::real_line()).unwrap();
    let g = f.conjugate();
    for v in [-1.0, -0.5, 0.0, 1.0, 2.0] {
        assert_abs_diff_eq!(g.eval(v).finite().unwrap(), (v + 1.0) / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(grid_sup(&f, v), (v + 1.0) / 3.0, epsilon = 1e-6);
    }
}

/// `(f(x0 + 2a x) - f(x0 + a x)) / a` for a large `a`.
fn recession_by_sampling(f: &PolyConvexFn<f64>, x: f64) -> ExtReal<f64> {
    let x0 = f.dom().center().unwrap();
    let a = 1e6;
    match (f.eval(x0 + 2.0 * a * x), f.eval(x0 + a * x)) {
        (ExtReal::Finite(u), ExtReal::Finite(v)) => ExtReal::Finite((u - v) / a),
        (ExtReal::PosInf, _) => ExtReal::PosInf,
        _ => unreachable!(),
    }
}

#[test]
fn recession_matches_large_alpha_sampling() {
    let mut r = rng(12);
    for _ in 0..200 {
        let f = random_poly_fn(&mut r);
        let rec = f.recession();
        for x in [-1.0, -0.25, 0.0, 0.5, 1.0] {
            let got = rec.eval(x);
            let want = recession_by_sampling(&f, x);
            assert!(got.approx_eq(want, 1e-5), "{f}: {x}: {got:?} vs {want:?}");
        }
        assert!(rec.approx_eq(&support_function(&f.conjugate().dom()).unwrap(), 1e-12));
    }
}

#[test]
fn subdifferential_example_by_fenchel_scan() {
    let f = PolyConvexFn::from_pairs(&[(-1.0, 0.0), (2.0, -1.0)], Interval::real_line()).unwrap();
    let g = f.conjugate();
    let x = 1.0 / 3.0;
    let fx = f.eval(x).finite().unwrap();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..=6000 {
        let v = -3.0 + k as f64 * 1e-3;
        if let ExtReal::Finite(gv) = g.eval(v) {
            if (fx + gv - v * x).abs() < 1e-9 {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    let sub = f.subdifferential(x);
    assert_abs_diff_eq!(sub.lo(), lo, epsilon = 1e-9);
    assert_abs_diff_eq!(sub.hi(), hi, epsilon = 1e-9);
}

#[test]
fn normal_cone_examples() {
    let a = Interval::new(0.0, 1.0).unwrap();
    assert_eq!(normal_cone(&a, 0.0), Interval::new(f64::NEG_INFINITY, 0.0).unwrap());
    assert_eq!(normal_cone(&a, 0.5), Interval::point(0.0));
    assert!(normal_cone(&a, 1.5).is_empty());
}

#[test]
fn regularized_conjugate_identity_example() {
    let f = PolyConvexFn::indicator(Interval::new(0.0, 1.0).unwrap()).unwrap();
    let lhs = f.epsilon_regularize(0.25).unwrap().conjugate();
    for k in 0..=400 {
        let v = -5.0 + k as f64 * 0.025;
        let rhs = v.max(0.0) + 0.25 * v.abs();
        assert_abs_diff_eq!(lhs.eval(v).finite().unwrap(), rhs, epsilon = 1e-12);
    }
}

fn arb_fn() -> impl Strategy<Value = PolyConvexFn<f64>> {
    any::<u64>().prop_map(|s| random_poly_fn(&mut rng(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn biconjugate_is_identity(f in arb_fn()) {
        prop_assert!(f.conjugate().conjugate().approx_eq(&f, 1e-12));
    }

    #[test]
    fn fenchel_inequality(f in arb_fn(), x in -6.0..6.0f64, v in -4.0..4.0f64) {
        let g = f.conjugate();
        if let (ExtReal::Finite(a), ExtReal::Finite(b)) = (f.eval(x), g.eval(v)) {
            prop_assert!(a + b >= x * v - 1e-9);
        }
    }

    #[test]
    fn subgradients_attain_fenchel_equality(f in arb_fn(), s in 0.0..1.0f64) {
        let d = f.dom();
        let (lo, hi) = (d.lo().max(-6.0), d.hi().min(6.0));
        let x = lo + s * (hi - lo);
        let sub = f.subdifferential(x);
        let g = f.conjugate();
        for v in [sub.lo(), sub.hi(), sub.center().unwrap_or(0.0)] {
            if v.is_finite() && !sub.is_empty() {
                let gap = f.eval(x).finite().unwrap() + g.eval(v).finite().unwrap() - x * v;
                prop_assert!(gap.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn regularization_is_monotone_in_radius(f in arb_fn(), x in -8.0..8.0f64) {
        let a = f.epsilon_regularize(0.1).unwrap().eval(x);
        let b = f.epsilon_regularize(0.5).unwrap().eval(x);
        let c = f.epsilon_regularize(1.0).unwrap().eval(x);
        prop_assert!(c <= b && b <= a);
    }

    #[test]
    fn regularization_conjugate_identity(f in arb_fn(), v in -5.0..5.0f64, eps in 0.05..1.0f64) {
        let lhs = f.epsilon_regularize(eps).unwrap().conjugate().eval(v);
        let rhs = match f.conjugate().eval(v) {
            ExtReal::Finite(g) => ExtReal::Finite(g + eps * v.abs()),
            e => e,
        };
        prop_assert!(lhs.approx_eq(rhs, 1e-9));
    }

    #[test]
    fn f32_agrees_with_f64(f in arb_fn(), x in -4.0..4.0f64) {
        let g: PolyConvexFn<f32> = f.cast();
        if let (ExtReal::Finite(a), ExtReal::Finite(b)) = (f.eval(x), g.eval(x as f32)) {
            prop_assert!((a - b as f64).abs() < 1e-3 * (1.0 + a.abs()));
        }
    }
}

#[test]
fn canonicalize_examples() {
    let f = PolyConvexFn::from_pairs(&[(1.0, 0.0), (1.0, -5.0), (0.0, 0.0)], Interval::real_line()).unwrap();
    assert_eq!(f.pieces(), &[Affine::new(0.0, 0.0), Affine::new(1.0, 0.0)]);
    let g = PolyConvexFn::from_pairs(&[(-1.0, 0.0), (2.0, -1.0), (5.0, -10.0)], Interval::new(0.0, 1.0).unwrap()).unwrap();
    assert_eq!(g.pieces().len(), 2);
}
