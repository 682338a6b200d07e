//! Seeded random instances for property checks.
//!
//! Every generator draws from a caller-supplied RNG; with `ChaCha8Rng` and a
//! fixed seed the instances are identical across runs and platforms.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::CellComplex;
use crate::convex::{Affine, PolyConvexFn};
use crate::integrand::{CellIntegrand, IntegrandField};
use crate::interval::Interval;
use crate::measure::{BaseMeasure, SignedMeasure};
use crate::plfn::PlFunction;
use crate::setmap::{CellBounds, IntervalMap, UnionMap};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn grid_value<R: Rng>(rng: &mut R, lo: i32, hi: i32, step: f64) -> f64 {
    rng.gen_range(lo..=hi) as f64 * step
}

/// Random polyhedral function with at most 8 pieces. Slopes and vertices sit
/// on the quarter grid inside `[-5, 5]`, so conjugate values are attained at
/// grid points.
pub fn random_poly_fn<R: Rng>(rng: &mut R) -> PolyConvexFn<f64> {
    let k = rng.gen_range(1..=7usize);
    let mut slopes: Vec<i32> = (-12..=12).collect();
    slopes.shuffle(rng);
    let mut slopes: Vec<f64> = slopes[..k].iter().map(|&s| s as f64 * 0.25).collect();
    slopes.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut kinks: Vec<i32> = (-16..=16).collect();
    kinks.shuffle(rng);
    let mut kinks: Vec<f64> = kinks[..k - 1].iter().map(|&x| x as f64 * 0.25).collect();
    kinks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));

    // Walk the kinks from a grid value at the first one.
    let x0 = kinks.first().copied().unwrap_or(0.0);
    let v0 = grid_value(rng, -8, 8, 0.25);
    let mut pieces = vec![Affine::new(slopes[0], v0 - slopes[0] * x0)];
    let mut val = v0;
    for i in 1..k {
        let x = kinks[i - 1];
        if i > 1 {
            val += slopes[i - 1] * (x - kinks[i - 2]);
        }
        pieces.push(Affine::new(slopes[i], val - slopes[i] * x));
    }
    // Occasionally a dominated extra piece.
    if rng.gen_bool(0.3) {
        let p = pieces[rng.gen_range(0..pieces.len())];
        pieces.push(Affine::new(p.slope, p.intercept - 1.0));
    }

    let span_lo = kinks.first().copied().unwrap_or(0.0) - 1.0;
    let span_hi = kinks.last().copied().unwrap_or(0.0) + 1.0;
    let lo = grid_value(rng, (span_lo * 4.0) as i32 - 4, (span_lo * 4.0) as i32, 0.25);
    let hi = grid_value(rng, (span_hi * 4.0) as i32, (span_hi * 4.0) as i32 + 4, 0.25);
    let dom = match rng.gen_range(0..6) {
        0 => Interval::real_line(),
        1 => Interval::new(lo, f64::INFINITY).expect("ray"),
        2 => Interval::new(f64::NEG_INFINITY, hi).expect("ray"),
        3 if rng.gen_bool(0.2) => Interval::point(grid_value(rng, -8, 8, 0.25)),
        _ => Interval::new(lo, hi).expect("ordered"),
    };
    PolyConvexFn::new(pieces, dom).expect("nonempty domain")
}

/// Random complex on `[0, 1]` with `cells` cells and nodes on the 1/16 grid.
pub fn random_complex<R: Rng>(rng: &mut R, cells: usize) -> CellComplex<f64> {
    let mut inner: Vec<i32> = (1..16).collect();
    inner.shuffle(rng);
    let mut pts: Vec<f64> = inner[..cells - 1].iter().map(|&k| k as f64 / 16.0).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut nodes = vec![0.0];
    nodes.extend(pts);
    nodes.push(1.0);
    CellComplex::new(nodes).expect("distinct grid points")
}

fn random_bounds<R: Rng>(rng: &mut R, t0: f64, t1: f64, min_width: f64) -> CellBounds<f64> {
    let l0 = rng.gen_range(-1.0..1.0);
    let l1 = rng.gen_range(-1.0..1.0);
    let w0 = min_width + rng.gen_range(0.0..1.0);
    let w1 = min_width + rng.gen_range(0.0..1.0);
    CellBounds::new(Affine::through(t0, l0, t1, l1), Affine::through(t0, l0 + w0, t1, l1 + w1))
}

/// Random subinterval of `iv` (or `iv` itself, or empty).
fn random_subinterval<R: Rng>(rng: &mut R, iv: Interval<f64>) -> Interval<f64> {
    if iv.is_empty() {
        return iv;
    }
    match rng.gen_range(0..5) {
        0 => Interval::empty(),
        1 | 2 => iv,
        _ => {
            let (lo, hi) = (iv.lo(), iv.hi());
            let a = rng.gen_range(0.0..=1.0);
            let b = rng.gen_range(a..=1.0);
            Interval::new_or_empty(lo + a * (hi - lo), lo + b * (hi - lo))
        }
    }
}

/// Random inner semicontinuous single-branch map: node values inside the
/// intersection of the adjacent cell limits.
pub fn random_isc_map<R: Rng>(rng: &mut R, cx: &CellComplex<f64>, allow_empty: bool) -> IntervalMap<f64> {
    // Without empty values every node liminf must contain a shared anchor.
    let anchors: Vec<f64> = (0..cx.num_nodes()).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let cells: Vec<_> = (0..cx.num_cells())
        .map(|i| {
            let (t0, t1) = cx.cell(i);
            if allow_empty {
                if rng.gen_bool(0.1) {
                    None
                } else {
                    Some(random_bounds(rng, t0, t1, 0.0))
                }
            } else {
                let (a0, a1) = (anchors[i], anchors[i + 1]);
                let below = [rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5)];
                let above = [rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5)];
                Some(CellBounds::new(
                    Affine::through(t0, a0 - below[0], t1, a1 - below[1]),
                    Affine::through(t0, a0 + above[0], t1, a1 + above[1]),
                ))
            }
        })
        .collect();
    let base = IntervalMap::with_liminf_nodes(cx.clone(), cells).expect("ordered bounds");
    let mut m = base.clone();
    for k in 0..cx.num_nodes() {
        let v = if allow_empty {
            random_subinterval(rng, base.node_value(k))
        } else {
            let li = base.node_value(k);
            let sub = random_subinterval(rng, li);
            if sub.is_empty() {
                li
            } else {
                sub
            }
        };
        m = m.with_node(k, v);
    }
    m
}

/// Random isc union map with one or two branches.
pub fn random_isc_union<R: Rng>(rng: &mut R, cx: &CellComplex<f64>) -> UnionMap<f64> {
    let n = rng.gen_range(1..=2);
    UnionMap::new((0..n).map(|_| random_isc_map(rng, cx, true)).collect()).expect("shared complex")
}

/// Inputs for the operation-preservation property.
#[derive(Debug, Clone)]
pub struct PreservationCase {
    pub s1: UnionMap<f64>,
    pub s2: UnionMap<f64>,
    /// Continuous map whose values contain a selection of `convex` in their
    /// interior, so `0 ∈ int(convex - margin)`.
    pub convex: UnionMap<f64>,
    pub margin: UnionMap<f64>,
    /// Continuous map with strictly ordered bounds: open graph.
    pub open: UnionMap<f64>,
    pub c: f64,
    pub m: f64,
}

/// Continuous map around the piecewise-linear `y`, widths at least `w`.
fn tube_around<R: Rng>(rng: &mut R, y: &PlFunction<f64>, w: f64) -> IntervalMap<f64> {
    let cx = y.complex().clone();
    let below: Vec<f64> = (0..cx.num_nodes()).map(|_| w + rng.gen_range(0.0..0.5)).collect();
    let above: Vec<f64> = (0..cx.num_nodes()).map(|_| w + rng.gen_range(0.0..0.5)).collect();
    let cells = (0..cx.num_cells())
        .map(|i| {
            let (t0, t1) = cx.cell(i);
            Some(CellBounds::new(
                Affine::through(t0, y.value(i) - below[i], t1, y.value(i + 1) - below[i + 1]),
                Affine::through(t0, y.value(i) + above[i], t1, y.value(i + 1) + above[i + 1]),
            ))
        })
        .collect();
    IntervalMap::with_liminf_nodes(cx, cells).expect("ordered bounds")
}

pub fn preservation_case<R: Rng>(rng: &mut R) -> PreservationCase {
    let cells = rng.gen_range(2..=5);
    let cx = random_complex(rng, cells);
    let s1 = random_isc_union(rng, &cx);
    let s2 = random_isc_union(rng, &cx);
    let convex_map = random_isc_map(rng, &cx, false);
    let y = convex_map.selection(None).expect("isc nonempty convex map has a selection");
    let margin = tube_around(rng, &y, 0.05);
    let centre = PlFunction::new(
        cx.clone(),
        (0..cx.num_nodes()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    )
    .expect("finite values");
    let open = tube_around(rng, &centre, 0.05);
    PreservationCase {
        s1,
        s2,
        convex: convex_map.into_union(),
        margin: margin.into_union(),
        open: open.into_union(),
        c: rng.gen_range(-2.0..2.0),
        m: rng.gen_range(-2.0..2.0),
    }
}

/// Map, measure and base measure for the support-function representation.
#[derive(Debug, Clone)]
pub struct SupportCase {
    pub map: IntervalMap<f64>,
    pub theta: SignedMeasure<f64>,
    pub mu: BaseMeasure<f64>,
}

/// Nonempty isc map on `[0, 1]` with values in `[0, 1]`, a density of size
/// at most 0.5 and atoms of size at least 0.1 at nodes.
pub fn support_case<R: Rng>(rng: &mut R) -> SupportCase {
    let cells = rng.gen_range(2..=3);
    let cx = random_complex(rng, cells);
    let anchors: Vec<f64> = (0..cx.num_nodes()).map(|_| rng.gen_range(0.2..0.8)).collect();
    let bounds: Vec<_> = (0..cx.num_cells())
        .map(|i| {
            let (t0, t1) = cx.cell(i);
            let (p0, p1) = (anchors[i], anchors[i + 1]);
            let (a0, b0) = (rng.gen_range(0.0..=p0), rng.gen_range(p0..=1.0));
            let (a1, b1) = (rng.gen_range(0.0..=p1), rng.gen_range(p1..=1.0));
            Some(CellBounds::new(Affine::through(t0, a0, t1, a1), Affine::through(t0, b0, t1, b1)))
        })
        .collect();
    let base = IntervalMap::with_liminf_nodes(cx.clone(), bounds).expect("ordered");
    let mut map = base.clone();
    for k in 0..cx.num_nodes() {
        let li = base.node_value(k);
        if li.is_empty() {
            continue;
        }
        let v = if rng.gen_bool(0.5) { li } else { random_subinterval(rng, li) };
        let v = if v.is_empty() { Interval::point(li.center().expect("nonempty")) } else { v };
        map = map.with_node(k, v);
    }
    let density: Vec<f64> = (0..cx.num_cells()).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let mut atoms = Vec::new();
    for k in 0..cx.num_nodes() {
        if rng.gen_bool(0.4) {
            let w = rng.gen_range(0.1..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            atoms.push((k, w));
        }
    }
    let theta = SignedMeasure::new(cx.clone(), density, atoms).expect("valid measure");
    let mu = BaseMeasure::new(cx.clone(), (0..cx.num_cells()).map(|_| rng.gen_range(0.5..1.5)).collect())
        .expect("positive");
    SupportCase { map, theta, mu }
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A point `y` and measure `theta` with `theta` in the subdifferential of
/// `I_h + δ_{C(D)}` at `y`, built from subgradient selections.
#[derive(Debug, Clone)]
pub struct OptimalPair {
    pub h: IntegrandField,
    pub y: PlFunction<f64>,
    pub theta: SignedMeasure<f64>,
    pub mu: BaseMeasure<f64>,
}

/// `y ≡ c`; each cell function has a kink at `c` with slopes `alpha < beta`
/// and the cell density is `beta - 0.05`. Atoms sit at nodes whose node
/// function has domain `[c - 1, c]`, so a positive atom is a normal there.
pub fn optimal_pair<R: Rng>(rng: &mut R) -> OptimalPair {
    let cells = rng.gen_range(2..=5);
    let cx = random_complex(rng, cells);
    let c = grid_value(rng, -4, 4, 0.25);
    let mut cell_fns = Vec::new();
    let mut density = Vec::new();
    for _ in 0..cx.num_cells() {
        let alpha = grid_value(rng, -8, 0, 0.25);
        let beta = alpha + 0.25 + grid_value(rng, 0, 8, 0.25);
        let gamma = grid_value(rng, -4, 4, 0.25);
        let f = PolyConvexFn::new(
            vec![Affine::new(alpha, gamma - alpha * c), Affine::new(beta, gamma - beta * c)],
            Interval::new(c - 2.0, c + 2.0).expect("ordered"),
        )
        .expect("proper");
        cell_fns.push(Some(CellIntegrand::unit(f)));
        density.push(beta - 0.05);
    }
    let mut node_fns = Vec::new();
    let mut atoms = Vec::new();
    for k in 0..cx.num_nodes() {
        if rng.gen_bool(0.4) {
            node_fns.push(Some(
                PolyConvexFn::indicator(Interval::new(c - 1.0, c).expect("ordered")).expect("proper"),
            ));
            atoms.push((k, rng.gen_range(0.1..1.0)));
        } else {
            node_fns.push(Some(PolyConvexFn::indicator(Interval::new(c - 1.0, c + 1.0).expect("ordered")).expect("proper")));
        }
    }
    let h = IntegrandField::new(cx.clone(), cell_fns, node_fns).expect("valid field");
    let theta = SignedMeasure::new(cx.clone(), density, atoms).expect("valid measure");
    let mu = BaseMeasure::new(cx.clone(), (0..cx.num_cells()).map(|_| rng.gen_range(0.5..1.5)).collect())
        .expect("positive");
    OptimalPair {
        h,
        y: PlFunction::constant(cx, c),
        theta,
        mu,
    }
}

/// Single-branch map whose node values are built to be μ-continuous
/// (a one-sided limit) or τ-full (a superset of the limit intersection),
/// with a candidate piecewise-linear selection.
#[derive(Debug, Clone)]
pub struct SelectionCase {
    pub map: UnionMap<f64>,
    pub y: PlFunction<f64>,
    pub mu: BaseMeasure<f64>,
}

pub fn selection_case<R: Rng>(rng: &mut R) -> SelectionCase {
    let cells = rng.gen_range(2..=5);
    let cx = random_complex(rng, cells);
    let cell_bounds: Vec<_> = (0..cx.num_cells())
        .map(|i| {
            let (t0, t1) = cx.cell(i);
            Some(random_bounds(rng, t0, t1, 0.0))
        })
        .collect();
    let base = IntervalMap::with_liminf_nodes(cx.clone(), cell_bounds).expect("ordered");
    let mut map = base.clone();
    let pick_sub = |rng: &mut R, v: Interval<f64>| {
        if v.is_empty() {
            v
        } else {
            let (a, b) = ordered(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0));
            Interval::new_or_empty(v.lo() + a * (v.hi() - v.lo()), v.lo() + b * (v.hi() - v.lo()))
        }
    };
    for k in 0..cx.num_nodes() {
        let left = (k > 0).then(|| base.cell_value(k - 1, cx.node(k)));
        let right = (k + 1 < cx.num_nodes()).then(|| base.cell_value(k, cx.node(k)));
        let li = base.node_value(k);
        let v = match rng.gen_range(0..4) {
            0 => left.unwrap_or(li),
            1 => right.unwrap_or(li),
            2 => {
                // Superset of the limit intersection.
                let grow = rng.gen_range(0.0..0.5);
                if li.is_empty() {
                    Interval::new(-2.0, 2.0).expect("ordered")
                } else {
                    Interval::new(li.lo() - grow, li.hi() + grow).expect("ordered")
                }
            }
            // Neither: a strict piece of the limit intersection.
            _ => pick_sub(rng, li),
        };
        map = map.with_node(k, v);
    }
    // Node values inside the limit intersection give a μ-selection.
    let values = (0..cx.num_nodes())
        .map(|k| {
            let li = base.node_value(k);
            if li.is_empty() || rng.gen_bool(0.1) {
                rng.gen_range(-1.5..1.5)
            } else {
                li.lo() + rng.gen_range(0.0..=1.0) * (li.hi() - li.lo())
            }
        })
        .collect();
    let y = PlFunction::new(cx.clone(), values).expect("finite");
    SelectionCase {
        map: map.into_union(),
        y,
        mu: BaseMeasure::lebesgue(cx),
    }
}

/// Regular duality instance: indicator or kinked integrands of moderate
/// size on `[0, 1]` with a density of size at most 0.5.
#[derive(Debug, Clone)]
pub struct DualityCase {
    pub h: IntegrandField,
    pub theta: SignedMeasure<f64>,
    pub mu: BaseMeasure<f64>,
}

pub fn duality_case<R: Rng>(rng: &mut R) -> DualityCase {
    let cells = rng.gen_range(2..=3);
    let cx = random_complex(rng, cells);
    let fns: Vec<PolyConvexFn<f64>> = (0..cx.num_cells())
        .map(|_| {
            let (a, b) = (rng.gen_range(0.0..0.5), rng.gen_range(0.5..1.0));
            let dom = Interval::new(a, b + 0.1).expect("ordered");
            let s0 = rng.gen_range(-1.0..0.0);
            let s1 = rng.gen_range(0.0..1.0);
            let x = 0.5 * (dom.lo() + dom.hi());
            PolyConvexFn::new(vec![Affine::new(s0, -s0 * x), Affine::new(s1, -s1 * x)], dom).expect("proper")
        })
        .collect();
    let field = IntegrandField::new(
        cx.clone(),
        fns.iter().cloned().map(CellIntegrand::unit).map(Some).collect(),
        (0..cx.num_nodes())
            .map(|k| {
                // Node domain: intersection of the adjacent cell domains,
                // all of which contain 0.5.
                let l = (k > 0).then(|| fns[k - 1].dom());
                let r = (k < cx.num_cells()).then(|| fns[k].dom());
                let dom = match (l, r) {
                    (Some(a), Some(b)) => a.intersect(&b),
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => unreachable!("complex has a cell"),
                };
                Some(PolyConvexFn::indicator(dom).expect("nonempty"))
            })
            .collect(),
    )
    .expect("valid field");
    let density = (0..cx.num_cells()).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let theta = SignedMeasure::new(cx.clone(), density, Vec::new()).expect("valid");
    DualityCase {
        h: field,
        theta,
        mu: BaseMeasure::lebesgue(cx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a: Vec<_> = {
            let mut r = rng(7);
            (0..20).map(|_| random_poly_fn(&mut r)).collect()
        };
        let b: Vec<_> = {
            let mut r = rng(7);
            (0..20).map(|_| random_poly_fn(&mut r)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn isc_maps_are_isc() {
        let mut r = rng(1);
        for _ in 0..200 {
            let cx = random_complex(&mut r, 4);
            assert!(random_isc_union(&mut r, &cx).is_isc().holds);
        }
    }
}
