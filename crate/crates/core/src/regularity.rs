//! Regularity conditions on set-valued maps and integrand domains: outer
//! μ-regularity, μ-continuity, τ-fullness, full lower semicontinuity, the
//! local integrability condition and the closure condition.
//!
//! With an atomless base measure every node is null and every cell has
//! positive measure, so the measure-theoretic liminf at a node is the
//! intersection of the one-sided cell limits, whatever the node value.

use crate::error::{Error, Result};
use crate::integrand::IntegrandField;
use crate::interval::{Interval, IntervalUnion};
use crate::lp::{LinearProgram, LpOutcome};
use crate::measure::BaseMeasure;
use crate::plfn::PlFunction;
use crate::scalar::Scalar;
use crate::setmap::{Side, UnionMap, Verdict};

/// Measure-theoretic liminf at node `k`.
pub fn mli_at<T: Scalar>(s: &UnionMap<T>, k: usize, mu: &BaseMeasure<T>) -> Result<IntervalUnion<T>> {
    s.complex().check_same(mu.complex())?;
    Ok(s.kuratowski_limits(k)?.0)
}

fn nodes<T: Scalar>(s: &UnionMap<T>) -> std::ops::Range<usize> {
    0..s.complex().num_nodes()
}

pub fn is_outer_mu_regular<T: Scalar>(s: &UnionMap<T>, mu: &BaseMeasure<T>) -> Result<Verdict> {
    let tol = T::feas_tol();
    let mut bad = Vec::new();
    for k in nodes(s) {
        if !mli_at(s, k, mu)?.is_subset_tol(&s.node_value(k), tol) {
            bad.push(k);
        }
    }
    Ok(Verdict::from_violations(bad))
}

/// Node value equal to a one-sided limit: the map is left- or
/// right-continuous there in the Hausdorff sense.
pub fn is_mu_continuous<T: Scalar>(s: &UnionMap<T>, mu: &BaseMeasure<T>) -> Result<Verdict> {
    s.complex().check_same(mu.complex())?;
    let tol = T::feas_tol();
    let bad = nodes(s)
        .filter(|&k| {
            let v = s.node_value(k);
            ![Side::Left, Side::Right].iter().any(|&side| {
                s.one_sided_limit(k, side)
                    .map(|l| l.approx_eq(&v, tol))
                    .unwrap_or(false)
            })
        })
        .collect();
    Ok(Verdict::from_violations(bad))
}

/// `liminf (limsup S) ⊆ cl S` for the standard topology.
///
/// The limsup map only differs from `S` at nodes, so its liminf at a node
/// is again the intersection of the one-sided cell limits.
pub fn is_tau_full<T: Scalar>(s: &UnionMap<T>) -> Verdict {
    let tol = T::feas_tol();
    let bad = nodes(s)
        .filter(|&k| {
            let limsup_left = s.one_sided_limit(k, Side::Left).ok();
            let limsup_right = s.one_sided_limit(k, Side::Right).ok();
            let inner = match (limsup_left, limsup_right) {
                (Some(a), Some(b)) => a.intersect(&b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => IntervalUnion::empty(),
            };
            !inner.is_subset_tol(&s.node_value(k), tol)
        })
        .collect();
    Verdict::from_violations(bad)
}

/// Full lower semicontinuity of the graph at nodes:
/// `int liminf S ⊆ int S_node`.
pub fn is_full_lsc<T: Scalar>(s: &UnionMap<T>) -> Verdict {
    let tol = T::feas_tol();
    let bad = nodes(s)
        .filter(|&k| {
            let (li, _) = s.kuratowski_limits(k).expect("node in range");
            let node = s.node_value(k);
            li.parts().iter().filter(|p| !p.is_point()).any(|p| {
                !node
                    .parts()
                    .iter()
                    .filter(|q| !q.is_point())
                    .any(|q| p.is_subset_tol(q, tol))
            })
        })
        .collect();
    Verdict::from_violations(bad)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeFlags {
    pub isc: bool,
    pub osc: bool,
    pub outer_mu_regular: bool,
    pub mu_continuous: bool,
    pub tau_full: bool,
    pub full_lsc: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport<T> {
    pub nodes: Vec<NodeFlags>,
    pub mli: Vec<IntervalUnion<T>>,
}

impl<T> RegularityReport<T> {
    pub fn all(&self, f: impl Fn(&NodeFlags) -> bool) -> bool {
        self.nodes.iter().all(f)
    }
}

pub fn regularity_report<T: Scalar>(s: &UnionMap<T>, mu: &BaseMeasure<T>) -> Result<RegularityReport<T>> {
    let isc = s.is_isc();
    let osc = s.is_osc();
    let omr = is_outer_mu_regular(s, mu)?;
    let muc = is_mu_continuous(s, mu)?;
    let tf = is_tau_full(s);
    let fl = is_full_lsc(s);
    let ok = |v: &Verdict, k: usize| !v.violations.contains(&k);
    let nodes_out = nodes(s)
        .map(|k| NodeFlags {
            isc: ok(&isc, k),
            osc: ok(&osc, k),
            outer_mu_regular: ok(&omr, k),
            mu_continuous: ok(&muc, k),
            tau_full: ok(&tf, k),
            full_lsc: ok(&fl, k),
        })
        .collect();
    let mli = nodes(s).map(|k| mli_at(s, k, mu)).collect::<Result<_>>()?;
    Ok(RegularityReport { nodes: nodes_out, mli })
}

/// `(y is a μ-selection of S, y is a selection of cl S)`.
pub fn mu_selection_check<T: Scalar>(
    y: &PlFunction<T>,
    s: &UnionMap<T>,
    mu: &BaseMeasure<T>,
) -> Result<(bool, bool)> {
    s.complex().check_same(mu.complex())?;
    s.image_closure().selection_flags(y, T::feas_tol())
}

/// Local integrability test outcome; witnesses are `(t, v)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct IcReport {
    pub holds: bool,
    pub witnesses: Vec<(f64, f64)>,
    pub tested: usize,
}

const RINT_INSET: f64 = 1e-3;

/// For every sampled `t` and `v` in the relative interior of `D_t`, looks
/// for a selection of `D` through `(t, v)` with finite integral near `t`.
pub fn check_ic_condition(h: &IntegrandField, mu: &BaseMeasure<f64>) -> Result<IcReport> {
    h.complex().check_same(mu.complex())?;
    let d = h.domain_map();
    if !d.clone().into_union().is_isc().holds {
        return Err(Error::Precondition("domain map is not inner semicontinuous".into()));
    }
    if d.feasible_node_sets().iter().any(|f| f.is_empty()) {
        return Err(Error::Precondition("domain map has no continuous selection".into()));
    }
    let cx = h.complex();
    let mut witnesses = Vec::new();
    let mut tested = 0;

    // Nodes: integrate over the adjacent half cells.
    for k in 0..cx.num_nodes() {
        let t = cx.node(k);
        for v in d.node_value(k).relative_interior_samples(RINT_INSET) {
            tested += 1;
            let finite = match d.selection(Some((k, v))) {
                Err(_) => false,
                Ok(y) => [k.wrapping_sub(1), k].iter().filter(|&&i| i < cx.num_cells()).all(|&i| {
                    let (t0, t1) = cx.cell(i);
                    let (a, b) = if i == k { (t0, 0.5 * (t0 + t1)) } else { (0.5 * (t0 + t1), t1) };
                    h.cells()[i]
                        .as_ref()
                        .map_or(false, |c| c.integrate_along(y.cell_affine(i), a, b).is_finite())
                }),
            };
            if !finite {
                witnesses.push((t, v));
            }
        }
    }

    // Cells: anchor at the midpoint and integrate over the middle half.
    for i in 0..cx.num_cells() {
        let (t0, t1) = cx.cell(i);
        let mid = 0.5 * (t0 + t1);
        let r = cx.refine_at(&[mid]);
        let fine = h.refine(&r);
        let dfine = fine.domain_map();
        let km = r.complex.find_node(mid).expect("inserted node");
        for v in d.cell_value(i, mid).relative_interior_samples(RINT_INSET) {
            tested += 1;
            let finite = match dfine.selection(Some((km, v))) {
                Err(_) => false,
                Ok(y) => [km - 1, km].iter().all(|&j| {
                    let (a0, a1) = r.complex.cell(j);
                    let (a, b) = if j == km - 1 { (0.5 * (a0 + a1), a1) } else { (a0, 0.5 * (a0 + a1)) };
                    fine.cells()[j]
                        .as_ref()
                        .map_or(false, |c| c.integrate_along(y.cell_affine(j), a, b).is_finite())
                }),
            };
            if !finite {
                witnesses.push((mid, v));
            }
        }
    }
    Ok(IcReport {
        holds: witnesses.is_empty(),
        witnesses,
        tested,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureWitness {
    /// Which member of the extreme-selection family failed.
    pub family: String,
    pub node: usize,
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    /// `C(D) = cl(dom I_h ∩ C(D))` on the tested family.
    pub holds: bool,
    pub witness: Option<ClosureWitness>,
    /// `dom I_h ⊆ C(D)`: continuous functions inside `D` on the cells are
    /// inside it at the nodes.
    pub dom_ih_in_cd: bool,
    pub tested: usize,
}

/// Radius of the approximation test.
pub const CLOSURE_EPS: f64 = 1e-6;

fn surrogate_upper(f: Interval<f64>) -> f64 {
    if f.hi().is_finite() {
        f.hi()
    } else if f.lo().is_finite() {
        f.lo().max(0.0) + 1.0
    } else {
        1.0
    }
}

fn surrogate_lower(f: Interval<f64>) -> f64 {
    if f.lo().is_finite() {
        f.lo()
    } else if f.hi().is_finite() {
        f.hi().min(0.0) - 1.0
    } else {
        -1.0
    }
}

/// Is there a value within `CLOSURE_EPS` of `v` inside `set`?
fn within_eps(v: f64, set: Interval<f64>) -> bool {
    let mut lp = LinearProgram::new(1);
    lp.lower[0] = set.lo().max(v - CLOSURE_EPS);
    lp.upper[0] = set.hi().min(v + CLOSURE_EPS);
    !matches!(lp.solve(), LpOutcome::Infeasible)
}

/// Tests whether extreme continuous selections of `D` (upper, lower, mid and
/// one-node spikes to either end) are uniform limits of selections with
/// finite integral, on the `refinement`-cell grid.
pub fn check_closure_condition(h: &IntegrandField, mu: &BaseMeasure<f64>, refinement: usize) -> Result<ClosureReport> {
    h.complex().check_same(mu.complex())?;
    let r = h.complex().refine_uniform(refinement)?;
    let fine = h.refine(&r);
    let feasible = fine.domain_map().feasible_node_sets();
    if feasible.iter().any(|f| f.is_empty()) {
        return Err(Error::Precondition("domain map has no continuous selection".into()));
    }
    // Finite integral forces node values into these sets; elsewhere any
    // selection of D has finite integral.
    let poles = fine.pole_constraints();

    let upper: Vec<f64> = feasible.iter().map(|&f| surrogate_upper(f)).collect();
    let lower: Vec<f64> = feasible.iter().map(|&f| surrogate_lower(f)).collect();
    let mid: Vec<f64> = feasible.iter().map(|f| f.center().expect("nonempty")).collect();
    let mut family: Vec<(String, Vec<f64>)> =
        vec![("upper".into(), upper.clone()), ("lower".into(), lower.clone()), ("mid".into(), mid.clone())];
    for k in 0..feasible.len() {
        let mut up = mid.clone();
        up[k] = upper[k];
        family.push((format!("spike-up@{k}"), up));
        let mut down = mid.clone();
        down[k] = lower[k];
        family.push((format!("spike-down@{k}"), down));
    }

    let mut witness = None;
    'outer: for (name, y) in &family {
        for &(k, z) in &poles {
            let target = z.intersect(&feasible[k]);
            if !within_eps(y[k], target) {
                witness = Some(ClosureWitness {
                    family: name.clone(),
                    node: k,
                    t: r.complex.node(k),
                    value: y[k],
                });
                break 'outer;
            }
        }
    }

    let dmap = h.domain_map().into_union();
    let dom_ih_in_cd = is_tau_full(&dmap).holds;
    Ok(ClosureReport {
        holds: witness.is_none(),
        witness,
        dom_ih_in_cd,
        tested: family.len(),
    })
}
