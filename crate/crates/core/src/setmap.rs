//! Interval-valued mappings on a cell complex.
//!
//! On each open cell a mapping is `t -> [l(t), u(t)]` with affine bounds (or
//! empty); every node carries its own interval, which may disagree with the
//! limits from the adjacent cells. All semicontinuity questions therefore
//! reduce to comparing node values with one-sided cell limits.

use crate::complex::{CellComplex, Refinement};
use crate::convex::Affine;
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::plfn::PlFunction;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Affine lower and upper bounds of a nonempty cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellBounds<T> {
    pub lower: Affine<T>,
    pub upper: Affine<T>,
}

impl<T: Scalar> CellBounds<T> {
    pub fn new(lower: Affine<T>, upper: Affine<T>) -> Self {
        CellBounds { lower, upper }
    }

    pub fn constant(iv: Interval<T>) -> Option<Self> {
        (!iv.is_empty()).then(|| CellBounds {
            lower: Affine::constant(iv.lo()),
            upper: Affine::constant(iv.hi()),
        })
    }

    /// Bounds interpolating the intervals at the two cell ends.
    pub fn through(t0: T, at0: Interval<T>, t1: T, at1: Interval<T>) -> Self {
        CellBounds {
            lower: Affine::through(t0, at0.lo(), t1, at1.lo()),
            upper: Affine::through(t0, at0.hi(), t1, at1.hi()),
        }
    }

    pub fn at(&self, t: T) -> Interval<T> {
        Interval::new_or_empty(self.lower.eval(t), self.upper.eval(t))
    }
}

/// Single-branch interval-valued mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMap<T> {
    complex: CellComplex<T>,
    cells: Vec<Option<CellBounds<T>>>,
    nodes: Vec<Interval<T>>,
}

/// Outcome of a node-wise check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub violations: Vec<usize>,
}

impl Verdict {
    pub fn from_violations(violations: Vec<usize>) -> Self {
        Verdict {
            holds: violations.is_empty(),
            violations,
        }
    }
}

fn scale_affine<T: Scalar>(a: Affine<T>, c: T, m: T) -> Affine<T> {
    if m == T::zero() {
        Affine::constant(c)
    } else if a.intercept.is_infinite() {
        Affine::constant(a.intercept * m)
    } else {
        Affine::new(a.slope * m, c + a.intercept * m)
    }
}

fn add_affine<T: Scalar>(a: Affine<T>, b: Affine<T>) -> Affine<T> {
    if a.intercept.is_infinite() || b.intercept.is_infinite() {
        Affine::constant(a.intercept + b.intercept)
    } else {
        Affine::new(a.slope + b.slope, a.intercept + b.intercept)
    }
}

fn crossing_inside<T: Scalar>(a: Affine<T>, b: Affine<T>, t0: T, t1: T, out: &mut Vec<T>) {
    if let Some(x) = a.crossing(&b) {
        if x > t0 && x < t1 {
            out.push(x);
        }
    }
}

impl<T: Scalar> IntervalMap<T> {
    pub fn new(
        complex: CellComplex<T>,
        cells: Vec<Option<CellBounds<T>>>,
        nodes: Vec<Interval<T>>,
    ) -> Result<Self> {
        if cells.len() != complex.num_cells() {
            return Err(Error::LengthMismatch {
                expected: complex.num_cells(),
                got: cells.len(),
            });
        }
        if nodes.len() != complex.num_nodes() {
            return Err(Error::LengthMismatch {
                expected: complex.num_nodes(),
                got: nodes.len(),
            });
        }
        let tol = T::feas_tol();
        for (i, c) in cells.iter().enumerate() {
            if let Some(b) = c {
                if b.lower.intercept == T::infinity() || b.upper.intercept == T::neg_infinity() {
                    return Err(Error::BadCellBounds(i));
                }
                let (t0, t1) = complex.cell(i);
                for t in [t0, t1] {
                    let (l, u) = (b.lower.eval(t), b.upper.eval(t));
                    if l > u + T::scaled_tol(tol, l, u) {
                        return Err(Error::BadCellBounds(i));
                    }
                }
            }
        }
        Ok(IntervalMap {
            complex,
            cells,
            nodes,
        })
    }

    /// Mapping with the given cells whose node values are the largest ones
    /// keeping the mapping inner semicontinuous: the intersection of the
    /// adjacent cell limits.
    pub fn with_liminf_nodes(complex: CellComplex<T>, cells: Vec<Option<CellBounds<T>>>) -> Result<Self> {
        let n = complex.num_nodes();
        let mut m = Self::new(complex, cells, vec![Interval::empty(); n])?;
        for k in 0..n {
            m.nodes[k] = m.liminf_interval(k);
        }
        Ok(m)
    }

    pub fn constant(complex: CellComplex<T>, iv: Interval<T>) -> Self {
        let nc = complex.num_cells();
        let nn = complex.num_nodes();
        IntervalMap {
            complex,
            cells: vec![CellBounds::constant(iv); nc],
            nodes: vec![iv; nn],
        }
    }

    pub fn complex(&self) -> &CellComplex<T> {
        &self.complex
    }

    pub fn cells(&self) -> &[Option<CellBounds<T>>] {
        &self.cells
    }

    pub fn nodes(&self) -> &[Interval<T>] {
        &self.nodes
    }

    pub fn node_value(&self, k: usize) -> Interval<T> {
        self.nodes[k]
    }

    pub fn with_node(mut self, k: usize, iv: Interval<T>) -> Self {
        self.nodes[k] = iv;
        self
    }

    /// Value on cell `i` at `t` (extended by continuity to the closed cell).
    pub fn cell_value(&self, i: usize, t: T) -> Interval<T> {
        match &self.cells[i] {
            Some(b) => b.at(t),
            None => Interval::empty(),
        }
    }

    /// Value at an arbitrary parameter: the node value at nodes.
    pub fn value_at(&self, t: T) -> Option<Interval<T>> {
        if let Some(k) = self.complex.find_node(t) {
            return Some(self.nodes[k]);
        }
        let i = self.complex.locate(t)?;
        Some(self.cell_value(i, t))
    }

    pub fn limit(&self, k: usize, side: Side) -> Result<Interval<T>> {
        if k >= self.complex.num_nodes() {
            return Err(Error::NodeOutOfRange(k));
        }
        let cell = match side {
            Side::Left if k > 0 => k - 1,
            Side::Right if k + 1 < self.complex.num_nodes() => k,
            _ => return Err(Error::BoundaryNode(k)),
        };
        Ok(self.cell_value(cell, self.complex.node(k)))
    }

    /// Intersection of the available one-sided limits at node `k`.
    pub fn liminf_interval(&self, k: usize) -> Interval<T> {
        let l = self.limit(k, Side::Left).ok();
        let r = self.limit(k, Side::Right).ok();
        match (l, r) {
            (Some(a), Some(b)) => a.intersect(&b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("complex has at least one cell"),
        }
    }

    /// Points `v` such that the piecewise-linear function through `v` at
    /// node `k` can stay in the mapping on both adjacent closed cells.
    pub fn feasible_node_sets(&self) -> Vec<Interval<T>> {
        (0..self.complex.num_nodes())
            .map(|k| self.nodes[k].intersect(&self.liminf_interval(k)))
            .collect()
    }

    pub fn refine(&self, r: &Refinement<T>) -> Self {
        let cells: Vec<_> = r.parent.iter().map(|&p| self.cells[p]).collect();
        let nodes = r
            .complex
            .nodes()
            .iter()
            .enumerate()
            .map(|(k, &t)| match r.origin[k] {
                Some(i) => self.nodes[i],
                None => {
                    let p = if k < r.parent.len() { r.parent[k] } else { r.parent[k - 1] };
                    self.cell_value(p, t)
                }
            })
            .collect();
        IntervalMap {
            complex: r.complex.clone(),
            cells,
            nodes,
        }
    }

    /// Does the piecewise-linear `y` lie in the mapping on every open cell
    /// (`cells`) and additionally at every node (`nodes`)?
    pub fn selection_flags(&self, y: &PlFunction<T>, tol: T) -> Result<(bool, bool)> {
        self.complex.check_same(y.complex())?;
        let mut on_cells = true;
        for i in 0..self.complex.num_cells() {
            let (t0, t1) = self.complex.cell(i);
            let ok = self.cell_value(i, t0).contains_tol(y.value(i), tol)
                && self.cell_value(i, t1).contains_tol(y.value(i + 1), tol);
            on_cells &= ok;
        }
        let on_nodes = (0..self.complex.num_nodes()).all(|k| self.nodes[k].contains_tol(y.value(k), tol));
        Ok((on_cells, on_cells && on_nodes))
    }

    pub fn into_union(self) -> UnionMap<T> {
        UnionMap {
            branches: vec![self],
        }
    }

    /// Selection through `anchor = (node, value)` if given, built by
    /// clamping outward from the anchor (or from the midpoint of the first
    /// feasible node set).
    pub fn selection(&self, anchor: Option<(usize, T)>) -> Result<PlFunction<T>> {
        let feasible = self.feasible_node_sets();
        if let Some(k) = feasible.iter().position(|f| f.is_empty()) {
            return Err(Error::Infeasible { node: k });
        }
        let n = feasible.len();
        let (start, v0) = match anchor {
            Some((k, v)) => {
                if k >= n {
                    return Err(Error::NodeOutOfRange(k));
                }
                if !feasible[k].contains_tol(v, T::feas_tol()) {
                    return Err(Error::Infeasible { node: k });
                }
                (k, feasible[k].clamp(v).expect("nonempty"))
            }
            None => (0, feasible[0].center().expect("nonempty")),
        };
        let mut values = vec![T::zero(); n];
        values[start] = v0;
        for k in start + 1..n {
            values[k] = feasible[k].clamp(values[k - 1]).expect("nonempty");
        }
        for k in (0..start).rev() {
            values[k] = feasible[k].clamp(values[k + 1]).expect("nonempty");
        }
        PlFunction::new(self.complex.clone(), values)
    }
}

/// Pointwise union of interval maps over one complex.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionMap<T> {
    branches: Vec<IntervalMap<T>>,
}

/// Box-valued map `t -> S1_t x S2_t`, used for semicontinuity tests.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxMap<T> {
    pub first: UnionMap<T>,
    pub second: UnionMap<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapOp<T> {
    /// `c + m S`.
    Affine { c: T, m: T },
    Sum,
    Intersect,
    /// Intersection where the second map has open graph: each value is the
    /// closure of `S1_t ∩ int S2_t`.
    IntersectOpen,
    Union,
    Hull,
    Product,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapOpOutput<T> {
    Map(UnionMap<T>),
    Box(BoxMap<T>),
}

impl<T: Scalar> UnionMap<T> {
    pub fn new(branches: Vec<IntervalMap<T>>) -> Result<Self> {
        let first = branches
            .first()
            .ok_or_else(|| Error::Precondition("union map needs a branch".into()))?;
        for b in &branches[1..] {
            first.complex.check_same(&b.complex)?;
        }
        Ok(UnionMap { branches })
    }

    pub fn branches(&self) -> &[IntervalMap<T>] {
        &self.branches
    }

    pub fn complex(&self) -> &CellComplex<T> {
        &self.branches[0].complex
    }

    pub fn node_value(&self, k: usize) -> IntervalUnion<T> {
        IntervalUnion::from_intervals(self.branches.iter().map(|b| b.nodes[k]))
    }

    pub fn cell_value(&self, i: usize, t: T) -> IntervalUnion<T> {
        IntervalUnion::from_intervals(self.branches.iter().map(|b| b.cell_value(i, t)))
    }

    pub fn value_at(&self, t: T) -> Option<IntervalUnion<T>> {
        let parts: Option<Vec<_>> = self.branches.iter().map(|b| b.value_at(t)).collect();
        parts.map(IntervalUnion::from_intervals)
    }

    /// Limit of the values along the cell on `side` of node `k`.
    pub fn one_sided_limit(&self, k: usize, side: Side) -> Result<IntervalUnion<T>> {
        let parts: Result<Vec<_>> = self.branches.iter().map(|b| b.limit(k, side)).collect();
        Ok(IntervalUnion::from_intervals(parts?))
    }

    /// Sequential `(liminf, limsup)` at node `k` over parameters `t -> t_k`,
    /// `t != t_k`. At boundary nodes the single available side is used.
    pub fn kuratowski_limits(&self, k: usize) -> Result<(IntervalUnion<T>, IntervalUnion<T>)> {
        if k >= self.complex().num_nodes() {
            return Err(Error::NodeOutOfRange(k));
        }
        let l = self.one_sided_limit(k, Side::Left).ok();
        let r = self.one_sided_limit(k, Side::Right).ok();
        Ok(match (l, r) {
            (Some(a), Some(b)) => (a.intersect(&b), a.union(&b)),
            (Some(a), None) | (None, Some(a)) => (a.clone(), a),
            (None, None) => unreachable!("complex has at least one cell"),
        })
    }

    /// Inner semicontinuity: every node value inside the liminf. Open cells
    /// are continuous by construction.
    pub fn is_isc(&self) -> Verdict {
        let tol = T::feas_tol();
        let bad = (0..self.complex().num_nodes())
            .filter(|&k| {
                let (li, _) = self.kuratowski_limits(k).expect("valid node");
                !self.node_value(k).is_subset_tol(&li, tol)
            })
            .collect();
        Verdict::from_violations(bad)
    }

    /// Outer semicontinuity: limsup inside every node value.
    pub fn is_osc(&self) -> Verdict {
        let tol = T::feas_tol();
        let bad = (0..self.complex().num_nodes())
            .filter(|&k| {
                let (_, ls) = self.kuratowski_limits(k).expect("valid node");
                !ls.is_subset_tol(&self.node_value(k), tol)
            })
            .collect();
        Verdict::from_violations(bad)
    }

    /// Pointwise closure. Values are closed intervals already, so this is the
    /// identity on the representation.
    pub fn image_closure(&self) -> Self {
        self.clone()
    }

    pub fn refine(&self, r: &Refinement<T>) -> Self {
        UnionMap {
            branches: self.branches.iter().map(|b| b.refine(r)).collect(),
        }
    }

    fn check_pair(&self, other: &Self) -> Result<()> {
        self.complex().check_same(other.complex())
    }

    pub fn affine_image(&self, c: T, m: T) -> Self {
        let branches = self
            .branches
            .iter()
            .map(|b| IntervalMap {
                complex: b.complex.clone(),
                cells: b
                    .cells
                    .iter()
                    .map(|cb| {
                        cb.map(|cb| {
                            let (lo, hi) = if m >= T::zero() {
                                (cb.lower, cb.upper)
                            } else {
                                (cb.upper, cb.lower)
                            };
                            CellBounds::new(scale_affine(lo, c, m), scale_affine(hi, c, m))
                        })
                    })
                    .collect(),
                nodes: b.nodes.iter().map(|iv| iv.affine_image(c, m)).collect(),
            })
            .collect();
        UnionMap { branches }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_pair(other)?;
        let mut branches = Vec::new();
        for a in &self.branches {
            for b in &other.branches {
                let cells = a
                    .cells
                    .iter()
                    .zip(&b.cells)
                    .map(|(x, y)| match (x, y) {
                        (Some(x), Some(y)) => Some(CellBounds::new(
                            add_affine(x.lower, y.lower),
                            add_affine(x.upper, y.upper),
                        )),
                        _ => None,
                    })
                    .collect();
                let nodes = a.nodes.iter().zip(&b.nodes).map(|(x, y)| x.sum(y)).collect();
                branches.push(IntervalMap {
                    complex: a.complex.clone(),
                    cells,
                    nodes,
                });
            }
        }
        Ok(UnionMap { branches })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_pair(other)?;
        let mut branches = self.branches.clone();
        branches.extend(other.branches.iter().cloned());
        Ok(UnionMap { branches })
    }

    /// Refinement points where any two bounds of `pairs` cross inside a cell.
    fn crossings(complex: &CellComplex<T>, maps: &[&IntervalMap<T>]) -> Vec<T> {
        let mut pts = Vec::new();
        for i in 0..complex.num_cells() {
            let (t0, t1) = complex.cell(i);
            let bounds: Vec<Affine<T>> = maps
                .iter()
                .filter_map(|m| m.cells[i])
                .flat_map(|b| [b.lower, b.upper])
                .collect();
            for x in 0..bounds.len() {
                for y in x + 1..bounds.len() {
                    crossing_inside(bounds[x], bounds[y], t0, t1, &mut pts);
                }
            }
        }
        pts
    }

    fn all_maps<'a>(&'a self, other: &'a Self) -> Vec<&'a IntervalMap<T>> {
        self.branches.iter().chain(other.branches.iter()).collect()
    }

    fn intersect_impl(&self, other: &Self, open_second: bool) -> Result<Self> {
        self.check_pair(other)?;
        let pts = Self::crossings(self.complex(), &self.all_maps(other));
        let r = self.complex().refine_at(&pts);
        let lhs = self.refine(&r);
        let rhs = other.refine(&r);
        let cx = &r.complex;
        let tol = T::feas_tol();
        let meets = |a: Interval<T>, b: Interval<T>| -> bool {
            if open_second {
                !a.is_empty()
                    && !b.is_empty()
                    && a.lo() < b.hi() - T::scaled_tol(tol, a.lo(), b.hi())
                    && a.hi() > b.lo() + T::scaled_tol(tol, a.hi(), b.lo())
                    && b.lo() < b.hi()
            } else {
                !a.intersect(&b).is_empty()
            }
        };
        let mut branches = Vec::new();
        for a in &lhs.branches {
            for b in &rhs.branches {
                let mut cells = Vec::with_capacity(cx.num_cells());
                for i in 0..cx.num_cells() {
                    let (t0, t1) = cx.cell(i);
                    let mid = (t0 + t1) * T::half();
                    let cell = match (a.cells[i], b.cells[i]) {
                        (Some(x), Some(y)) if meets(x.at(mid), y.at(mid)) => {
                            let lower = if x.lower.eval(mid) >= y.lower.eval(mid) { x.lower } else { y.lower };
                            let upper = if x.upper.eval(mid) <= y.upper.eval(mid) { x.upper } else { y.upper };
                            Some(CellBounds::new(lower, upper))
                        }
                        _ => None,
                    };
                    cells.push(cell);
                }
                let nodes = a
                    .nodes
                    .iter()
                    .zip(&b.nodes)
                    .map(|(x, y)| if meets(*x, *y) { x.intersect(y) } else { Interval::empty() })
                    .collect();
                branches.push(IntervalMap {
                    complex: cx.clone(),
                    cells,
                    nodes,
                });
            }
        }
        Ok(UnionMap { branches })
    }

    /// Pointwise intersection; cells are split where bounds cross, so the
    /// result lives on a refinement of the complex.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.intersect_impl(other, false)
    }

    /// Intersection with a mapping whose graph is open (values of `other`
    /// read as their interiors), returned as its image closure.
    pub fn intersect_open(&self, other: &Self) -> Result<Self> {
        self.intersect_impl(other, true)
    }

    /// Pointwise convex hull of the union of the branches.
    pub fn hull(&self) -> IntervalMap<T> {
        let maps: Vec<&IntervalMap<T>> = self.branches.iter().collect();
        let pts = Self::crossings(self.complex(), &maps);
        let r = self.complex().refine_at(&pts);
        let fine = self.refine(&r);
        let cx = &r.complex;
        let mut cells = Vec::with_capacity(cx.num_cells());
        for i in 0..cx.num_cells() {
            let (t0, t1) = cx.cell(i);
            let mid = (t0 + t1) * T::half();
            let mut best: Option<CellBounds<T>> = None;
            for b in &fine.branches {
                if let Some(x) = b.cells[i] {
                    best = Some(match best {
                        None => x,
                        Some(cur) => CellBounds::new(
                            if x.lower.eval(mid) < cur.lower.eval(mid) { x.lower } else { cur.lower },
                            if x.upper.eval(mid) > cur.upper.eval(mid) { x.upper } else { cur.upper },
                        ),
                    });
                }
            }
            cells.push(best);
        }
        let nodes = (0..cx.num_nodes()).map(|k| fine.node_value(k).hull()).collect();
        IntervalMap {
            complex: cx.clone(),
            cells,
            nodes,
        }
    }

    pub fn product(&self, other: &Self) -> Result<BoxMap<T>> {
        self.check_pair(other)?;
        Ok(BoxMap {
            first: self.clone(),
            second: other.clone(),
        })
    }

    pub fn apply(op: MapOp<T>, s1: &Self, s2: Option<&Self>) -> Result<MapOpOutput<T>> {
        let need = || s2.ok_or_else(|| Error::Precondition("binary map operation needs two maps".into()));
        Ok(match op {
            MapOp::Affine { c, m } => MapOpOutput::Map(s1.affine_image(c, m)),
            MapOp::Hull => MapOpOutput::Map(s1.hull().into_union()),
            MapOp::Sum => MapOpOutput::Map(s1.sum(need()?)?),
            MapOp::Intersect => MapOpOutput::Map(s1.intersect(need()?)?),
            MapOp::IntersectOpen => MapOpOutput::Map(s1.intersect_open(need()?)?),
            MapOp::Union => MapOpOutput::Map(s1.union(need()?)?),
            MapOp::Product => MapOpOutput::Box(s1.product(need()?)?),
        })
    }

    /// Continuous piecewise-linear selection of the (hull of the) mapping.
    pub fn michael_selection(&self, anchor: Option<(usize, T)>) -> Result<PlFunction<T>> {
        if self.branches.len() == 1 {
            self.branches[0].selection(anchor)
        } else {
            let h = self.hull();
            // The hull may live on a refinement; map the anchor node across.
            let anchor = match anchor {
                Some((k, v)) => {
                    let t = self.complex().node(k);
                    Some((h.complex.find_node(t).ok_or(Error::NodeOutOfRange(k))?, v))
                }
                None => None,
            };
            h.selection(anchor)
        }
    }

    /// `(y in S on every open cell, y in S everywhere)`.
    pub fn selection_flags(&self, y: &PlFunction<T>, tol: T) -> Result<(bool, bool)> {
        self.complex().check_same(y.complex())?;
        let cx = self.complex();
        let mut on_cells = true;
        for i in 0..cx.num_cells() {
            let (t0, t1) = cx.cell(i);
            let ya = y.cell_affine(i);
            // Closed t-intervals where y meets each branch must cover the cell.
            let mut spans: Vec<Interval<T>> = Vec::new();
            for b in &self.branches {
                if let Some(cb) = b.cells[i] {
                    spans.push(affine_between(cb.lower, ya, cb.upper, t0, t1, tol));
                }
            }
            let cover = IntervalUnion::from_intervals(spans);
            on_cells &= Interval::new(t0, t1)
                .map(|c| IntervalUnion::single(c).is_subset_tol(&cover, tol))
                .unwrap_or(false);
        }
        let on_nodes = (0..cx.num_nodes()).all(|k| self.node_value(k).contains_tol(y.value(k), tol));
        Ok((on_cells, on_cells && on_nodes))
    }
}

/// `{t in [t0, t1] : lower(t) <= y(t) <= upper(t)}` up to tolerance.
fn affine_between<T: Scalar>(lower: Affine<T>, y: Affine<T>, upper: Affine<T>, t0: T, t1: T, tol: T) -> Interval<T> {
    let mut span = Interval::new(t0, t1).expect("cell");
    for (f, g) in [(lower, y), (y, upper)] {
        // Need f(t) - g(t) <= slack.
        if f.intercept.is_infinite() || g.intercept.is_infinite() {
            let ok = f.eval(t0) <= g.eval(t0);
            if !ok {
                return Interval::empty();
            }
            continue;
        }
        let d = Affine::new(f.slope - g.slope, f.intercept - g.intercept);
        let slack = T::scaled_tol(tol, f.eval(t0), g.eval(t0));
        let piece = if d.slope == T::zero() {
            if d.intercept <= slack {
                Interval::real_line()
            } else {
                Interval::empty()
            }
        } else {
            let root = (slack - d.intercept) / d.slope;
            if d.slope > T::zero() {
                Interval::new_or_empty(T::neg_infinity(), root)
            } else {
                Interval::new_or_empty(root, T::infinity())
            }
        };
        span = span.intersect(&piece);
    }
    span
}

impl<T: Scalar> BoxMap<T> {
    /// Inner semicontinuity of the product: an empty product value is
    /// trivially inside the liminf; otherwise both factors must be.
    pub fn is_isc(&self) -> Verdict {
        let tol = T::feas_tol();
        let n = self.first.complex().num_nodes();
        let bad = (0..n)
            .filter(|&k| {
                let a = self.first.node_value(k);
                let b = self.second.node_value(k);
                if a.is_empty() || b.is_empty() {
                    return false;
                }
                let (la, _) = self.first.kuratowski_limits(k).expect("node");
                let (lb, _) = self.second.kuratowski_limits(k).expect("node");
                !(a.is_subset_tol(&la, tol) && b.is_subset_tol(&lb, tol))
            })
            .collect();
        Verdict::from_violations(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval<f64> {
        Interval::new(lo, hi).unwrap()
    }

    fn halves() -> CellComplex<f64> {
        CellComplex::new(vec![0.0, 0.5, 1.0]).unwrap()
    }

    fn pinch_up() -> UnionMap<f64> {
        IntervalMap::constant(halves(), Interval::point(0.0))
            .with_node(1, iv(0.0, 1.0))
            .into_union()
    }

    fn pinch_down() -> UnionMap<f64> {
        IntervalMap::constant(halves(), iv(0.0, 1.0))
            .with_node(1, Interval::point(0.0))
            .into_union()
    }

    fn two_cells(left: Interval<f64>, right: Interval<f64>) -> UnionMap<f64> {
        IntervalMap::with_liminf_nodes(
            halves(),
            vec![CellBounds::constant(left), CellBounds::constant(right)],
        )
        .unwrap()
        .into_union()
    }

    #[test]
    fn one_sided_limit_examples() {
        let s = IntervalMap::constant(halves(), iv(0.0, 1.0)).into_union();
        assert_eq!(
            s.one_sided_limit(1, Side::Left).unwrap(),
            IntervalUnion::single(iv(0.0, 1.0))
        );

        let tube = IntervalMap::with_liminf_nodes(
            halves(),
            vec![
                Some(CellBounds::new(Affine::new(1.0, 0.0), Affine::new(1.0, 1.0))),
                Some(CellBounds::new(Affine::new(1.0, 0.0), Affine::new(1.0, 1.0))),
            ],
        )
        .unwrap()
        .into_union();
        assert_eq!(
            tube.one_sided_limit(1, Side::Right).unwrap(),
            IntervalUnion::single(iv(0.5, 1.5))
        );

        let two = UnionMap::new(vec![
            IntervalMap::constant(halves(), Interval::point(0.0)),
            IntervalMap::constant(halves(), Interval::point(1.0)),
        ])
        .unwrap();
        assert_eq!(
            two.one_sided_limit(1, Side::Left).unwrap(),
            IntervalUnion::from_intervals([Interval::point(0.0), Interval::point(1.0)])
        );
        assert_eq!(s.one_sided_limit(0, Side::Left), Err(Error::BoundaryNode(0)));
    }

    #[test]
    fn kuratowski_limit_examples() {
        let s = two_cells(iv(0.0, 1.0), iv(0.5, 2.0));
        let (li, ls) = s.kuratowski_limits(1).unwrap();
        assert_eq!(li, IntervalUnion::single(iv(0.5, 1.0)));
        assert_eq!(ls, IntervalUnion::single(iv(0.0, 2.0)));

        let c = IntervalMap::constant(halves(), iv(0.0, 1.0)).into_union();
        let (li, ls) = c.kuratowski_limits(1).unwrap();
        assert_eq!(li, ls);

        let e = two_cells(Interval::empty(), iv(0.0, 1.0));
        let (li, ls) = e.kuratowski_limits(1).unwrap();
        assert!(li.is_empty());
        assert_eq!(ls, IntervalUnion::single(iv(0.0, 1.0)));
    }

    #[test]
    fn isc_osc_examples() {
        let c = IntervalMap::constant(halves(), iv(0.0, 1.0)).into_union();
        assert!(c.is_isc().holds && c.is_osc().holds);

        let inner = IntervalMap::constant(halves(), iv(0.0, 1.0))
            .with_node(1, Interval::point(0.0))
            .into_union();
        assert!(inner.is_isc().holds);

        let up = pinch_up();
        assert_eq!(up.is_isc(), Verdict::from_violations(vec![1]));
        assert!(up.is_osc().holds);
        assert_eq!(pinch_down().is_osc(), Verdict::from_violations(vec![1]));
    }

    #[test]
    fn image_closure_is_idempotent() {
        let up = pinch_up();
        assert_eq!(up.image_closure(), up);
        assert_eq!(up.image_closure().image_closure(), up.image_closure());
        let e = two_cells(iv(0.0, 1.0), iv(0.0, 1.0)).branches[0]
            .clone()
            .with_node(1, Interval::empty())
            .into_union();
        assert!(e.image_closure().node_value(1).is_empty());
    }

    #[test]
    fn map_op_examples() {
        let box01 = IntervalMap::constant(halves(), iv(0.0, 1.0)).into_union();
        let tube = IntervalMap::with_liminf_nodes(
            halves(),
            vec![Some(CellBounds::new(Affine::new(1.0, 0.0), Affine::new(1.0, 1.0))); 2],
        )
        .unwrap()
        .into_union();
        let s = box01.sum(&tube).unwrap();
        assert_eq!(s.branches()[0].cells()[0].unwrap().lower, Affine::new(1.0, 0.0));
        assert_eq!(s.branches()[0].cells()[0].unwrap().upper, Affine::new(1.0, 2.0));

        let a = box01.affine_image(0.0, -2.0);
        assert_eq!(a.node_value(0), IntervalUnion::single(iv(-2.0, 0.0)));

        let two = UnionMap::new(vec![
            IntervalMap::constant(halves(), Interval::point(0.0)),
            IntervalMap::constant(halves(), Interval::point(1.0)),
        ])
        .unwrap();
        assert_eq!(two.hull().node_value(1), iv(0.0, 1.0));

        let band = IntervalMap::with_liminf_nodes(
            CellComplex::new(vec![0.0, 1.0]).unwrap(),
            vec![Some(CellBounds::new(Affine::new(1.0, -0.25), Affine::new(1.0, 0.25)))],
        )
        .unwrap()
        .into_union();
        let unit = IntervalMap::constant(CellComplex::new(vec![0.0, 1.0]).unwrap(), iv(0.0, 1.0)).into_union();
        let x = unit.intersect(&band).unwrap();
        assert_eq!(x.complex().nodes(), &[0.0, 0.25, 0.75, 1.0]);
        for (t, lo, hi) in [(0.1, 0.0, 0.35), (0.5, 0.25, 0.75), (0.9, 0.65, 1.0)] {
            let v = x.value_at(t).unwrap();
            assert!(v.approx_eq(&IntervalUnion::single(iv(lo, hi)), 1e-12), "{t}: {v}");
        }
        assert!(x.is_isc().holds);
    }

    #[test]
    fn open_intersection_drops_boundary_contact() {
        let c = CellComplex::new(vec![-1.0, 0.0, 1.0]).unwrap();
        let zero = IntervalMap::constant(c.clone(), Interval::point(0.0)).into_union();
        let moving = IntervalMap::with_liminf_nodes(
            c,
            vec![Some(CellBounds::new(Affine::new(1.0, 0.0), Affine::new(1.0, 1.0))); 2],
        )
        .unwrap()
        .into_union();
        // The closed intersection is {0} at t = 0 and empty after: not isc.
        assert!(!zero.intersect(&moving).unwrap().is_isc().holds);
        assert!(zero.intersect_open(&moving).unwrap().is_isc().holds);
    }

    #[test]
    fn product_isc() {
        let ok = IntervalMap::constant(halves(), iv(0.0, 1.0)).into_union();
        assert!(ok.product(&ok).unwrap().is_isc().holds);
        assert!(!ok.product(&pinch_up()).unwrap().is_isc().holds);
    }

    #[test]
    fn selection_examples() {
        let cells = vec![
            Some(CellBounds::new(Affine::constant(0.0), Affine::new(1.0, 0.5))),
            Some(CellBounds::new(Affine::new(1.0, -0.5), Affine::constant(1.0))),
        ];
        let s = IntervalMap::with_liminf_nodes(halves(), cells).unwrap().into_union();
        let y = s.michael_selection(None).unwrap();
        for k in 0..=1000 {
            let t = k as f64 / 1000.0;
            let v = y.eval(t).unwrap();
            assert!((t - 0.5).max(0.0) <= v + 1e-12 && v <= (t + 0.5).min(1.0) + 1e-12);
        }

        let pinch = IntervalMap::constant(halves(), iv(0.2, 1.0))
            .with_node(1, Interval::point(0.0))
            .into_union();
        assert_eq!(pinch.michael_selection(None), Err(Error::Infeasible { node: 1 }));

        let box01 = IntervalMap::constant(halves(), iv(0.0, 1.0)).into_union();
        let y = box01.michael_selection(Some((1, 0.75))).unwrap();
        assert_eq!(y.values(), &[0.75, 0.75, 0.75]);
        assert_eq!(box01.michael_selection(Some((1, 2.0))), Err(Error::Infeasible { node: 1 }));
    }

    #[test]
    fn union_selection_flags_cover_cells() {
        let c = CellComplex::new(vec![0.0, 1.0]).unwrap();
        let s = UnionMap::new(vec![
            IntervalMap::constant(c.clone(), iv(0.0, 0.5)),
            IntervalMap::constant(c.clone(), iv(0.5, 1.0)),
        ])
        .unwrap();
        let y = PlFunction::new(c.clone(), vec![0.0, 1.0]).unwrap();
        assert_eq!(s.selection_flags(&y, 1e-12).unwrap(), (true, true));
        let gap = UnionMap::new(vec![
            IntervalMap::constant(c.clone(), iv(0.0, 0.4)),
            IntervalMap::constant(c.clone(), iv(0.6, 1.0)),
        ])
        .unwrap();
        assert_eq!(gap.selection_flags(&y, 1e-12).unwrap(), (false, false));
    }
}
