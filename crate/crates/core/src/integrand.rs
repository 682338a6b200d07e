//! Piecewise-constant convex integrands `h_t` on a cell complex, with an
//! optional inverse-distance weight on a cell, and the exact integrals of
//! `h_t(y_t)` and `h_t^*(v)` over cells.

use crate::complex::{CellComplex, Refinement};
use crate::convex::{Affine, PolyConvexFn};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::interval::Interval;
use crate::setmap::{CellBounds, IntervalMap};

/// Weight multiplying a cell integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Unit,
    /// `h_t = base / |t - pole|`, the pole lying outside the open cell.
    InverseDistance { pole: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellIntegrand {
    pub f: PolyConvexFn<f64>,
    pub weight: Weight,
}

impl CellIntegrand {
    pub fn unit(f: PolyConvexFn<f64>) -> Self {
        CellIntegrand { f, weight: Weight::Unit }
    }

    pub fn inverse_distance(base: PolyConvexFn<f64>, pole: f64) -> Self {
        CellIntegrand {
            f: base,
            weight: Weight::InverseDistance { pole },
        }
    }
}

/// Integrand field. `None` stands for the function identically `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrandField {
    complex: CellComplex<f64>,
    cells: Vec<Option<CellIntegrand>>,
    nodes: Vec<Option<PolyConvexFn<f64>>>,
}

const ZERO_TOL: f64 = 1e-12;

impl IntegrandField {
    pub fn new(
        complex: CellComplex<f64>,
        cells: Vec<Option<CellIntegrand>>,
        nodes: Vec<Option<PolyConvexFn<f64>>>,
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
        for (i, c) in cells.iter().enumerate() {
            if let Some(CellIntegrand {
                f,
                weight: Weight::InverseDistance { pole },
            }) = c
            {
                let (t0, t1) = complex.cell(i);
                if !pole.is_finite() || (*pole > t0 && *pole < t1) {
                    return Err(Error::BadIntegrand(format!("pole {pole} inside cell {i}")));
                }
                let attained = f.infimum().finite().map(|m| m.abs() <= ZERO_TOL).unwrap_or(false)
                    && !f.argmin().is_empty();
                if !attained {
                    return Err(Error::BadIntegrand(format!(
                        "weighted base on cell {i} must have minimum 0 attained"
                    )));
                }
            }
        }
        Ok(IntegrandField { complex, cells, nodes })
    }

    /// Same unit-weight function on every cell and node.
    pub fn uniform(complex: CellComplex<f64>, f: PolyConvexFn<f64>) -> Self {
        let nc = complex.num_cells();
        let nn = complex.num_nodes();
        IntegrandField {
            complex,
            cells: vec![Some(CellIntegrand::unit(f.clone())); nc],
            nodes: vec![Some(f); nn],
        }
    }

    pub fn complex(&self) -> &CellComplex<f64> {
        &self.complex
    }

    pub fn cells(&self) -> &[Option<CellIntegrand>] {
        &self.cells
    }

    pub fn nodes(&self) -> &[Option<PolyConvexFn<f64>>] {
        &self.nodes
    }

    pub fn refine(&self, r: &Refinement<f64>) -> Self {
        let cells = r.parent.iter().map(|&p| self.cells[p].clone()).collect();
        let nodes = (0..r.complex.num_nodes())
            .map(|k| match r.origin[k] {
                Some(i) => self.nodes[i].clone(),
                None => {
                    let p = if k < r.parent.len() { r.parent[k] } else { r.parent[k - 1] };
                    self.cells[p].as_ref().map(|c| c.f.clone())
                }
            })
            .collect();
        IntegrandField {
            complex: r.complex.clone(),
            cells,
            nodes,
        }
    }

    /// Closed domain map `t -> cl dom h_t`; the weight never changes it.
    pub fn domain_map(&self) -> IntervalMap<f64> {
        let cells = self
            .cells
            .iter()
            .map(|c| c.as_ref().and_then(|c| CellBounds::constant(c.f.dom())))
            .collect();
        let nodes = self
            .nodes
            .iter()
            .map(|n| n.as_ref().map(|f| f.dom()).unwrap_or_else(Interval::empty))
            .collect();
        IntervalMap::new(self.complex.clone(), cells, nodes).expect("constant bounds are ordered")
    }

    /// Nodes `k` at which some adjacent weighted cell has its pole, with the
    /// zero set of the base there (finite integrals force `y_k` into it).
    pub fn pole_constraints(&self) -> Vec<(usize, Interval<f64>)> {
        let mut out: Vec<(usize, Interval<f64>)> = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            if let Some(CellIntegrand {
                f,
                weight: Weight::InverseDistance { pole },
            }) = c
            {
                let (t0, t1) = self.complex.cell(i);
                for (k, t) in [(i, t0), (i + 1, t1)] {
                    if (t - pole).abs() <= ZERO_TOL * (1.0 + pole.abs()) {
                        let z = f.argmin();
                        match out.iter_mut().find(|e| e.0 == k) {
                            Some(e) => e.1 = e.1.intersect(&z),
                            None => out.push((k, z)),
                        }
                    }
                }
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }
}

/// `∫_{s0}^{s1} (a + b s) / s ds` for `0 <= s0 <= s1`; infinite when the
/// integrand does not vanish at a zero lower limit.
pub fn inverse_linear_integral(a: f64, b: f64, s0: f64, s1: f64) -> ExtReal<f64> {
    if s1 <= s0 {
        return ExtReal::zero();
    }
    if s0 <= 0.0 {
        let scale = 1.0 + (b * s1).abs();
        if a.abs() <= ZERO_TOL * scale {
            return ExtReal::Finite(b * s1);
        }
        return if a > 0.0 { ExtReal::PosInf } else { ExtReal::NegInf };
    }
    ExtReal::Finite(a * (s1 / s0).ln() + b * (s1 - s0))
}

/// `∫ g(t) w(t) dt` over `[t0, t1]` for `g` affine on the interval, with
/// `g0 = g(t0)`, `g1 = g(t1)`.
fn weighted_affine_integral(weight: Weight, t0: f64, t1: f64, g0: f64, g1: f64) -> ExtReal<f64> {
    match weight {
        Weight::Unit => ExtReal::Finite((g0 + g1) * 0.5 * (t1 - t0)),
        Weight::InverseDistance { pole } => {
            let (s0, s1) = ((t0 - pole).abs(), (t1 - pole).abs());
            let (sn, gn, sf, gf) = if s0 <= s1 { (s0, g0, s1, g1) } else { (s1, g1, s0, g0) };
            if sf <= sn {
                return ExtReal::zero();
            }
            let b = (gf - gn) / (sf - sn);
            let a = gn - b * sn;
            inverse_linear_integral(a, b, sn, sf)
        }
    }
}

/// Sorted cut points in `(t0, t1)` where the affine `y` crosses `xs`.
fn cuts(y: Affine<f64>, xs: &[f64], t0: f64, t1: f64) -> Vec<f64> {
    let mut out = vec![t0];
    if y.slope != 0.0 {
        let mut inner: Vec<f64> = xs
            .iter()
            .map(|&x| (x - y.intercept) / y.slope)
            .filter(|&t| t > t0 && t < t1)
            .collect();
        inner.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        out.extend(inner);
    }
    out.push(t1);
    out
}

/// Does the affine `y` stay in `dom` on `[t0, t1]` up to a null set?
fn stays_in(dom: Interval<f64>, y: Affine<f64>, t0: f64, t1: f64) -> bool {
    let tol = 1e-10;
    let (a, b) = (y.eval(t0), y.eval(t1));
    if y.slope == 0.0 {
        return dom.contains_tol(a, tol);
    }
    dom.contains_tol(a, tol) && dom.contains_tol(b, tol)
}

impl CellIntegrand {
    /// `∫_{t0}^{t1} h_t(y_t) dt` for affine `y` (no base-measure density).
    pub fn integrate_along(&self, y: Affine<f64>, t0: f64, t1: f64) -> ExtReal<f64> {
        if !stays_in(self.f.dom(), y, t0, t1) {
            return ExtReal::PosInf;
        }
        let pts = cuts(y, &self.f.breakpoints(), t0, t1);
        let mut total = ExtReal::zero();
        for w in pts.windows(2) {
            let g0 = self.f.max_piece(y.eval(w[0]));
            let g1 = self.f.max_piece(y.eval(w[1]));
            let part = weighted_affine_integral(self.weight, w[0], w[1], g0, g1);
            total = total.checked_add(part).expect("same-sign infinities");
        }
        total
    }

    /// `∫_{t0}^{t1} h_t^*(v) dt` for a constant `v`.
    pub fn conjugate_integral(&self, v: f64, t0: f64, t1: f64) -> ExtReal<f64> {
        let conj = self.f.conjugate();
        match self.weight {
            Weight::Unit => conj.eval(v).scale_nonneg(t1 - t0),
            Weight::InverseDistance { pole } => {
                // h_t^*(v) = base^*(s v) / s with s = |t - pole|.
                let (s0, s1) = {
                    let (a, b) = ((t0 - pole).abs(), (t1 - pole).abs());
                    (a.min(b), a.max(b))
                };
                if v == 0.0 {
                    return conj.eval(0.0).scale_nonneg(0.0);
                }
                let line = Affine::new(v, 0.0);
                if !stays_in(conj.dom(), line, s0, s1) {
                    return ExtReal::PosInf;
                }
                let pts = cuts(line, &conj.breakpoints(), s0, s1);
                let mut total = ExtReal::zero();
                for w in pts.windows(2) {
                    let (g0, g1) = (conj.max_piece(v * w[0]), conj.max_piece(v * w[1]));
                    let b = (g1 - g0) / (w[1] - w[0]);
                    let a = g0 - b * w[0];
                    total = total
                        .checked_add(inverse_linear_integral(a, b, w[0], w[1]))
                        .expect("same-sign infinities");
                }
                total
            }
        }
    }

    /// Value of `h_t(x)` at a parameter inside the cell.
    pub fn eval_at(&self, t: f64, x: f64) -> ExtReal<f64> {
        match self.weight {
            Weight::Unit => self.f.eval(x),
            Weight::InverseDistance { pole } => {
                let s = (t - pole).abs();
                match self.f.eval(x) {
                    ExtReal::Finite(v) => ExtReal::Finite(v / s),
                    e => e,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_linear_rules() {
        assert_eq!(inverse_linear_integral(0.0, 1.0, 0.0, 1.0), ExtReal::Finite(1.0));
        assert_eq!(inverse_linear_integral(0.5, 0.0, 0.0, 1.0), ExtReal::PosInf);
        let v = inverse_linear_integral(1.0, 0.0, 1.0, std::f64::consts::E).finite().unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn integrate_abs_along_line() {
        let c = CellIntegrand::unit(PolyConvexFn::abs());
        let v = c.integrate_along(Affine::new(1.0, -0.5), 0.0, 1.0);
        assert_eq!(v, ExtReal::Finite(0.25));
        let ind = CellIntegrand::unit(PolyConvexFn::indicator(Interval::new(0.0, 1.0).unwrap()).unwrap());
        assert_eq!(ind.integrate_along(Affine::new(2.0, 0.0), 0.0, 1.0), ExtReal::PosInf);
        assert_eq!(ind.integrate_along(Affine::new(1.0, 0.0), 0.0, 1.0), ExtReal::zero());
    }

    #[test]
    fn weighted_cell_rules() {
        let c = CellIntegrand::inverse_distance(PolyConvexFn::abs(), 0.0);
        assert_eq!(c.integrate_along(Affine::constant(0.3), 0.0, 1.0), ExtReal::PosInf);
        assert_eq!(c.integrate_along(Affine::constant(0.0), 0.0, 1.0), ExtReal::zero());
        let v = c.integrate_along(Affine::new(1.0, 0.0), 0.0, 1.0).finite().unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        // |t - 0.5| / t over [0, 1]: the kink at t = 0.5 splits the cell.
        let v = c.integrate_along(Affine::new(1.0, -0.5), 0.0, 1.0);
        assert_eq!(v, ExtReal::PosInf);
        // base^* = indicator of [-1, 1]; base^*(s v) finite iff |v| s <= 1.
        assert_eq!(c.conjugate_integral(0.5, 0.0, 1.0), ExtReal::zero());
        assert_eq!(c.conjugate_integral(2.0, 0.0, 1.0), ExtReal::PosInf);
    }

    #[test]
    fn pole_constraints_and_domain() {
        let cx = CellComplex::new(vec![0.0, 1.0]).unwrap();
        let h = IntegrandField::new(
            cx,
            vec![Some(CellIntegrand::inverse_distance(PolyConvexFn::abs(), 0.0))],
            vec![Some(PolyConvexFn::affine(0.0, 0.0)); 2],
        )
        .unwrap();
        assert_eq!(h.pole_constraints(), vec![(0, Interval::point(0.0))]);
        assert_eq!(h.domain_map().node_value(0), Interval::real_line());
        let bad = IntegrandField::new(
            CellComplex::new(vec![0.0, 1.0]).unwrap(),
            vec![Some(CellIntegrand::inverse_distance(PolyConvexFn::affine(0.0, 1.0), 0.0))],
            vec![None, None],
        );
        assert!(bad.is_err());
    }
}
