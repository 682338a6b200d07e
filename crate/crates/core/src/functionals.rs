//! The integral functional `I_h`, its conjugate `J_{h*}`, support functions
//! of selection sets, and the duality experiments relating them.

use crate::complex::CellComplex;
use crate::convex::{normal_cone_tol, support_value, Affine, PolyConvexFn};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::integrand::{inverse_linear_integral, CellIntegrand, IntegrandField, Weight};
use crate::interval::Interval;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::measure::{BaseMeasure, SignedMeasure};
use crate::plfn::PlFunction;
use crate::regularity::{check_closure_condition, ClosureReport};
use crate::setmap::{IntervalMap, Verdict};

const MEMBER_TOL: f64 = 1e-9;

fn same3(h: &CellComplex<f64>, a: &CellComplex<f64>, b: &CellComplex<f64>) -> Result<()> {
    h.check_same(a)?;
    h.check_same(b)
}

/// `D_t = cl dom h_t`.
pub fn domain_map(h: &IntegrandField) -> IntervalMap<f64> {
    h.domain_map()
}

/// `I_h(y) = ∫ h_t(y_t) dμ`, exact.
pub fn eval_ih(h: &IntegrandField, y: &PlFunction<f64>, mu: &BaseMeasure<f64>) -> Result<ExtReal<f64>> {
    same3(h.complex(), y.complex(), mu.complex())?;
    let cx = h.complex();
    let mut total = ExtReal::zero();
    for i in 0..cx.num_cells() {
        let (t0, t1) = cx.cell(i);
        let part = match &h.cells()[i] {
            None => ExtReal::PosInf,
            Some(c) => c.integrate_along(y.cell_affine(i), t0, t1).scale_nonneg(mu.density()[i]),
        };
        total = total.checked_add(part)?;
    }
    Ok(total)
}

/// `J_{h*}(θ) = ∫ h*(dθ^a/dμ) dμ + ∫ (h*)^∞(dθ^s/d|θ^s|) d|θ^s|`, the
/// recession term evaluated as the support function of the node domain.
pub fn eval_j(h: &IntegrandField, theta: &SignedMeasure<f64>, mu: &BaseMeasure<f64>) -> Result<ExtReal<f64>> {
    same3(h.complex(), theta.complex(), mu.complex())?;
    let cx = h.complex();
    let mut total = ExtReal::zero();
    for i in 0..cx.num_cells() {
        let (t0, t1) = cx.cell(i);
        let part = match &h.cells()[i] {
            None => ExtReal::NegInf,
            Some(c) => c
                .conjugate_integral(theta.density()[i], t0, t1)
                .scale_nonneg(mu.density()[i]),
        };
        total = total.checked_add(part)?;
    }
    for &(k, w) in theta.atoms() {
        let part = match &h.nodes()[k] {
            None => ExtReal::NegInf,
            Some(f) => support_value(&f.dom(), w.signum()).scale_nonneg(w.abs()),
        };
        total = total.checked_add(part)?;
    }
    Ok(total)
}

/// Both sides of the support-function representation of `C(S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaReport {
    /// Maximum of `<y, θ>` over piecewise-linear selections on the refined complex.
    pub lp: ExtReal<f64>,
    /// `∫ σ_S(dθ/d|θ|) d|θ|`.
    pub formula: ExtReal<f64>,
}

impl SigmaReport {
    pub fn gap(&self) -> Option<f64> {
        self.formula.checked_sub(self.lp).ok().and_then(|g| g.finite())
    }
}

fn maximize_on(c: f64, set: Interval<f64>) -> ExtReal<f64> {
    let mut lp = LinearProgram::new(1);
    lp.objective[0] = c;
    lp.lower[0] = set.lo();
    lp.upper[0] = set.hi();
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => ExtReal::Finite(value),
        LpOutcome::Unbounded => ExtReal::PosInf,
        LpOutcome::Infeasible => ExtReal::NegInf,
    }
}

pub fn sigma_cs(
    s: &IntervalMap<f64>,
    theta: &SignedMeasure<f64>,
    mu: &BaseMeasure<f64>,
    refinement: usize,
) -> Result<SigmaReport> {
    same3(s.complex(), theta.complex(), mu.complex())?;
    let r = s.complex().refine_uniform(refinement)?;
    let (sr, tr, mr) = (s.refine(&r), theta.refine(&r), mu.refine(&r));
    let feasible = sr.feasible_node_sets();
    if let Some(k) = feasible.iter().position(|f| f.is_empty()) {
        return Err(Error::Infeasible { node: k });
    }
    let coeffs = tr.node_coefficients(&mr)?;
    let lp = ExtReal::sum(coeffs.iter().zip(&feasible).map(|(&c, f)| maximize_on(c, *f)))?;

    let cx = s.complex();
    let mut formula = ExtReal::zero();
    for i in 0..cx.num_cells() {
        let d = theta.density()[i];
        if d == 0.0 {
            continue;
        }
        let (t0, t1) = cx.cell(i);
        let mid = 0.5 * (t0 + t1);
        let part = match s.cells()[i] {
            None => ExtReal::NegInf,
            Some(b) => {
                let edge = if d > 0.0 { b.upper } else { b.lower };
                // ∫ edge(t) dt = len * edge(mid) for affine edges.
                ExtReal::from_float(d * edge.eval(mid)).scale_nonneg(mu.cell_mass(i))
            }
        };
        formula = formula.checked_add(part)?;
    }
    for &(k, w) in theta.atoms() {
        formula = formula.checked_add(support_value(&s.node_value(k), w.signum()).scale_nonneg(w.abs()))?;
    }
    Ok(SigmaReport { lp, formula })
}

/// Weights `(near, far)` of the linear interpolant of the endpoint values in
/// `∫ g(t) / s(t) dt` over a sub-cell whose distances to the pole run from
/// `sn` to `sf`. The near weight is infinite when the pole is an endpoint.
pub fn inverse_trapezoid_weights(sn: f64, sf: f64) -> (f64, f64) {
    let len = sf - sn;
    if sn <= 0.0 {
        return (f64::INFINITY, 1.0);
    }
    let x = len / sn;
    let log = x.ln_1p();
    // far = 1 - ln(1 + x) / x, with a series where that cancels.
    let far = if x < 1e-3 {
        x / 2.0 - x * x / 3.0 + x * x * x / 4.0 - x * x * x * x / 5.0
    } else {
        1.0 - log / x
    };
    (log - far, far)
}

/// Per-node terms of the trapezoidal upper model: `(coefficient, function)`
/// pairs plus the zero-set constraint where a weighted cell has its pole.
fn trapezoid_terms(h: &IntegrandField, mu: &BaseMeasure<f64>) -> Vec<Vec<(f64, PolyConvexFn<f64>)>> {
    let cx = h.complex();
    let mut terms = vec![Vec::new(); cx.num_nodes()];
    for i in 0..cx.num_cells() {
        let Some(c) = &h.cells()[i] else { continue };
        let rho = mu.density()[i];
        let (t0, t1) = cx.cell(i);
        match c.weight {
            Weight::Unit => {
                let w = 0.5 * rho * (t1 - t0);
                terms[i].push((w, c.f.clone()));
                terms[i + 1].push((w, c.f.clone()));
            }
            Weight::InverseDistance { pole } => {
                let (s0, s1) = ((t0 - pole).abs(), (t1 - pole).abs());
                let (near_k, far_k, sn, sf) = if s0 <= s1 { (i, i + 1, s0, s1) } else { (i + 1, i, s1, s0) };
                let (wn, wf) = inverse_trapezoid_weights(sn, sf);
                if wn.is_finite() {
                    terms[near_k].push((rho * wn, c.f.clone()));
                }
                terms[far_k].push((rho * wf, c.f.clone()));
            }
        }
    }
    terms
}

/// Admissible node values: node domain, adjacent cell domains, pole zero sets.
fn node_bounds(h: &IntegrandField) -> Result<Vec<Interval<f64>>> {
    let cx = h.complex();
    let mut out = Vec::with_capacity(cx.num_nodes());
    for k in 0..cx.num_nodes() {
        let mut b = match &h.nodes()[k] {
            Some(f) => f.dom(),
            None => return Err(Error::Infeasible { node: k }),
        };
        for i in [k.wrapping_sub(1), k] {
            if i < cx.num_cells() {
                match &h.cells()[i] {
                    Some(c) => b = b.intersect(&c.f.dom()),
                    None => return Err(Error::Infeasible { node: k }),
                }
            }
        }
        out.push(b);
    }
    for (k, z) in h.pole_constraints() {
        out[k] = out[k].intersect(&z);
    }
    if let Some(k) = out.iter().position(|b| b.is_empty()) {
        return Err(Error::Infeasible { node: k });
    }
    Ok(out)
}

/// One node block of the epigraph program:
/// maximize `c v - Σ w_j z_j` with `z_j >= f_j(v)`, `v` in `bounds`.
fn node_block(c: f64, bounds: Interval<f64>, terms: &[(f64, PolyConvexFn<f64>)]) -> LinearProgram {
    let m = terms.len();
    let mut lp = LinearProgram::new(1 + m);
    lp.objective[0] = c;
    lp.lower[0] = bounds.lo();
    lp.upper[0] = bounds.hi();
    for (j, (w, f)) in terms.iter().enumerate() {
        lp.objective[1 + j] = -w;
        for p in f.pieces() {
            lp.add(vec![(1 + j, 1.0), (0, -p.slope)], Relation::Ge, p.intercept);
        }
    }
    lp
}

/// The epigraph program of the trapezoidal model on the complex of `h`,
/// as independent node blocks.
pub fn primal_blocks(
    h: &IntegrandField,
    theta: &SignedMeasure<f64>,
    mu: &BaseMeasure<f64>,
) -> Result<Vec<LinearProgram>> {
    same3(h.complex(), theta.complex(), mu.complex())?;
    let bounds = node_bounds(h)?;
    let terms = trapezoid_terms(h, mu);
    let coeffs = theta.node_coefficients(mu)?;
    Ok((0..h.complex().num_nodes())
        .map(|k| node_block(coeffs[k], bounds[k], &terms[k]))
        .collect())
}

/// `sup_y <y, θ> - Î_h(y)` over piecewise-linear `y` on the complex of `h`
/// with node values in `D`.
pub fn primal_conjugate_on(
    h: &IntegrandField,
    theta: &SignedMeasure<f64>,
    mu: &BaseMeasure<f64>,
) -> Result<ExtReal<f64>> {
    let mut total = ExtReal::zero();
    for (k, lp) in primal_blocks(h, theta, mu)?.iter().enumerate() {
        let v = match lp.solve() {
            LpOutcome::Optimal { value, .. } => ExtReal::Finite(value),
            LpOutcome::Unbounded => ExtReal::PosInf,
            LpOutcome::Infeasible => return Err(Error::Infeasible { node: k }),
        };
        total = total.checked_add(v)?;
    }
    Ok(total)
}

/// [`primal_conjugate_on`] after merging the uniform `refinement`-cell grid
/// into the complex.
pub fn primal_conjugate(
    h: &IntegrandField,
    theta: &SignedMeasure<f64>,
    mu: &BaseMeasure<f64>,
    refinement: usize,
) -> Result<ExtReal<f64>> {
    same3(h.complex(), theta.complex(), mu.complex())?;
    let r = h.complex().refine_uniform(refinement)?;
    primal_conjugate_on(&h.refine(&r), &theta.refine(&r), &mu.refine(&r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityLevel {
    pub refinement: usize,
    pub cells: usize,
    pub primal: ExtReal<f64>,
    /// `J - primal` when defined.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    pub levels: Vec<DualityLevel>,
    pub j: ExtReal<f64>,
    /// Primal values nondecreasing over the given refinements.
    pub monotone: bool,
    /// Final primal value not above `J`.
    pub bounded_by_j: bool,
    pub domain_isc: Verdict,
    /// `None` when `C(D)` is empty.
    pub closure: Option<ClosureReport>,
}

pub fn duality_gap(
    h: &IntegrandField,
    theta: &SignedMeasure<f64>,
    mu: &BaseMeasure<f64>,
    refinements: &[usize],
) -> Result<DualityReport> {
    let j = eval_j(h, theta, mu)?;
    let mut levels = Vec::with_capacity(refinements.len());
    for &n in refinements {
        let r = h.complex().refine_uniform(n)?;
        // Sup over an empty C(D).
        let primal = match primal_conjugate_on(&h.refine(&r), &theta.refine(&r), &mu.refine(&r)) {
            Err(Error::Infeasible { .. }) => ExtReal::NegInf,
            other => other?,
        };
        let gap = j.checked_sub(primal).ok().and_then(|g| g.finite());
        levels.push(DualityLevel {
            refinement: n,
            cells: r.complex.num_cells(),
            primal,
            gap,
        });
    }
    let monotone = levels.windows(2).all(|w| match (w[0].primal, w[1].primal) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => b >= a - 1e-12 * (1.0 + a.abs()),
        (a, b) => a <= b,
    });
    let bounded_by_j = levels.last().map_or(true, |l| match (l.primal, j) {
        (ExtReal::Finite(p), ExtReal::Finite(jv)) => p <= jv + 1e-9 * (1.0 + jv.abs()),
        (p, jv) => p <= jv,
    });
    let dmap = h.domain_map();
    let domain_isc = dmap.clone().into_union().is_isc();
    let closure_n = refinements.iter().copied().min().unwrap_or(1);
    let closure = match check_closure_condition(h, mu, closure_n) {
        Err(Error::Precondition(_)) => None,
        other => Some(other?),
    };
    Ok(DualityReport {
        levels,
        j,
        monotone,
        bounded_by_j,
        domain_isc,
        closure,
    })
}

/// Outcome of the pointwise subdifferential test and the Fenchel equality.
#[derive(Debug, Clone, PartialEq)]
pub struct SdReport {
    pub in_domain: bool,
    pub cell_failures: Vec<usize>,
    pub atom_failures: Vec<usize>,
    pub pointwise: bool,
    pub ih: ExtReal<f64>,
    pub j: ExtReal<f64>,
    pub pairing: f64,
    /// `I_h(y) + δ_{C(D)}(y) + J(θ) - <y, θ>`; `None` when undefined.
    pub fenchel_gap: Option<ExtReal<f64>>,
}

/// Sorted points of `[t0, t1]` where `y` crosses a kink of `f`.
fn segments(y: Affine<f64>, f: &PolyConvexFn<f64>, t0: f64, t1: f64) -> Vec<f64> {
    let mut pts = vec![t0];
    if y.slope != 0.0 {
        let mut inner: Vec<f64> = f
            .breakpoints()
            .iter()
            .map(|&x| (x - y.intercept) / y.slope)
            .filter(|&t| t > t0 && t < t1)
            .collect();
        inner.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        pts.extend(inner);
    }
    pts.push(t1);
    pts
}

/// Does `d ∈ ∂h_t(y_t)` hold for almost every `t` in the cell?
fn cell_sd_holds(c: &CellIntegrand, y: Affine<f64>, d: f64, t0: f64, t1: f64) -> bool {
    let pts = segments(y, &c.f, t0, t1);
    pts.windows(2).all(|w| {
        let mid = 0.5 * (w[0] + w[1]);
        let sub = c.f.subdifferential_tol(y.eval(mid), MEMBER_TOL);
        match c.weight {
            Weight::Unit => sub.contains_tol(d, MEMBER_TOL),
            // ∂h_t(x) = ∂base(x) / s, so the test is d s ∈ ∂base(y_t), linear in s.
            Weight::InverseDistance { pole } => [w[0], w[1]]
                .iter()
                .all(|&t| sub.contains_tol(d * (t - pole).abs(), MEMBER_TOL)),
        }
    })
}

pub fn check_sd(
    h: &IntegrandField,
    y: &PlFunction<f64>,
    theta: &SignedMeasure<f64>,
    mu: &BaseMeasure<f64>,
) -> Result<SdReport> {
    same3(h.complex(), y.complex(), mu.complex())?;
    h.complex().check_same(theta.complex())?;
    let cx = h.complex();
    let dmap = h.domain_map();
    let (_, in_domain) = dmap.selection_flags(y, MEMBER_TOL)?;

    let mut cell_failures = Vec::new();
    for i in 0..cx.num_cells() {
        let (t0, t1) = cx.cell(i);
        let ok = match &h.cells()[i] {
            None => false,
            Some(c) => cell_sd_holds(c, y.cell_affine(i), theta.density()[i], t0, t1),
        };
        if !ok {
            cell_failures.push(i);
        }
    }
    let mut atom_failures = Vec::new();
    for &(k, w) in theta.atoms() {
        let ok = match &h.nodes()[k] {
            None => false,
            Some(f) => normal_cone_tol(&f.dom(), y.value(k), MEMBER_TOL).contains(w.signum()),
        };
        if !ok {
            atom_failures.push(k);
        }
    }
    let ih = eval_ih(h, y, mu)?;
    let j = eval_j(h, theta, mu)?;
    let pairing = theta.pair(y, mu)?;
    let indicator = if in_domain { ExtReal::zero() } else { ExtReal::PosInf };
    let fenchel_gap = ih
        .checked_add(indicator)
        .and_then(|s| s.checked_add(j))
        .and_then(|s| s.checked_sub(ExtReal::Finite(pairing)))
        .ok();
    Ok(SdReport {
        pointwise: in_domain && cell_failures.is_empty() && atom_failures.is_empty(),
        in_domain,
        cell_failures,
        atom_failures,
        ih,
        j,
        pairing,
        fenchel_gap,
    })
}

/// Witnesses of properness of `I_h + δ_{C(D)}` and `J_{h*}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Properness {
    Proper {
        y_bar: PlFunction<f64>,
        /// Cell values of `x̄`.
        x_bar: Vec<f64>,
        /// `∫ max(h*_t(x̄_t), h_t(ȳ_t)) dμ`.
        alpha: f64,
        ih: f64,
        j: f64,
    },
    Improper {
        reason: String,
    },
}

/// `∫_{t0}^{t1} max(c, h_t(y_t)) dt` for a unit-weight cell.
fn integrate_max_const(f: &PolyConvexFn<f64>, y: Affine<f64>, c: f64, t0: f64, t1: f64) -> f64 {
    let pts = segments(y, f, t0, t1);
    let mut total = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ga, gb) = (f.max_piece(y.eval(a)).max(c), f.max_piece(y.eval(b)).max(c));
        let (ra, rb) = (f.max_piece(y.eval(a)), f.max_piece(y.eval(b)));
        if (ra - c) * (rb - c) < 0.0 {
            // Crossing inside: split there.
            let x = a + (c - ra) / (rb - ra) * (b - a);
            total += 0.5 * (ga + c) * (x - a) + 0.5 * (c + gb) * (b - x);
        } else {
            total += 0.5 * (ga + gb) * (b - a);
        }
    }
    total
}

pub fn check_proper(h: &IntegrandField, mu: &BaseMeasure<f64>) -> Result<Properness> {
    h.complex().check_same(mu.complex())?;
    let cx = h.complex();
    let improper = |reason: String| Ok(Properness::Improper { reason });
    if let Some(i) = h.cells().iter().position(|c| c.is_none()) {
        return improper(format!("cell {i} has empty domain"));
    }
    let mut feasible = h.domain_map().feasible_node_sets();
    for (k, z) in h.pole_constraints() {
        feasible[k] = feasible[k].intersect(&z);
    }
    if let Some(k) = feasible.iter().position(|f| f.is_empty()) {
        return improper(format!("no continuous selection of the domain through node {k}"));
    }
    let values = feasible.iter().map(|f| f.clamp(0.0).expect("nonempty")).collect();
    let y_bar = PlFunction::new(cx.clone(), values)?;
    let Some(ih) = eval_ih(h, &y_bar, mu)?.finite() else {
        return improper("the integral is infinite along every tested selection".into());
    };

    let mut x_bar = Vec::with_capacity(cx.num_cells());
    let mut alpha = 0.0;
    for i in 0..cx.num_cells() {
        let c = h.cells()[i].as_ref().expect("checked above");
        let (t0, t1) = cx.cell(i);
        let rho = mu.density()[i];
        match c.weight {
            Weight::Unit => {
                let conj = c.f.conjugate();
                let x = conj.dom().clamp(0.0).expect("proper conjugate");
                let cval = conj.eval(x).finite().expect("in domain");
                x_bar.push(x);
                alpha += rho * integrate_max_const(&c.f, y_bar.cell_affine(i), cval, t0, t1);
            }
            Weight::InverseDistance { .. } => {
                // h*_t(0) = 0 <= h_t(ȳ_t).
                x_bar.push(0.0);
                alpha += rho * c.integrate_along(y_bar.cell_affine(i), t0, t1).finite().expect("finite ih");
            }
        }
    }
    let theta = SignedMeasure::new(cx.clone(), x_bar.clone(), Vec::new())?;
    let Some(j) = eval_j(h, &theta, mu)?.finite() else {
        return improper("conjugate integral infinite at the subgradient selection".into());
    };
    Ok(Properness::Proper {
        y_bar,
        x_bar,
        alpha,
        ih,
        j,
    })
}

/// Exhaustive maximum of `<y, θ> - Î_h(y)` over node values on
/// `lo + (hi - lo) j / (steps - 1)`, respecting the domain constraints.
pub fn brute_force_primal(
    h: &IntegrandField,
    theta: &SignedMeasure<f64>,
    mu: &BaseMeasure<f64>,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<f64> {
    same3(h.complex(), theta.complex(), mu.complex())?;
    let cx = h.complex();
    let n = cx.num_nodes();
    if n > 6 || steps > 41 || steps < 2 {
        return Err(Error::BudgetExceeded(format!("{n} nodes x {steps} steps")));
    }
    if (steps as f64).powi(n as i32) > 5e7 {
        return Err(Error::BudgetExceeded(format!("{steps}^{n} tuples")));
    }
    let grid: Vec<f64> = (0..steps)
        .map(|j| lo + (hi - lo) * j as f64 / (steps - 1) as f64)
        .collect();
    let poles = h.pole_constraints();
    // Per-node admissible grid indices, straight from the definitions.
    let admissible: Vec<Vec<usize>> = (0..n)
        .map(|k| {
            (0..steps)
                .filter(|&j| {
                    let v = grid[j];
                    let node_ok = h.nodes()[k].as_ref().map_or(false, |f| f.eval(v).is_finite());
                    let cells_ok = [k.wrapping_sub(1), k]
                        .iter()
                        .filter(|&&i| i < cx.num_cells())
                        .all(|&i| h.cells()[i].as_ref().map_or(false, |c| c.f.eval(v).is_finite()));
                    let pole_ok = poles
                        .iter()
                        .filter(|p| p.0 == k)
                        .all(|p| p.1.contains_tol(v, 1e-12));
                    node_ok && cells_ok && pole_ok
                })
                .collect()
        })
        .collect();
    if let Some(k) = admissible.iter().position(|a| a.is_empty()) {
        return Err(Error::Infeasible { node: k });
    }

    let model = |vals: &[f64]| -> f64 {
        let mut total = 0.0;
        for i in 0..cx.num_cells() {
            let c = h.cells()[i].as_ref().expect("admissible");
            let (t0, t1) = cx.cell(i);
            let (g0, g1) = (c.f.max_piece(vals[i]), c.f.max_piece(vals[i + 1]));
            let part = match c.weight {
                Weight::Unit => 0.5 * (g0 + g1) * (t1 - t0),
                Weight::InverseDistance { pole } => {
                    let (s0, s1) = ((t0 - pole).abs(), (t1 - pole).abs());
                    let (sn, gn, sf, gf) = if s0 <= s1 { (s0, g0, s1, g1) } else { (s1, g1, s0, g0) };
                    let b = (gf - gn) / (sf - sn);
                    inverse_linear_integral(gn - b * sn, b, sn, sf)
                        .finite()
                        .expect("pole value is zero")
                }
            };
            total += mu.density()[i] * part;
        }
        total
    };

    let mut idx = vec![0usize; n];
    let mut best = f64::NEG_INFINITY;
    let mut vals = vec![0.0; n];
    loop {
        for k in 0..n {
            vals[k] = grid[admissible[k][idx[k]]];
        }
        let y = PlFunction::new(cx.clone(), vals.clone())?;
        let v = theta.pair(&y, mu)? - model(&vals);
        if v > best {
            best = v;
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(best);
            }
            idx[k] += 1;
            if idx[k] < admissible[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
