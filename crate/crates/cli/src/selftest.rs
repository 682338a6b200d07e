//! Seeded property corpus over every module, plus the fixture expectations.
//! Output is a fixed-order text block with no timings, so two runs with the
//! same seed are byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use intconj::corpus::{
    duality_case, optimal_pair, preservation_case, random_poly_fn, rng, selection_case, support_case,
};
use intconj::functionals::{check_sd, duality_gap, eval_ih, eval_j, sigma_cs};
use intconj::regularity::{check_closure_condition, check_ic_condition, is_mu_continuous, is_tau_full, mu_selection_check};
use intconj::{ExtReal, Interval, IntervalMap, PlFunction, PolyConvexFn, SignedMeasure};
use serde_json::json;

use crate::fixtures::{self, Fixture};
use crate::report::write_file;
use crate::{check_expectations, CliError};

pub const FAMILIES: [&str; 8] = [
    "conjugate",
    "maps",
    "support",
    "subdiff",
    "selection",
    "duality",
    "fixtures",
    "ic-closure",
];

/// One failing instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub family: String,
    pub case: usize,
    pub detail: String,
    /// Fixture file for fixture failures.
    pub fixture: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyResult {
    pub family: String,
    pub instances: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub family: Option<String>,
    pub case: Option<usize>,
    pub fixtures: Vec<Fixture>,
}

impl Config {
    pub fn new(seed: u64) -> Self {
        Config {
            seed,
            family: None,
            case: None,
            fixtures: fixtures::embedded(),
        }
    }
}

struct Tally<'a> {
    name: &'a str,
    case_filter: Option<usize>,
    instances: usize,
    checks: usize,
    failures: Vec<Failure>,
}

impl<'a> Tally<'a> {
    fn new(name: &'a str, case_filter: Option<usize>) -> Self {
        Tally {
            name,
            case_filter,
            instances: 0,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn wants(&self, case: usize) -> bool {
        self.case_filter.map_or(true, |c| c == case)
    }

    fn check(&mut self, case: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure {
                family: self.name.to_string(),
                case,
                detail: detail(),
                fixture: None,
            });
        }
    }

    fn done(self) -> FamilyResult {
        FamilyResult {
            family: self.name.to_string(),
            instances: self.instances,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

fn family_seed(seed: u64, id: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ id
}

fn objective(f: &PolyConvexFn<f64>, v: f64, x: f64) -> f64 {
    match f.eval(x) {
        ExtReal::Finite(fx) => v * x - fx,
        _ => f64::NEG_INFINITY,
    }
}

/// Grid sup of `v x - f(x)` over `[-10, 10]`, step 1e-4, polished by a
/// ternary search around the best grid point.
pub fn grid_sup(f: &PolyConvexFn<f64>, v: f64) -> f64 {
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

fn conjugate_family(seed: u64, case: Option<usize>) -> FamilyResult {
    let mut t = Tally::new("conjugate", case);
    let mut r = rng(family_seed(seed, 1));
    for i in 0..500 {
        let f = random_poly_fn(&mut r);
        if !t.wants(i) {
            continue;
        }
        t.instances += 1;
        let g = f.conjugate();
        t.check(i, g.conjugate().approx_eq(&f, 1e-12), || format!("biconjugate differs: {f}"));
        let sigma = intconj::convex::support_function(&g.dom());
        t.check(i, sigma.map_or(false, |s| f.recession().approx_eq(&s, 1e-12)), || {
            format!("recession differs from the support function of dom f*: {f}")
        });
        let d = g.dom();
        let (lo, hi) = (d.lo().max(-5.0), d.hi().min(5.0));
        let v = 0.5 * (lo + hi);
        if let ExtReal::Finite(gv) = g.eval(v) {
            let gs = grid_sup(&f, v);
            t.check(i, (gv - gs).abs() <= 1e-6, || format!("f*({v}) = {gv}, grid sup {gs}: {f}"));
        }
        let regs: Vec<_> = [0.1, 0.5, 1.0].iter().map(|&e| (e, f.epsilon_regularize(e))).collect();
        for k in 0..20 {
            let v = -5.0 + 10.0 * k as f64 / 19.0;
            let base = g.eval(v);
            let mut prev = ExtReal::PosInf;
            for (eps, fe) in &regs {
                let Ok(fe) = fe else {
                    t.check(i, false, || format!("regularization failed: {f}"));
                    continue;
                };
                let lhs = fe.conjugate().eval(v);
                let rhs = match base {
                    ExtReal::Finite(b) => ExtReal::Finite(b + eps * v.abs()),
                    e => e,
                };
                t.check(i, lhs.approx_eq(rhs, 1e-9), || format!("eps {eps} at {v}: {lhs} vs {rhs}: {f}"));
                let x = v;
                let fx = fe.eval(x);
                t.check(i, fx <= prev, || format!("regularization not monotone at {x}: {f}"));
                prev = fx;
            }
        }
    }
    t.done()
}

fn maps_family(seed: u64, case: Option<usize>) -> FamilyResult {
    let mut t = Tally::new("maps", case);
    let mut r = rng(family_seed(seed, 2));
    for i in 0..200 {
        let c = preservation_case(&mut r);
        if !t.wants(i) {
            continue;
        }
        t.instances += 1;
        let outs = [
            ("affine", Ok(c.s1.affine_image(c.c, c.m))),
            ("hull", Ok(c.s1.hull().into_union())),
            ("sum", c.s1.sum(&c.s2)),
            ("union", c.s1.union(&c.s2)),
            ("intersect", c.convex.intersect(&c.margin)),
            ("intersect-open", c.s1.intersect_open(&c.open)),
        ];
        for (name, out) in outs {
            t.check(i, out.map_or(false, |m| m.is_isc().holds), || format!("{name} lost inner semicontinuity"));
        }
        t.check(i, c.s1.product(&c.s2).map_or(false, |b| b.is_isc().holds), || {
            "product lost inner semicontinuity".into()
        });
    }
    t.done()
}

fn support_family(seed: u64, case: Option<usize>) -> FamilyResult {
    let mut t = Tally::new("support", case);
    let mut r = rng(family_seed(seed, 3));
    for i in 0..50 {
        let c = support_case(&mut r);
        if !t.wants(i) {
            continue;
        }
        t.instances += 1;
        let reps: Vec<_> = [64, 512, 4096].iter().map(|&n| sigma_cs(&c.map, &c.theta, &c.mu, n)).collect();
        let ok = reps.iter().all(|r| r.is_ok());
        t.check(i, ok, || "sigma_cs failed".into());
        if !ok {
            continue;
        }
        let reps: Vec<_> = reps.into_iter().map(|r| r.expect("checked")).collect();
        let gap = reps[2].gap();
        t.check(i, gap.map_or(false, |g| (-1e-9..=1e-3).contains(&g)), || format!("gap {gap:?} at 4096"));
        let mono = reps.windows(2).all(|w| w[1].lp >= w[0].lp || w[1].lp.approx_eq(w[0].lp, 1e-12));
        t.check(i, mono, || "lp not monotone in refinement".into());
    }
    t.done()
}

fn fenchel_zero(h: &intconj::IntegrandField, y: &PlFunction<f64>, th: &SignedMeasure<f64>, mu: &intconj::BaseMeasure<f64>) -> bool {
    match (eval_ih(h, y, mu), eval_j(h, th, mu), th.pair(y, mu)) {
        (Ok(ExtReal::Finite(a)), Ok(ExtReal::Finite(b)), Ok(p)) => (a + b - p).abs() <= 1e-8,
        _ => false,
    }
}

fn subdiff_family(seed: u64, case: Option<usize>) -> FamilyResult {
    let mut t = Tally::new("subdiff", case);
    let mut r = rng(family_seed(seed, 4));
    for i in 0..30 {
        let p = optimal_pair(&mut r);
        if !t.wants(i) {
            continue;
        }
        t.instances += 1;
        let ok = check_sd(&p.h, &p.y, &p.theta, &p.mu).map_or(false, |s| s.pointwise);
        t.check(i, ok, || "pointwise test fails on an optimal pair".into());
        t.check(i, fenchel_zero(&p.h, &p.y, &p.theta, &p.mu), || "Fenchel gap above 1e-8".into());
        let cx = p.y.complex().clone();
        for k in 0..cx.num_nodes() {
            let mut vals = p.y.values().to_vec();
            vals[k] += 0.1;
            let y = PlFunction::new(cx.clone(), vals).expect("finite");
            let pw = check_sd(&p.h, &y, &p.theta, &p.mu).map_or(false, |s| s.pointwise);
            let fz = fenchel_zero(&p.h, &y, &p.theta, &p.mu);
            t.check(i, !pw && !fz, || format!("node {k} perturbation: pointwise {pw}, Fenchel {fz}"));
        }
        for c in 0..cx.num_cells() {
            let mut d = p.theta.density().to_vec();
            d[c] += 0.1;
            let th = SignedMeasure::new(cx.clone(), d, p.theta.atoms().to_vec()).expect("valid");
            let pw = check_sd(&p.h, &p.y, &th, &p.mu).map_or(false, |s| s.pointwise);
            let fz = fenchel_zero(&p.h, &p.y, &th, &p.mu);
            t.check(i, !pw && !fz, || format!("density {c} perturbation: pointwise {pw}, Fenchel {fz}"));
        }
    }
    t.done()
}

fn selection_family(seed: u64, case: Option<usize>) -> FamilyResult {
    let mut t = Tally::new("selection", case);
    let mut r = rng(family_seed(seed, 5));
    // Cases are numbered among the pairs where the theorem applies.
    let mut i = 0;
    while i < 1000 {
        let c = selection_case(&mut r);
        let regular = is_mu_continuous(&c.map, &c.mu).map_or(false, |v| v.holds) || is_tau_full(&c.map).holds;
        if !regular {
            continue;
        }
        i += 1;
        if !t.wants(i - 1) {
            continue;
        }
        t.instances += 1;
        let i = i - 1;
        match mu_selection_check(&c.y, &c.map, &c.mu) {
            Ok((mu_sel, sel)) => t.check(i, !mu_sel || sel, || "mu-selection is not a selection".into()),
            Err(e) => t.check(i, false, || e.to_string()),
        }
    }
    // Negative control: pinch-down with y = 0.7.
    if t.wants(1000) {
        let cx = intconj::CellComplex::new(vec![0.0, 0.5, 1.0]).expect("nodes");
        let map = IntervalMap::constant(cx.clone(), Interval::new(0.0, 1.0).expect("ordered"))
            .with_node(1, Interval::point(0.0))
            .into_union();
        let y = PlFunction::constant(cx.clone(), 0.7);
        let got = mu_selection_check(&y, &map, &intconj::BaseMeasure::lebesgue(cx));
        t.check(1000, got == Ok((true, false)), || format!("pinch-down control gave {got:?}"));
    }
    t.done()
}

fn duality_family(seed: u64, case: Option<usize>) -> FamilyResult {
    let mut t = Tally::new("duality", case);
    let mut r = rng(family_seed(seed, 6));
    for i in 0..10 {
        let c = duality_case(&mut r);
        if !t.wants(i) {
            continue;
        }
        t.instances += 1;
        match duality_gap(&c.h, &c.theta, &c.mu, &[64, 512, 4096]) {
            Ok(d) => {
                let gap = d.levels.last().and_then(|l| l.gap);
                t.check(i, gap.map_or(false, |g| g.abs() <= 1e-3), || format!("gap {gap:?} at 4096"));
                t.check(i, d.monotone, || "primal not monotone".into());
                t.check(i, d.bounded_by_j, || "primal above J".into());
            }
            Err(e) => t.check(i, false, || e.to_string()),
        }
    }
    t.done()
}

fn fixture_family(cfg: &Config) -> FamilyResult {
    let mut t = Tally::new("fixtures", cfg.case);
    for (i, f) in cfg.fixtures.iter().enumerate() {
        if !t.wants(i) {
            continue;
        }
        t.instances += 1;
        let fail = |detail: String| Failure {
            family: "fixtures".into(),
            case: i,
            detail,
            fixture: Some(f.origin.clone()),
        };
        match f.parse().and_then(|p| p.build()) {
            Err(e) => {
                t.checks += 1;
                t.failures.push(fail(e.to_string()));
            }
            Ok(p) => {
                let (n, failures) = check_expectations(&p);
                t.checks += n;
                if n == 0 {
                    t.failures.push(fail("fixture has no expectations".into()));
                }
                t.failures.extend(failures.into_iter().map(fail));
            }
        }
    }
    t.done()
}

/// On every fixture with an integrand: ic condition and isc domain imply
/// the closure condition.
fn ic_closure_family(cfg: &Config) -> FamilyResult {
    let mut t = Tally::new("ic-closure", cfg.case);
    for (i, f) in cfg.fixtures.iter().enumerate() {
        if !t.wants(i) {
            continue;
        }
        let Ok(p) = f.parse().and_then(|p| p.build()) else {
            continue;
        };
        let Some(h) = &p.field else { continue };
        t.instances += 1;
        let isc = h.domain_map().into_union().is_isc().holds;
        let ic = check_ic_condition(h, &p.mu).map_or(false, |r| r.holds);
        if isc && ic {
            let closure = check_closure_condition(h, &p.mu, 64).map_or(false, |r| r.holds);
            t.check(i, closure, || format!("{}: ic and isc hold but the closure condition fails", f.name));
        }
    }
    t.done()
}

pub fn run_families(cfg: &Config) -> Vec<FamilyResult> {
    let want = |name: &str| cfg.family.as_deref().map_or(true, |f| f == name);
    let mut out = Vec::new();
    for name in FAMILIES {
        if !want(name) {
            continue;
        }
        out.push(match name {
            "conjugate" => conjugate_family(cfg.seed, cfg.case),
            "maps" => maps_family(cfg.seed, cfg.case),
            "support" => support_family(cfg.seed, cfg.case),
            "subdiff" => subdiff_family(cfg.seed, cfg.case),
            "selection" => selection_family(cfg.seed, cfg.case),
            "duality" => duality_family(cfg.seed, cfg.case),
            "fixtures" => fixture_family(cfg),
            "ic-closure" => ic_closure_family(cfg),
            _ => unreachable!("listed family"),
        });
    }
    out
}

/// Runs the corpus, writes a reproducer for the first failure into `out`,
/// and returns the text report with the overall verdict.
pub fn selftest(cfg: &Config, out: &Path) -> Result<(String, bool), CliError> {
    if let Some(f) = &cfg.family {
        if !FAMILIES.contains(&f.as_str()) {
            return Err(CliError::Schema(format!("unknown family {f}")));
        }
    }
    let results = run_families(cfg);
    let mut text = String::new();
    writeln!(text, "selftest seed {}", cfg.seed).expect("string");
    for r in &results {
        writeln!(
            text,
            "{:<12} instances {:>5}  checks {:>6}  failures {}",
            r.family,
            r.instances,
            r.checks,
            r.failures.len()
        )
        .expect("string");
    }
    let first = results.iter().flat_map(|r| r.failures.iter()).next();
    let pass = first.is_none();
    if let Some(f) = first {
        let path = out.join("selftest-reproducer.json");
        let repro = json!({
            "seed": cfg.seed,
            "family": f.family,
            "case": f.case,
            "detail": f.detail,
            "fixture": f.fixture,
            "rerun": format!("intconj selftest --seed {} --family {} --case {}", cfg.seed, f.family, f.case),
        });
        std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
        write_file(&path, &(serde_json::to_string_pretty(&repro).expect("json") + "\n"))?;
        writeln!(text, "first failure: {} case {}: {}", f.family, f.case, f.detail).expect("string");
        if let Some(fx) = &f.fixture {
            writeln!(text, "fixture: {fx}").expect("string");
        }
        writeln!(text, "reproducer: {}", path.display()).expect("string");
    }
    writeln!(text, "result: {}", if pass { "pass" } else { "fail" }).expect("string");
    Ok((text, pass))
}
