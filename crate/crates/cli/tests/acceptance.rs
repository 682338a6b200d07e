//! Acceptance criteria 1-10, one PASS/FAIL line each.

use std::process::{Command, ExitCode};
use std::time::Instant;

use intconj::convex::support_function;
use intconj::corpus::{optimal_pair, preservation_case, random_poly_fn, rng, selection_case, support_case};
use intconj::functionals::{brute_force_primal, check_sd, duality_gap, eval_j, primal_conjugate, primal_conjugate_on, sigma_cs};
use intconj::regularity::{check_closure_condition, check_ic_condition, is_mu_continuous, is_tau_full, mu_selection_check};
use intconj::{BaseMeasure, CellComplex, ExtReal, Interval, IntervalMap, PlFunction, PolyConvexFn, SignedMeasure};
use intconj_cli::fixtures;
use intconj_cli::Problem;

type Outcome = Result<String, String>;

fn corpus(seed: u64, n: usize) -> Vec<PolyConvexFn<f64>> {
    let mut r = rng(seed);
    (0..n).map(|_| random_poly_fn(&mut r)).collect()
}

fn objective(f: &PolyConvexFn<f64>, v: f64, x: f64) -> f64 {
    match f.eval(x) {
        ExtReal::Finite(fx) => v * x - fx,
        _ => f64::NEG_INFINITY,
    }
}

/// Grid sup over `[-10, 10]` at step 1e-4, with a ternary polish around the
/// best grid point (the objective is concave).
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
        let (m1, m2) = (a + (b - a) / 3.0, b - (b - a) / 3.0);
        if objective(f, v, m1) < objective(f, v, m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    best.0.max(objective(f, v, 0.5 * (a + b)))
}

fn c1() -> Outcome {
    let start = Instant::now();
    let fs = corpus(101, 500);
    let mut worst: f64 = 0.0;
    for (i, f) in fs.iter().enumerate() {
        let g = f.conjugate();
        if !g.conjugate().approx_eq(f, 1e-12) {
            return Err(format!("case {i}: biconjugate differs from {f}"));
        }
        let d = g.dom();
        let (lo, hi) = (d.lo().max(-5.0), d.hi().min(5.0));
        for s in [0.1, 0.5, 0.9] {
            let v = lo + s * (hi - lo);
            if let ExtReal::Finite(gv) = g.eval(v) {
                worst = worst.max((gv - grid_sup(f, v)).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if worst > 1e-6 || secs >= 5.0 {
        return Err(format!("max grid deviation {worst:.3e}, {secs:.2} s"));
    }
    Ok(format!("500 functions, max grid deviation {worst:.3e}, {secs:.2} s"))
}

fn c2() -> Outcome {
    for (i, f) in corpus(101, 500).iter().enumerate() {
        let s = support_function(&f.conjugate().dom()).map_err(|e| e.to_string())?;
        if !f.recession().approx_eq(&s, 1e-12) {
            return Err(format!("case {i}: {} vs {s}", f.recession()));
        }
    }
    Ok("500 functions".into())
}

fn c3() -> Outcome {
    let vs: Vec<f64> = (0..1000).map(|k| -6.0 + 12.0 * k as f64 / 999.0).collect();
    let mut worst: f64 = 0.0;
    for (i, f) in corpus(101, 500).iter().enumerate() {
        let g = f.conjugate();
        let regs: Vec<PolyConvexFn<f64>> =
            [0.1, 0.5, 1.0].iter().map(|&e| f.epsilon_regularize(e)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for (eps, fe) in [0.1, 0.5, 1.0].iter().zip(&regs) {
            let ge = fe.conjugate();
            for &v in &vs {
                match (ge.eval(v), g.eval(v)) {
                    (ExtReal::Finite(a), ExtReal::Finite(b)) => worst = worst.max((a - (b + eps * v.abs())).abs()),
                    (a, b) if a == b => {}
                    (a, b) => return Err(format!("case {i}, eps {eps}, v {v}: {a} vs {b}")),
                }
            }
        }
        for &x in &vs {
            let (a, b, c) = (regs[0].eval(x), regs[1].eval(x), regs[2].eval(x));
            if !(c <= b && b <= a && a <= f.eval(x)) {
                return Err(format!("case {i}: not monotone in eps at {x}"));
            }
        }
    }
    if worst > 1e-9 {
        return Err(format!("max deviation {worst:.3e}"));
    }
    Ok(format!("500 functions x 3 radii x 1000 points, max deviation {worst:.3e}"))
}

fn c4() -> Outcome {
    let mut r = rng(104);
    for i in 0..200 {
        let c = preservation_case(&mut r);
        let checks = [
            ("affine", c.s1.affine_image(c.c, c.m).is_isc().holds),
            ("hull", c.s1.hull().into_union().is_isc().holds),
            ("sum", c.s1.sum(&c.s2).map_or(false, |m| m.is_isc().holds)),
            ("intersect-margin", c.convex.intersect(&c.margin).map_or(false, |m| m.is_isc().holds)),
            ("intersect-open", c.s1.intersect_open(&c.open).map_or(false, |m| m.is_isc().holds)),
            ("union", c.s1.union(&c.s2).map_or(false, |m| m.is_isc().holds)),
            ("product", c.s1.product(&c.s2).map_or(false, |b| b.is_isc().holds)),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(format!("case {i}: {name} not isc"));
        }
    }
    Ok("200 cases x 7 operations".into())
}

fn c5() -> Outcome {
    let start = Instant::now();
    let mut r = rng(105);
    let mut worst = (f64::INFINITY, f64::NEG_INFINITY);
    let mut atoms = 0;
    for i in 0..50 {
        let c = support_case(&mut r);
        atoms += c.theta.atoms().len();
        let reps = [64, 512, 4096]
            .iter()
            .map(|&n| sigma_cs(&c.map, &c.theta, &c.mu, n))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("case {i}: {e}"))?;
        if !reps.windows(2).all(|w| w[1].lp >= w[0].lp || w[1].lp.approx_eq(w[0].lp, 1e-12)) {
            return Err(format!("case {i}: lp not monotone"));
        }
        let g = reps[2].gap().ok_or(format!("case {i}: gap undefined"))?;
        worst = (worst.0.min(g), worst.1.max(g));
        if !(-1e-9..=1e-3).contains(&g) {
            return Err(format!("case {i}: gap {g:.3e}"));
        }
    }
    let cx = CellComplex::new(vec![0.0, 0.5, 1.0]).map_err(|e| e.to_string())?;
    let pinch = IntervalMap::constant(cx.clone(), Interval::point(0.0))
        .with_node(1, Interval::new(0.0, 1.0).map_err(|e| e.to_string())?);
    let atom = SignedMeasure::new(cx.clone(), vec![0.0, 0.0], vec![(1, 1.0)]).map_err(|e| e.to_string())?;
    let leb = BaseMeasure::lebesgue(cx);
    for n in [2, 8, 64, 512, 4096] {
        let g = sigma_cs(&pinch, &atom, &leb, n).map_err(|e| e.to_string())?.gap();
        if !g.map_or(false, |g| (g - 1.0).abs() <= 1e-9) {
            return Err(format!("pinch gap {g:?} at {n}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 120.0 {
        return Err(format!("{secs:.1} s"));
    }
    Ok(format!(
        "50 maps ({atoms} atoms), gap range [{:.2e}, {:.2e}] at 4096, pinch gap 1 at 5 levels, {secs:.2} s",
        worst.0, worst.1
    ))
}

fn load(name: &str) -> Result<Problem, String> {
    let f = fixtures::embedded()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or(format!("no fixture {name}"))?;
    f.parse().and_then(|p| p.build()).map_err(|e| e.to_string())
}

fn c6() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let p = load(&format!("regular_{k:02}"))?;
        let h = p.field.as_ref().ok_or("no integrand")?;
        let (_, th) = p.measure(Some("theta")).map_err(|e| e.to_string())?;
        let d = duality_gap(h, th, &p.mu, &[64, 512, 4096]).map_err(|e| e.to_string())?;
        let gap = d.levels.last().and_then(|l| l.gap).ok_or(format!("regular_{k:02}: gap undefined"))?;
        worst = worst.max(gap.abs());
        if gap.abs() > 1e-3 || !d.monotone {
            return Err(format!("regular_{k:02}: gap {gap:.3e}, monotone {}", d.monotone));
        }
    }

    let spike = load("spike")?;
    let h = spike.field.as_ref().ok_or("no integrand")?;
    let (_, th) = spike.measure(Some("spike")).map_err(|e| e.to_string())?;
    let rf = h.complex().refine_uniform(4).map_err(|e| e.to_string())?;
    let (h5, th5, mu5) = (h.refine(&rf), th.refine(&rf), spike.mu.refine(&rf));
    let lp = primal_conjugate_on(&h5, &th5, &mu5).map_err(|e| e.to_string())?.finite().ok_or("lp infinite")?;
    let brute = brute_force_primal(&h5, &th5, &mu5, 0.0, 1.0, 21).map_err(|e| e.to_string())?;
    if (lp - brute).abs() > 1e-9 {
        return Err(format!("5-node brute force {brute} vs lp {lp}"));
    }

    let inv = load("inverse_distance")?;
    let h = inv.field.as_ref().ok_or("no integrand")?;
    let (_, th) = inv.measure(Some("atom0")).map_err(|e| e.to_string())?;
    let closure = check_closure_condition(h, &inv.mu, 64).map_err(|e| e.to_string())?;
    let j = eval_j(h, th, &inv.mu).map_err(|e| e.to_string())?;
    let primal = primal_conjugate(h, th, &inv.mu, 512).map_err(|e| e.to_string())?;
    if closure.holds || j != ExtReal::PosInf || primal > ExtReal::zero() {
        return Err(format!("inverse distance: closure {}, J {j}, primal {primal}", closure.holds));
    }

    let non = load("non_isc_domain")?;
    let isc = non.field.as_ref().ok_or("no integrand")?.domain_map().into_union().is_isc();
    if isc.holds {
        return Err("non-isc fixture reported isc".into());
    }
    Ok(format!(
        "10 regular fixtures, max |gap| {worst:.3e}; brute force {brute} = lp {lp}; inverse distance J = inf, primal {primal}; non-isc flagged at {:?}",
        isc.violations
    ))
}

fn c7() -> Outcome {
    let mut r = rng(107);
    let mut perturbed = 0;
    let mut worst: f64 = 0.0;
    let fenchel = |rep: &intconj::functionals::SdReport| match rep.fenchel_gap {
        Some(ExtReal::Finite(g)) => Some(g),
        _ => None,
    };
    for i in 0..30 {
        let p = optimal_pair(&mut r);
        let rep = check_sd(&p.h, &p.y, &p.theta, &p.mu).map_err(|e| e.to_string())?;
        let g = fenchel(&rep).ok_or(format!("case {i}: Fenchel gap undefined"))?;
        worst = worst.max(g.abs());
        if !rep.pointwise || g.abs() > 1e-8 {
            return Err(format!("case {i}: pointwise {}, gap {g:.3e}", rep.pointwise));
        }
        let cx = p.y.complex().clone();
        let mut variants = Vec::new();
        for k in 0..cx.num_nodes() {
            let mut v = p.y.values().to_vec();
            v[k] += 0.1;
            variants.push((PlFunction::new(cx.clone(), v).map_err(|e| e.to_string())?, p.theta.clone()));
        }
        for c in 0..cx.num_cells() {
            let mut d = p.theta.density().to_vec();
            d[c] += 0.1;
            let th = SignedMeasure::new(cx.clone(), d, p.theta.atoms().to_vec()).map_err(|e| e.to_string())?;
            variants.push((p.y.clone(), th));
        }
        for (y, th) in variants {
            perturbed += 1;
            let rep = check_sd(&p.h, &y, &th, &p.mu).map_err(|e| e.to_string())?;
            let equality = fenchel(&rep).map_or(false, |g| g.abs() <= 1e-8);
            if rep.pointwise || equality {
                return Err(format!("case {i}: perturbation passed (pointwise {}, Fenchel {equality})", rep.pointwise));
            }
        }
    }
    Ok(format!("30 pairs, max Fenchel gap {worst:.3e}; {perturbed} perturbations fail both tests"))
}

fn c8() -> Outcome {
    let mut r = rng(108);
    let (mut applicable, mut mu_selections, mut drawn) = (0, 0, 0);
    while applicable < 1000 {
        drawn += 1;
        let c = selection_case(&mut r);
        let regular = is_mu_continuous(&c.map, &c.mu).map_err(|e| e.to_string())?.holds || is_tau_full(&c.map).holds;
        if !regular {
            continue;
        }
        applicable += 1;
        let (mu_sel, sel) = mu_selection_check(&c.y, &c.map, &c.mu).map_err(|e| e.to_string())?;
        if mu_sel {
            mu_selections += 1;
            if !sel {
                return Err(format!("pair {applicable}: mu-selection but not a selection"));
            }
        }
    }
    let cx = CellComplex::new(vec![0.0, 0.5, 1.0]).map_err(|e| e.to_string())?;
    let down = IntervalMap::constant(cx.clone(), Interval::new(0.0, 1.0).map_err(|e| e.to_string())?)
        .with_node(1, Interval::point(0.0))
        .into_union();
    let control = mu_selection_check(&PlFunction::constant(cx.clone(), 0.7), &down, &BaseMeasure::lebesgue(cx))
        .map_err(|e| e.to_string())?;
    if control != (true, false) {
        return Err(format!("pinch-down control gave {control:?}"));
    }
    Ok(format!(
        "1000 pairs (of {drawn} drawn), {mu_selections} mu-selections, all selections; pinch-down control (true, false)"
    ))
}

fn c9() -> Outcome {
    let (mut tested, mut premise) = (0, 0);
    for f in fixtures::embedded() {
        let p = f.parse().and_then(|p| p.build()).map_err(|e| format!("{}: {e}", f.name))?;
        let Some(h) = &p.field else { continue };
        tested += 1;
        let isc = h.domain_map().into_union().is_isc().holds;
        let ic = check_ic_condition(h, &p.mu).map_or(false, |r| r.holds);
        if isc && ic {
            premise += 1;
            let closure = check_closure_condition(h, &p.mu, 64).map_err(|e| e.to_string())?;
            if !closure.holds {
                return Err(format!("{}: ic and isc hold, closure fails", f.name));
            }
        }
    }
    Ok(format!("{tested} fixtures with integrands, {premise} satisfy the premise, 0 exceptions"))
}

fn c10() -> Outcome {
    let start = Instant::now();
    let dir = std::env::temp_dir();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_intconj"))
            .args(["selftest", "--seed", "0", "--out"])
            .arg(&dir)
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    let secs = start.elapsed().as_secs_f64();
    if a.status.code() != Some(0) {
        return Err(format!("selftest failed:\n{}", String::from_utf8_lossy(&a.stdout)));
    }
    if a.stdout != b.stdout {
        return Err("outputs differ".into());
    }
    if secs / 2.0 >= 300.0 {
        return Err(format!("{:.1} s per run", secs / 2.0));
    }
    Ok(format!("byte-identical ({} bytes), {:.2} s per run", a.stdout.len(), secs / 2.0))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("conjugation exactness", c1),
        ("recession equals support of conjugate domain", c2),
        ("regularization identity", c3),
        ("isc preservation", c4),
        ("support-function representation", c5),
        ("duality", c6),
        ("subdifferential equivalence", c7),
        ("mu-selections", c8),
        ("closure sufficiency", c9),
        ("selftest determinism", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
