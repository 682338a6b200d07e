//! Command dispatch. Every number in a report comes straight from the
//! library call it names.

use std::fmt;
use std::str::FromStr;

use intconj::functionals::{check_proper, check_sd, duality_gap, sigma_cs, Properness};
use intconj::regularity::{check_closure_condition, check_ic_condition, regularity_report};
use intconj::{PolyConvexFn, UnionMap, Verdict};
use serde_json::{json, Map, Value};

use crate::problem::Problem;
use crate::report::{ext, jext, jiv, jnum, num, Report};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Conjugate,
    Recession,
    CheckMap,
    Support,
    Duality,
    Subdiff,
    Proper,
    IcCheck,
    ClosureCheck,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Conjugate,
        Command::Recession,
        Command::CheckMap,
        Command::Support,
        Command::Duality,
        Command::Subdiff,
        Command::Proper,
        Command::IcCheck,
        Command::ClosureCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Conjugate => "conjugate",
            Command::Recession => "recession",
            Command::CheckMap => "check-map",
            Command::Support => "support",
            Command::Duality => "duality",
            Command::Subdiff => "subdiff",
            Command::Proper => "proper",
            Command::IcCheck => "ic-check",
            Command::ClosureCheck => "closure-check",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Schema(format!("unknown command {s}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub map: Option<String>,
    pub measure: Option<String>,
    pub function: Option<String>,
    pub grid: Vec<usize>,
    pub tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            map: None,
            measure: None,
            function: None,
            grid: vec![64],
            tol: 1e-9,
        }
    }
}

impl Options {
    /// Overrides from an expectation's `args` object.
    pub fn with_args(mut self, args: &serde_json::Map<String, Value>) -> Result<Self, CliError> {
        for (k, v) in args {
            let bad = || CliError::Schema(format!("bad expectation argument {k}: {v}"));
            match k.as_str() {
                "map" => self.map = Some(v.as_str().ok_or_else(bad)?.to_string()),
                "measure" => self.measure = Some(v.as_str().ok_or_else(bad)?.to_string()),
                "function" => self.function = Some(v.as_str().ok_or_else(bad)?.to_string()),
                "grid" => {
                    self.grid = v
                        .as_array()
                        .ok_or_else(bad)?
                        .iter()
                        .map(|n| n.as_u64().map(|n| n as usize).ok_or_else(bad))
                        .collect::<Result<_, _>>()?
                }
                "tol" => self.tol = v.as_f64().ok_or_else(bad)?,
                _ => return Err(bad()),
            }
        }
        Ok(self)
    }
}

pub fn run(cmd: Command, p: &Problem, o: &Options) -> Result<Report, CliError> {
    match cmd {
        Command::Conjugate => convex_table(p, cmd, |f| f.conjugate()),
        Command::Recession => convex_table(p, cmd, |f| f.recession()),
        Command::CheckMap => check_map(p, o),
        Command::Support => support(p, o),
        Command::Duality => duality(p, o),
        Command::Subdiff => subdiff(p, o),
        Command::Proper => proper(p),
        Command::IcCheck => ic_check(p),
        Command::ClosureCheck => closure_check(p, o),
    }
}

fn convex_table(p: &Problem, cmd: Command, op: impl Fn(&PolyConvexFn<f64>) -> PolyConvexFn<f64>) -> Result<Report, CliError> {
    if p.convex.is_empty() {
        return Err(CliError::Schema("problem has no convex functions".into()));
    }
    let mut rep = Report::new(&["function", "piece", "slope", "intercept", "dom_lo", "dom_hi"]);
    let mut fns = Map::new();
    for (name, f) in &p.convex {
        let g = op(f);
        let d = g.dom();
        for (i, a) in g.pieces().iter().enumerate() {
            rep.row(vec![name.clone(), i.to_string(), num(a.slope), num(a.intercept), num(d.lo()), num(d.hi())]);
        }
        let pieces: Vec<Value> = g.pieces().iter().map(|a| json!([jnum(a.slope), jnum(a.intercept)])).collect();
        fns.insert(name.clone(), json!({"dom": jiv(d), "pieces": pieces}));
    }
    rep.summary = json!({"command": cmd.name(), "functions": fns});
    Ok(rep)
}

fn times(s: &UnionMap<f64>, v: &Verdict) -> Value {
    json!(v.violations.iter().map(|&k| jnum(s.complex().node(k))).collect::<Vec<_>>())
}

fn check_map(p: &Problem, o: &Options) -> Result<Report, CliError> {
    let mut rep = Report::new(&[
        "map",
        "node",
        "t",
        "isc",
        "osc",
        "outer_mu_regular",
        "mu_continuous",
        "tau_full",
        "full_lsc",
    ]);
    let selected: Vec<(&str, &UnionMap<f64>)> = match &o.map {
        Some(n) => vec![p.map(Some(n))?],
        None => p.maps.iter().map(|(k, v)| (k.as_str(), v)).collect(),
    };
    if selected.is_empty() {
        return Err(CliError::Schema("problem has no maps".into()));
    }
    let mut maps = Map::new();
    for (name, s) in selected {
        let r = regularity_report(s, &p.mu)?;
        for (k, f) in r.nodes.iter().enumerate() {
            rep.row(vec![
                name.to_string(),
                k.to_string(),
                num(s.complex().node(k)),
                f.isc.to_string(),
                f.osc.to_string(),
                f.outer_mu_regular.to_string(),
                f.mu_continuous.to_string(),
                f.tau_full.to_string(),
                f.full_lsc.to_string(),
            ]);
        }
        let bad = |pick: fn(&intconj::regularity::NodeFlags) -> bool| Verdict::from_violations(
            r.nodes.iter().enumerate().filter(|(_, f)| !pick(f)).map(|(k, _)| k).collect(),
        );
        let mut entry = Map::new();
        for (key, pick) in [
            ("isc", (|f: &intconj::regularity::NodeFlags| f.isc) as fn(&_) -> bool),
            ("osc", |f| f.osc),
            ("outer_mu_regular", |f| f.outer_mu_regular),
            ("mu_continuous", |f| f.mu_continuous),
            ("tau_full", |f| f.tau_full),
            ("full_lsc", |f| f.full_lsc),
        ] {
            let v = bad(pick);
            entry.insert(key.into(), json!(v.holds));
            entry.insert(format!("{key}_violations"), times(s, &v));
        }
        maps.insert(name.to_string(), Value::Object(entry));
    }
    rep.summary = json!({"command": "check-map", "maps": maps});
    Ok(rep)
}

fn support(p: &Problem, o: &Options) -> Result<Report, CliError> {
    let (mname, s) = p.map(o.map.as_deref())?;
    let (tname, theta) = p.measure(o.measure.as_deref())?;
    let s = s.hull();
    let mut rep = Report::new(&["refinement", "lp", "formula", "gap"]);
    let mut levels = Vec::new();
    let mut last = None;
    let mut lps = Vec::new();
    for &n in &o.grid {
        let r = sigma_cs(&s, theta, &p.mu, n)?;
        let gap = r.gap();
        rep.row(vec![n.to_string(), ext(r.lp), ext(r.formula), gap.map_or("nan".into(), num)]);
        levels.push(json!({"refinement": n, "lp": jext(r.lp), "formula": jext(r.formula), "gap": gap.map(jnum)}));
        if let Some(g) = gap {
            if g < -o.tol {
                rep.breach = Some(format!("lp exceeds formula by {} at refinement {n}", -g));
            }
        }
        lps.push(r.lp);
        last = Some((r, gap));
    }
    let (r, gap) = last.ok_or_else(|| CliError::Schema("empty --grid".into()))?;
    let monotone = lps.windows(2).all(|w| w[1] >= w[0] || w[0].approx_eq(w[1], o.tol));
    rep.summary = json!({
        "command": "support",
        "map": mname,
        "measure": tname,
        "lp": jext(r.lp),
        "formula": jext(r.formula),
        "gap": gap.map(jnum),
        "lp_monotone": monotone,
        "levels": levels,
    });
    Ok(rep)
}

fn duality(p: &Problem, o: &Options) -> Result<Report, CliError> {
    let h = p.field()?;
    let (tname, theta) = p.measure(o.measure.as_deref())?;
    let d = duality_gap(h, theta, &p.mu, &o.grid)?;
    let mut rep = Report::new(&["refinement", "cells", "primal", "j", "gap"]);
    let mut levels = Vec::new();
    for l in &d.levels {
        rep.row(vec![
            l.refinement.to_string(),
            l.cells.to_string(),
            ext(l.primal),
            ext(d.j),
            l.gap.map_or("nan".into(), num),
        ]);
        levels.push(json!({"refinement": l.refinement, "cells": l.cells, "primal": jext(l.primal), "gap": l.gap.map(jnum)}));
    }
    let last = d.levels.last().ok_or_else(|| CliError::Schema("empty --grid".into()))?;
    let gaps_decreasing = d.levels.windows(2).all(|w| match (w[0].gap, w[1].gap) {
        (Some(a), Some(b)) => b <= a + o.tol,
        _ => true,
    });
    let closure = d.closure.as_ref().map(|c| {
        json!({
            "holds": c.holds,
            "dom_ih_in_cd": c.dom_ih_in_cd,
            "tested": c.tested,
            "witness": c.witness.as_ref().map(|w| json!({"family": w.family, "node": w.node, "t": jnum(w.t), "value": jnum(w.value)})),
        })
    });
    rep.summary = json!({
        "command": "duality",
        "measure": tname,
        "j": jext(d.j),
        "primal": jext(last.primal),
        "gap": last.gap.map(jnum),
        "monotone": d.monotone,
        "gaps_decreasing": gaps_decreasing,
        "bounded_by_j": d.bounded_by_j,
        "domain_isc": d.domain_isc.holds,
        "isc_violations": d.domain_isc.violations.iter().map(|&k| jnum(h.complex().node(k))).collect::<Vec<_>>(),
        "closure": closure,
        "levels": levels,
    });
    if !d.monotone {
        rep.breach = Some("primal values decrease under refinement".into());
    } else if !d.bounded_by_j {
        rep.breach = Some("primal value exceeds J".into());
    }
    Ok(rep)
}

fn subdiff(p: &Problem, o: &Options) -> Result<Report, CliError> {
    let h = p.field()?;
    let (yname, y) = p.function(o.function.as_deref())?;
    let (tname, theta) = p.measure(o.measure.as_deref())?;
    let r = check_sd(h, y, theta, &p.mu)?;
    let mut rep = Report::new(&["kind", "index", "ok"]);
    for i in 0..h.complex().num_cells() {
        rep.row(vec!["cell".into(), i.to_string(), (!r.cell_failures.contains(&i)).to_string()]);
    }
    for &(k, _) in theta.atoms() {
        rep.row(vec!["atom".into(), k.to_string(), (!r.atom_failures.contains(&k)).to_string()]);
    }
    let fenchel_ok = matches!(r.fenchel_gap, Some(intconj::ExtReal::Finite(g)) if g.abs() <= 1e-8);
    rep.summary = json!({
        "command": "subdiff",
        "function": yname,
        "measure": tname,
        "in_domain": r.in_domain,
        "pointwise": r.pointwise,
        "cell_failures": r.cell_failures,
        "atom_failures": r.atom_failures,
        "ih": jext(r.ih),
        "j": jext(r.j),
        "pairing": jnum(r.pairing),
        "fenchel_gap": r.fenchel_gap.map(jext),
        "fenchel_equality": fenchel_ok,
    });
    if r.in_domain && r.pointwise != fenchel_ok {
        rep.breach = Some("pointwise test and Fenchel equality disagree".into());
    }
    Ok(rep)
}

fn proper(p: &Problem) -> Result<Report, CliError> {
    let h = p.field()?;
    let mut rep = Report::new(&["node", "t", "y_bar"]);
    rep.summary = match check_proper(h, &p.mu)? {
        Properness::Proper {
            y_bar,
            x_bar,
            alpha,
            ih,
            j,
        } => {
            for k in 0..h.complex().num_nodes() {
                rep.row(vec![k.to_string(), num(h.complex().node(k)), num(y_bar.value(k))]);
            }
            json!({
                "command": "proper",
                "proper": true,
                "y_bar": y_bar.values().iter().map(|&v| jnum(v)).collect::<Vec<_>>(),
                "x_bar": x_bar.iter().map(|&v| jnum(v)).collect::<Vec<_>>(),
                "alpha": jnum(alpha),
                "ih": jnum(ih),
                "j": jnum(j),
            })
        }
        Properness::Improper { reason } => json!({"command": "proper", "proper": false, "reason": reason}),
    };
    Ok(rep)
}

fn ic_check(p: &Problem) -> Result<Report, CliError> {
    let h = p.field()?;
    let r = check_ic_condition(h, &p.mu)?;
    let mut rep = Report::new(&["t", "v"]);
    for &(t, v) in &r.witnesses {
        rep.row(vec![num(t), num(v)]);
    }
    rep.summary = json!({
        "command": "ic-check",
        "holds": r.holds,
        "tested": r.tested,
        "witnesses": r.witnesses.iter().map(|&(t, v)| json!([jnum(t), jnum(v)])).collect::<Vec<_>>(),
    });
    Ok(rep)
}

fn closure_check(p: &Problem, o: &Options) -> Result<Report, CliError> {
    let h = p.field()?;
    let n = o.grid.first().copied().unwrap_or(64);
    let r = check_closure_condition(h, &p.mu, n)?;
    let mut rep = Report::new(&["family", "node", "t", "value"]);
    if let Some(w) = &r.witness {
        rep.row(vec![w.family.clone(), w.node.to_string(), num(w.t), num(w.value)]);
    }
    rep.summary = json!({
        "command": "closure-check",
        "refinement": n,
        "holds": r.holds,
        "dom_ih_in_cd": r.dom_ih_in_cd,
        "tested": r.tested,
        "witness": r.witness.as_ref().map(|w| json!({"family": w.family, "node": w.node, "t": jnum(w.t), "value": jnum(w.value)})),
    });
    Ok(rep)
}
