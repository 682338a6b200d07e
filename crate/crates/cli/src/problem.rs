//! Problem files: JSON with infinities spelled `"inf"` / `"-inf"`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use intconj::{
    Affine, BaseMeasure, CellBounds, CellComplex, CellIntegrand, IntegrandField, Interval, IntervalMap, PlFunction,
    PolyConvexFn, SignedMeasure, UnionMap,
};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// A double that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else if self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"inf\" / \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Ok(Num(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                match v {
                    "inf" | "+inf" => Ok(Num(f64::INFINITY)),
                    "-inf" => Ok(Num(f64::NEG_INFINITY)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexSpec {
    /// `[slope, intercept]` pairs.
    pub pieces: Vec<[Num; 2]>,
    #[serde(default = "real_line")]
    pub dom: [Num; 2],
}

fn real_line() -> [Num; 2] {
    [Num(f64::NEG_INFINITY), Num(f64::INFINITY)]
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSpec {
    #[default]
    Unit,
    InverseDistance { pole: Num },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub pieces: Vec<[Num; 2]>,
    #[serde(default = "real_line")]
    pub dom: [Num; 2],
    #[serde(default)]
    pub weight: WeightSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrandSpec {
    /// `null` marks an empty-domain cell.
    pub cells: Vec<Option<CellSpec>>,
    pub nodes: Vec<Option<ConvexSpec>>,
}

/// Bounds given by their values at the two cell endpoints.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    pub lower: [Num; 2],
    pub upper: [Num; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub cells: Vec<Option<BoundsSpec>>,
    /// Node values; `null` entries are empty. Omitted: the limit intersections.
    #[serde(default)]
    pub nodes: Option<Vec<Option<[Num; 2]>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub branches: Vec<BranchSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub density: Vec<Num>,
    #[serde(default)]
    pub atoms: Vec<(usize, Num)>,
}

/// One expected outcome: run `command` with `args`, then compare summary
/// entries. Keys are dotted paths; a `<=` or `>=` suffix makes a bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub command: String,
    #[serde(default)]
    pub args: BTreeMap<String, serde_json::Value>,
    pub checks: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub description: Option<String>,
    pub complex: Vec<Num>,
    #[serde(default)]
    pub base_measure: Option<Vec<Num>>,
    #[serde(default)]
    pub integrand: Option<IntegrandSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub measures: BTreeMap<String, MeasureSpec>,
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<Num>>,
    /// Stand-alone polyhedral functions for `conjugate` and `recession`.
    #[serde(default)]
    pub convex: BTreeMap<String, ConvexSpec>,
    #[serde(default)]
    pub expect: Vec<Expectation>,
}

/// A validated problem with every object built on one complex.
#[derive(Debug, Clone)]
pub struct Problem {
    pub complex: CellComplex<f64>,
    pub mu: BaseMeasure<f64>,
    pub field: Option<IntegrandField>,
    pub maps: BTreeMap<String, UnionMap<f64>>,
    pub measures: BTreeMap<String, SignedMeasure<f64>>,
    pub functions: BTreeMap<String, PlFunction<f64>>,
    pub convex: BTreeMap<String, PolyConvexFn<f64>>,
    pub expect: Vec<Expectation>,
}

fn schema(what: impl fmt::Display, e: impl fmt::Display) -> CliError {
    CliError::Schema(format!("{what}: {e}"))
}

fn floats(v: &[Num]) -> Vec<f64> {
    v.iter().map(|n| n.0).collect()
}

fn interval(what: &str, d: [Num; 2]) -> Result<Interval<f64>, CliError> {
    Interval::new(d[0].0, d[1].0).map_err(|e| schema(what, e))
}

fn convex_fn(what: &str, pieces: &[[Num; 2]], dom: [Num; 2]) -> Result<PolyConvexFn<f64>, CliError> {
    let pieces = pieces.iter().map(|p| Affine::new(p[0].0, p[1].0)).collect();
    PolyConvexFn::new(pieces, interval(what, dom)?).map_err(|e| schema(what, e))
}

fn bound(what: &str, t0: f64, t1: f64, v: [Num; 2]) -> Result<Affine<f64>, CliError> {
    let (a, b) = (v[0].0, v[1].0);
    if a.is_finite() && b.is_finite() {
        Ok(Affine::through(t0, a, t1, b))
    } else if a == b {
        Ok(Affine::constant(a))
    } else {
        Err(CliError::Schema(format!("{what}: infinite bound must be infinite at both ends")))
    }
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| schema("problem file", e))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn build(&self) -> Result<Problem, CliError> {
        let complex = CellComplex::new(floats(&self.complex)).map_err(|e| schema("complex", e))?;
        let mu = match &self.base_measure {
            None => BaseMeasure::lebesgue(complex.clone()),
            Some(d) => BaseMeasure::new(complex.clone(), floats(d)).map_err(|e| schema("base_measure", e))?,
        };
        let field = match &self.integrand {
            None => None,
            Some(spec) => {
                let cells = spec
                    .cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.as_ref()
                            .map(|c| {
                                let f = convex_fn(&format!("integrand cell {i}"), &c.pieces, c.dom)?;
                                Ok(match c.weight {
                                    WeightSpec::Unit => CellIntegrand::unit(f),
                                    WeightSpec::InverseDistance { pole } => CellIntegrand::inverse_distance(f, pole.0),
                                })
                            })
                            .transpose()
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                let nodes = spec
                    .nodes
                    .iter()
                    .enumerate()
                    .map(|(k, n)| {
                        n.as_ref()
                            .map(|n| convex_fn(&format!("integrand node {k}"), &n.pieces, n.dom))
                            .transpose()
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Some(IntegrandField::new(complex.clone(), cells, nodes).map_err(|e| schema("integrand", e))?)
            }
        };
        let mut maps = BTreeMap::new();
        for (name, spec) in &self.maps {
            let what = format!("map {name}");
            let mut branches = Vec::new();
            for b in &spec.branches {
                if b.cells.len() != complex.num_cells() {
                    return Err(schema(&what, "cell count differs from the complex"));
                }
                let cells = b
                    .cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c.as_ref()
                            .map(|c| {
                                let (t0, t1) = complex.cell(i);
                                Ok(CellBounds::new(
                                    bound(&what, t0, t1, c.lower)?,
                                    bound(&what, t0, t1, c.upper)?,
                                ))
                            })
                            .transpose()
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                let m = match &b.nodes {
                    None => IntervalMap::with_liminf_nodes(complex.clone(), cells),
                    Some(nodes) => {
                        let nodes = nodes
                            .iter()
                            .map(|n| match n {
                                None => Ok(Interval::empty()),
                                Some(d) => interval(&what, *d),
                            })
                            .collect::<Result<Vec<_>, CliError>>()?;
                        IntervalMap::new(complex.clone(), cells, nodes)
                    }
                }
                .map_err(|e| schema(&what, e))?;
                branches.push(m);
            }
            maps.insert(name.clone(), UnionMap::new(branches).map_err(|e| schema(&what, e))?);
        }
        let mut measures = BTreeMap::new();
        for (name, spec) in &self.measures {
            let atoms = spec.atoms.iter().map(|&(k, w)| (k, w.0)).collect();
            let m = SignedMeasure::new(complex.clone(), floats(&spec.density), atoms)
                .map_err(|e| schema(format!("measure {name}"), e))?;
            measures.insert(name.clone(), m);
        }
        let mut functions = BTreeMap::new();
        for (name, vals) in &self.functions {
            let y = PlFunction::new(complex.clone(), floats(vals)).map_err(|e| schema(format!("function {name}"), e))?;
            functions.insert(name.clone(), y);
        }
        let mut convex = BTreeMap::new();
        for (name, spec) in &self.convex {
            convex.insert(name.clone(), convex_fn(&format!("convex {name}"), &spec.pieces, spec.dom)?);
        }
        Ok(Problem {
            complex,
            mu,
            field,
            maps,
            measures,
            functions,
            convex,
            expect: self.expect.clone(),
        })
    }
}

impl Problem {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        ProblemFile::load(path)?.build()
    }

    fn pick<'a, V>(kind: &str, items: &'a BTreeMap<String, V>, name: Option<&str>) -> Result<(&'a str, &'a V), CliError> {
        match name {
            Some(n) => items
                .get_key_value(n)
                .map(|(k, v)| (k.as_str(), v))
                .ok_or_else(|| CliError::Schema(format!("no {kind} named {n}"))),
            None => items
                .iter()
                .next()
                .map(|(k, v)| (k.as_str(), v))
                .ok_or_else(|| CliError::Schema(format!("problem has no {kind}"))),
        }
    }

    pub fn map(&self, name: Option<&str>) -> Result<(&str, &UnionMap<f64>), CliError> {
        Self::pick("map", &self.maps, name)
    }

    pub fn measure(&self, name: Option<&str>) -> Result<(&str, &SignedMeasure<f64>), CliError> {
        Self::pick("measure", &self.measures, name)
    }

    pub fn function(&self, name: Option<&str>) -> Result<(&str, &PlFunction<f64>), CliError> {
        Self::pick("function", &self.functions, name)
    }

    pub fn field(&self) -> Result<&IntegrandField, CliError> {
        self.field
            .as_ref()
            .ok_or_else(|| CliError::Schema("problem has no integrand".into()))
    }
}
