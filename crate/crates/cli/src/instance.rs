//! Instance files.
//!
//! Instances are TOML documents with a `kind` tag (`toric`, `tree` or
//! `surface`). Every rational is written as a string `"p/q"` so nothing passes
//! through floating point. Unknown fields are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use navol_core::cohomology::{RealDivisor, ToricFamily, ToricVariety};
use navol_core::rational::{format_rational, parse_rational};
use navol_core::tree::{MetricTree, VertexId};
use navol_core::{AffinePiece, DiscreteMeasure, PLFunction, PLMetric, Point, Polytope, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

/// An exact rational stored as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map(Q).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Toric,
    Tree,
    Surface,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, MetricSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub measures: BTreeMap<String, BTreeMap<String, Q>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub divisors: BTreeMap<String, DivisorSpec>,
    #[serde(default)]
    pub experiment: Experiment,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    pub vertices: Vec<Point>,
}

/// `min` over `blocks` of `max` over pieces; `pieces` is the one-block
/// shorthand and `canonical` the metric `Ψ_P`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub canonical: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<PieceSpec>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub slope: Point,
    pub constant: Q,
}

/// `plus − minus` for two named metrics, or a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    pub root: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub a: String,
    pub b: String,
    pub length: Q,
}

/// `Σ coefficient·e`; a bare `e` has coefficient 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coefficient: Q,
    pub e: Vec<i64>,
}

/// Experiment parameters. Names refer to the metrics, functions, measures and
/// divisors declared in the same file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<u64>>,
    /// Explicit fit/verify split for the `C/m` criterion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_convex_pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_nonconvex: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_directions: Option<usize>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_trees: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_vertices: Option<usize>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morse: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb_max: Option<u64>,
}

pub struct ToricModel {
    pub polytope: Arc<Polytope>,
    pub metrics: BTreeMap<String, PLMetric>,
    pub functions: BTreeMap<String, PLFunction>,
}

pub struct TreeModel {
    /// Absent for instances that only draw random trees.
    pub tree: Option<MetricTree>,
    pub measures: BTreeMap<String, DiscreteMeasure<VertexId>>,
}

pub struct SurfaceModel {
    pub variety: ToricVariety,
    pub divisors: BTreeMap<String, RealDivisor>,
}

pub enum Model {
    Toric(ToricModel),
    Tree(TreeModel),
    Surface(SurfaceModel),
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Toric(m) => write!(f, "Toric({} metrics)", m.metrics.len()),
            Model::Tree(m) => write!(f, "Tree({} vertices)", m.tree.as_ref().map_or(0, MetricTree::len)),
            Model::Surface(m) => write!(f, "Surface({})", m.variety.family().name()),
        }
    }
}

/// A parsed and validated instance.
#[derive(Debug)]
pub struct Instance {
    pub path: PathBuf,
    pub file: InstanceFile,
    pub model: Model,
}

impl InstanceFile {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance files serialize")
    }
}

pub fn parse_instance(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_instance_str(&text, path)
}

pub fn parse_instance_str(text: &str, path: &Path) -> Result<Instance, CliError> {
    let file = InstanceFile::from_toml(text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let model = build(&file).map_err(|msg| CliError::Parse(format!("{}: instance {:?}: {msg}", path.display(), file.name)))?;
    Ok(Instance {
        path: path.to_path_buf(),
        file,
        model,
    })
}

fn build(file: &InstanceFile) -> Result<Model, String> {
    let unexpected = |what: &str, present: bool| {
        if present {
            Err(format!("{what} not allowed for kind {:?}", file.kind))
        } else {
            Ok(())
        }
    };
    match file.kind {
        Kind::Toric => {
            unexpected("tree", file.tree.is_some())?;
            unexpected("measures", !file.measures.is_empty())?;
            unexpected("family", file.family.is_some())?;
            unexpected("divisors", !file.divisors.is_empty())?;
            build_toric(file).map(Model::Toric)
        }
        Kind::Tree => {
            unexpected("polytope", file.polytope.is_some())?;
            unexpected("metrics", !file.metrics.is_empty())?;
            unexpected("functions", !file.functions.is_empty())?;
            unexpected("family", file.family.is_some())?;
            unexpected("divisors", !file.divisors.is_empty())?;
            build_tree(file).map(Model::Tree)
        }
        Kind::Surface => {
            unexpected("polytope", file.polytope.is_some())?;
            unexpected("metrics", !file.metrics.is_empty())?;
            unexpected("functions", !file.functions.is_empty())?;
            unexpected("tree", file.tree.is_some())?;
            unexpected("measures", !file.measures.is_empty())?;
            build_surface(file).map(Model::Surface)
        }
    }
}

fn pieces(specs: &[PieceSpec]) -> Vec<AffinePiece> {
    specs
        .iter()
        .map(|p| AffinePiece::new(p.slope.clone(), p.constant.0.clone()))
        .collect()
}

fn require<'a, T>(map: &'a BTreeMap<String, T>, what: &str, name: &str) -> Result<&'a T, String> {
    map.get(name).ok_or_else(|| format!("unknown {what} {name:?}"))
}

fn build_toric(file: &InstanceFile) -> Result<ToricModel, String> {
    let spec = file.polytope.as_ref().ok_or("toric instances need a [polytope] table")?;
    let polytope = Arc::new(Polytope::from_vertices(&spec.vertices).map_err(|e| format!("polytope: {e}"))?);
    let mut metrics = BTreeMap::new();
    for (name, m) in &file.metrics {
        let forms = usize::from(m.canonical) + usize::from(m.pieces.is_some()) + usize::from(m.blocks.is_some());
        if forms != 1 {
            return Err(format!("metric {name:?}: give exactly one of canonical, pieces, blocks"));
        }
        let built = if m.canonical {
            PLMetric::canonical(polytope.clone())
        } else if let Some(p) = &m.pieces {
            PLMetric::from_max(polytope.clone(), pieces(p))
        } else {
            let blocks = m.blocks.as_deref().unwrap_or_default();
            PLMetric::new(polytope.clone(), blocks.iter().map(|b| pieces(b)).collect())
        };
        metrics.insert(name.clone(), built.map_err(|e| format!("metric {name:?}: {e}"))?);
    }
    let mut functions = BTreeMap::new();
    for (name, f) in &file.functions {
        let built = match (&f.plus, &f.minus, &f.constant) {
            (Some(p), Some(m), None) => PLFunction::difference(
                require(&metrics, "metric", p)?.clone(),
                require(&metrics, "metric", m)?.clone(),
            ),
            (None, None, Some(c)) => PLFunction::constant(polytope.clone(), &c.0),
            _ => return Err(format!("function {name:?}: give plus and minus, or constant")),
        };
        functions.insert(name.clone(), built.map_err(|e| format!("function {name:?}: {e}"))?);
    }
    let ex = &file.experiment;
    for name in ex.pair.iter().flatten().chain(&ex.metric) {
        require(&metrics, "metric", name)?;
    }
    if let Some(d) = &ex.direction {
        require(&functions, "function", d)?;
    }
    Ok(ToricModel {
        polytope,
        metrics,
        functions,
    })
}

fn build_tree(file: &InstanceFile) -> Result<TreeModel, String> {
    let tree = match &file.tree {
        Some(spec) => {
            let edges: Vec<(String, String, Rational)> = spec
                .edges
                .iter()
                .map(|e| (e.a.clone(), e.b.clone(), e.length.0.clone()))
                .collect();
            Some(MetricTree::from_named(spec.vertices.clone(), &edges, &spec.root).map_err(|e| e.to_string())?)
        }
        None if file.experiment.random_trees.is_some() => None,
        None => return Err("tree instances need a [tree] table or random_trees".into()),
    };
    let mut measures = BTreeMap::new();
    for (name, atoms) in &file.measures {
        let tree = tree.as_ref().ok_or("measures need a [tree] table")?;
        let mut mu = DiscreteMeasure::new([]);
        for (vertex, mass) in atoms {
            let v = tree
                .vertex(vertex)
                .ok_or_else(|| format!("measure {name:?}: unknown vertex {vertex:?}"))?;
            mu.add_atom(v, mass.0.clone());
        }
        measures.insert(name.clone(), mu);
    }
    for name in file.experiment.target.iter().chain(&file.experiment.reference) {
        require(&measures, "measure", name)?;
    }
    Ok(TreeModel { tree, measures })
}

fn build_surface(file: &InstanceFile) -> Result<SurfaceModel, String> {
    let family = file.family.as_deref().ok_or("surface instances need a family")?;
    let variety = ToricVariety::new(ToricFamily::parse(family).map_err(|e| e.to_string())?);
    let rank = variety.rays().len();
    let mut divisors = BTreeMap::new();
    for (name, d) in &file.divisors {
        let mut terms: Vec<(Rational, Vec<i64>)> = d.terms.iter().map(|t| (t.coefficient.0.clone(), t.e.clone())).collect();
        if let Some(e) = &d.e {
            terms.push((Rational::from_integer(1.into()), e.clone()));
        }
        if terms.is_empty() {
            return Err(format!("divisor {name:?}: give e or terms"));
        }
        let built = RealDivisor::new(rank, terms).map_err(|e| format!("divisor {name:?}: {e}"))?;
        divisors.insert(name.clone(), built);
    }
    let ex = &file.experiment;
    let names = ex
        .divisor
        .iter()
        .chain(ex.morse.iter().flatten().flatten())
        .chain(ex.twists.iter().flatten())
        .chain(ex.bases.iter().flatten());
    for name in names {
        require(&divisors, "divisor", name)?;
    }
    if let Some(q) = ex.q.iter().flatten().find(|&&q| q > variety.dim()) {
        return Err(format!("q = {q} exceeds the dimension {}", variety.dim()));
    }
    Ok(SurfaceModel { variety, divisors })
}
