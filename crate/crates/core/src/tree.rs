//! Piecewise-linear functions on finite metric trees, the tree Laplacian and
//! an exact Monge–Ampère solver.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::error::{CoreError, Result};
use crate::measure::DiscreteMeasure;
use crate::rational::Rational;

pub type VertexId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub length: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricTree {
    names: Vec<String>,
    edges: Vec<Edge>,
    root: VertexId,
    // (neighbour, edge index) per vertex
    adjacency: Vec<Vec<(VertexId, usize)>>,
}

impl MetricTree {
    pub fn new(names: Vec<String>, edges: Vec<Edge>, root: VertexId) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(CoreError::InvalidTree("no vertices".into()));
        }
        if root >= n {
            return Err(CoreError::InvalidTree(format!("root {root} out of range")));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.clone(), i).is_some() {
                return Err(CoreError::InvalidTree(format!("duplicate vertex {name:?}")));
            }
        }
        if edges.len() + 1 != n {
            return Err(CoreError::InvalidTree(format!(
                "{} vertices need {} edges, got {}",
                n,
                n - 1,
                edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            if e.a >= n || e.b >= n || e.a == e.b {
                return Err(CoreError::InvalidTree(format!("bad edge {}–{}", e.a, e.b)));
            }
            if !e.length.is_positive() {
                return Err(CoreError::InvalidTree(format!("edge {}–{} has nonpositive length", e.a, e.b)));
            }
            adjacency[e.a].push((e.b, k));
            adjacency[e.b].push((e.a, k));
        }
        let tree = MetricTree {
            names,
            edges,
            root,
            adjacency,
        };
        if tree.preorder().len() != n {
            return Err(CoreError::InvalidTree("graph is not connected".into()));
        }
        Ok(tree)
    }

    /// Builds a tree from named endpoints.
    pub fn from_named(names: Vec<String>, edges: &[(String, String, Rational)], root: &str) -> Result<Self> {
        let index = |name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| CoreError::InvalidTree(format!("unknown vertex {name:?}")))
        };
        let edges = edges
            .iter()
            .map(|(a, b, len)| {
                Ok(Edge {
                    a: index(a)?,
                    b: index(b)?,
                    length: len.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let root = index(root)?;
        MetricTree::new(names, edges, root)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    /// Vertices in depth-first order from the root, with (parent, edge).
    fn preorder(&self) -> Vec<(VertexId, Option<(VertexId, usize)>)> {
        let mut order = Vec::with_capacity(self.len());
        let mut visited = vec![false; self.len()];
        let mut stack = vec![(self.root, None)];
        while let Some((v, parent)) = stack.pop() {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            order.push((v, parent));
            for &(w, k) in &self.adjacency[v] {
                if !visited[w] {
                    stack.push((w, Some((v, k))));
                }
            }
        }
        order
    }

    /// Splits edge `edge` at fraction `t ∈ (0,1)` of its length measured from
    /// its first endpoint. The new vertex gets the last id.
    pub fn subdivide_edge(&self, edge: usize, t: &Rational, name: &str) -> Result<(MetricTree, VertexId)> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| CoreError::InvalidArgument(format!("no edge {edge}")))?;
        let one = Rational::from_integer(1.into());
        if !t.is_positive() || *t >= one {
            return Err(CoreError::InvalidArgument("subdivision point must be interior".into()));
        }
        let new = self.len();
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut edges = self.edges.clone();
        edges[edge] = Edge {
            a: e.a,
            b: new,
            length: &e.length * t,
        };
        edges.push(Edge {
            a: new,
            b: e.b,
            length: &e.length * (one - t),
        });
        Ok((MetricTree::new(names, edges, self.root)?, new))
    }
}

/// Vertex values of a function affine along each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeFunction {
    values: Vec<Rational>,
}

impl TreeFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        TreeFunction { values }
    }

    pub fn zero(tree: &MetricTree) -> Self {
        TreeFunction::new(vec![Rational::zero(); tree.len()])
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, v: VertexId) -> &Rational {
        &self.values[v]
    }

    pub fn linear_combination(a: &Rational, f: &TreeFunction, b: &Rational, g: &TreeFunction) -> TreeFunction {
        TreeFunction::new(f.values.iter().zip(&g.values).map(|(x, y)| a * x + b * y).collect())
    }

    /// The same function after [`MetricTree::subdivide_edge`].
    pub fn refine(&self, tree: &MetricTree, edge: usize, t: &Rational) -> TreeFunction {
        let e = &tree.edges[edge];
        let (x, y) = (&self.values[e.a], &self.values[e.b]);
        let mut values = self.values.clone();
        values.push(x + (y - x) * t);
        TreeFunction::new(values)
    }

    fn check(&self, tree: &MetricTree) -> Result<()> {
        if self.values.len() == tree.len() {
            Ok(())
        } else {
            Err(CoreError::DimensionMismatch {
                expected: tree.len(),
                found: self.values.len(),
            })
        }
    }
}

/// `Δφ(v) = Σ_{e ∋ v} (outgoing slope of φ along e)`.
pub fn tree_laplacian(phi: &TreeFunction, tree: &MetricTree) -> Result<DiscreteMeasure<VertexId>> {
    phi.check(tree)?;
    let mut out = DiscreteMeasure::default();
    for e in &tree.edges {
        let slope = (&phi.values[e.b] - &phi.values[e.a]) / &e.length;
        out.add_atom(e.a, slope.clone());
        out.add_atom(e.b, -slope);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curvature {
    pub measure: DiscreteMeasure<VertexId>,
    pub semipositive: bool,
}

/// `μ₀ + Δφ`, flagged semipositive when every atom is nonnegative.
pub fn curvature(phi: &TreeFunction, reference: &DiscreteMeasure<VertexId>, tree: &MetricTree) -> Result<Curvature> {
    check_support(reference, tree)?;
    let measure = reference.plus(&tree_laplacian(phi, tree)?);
    let semipositive = measure.atoms().all(|(_, m)| !m.is_negative());
    Ok(Curvature { measure, semipositive })
}

fn check_support(mu: &DiscreteMeasure<VertexId>, tree: &MetricTree) -> Result<()> {
    match mu.atoms().find(|(&v, _)| v >= tree.len()) {
        Some((&v, _)) => Err(CoreError::InvalidArgument(format!("atom at unknown vertex {v}"))),
        None => Ok(()),
    }
}

/// The unique `φ` with `φ(root) = 0` and `μ₀ + Δφ = μ`.
pub fn ma_solve(
    target: &DiscreteMeasure<VertexId>,
    reference: &DiscreteMeasure<VertexId>,
    tree: &MetricTree,
) -> Result<TreeFunction> {
    check_support(target, tree)?;
    check_support(reference, tree)?;
    if target.total_mass() != reference.total_mass() {
        return Err(CoreError::MassMismatch {
            target: target.total_mass().to_string(),
            reference: reference.total_mass().to_string(),
        });
    }
    let order = tree.preorder();
    let nu = target.minus(reference);
    // subtree masses by reverse preorder accumulation
    let mut subtree: Vec<Rational> = (0..tree.len()).map(|v| nu.mass_at(&v)).collect();
    for &(v, parent) in order.iter().rev() {
        if let Some((p, _)) = parent {
            let m = subtree[v].clone();
            subtree[p] += m;
        }
    }
    let mut values = vec![Rational::zero(); tree.len()];
    for &(v, parent) in &order {
        if let Some((p, k)) = parent {
            values[v] = &values[p] - &tree.edges[k].length * &subtree[v];
        }
    }
    Ok(TreeFunction::new(values))
}
