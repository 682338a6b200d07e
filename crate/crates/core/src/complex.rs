//! Node grids on a compact interval.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Nodes `t_0 < ... < t_N` with `N >= 1`; cell `i` is the open interval
/// `(t_i, t_{i+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellComplex<T> {
    nodes: Vec<T>,
}

/// Where the nodes of a refined complex come from.
///
/// `parent[j]` is the coarse cell containing refined cell `j`; `origin[k]` is
/// `Some(i)` when refined node `k` is coarse node `i`.
#[derive(Debug, Clone)]
pub struct Refinement<T> {
    pub complex: CellComplex<T>,
    pub parent: Vec<usize>,
    pub origin: Vec<Option<usize>>,
}

impl<T: Scalar> CellComplex<T> {
    pub fn new(nodes: Vec<T>) -> Result<Self> {
        if nodes.len() < 2 || nodes.iter().any(|t| !t.is_finite()) {
            return Err(Error::BadComplex);
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::BadComplex);
        }
        Ok(CellComplex { nodes })
    }

    /// `n` equal cells on `[a, b]`.
    pub fn uniform(a: T, b: T, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadComplex);
        }
        let nf = T::from_usize(n).expect("cell count fits");
        let nodes = (0..=n)
            .map(|k| {
                if k == n {
                    b
                } else {
                    a + (b - a) * T::from_usize(k).expect("fits") / nf
                }
            })
            .collect();
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> T {
        self.nodes[i]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn start(&self) -> T {
        self.nodes[0]
    }

    pub fn end(&self) -> T {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn cell(&self, i: usize) -> (T, T) {
        (self.nodes[i], self.nodes[i + 1])
    }

    pub fn cell_len(&self, i: usize) -> T {
        self.nodes[i + 1] - self.nodes[i]
    }

    /// Index of the node at `t`, if any (within a relative tolerance).
    pub fn find_node(&self, t: T) -> Option<usize> {
        let tol = T::canon_tol() * (self.end() - self.start()).max(T::one());
        let k = self.nodes.partition_point(|&x| x < t - tol);
        (k < self.nodes.len() && (self.nodes[k] - t).abs() <= tol).then_some(k)
    }

    /// Cell whose closure contains `t` (the left one at interior nodes).
    pub fn locate(&self, t: T) -> Option<usize> {
        if t < self.start() || t > self.end() {
            return None;
        }
        let k = self.nodes.partition_point(|&x| x < t);
        Some(k.saturating_sub(1).min(self.num_cells() - 1))
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.nodes.len() == other.nodes.len()
            && self
                .nodes
                .iter()
                .zip(&other.nodes)
                .all(|(&a, &b)| T::approx_eq(a, b, T::canon_tol()))
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::ComplexMismatch)
        }
    }

    /// Inserts extra points strictly inside the span; points that coincide
    /// with existing nodes (up to tolerance) are ignored.
    pub fn refine_at(&self, points: &[T]) -> Refinement<T> {
        let tol = T::canon_tol() * (self.end() - self.start()).max(T::one());
        let mut extra: Vec<T> = points
            .iter()
            .copied()
            .filter(|&p| p > self.start() + tol && p < self.end() - tol)
            .collect();
        extra.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));

        let mut nodes = Vec::with_capacity(self.nodes.len() + extra.len());
        let mut origin = Vec::with_capacity(nodes.capacity());
        let mut parent = Vec::with_capacity(nodes.capacity());
        let mut e = 0;
        for (i, &t) in self.nodes.iter().enumerate() {
            if i > 0 {
                while e < extra.len() && extra[e] < t - tol {
                    let p = extra[e];
                    e += 1;
                    if (p - *nodes.last().expect("first node pushed")).abs() <= tol {
                        continue;
                    }
                    nodes.push(p);
                    origin.push(None);
                    parent.push(i - 1);
                }
                while e < extra.len() && extra[e] <= t + tol {
                    e += 1;
                }
                parent.push(i - 1);
            }
            nodes.push(t);
            origin.push(Some(i));
        }
        Refinement {
            complex: CellComplex { nodes },
            parent,
            origin,
        }
    }

    /// Merges the uniform grid of `n` cells over the span into the nodes.
    pub fn refine_uniform(&self, n: usize) -> Result<Refinement<T>> {
        let grid = CellComplex::uniform(self.start(), self.end(), n)?;
        Ok(self.refine_at(&grid.nodes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_nodes() {
        assert!(CellComplex::new(vec![0.0]).is_err());
        assert!(CellComplex::new(vec![0.0, 0.0]).is_err());
        assert!(CellComplex::new(vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn refinement_keeps_coarse_nodes_and_parents() {
        let c = CellComplex::new(vec![0.0, 0.3, 1.0]).unwrap();
        let r = c.refine_uniform(4).unwrap();
        assert_eq!(r.complex.nodes(), &[0.0, 0.25, 0.3, 0.5, 0.75, 1.0]);
        assert_eq!(r.parent, vec![0, 0, 1, 1, 1]);
        assert_eq!(r.origin, vec![Some(0), None, Some(1), None, None, Some(2)]);
    }

    #[test]
    fn refinement_dedups_coincident_points() {
        let c = CellComplex::new(vec![0.0, 0.5, 1.0]).unwrap();
        let r = c.refine_uniform(8).unwrap();
        assert_eq!(r.complex.num_cells(), 8);
        assert_eq!(r.origin[4], Some(1));
        assert_eq!(c.find_node(0.5), Some(1));
        assert_eq!(c.find_node(0.4), None);
    }

    #[test]
    fn locate_cells() {
        let c = CellComplex::uniform(0.0, 1.0, 4).unwrap();
        assert_eq!(c.locate(0.0), Some(0));
        assert_eq!(c.locate(0.3), Some(1));
        assert_eq!(c.locate(1.0), Some(3));
        assert_eq!(c.locate(1.5), None);
    }
}
