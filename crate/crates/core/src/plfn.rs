//! Continuous piecewise-linear functions on a cell complex.

use crate::complex::{CellComplex, Refinement};
use crate::convex::Affine;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Continuous function, affine on every cell, given by its node values.
#[derive(Debug, Clone, PartialEq)]
pub struct PlFunction<T> {
    complex: CellComplex<T>,
    values: Vec<T>,
}

impl<T: Scalar> PlFunction<T> {
    pub fn new(complex: CellComplex<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != complex.num_nodes() {
            return Err(Error::LengthMismatch {
                expected: complex.num_nodes(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadCoefficient("node value"));
        }
        Ok(PlFunction { complex, values })
    }

    pub fn constant(complex: CellComplex<T>, c: T) -> Self {
        let n = complex.num_nodes();
        PlFunction {
            complex,
            values: vec![c; n],
        }
    }

    pub fn complex(&self) -> &CellComplex<T> {
        &self.complex
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, node: usize) -> T {
        self.values[node]
    }

    /// The affine piece on cell `i`, as a function of `t`.
    pub fn cell_affine(&self, i: usize) -> Affine<T> {
        let (t0, t1) = self.complex.cell(i);
        Affine::through(t0, self.values[i], t1, self.values[i + 1])
    }

    pub fn eval(&self, t: T) -> Option<T> {
        let i = self.complex.locate(t)?;
        let (t0, t1) = self.complex.cell(i);
        let w = (t - t0) / (t1 - t0);
        Some(self.values[i] * (T::one() - w) + self.values[i + 1] * w)
    }

    pub fn sup_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn with_value(&self, node: usize, v: T) -> Self {
        let mut out = self.clone();
        out.values[node] = v;
        out
    }

    /// Same function on a refined complex.
    pub fn refine(&self, r: &Refinement<T>) -> Self {
        let values = r
            .complex
            .nodes()
            .iter()
            .enumerate()
            .map(|(k, &t)| match r.origin[k] {
                Some(i) => self.values[i],
                None => self.eval(t).expect("refined node inside span"),
            })
            .collect();
        PlFunction {
            complex: r.complex.clone(),
            values,
        }
    }
}
