//! Base measures and signed measures on a cell complex.
//!
//! Signed measures carry a piecewise-constant density with respect to the
//! base measure plus finitely many atoms sitting at nodes. The base measure
//! is atomless, so atoms are exactly the singular part.

use crate::complex::{CellComplex, Refinement};
use crate::error::{Error, Result};
use crate::plfn::PlFunction;
use crate::scalar::Scalar;

/// Strictly positive, atomless measure with a piecewise-constant Lebesgue density.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseMeasure<T> {
    complex: CellComplex<T>,
    density: Vec<T>,
}

impl<T: Scalar> BaseMeasure<T> {
    pub fn new(complex: CellComplex<T>, density: Vec<T>) -> Result<Self> {
        if density.len() != complex.num_cells() {
            return Err(Error::LengthMismatch {
                expected: complex.num_cells(),
                got: density.len(),
            });
        }
        if density.iter().any(|d| !(d.is_finite() && *d > T::zero())) {
            return Err(Error::BadMeasure(
                "base density must be finite and strictly positive".into(),
            ));
        }
        Ok(BaseMeasure { complex, density })
    }

    pub fn lebesgue(complex: CellComplex<T>) -> Self {
        let n = complex.num_cells();
        BaseMeasure {
            complex,
            density: vec![T::one(); n],
        }
    }

    pub fn complex(&self) -> &CellComplex<T> {
        &self.complex
    }

    pub fn density(&self) -> &[T] {
        &self.density
    }

    /// `mu(cell i)`.
    pub fn cell_mass(&self, i: usize) -> T {
        self.density[i] * self.complex.cell_len(i)
    }

    pub fn refine(&self, r: &Refinement<T>) -> Self {
        BaseMeasure {
            complex: r.complex.clone(),
            density: r.parent.iter().map(|&p| self.density[p]).collect(),
        }
    }
}

/// `theta = d * mu + sum_k w_k delta_{t_k}` with `d` constant on cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasure<T> {
    complex: CellComplex<T>,
    density: Vec<T>,
    atoms: Vec<(usize, T)>,
}

/// Radon–Nikodym derivative of the requested kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Derivative<T> {
    /// `d theta / d mu`, one value per cell.
    Density(Vec<T>),
    /// `d theta^s / d|theta^s|`: `(node, +-1)` per atom.
    AtomSigns(Vec<(usize, T)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeBase {
    Base,
    SingularVariation,
}

impl<T: Scalar> SignedMeasure<T> {
    /// Atoms are sorted by node; zero-weight atoms are dropped; a node may
    /// carry at most one atom.
    pub fn new(complex: CellComplex<T>, density: Vec<T>, atoms: Vec<(usize, T)>) -> Result<Self> {
        if density.len() != complex.num_cells() {
            return Err(Error::LengthMismatch {
                expected: complex.num_cells(),
                got: density.len(),
            });
        }
        if density.iter().any(|d| !d.is_finite()) {
            return Err(Error::BadMeasure("density must be finite".into()));
        }
        let mut atoms: Vec<(usize, T)> = atoms.into_iter().filter(|a| a.1 != T::zero()).collect();
        for &(k, w) in &atoms {
            if k >= complex.num_nodes() {
                return Err(Error::NodeOutOfRange(k));
            }
            if !w.is_finite() {
                return Err(Error::BadMeasure("atom weight must be finite".into()));
            }
        }
        atoms.sort_by_key(|a| a.0);
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::BadMeasure("two atoms at one node".into()));
        }
        Ok(SignedMeasure {
            complex,
            density,
            atoms,
        })
    }

    pub fn zero(complex: CellComplex<T>) -> Self {
        let n = complex.num_cells();
        SignedMeasure {
            complex,
            density: vec![T::zero(); n],
            atoms: Vec::new(),
        }
    }

    pub fn complex(&self) -> &CellComplex<T> {
        &self.complex
    }

    pub fn density(&self) -> &[T] {
        &self.density
    }

    pub fn atoms(&self) -> &[(usize, T)] {
        &self.atoms
    }

    pub fn atom_at(&self, node: usize) -> Option<T> {
        self.atoms.iter().find(|a| a.0 == node).map(|a| a.1)
    }

    /// `(|theta|(T), |theta|)`.
    pub fn total_variation(&self, mu: &BaseMeasure<T>) -> Result<(T, SignedMeasure<T>)> {
        self.complex.check_same(mu.complex())?;
        let cells: T = (0..self.complex.num_cells())
            .map(|i| self.density[i].abs() * mu.cell_mass(i))
            .sum();
        let atoms: T = self.atoms.iter().map(|a| a.1.abs()).sum();
        let tv = SignedMeasure {
            complex: self.complex.clone(),
            density: self.density.iter().map(|d| d.abs()).collect(),
            atoms: self.atoms.iter().map(|&(k, w)| (k, w.abs())).collect(),
        };
        Ok((cells + atoms, tv))
    }

    /// `(theta^a, theta^s)` with respect to the atomless base measure.
    pub fn lebesgue_decompose(
        &self,
        mu: &BaseMeasure<T>,
    ) -> Result<(SignedMeasure<T>, SignedMeasure<T>)> {
        self.complex.check_same(mu.complex())?;
        let abs = SignedMeasure {
            complex: self.complex.clone(),
            density: self.density.clone(),
            atoms: Vec::new(),
        };
        let sing = SignedMeasure {
            complex: self.complex.clone(),
            density: vec![T::zero(); self.density.len()],
            atoms: self.atoms.clone(),
        };
        Ok((abs, sing))
    }

    pub fn rn_derivative(&self, base: DerivativeBase) -> Result<Derivative<T>> {
        match base {
            DerivativeBase::Base => {
                if !self.atoms.is_empty() {
                    return Err(Error::AtomsPresent);
                }
                Ok(Derivative::Density(self.density.clone()))
            }
            DerivativeBase::SingularVariation => Ok(Derivative::AtomSigns(
                self.atoms.iter().map(|&(k, w)| (k, w.signum())).collect(),
            )),
        }
    }

    /// `<y, theta> = int y d theta`, exact for piecewise-linear `y`.
    pub fn pair(&self, y: &PlFunction<T>, mu: &BaseMeasure<T>) -> Result<T> {
        self.complex.check_same(y.complex())?;
        self.complex.check_same(mu.complex())?;
        let cells: T = (0..self.complex.num_cells())
            .map(|i| {
                self.density[i] * mu.cell_mass(i) * (y.value(i) + y.value(i + 1)) * T::half()
            })
            .sum();
        let atoms: T = self.atoms.iter().map(|&(k, w)| w * y.value(k)).sum();
        Ok(cells + atoms)
    }

    /// Coefficients `c` with `<y, theta> = sum_k c_k y(t_k)` for every
    /// piecewise-linear `y` on this complex.
    pub fn node_coefficients(&self, mu: &BaseMeasure<T>) -> Result<Vec<T>> {
        self.complex.check_same(mu.complex())?;
        let mut c = vec![T::zero(); self.complex.num_nodes()];
        for i in 0..self.complex.num_cells() {
            let half = self.density[i] * mu.cell_mass(i) * T::half();
            c[i] = c[i] + half;
            c[i + 1] = c[i + 1] + half;
        }
        for &(k, w) in &self.atoms {
            c[k] = c[k] + w;
        }
        Ok(c)
    }

    pub fn refine(&self, r: &Refinement<T>) -> Self {
        let node_map: Vec<usize> = {
            let mut m = vec![usize::MAX; self.complex.num_nodes()];
            for (k, o) in r.origin.iter().enumerate() {
                if let Some(i) = o {
                    m[*i] = k;
                }
            }
            m
        };
        SignedMeasure {
            complex: r.complex.clone(),
            density: r.parent.iter().map(|&p| self.density[p]).collect(),
            atoms: self.atoms.iter().map(|&(k, w)| (node_map[k], w)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.complex.check_same(&other.complex)?;
        let density = self
            .density
            .iter()
            .zip(&other.density)
            .map(|(a, b)| *a + *b)
            .collect();
        let mut atoms = self.atoms.clone();
        for &(k, w) in &other.atoms {
            match atoms.iter_mut().find(|a| a.0 == k) {
                Some(a) => a.1 = a.1 + w,
                None => atoms.push((k, w)),
            }
        }
        Self::new(self.complex.clone(), density, atoms)
    }
}
