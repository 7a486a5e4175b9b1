use std::ops::{Add, Sub};

use super::coeff::{Coefficient, QComplex};
use super::poly::same_nvars;
use super::tensor::TensorPoly;
use crate::error::{Error, Result};

/// An `n × n` matrix over `𝒫 ⊗ 𝒫`, stored row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct KernelMatrix<C = QComplex> {
    dim: usize,
    nvars: usize,
    entries: Vec<TensorPoly<C>>,
}

impl<C: Coefficient> KernelMatrix<C> {
    pub fn zero(dim: usize, nvars: usize) -> Self {
        KernelMatrix {
            dim,
            nvars,
            entries: vec![TensorPoly::zero(nvars); dim * dim],
        }
    }

    /// `(1 ⊗ 1)·I_dim`.
    pub fn identity(dim: usize, nvars: usize) -> Self {
        let mut m = Self::zero(dim, nvars);
        for i in 0..dim {
            m.entries[i * dim + i] = TensorPoly::one(nvars);
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<TensorPoly<C>>>) -> Result<Self> {
        let dim = rows.len();
        let nvars = rows
            .first()
            .and_then(|r| r.first())
            .map(TensorPoly::nvars)
            .ok_or(Error::NoVariables)?;
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Shape(format!(
                    "row of length {} in a {dim}×{dim} matrix",
                    row.len()
                )));
            }
            for e in row {
                same_nvars(nvars, e.nvars())?;
                entries.push(e);
            }
        }
        Ok(KernelMatrix {
            dim,
            nvars,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &TensorPoly<C> {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: TensorPoly<C>) {
        assert_eq!(value.nvars(), self.nvars, "nvars mismatch");
        self.entries[i * self.dim + j] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[TensorPoly<C>]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(TensorPoly::is_zero)
    }

    /// Largest left and right leg lengths over all entries.
    pub fn leg_degrees(&self) -> (usize, usize) {
        self.entries.iter().fold((0, 0), |(a, b), e| {
            let (l, r) = e.leg_degrees();
            (a.max(l), b.max(r))
        })
    }

    /// `B* = (b_{ji}*)`: transpose with the tensor involution applied entrywise.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zero(n, self.nvars);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = self.get(j, i).involution();
            }
        }
        out
    }

    /// Matrix product where entries multiply with `♯`.
    pub fn sharp_product(&self, other: &Self) -> Result<Self> {
        same_nvars(self.nvars, other.nvars)?;
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "{}×{} times {}×{}",
                self.dim, self.dim, other.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = Self::zero(n, self.nvars);
        for i in 0..n {
            for j in 0..n {
                let mut acc = TensorPoly::zero(self.nvars);
                for k in 0..n {
                    acc = &acc + &self.get(i, k).sharp(other.get(k, j))?;
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> TensorPoly<C> {
        (0..self.dim).fold(TensorPoly::zero(self.nvars), |acc, i| &acc + self.get(i, i))
    }

    pub fn scale(&self, s: &C) -> Self {
        KernelMatrix {
            dim: self.dim,
            nvars: self.nvars,
            entries: self.entries.iter().map(|e| e.scale(s)).collect(),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> KernelMatrix<D> {
        KernelMatrix {
            dim: self.dim,
            nvars: self.nvars,
            entries: self.entries.iter().map(|e| e.map_coeffs(&f)).collect(),
        }
    }

    pub fn to_c64(&self) -> KernelMatrix<num_complex::Complex64> {
        self.map_coeffs(Coefficient::to_c64)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&TensorPoly<C>, &TensorPoly<C>) -> TensorPoly<C>,
    ) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        KernelMatrix {
            dim: self.dim,
            nvars: self.nvars,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: &C, other: &Self) -> Self {
        if *s == C::one() {
            return self + other;
        }
        self.zip_with(other, |a, b| a + &b.scale(s))
    }
}

impl<C: Coefficient> Add for &KernelMatrix<C> {
    type Output = KernelMatrix<C>;
    fn add(self, rhs: &KernelMatrix<C>) -> KernelMatrix<C> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<C: Coefficient> Sub for &KernelMatrix<C> {
    type Output = KernelMatrix<C>;
    fn sub(self, rhs: &KernelMatrix<C>) -> KernelMatrix<C> {
        self.zip_with(rhs, |a, b| a - b)
    }
}
