//! Hermitian eigendecomposition and pseudo-inverse helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl HermEigen {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Indices of eigenvalues above `rel_tol · max(|λ|)`.
    pub fn range_indices(&self, rel_tol: f64) -> Vec<usize> {
        let cut = rel_tol * self.max_abs();
        (0..self.values.len())
            .filter(|&k| self.values[k] > cut && self.values[k] > 0.0)
            .collect()
    }

    pub fn column(&self, k: usize) -> DVector<Complex64> {
        self.vectors.column(k).into_owned()
    }
}

/// Symmetrizes `m` as `(m + mᴴ)/2` and diagonalizes it.
pub fn herm_eigen(m: &DMatrix<Complex64>) -> HermEigen {
    let n = m.nrows();
    if n == 0 {
        return HermEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermEigen { values, vectors }
}

/// Minimum-norm least-squares solution of `g x = r` for Hermitian PSD `g`.
pub struct PinvSolution {
    pub x: DVector<Complex64>,
    pub rank: usize,
    pub null_dim: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

pub fn pinv_solve(g: &DMatrix<Complex64>, r: &DVector<Complex64>, rel_tol: f64) -> PinvSolution {
    let eig = herm_eigen(g);
    let keep = eig.range_indices(rel_tol);
    let mut x = DVector::zeros(g.nrows());
    for &k in &keep {
        let v = eig.column(k);
        let coef = v.dotc(r) / eig.values[k];
        x += v * coef;
    }
    PinvSolution {
        x,
        rank: keep.len(),
        null_dim: g.nrows() - keep.len(),
        min_eigenvalue: eig.min(),
        max_eigenvalue: eig.max(),
    }
}
