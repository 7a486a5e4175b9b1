//! Hermitian forms on monomial spans shared by the Stein and Poincaré solvers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::ncalg::{partial, NcPoly, TensorPoly, Word};
use crate::states::{inner_tensor, MomentFunctional};

/// `∂ⱼ w` for every word and every variable, with floating coefficients.
pub(crate) fn word_partials(words: &[Word], nvars: usize) -> Vec<Vec<TensorPoly<Complex64>>> {
    words
        .iter()
        .map(|w| {
            let p = NcPoly::monomial(nvars, w.clone(), Complex64::new(1.0, 0.0));
            (0..nvars)
                .map(|j| partial(j, &p).expect("index in range"))
                .collect()
        })
        .collect()
}

/// `M[a, b] = Σⱼ ⟨∂ⱼ w_b, ∂ⱼ w_a⟩`, so that `αᴴ M α = Σⱼ ‖∂ⱼ(Σ_u α_u u)‖²`.
pub(crate) fn dirichlet_gram(
    phi: &(impl MomentFunctional + ?Sized),
    partials: &[Vec<TensorPoly<Complex64>>],
) -> Result<DMatrix<Complex64>> {
    let m = partials.len();
    let rows: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|a| {
            (a..m)
                .map(|b| {
                    partials[b]
                        .iter()
                        .zip(&partials[a])
                        .map(|(pb, pa)| inner_tensor(phi, pb, pa))
                        .sum::<Result<Complex64>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut g = DMatrix::zeros(m, m);
    for (a, row) in rows.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            let b = a + k;
            g[(b, a)] = v.conj();
            g[(a, b)] = *v;
        }
    }
    Ok(g)
}
