//! Minimal-norm kernels on truncated Jacobian spans.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::SteinProblem;
use crate::error::{Error, Result};
use crate::forms::{dirichlet_gram, word_partials};
use crate::linalg::pinv_solve;
use crate::ncalg::{explicit_kernel, qi, KernelMatrix, NcPoly, PolyTuple, Word};
use crate::states::{inner_tensor, require_order};

/// The monomial tuples `e_{w,i}` (word `w` of length `≤ d` in slot `i`),
/// words in graded-lex order and slots innermost.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationBasis {
    nvars: usize,
    degree: usize,
    words: Vec<Word>,
}

impl TruncationBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        TruncationBasis {
            nvars,
            degree,
            words: Word::all_up_to(nvars, degree),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.words.len() * self.nvars
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// `(word, slot)` of element `k`.
    pub fn element(&self, k: usize) -> (&Word, usize) {
        (&self.words[k / self.nvars], k % self.nvars)
    }

    pub fn tuple(&self, k: usize) -> PolyTuple {
        let (w, slot) = self.element(k);
        PolyTuple::unit(
            self.nvars,
            slot,
            NcPoly::monomial(self.nvars, w.clone(), qi(1)),
        )
    }
}

#[derive(Clone, Debug)]
pub struct MinimalKernelResult {
    pub degree: usize,
    /// Projection coefficients over the [`TruncationBasis`].
    pub coefficients: Vec<Complex64>,
    pub gram_rank: usize,
    pub null_dim: usize,
    pub gram_min_eigenvalue: f64,
    pub gram_max_eigenvalue: f64,
    /// `Σ_d² = Re(rᴴ G⁺ r)`, a lower bound on the squared Stein discrepancy.
    pub sigma_lower_sq: f64,
    /// `(1⊗1)·I_n + Σ_b c_b 𝒥e_b`.
    pub kernel: KernelMatrix<Complex64>,
}

/// Projects `A₀ − I` onto `span{𝒥e_b(X)}` for the degree-`d` basis, with
/// `A₀` the explicit kernel. With `G[a, b] = ⟨𝒥e_b, 𝒥e_a⟩` and
/// `r_a = ⟨A₀ − I, 𝒥e_a⟩`, the coefficients are `c = G⁺ r`.
pub fn minimal_kernel(prob: &SteinProblem<'_>, degree: usize) -> Result<MinimalKernelResult> {
    prob.require_admissible()?;
    let n = prob.nvars();
    let phi = prob.phi();
    let basis = TruncationBasis::new(n, degree);
    let a0 = explicit_kernel(prob.potential()).to_c64();
    let resid = &a0 - &KernelMatrix::identity(n, n);

    let leg = degree.saturating_sub(1);
    let (rl, rr) = resid.leg_degrees();
    require_order(phi, (2 * leg).max(rl + leg).max(rr + leg))?;

    let partials = word_partials(basis.words(), n);
    let e = dirichlet_gram(phi, &partials)?;
    let dim = basis.len();
    let mut g = DMatrix::<Complex64>::zeros(dim, dim);
    let mut r = DVector::<Complex64>::zeros(dim);
    for (wa, pa) in partials.iter().enumerate() {
        for slot in 0..n {
            let ka = wa * n + slot;
            for wb in 0..partials.len() {
                g[(ka, wb * n + slot)] = e[(wa, wb)];
            }
            r[ka] = (0..n)
                .map(|j| inner_tensor(phi, resid.get(slot, j), &pa[j]))
                .sum::<Result<Complex64>>()?;
        }
    }

    let sol = pinv_solve(&g, &r, prob.tolerances().pinv);
    if sol.min_eigenvalue < -prob.tolerances().psd * sol.max_eigenvalue.max(1.0) {
        return Err(Error::InvalidState(format!(
            "Jacobian Gram matrix has eigenvalue {:.3e}",
            sol.min_eigenvalue
        )));
    }
    let sigma_lower_sq = r.dotc(&sol.x).re;

    let mut kernel = KernelMatrix::<Complex64>::identity(n, n);
    for k in 0..dim {
        let c = sol.x[k];
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (w, slot) = (k / n, k % n);
        for (j, d) in partials[w].iter().enumerate() {
            let entry = kernel.get(slot, j) + &d.scale(&c);
            kernel.set(slot, j, entry);
        }
    }

    Ok(MinimalKernelResult {
        degree,
        coefficients: sol.x.iter().copied().collect(),
        gram_rank: sol.rank,
        null_dim: sol.null_dim,
        gram_min_eigenvalue: sol.min_eigenvalue,
        gram_max_eigenvalue: sol.max_eigenvalue,
        sigma_lower_sq,
        kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::jacobian;
    use crate::states::{inner_matrix, CumulantSpec, CumulantState};

    #[test]
    fn basis_size() {
        assert_eq!(TruncationBasis::new(2, 3).len(), 2 * (1 + 2 + 4 + 8));
        let b = TruncationBasis::new(2, 1);
        assert_eq!(b.element(0), (&Word::empty(), 0));
        assert_eq!(b.element(3), (&Word::letter(0), 1));
    }

    #[test]
    fn semicircular_discrepancy_vanishes() {
        let phi = CumulantState::new(CumulantSpec::semicircular(2));
        let prob = SteinProblem::new(&phi, NcPoly::quadratic_potential(2)).unwrap();
        for d in 0..=3 {
            let res = minimal_kernel(&prob, d).unwrap();
            assert!(
                res.sigma_lower_sq.abs() < 1e-10,
                "d = {d}: {}",
                res.sigma_lower_sq
            );
        }
    }

    #[test]
    fn free_poisson_sequence_and_orthogonality() {
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 16));
        let prob = SteinProblem::new(&phi, NcPoly::quadratic_potential(1)).unwrap();
        let a0 = explicit_kernel(prob.potential()).to_c64();
        let mut last = -1.0;
        for d in 0..=4 {
            let res = minimal_kernel(&prob, d).unwrap();
            assert!(res.sigma_lower_sq >= last - 1e-12);
            assert!(res.sigma_lower_sq <= 2.0 + 1e-9);
            last = res.sigma_lower_sq;
            let diff = &a0 - &res.kernel;
            let basis = TruncationBasis::new(1, d);
            for k in 0..basis.len() {
                let jp = jacobian(&basis.tuple(k)).to_c64();
                assert!(inner_matrix(&phi, &diff, &jp).unwrap().norm() < 1e-8);
            }
            let id = KernelMatrix::identity(1, 1);
            let dist = inner_matrix(&phi, &(&res.kernel - &id), &(&res.kernel - &id))
                .unwrap()
                .re;
            assert!((dist - res.sigma_lower_sq).abs() < 1e-9);
        }
        assert!((last - 0.5).abs() < 1e-9, "{last}");
    }

    #[test]
    fn constants_form_the_null_space() {
        let phi = CumulantState::new(CumulantSpec::semicircular(1));
        let prob = SteinProblem::new(&phi, NcPoly::quadratic_potential(1)).unwrap();
        let res = minimal_kernel(&prob, 0).unwrap();
        assert_eq!(res.sigma_lower_sq, 0.0);
        assert_eq!((res.gram_rank, res.null_dim), (0, 1));
        assert_eq!(minimal_kernel(&prob, 2).unwrap().null_dim, 1);
    }
}
