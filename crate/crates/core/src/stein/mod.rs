//! Free Stein kernels and Stein discrepancies.
//!
//! For a potential `V` and a state `φ` of `X`, a kernel `A` satisfies
//! `⟨𝒟V(X) − φ(𝒟V(X)), P(X)⟩_φ = ⟨A, 𝒥P(X)⟩` for every polynomial tuple `P`.
//! The explicit kernel `½ δ(𝒟ᵢV) ♯ δ(tⱼ)` satisfies this for tracial `φ`;
//! the kernel nearest to the identity is approached by projecting onto
//! Jacobians of bounded degree.

mod minimal;
mod report;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ncalg::{
    cyclic_gradient, explicit_kernel, is_quadratic_potential, jacobian, Coefficient, KernelMatrix,
    NcPoly, PolyTuple, Word,
};
use crate::states::{inner_matrix, inner_tuple, moment_of_poly, require_order, MomentFunctional};
use crate::tol::Tolerances;

pub use minimal::{minimal_kernel, MinimalKernelResult, TruncationBasis};
pub use report::{discrepancy_bounds, DiscrepancyReport, SteinReport};

/// A state, a potential and the centering data `φ(𝒟ᵢV(X))`.
pub struct SteinProblem<'a> {
    phi: &'a dyn MomentFunctional,
    v: NcPoly,
    gradient: PolyTuple,
    gradient_c: PolyTuple<Complex64>,
    centering: Vec<Complex64>,
    defect: f64,
    tol: Tolerances,
}

impl<'a> SteinProblem<'a> {
    pub fn new(phi: &'a dyn MomentFunctional, v: NcPoly) -> Result<Self> {
        Self::with_tolerances(phi, v, Tolerances::default())
    }

    pub fn with_tolerances(
        phi: &'a dyn MomentFunctional,
        v: NcPoly,
        tol: Tolerances,
    ) -> Result<Self> {
        if v.nvars() != phi.nvars() {
            return Err(Error::NvarsMismatch {
                left: v.nvars(),
                right: phi.nvars(),
            });
        }
        let gradient = cyclic_gradient(&v);
        let gradient_c = gradient.to_c64();
        let centering = gradient_c
            .entries()
            .iter()
            .map(|g| moment_of_poly(phi, g))
            .collect::<Result<Vec<_>>>()?;
        let defect = centering.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Ok(SteinProblem {
            phi,
            v,
            gradient,
            gradient_c,
            centering,
            defect,
            tol,
        })
    }

    pub fn phi(&self) -> &'a dyn MomentFunctional {
        self.phi
    }

    pub fn potential(&self) -> &NcPoly {
        &self.v
    }

    pub fn nvars(&self) -> usize {
        self.v.nvars()
    }

    /// `𝒟V`.
    pub fn gradient(&self) -> &PolyTuple {
        &self.gradient
    }

    /// `φ(𝒟ᵢV(X))` for each `i`.
    pub fn centering(&self) -> &[Complex64] {
        &self.centering
    }

    /// `maxᵢ |φ(𝒟ᵢV(X))|`.
    pub fn centering_defect(&self) -> f64 {
        self.defect
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// A kernel can only exist when `φ(𝒟V(X)) = 0`.
    pub fn is_admissible(&self) -> bool {
        self.defect <= self.tol.admissibility
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::Inadmissible {
                defect: self.defect,
                tolerance: self.tol.admissibility,
            })
        }
    }
}

/// `⟨𝒟V(X) − φ(𝒟V(X)), P(X)⟩_φ − ⟨A, 𝒥P(X)⟩`.
pub fn stein_residual<C: Coefficient>(
    prob: &SteinProblem<'_>,
    a: &KernelMatrix<C>,
    p: &PolyTuple<C>,
) -> Result<Complex64> {
    let n = prob.nvars();
    if a.dim() != n || p.len() != n {
        return Err(Error::Shape(format!(
            "kernel of size {} and tuple of length {} for {n} variables",
            a.dim(),
            p.len()
        )));
    }
    let p = p.to_c64();
    let a = a.to_c64();
    let jp = jacobian(&p);
    let (al, ar) = a.leg_degrees();
    let (jl, jr) = jp.leg_degrees();
    require_order(
        prob.phi,
        (prob.gradient_c.degree() + p.degree())
            .max(al + jl)
            .max(ar + jr),
    )?;

    let mut lhs = inner_tuple(prob.phi, &prob.gradient_c, &p)?;
    for (c, pi) in prob.centering.iter().zip(p.entries()) {
        lhs -= c * moment_of_poly(prob.phi, pi)?.conj();
    }
    Ok(lhs - inner_matrix(prob.phi, &a, &jp)?)
}

/// Largest `|stein_residual|` over the monomial tuples of degree `≤ d`.
pub fn max_basis_residual<C: Coefficient>(
    prob: &SteinProblem<'_>,
    a: &KernelMatrix<C>,
    degree: usize,
) -> Result<f64> {
    let a = a.to_c64();
    let basis = TruncationBasis::new(prob.nvars(), degree);
    (0..basis.len()).try_fold(0.0f64, |worst, k| {
        Ok(worst.max(stein_residual(prob, &a, &basis.tuple(k).to_c64())?.norm()))
    })
}

/// `‖A(X) − (1⊗1)·I_n‖²` for the explicit kernel `A`, with the bounds in
/// terms of `m₄ = maxᵢ φ(xᵢ⁴)` when `V = ½Σtᵢ²`.
#[derive(Clone, Debug)]
pub struct ExplicitDistance {
    /// Generic sesquilinear evaluation.
    pub distance_sq: f64,
    /// Moment expansion, quadratic potential only.
    pub closed_form_sq: Option<f64>,
    pub m4: Option<f64>,
    /// `(n² + n²m₄ − n)/2`.
    pub bound_stated: Option<f64>,
    /// `(n² + n²m₄)/2`, valid for tracial `φ` with identity covariance.
    pub bound_corrected: Option<f64>,
    /// Whether `φ(xᵢxⱼ) = δᵢⱼ` to within the identity tolerance.
    pub isotropic: bool,
}

/// Closed-form `‖A − I‖²` for `V = ½Σtᵢ²` and centered `X`:
/// `¼ Σᵢⱼ [2φ(xᵢxⱼ²xᵢ) + 4 Re φ(xᵢxⱼ)² + 2φ(xᵢ²)φ(xⱼ²)] − 2 Σᵢ φ(xᵢ²) + n`.
pub fn quadratic_distance_closed_form(phi: &(impl MomentFunctional + ?Sized)) -> Result<f64> {
    require_order(phi, 4)?;
    let n = phi.nvars();
    let m = |letters: &[usize]| phi.moment(&Word::from_letters(letters.iter().copied()));
    let mut norm_sq = 0.0;
    let mut trace = 0.0;
    for i in 0..n {
        trace += m(&[i, i])?.re;
        for j in 0..n {
            let c = m(&[i, j])?;
            norm_sq += 0.25
                * (2.0 * m(&[i, j, j, i])?.re
                    + 4.0 * (c * c).re
                    + 2.0 * m(&[i, i])?.re * m(&[j, j])?.re);
        }
    }
    Ok(norm_sq - 2.0 * trace + n as f64)
}

pub fn explicit_kernel_distance_sq(prob: &SteinProblem<'_>) -> Result<ExplicitDistance> {
    let n = prob.nvars();
    let phi = prob.phi;
    let a = explicit_kernel(&prob.v).to_c64();
    let diff = &a - &KernelMatrix::identity(n, n);
    let quadratic = is_quadratic_potential(&prob.v);
    if quadratic {
        prob.require_admissible()?;
        require_order(phi, 4)?;
    }
    let distance_sq = inner_matrix(phi, &diff, &diff)?.re;

    let m4 = if phi.max_order() >= 4 {
        Some(
            (0..n)
                .map(|i| phi.moment(&Word::power(i, 4)).map(|v| v.re))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max),
        )
    } else {
        None
    };
    let isotropic = phi.max_order() >= 2
        && (0..n).all(|i| {
            (0..n).all(|j| {
                let target = if i == j { 1.0 } else { 0.0 };
                phi.moment(&Word::from_letters([i, j]))
                    .map(|v| (v - target).norm() <= prob.tol.admissibility)
                    .unwrap_or(false)
            })
        });

    let mut out = ExplicitDistance {
        distance_sq,
        closed_form_sq: None,
        m4,
        bound_stated: None,
        bound_corrected: None,
        isotropic,
    };
    if quadratic {
        let closed = quadratic_distance_closed_form(phi)?;
        if (closed - distance_sq).abs() > 1e-9 * distance_sq.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "closed-form distance {closed:.17e} disagrees with the generic pairing {distance_sq:.17e}"
            )));
        }
        let nf = n as f64;
        let m4 = m4.expect("order 4 available");
        out.closed_form_sq = Some(closed);
        out.bound_stated = Some((nf * nf + nf * nf * m4 - nf) / 2.0);
        out.bound_corrected = Some((nf * nf + nf * nf * m4) / 2.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::{q, qi};
    use crate::states::{CumulantSpec, CumulantState};

    fn t(n: usize, i: usize) -> NcPoly {
        NcPoly::var(n, i).unwrap()
    }

    #[test]
    fn identity_is_a_kernel_for_semicircular() {
        let phi = CumulantState::new(CumulantSpec::semicircular(2));
        let prob = SteinProblem::new(&phi, NcPoly::quadratic_potential(2)).unwrap();
        let id = KernelMatrix::identity(2, 2);
        let p = PolyTuple::new(vec![
            &t(2, 0).pow(3) + &(&t(2, 1) * &t(2, 0)),
            t(2, 1).pow(4),
        ])
        .unwrap();
        assert!(stein_residual(&prob, &id, &p).unwrap().norm() < 1e-12);
    }

    #[test]
    fn explicit_kernel_on_free_poisson() {
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 16));
        let v = &NcPoly::quadratic_potential(1) + &t(1, 0).pow(3).scale(&q(1, 3));
        let prob = SteinProblem::new(&phi, v).unwrap();
        let a = explicit_kernel(prob.potential());
        let p = PolyTuple::new(vec![&t(1, 0).pow(3) - &t(1, 0).scale(&qi(2))]).unwrap();
        assert!(stein_residual(&prob, &a, &p).unwrap().norm() < 1e-10);
    }

    #[test]
    fn constant_test_tuple_gives_zero() {
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(2, 8));
        let v = &t(2, 0).pow(3) + &(&t(2, 0) * &t(2, 1));
        let prob = SteinProblem::new(&phi, v).unwrap();
        let c = PolyTuple::new(vec![
            NcPoly::constant(2, qi(3)),
            NcPoly::constant(2, q(1, 2)),
        ])
        .unwrap();
        let a = explicit_kernel(prob.potential());
        assert_eq!(stein_residual(&prob, &a, &c).unwrap().norm(), 0.0);
    }

    #[test]
    fn semicircular_distance_from_identity() {
        let phi = CumulantState::new(CumulantSpec::semicircular(1));
        let prob = SteinProblem::new(&phi, NcPoly::quadratic_potential(1)).unwrap();
        let d = explicit_kernel_distance_sq(&prob).unwrap();
        assert!((d.distance_sq - 1.5).abs() < 1e-12);
        assert!((d.closed_form_sq.unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(d.bound_stated, Some(1.0));
        assert_eq!(d.bound_corrected, Some(1.5));
        assert!(d.isotropic);
    }

    #[test]
    fn free_poisson_distance_from_identity() {
        // ½m₄ + 3/2 m₂² − 2m₂ + 1 with m₂ = 1, m₄ = 3
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 16));
        let prob = SteinProblem::new(&phi, NcPoly::quadratic_potential(1)).unwrap();
        let d = explicit_kernel_distance_sq(&prob).unwrap();
        assert!((d.distance_sq - 2.0).abs() < 1e-12);
        assert_eq!(d.m4, Some(3.0));
        assert_eq!(d.bound_stated, Some(1.5));
        assert_eq!(d.bound_corrected, Some(2.0));
    }

    #[test]
    fn explicit_kernel_needs_traciality() {
        // κ(1,1,2) without its rotations: a Hermitian but non-tracial state
        let mut spec = CumulantSpec::semicircular(2);
        spec.set(Word::from_letters([0, 0, 1]), Complex64::new(0.3, 0.0))
            .unwrap();
        spec.set(Word::from_letters([1, 0, 0]), Complex64::new(0.3, 0.0))
            .unwrap();
        let phi = CumulantState::new(spec);
        assert!(!phi.is_tracial());
        let v = &NcPoly::quadratic_potential(2) + &(&t(2, 0) * &t(2, 1)).scale(&q(1, 1));
        let prob = SteinProblem::new(&phi, v).unwrap();
        let a = explicit_kernel(prob.potential());
        assert!(max_basis_residual(&prob, &a, 2).unwrap() > 1e-3);

        let tracial = CumulantState::new(CumulantSpec::free_poisson_centered(2, 8));
        let prob = SteinProblem::new(&tracial, prob.potential().clone()).unwrap();
        assert!(max_basis_residual(&prob, &a, 3).unwrap() < 1e-10);
    }

    #[test]
    fn uncentered_quadratic_problem_rejected() {
        let mut spec = CumulantSpec::semicircular(1);
        spec.set(Word::letter(0), Complex64::new(0.5, 0.0)).unwrap();
        let phi = CumulantState::new(spec);
        let prob = SteinProblem::new(&phi, NcPoly::quadratic_potential(1)).unwrap();
        assert!(!prob.is_admissible());
        assert!(matches!(
            explicit_kernel_distance_sq(&prob),
            Err(Error::Inadmissible { .. })
        ));
    }
}
