//! Discrepancy bound reports.

use serde::Serialize;

use super::{explicit_kernel_distance_sq, max_basis_residual, minimal_kernel, SteinProblem};
use crate::error::Result;
use crate::ncalg::json::PolyJson;
use crate::ncalg::{explicit_kernel, is_quadratic_potential, PolyTuple};
use crate::numfmt::{sig17, sig17_opt};
use crate::states::inner_tuple;

/// Lower and upper estimates of the squared Stein discrepancy.
#[derive(Clone, Debug)]
pub struct DiscrepancyReport {
    pub degree: usize,
    /// `Σ_d²` from the truncated minimal kernel.
    pub lower: f64,
    /// `‖A₀ − I‖²` for the explicit kernel.
    pub upper_explicit: f64,
    /// Largest Stein identity residual of `A₀` on degree-`d` test tuples.
    pub explicit_residual: f64,
    /// Whether that residual is within the identity tolerance.
    pub explicit_verified: bool,
    /// `n + C‖𝒟V(X)‖² − 2 Re⟨𝒟V(X), X⟩_φ`, when a Poincaré constant is given.
    pub upper_poincare: Option<f64>,
    /// `n(C − 1)`, for quadratic `V` and centered isotropic `X`.
    pub upper_isotropic: Option<f64>,
    pub poincare_constant: Option<f64>,
    pub gram_rank: usize,
    pub null_dim: usize,
    pub closed_form: Option<f64>,
    pub m4: Option<f64>,
    pub bound_stated: Option<f64>,
    pub bound_corrected: Option<f64>,
    /// Whether `lower ≤ upper + 1e-8` for every upper estimate.
    pub consistent: bool,
}

/// Computes `Σ_d²` and the available upper bounds. `poincare_constant` must
/// be an upper bound on the free Poincaré constant for `upper_poincare` to be
/// a valid bound.
pub fn discrepancy_bounds(
    prob: &SteinProblem<'_>,
    degree: usize,
    poincare_constant: Option<f64>,
) -> Result<DiscrepancyReport> {
    prob.require_admissible()?;
    let n = prob.nvars() as f64;
    let minimal = minimal_kernel(prob, degree)?;
    let explicit = explicit_kernel_distance_sq(prob)?;
    let explicit_residual = max_basis_residual(prob, &explicit_kernel(prob.potential()), degree)?;

    let (upper_poincare, upper_isotropic) = match poincare_constant {
        Some(c) => {
            let g = prob.gradient().to_c64();
            let x = PolyTuple::coordinates(prob.nvars());
            let grad_sq = inner_tuple(prob.phi(), &g, &g)?.re;
            let cross = inner_tuple(prob.phi(), &g, &x)?.re;
            let iso = (is_quadratic_potential(prob.potential()) && explicit.isotropic)
                .then_some(n * (c - 1.0));
            (Some(n + c * grad_sq - 2.0 * cross), iso)
        }
        None => (None, None),
    };

    let lower = minimal.sigma_lower_sq;
    let consistent = [Some(explicit.distance_sq), upper_poincare, upper_isotropic]
        .into_iter()
        .flatten()
        .all(|u| lower <= u + 1e-8);

    Ok(DiscrepancyReport {
        degree,
        lower,
        upper_explicit: explicit.distance_sq,
        explicit_residual,
        explicit_verified: explicit_residual <= prob.tolerances().identity,
        upper_poincare,
        upper_isotropic,
        poincare_constant,
        gram_rank: minimal.gram_rank,
        null_dim: minimal.null_dim,
        closed_form: explicit.closed_form_sq,
        m4: explicit.m4,
        bound_stated: explicit.bound_stated,
        bound_corrected: explicit.bound_corrected,
        consistent,
    })
}

/// Serializable form of a [`DiscrepancyReport`].
#[derive(Serialize)]
pub struct SteinReport {
    pub n: usize,
    pub potential: PolyJson,
    pub degree: usize,
    #[serde(serialize_with = "sig17")]
    pub sigma_lower_sq: f64,
    #[serde(serialize_with = "sig17")]
    pub upper_explicit_sq: f64,
    #[serde(serialize_with = "sig17")]
    pub explicit_kernel_residual: f64,
    pub explicit_kernel_verified: bool,
    #[serde(serialize_with = "sig17_opt")]
    pub upper_poincare_sq: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub upper_isotropic_sq: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub poincare_constant: Option<f64>,
    pub gram_rank: usize,
    pub null_dim: usize,
    #[serde(serialize_with = "sig17")]
    pub centering_defect: f64,
    #[serde(serialize_with = "sig17_opt")]
    pub closed_form_sq: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub m4: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub bound_stated: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub bound_corrected: Option<f64>,
    pub consistent: bool,
}

impl SteinReport {
    pub fn new(prob: &SteinProblem<'_>, r: &DiscrepancyReport) -> Self {
        SteinReport {
            n: prob.nvars(),
            potential: PolyJson::from_poly(prob.potential()),
            degree: r.degree,
            sigma_lower_sq: r.lower,
            upper_explicit_sq: r.upper_explicit,
            explicit_kernel_residual: r.explicit_residual,
            explicit_kernel_verified: r.explicit_verified,
            upper_poincare_sq: r.upper_poincare,
            upper_isotropic_sq: r.upper_isotropic,
            poincare_constant: r.poincare_constant,
            gram_rank: r.gram_rank,
            null_dim: r.null_dim,
            centering_defect: prob.centering_defect(),
            closed_form_sq: r.closed_form,
            m4: r.m4,
            bound_stated: r.bound_stated,
            bound_corrected: r.bound_corrected,
            consistent: r.consistent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::{qi, NcPoly};
    use crate::states::{CumulantSpec, CumulantState};

    #[test]
    fn semicircular_bounds_collapse() {
        let phi = CumulantState::new(CumulantSpec::semicircular(1));
        let prob = SteinProblem::new(&phi, NcPoly::quadratic_potential(1)).unwrap();
        let r = discrepancy_bounds(&prob, 3, Some(1.0)).unwrap();
        assert!(r.lower.abs() < 1e-10);
        assert!(r.upper_poincare.unwrap().abs() < 1e-12);
        assert_eq!(r.upper_isotropic, Some(0.0));
        assert!(r.consistent);
        assert!(r.explicit_verified);
    }

    #[test]
    fn constant_potential() {
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 16));
        let prob = SteinProblem::new(&phi, NcPoly::constant(1, qi(5))).unwrap();
        let r = discrepancy_bounds(&prob, 2, Some(4.0)).unwrap();
        assert_eq!(r.upper_poincare, Some(1.0));
        // projection of −I onto Jacobians: the coordinate tuple alone already
        // reaches it, so Σ² = ‖I‖² = 1
        assert!((r.lower - 1.0).abs() < 1e-9);
        assert_eq!(r.upper_explicit, 1.0);
    }

    #[test]
    fn report_serializes() {
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 16));
        let prob = SteinProblem::new(&phi, NcPoly::quadratic_potential(1)).unwrap();
        let r = discrepancy_bounds(&prob, 3, None).unwrap();
        let s = serde_json::to_string(&SteinReport::new(&prob, &r)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["upper_explicit_sq"].as_f64(), Some(2.0));
        assert!(v["upper_poincare_sq"].is_null());
    }
}
