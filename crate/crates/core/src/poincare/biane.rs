use serde::Serialize;

use super::{default_norm_order, poincare_lower_bound, voiculescu_bound, VoiculescuBound};
use crate::error::{Error, Result};
use crate::ncalg::{NcPoly, Word};
use crate::numfmt::sig17;
use crate::states::MomentFunctional;
use crate::stein::{minimal_kernel, SteinProblem};
use crate::Tolerances;

const HYPOTHESIS_TOL: f64 = 1e-8;
const CONTRADICTION_SLACK: f64 = 1e-6;

/// Checks `1 + Σ_d²/n ≤ C_opt` against the computable quantities: `C_d`
/// from below and the Voiculescu bound from above.
#[derive(Clone, Debug, Serialize)]
pub struct BianeReport {
    pub n: usize,
    pub degree: usize,
    #[serde(serialize_with = "sig17")]
    pub c_lower: f64,
    #[serde(serialize_with = "sig17")]
    pub sigma_lower_sq: f64,
    /// `1 + Σ_d²/n`.
    #[serde(serialize_with = "sig17")]
    pub required: f64,
    /// `C_d − required`; may be negative since `C_d` only bounds `C_opt`
    /// from below.
    #[serde(serialize_with = "sig17")]
    pub lower_margin: f64,
    /// Applicable Voiculescu bound minus `required`.
    #[serde(serialize_with = "sig17")]
    pub upper_margin: f64,
    /// Set when a certified upper bound falls below `required − 1e-6`.
    pub contradiction: bool,
    pub voiculescu: VoiculescuBound,
}

pub fn biane_gap_check(
    phi: &dyn MomentFunctional,
    degree: usize,
    tol: &Tolerances,
) -> Result<BianeReport> {
    let n = phi.nvars();
    let mut trace = 0.0;
    for i in 0..n {
        let mean = phi.moment(&Word::letter(i))?;
        if mean.norm() > HYPOTHESIS_TOL {
            return Err(Error::Precondition(format!(
                "x{} is not centered: φ = {mean}",
                i + 1
            )));
        }
        trace += phi.moment(&Word::power(i, 2))?.re;
    }
    if (trace - n as f64).abs() > HYPOTHESIS_TOL {
        return Err(Error::Precondition(format!(
            "Σ φ(xᵢ²) = {trace}, expected {n}"
        )));
    }

    let est = poincare_lower_bound(phi, degree, tol)?;
    let prob = SteinProblem::with_tolerances(phi, NcPoly::quadratic_potential(n), *tol)?;
    let sigma_lower_sq = minimal_kernel(&prob, degree)?.sigma_lower_sq;
    let voiculescu = voiculescu_bound(phi, default_norm_order(phi.max_order()))?;

    let required = 1.0 + sigma_lower_sq / n as f64;
    let upper_margin = voiculescu.applicable() - required;
    Ok(BianeReport {
        n,
        degree,
        c_lower: est.c_lower,
        sigma_lower_sq,
        required,
        lower_margin: est.c_lower - required,
        upper_margin,
        contradiction: voiculescu.certified && upper_margin < -CONTRADICTION_SLACK,
        voiculescu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{CumulantSpec, CumulantState};

    #[test]
    fn semicircle_is_tight() {
        let phi = CumulantState::new(CumulantSpec::semicircular(2));
        let r = biane_gap_check(&phi, 3, &Tolerances::default()).unwrap();
        assert!(r.sigma_lower_sq.abs() < 1e-10);
        assert!(r.lower_margin.abs() < 1e-6);
        assert!(!r.contradiction);
    }

    #[test]
    fn free_poisson_margins() {
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 16));
        for d in 1..=4 {
            let r = biane_gap_check(&phi, d, &Tolerances::default()).unwrap();
            assert!(r.voiculescu.certified);
            assert!(r.upper_margin > 0.0 && !r.contradiction);
            assert!(r.c_lower >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn hypothesis_enforced() {
        let spec = CumulantSpec::semicircular_with_covariance(&[vec![2.0]]).unwrap();
        let phi = CumulantState::new(spec);
        assert!(matches!(
            biane_gap_check(&phi, 2, &Tolerances::default()),
            Err(Error::Precondition(_))
        ));
    }
}
