//! Free central limit rates computed exactly in cumulant space.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ncalg::{NcPoly, Word};
use crate::numfmt::fmt17;
use crate::poincare::{default_norm_order, poincare_lower_bound, voiculescu_bound};
use crate::states::{CumulantSpec, CumulantState, MomentFunctional};
use crate::stein::{minimal_kernel, SteinProblem};
use crate::Tolerances;

const HYPOTHESIS_TOL: f64 = 1e-9;

/// Cumulants of `k^{-1/2}(X⁽¹⁾ + … + X⁽ᵏ⁾)` for free copies of `X`.
pub fn rescale_cumulants(base: &CumulantSpec, k: u64) -> Result<CumulantSpec> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    Ok(base.rescaled(k))
}

/// A CLT rate experiment on a centered base with identity covariance.
#[derive(Clone, Debug)]
pub struct CltExperiment {
    base: CumulantSpec,
    ks: Vec<u64>,
    degree: usize,
}

impl CltExperiment {
    pub fn new(base: CumulantSpec, ks: Vec<u64>, degree: usize) -> Result<Self> {
        let n = base.nvars();
        for i in 0..n {
            let mean = base.get(&Word::letter(i));
            if mean.norm() > HYPOTHESIS_TOL {
                return Err(Error::Precondition(format!(
                    "base is not centered: κ({}) = {mean}",
                    i + 1
                )));
            }
            for j in 0..n {
                let c = base.get(&Word::from_letters([i, j]));
                let target = if i == j { 1.0 } else { 0.0 };
                if (c.re - target).abs() > HYPOTHESIS_TOL || c.im.abs() > HYPOTHESIS_TOL {
                    return Err(Error::Precondition(format!(
                        "base covariance is not the identity: κ({},{}) = {c}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if ks.contains(&0) {
            return Err(Error::Precondition("k must be at least 1".into()));
        }
        Ok(CltExperiment { base, ks, degree })
    }

    pub fn base(&self) -> &CumulantSpec {
        &self.base
    }

    pub fn ks(&self) -> &[u64] {
        &self.ks
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// One row of the rate table.
#[derive(Clone, Debug)]
pub struct CltRow {
    pub k: u64,
    pub m4: f64,
    pub c_lower: f64,
    pub sigma_lower: f64,
    /// The constant actually used, `√(n·min(C_upper − 1, (n + n·m₄(X) − 1)/2))`.
    pub theorem_constant: f64,
    /// Whether the certified Voiculescu branch was smaller than the `m₄` branch.
    pub used_upper_branch: bool,
    pub bound: f64,
    /// `sigma_lower / bound`.
    pub ratio: f64,
}

/// Largest `φ(xᵢ⁴)`.
fn max_fourth_moment(phi: &impl MomentFunctional) -> Result<f64> {
    (0..phi.nvars()).try_fold(0.0f64, |m, i| Ok(m.max(phi.moment(&Word::power(i, 4))?.re)))
}

/// Computes `m₄(Yᵏ)`, `C_d(Yᵏ)`, `Σ_d(Yᵏ)` and `C/√k` for every `k`.
pub fn clt_rate_table(exp: &CltExperiment, tol: &Tolerances) -> Result<Vec<CltRow>> {
    let n = exp.base.nvars();
    let nf = n as f64;
    let base_state = CumulantState::new(exp.base.clone());
    crate::states::require_order(&base_state, (2 * exp.degree + 2).max(4))?;
    let m4 = max_fourth_moment(&base_state)?;
    let m4_branch = (nf + nf * m4 - 1.0) / 2.0;
    let voic = voiculescu_bound(&base_state, default_norm_order(base_state.max_order()))?;
    let upper_branch = voic.certified.then(|| voic.applicable() - 1.0);
    let (inner, used_upper_branch) = match upper_branch {
        Some(u) if u < m4_branch => (u, true),
        _ => (m4_branch, false),
    };
    let constant = (nf * inner.max(0.0)).sqrt();

    exp.ks
        .par_iter()
        .map(|&k| {
            let phi = CumulantState::new(rescale_cumulants(&exp.base, k)?);
            let prob = SteinProblem::with_tolerances(&phi, NcPoly::quadratic_potential(n), *tol)?;
            let sigma_sq = minimal_kernel(&prob, exp.degree)?.sigma_lower_sq;
            let c_lower = poincare_lower_bound(&phi, exp.degree, tol)?.c_lower;
            let sigma_lower = sigma_sq.max(0.0).sqrt();
            let bound = constant / (k as f64).sqrt();
            Ok(CltRow {
                k,
                m4: max_fourth_moment(&phi)?,
                c_lower,
                sigma_lower,
                theorem_constant: constant,
                used_upper_branch,
                bound,
                ratio: sigma_lower / bound,
            })
        })
        .collect()
}

pub const CSV_HEADER: [&str; 6] = [
    "k",
    "m4_Yk",
    "sigma_d_lower",
    "theorem_constant",
    "bound_over_sqrt_k",
    "ratio",
];

/// Writes the table as CSV with 17 significant digits.
pub fn write_csv<W: Write>(rows: &[CltRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            fmt17(r.m4),
            fmt17(r.sigma_lower),
            fmt17(r.theorem_constant),
            fmt17(r.bound),
            fmt17(r.ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}
