//! State invariants and operator-norm estimates.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{require_order, MomentFunctional};
use crate::error::{Error, Result};
use crate::linalg::herm_eigen;
use crate::ncalg::Word;
use crate::numfmt::{sig17, sig17_opt};

/// Measured defects of the state invariants up to some word length.
#[derive(Clone, Debug, Serialize)]
pub struct StateCheck {
    pub order: usize,
    #[serde(serialize_with = "sig17")]
    pub unit_defect: f64,
    #[serde(serialize_with = "sig17")]
    pub hermitian_defect: f64,
    #[serde(serialize_with = "sig17")]
    pub min_gram_eigenvalue: f64,
    #[serde(serialize_with = "sig17")]
    pub max_gram_eigenvalue: f64,
    /// `None` when the state is not flagged tracial.
    #[serde(serialize_with = "sig17_opt")]
    pub cyclic_defect: Option<f64>,
}

/// Checks unitality, Hermitian symmetry, positivity of the moment Gram
/// matrix over words of length `≤ order/2`, and cyclic invariance when the
/// state claims to be tracial. Fails with [`Error::InvalidState`] naming
/// every violated invariant.
pub fn validate_state(
    phi: &(impl MomentFunctional + ?Sized),
    order: usize,
    tol: f64,
) -> Result<StateCheck> {
    require_order(phi, order)?;
    let n = phi.nvars();
    let words = Word::all_up_to(n, order);
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(b.norm()).max(1.0);

    let unit_defect = (phi.moment(&Word::empty())? - Complex64::new(1.0, 0.0)).norm();
    let mut hermitian_defect = 0.0f64;
    let mut cyclic_defect = 0.0f64;
    for w in &words {
        let m = phi.moment(w)?;
        hermitian_defect = hermitian_defect.max(rel(phi.moment(&w.reversed())?, m.conj()));
        if phi.is_tracial() {
            for r in 1..w.len() {
                cyclic_defect = cyclic_defect.max(rel(phi.moment(&w.rotated(r))?, m));
            }
        }
    }

    let half = Word::all_up_to(n, order / 2);
    let mut g = DMatrix::<Complex64>::zeros(half.len(), half.len());
    for (i, u) in half.iter().enumerate() {
        for (j, v) in half.iter().enumerate() {
            g[(i, j)] = phi.moment(&u.concat(&v.reversed()))?;
        }
    }
    let eig = herm_eigen(&g);
    let check = StateCheck {
        order,
        unit_defect,
        hermitian_defect,
        min_gram_eigenvalue: eig.min(),
        max_gram_eigenvalue: eig.max(),
        cyclic_defect: phi.is_tracial().then_some(cyclic_defect),
    };

    let mut violated = Vec::new();
    if unit_defect > tol {
        violated.push(format!("unit: φ(1) deviates from 1 by {unit_defect:.3e}"));
    }
    if hermitian_defect > tol {
        violated.push(format!("hermitian symmetry: defect {hermitian_defect:.3e}"));
    }
    if eig.min() < -tol * eig.max().max(1.0) {
        violated.push(format!(
            "positivity: moment Gram matrix has eigenvalue {:.3e}",
            eig.min()
        ));
    }
    if phi.is_tracial() && cyclic_defect > tol {
        violated.push(format!("traciality: cyclic defect {cyclic_defect:.3e}"));
    }
    if violated.is_empty() {
        Ok(check)
    } else {
        Err(Error::InvalidState(violated.join("; ")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormEstimate {
    pub index: usize,
    pub order: usize,
    /// `φ(x_i^order)^{1/order}`, a lower bound on `‖x_i‖`.
    #[serde(serialize_with = "sig17")]
    pub lower: f64,
    #[serde(serialize_with = "sig17_opt")]
    pub upper: Option<f64>,
}

/// Moment-based lower estimate of `‖x_i‖` and the backend's upper estimate,
/// if it has one.
pub fn operator_norm_estimate(
    phi: &(impl MomentFunctional + ?Sized),
    i: usize,
    order: usize,
) -> Result<NormEstimate> {
    if order == 0 || order % 2 == 1 {
        return Err(Error::Precondition(format!(
            "norm estimate needs a positive even order, got {order}"
        )));
    }
    if i >= phi.nvars() {
        return Err(Error::IndexOutOfRange {
            index: i,
            nvars: phi.nvars(),
        });
    }
    require_order(phi, order)?;
    let m = phi.moment(&Word::power(i, order))?;
    if m.re < -1e-12 {
        return Err(Error::InvalidState(format!(
            "even moment φ(x{}^{order}) = {:.6e} is negative",
            i + 1,
            m.re
        )));
    }
    Ok(NormEstimate {
        index: i,
        order,
        lower: m.re.max(0.0).powf(1.0 / order as f64),
        upper: phi.norm_upper_bound(i),
    })
}
