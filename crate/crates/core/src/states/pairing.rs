//! Pairings reduced to word moments.
//!
//! `⟨X, Y⟩_φ = Σᵢ φ(xᵢ yᵢ*)` on tuples and
//! `⟨A, B⟩ = (φ ⊗ φ)(Tr(A ♯ B*))` on kernel matrices. For simple tensors
//! `⟨l ⊗ r, l' ⊗ r'⟩ = φ(l·l'*) φ(r'*·r)`.

use num_complex::Complex64;

use super::{require_order, MomentFunctional};
use crate::error::{Error, Result};
use crate::ncalg::{Coefficient, KernelMatrix, NcPoly, PolyTuple, TensorPoly};

fn check_vars(phi: &(impl MomentFunctional + ?Sized), nvars: usize) -> Result<()> {
    if nvars != phi.nvars() {
        return Err(Error::NvarsMismatch {
            left: nvars,
            right: phi.nvars(),
        });
    }
    Ok(())
}

/// `φ(p(X))`.
pub fn moment_of_poly<C: Coefficient>(
    phi: &(impl MomentFunctional + ?Sized),
    p: &NcPoly<C>,
) -> Result<Complex64> {
    check_vars(phi, p.nvars())?;
    require_order(phi, p.degree())?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, c) in p.terms() {
        acc += c.to_c64() * phi.moment(w)?;
    }
    Ok(acc)
}

/// `(φ ⊗ φ)(q)`.
pub fn tensor_moment<C: Coefficient>(
    phi: &(impl MomentFunctional + ?Sized),
    q: &TensorPoly<C>,
) -> Result<Complex64> {
    check_vars(phi, q.nvars())?;
    let (l, r) = q.leg_degrees();
    require_order(phi, l.max(r))?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (lw, rw, c) in q.terms() {
        acc += c.to_c64() * phi.moment(lw)? * phi.moment(rw)?;
    }
    Ok(acc)
}

/// `Σᵢ φ(pᵢ rᵢ*)`; linear in `p`, conjugate-linear in `r`.
pub fn inner_tuple<C: Coefficient>(
    phi: &(impl MomentFunctional + ?Sized),
    p: &PolyTuple<C>,
    r: &PolyTuple<C>,
) -> Result<Complex64> {
    if p.len() != r.len() {
        return Err(Error::Shape(format!(
            "tuples of length {} and {}",
            p.len(),
            r.len()
        )));
    }
    check_vars(phi, p.nvars())?;
    check_vars(phi, r.nvars())?;
    require_order(phi, p.degree() + r.degree())?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (pi, ri) in p.entries().iter().zip(r.entries()) {
        for (u, a) in pi.terms() {
            let a = a.to_c64();
            for (v, b) in ri.terms() {
                acc += a * b.to_c64().conj() * phi.moment(&u.concat(&v.reversed()))?;
            }
        }
    }
    Ok(acc)
}

/// `(φ ⊗ φ)(a ♯ b*)`.
pub fn inner_tensor<C: Coefficient>(
    phi: &(impl MomentFunctional + ?Sized),
    a: &TensorPoly<C>,
    b: &TensorPoly<C>,
) -> Result<Complex64> {
    check_vars(phi, a.nvars())?;
    check_vars(phi, b.nvars())?;
    let (al, ar) = a.leg_degrees();
    let (bl, br) = b.leg_degrees();
    require_order(phi, (al + bl).max(ar + br))?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (l, r, ca) in a.terms() {
        let ca = ca.to_c64();
        for (l2, r2, cb) in b.terms() {
            let left = phi.moment(&l.concat(&l2.reversed()))?;
            if left == Complex64::new(0.0, 0.0) {
                continue;
            }
            let right = phi.moment(&r2.reversed().concat(r))?;
            acc += ca * cb.to_c64().conj() * left * right;
        }
    }
    Ok(acc)
}

fn check_matrix_budget<C: Coefficient>(
    phi: &(impl MomentFunctional + ?Sized),
    a: &KernelMatrix<C>,
    b: &KernelMatrix<C>,
) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!(
            "{0}×{0} against {1}×{1}",
            a.dim(),
            b.dim()
        )));
    }
    check_vars(phi, a.nvars())?;
    check_vars(phi, b.nvars())?;
    let (al, ar) = a.leg_degrees();
    let (bl, br) = b.leg_degrees();
    require_order(phi, (al + bl).max(ar + br))
}

/// `⟨A, B⟩ = (φ ⊗ φ)(Tr(A ♯ B*)) = Σ_{ij} ⟨A_ij, B_ij⟩`.
pub fn inner_matrix<C: Coefficient>(
    phi: &(impl MomentFunctional + ?Sized),
    a: &KernelMatrix<C>,
    b: &KernelMatrix<C>,
) -> Result<Complex64> {
    check_matrix_budget(phi, a, b)?;
    let n = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += inner_tensor(phi, a.get(i, j), b.get(i, j))?;
        }
    }
    Ok(acc)
}

/// [`inner_matrix`] evaluated literally: form `A ♯ B*`, take the trace,
/// apply `φ ⊗ φ`.
pub fn inner_matrix_via_product<C: Coefficient>(
    phi: &(impl MomentFunctional + ?Sized),
    a: &KernelMatrix<C>,
    b: &KernelMatrix<C>,
) -> Result<Complex64> {
    check_matrix_budget(phi, a, b)?;
    tensor_moment(phi, &a.sharp_product(&b.adjoint())?.trace())
}
