//! Derivations `𝒫 → 𝒫 ⊗ 𝒫` and the objects built from them.

use super::coeff::{q, Coefficient, QComplex};
use super::matrix::KernelMatrix;
use super::poly::{check_index, NcPoly, PolyTuple};
use super::tensor::TensorPoly;
use super::word::Word;
use crate::error::Result;

/// Free difference quotient `∂_i`: on a word, the sum over occurrences of
/// `t_i` of (prefix ⊗ suffix).
pub fn partial<C: Coefficient>(i: usize, p: &NcPoly<C>) -> Result<TensorPoly<C>> {
    check_index(i, p.nvars())?;
    let mut out = TensorPoly::zero(p.nvars());
    for (w, c) in p.terms() {
        for k in 0..w.len() {
            if w.letter_at(k) == i {
                out.add_term(w.slice(0, k), w.slice(k + 1, w.len()), c.clone());
            }
        }
    }
    Ok(out)
}

/// `δ(P) = P ⊗ 1 − 1 ⊗ P`.
pub fn delta<C: Coefficient>(p: &NcPoly<C>) -> TensorPoly<C> {
    let mut out = TensorPoly::zero(p.nvars());
    for (w, c) in p.terms() {
        out.add_term(w.clone(), Word::empty(), c.clone());
        out.add_term(Word::empty(), w.clone(), -c.clone());
    }
    out
}

/// `δ(t_i)`.
pub fn delta_var<C: Coefficient>(nvars: usize, i: usize) -> Result<TensorPoly<C>> {
    Ok(delta(&NcPoly::var(nvars, i)?))
}

/// Cyclic derivative `𝒟_i = m ∘ σ ∘ ∂_i`.
pub fn cyclic_derivative<C: Coefficient>(i: usize, p: &NcPoly<C>) -> Result<NcPoly<C>> {
    Ok(partial(i, p)?.flip().multiply())
}

pub fn cyclic_gradient<C: Coefficient>(v: &NcPoly<C>) -> PolyTuple<C> {
    let entries = (0..v.nvars())
        .map(|i| cyclic_derivative(i, v).expect("index in range"))
        .collect();
    PolyTuple::new(entries).expect("entries share nvars")
}

/// `(𝒥P)_{ij} = ∂_j P_i`.
pub fn jacobian<C: Coefficient>(p: &PolyTuple<C>) -> KernelMatrix<C> {
    let n = p.len();
    let nvars = p.nvars();
    let mut m = KernelMatrix::zero(n, nvars);
    for (i, pi) in p.entries().iter().enumerate() {
        for j in 0..n.min(nvars) {
            m.set(i, j, partial(j, pi).expect("index in range"));
        }
    }
    m
}

/// The explicit kernel `A_{ij} = ½ δ(𝒟_i V) ♯ δ(t_j)`.
pub fn explicit_kernel(v: &NcPoly<QComplex>) -> KernelMatrix<QComplex> {
    let n = v.nvars();
    let half = q(1, 2);
    let grad = cyclic_gradient(v);
    let deltas: Vec<TensorPoly<QComplex>> = (0..n)
        .map(|j| delta_var(n, j).expect("index in range"))
        .collect();
    let mut a = KernelMatrix::zero(n, n);
    for i in 0..n {
        let di = delta(grad.get(i));
        for (j, dj) in deltas.iter().enumerate() {
            let entry = di.sharp(dj).expect("same algebra").scale(&half);
            a.set(i, j, entry);
        }
    }
    a
}

/// `Σ_i ∂_i(P) ♯ δ(t_i)`, the right-hand side of the identity relating `δ` to
/// the partial derivatives.
pub fn delta_via_partials<C: Coefficient>(p: &NcPoly<C>) -> TensorPoly<C> {
    let n = p.nvars();
    (0..n).fold(TensorPoly::zero(n), |acc, i| {
        let term = partial(i, p)
            .and_then(|d| d.sharp(&delta_var(n, i)?))
            .expect("index in range");
        &acc + &term
    })
}

/// Whether `v` is exactly `½ Σ t_i²`.
pub fn is_quadratic_potential(v: &NcPoly<QComplex>) -> bool {
    *v == NcPoly::quadratic_potential(v.nvars())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::coeff::qi;
    use crate::Error;

    fn w(letters: &[usize]) -> Word {
        Word::from_letters(letters.iter().copied())
    }

    fn mono(n: usize, letters: &[usize]) -> NcPoly {
        NcPoly::monomial(n, w(letters), qi(1))
    }

    fn tens(n: usize, l: &[usize], r: &[usize], c: i64) -> TensorPoly {
        TensorPoly::simple_monomial(n, w(l), w(r), qi(c))
    }

    #[test]
    fn partial_of_square() {
        let d = partial(0, &mono(1, &[0, 0])).unwrap();
        assert_eq!(d, &tens(1, &[], &[0], 1) + &tens(1, &[0], &[], 1));
    }

    #[test]
    fn partial_without_occurrence() {
        assert!(partial(0, &mono(2, &[1, 1, 1])).unwrap().is_zero());
    }

    #[test]
    fn partial_positional_sum() {
        // ∂₁(t₁t₂t₁t₂) = 1⊗t₂t₁t₂ + t₁t₂⊗t₂
        let d = partial(0, &mono(2, &[0, 1, 0, 1])).unwrap();
        assert_eq!(d, &tens(2, &[], &[1, 0, 1], 1) + &tens(2, &[0, 1], &[1], 1));
    }

    #[test]
    fn partial_index_checked() {
        assert!(matches!(
            partial(2, &mono(2, &[0])),
            Err(Error::IndexOutOfRange { index: 2, nvars: 2 })
        ));
    }

    #[test]
    fn delta_examples() {
        assert!(delta(&NcPoly::<QComplex>::one(2)).is_zero());
        assert_eq!(
            delta(&mono(2, &[0])),
            &tens(2, &[0], &[], 1) - &tens(2, &[], &[0], 1)
        );
    }

    #[test]
    fn cyclic_derivative_examples() {
        let half_square = mono(1, &[0, 0]).scale(&q(1, 2));
        assert_eq!(cyclic_derivative(0, &half_square).unwrap(), mono(1, &[0]));
        assert!(cyclic_derivative(0, &mono(2, &[1])).unwrap().is_zero());
        // 𝒟₁(t₁t₂t₁t₂) = 2·t₂t₁t₂
        assert_eq!(
            cyclic_derivative(0, &mono(2, &[0, 1, 0, 1])).unwrap(),
            mono(2, &[1, 0, 1]).scale(&qi(2))
        );
    }

    #[test]
    fn cyclic_gradient_examples() {
        let g = cyclic_gradient(&NcPoly::quadratic_potential(3));
        assert_eq!(g, PolyTuple::coordinates(3));
        assert_eq!(
            cyclic_gradient(&NcPoly::constant(2, qi(5))),
            PolyTuple::zero(2)
        );
        let v = &mono(2, &[0, 1]) + &mono(2, &[1, 0]);
        let expected = PolyTuple::new(vec![
            mono(2, &[1]).scale(&qi(2)),
            mono(2, &[0]).scale(&qi(2)),
        ])
        .unwrap();
        assert_eq!(cyclic_gradient(&v), expected);
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(
            jacobian(&PolyTuple::<QComplex>::coordinates(3)),
            KernelMatrix::identity(3, 3)
        );
        assert!(jacobian(&PolyTuple::<QComplex>::zero(2)).is_zero());
        // 𝒥(t₁t₂, t₂²) = [[1⊗t₂, t₁⊗1], [0, 1⊗t₂ + t₂⊗1]]
        let p = PolyTuple::new(vec![mono(2, &[0, 1]), mono(2, &[1, 1])]).unwrap();
        let j = jacobian(&p);
        assert_eq!(*j.get(0, 0), tens(2, &[], &[1], 1));
        assert_eq!(*j.get(0, 1), tens(2, &[0], &[], 1));
        assert!(j.get(1, 0).is_zero());
        assert_eq!(
            *j.get(1, 1),
            &tens(2, &[], &[1], 1) + &tens(2, &[1], &[], 1)
        );

        let adj = j.adjoint();
        assert_eq!(*adj.get(1, 0), tens(2, &[0], &[], 1));
        assert_eq!(*adj.get(0, 0), tens(2, &[], &[1], 1));
        assert!(adj.get(0, 1).is_zero());
        assert_eq!(adj.adjoint(), j);
    }

    #[test]
    fn identity_is_self_adjoint() {
        let i = KernelMatrix::<QComplex>::identity(2, 2);
        assert_eq!(i.adjoint(), i);
    }

    #[test]
    fn explicit_kernel_single_variable() {
        // ½(t²⊗1 + 1⊗t² − 2t⊗t)
        let a = explicit_kernel(&NcPoly::quadratic_potential(1));
        let expected = (&(&tens(1, &[0, 0], &[], 1) + &tens(1, &[], &[0, 0], 1))
            - &tens(1, &[0], &[0], 2))
            .scale(&q(1, 2));
        assert_eq!(*a.get(0, 0), expected);
    }

    #[test]
    fn explicit_kernel_of_constant_vanishes() {
        assert!(explicit_kernel(&NcPoly::constant(3, qi(7))).is_zero());
    }

    #[test]
    fn explicit_kernel_two_variables() {
        let a = explicit_kernel(&NcPoly::quadratic_potential(2));
        for i in 0..2 {
            for j in 0..2 {
                let expected = delta_var::<QComplex>(2, i)
                    .unwrap()
                    .sharp(&delta_var(2, j).unwrap())
                    .unwrap()
                    .scale(&q(1, 2));
                assert_eq!(*a.get(i, j), expected);
            }
        }
        assert!(is_quadratic_potential(&NcPoly::quadratic_potential(2)));
    }
}
