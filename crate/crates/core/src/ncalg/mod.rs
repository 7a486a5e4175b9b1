//! Exact symbolic algebra of noncommutative polynomials `ℂ⟨t_1, …, t_n⟩`,
//! their tensor squares and the derivations between them.

mod coeff;
mod derive;
pub mod json;
mod matrix;
mod poly;
mod tensor;
mod word;

pub use coeff::{q, q_imag, qc, qi, Coefficient, QComplex};
pub use derive::{
    cyclic_derivative, cyclic_gradient, delta, delta_var, delta_via_partials, explicit_kernel,
    is_quadratic_potential, jacobian, partial,
};
pub use matrix::KernelMatrix;
pub use poly::{NcPoly, PolyTuple};
pub use tensor::TensorPoly;
pub use word::Word;
