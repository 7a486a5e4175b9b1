//! Coefficient rings for polynomials and tensors.
//!
//! The symbolic layer runs over exact complex rationals ([`QComplex`]); numeric
//! kernels produced by least squares carry double-precision complex
//! coefficients. Both implement [`Coefficient`].

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact complex rational number.
pub type QComplex = Complex<BigRational>;

pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl Coefficient for QComplex {
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Coefficient for Complex64 {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Exact rational `num/den` as a real complex number.
pub fn q(num: i64, den: i64) -> QComplex {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

/// Exact integer as a complex rational.
pub fn qi(num: i64) -> QComplex {
    q(num, 1)
}

/// The imaginary unit.
pub fn q_imag() -> QComplex {
    Complex::new(BigRational::zero(), BigRational::one())
}

/// `re + i·im` from two rationals.
pub fn qc(re: BigRational, im: BigRational) -> QComplex {
    Complex::new(re, im)
}
