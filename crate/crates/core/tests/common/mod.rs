//! Random generators shared by the integration tests.
#![allow(dead_code)]

use freestein::ncalg::{qc, KernelMatrix, NcPoly, PolyTuple, QComplex, TensorPoly, Word};
use freestein::states::{CumulantSpec, CumulantState, MomentTable};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn small_coeff(r: &mut impl Rng, complex: bool) -> QComplex {
    let re = ratio(r.random_range(-4..=4), r.random_range(1..=3));
    let im = if complex {
        ratio(r.random_range(-4..=4), r.random_range(1..=3))
    } else {
        ratio(0, 1)
    };
    qc(re, im)
}

pub fn word(r: &mut impl Rng, nvars: usize, max_len: usize) -> Word {
    let len = r.random_range(0..=max_len);
    Word::from_letters((0..len).map(|_| r.random_range(0..nvars)))
}

pub fn poly(r: &mut impl Rng, nvars: usize, degree: usize, terms: usize) -> NcPoly {
    NcPoly::from_terms(
        nvars,
        (0..terms).map(|_| (word(r, nvars, degree), small_coeff(r, true))),
    )
    .unwrap()
}

/// `(p + p*)/2`, so real coefficients survive on reversal-symmetric pairs.
pub fn self_adjoint_poly(r: &mut impl Rng, nvars: usize, degree: usize, terms: usize) -> NcPoly {
    let p = poly(r, nvars, degree, terms);
    (&p + &p.involution()).scale(&qc(ratio(1, 2), ratio(0, 1)))
}

pub fn tuple(r: &mut impl Rng, nvars: usize, degree: usize, terms: usize) -> PolyTuple {
    PolyTuple::new((0..nvars).map(|_| poly(r, nvars, degree, terms)).collect()).unwrap()
}

pub fn tensor(r: &mut impl Rng, nvars: usize, degree: usize, terms: usize) -> TensorPoly {
    TensorPoly::from_terms(
        nvars,
        (0..terms).map(|_| {
            (
                word(r, nvars, degree),
                word(r, nvars, degree),
                small_coeff(r, true),
            )
        }),
    )
    .unwrap()
}

pub fn kernel_matrix(
    r: &mut impl Rng,
    nvars: usize,
    degree: usize,
    terms: usize,
) -> KernelMatrix<Complex64> {
    KernelMatrix::from_rows(
        (0..nvars)
            .map(|_| {
                (0..nvars)
                    .map(|_| tensor(r, nvars, degree, terms))
                    .collect()
            })
            .collect(),
    )
    .unwrap()
    .to_c64()
}

fn random_symmetric(r: &mut impl Rng, dim: usize, scale: f64) -> DMatrix<f64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| r.random_range(-1.0..1.0));
    (&m + m.transpose()) * (0.5 * scale)
}

/// A centered tracial state with identity covariance: a free compound
/// Poisson family with matrix jumps `a_i` (so `κ(w) = λ·tr(a_w)` for
/// `|w| ≥ 2`) plus an independent semicircular part filling the covariance
/// up to the identity. Cumulants are kept up to `order`.
pub fn tracial_state_spec(r: &mut impl Rng, nvars: usize, order: usize) -> CumulantSpec {
    let dim = 3;
    let lambda = r.random_range(0.5..2.0);
    let mut a: Vec<DMatrix<f64>> = (0..nvars).map(|_| random_symmetric(r, dim, 1.0)).collect();
    let cov = |a: &[DMatrix<f64>]| {
        DMatrix::from_fn(nvars, nvars, |i, j| {
            lambda * (&a[i] * &a[j]).trace() / dim as f64
        })
    };
    let top = cov(&a).symmetric_eigen().eigenvalues.max();
    let shrink = (r.random_range(0.2..0.9) / top).sqrt();
    for m in &mut a {
        *m *= shrink;
    }
    let jump_cov = cov(&a);
    let mut entries = Vec::new();
    for m in 2..=order {
        for w in Word::all_of_length(nvars, m) {
            let prod = w
                .letters()
                .fold(DMatrix::identity(dim, dim), |acc, l| acc * &a[l]);
            let mut v = lambda * prod.trace() / dim as f64;
            if m == 2 {
                let (i, j) = (w.letter_at(0), w.letter_at(1));
                v += if i == j { 1.0 } else { 0.0 } - jump_cov[(i, j)];
            }
            entries.push((w, Complex64::new(v, 0.0)));
        }
    }
    CumulantSpec::from_entries(nvars, entries).unwrap()
}

pub fn tracial_state(r: &mut impl Rng, nvars: usize, order: usize) -> CumulantState {
    CumulantState::with_max_order(tracial_state_spec(r, nvars, order), order).unwrap()
}

pub fn tracial_table(r: &mut impl Rng, nvars: usize, order: usize) -> MomentTable {
    MomentTable::from_functional(&tracial_state(r, nvars, order), order).unwrap()
}

pub fn arb_coeff() -> impl Strategy<Value = QComplex> {
    (-5i64..=5, 1i64..=4, -5i64..=5, 1i64..=4).prop_map(|(a, b, c, d)| qc(ratio(a, b), ratio(c, d)))
}

pub fn arb_word(nvars: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..nvars, 0..=max_len).prop_map(Word::from_letters)
}

pub fn arb_poly(nvars: usize, degree: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((arb_word(nvars, degree), arb_coeff()), 0..6)
        .prop_map(move |terms| NcPoly::from_terms(nvars, terms).unwrap())
}

pub fn arb_tensor(nvars: usize, degree: usize) -> impl Strategy<Value = TensorPoly> {
    prop::collection::vec(
        (
            arb_word(nvars, degree),
            arb_word(nvars, degree),
            arb_coeff(),
        ),
        0..5,
    )
    .prop_map(move |terms| TensorPoly::from_terms(nvars, terms).unwrap())
}
