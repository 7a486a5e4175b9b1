use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::coeff::{q, Coefficient, QComplex};
use super::word::Word;
use crate::error::{Error, Result};

/// A noncommutative polynomial in `nvars` self-adjoint indeterminates.
///
/// Terms are kept in graded-lex order and never store a zero coefficient, so
/// structural equality is polynomial equality.
#[derive(Clone, PartialEq)]
pub struct NcPoly<C = QComplex> {
    nvars: usize,
    terms: BTreeMap<Word, C>,
}

pub(crate) fn check_nvars(nvars: usize) -> Result<()> {
    if nvars == 0 {
        Err(Error::NoVariables)
    } else {
        Ok(())
    }
}

pub(crate) fn check_index(index: usize, nvars: usize) -> Result<()> {
    if index >= nvars {
        Err(Error::IndexOutOfRange { index, nvars })
    } else {
        Ok(())
    }
}

impl<C: Coefficient> NcPoly<C> {
    /// The zero polynomial; fails for `nvars == 0`.
    pub fn new(nvars: usize) -> Result<Self> {
        check_nvars(nvars)?;
        Ok(NcPoly {
            nvars,
            terms: BTreeMap::new(),
        })
    }

    /// The zero polynomial. Panics if `nvars == 0`; use [`NcPoly::new`] for
    /// unchecked input.
    pub fn zero(nvars: usize) -> Self {
        Self::new(nvars).expect("polynomial algebra with zero variables")
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, Word::empty(), c)
    }

    /// The generator `t_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Result<Self> {
        check_nvars(nvars)?;
        check_index(i, nvars)?;
        Ok(Self::monomial(nvars, Word::letter(i), C::one()))
    }

    /// `c·w`. Panics if a letter of `w` is out of range.
    pub fn monomial(nvars: usize, w: Word, c: C) -> Self {
        let mut p = Self::zero(nvars);
        assert!(w.min_nvars() <= nvars, "letter out of range in {w}");
        p.add_term(w, c);
        p
    }

    /// Sum of `(word, coeff)` pairs, validating every letter.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, C)>,
    {
        let mut p = Self::new(nvars)?;
        for (w, c) in terms {
            if w.min_nvars() > nvars {
                return Err(Error::IndexOutOfRange {
                    index: w.min_nvars() - 1,
                    nvars,
                });
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// The antilinear anti-automorphism fixing every generator.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (w, c) in &self.terms {
            out.add_term(w.reversed(), c.conj());
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.involution() == *self
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> NcPoly<D> {
        let mut out = NcPoly::<D>::zero(self.nvars);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn to_c64(&self) -> NcPoly<num_complex::Complex64> {
        self.map_coeffs(Coefficient::to_c64)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        same_nvars(self.nvars, other.nvars)?;
        let mut out = Self::zero(self.nvars);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }
}

impl NcPoly<QComplex> {
    /// The quadratic potential `½ Σ t_i²`.
    pub fn quadratic_potential(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        for i in 0..nvars {
            p.add_term(Word::power(i, 2), q(1, 2));
        }
        p
    }
}

pub(crate) fn same_nvars(left: usize, right: usize) -> Result<()> {
    if left != right {
        Err(Error::NvarsMismatch { left, right })
    } else {
        Ok(())
    }
}

impl<C: Coefficient> Add for &NcPoly<C> {
    type Output = NcPoly<C>;
    fn add(self, rhs: &NcPoly<C>) -> NcPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &NcPoly<C> {
    type Output = NcPoly<C>;
    fn sub(self, rhs: &NcPoly<C>) -> NcPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Neg for &NcPoly<C> {
    type Output = NcPoly<C>;
    fn neg(self) -> NcPoly<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coefficient> Mul for &NcPoly<C> {
    type Output = NcPoly<C>;
    fn mul(self, rhs: &NcPoly<C>) -> NcPoly<C> {
        self.checked_mul(rhs).expect("nvars mismatch")
    }
}

impl<C: Coefficient> Add for NcPoly<C> {
    type Output = NcPoly<C>;
    fn add(self, rhs: NcPoly<C>) -> NcPoly<C> {
        &self + &rhs
    }
}

impl<C: Coefficient> Sub for NcPoly<C> {
    type Output = NcPoly<C>;
    fn sub(self, rhs: NcPoly<C>) -> NcPoly<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> Mul for NcPoly<C> {
    type Output = NcPoly<C>;
    fn mul(self, rhs: NcPoly<C>) -> NcPoly<C> {
        &self * &rhs
    }
}

impl<C: fmt::Debug> fmt::Debug for NcPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})·{w}")?;
        }
        Ok(())
    }
}

/// An element of `𝒫ⁿ`.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyTuple<C = QComplex> {
    entries: Vec<NcPoly<C>>,
}

impl<C: Coefficient> PolyTuple<C> {
    pub fn new(entries: Vec<NcPoly<C>>) -> Result<Self> {
        let nvars = entries
            .first()
            .map(NcPoly::nvars)
            .ok_or(Error::NoVariables)?;
        for p in &entries {
            same_nvars(nvars, p.nvars())?;
        }
        Ok(PolyTuple { entries })
    }

    pub fn zero(nvars: usize) -> Self {
        PolyTuple {
            entries: vec![NcPoly::zero(nvars); nvars],
        }
    }

    /// `(t_1, …, t_n)`.
    pub fn coordinates(nvars: usize) -> Self {
        PolyTuple {
            entries: (0..nvars)
                .map(|i| NcPoly::monomial(nvars, Word::letter(i), C::one()))
                .collect(),
        }
    }

    /// The tuple with `p` in slot `slot` and zeros elsewhere.
    pub fn unit(nvars: usize, slot: usize, p: NcPoly<C>) -> Self {
        let mut entries = vec![NcPoly::zero(nvars); nvars];
        entries[slot] = p;
        PolyTuple { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.entries[0].nvars()
    }

    pub fn entries(&self) -> &[NcPoly<C>] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &NcPoly<C> {
        &self.entries[i]
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(NcPoly::degree).max().unwrap_or(0)
    }

    pub fn map<F: Fn(&NcPoly<C>) -> NcPoly<C>>(&self, f: F) -> Self {
        PolyTuple {
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> PolyTuple<D> {
        PolyTuple {
            entries: self.entries.iter().map(|p| p.map_coeffs(&f)).collect(),
        }
    }

    pub fn to_c64(&self) -> PolyTuple<num_complex::Complex64> {
        self.map_coeffs(Coefficient::to_c64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::coeff::{q_imag, qi};

    fn t(n: usize, i: usize) -> NcPoly {
        NcPoly::var(n, i).unwrap()
    }

    #[test]
    fn zero_variables_rejected() {
        assert!(matches!(
            NcPoly::<QComplex>::new(0),
            Err(Error::NoVariables)
        ));
        assert!(matches!(
            NcPoly::<QComplex>::var(2, 2),
            Err(Error::IndexOutOfRange { index: 2, nvars: 2 })
        ));
    }

    #[test]
    fn cancellation_keeps_canonical_form() {
        let p = &t(2, 0) - &t(2, 0);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn multiplication_is_concatenation() {
        let p = &t(2, 0) * &t(2, 1);
        assert_eq!(p.coeff(&Word::from_letters([0, 1])), qi(1));
        assert_eq!(p.coeff(&Word::from_letters([1, 0])), qi(0));
    }

    #[test]
    fn involution_reverses_and_conjugates() {
        let p = &t(2, 0) * &t(2, 1);
        assert_eq!(p.involution(), &t(2, 1) * &t(2, 0));
        let ip = t(1, 0).scale(&q_imag());
        assert_eq!(ip.involution(), t(1, 0).scale(&-q_imag()));
    }

    #[test]
    fn quadratic_potential_is_self_adjoint() {
        let v = NcPoly::quadratic_potential(3);
        assert!(v.is_self_adjoint());
        assert_eq!(v.degree(), 2);
        assert_eq!(v.num_terms(), 3);
    }
}
