use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::coeff::{Coefficient, QComplex};
use super::poly::{check_nvars, same_nvars, NcPoly};
use super::word::Word;
use crate::error::{Error, Result};

/// An element of the algebraic tensor product `𝒫 ⊗ 𝒫`, stored as a sparse
/// map from `(left word, right word)` to coefficient.
#[derive(Clone, PartialEq)]
pub struct TensorPoly<C = QComplex> {
    nvars: usize,
    terms: BTreeMap<(Word, Word), C>,
}

impl<C: Coefficient> TensorPoly<C> {
    pub fn new(nvars: usize) -> Result<Self> {
        check_nvars(nvars)?;
        Ok(TensorPoly {
            nvars,
            terms: BTreeMap::new(),
        })
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(nvars).expect("tensor algebra with zero variables")
    }

    /// `1 ⊗ 1`, the unit for `♯`.
    pub fn one(nvars: usize) -> Self {
        Self::simple_monomial(nvars, Word::empty(), Word::empty(), C::one())
    }

    pub fn simple_monomial(nvars: usize, left: Word, right: Word, c: C) -> Self {
        assert!(
            left.min_nvars() <= nvars && right.min_nvars() <= nvars,
            "letter out of range"
        );
        let mut t = Self::zero(nvars);
        t.add_term(left, right, c);
        t
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Word, C)>,
    {
        let mut t = Self::new(nvars)?;
        for (l, r, c) in terms {
            let need = l.min_nvars().max(r.min_nvars());
            if need > nvars {
                return Err(Error::IndexOutOfRange {
                    index: need - 1,
                    nvars,
                });
            }
            t.add_term(l, r, c);
        }
        Ok(t)
    }

    /// The simple tensor `p ⊗ q`.
    pub fn tensor(p: &NcPoly<C>, q: &NcPoly<C>) -> Result<Self> {
        same_nvars(p.nvars(), q.nvars())?;
        let mut t = Self::zero(p.nvars());
        for (u, a) in p.terms() {
            for (v, b) in q.terms() {
                t.add_term(u.clone(), v.clone(), a.clone() * b.clone());
            }
        }
        Ok(t)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &C)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, left: &Word, right: &Word) -> C {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Largest word length appearing on the left and on the right leg.
    pub fn leg_degrees(&self) -> (usize, usize) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), (l, r)| (a.max(l.len()), b.max(r.len())))
    }

    pub(crate) fn add_term(&mut self, left: Word, right: Word, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((left, right)) {
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

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for ((l, r), c) in &self.terms {
            out.add_term(l.clone(), r.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TensorPoly<D> {
        let mut out = TensorPoly::<D>::zero(self.nvars);
        for ((l, r), c) in &self.terms {
            out.add_term(l.clone(), r.clone(), f(c));
        }
        out
    }

    /// `(P ⊗ Q)* = P* ⊗ Q*`, applied leg by leg.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for ((l, r), c) in &self.terms {
            out.add_term(l.reversed(), r.reversed(), c.conj());
        }
        out
    }

    /// `σ(P ⊗ Q) = Q ⊗ P`.
    pub fn flip(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for ((l, r), c) in &self.terms {
            out.add_term(r.clone(), l.clone(), c.clone());
        }
        out
    }

    /// `m(P ⊗ Q) = PQ`.
    pub fn multiply(&self) -> NcPoly<C> {
        NcPoly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|((l, r), c)| (l.concat(r), c.clone())),
        )
        .expect("letters already validated")
    }

    /// `(P₁ ⊗ P₂) ♯ (Q₁ ⊗ Q₂) = P₁Q₁ ⊗ Q₂P₂`, extended bilinearly.
    pub fn sharp(&self, other: &Self) -> Result<Self> {
        same_nvars(self.nvars, other.nvars)?;
        let mut out = Self::zero(self.nvars);
        for ((p1, p2), a) in &self.terms {
            for ((q1, q2), b) in &other.terms {
                out.add_term(p1.concat(q1), q2.concat(p2), a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    /// Left bimodule action `P · (Q₁ ⊗ Q₂) = PQ₁ ⊗ Q₂`.
    pub fn left_mul(&self, p: &NcPoly<C>) -> Result<Self> {
        same_nvars(self.nvars, p.nvars())?;
        let mut out = Self::zero(self.nvars);
        for (w, a) in p.terms() {
            for ((l, r), b) in &self.terms {
                out.add_term(w.concat(l), r.clone(), a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    /// Right bimodule action `(Q₁ ⊗ Q₂) · P = Q₁ ⊗ Q₂P`.
    pub fn right_mul(&self, p: &NcPoly<C>) -> Result<Self> {
        same_nvars(self.nvars, p.nvars())?;
        let mut out = Self::zero(self.nvars);
        for ((l, r), b) in &self.terms {
            for (w, a) in p.terms() {
                out.add_term(l.clone(), r.concat(w), b.clone() * a.clone());
            }
        }
        Ok(out)
    }
}

impl<C: Coefficient> Add for &TensorPoly<C> {
    type Output = TensorPoly<C>;
    fn add(self, rhs: &TensorPoly<C>) -> TensorPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for ((l, r), c) in &rhs.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &TensorPoly<C> {
    type Output = TensorPoly<C>;
    fn sub(self, rhs: &TensorPoly<C>) -> TensorPoly<C> {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch");
        let mut out = self.clone();
        for ((l, r), c) in &rhs.terms {
            out.add_term(l.clone(), r.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Neg for &TensorPoly<C> {
    type Output = TensorPoly<C>;
    fn neg(self) -> TensorPoly<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coefficient> Add for TensorPoly<C> {
    type Output = TensorPoly<C>;
    fn add(self, rhs: TensorPoly<C>) -> TensorPoly<C> {
        &self + &rhs
    }
}

impl<C: Coefficient> Sub for TensorPoly<C> {
    type Output = TensorPoly<C>;
    fn sub(self, rhs: TensorPoly<C>) -> TensorPoly<C> {
        &self - &rhs
    }
}

impl<C: fmt::Debug> fmt::Debug for TensorPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((l, r), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})·{l}⊗{r}")?;
        }
        Ok(())
    }
}
