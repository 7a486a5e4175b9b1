//! JSON interchange for polynomials, tensors, tuples and kernel matrices.
//!
//! Words are 1-based index arrays (the empty array is the unit). Exact
//! coefficients are split into `re_num/re_den + i·im_num/im_den`; integers
//! that do not fit in an `i64` are written as decimal strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::coeff::{qc, QComplex};
use super::matrix::KernelMatrix;
use super::poly::{NcPoly, PolyTuple};
use super::tensor::TensorPoly;
use super::word::Word;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Raw::Str(s) => BigInt::from_str(s.trim())
                .map(JsonInt)
                .map_err(serde::de::Error::custom),
        }
    }
}

fn one() -> JsonInt {
    JsonInt(BigInt::from(1))
}

fn zero() -> JsonInt {
    JsonInt(BigInt::from(0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoeffJson {
    #[serde(default = "zero")]
    pub re_num: JsonInt,
    #[serde(default = "one")]
    pub re_den: JsonInt,
    #[serde(default = "zero")]
    pub im_num: JsonInt,
    #[serde(default = "one")]
    pub im_den: JsonInt,
}

impl CoeffJson {
    pub fn from_coeff(c: &QComplex) -> Self {
        CoeffJson {
            re_num: JsonInt(c.re.numer().clone()),
            re_den: JsonInt(c.re.denom().clone()),
            im_num: JsonInt(c.im.numer().clone()),
            im_den: JsonInt(c.im.denom().clone()),
        }
    }

    pub fn to_coeff(&self, field: &str) -> Result<QComplex> {
        if self.re_den.0.is_zero() {
            return Err(Error::parse(format!("{field}.re_den"), "zero denominator"));
        }
        if self.im_den.0.is_zero() {
            return Err(Error::parse(format!("{field}.im_den"), "zero denominator"));
        }
        Ok(qc(
            BigRational::new(self.re_num.0.clone(), self.re_den.0.clone()),
            BigRational::new(self.im_num.0.clone(), self.im_den.0.clone()),
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub word: Vec<usize>,
    #[serde(flatten)]
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<PolyTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorTermJson {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    #[serde(flatten)]
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorJson {
    pub nvars: usize,
    pub terms: Vec<TensorTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleJson {
    pub nvars: usize,
    pub entries: Vec<PolyJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelMatrixJson {
    pub nvars: usize,
    pub dim: usize,
    pub rows: Vec<Vec<TensorJson>>,
}

/// Parses a 1-based JSON word, checking every letter against `nvars`.
pub fn word_from_json(letters: &[usize], nvars: usize, field: &str) -> Result<Word> {
    for (k, &l) in letters.iter().enumerate() {
        if l == 0 || l > nvars {
            return Err(Error::parse(
                format!("{field}[{k}]"),
                format!("letter {l} outside 1..={nvars}"),
            ));
        }
    }
    Ok(Word::from_letters(letters.iter().map(|&l| l - 1)))
}

fn check_nvars_field(nvars: usize, field: &str) -> Result<()> {
    if nvars == 0 {
        Err(Error::parse(field, "nvars must be at least 1"))
    } else {
        Ok(())
    }
}

impl PolyJson {
    pub fn from_poly(p: &NcPoly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            terms: p
                .terms()
                .map(|(w, c)| PolyTermJson {
                    word: w.to_one_based(),
                    coeff: CoeffJson::from_coeff(c),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<NcPoly> {
        self.to_poly_at("")
    }

    fn to_poly_at(&self, prefix: &str) -> Result<NcPoly> {
        check_nvars_field(self.nvars, &format!("{prefix}nvars"))?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            let field = format!("{prefix}terms[{k}]");
            let w = word_from_json(&t.word, self.nvars, &format!("{field}.word"))?;
            terms.push((w, t.coeff.to_coeff(&field)?));
        }
        NcPoly::from_terms(self.nvars, terms)
    }
}

impl TensorJson {
    pub fn from_tensor(t: &TensorPoly) -> Self {
        TensorJson {
            nvars: t.nvars(),
            terms: t
                .terms()
                .map(|(l, r, c)| TensorTermJson {
                    left: l.to_one_based(),
                    right: r.to_one_based(),
                    coeff: CoeffJson::from_coeff(c),
                })
                .collect(),
        }
    }

    pub fn to_tensor(&self) -> Result<TensorPoly> {
        self.to_tensor_at("")
    }

    fn to_tensor_at(&self, prefix: &str) -> Result<TensorPoly> {
        check_nvars_field(self.nvars, &format!("{prefix}nvars"))?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            let field = format!("{prefix}terms[{k}]");
            let l = word_from_json(&t.left, self.nvars, &format!("{field}.left"))?;
            let r = word_from_json(&t.right, self.nvars, &format!("{field}.right"))?;
            terms.push((l, r, t.coeff.to_coeff(&field)?));
        }
        TensorPoly::from_terms(self.nvars, terms)
    }
}

impl TupleJson {
    pub fn from_tuple(p: &PolyTuple) -> Self {
        TupleJson {
            nvars: p.nvars(),
            entries: p.entries().iter().map(PolyJson::from_poly).collect(),
        }
    }

    pub fn to_tuple(&self) -> Result<PolyTuple> {
        check_nvars_field(self.nvars, "nvars")?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            if e.nvars != self.nvars {
                return Err(Error::parse(
                    format!("entries[{k}].nvars"),
                    format!("expected {}, found {}", self.nvars, e.nvars),
                ));
            }
            entries.push(e.to_poly_at(&format!("entries[{k}].")));
        }
        PolyTuple::new(entries.into_iter().collect::<Result<Vec<_>>>()?)
    }
}

impl KernelMatrixJson {
    pub fn from_matrix(m: &KernelMatrix) -> Self {
        KernelMatrixJson {
            nvars: m.nvars(),
            dim: m.dim(),
            rows: m
                .rows()
                .map(|row| row.iter().map(TensorJson::from_tensor).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<KernelMatrix> {
        if self.rows.len() != self.dim {
            return Err(Error::parse("rows", format!("expected {} rows", self.dim)));
        }
        let mut rows = Vec::with_capacity(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::parse(
                    format!("rows[{i}]"),
                    format!("expected {} entries", self.dim),
                ));
            }
            let mut out = Vec::with_capacity(self.dim);
            for (j, t) in row.iter().enumerate() {
                out.push(t.to_tensor_at(&format!("rows[{i}][{j}]."))?);
            }
            rows.push(out);
        }
        KernelMatrix::from_rows(rows)
    }
}

pub fn poly_from_json_str(s: &str) -> Result<NcPoly> {
    serde_json::from_str::<PolyJson>(s)?.to_poly()
}

pub fn poly_to_json_string(p: &NcPoly) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PolyJson::from_poly(p))?)
}
