//! Explicit moment tables.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_word, Backend, MomentFunctional};
use crate::error::{Error, Result};
use crate::ncalg::json::word_from_json;
use crate::ncalg::Word;
use crate::numfmt::{sig17, sig17_opt, sig17_vec};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct WordValueJson {
    pub word: Vec<usize>,
    #[serde(serialize_with = "sig17")]
    pub re: f64,
    #[serde(default, serialize_with = "sig17")]
    pub im: f64,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "sig17_opt"
    )]
    pub std_err: Option<f64>,
}

impl WordValueJson {
    pub fn new(w: &Word, v: Complex64, std_err: Option<f64>) -> Self {
        WordValueJson {
            word: w.to_one_based(),
            re: v.re,
            im: v.im,
            std_err,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    nvars: usize,
    max_order: usize,
    tracial: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    backend: Option<Backend>,
    #[serde(
        default,
        skip_serializing_if = "Vec::is_empty",
        serialize_with = "sig17_vec"
    )]
    norm_upper: Vec<f64>,
    entries: Vec<WordValueJson>,
}

/// A state given by an explicit word → moment map up to `max_order`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    nvars: usize,
    max_order: usize,
    tracial: bool,
    backend: Backend,
    entries: BTreeMap<Word, Complex64>,
    std_errors: BTreeMap<Word, f64>,
    norm_upper: Vec<f64>,
}

impl MomentTable {
    /// An empty table; only the unit moment is defined.
    pub fn new(nvars: usize, max_order: usize, tracial: bool) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::NoVariables);
        }
        let mut entries = BTreeMap::new();
        entries.insert(Word::empty(), Complex64::new(1.0, 0.0));
        Ok(MomentTable {
            nvars,
            max_order,
            tracial,
            backend: Backend::Table,
            entries,
            std_errors: BTreeMap::new(),
            norm_upper: Vec::new(),
        })
    }

    pub fn insert(&mut self, w: Word, v: Complex64) -> Result<()> {
        check_word(&w, self.nvars, self.max_order)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::InvalidState(format!("non-finite moment at {w}")));
        }
        self.entries.insert(w, v);
        Ok(())
    }

    pub fn set_std_error(&mut self, w: Word, e: f64) {
        self.std_errors.insert(w, e);
    }

    /// Records sampled per-generator norm estimates (matrix backend).
    pub fn set_norm_upper(&mut self, norms: Vec<f64>) {
        self.norm_upper = norms;
    }

    pub(crate) fn set_backend(&mut self, backend: Backend) {
        self.backend = backend;
    }

    /// Tabulates every word moment of `phi` up to `max_order`.
    pub fn from_functional(
        phi: &(impl MomentFunctional + ?Sized),
        max_order: usize,
    ) -> Result<Self> {
        super::require_order(phi, max_order)?;
        let mut t = Self::new(phi.nvars(), max_order, phi.is_tracial())?;
        for w in Word::all_up_to(phi.nvars(), max_order) {
            let v = phi.moment(&w)?;
            t.entries.insert(w, v);
        }
        t.norm_upper = (0..phi.nvars())
            .map_while(|i| phi.norm_upper_bound(i))
            .collect();
        if t.norm_upper.len() != phi.nvars() {
            t.norm_upper.clear();
        }
        Ok(t)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json_string(&self) -> Result<String> {
        let json = TableJson {
            nvars: self.nvars,
            max_order: self.max_order,
            tracial: self.tracial,
            backend: (self.backend != Backend::Table).then_some(self.backend),
            norm_upper: self.norm_upper.clone(),
            entries: self
                .entries
                .iter()
                .map(|(w, v)| WordValueJson::new(w, *v, self.std_errors.get(w).copied()))
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&json)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: TableJson = serde_json::from_str(s)?;
        let mut t = Self::new(json.nvars, json.max_order, json.tracial)?;
        t.backend = json.backend.unwrap_or(Backend::Table);
        if !json.norm_upper.is_empty() && json.norm_upper.len() != json.nvars {
            return Err(Error::parse(
                "norm_upper",
                "one entry per variable expected",
            ));
        }
        t.norm_upper = json.norm_upper;
        for (k, e) in json.entries.iter().enumerate() {
            let field = format!("entries[{k}]");
            let w = word_from_json(&e.word, json.nvars, &format!("{field}.word"))?;
            if w.len() > json.max_order {
                return Err(Error::parse(
                    format!("{field}.word"),
                    format!("length {} exceeds max_order {}", w.len(), json.max_order),
                ));
            }
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::parse(field, "non-finite moment"));
            }
            if let Some(se) = e.std_err {
                t.std_errors.insert(w.clone(), se);
            }
            t.entries.insert(w, Complex64::new(e.re, e.im));
        }
        Ok(t)
    }
}

impl MomentFunctional for MomentTable {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn is_tracial(&self) -> bool {
        self.tracial
    }

    fn backend(&self) -> Backend {
        self.backend
    }

    fn moment(&self, w: &Word) -> Result<Complex64> {
        check_word(w, self.nvars, self.max_order)?;
        self.entries
            .get(w)
            .copied()
            .ok_or_else(|| Error::MissingMoment(w.to_one_based()))
    }

    fn norm_upper_bound(&self, i: usize) -> Option<f64> {
        self.norm_upper.get(i).copied()
    }

    fn std_error(&self, w: &Word) -> Option<f64> {
        self.std_errors.get(w).copied()
    }
}
