//! Random-matrix Monte Carlo backend.
//!
//! Each coordinate is sampled as an `N × N` Hermitian matrix (a GUE matrix or
//! a self-adjoint polynomial in fresh GUE matrices) and `φ(w)` is estimated
//! by the sample mean of the normalized trace `N⁻¹ Tr(X_w)`. Sample `s` draws
//! from ChaCha8 stream `s` of the configured seed, so results do not depend
//! on the number of worker threads.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::partitions::MAX_PARTITION_ORDER;
use super::{Backend, MomentTable};
use crate::error::{Error, Result};
use crate::ncalg::json::PolyJson;
use crate::ncalg::{Coefficient, NcPoly, Word};

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Gue,
    /// `poly(G₁, …, G_m)` for `m = fresh_gues` GUE matrices drawn for this
    /// coordinate alone.
    PolyOfGue {
        poly: NcPoly,
        fresh_gues: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixEnsembleConfig {
    pub size: usize,
    pub samples: usize,
    pub seed: u64,
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum GeneratorJson {
    Gue,
    PolyOfGue { poly: PolyJson, fresh_gues: usize },
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    #[serde(rename = "N")]
    size: usize,
    samples: usize,
    seed: u64,
    generators: Vec<GeneratorJson>,
}

impl MatrixEnsembleConfig {
    /// `nvars` independent GUE matrices.
    pub fn gue(nvars: usize, size: usize, samples: usize, seed: u64) -> Self {
        MatrixEnsembleConfig {
            size,
            samples,
            seed,
            generators: vec![GeneratorSpec::Gue; nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::parse("N", "matrix size must be at least 1"));
        }
        if self.samples == 0 {
            return Err(Error::parse("samples", "at least one sample is required"));
        }
        if self.generators.is_empty() {
            return Err(Error::NoVariables);
        }
        for (k, g) in self.generators.iter().enumerate() {
            if let GeneratorSpec::PolyOfGue { poly, fresh_gues } = g {
                if *fresh_gues == 0 || poly.nvars() != *fresh_gues {
                    return Err(Error::parse(
                        format!("generators[{k}].fresh_gues"),
                        format!("must equal the polynomial's nvars ({})", poly.nvars()),
                    ));
                }
                if !poly.is_self_adjoint() {
                    return Err(Error::parse(
                        format!("generators[{k}].poly"),
                        "polynomial is not self-adjoint",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: ConfigJson = serde_json::from_str(s)?;
        let generators = json
            .generators
            .into_iter()
            .enumerate()
            .map(|(k, g)| match g {
                GeneratorJson::Gue => Ok(GeneratorSpec::Gue),
                GeneratorJson::PolyOfGue { poly, fresh_gues } => {
                    let poly = poly.to_poly().map_err(|e| match e {
                        Error::Parse { field, message } => {
                            Error::parse(format!("generators[{k}].poly.{field}"), message)
                        }
                        other => Error::parse(format!("generators[{k}].poly"), other.to_string()),
                    })?;
                    Ok(GeneratorSpec::PolyOfGue { poly, fresh_gues })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = MatrixEnsembleConfig {
            size: json.size,
            samples: json.samples,
            seed: json.seed,
            generators,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let json = ConfigJson {
            size: self.size,
            samples: self.samples,
            seed: self.seed,
            generators: self
                .generators
                .iter()
                .map(|g| match g {
                    GeneratorSpec::Gue => GeneratorJson::Gue,
                    GeneratorSpec::PolyOfGue { poly, fresh_gues } => GeneratorJson::PolyOfGue {
                        poly: PolyJson::from_poly(poly),
                        fresh_gues: *fresh_gues,
                    },
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&json)?)
    }
}

/// A complex matrix as a pair of real matrices, so products run on real GEMM.
#[derive(Clone)]
struct CMat {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
}

impl CMat {
    fn identity(n: usize) -> Self {
        CMat {
            re: DMatrix::identity(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    fn zeros(n: usize) -> Self {
        CMat {
            re: DMatrix::zeros(n, n),
            im: DMatrix::zeros(n, n),
        }
    }

    fn mul(&self, other: &CMat) -> CMat {
        let mut re = &self.re * &other.re;
        re.gemm(-1.0, &self.im, &other.im, 1.0);
        let mut im = &self.re * &other.im;
        im.gemm(1.0, &self.im, &other.re, 1.0);
        CMat { re, im }
    }

    /// `self += c · other`.
    fn axpy(&mut self, c: Complex64, other: &CMat) {
        self.re += &other.re * c.re - &other.im * c.im;
        self.im += &other.im * c.re + &other.re * c.im;
    }

    fn trace(&self) -> Complex64 {
        Complex64::new(self.re.trace(), self.im.trace())
    }

    fn transpose(&self) -> CMat {
        CMat {
            re: self.re.transpose(),
            im: self.im.transpose(),
        }
    }

    /// `Tr(self · other)` given `other_t = otherᵀ`.
    fn trace_product(&self, other_t: &CMat) -> Complex64 {
        let re = self.re.dot(&other_t.re) - self.im.dot(&other_t.im);
        let im = self.re.dot(&other_t.im) + self.im.dot(&other_t.re);
        Complex64::new(re, im)
    }

    fn spectral_norm(&self) -> f64 {
        let n = self.re.nrows();
        let h = DMatrix::from_fn(n, n, |i, j| {
            let a = Complex64::new(self.re[(i, j)], self.im[(i, j)]);
            let b = Complex64::new(self.re[(j, i)], -self.im[(j, i)]);
            (a + b) * 0.5
        });
        h.symmetric_eigenvalues()
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

fn sample_gue(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let diag_sd = (1.0 / n as f64).sqrt();
    let off_sd = (0.5 / n as f64).sqrt();
    let mut m = CMat::zeros(n);
    for i in 0..n {
        let d: f64 = StandardNormal.sample(rng);
        m.re[(i, i)] = diag_sd * d;
        for j in i + 1..n {
            let a: f64 = StandardNormal.sample(rng);
            let b: f64 = StandardNormal.sample(rng);
            m.re[(i, j)] = off_sd * a;
            m.re[(j, i)] = off_sd * a;
            m.im[(i, j)] = off_sd * b;
            m.im[(j, i)] = -off_sd * b;
        }
    }
    m
}

fn eval_poly(p: &NcPoly, gues: &[CMat], n: usize) -> CMat {
    let mut out = CMat::zeros(n);
    for (w, c) in p.terms() {
        let mut m = CMat::identity(n);
        for l in w.letters() {
            m = m.mul(&gues[l]);
        }
        out.axpy(c.to_c64(), &m);
    }
    out
}

struct SampleOutput {
    traces: Vec<Complex64>,
    norms: Vec<f64>,
}

fn run_sample(cfg: &MatrixEnsembleConfig, s: usize, words: &[Word], half: usize) -> SampleOutput {
    let n = cfg.size;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(s as u64);
    let gens: Vec<CMat> = cfg
        .generators
        .iter()
        .map(|g| match g {
            GeneratorSpec::Gue => sample_gue(n, &mut rng),
            GeneratorSpec::PolyOfGue { poly, fresh_gues } => {
                let fresh: Vec<CMat> = (0..*fresh_gues).map(|_| sample_gue(n, &mut rng)).collect();
                eval_poly(poly, &fresh, n)
            }
        })
        .collect();
    let norms = gens.iter().map(CMat::spectral_norm).collect();

    // products and transposes for every word of length ≤ half
    let nv = gens.len();
    let mut products: std::collections::HashMap<Word, (CMat, CMat)> =
        std::collections::HashMap::new();
    let mut frontier = vec![(Word::empty(), CMat::identity(n))];
    for _ in 0..half {
        let mut next = Vec::with_capacity(frontier.len() * nv);
        for (w, m) in &frontier {
            for (i, g) in gens.iter().enumerate() {
                let wi = w.concat(&Word::letter(i));
                let p = if w.is_empty() { g.clone() } else { m.mul(g) };
                products.insert(wi.clone(), (p.clone(), p.transpose()));
                next.push((wi, p));
            }
        }
        frontier = next;
    }

    let scale = 1.0 / n as f64;
    let traces = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                Complex64::new(1.0, 0.0)
            } else if w.len() <= half {
                products[w].0.trace() * scale
            } else {
                let u = w.slice(0, half);
                let v = w.slice(half, w.len());
                products[&u].0.trace_product(&products[&v].1) * scale
            }
        })
        .collect();
    SampleOutput { traces, norms }
}

/// Monte Carlo estimate of every word moment up to `max_order`, with
/// per-word standard errors and the largest sampled spectral norm of each
/// coordinate.
pub fn mc_moment_table(cfg: &MatrixEnsembleConfig, max_order: usize) -> Result<MomentTable> {
    cfg.validate()?;
    if max_order > MAX_PARTITION_ORDER {
        return Err(Error::PartitionOrder(max_order));
    }
    let nv = cfg.nvars();
    let words = Word::all_up_to(nv, max_order);
    let half = max_order.div_ceil(2);
    let outputs: Vec<SampleOutput> = (0..cfg.samples)
        .into_par_iter()
        .map(|s| run_sample(cfg, s, &words, half))
        .collect();

    let count = cfg.samples as f64;
    let mut table = MomentTable::new(nv, max_order, true)?;
    table.set_backend(Backend::MatrixMc);
    for (k, w) in words.iter().enumerate() {
        let mean = outputs.iter().map(|o| o.traces[k]).sum::<Complex64>() / count;
        if !mean.re.is_finite() || !mean.im.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite trace estimate for word {w}"
            )));
        }
        table.insert(w.clone(), mean)?;
        if cfg.samples > 1 {
            let ss: f64 = outputs
                .iter()
                .map(|o| (o.traces[k] - mean).norm_sqr())
                .sum();
            table.set_std_error(w.clone(), (ss / (count - 1.0) / count).sqrt());
        }
    }
    let norms = (0..nv)
        .map(|i| outputs.iter().map(|o| o.norms[i]).fold(0.0f64, f64::max))
        .collect();
    table.set_norm_upper(norms);
    Ok(table)
}
