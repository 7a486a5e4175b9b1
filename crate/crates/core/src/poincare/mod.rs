//! Truncated estimates of the free Poincaré constant.

mod biane;

pub use biane::{biane_gap_check, BianeReport};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{dirichlet_gram, word_partials};
use crate::linalg::herm_eigen;
use crate::ncalg::Word;
use crate::numfmt::sig17;
use crate::states::{operator_norm_estimate, require_order, MomentFunctional, NormEstimate};
use crate::Tolerances;

/// Largest generalized Rayleigh quotient of the variance form against the
/// Dirichlet form on nonconstant polynomials of degree `≤ d`.
#[derive(Clone, Debug)]
pub struct PoincareEstimate {
    pub degree: usize,
    /// `C_d ≤ C_opt`.
    pub c_lower: f64,
    /// Dimension of the truncated space.
    pub dim: usize,
    /// Dimension of the Dirichlet form's null space.
    pub null_dim: usize,
    /// Directions with zero Dirichlet energy but positive variance.
    pub witnesses: usize,
    pub witness_max: f64,
    pub variance_min_eigenvalue: f64,
    pub dirichlet_min_eigenvalue: f64,
}

/// Computes `C_d`. Fails with [`Error::InvalidState`] if either form is
/// indefinite beyond `tol.psd` (relative).
pub fn poincare_lower_bound(
    phi: &(impl MomentFunctional + ?Sized),
    degree: usize,
    tol: &Tolerances,
) -> Result<PoincareEstimate> {
    require_order(phi, 2 * degree)?;
    let n = phi.nvars();
    let words: Vec<Word> = Word::all_up_to(n, degree)
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    let dim = words.len();

    let means: Vec<Complex64> = words.iter().map(|w| phi.moment(w)).collect::<Result<_>>()?;
    let rows: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|a| {
            let va = words[a].reversed();
            words
                .iter()
                .enumerate()
                .map(|(b, u)| Ok(phi.moment(&u.concat(&va))? - means[b] * means[a].conj()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let s = DMatrix::from_fn(dim, dim, |a, b| rows[a][b]);
    let e = dirichlet_gram(phi, &word_partials(&words, n))?;

    let s_eig = herm_eigen(&s);
    let e_eig = herm_eigen(&e);
    for (name, eig) in [("variance", &s_eig), ("Dirichlet", &e_eig)] {
        if eig.min() < -tol.psd * eig.max().max(1.0) {
            return Err(Error::InvalidState(format!(
                "{name} form is indefinite: eigenvalue {:.6e}",
                eig.min()
            )));
        }
    }

    let keep = e_eig.range_indices(tol.pinv);
    let null: Vec<usize> = (0..dim).filter(|k| !keep.contains(k)).collect();
    let w = DMatrix::from_fn(dim, keep.len(), |i, j| {
        e_eig.vectors[(i, keep[j])] / e_eig.values[keep[j]].sqrt()
    });
    let whitened = w.adjoint() * &s * &w;
    let c_lower = herm_eigen(&whitened).max().max(0.0);

    let z = DMatrix::from_fn(dim, null.len(), |i, j| e_eig.vectors[(i, null[j])]);
    let on_null = herm_eigen(&(z.adjoint() * &s * &z));
    let witnesses = on_null.values.iter().filter(|&&v| v > 1e-8).count();

    Ok(PoincareEstimate {
        degree,
        c_lower,
        dim,
        null_dim: null.len(),
        witnesses,
        witness_max: on_null.max().max(0.0),
        variance_min_eigenvalue: s_eig.min(),
        dirichlet_min_eigenvalue: e_eig.min(),
    })
}

/// Upper bounds `2n‖X‖²` (tracial) and `4n‖X‖²` (general) on `C_opt`,
/// where `‖X‖ = maxᵢ ‖xᵢ‖`.
#[derive(Clone, Debug, Serialize)]
pub struct VoiculescuBound {
    #[serde(serialize_with = "sig17")]
    pub norm: f64,
    /// Whether `norm` comes from backend upper estimates for every
    /// coordinate; otherwise it is the moment-based lower estimate and the
    /// bounds are indicative only.
    pub certified: bool,
    pub tracial: bool,
    #[serde(serialize_with = "sig17")]
    pub tracial_bound: f64,
    #[serde(serialize_with = "sig17")]
    pub general_bound: f64,
    pub norm_estimates: Vec<NormEstimate>,
}

impl VoiculescuBound {
    /// The bound valid for this state's traciality.
    pub fn applicable(&self) -> f64 {
        if self.tracial {
            self.tracial_bound
        } else {
            self.general_bound
        }
    }
}

/// `(2n‖X‖², 4n‖X‖²)`.
pub fn voiculescu_from_norm(nvars: usize, norm: f64) -> (f64, f64) {
    let base = nvars as f64 * norm * norm;
    (2.0 * base, 4.0 * base)
}

/// Evaluates the bounds from per-coordinate norm estimates at even moment
/// order `norm_order`.
pub fn voiculescu_bound(
    phi: &(impl MomentFunctional + ?Sized),
    norm_order: usize,
) -> Result<VoiculescuBound> {
    let norm_estimates: Vec<NormEstimate> = (0..phi.nvars())
        .map(|i| operator_norm_estimate(phi, i, norm_order))
        .collect::<Result<_>>()?;
    let certified = norm_estimates.iter().all(|e| e.upper.is_some());
    let norm = norm_estimates
        .iter()
        .map(|e| {
            if certified {
                e.upper.unwrap_or(e.lower)
            } else {
                e.lower
            }
        })
        .fold(0.0, f64::max);
    let (tracial_bound, general_bound) = voiculescu_from_norm(phi.nvars(), norm);
    Ok(VoiculescuBound {
        norm,
        certified,
        tracial: phi.is_tracial(),
        tracial_bound,
        general_bound,
        norm_estimates,
    })
}

/// Largest even order `≤ max_order`, capped at 16.
pub fn default_norm_order(max_order: usize) -> usize {
    (max_order.min(16) / 2) * 2
}

/// Serializable Poincaré report.
#[derive(Serialize)]
pub struct PoincareReport {
    pub degree: usize,
    #[serde(serialize_with = "sig17")]
    pub c_lower: f64,
    pub dim: usize,
    pub null_dim: usize,
    pub witnesses: usize,
    #[serde(serialize_with = "sig17")]
    pub voiculescu_tracial: f64,
    #[serde(serialize_with = "sig17")]
    pub voiculescu_general: f64,
    #[serde(serialize_with = "sig17")]
    pub voiculescu_applicable: f64,
    pub voiculescu_certified: bool,
    pub norm_estimates: Vec<NormEstimate>,
}

impl PoincareReport {
    pub fn new(est: &PoincareEstimate, v: &VoiculescuBound) -> Self {
        PoincareReport {
            degree: est.degree,
            c_lower: est.c_lower,
            dim: est.dim,
            null_dim: est.null_dim,
            witnesses: est.witnesses,
            voiculescu_tracial: v.tracial_bound,
            voiculescu_general: v.general_bound,
            voiculescu_applicable: v.applicable(),
            voiculescu_certified: v.certified,
            norm_estimates: v.norm_estimates.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        mc_moment_table, CumulantSpec, CumulantState, MatrixEnsembleConfig, MomentTable,
    };

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// `C_d` for one variable from raw moments `m_k`, via Cholesky whitening
    /// of the real Hankel-type forms.
    fn hankel_oracle(m: &[f64], d: usize) -> f64 {
        let s = DMatrix::from_fn(d, d, |a, b| m[a + b + 2] - m[a + 1] * m[b + 1]);
        let e = DMatrix::from_fn(d, d, |a, b| {
            let mut acc = 0.0;
            for p in 0..=a {
                for q in 0..=b {
                    acc += m[p + q] * m[(a - p) + (b - q)];
                }
            }
            acc
        });
        let l = e.cholesky().expect("positive definite").l();
        let li = l.try_inverse().unwrap();
        let m = &li * s * li.transpose();
        m.symmetric_eigen().eigenvalues.max()
    }

    #[test]
    fn semicircle_constant_is_one() {
        for n in 1..=2 {
            let phi = CumulantState::new(CumulantSpec::semicircular(n));
            let mut last = 0.0;
            for d in 1..=4 {
                let est = poincare_lower_bound(&phi, d, &tol()).unwrap();
                assert!(
                    (est.c_lower - 1.0).abs() < 1e-6,
                    "n={n} d={d}: {}",
                    est.c_lower
                );
                assert!(est.c_lower >= last - 1e-9);
                assert_eq!((est.null_dim, est.witnesses), (0, 0));
                last = est.c_lower;
            }
        }
    }

    #[test]
    fn matches_hankel_oracle() {
        let semi: Vec<f64> = (0..=8)
            .map(|k| {
                if k % 2 == 0 {
                    crate::states::catalan(k / 2) as f64
                } else {
                    0.0
                }
            })
            .collect();
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 16));
        let fp: Vec<f64> = (0..=8)
            .map(|k| phi.moment(&Word::power(0, k)).unwrap().re)
            .collect();
        for d in 1..=4 {
            assert!((hankel_oracle(&semi, d) - 1.0).abs() < 1e-9);
            let ours = poincare_lower_bound(&phi, d, &tol()).unwrap().c_lower;
            let oracle = hankel_oracle(&fp, d);
            assert!(
                (ours - oracle).abs() < 1e-8 * oracle,
                "d={d}: {ours} vs {oracle}"
            );
        }
    }

    #[test]
    fn linear_span_gives_covariance() {
        let cov = vec![vec![2.0, 0.5], vec![0.5, 1.0]];
        let phi = CumulantState::new(CumulantSpec::semicircular_with_covariance(&cov).unwrap());
        let est = poincare_lower_bound(&phi, 1, &tol()).unwrap();
        let expected = 1.5 + (0.25f64 + 0.25).sqrt();
        assert!((est.c_lower - expected).abs() < 1e-10);
    }

    #[test]
    fn point_mass() {
        let phi = CumulantState::new(CumulantSpec::new(2).unwrap());
        let est = poincare_lower_bound(&phi, 3, &tol()).unwrap();
        assert_eq!(est.c_lower, 0.0);
        assert_eq!(est.witnesses, 0);
        assert!(est.null_dim > 0);
        let v = voiculescu_bound(&phi, 8).unwrap();
        assert_eq!((v.tracial_bound, v.general_bound), (0.0, 0.0));
    }

    #[test]
    fn voiculescu_examples() {
        assert_eq!(voiculescu_from_norm(1, 2.0), (8.0, 16.0));
        assert_eq!(voiculescu_from_norm(2, 2.0).0, 16.0);
        let v = voiculescu_bound(&CumulantState::new(CumulantSpec::semicircular(2)), 16).unwrap();
        assert!(v.certified && v.tracial);
        assert!((v.applicable() - 16.0).abs() < 1e-9);
    }

    #[test]
    fn indefinite_variance_rejected() {
        // φ(x⁴) = 0 < φ(x²)² is impossible for a state
        let mut t = MomentTable::new(1, 4, true).unwrap();
        for k in 1..=4 {
            t.insert(
                Word::power(0, k),
                Complex64::new(if k == 2 { 1.0 } else { 0.0 }, 0.0),
            )
            .unwrap();
        }
        match poincare_lower_bound(&t, 2, &tol()) {
            Err(Error::InvalidState(msg)) => assert!(msg.contains("variance")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn matrix_backend_below_voiculescu() {
        let cfg = MatrixEnsembleConfig::gue(1, 60, 20, 3);
        let t = mc_moment_table(&cfg, 8).unwrap();
        let v = voiculescu_bound(&t, 8).unwrap();
        assert!(v.certified);
        for d in 1..=4 {
            let est = poincare_lower_bound(&t, d, &tol()).unwrap();
            assert!(est.c_lower <= v.applicable() + 1e-6);
        }
    }
}
