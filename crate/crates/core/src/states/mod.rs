//! Moment functionals and the pairings they induce.
//!
//! A state is anything implementing [`MomentFunctional`]: a map from words to
//! complex moments. Three backends are provided: explicit tables
//! ([`MomentTable`]), free cumulants ([`CumulantState`]), and random-matrix
//! Monte Carlo ([`mc_moment_table`], which produces a table).

mod cumulant;
mod ensemble;
mod pairing;
pub mod partitions;
mod table;
mod validate;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncalg::Word;

pub use cumulant::{cumulants_to_moment, moments_to_cumulants, CumulantSpec, CumulantState};
pub use ensemble::{mc_moment_table, GeneratorSpec, MatrixEnsembleConfig};
pub use pairing::{
    inner_matrix, inner_matrix_via_product, inner_tensor, inner_tuple, moment_of_poly,
    tensor_moment,
};
pub use partitions::{catalan, nc_partitions, Partition};
pub use table::MomentTable;
pub use validate::{operator_norm_estimate, validate_state, NormEstimate, StateCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Table,
    Cumulant,
    MatrixMc,
}

/// A unital, Hermitian, positive linear functional on noncommutative
/// polynomials, presented through its word moments.
pub trait MomentFunctional: Send + Sync {
    fn nvars(&self) -> usize;

    /// Longest word with a defined moment.
    fn max_order(&self) -> usize;

    fn is_tracial(&self) -> bool;

    fn backend(&self) -> Backend;

    fn moment(&self, w: &Word) -> Result<Complex64>;

    /// A rigorous (or sampled, for Monte Carlo) upper estimate of `‖x_i‖`.
    fn norm_upper_bound(&self, _i: usize) -> Option<f64> {
        None
    }

    /// Per-word standard error, when the moments are estimates.
    fn std_error(&self, _w: &Word) -> Option<f64> {
        None
    }
}

/// Fails unless the state defines every moment of length `required`.
pub fn require_order(phi: &(impl MomentFunctional + ?Sized), required: usize) -> Result<()> {
    if required > phi.max_order() {
        Err(Error::OrderExceeded {
            required,
            available: phi.max_order(),
        })
    } else {
        Ok(())
    }
}

pub(crate) fn check_word(w: &Word, nvars: usize, max_order: usize) -> Result<()> {
    if w.len() > max_order {
        return Err(Error::OrderExceeded {
            required: w.len(),
            available: max_order,
        });
    }
    if w.min_nvars() > nvars {
        return Err(Error::IndexOutOfRange {
            index: w.min_nvars() - 1,
            nvars,
        });
    }
    Ok(())
}

impl<T: MomentFunctional + ?Sized> MomentFunctional for &T {
    fn nvars(&self) -> usize {
        (**self).nvars()
    }
    fn max_order(&self) -> usize {
        (**self).max_order()
    }
    fn is_tracial(&self) -> bool {
        (**self).is_tracial()
    }
    fn backend(&self) -> Backend {
        (**self).backend()
    }
    fn moment(&self, w: &Word) -> Result<Complex64> {
        (**self).moment(w)
    }
    fn norm_upper_bound(&self, i: usize) -> Option<f64> {
        (**self).norm_upper_bound(i)
    }
    fn std_error(&self, w: &Word) -> Option<f64> {
        (**self).std_error(w)
    }
}

impl<T: MomentFunctional + ?Sized> MomentFunctional for Box<T> {
    fn nvars(&self) -> usize {
        (**self).nvars()
    }
    fn max_order(&self) -> usize {
        (**self).max_order()
    }
    fn is_tracial(&self) -> bool {
        (**self).is_tracial()
    }
    fn backend(&self) -> Backend {
        (**self).backend()
    }
    fn moment(&self, w: &Word) -> Result<Complex64> {
        (**self).moment(w)
    }
    fn norm_upper_bound(&self, i: usize) -> Option<f64> {
        (**self).norm_upper_bound(i)
    }
    fn std_error(&self, w: &Word) -> Option<f64> {
        (**self).std_error(w)
    }
}
