//! Free cumulant backend.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::partitions::{nc_partitions, Partition, MAX_PARTITION_ORDER};
use super::table::WordValueJson;
use super::{check_word, Backend, MomentFunctional};
use crate::error::{Error, Result};
use crate::ncalg::json::word_from_json;
use crate::ncalg::Word;

/// Multilinear free cumulants `κ(i₁,…,i_m)` indexed by words; absent words
/// have cumulant zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulantSpec {
    nvars: usize,
    kappa: BTreeMap<Word, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct CumulantJson {
    nvars: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tracial: Option<bool>,
    kappa: Vec<WordValueJson>,
}

impl CumulantSpec {
    pub fn new(nvars: usize) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::NoVariables);
        }
        Ok(CumulantSpec {
            nvars,
            kappa: BTreeMap::new(),
        })
    }

    pub fn from_entries<I: IntoIterator<Item = (Word, Complex64)>>(
        nvars: usize,
        entries: I,
    ) -> Result<Self> {
        let mut spec = Self::new(nvars)?;
        for (w, v) in entries {
            spec.set(w, v)?;
        }
        Ok(spec)
    }

    /// Sets `κ(w) = v`; zero removes the entry.
    pub fn set(&mut self, w: Word, v: Complex64) -> Result<()> {
        if w.is_empty() {
            return Err(Error::InvalidState(
                "cumulants are indexed by nonempty words".into(),
            ));
        }
        check_word(&w, self.nvars, MAX_PARTITION_ORDER)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::InvalidState(format!("non-finite cumulant at {w}")));
        }
        if v == Complex64::new(0.0, 0.0) {
            self.kappa.remove(&w);
        } else {
            self.kappa.insert(w, v);
        }
        Ok(())
    }

    /// `n` free standard semicircular variables: `κ(i,i) = 1`, all else zero.
    pub fn semicircular(nvars: usize) -> Self {
        let mut s = Self::new(nvars).expect("nvars ≥ 1");
        for i in 0..nvars {
            s.kappa.insert(Word::power(i, 2), Complex64::new(1.0, 0.0));
        }
        s
    }

    /// A semicircular family with covariance `κ(i,j) = cov[i][j]`.
    pub fn semicircular_with_covariance(cov: &[Vec<f64>]) -> Result<Self> {
        let n = cov.len();
        let mut s = Self::new(n)?;
        for (i, row) in cov.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "covariance row {i} has length {}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if (v - cov[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidState("covariance is not symmetric".into()));
                }
                s.set(Word::from_letters([i, j]), Complex64::new(v, 0.0))?;
            }
        }
        Ok(s)
    }

    /// `n` free copies of a centered free Poisson variable of rate one:
    /// `κ_1 = 0` and `κ_m = 1` for `2 ≤ m ≤ order`.
    pub fn free_poisson_centered(nvars: usize, order: usize) -> Self {
        let mut s = Self::new(nvars).expect("nvars ≥ 1");
        for i in 0..nvars {
            for m in 2..=order.min(MAX_PARTITION_ORDER) {
                s.kappa.insert(Word::power(i, m), Complex64::new(1.0, 0.0));
            }
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Length of the longest word with a nonzero cumulant.
    pub fn max_order(&self) -> usize {
        self.kappa.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn get(&self, w: &Word) -> Complex64 {
        self.kappa.get(w).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.kappa.iter()
    }

    /// Cumulants of `k^{-1/2}(X⁽¹⁾ + … + X⁽ᵏ⁾)` for free copies `X⁽ʲ⁾`:
    /// every `κ(w)` is multiplied by `k^{1-|w|/2}`.
    pub fn rescaled(&self, k: u64) -> Self {
        let kf = k as f64;
        CumulantSpec {
            nvars: self.nvars,
            kappa: self
                .kappa
                .iter()
                .map(|(w, v)| (w.clone(), v * kf.powf(1.0 - w.len() as f64 / 2.0)))
                .collect(),
        }
    }

    /// Whether every cumulant is invariant under cyclic rotation, which is
    /// equivalent to traciality of the induced state.
    pub fn is_cyclic(&self, tol: f64) -> bool {
        self.kappa.iter().all(|(w, v)| {
            (1..w.len()).all(|r| (self.get(&w.rotated(r)) - v).norm() <= tol * v.norm().max(1.0))
        })
    }

    pub fn to_json_string(&self) -> Result<String> {
        let json = CumulantJson {
            nvars: self.nvars,
            max_order: Some(self.max_order()),
            tracial: Some(self.is_cyclic(1e-12)),
            kappa: self
                .kappa
                .iter()
                .map(|(w, v)| WordValueJson::new(w, *v, None))
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&json)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: CumulantJson = serde_json::from_str(s)?;
        let mut spec = Self::new(json.nvars)?;
        for (k, e) in json.kappa.iter().enumerate() {
            let field = format!("kappa[{k}]");
            let w = word_from_json(&e.word, json.nvars, &format!("{field}.word"))?;
            if w.is_empty() {
                return Err(Error::parse(
                    format!("{field}.word"),
                    "cumulant words must be nonempty",
                ));
            }
            if w.len() > MAX_PARTITION_ORDER {
                return Err(Error::parse(
                    format!("{field}.word"),
                    format!("longer than {MAX_PARTITION_ORDER}"),
                ));
            }
            spec.set(w, Complex64::new(e.re, e.im))
                .map_err(|err| Error::parse(field, err.to_string()))?;
        }
        if json.tracial == Some(true) && !spec.is_cyclic(1e-12) {
            return Err(Error::parse(
                "tracial",
                "declared tracial but the cumulants are not cyclic",
            ));
        }
        Ok(spec)
    }
}

/// The moment functional induced by a [`CumulantSpec`], computed by the
/// first-block recursion
/// `φ(w) = Σ_{V ∋ 1} κ(w|V) · Π_{gaps G of V} φ(w|G)` with per-word memoization.
pub struct CumulantState {
    spec: CumulantSpec,
    max_order: usize,
    tracial: bool,
    active_orders: Vec<bool>,
    cache: RwLock<HashMap<Word, Complex64>>,
}

impl CumulantState {
    pub fn new(spec: CumulantSpec) -> Self {
        Self::with_max_order(spec, MAX_PARTITION_ORDER).expect("default order is supported")
    }

    pub fn with_max_order(spec: CumulantSpec, max_order: usize) -> Result<Self> {
        if max_order > MAX_PARTITION_ORDER {
            return Err(Error::PartitionOrder(max_order));
        }
        let mut active_orders = vec![false; MAX_PARTITION_ORDER + 1];
        for w in spec.kappa.keys() {
            active_orders[w.len()] = true;
        }
        Ok(CumulantState {
            tracial: spec.is_cyclic(1e-12),
            spec,
            max_order,
            active_orders,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &CumulantSpec {
        &self.spec
    }

    fn cached(&self, w: &Word) -> Option<Complex64> {
        self.cache
            .read()
            .expect("moment cache poisoned")
            .get(w)
            .copied()
    }

    fn moment_unchecked(&self, w: &Word) -> Complex64 {
        if w.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        if let Some(v) = self.cached(w) {
            return v;
        }
        let m = w.len();
        let mut total = Complex64::new(0.0, 0.0);
        let mut positions = Vec::with_capacity(m);
        for mask in 0u32..(1u32 << (m - 1)) {
            let size = mask.count_ones() as usize + 1;
            if !self.active_orders[size] {
                continue;
            }
            positions.clear();
            positions.push(0);
            positions.extend((1..m).filter(|p| mask & (1 << (p - 1)) != 0));
            let kappa = self.spec.get(&w.select(&positions));
            if kappa == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut term = kappa;
            for (k, &start) in positions.iter().enumerate() {
                let end = positions.get(k + 1).copied().unwrap_or(m);
                if end > start + 1 {
                    term *= self.moment_unchecked(&w.slice(start + 1, end));
                    if term == Complex64::new(0.0, 0.0) {
                        break;
                    }
                }
            }
            total += term;
        }
        self.cache
            .write()
            .expect("moment cache poisoned")
            .insert(w.clone(), total);
        total
    }
}

impl MomentFunctional for CumulantState {
    fn nvars(&self) -> usize {
        self.spec.nvars
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn is_tracial(&self) -> bool {
        self.tracial
    }

    fn backend(&self) -> Backend {
        Backend::Cumulant
    }

    fn moment(&self, w: &Word) -> Result<Complex64> {
        check_word(w, self.spec.nvars, self.max_order)?;
        Ok(self.moment_unchecked(w))
    }

    /// Growth rate of the majorant moments `M_p = Σ_{π ∈ NC(p)} Π |κ_{|B|}|`
    /// of `x_i`, which dominate `|φ(x_i^p)|`. With `K_m = |κ(i^m)|` it equals
    /// `min_{u > 0} (1 + Σ K_m u^m)/u`, attained where `Σ (m−1) K_m u^m = 1`.
    fn norm_upper_bound(&self, i: usize) -> Option<f64> {
        if i >= self.spec.nvars {
            return None;
        }
        let k: Vec<(usize, f64)> = self
            .spec
            .kappa
            .iter()
            .filter(|(w, _)| w.letters().all(|l| l == i))
            .map(|(w, v)| (w.len(), v.norm()))
            .collect();
        Some(majorant_radius(&k))
    }
}

/// `min_{u>0} (1 + Σ K_m u^m)/u` for nonnegative `K_m`.
pub(crate) fn majorant_radius(k: &[(usize, f64)]) -> f64 {
    let k1: f64 = k.iter().filter(|(m, _)| *m == 1).map(|(_, v)| v).sum();
    let f = |u: f64| {
        k.iter()
            .map(|&(m, v)| (m as f64 - 1.0) * v * u.powi(m as i32))
            .sum::<f64>()
            - 1.0
    };
    if k.iter().all(|&(m, v)| m < 2 || v == 0.0) {
        return k1;
    }
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = hi;
    (1.0 + k.iter().map(|&(m, v)| v * u.powi(m as i32)).sum::<f64>()) / u
}

fn partitions_cached(m: usize) -> Result<Arc<Vec<Partition>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<Partition>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().expect("partition cache poisoned").get(&m) {
        return Ok(p.clone());
    }
    let p = Arc::new(nc_partitions(m)?);
    cache
        .write()
        .expect("partition cache poisoned")
        .insert(m, p.clone());
    Ok(p)
}

/// `Σ_{π ∈ NC(|w|)} Π_{B ∈ π} κ(w|B)` by explicit enumeration of
/// noncrossing partitions. The cost grows like the Catalan numbers; use
/// [`CumulantState`] for repeated or long words.
pub fn cumulants_to_moment(spec: &CumulantSpec, w: &Word) -> Result<Complex64> {
    check_word(w, spec.nvars, MAX_PARTITION_ORDER)?;
    if w.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let parts = partitions_cached(w.len())?;
    Ok(parts
        .iter()
        .map(|p| {
            p.iter()
                .map(|b| spec.get(&w.select(b)))
                .product::<Complex64>()
        })
        .sum())
}

/// Inverts the moment–cumulant relation for every word of length
/// `1..=max_order`.
pub fn moments_to_cumulants(
    phi: &(impl MomentFunctional + ?Sized),
    max_order: usize,
) -> Result<CumulantSpec> {
    if max_order > MAX_PARTITION_ORDER {
        return Err(Error::PartitionOrder(max_order));
    }
    let n = phi.nvars();
    let mut spec = CumulantSpec::new(n)?;
    let mut moments: HashMap<Word, Complex64> = HashMap::new();
    let mut moment = |w: &Word| -> Result<Complex64> {
        if w.is_empty() {
            return Ok(Complex64::new(1.0, 0.0));
        }
        if let Some(v) = moments.get(w) {
            return Ok(*v);
        }
        let v = phi.moment(w).map_err(|e| match e {
            Error::OrderExceeded { .. } => Error::MissingMoment(w.to_one_based()),
            other => other,
        })?;
        moments.insert(w.clone(), v);
        Ok(v)
    };
    let mut kappa: HashMap<Word, Complex64> = HashMap::new();
    let mut positions = Vec::new();
    for len in 1..=max_order {
        for w in Word::all_of_length(n, len) {
            let mut k = moment(&w)?;
            for mask in 0u32..((1u32 << (len - 1)) - 1) {
                positions.clear();
                positions.push(0);
                positions.extend((1..len).filter(|p| mask & (1 << (p - 1)) != 0));
                let kv = kappa
                    .get(&w.select(&positions))
                    .copied()
                    .unwrap_or_default();
                if kv == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut term = kv;
                for (j, &start) in positions.iter().enumerate() {
                    let end = positions.get(j + 1).copied().unwrap_or(len);
                    if end > start + 1 {
                        term *= moment(&w.slice(start + 1, end))?;
                    }
                }
                k -= term;
            }
            kappa.insert(w, k);
        }
    }
    for (w, v) in kappa {
        spec.set(w, v)?;
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::partitions::catalan;
    use crate::states::MomentTable;

    fn w(letters: &[usize]) -> Word {
        Word::from_letters(letters.iter().copied())
    }

    #[test]
    fn semicircular_moments_are_catalan() {
        let phi = CumulantState::new(CumulantSpec::semicircular(1));
        for m in 1..=6 {
            let even = phi.moment(&Word::power(0, 2 * m)).unwrap();
            assert!((even.re - catalan(m) as f64).abs() < 1e-12);
            assert_eq!(phi.moment(&Word::power(0, 2 * m - 1)).unwrap().norm(), 0.0);
        }
        assert_eq!(phi.moment(&w(&[0, 0, 0, 0])).unwrap().re, 2.0);
        assert_eq!(phi.moment(&w(&[0, 0, 0, 0, 0, 0])).unwrap().re, 5.0);
    }

    #[test]
    fn free_semicirculars_alternating_word_vanishes() {
        let phi = CumulantState::new(CumulantSpec::semicircular(2));
        assert_eq!(phi.moment(&w(&[0, 1, 0, 1])).unwrap().norm(), 0.0);
        assert_eq!(phi.moment(&w(&[0, 0, 1, 1])).unwrap().re, 1.0);
    }

    #[test]
    fn centered_free_poisson_moments() {
        // moments of g² − 1 for standard semicircular g: 1, 0, 1, 1, 3, 6
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 16));
        let expected = [0.0, 1.0, 1.0, 3.0, 6.0, 15.0];
        for (m, e) in expected.iter().enumerate() {
            let v = phi.moment(&Word::power(0, m + 1)).unwrap();
            assert!((v.re - e).abs() < 1e-12, "order {}: {v}", m + 1);
        }
    }

    #[test]
    fn recursion_matches_enumeration() {
        let spec = CumulantSpec::from_entries(
            2,
            [
                (w(&[0, 0]), Complex64::new(1.0, 0.0)),
                (w(&[0, 1]), Complex64::new(0.3, 0.0)),
                (w(&[1, 0]), Complex64::new(0.3, 0.0)),
                (w(&[1, 1, 1]), Complex64::new(0.5, 0.0)),
                (w(&[0, 1, 1, 0]), Complex64::new(0.2, 0.1)),
            ],
        )
        .unwrap();
        let phi = CumulantState::new(spec.clone());
        for word in Word::all_up_to(2, 6) {
            let a = phi.moment(&word).unwrap();
            let b = cumulants_to_moment(&spec, &word).unwrap();
            assert!((a - b).norm() < 1e-12, "{word}");
        }
    }

    #[test]
    fn inversion_of_free_poisson_table() {
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 8));
        let table = MomentTable::from_functional(&phi, 8).unwrap();
        let spec = moments_to_cumulants(&table, 8).unwrap();
        assert!(spec.get(&w(&[0])).norm() < 1e-12);
        for m in 2..=8 {
            assert!((spec.get(&Word::power(0, m)) - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn zero_moments_give_zero_cumulants() {
        let spec = CumulantSpec::new(2).unwrap();
        let phi = CumulantState::new(spec);
        let table = MomentTable::from_functional(&phi, 4).unwrap();
        let back = moments_to_cumulants(&table, 4).unwrap();
        assert_eq!(back.entries().count(), 0);
    }

    #[test]
    fn missing_moments_reported() {
        let phi = CumulantState::new(CumulantSpec::semicircular(1));
        let table = MomentTable::from_functional(&phi, 3).unwrap();
        assert!(matches!(
            moments_to_cumulants(&table, 4),
            Err(Error::MissingMoment(_))
        ));
    }

    #[test]
    fn rescaling_scales_by_order() {
        let s = CumulantSpec::free_poisson_centered(1, 6).rescaled(4);
        assert!((s.get(&Word::power(0, 4)).re - 0.25).abs() < 1e-15);
        assert_eq!(s.get(&Word::power(0, 2)).re, 1.0);
        assert_eq!(
            CumulantSpec::semicircular(2).rescaled(9),
            CumulantSpec::semicircular(2)
        );
    }

    #[test]
    fn json_round_trip() {
        let s = CumulantSpec::free_poisson_centered(2, 5);
        let back = CumulantSpec::from_json_str(&s.to_json_string().unwrap()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn order_beyond_limit() {
        let phi = CumulantState::new(CumulantSpec::semicircular(1));
        assert!(matches!(
            phi.moment(&Word::power(0, 17)),
            Err(Error::OrderExceeded { required: 17, .. })
        ));
    }

    #[test]
    fn majorant_radius_values() {
        let semi = CumulantState::new(CumulantSpec::semicircular(1));
        assert!((semi.norm_upper_bound(0).unwrap() - 2.0).abs() < 1e-12);
        // κ₂ = s² scales the support edge to 2s
        assert!((majorant_radius(&[(2, 4.0)]) - 4.0).abs() < 1e-12);
        // all κ_m = 1: support of g² − 1 is [−1, 3]
        let k: Vec<(usize, f64)> = (2..200).map(|m| (m, 1.0)).collect();
        assert!((majorant_radius(&k) - 3.0).abs() < 1e-9);
        assert_eq!(majorant_radius(&[(1, 0.7)]), 0.7);
        assert_eq!(majorant_radius(&[]), 0.0);
    }

    #[test]
    fn majorant_dominates_moment_growth() {
        let phi = CumulantState::new(CumulantSpec::free_poisson_centered(1, 16));
        let rho = phi.norm_upper_bound(0).unwrap();
        assert!(rho <= 3.0 + 1e-12 && rho > 2.9, "{rho}");
        let m16 = phi.moment(&Word::power(0, 16)).unwrap().re;
        assert!(m16.powf(1.0 / 16.0) <= rho);
    }
}
