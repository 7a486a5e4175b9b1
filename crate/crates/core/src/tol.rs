//! Numerical tolerances shared by the estimation modules.

/// Defaults: `1e-9` centering, `1e-8` PSD slack, `1e-10` pseudo-inverse
/// cutoff (relative to the largest eigenvalue), `1e-10` identity residuals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Largest admissible `|φ(𝒟ᵢV(X))|`.
    pub admissibility: f64,
    /// Relative slack allowed below zero for eigenvalues of PSD forms.
    pub psd: f64,
    /// Relative eigenvalue cutoff defining numerical null spaces.
    pub pinv: f64,
    /// Residual tolerance for exact identities evaluated in floating point.
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            admissibility: 1e-9,
            psd: 1e-8,
            pinv: 1e-10,
            identity: 1e-10,
        }
    }
}
