//! Scalar limit objects.
//!
//! Everything here is a pure function of its arguments and an
//! [`AnalyticConfig`]. Infinite series are summed in log space and stop when
//! a term drops below `series_tol` times the running sum; running out of
//! `max_terms` is reported as [`Error::SeriesTruncation`].

mod counting;
mod duality;
mod integral;
mod roots;
mod series;
mod support;

pub use counting::{
    ball_log_volume, geodesic_count_formula, log_geodesic_count, log_sphere_size,
    radon_nikodym_ratio, sphere_size_exact, stirling_row_exact, LogStirlingRows,
    EXACT_STIRLING_MAX_N,
};
pub use duality::{
    duality_constants, gromov_delta_hitting, gromov_delta_uniform, DualityConstants,
};
pub use integral::{u_integral, u_integral_with, IntegrandConvention};
pub use roots::{b_of_a, fig2_xi, pgw_survival, u_inverse, FIG2_XI_BOUND};
pub use series::{borel_p, borel_q, kappa, u_series, unicyclic_bound};
pub use support::radius as radius_of;
pub use support::{sphere_exponent_closed_form, support_gamma, support_gamma_batch, SupportGamma};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation policy for series, quadrature and root finding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticConfig {
    pub series_tol: f64,
    pub max_terms: usize,
    pub fixedpoint_tol: f64,
    /// Absolute tolerance for adaptive quadrature.
    pub quad_tol: f64,
    /// Values of `n` used to extrapolate the sphere-size exponent.
    pub extrapolation_grid: Vec<usize>,
}

impl Default for AnalyticConfig {
    fn default() -> Self {
        AnalyticConfig {
            series_tol: 1e-12,
            max_terms: 100_000,
            fixedpoint_tol: 1e-12,
            quad_tol: 1e-9,
            extrapolation_grid: vec![200, 400, 800, 1600],
        }
    }
}

impl AnalyticConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_tol > 0.0) {
            return Err(Error::domain("series_tol", self.series_tol, "(0, inf)"));
        }
        if !(self.fixedpoint_tol > 0.0) {
            return Err(Error::domain(
                "fixedpoint_tol",
                self.fixedpoint_tol,
                "(0, inf)",
            ));
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::domain("quad_tol", self.quad_tol, "(0, inf)"));
        }
        if self.max_terms < 100 {
            return Err(Error::domain(
                "max_terms",
                self.max_terms as f64,
                "[100, inf)",
            ));
        }
        if self.extrapolation_grid.len() < 3 || self.extrapolation_grid.iter().any(|&n| n < 10) {
            return Err(Error::domain(
                "extrapolation_grid",
                self.extrapolation_grid.len() as f64,
                "at least three sizes, each >= 10",
            ));
        }
        Ok(())
    }
}
