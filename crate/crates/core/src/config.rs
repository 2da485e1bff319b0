use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical settings shared by every solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub grid_points_per_axis: usize,
    pub refine_iterations: usize,
    pub value_tol: f64,
    pub arg_tol: f64,
    pub tie_tol: f64,
    pub fd_step: f64,
    pub eps_equilibrium: f64,
    /// Relative step for derivatives of composed utilities. These nest two argmax
    /// solves, so a step much below 1e-4 drowns in their noise.
    pub operator_fd_step: f64,
    /// Max-norm radius below which equilibrium profiles are merged.
    pub cluster_radius: f64,
    /// Score leader candidates by the best case over follower ties instead of the worst.
    pub optimistic: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            grid_points_per_axis: 201,
            refine_iterations: 60,
            value_tol: 1e-9,
            arg_tol: 1e-7,
            tie_tol: 1e-8,
            fd_step: 1e-6,
            eps_equilibrium: 1e-6,
            operator_fd_step: 1e-4,
            cluster_radius: 1e-3,
            optimistic: false,
        }
    }
}

impl SolverConfig {
    pub fn with_grid(mut self, n: usize) -> Self {
        self.grid_points_per_axis = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points_per_axis < 3 {
            return Err(Error::InvalidParams(format!(
                "grid_points_per_axis must be at least 3, got {}",
                self.grid_points_per_axis
            )));
        }
        if self.refine_iterations == 0 {
            return Err(Error::InvalidParams("refine_iterations must be positive".into()));
        }
        let tols = [
            ("value_tol", self.value_tol),
            ("arg_tol", self.arg_tol),
            ("tie_tol", self.tie_tol),
            ("fd_step", self.fd_step),
            ("eps_equilibrium", self.eps_equilibrium),
            ("operator_fd_step", self.operator_fd_step),
            ("cluster_radius", self.cluster_radius),
        ];
        for (name, v) in tols {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Shrinking-radius search used for the neighborhood conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NeighborhoodSpec {
    pub initial_radius_fraction: f64,
    pub shrink_factor: f64,
    pub min_radius_fraction: f64,
    pub samples_per_side: usize,
}

impl Default for NeighborhoodSpec {
    fn default() -> Self {
        NeighborhoodSpec {
            initial_radius_fraction: 0.01,
            shrink_factor: 0.5,
            min_radius_fraction: 1e-5,
            samples_per_side: 32,
        }
    }
}

impl NeighborhoodSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.min_radius_fraction > 0.0
            && self.min_radius_fraction < self.initial_radius_fraction
            && self.initial_radius_fraction <= 0.5
            && self.shrink_factor > 0.0
            && self.shrink_factor < 1.0
            && self.samples_per_side > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("invalid neighborhood spec {self:?}")))
        }
    }

    /// Radii as fractions of an axis width, largest first.
    pub fn radius_fractions(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut r = self.initial_radius_fraction;
        // tolerate rounding so the minimum itself is tested
        while r >= self.min_radius_fraction * (1.0 - 1e-12) {
            out.push(r);
            r *= self.shrink_factor;
        }
        out
    }
}
