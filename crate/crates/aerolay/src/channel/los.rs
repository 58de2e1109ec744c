//! ITU line-of-sight probability model.
//!
//! The LoS probability between two nodes is a product over the buildings
//! crossed by the ray; the number of buildings grows by one every
//! `1000/sqrt(a1*a2)` meters of ground distance, so the probability is a
//! right-continuous step function of the 2-D distance. [`LosTable`]
//! caches one value per grid cell for a link's height pair.

use crate::error::{AerolayError, Result};

/// ITU environment constants (a1, a2, a3); defaults model an urban area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosModel {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Default for LosModel {
    fn default() -> Self {
        LosModel {
            a1: 0.3,
            a2: 500.0,
            a3: 20.0,
        }
    }
}

impl LosModel {
    /// Width of one step-grid cell: the ground distance per crossed building.
    pub fn cell_width_m(&self) -> f64 {
        1000.0 / (self.a1 * self.a2).sqrt()
    }

    /// Direct evaluation of the LoS product at ground distance `r`.
    ///
    /// Heights are swapped internally so the formula sees `h_hi >= h_lo`
    /// (LoS is symmetric in the endpoints). `r < 0` is a domain error.
    pub fn exact_los_probability(&self, h_a_m: f64, h_b_m: f64, r_m: f64) -> Result<f64> {
        if r_m < 0.0 {
            return Err(AerolayError::Domain(format!(
                "LoS probability at negative distance r = {r_m}"
            )));
        }
        let n_buildings = (r_m / self.cell_width_m()).floor() as i64;
        Ok(self.product(h_a_m, h_b_m, n_buildings))
    }

    fn product(&self, h_a_m: f64, h_b_m: f64, n_buildings: i64) -> f64 {
        if n_buildings <= 0 {
            return 1.0; // empty product
        }
        let (h_hi, h_lo) = if h_a_m >= h_b_m {
            (h_a_m, h_b_m)
        } else {
            (h_b_m, h_a_m)
        };
        let n = n_buildings as f64;
        let two_a3_sq = 2.0 * self.a3 * self.a3;
        let mut p = 1.0;
        for j in 0..n_buildings {
            let clearance = h_hi - (j as f64 + 0.5) * (h_hi - h_lo) / n;
            p *= 1.0 - (-clearance * clearance / two_a3_sq).exp();
        }
        p
    }
}

/// Per-link-kind LoS step table: one probability per grid cell, the exact
/// product evaluated once per cell.
#[derive(Debug, Clone)]
pub struct LosTable {
    cell_width_m: f64,
    step_values: Vec<f64>,
}

impl LosTable {
    /// Precomputes cells out to `max_radius_m`; beyond the last breakpoint
    /// the final step value is held.
    pub fn build(model: &LosModel, h_a_m: f64, h_b_m: f64, max_radius_m: f64) -> LosTable {
        let cell_width_m = model.cell_width_m();
        let n_cells = (max_radius_m / cell_width_m).floor() as usize + 2;
        let step_values = (0..n_cells)
            .map(|c| model.product(h_a_m, h_b_m, c as i64))
            .collect();
        LosTable {
            cell_width_m,
            step_values,
        }
    }

    /// A degenerate table that is 1 everywhere (used to force the
    /// all-LoS regime in consistency checks).
    pub fn always_los() -> LosTable {
        LosTable {
            cell_width_m: f64::INFINITY,
            step_values: vec![1.0],
        }
    }

    pub fn cell_width_m(&self) -> f64 {
        self.cell_width_m
    }

    fn cell_index(&self, r_m: f64) -> usize {
        ((r_m / self.cell_width_m) as usize).min(self.step_values.len() - 1)
    }

    /// Step-approximated LoS probability at ground distance `r`.
    pub fn los_probability(&self, r_m: f64) -> Result<f64> {
        if r_m < 0.0 {
            return Err(AerolayError::Domain(format!(
                "LoS probability at negative distance r = {r_m}"
            )));
        }
        Ok(self.step_values[self.cell_index(r_m)])
    }

    /// NLoS complement of [`Self::los_probability`].
    pub fn nlos_probability(&self, r_m: f64) -> Result<f64> {
        Ok(1.0 - self.los_probability(r_m)?)
    }

    /// Grid breakpoints (cell left edges) intersecting `[lo, hi)`, for
    /// piecewise quadrature.
    pub fn breakpoints_in(&self, lo_m: f64, hi_m: f64) -> Vec<f64> {
        if !self.cell_width_m.is_finite() {
            return Vec::new();
        }
        let mut edges = Vec::new();
        let mut c = (lo_m / self.cell_width_m).floor() as usize + 1;
        loop {
            let edge = c as f64 * self.cell_width_m;
            if edge >= hi_m {
                break;
            }
            if edge > lo_m {
                edges.push(edge);
            }
            c += 1;
        }
        edges
    }
}
