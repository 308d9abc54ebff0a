//! Quadrature rules and sampling grids on the unit disk.
//!
//! Area measure is normalised, `dA = (1/π) dx dy = (r/π) dr dθ`, so the disk
//! has unit area. Polar rules combine Gauss–Legendre in the radius with the
//! uniform (trapezoid) rule in the angle; the latter is exact for
//! trigonometric polynomials of degree below the node count.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Gauss–Legendre rule mapped to the unit interval `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule on `(0, 1)`; exact for polynomials of degree `≤ 2n − 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        // Roots of P_n are symmetric; Newton from the Tricomi-style guess.
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // map [-1, 1] → [0, 1]; node i is the i-th largest root
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            nodes[i] = 0.5 * (1.0 - x);
            weights[n - 1 - i] = 0.5 * w;
            weights[i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in increasing order, all in `(0, 1)`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f(x) dx`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(a + len * x))
            .sum::<f64>()
            * len
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Polar product rule on the disk plus the graded panel rule used for
/// singular one-dimensional integrals against radial measures.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureScheme {
    radial: GaussLegendre,
    angular: usize,
    panel: GaussLegendre,
    panel_depth: usize,
}

/// Serializable summary of a [`QuadratureScheme`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureParams {
    pub radial: usize,
    pub angular: usize,
    pub panel_order: usize,
    pub panel_depth: usize,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self {
            radial: QuadratureScheme::DEFAULT_RADIAL,
            angular: QuadratureScheme::DEFAULT_ANGULAR,
            panel_order: QuadratureScheme::DEFAULT_PANEL_ORDER,
            panel_depth: QuadratureScheme::DEFAULT_PANEL_DEPTH,
        }
    }
}

/// One node of a polar rule; `weight` already contains `r dr dθ / π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarNode {
    pub radius: f64,
    pub weight: f64,
}

impl QuadratureScheme {
    pub const DEFAULT_RADIAL: usize = 256;
    pub const DEFAULT_ANGULAR: usize = 512;
    pub const DEFAULT_PANEL_ORDER: usize = 24;
    pub const DEFAULT_PANEL_DEPTH: usize = 96;

    pub fn new(params: QuadratureParams) -> Result<Self> {
        if params.radial == 0 {
            return Err(Error::invalid("quad_radial", "needs at least one node"));
        }
        if params.angular < 4 {
            return Err(Error::invalid("quad_angular", "needs at least four nodes"));
        }
        if params.panel_order < 2 {
            return Err(Error::invalid("panel_order", "needs at least two nodes"));
        }
        if params.panel_depth == 0 {
            return Err(Error::invalid("panel_depth", "needs at least one panel"));
        }
        Ok(Self {
            radial: GaussLegendre::new(params.radial),
            angular: params.angular,
            panel: GaussLegendre::new(params.panel_order),
            panel_depth: params.panel_depth,
        })
    }

    pub fn params(&self) -> QuadratureParams {
        QuadratureParams {
            radial: self.radial.len(),
            angular: self.angular,
            panel_order: self.panel.len(),
            panel_depth: self.panel_depth,
        }
    }

    pub fn radial_rule(&self) -> &GaussLegendre {
        &self.radial
    }

    pub fn angular_count(&self) -> usize {
        self.angular
    }

    pub fn panel_rule(&self) -> &GaussLegendre {
        &self.panel
    }

    pub fn panel_depth(&self) -> usize {
        self.panel_depth
    }

    /// Scheme whose polar rule integrates `r^j e^{imθ}` exactly for
    /// `j ≤ radial_degree` and `|m| ≤ angular_degree`, even after one
    /// [`coarsened`](Self::coarsened) step. Never smaller than `self`.
    pub fn resolving(&self, radial_degree: usize, angular_degree: usize) -> Self {
        let mut p = self.params();
        // coarse rule has ⌈R/2⌉ nodes, exact up to degree 2⌈R/2⌉ − 1
        p.radial = p.radial.max(radial_degree + 2);
        p.angular = p.angular.max(2 * (angular_degree + 1).next_power_of_two());
        Self::new(p).expect("enlarging a valid scheme keeps it valid")
    }

    /// Half the radial and angular resolution; used for error estimates.
    pub fn coarsened(&self) -> Self {
        let mut p = self.params();
        p.radial = p.radial.div_ceil(2);
        p.angular = (p.angular / 2).max(4);
        p.panel_order = p.panel_order.div_ceil(2).max(2);
        Self::new(p).expect("coarsening keeps parameters valid")
    }

    /// Radial nodes with the area weight `2 w_i r_i / A` folded in; every
    /// angle `2πk/A` shares the same weight.
    pub fn polar_nodes(&self) -> Vec<PolarNode> {
        let a = self.angular as f64;
        self.radial
            .nodes()
            .iter()
            .zip(self.radial.weights())
            .map(|(&r, &w)| PolarNode {
                radius: r,
                weight: 2.0 * w * r / a,
            })
            .collect()
    }
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        Self::new(QuadratureParams::default()).expect("defaults are valid")
    }
}

/// Sampling grid for suprema over the disk: radii clustered toward the
/// boundary (`1 − 2^{−j/2}`) merged with a uniform radial ladder, crossed with
/// uniformly spaced angles.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angles: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    /// Clustered radii `1 − 2^{−j/2}` for `j = 0..=levels`.
    pub levels: usize,
    pub angles: usize,
    /// Uniform radii `i/uniform` for `i = 0..uniform`.
    pub uniform: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            levels: DiskGrid::DEFAULT_LEVELS,
            angles: DiskGrid::DEFAULT_ANGLES,
            uniform: DiskGrid::DEFAULT_UNIFORM,
        }
    }
}

impl DiskGrid {
    pub const DEFAULT_LEVELS: usize = 40;
    pub const DEFAULT_ANGLES: usize = 256;
    pub const DEFAULT_UNIFORM: usize = 64;

    pub fn new(params: GridParams) -> Result<Self> {
        if params.levels > 100 {
            return Err(Error::invalid(
                "grid_levels",
                "radii 1 - 2^(-j/2) stop being representable below 1 beyond j = 100",
            ));
        }
        let mut radii: Vec<f64> = (0..=params.levels)
            .map(|j| 1.0 - (-(j as f64) / 2.0).exp2())
            .collect();
        radii.extend((0..params.uniform).map(|i| i as f64 / params.uniform as f64));
        Self::from_radii(radii, params.angles)
    }

    /// Grid from explicit radii (sorted and deduplicated here).
    pub fn from_radii(mut radii: Vec<f64>, angles: usize) -> Result<Self> {
        if angles < 8 {
            return Err(Error::invalid("grid_angles", "needs at least 8 angles"));
        }
        if radii.is_empty() {
            return Err(Error::invalid("radii", "grid needs at least one radius"));
        }
        if let Some(&bad) = radii.iter().find(|r| !(0.0..1.0).contains(*r)) {
            return Err(Error::invalid(
                "radii",
                format!("radius {bad} outside [0, 1)"),
            ));
        }
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        Ok(Self { radii, angles })
    }

    /// Strictly increasing radii, all `< 1`.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn max_radius(&self) -> f64 {
        *self.radii.last().expect("grid is never empty")
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Angle of the `k`-th ray.
    pub fn angle(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.angles as f64
    }

    /// Same grid with every radius above `max_radius` removed.
    pub fn truncated(&self, max_radius: f64) -> Result<Self> {
        Self::from_radii(
            self.radii.iter().copied().filter(|&r| r <= max_radius).collect(),
            self.angles,
        )
    }
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self::new(GridParams::default()).expect("defaults are valid")
    }
}

/// Radius `1 − 2^{−level/2}` of the clustered ladder.
pub fn clustered_radius(level: usize) -> f64 {
    1.0 - (-(level as f64) / 2.0).exp2()
}
