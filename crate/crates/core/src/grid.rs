//! Panel time grids on `J = [0, T]` and functions sampled on them.

use alloc::vec::Vec;
use core::f64::consts::PI;
// float math without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scalar::C64;

pub const DEFAULT_PANELS: usize = 16;
pub const DEFAULT_NODES_PER_PANEL: usize = 8;
const MAX_GRADING_LEVELS: usize = 60;

/// Panels of `J = [0, T]`, each carrying its two endpoints and
/// `nodes_per_panel` interior Gauss–Legendre nodes.
///
/// Node `p * (nodes_per_panel + 1)` is the left end of panel `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    nodes_per_panel: usize,
    breakpoints: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TimeGrid {
    pub fn from_breakpoints(breakpoints: Vec<f64>, nodes_per_panel: usize) -> Result<Self> {
        if breakpoints.len() < 3 {
            return Err(Error::InvalidGrid("at least two panels are required"));
        }
        if nodes_per_panel < 4 {
            return Err(Error::InvalidGrid("at least four nodes per panel are required"));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::InvalidGrid("the grid must start at 0"));
        }
        if !breakpoints.iter().all(|t| t.is_finite()) || !breakpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidGrid("breakpoints must be finite and strictly increasing"));
        }
        let rule = GaussLegendre::new(nodes_per_panel);
        let mut nodes = Vec::with_capacity((breakpoints.len() - 1) * (nodes_per_panel + 1) + 1);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in breakpoints.windows(2) {
            let (x, q) = rule.on_interval(w[0], w[1]);
            nodes.push(w[0]);
            weights.push(0.0);
            nodes.extend(x);
            weights.extend(q);
        }
        nodes.push(*breakpoints.last().unwrap());
        weights.push(0.0);
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidGrid("panels too narrow to separate the nodes"));
        }
        Ok(Self { nodes_per_panel, breakpoints, nodes, weights })
    }

    pub fn uniform(t_end: f64, panels: usize, nodes_per_panel: usize) -> Result<Self> {
        Self::graded(t_end, panels, nodes_per_panel, 0)
    }

    /// Uniform panels with the first one split dyadically `levels` times
    /// towards `t = 0`.
    pub fn graded(t_end: f64, panels: usize, nodes_per_panel: usize, levels: usize) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::InvalidGrid("T must be positive and finite"));
        }
        if panels < 2 {
            return Err(Error::InvalidGrid("at least two panels are required"));
        }
        let h = t_end / panels as f64;
        let mut bps = alloc::vec![0.0];
        for l in (1..=levels.min(MAX_GRADING_LEVELS)).rev() {
            bps.push(h * 0.5f64.powi(l as i32));
        }
        for p in 1..panels {
            bps.push(h * p as f64);
        }
        bps.push(t_end);
        Self::from_breakpoints(bps, nodes_per_panel)
    }

    /// Grid suited to an operator of norm `stiffness` and oscillation up to
    /// `max_imag`: panel width is capped at `pi / (4 max_imag)` and the first
    /// panel is graded until `stiffness * width <= 1`.
    pub fn adapted(t_end: f64, panels: usize, nodes_per_panel: usize, stiffness: f64, max_imag: f64) -> Result<Self> {
        let mut panels = panels.max(2);
        if max_imag > 0.0 {
            let cap = PI / (4.0 * max_imag);
            panels = panels.max((t_end / cap).ceil() as usize);
        }
        let h = t_end / panels as f64;
        let levels = if stiffness * h > 1.0 { (stiffness * h).log2().ceil() as usize } else { 0 };
        Self::graded(t_end, panels, nodes_per_panel, levels)
    }

    pub fn t_end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn panels(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Quadrature weights aligned with [`nodes`](Self::nodes); zero on
    /// breakpoints.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panel_start_index(&self, panel: usize) -> usize {
        panel * (self.nodes_per_panel + 1)
    }

    pub fn node_index(&self, t: f64) -> Option<usize> {
        self.nodes.iter().position(|s| *s == t)
    }

    pub fn breakpoint_index(&self, t: f64) -> Option<usize> {
        self.breakpoints.iter().position(|s| *s == t)
    }

    /// Every panel split in half.
    pub fn refined(&self) -> Result<Self> {
        let mut bps = Vec::with_capacity(2 * self.breakpoints.len());
        for w in self.breakpoints.windows(2) {
            bps.push(w[0]);
            bps.push(0.5 * (w[0] + w[1]));
        }
        bps.push(self.t_end());
        Self::from_breakpoints(bps, self.nodes_per_panel)
    }

    /// The grid continued to `t_new` with panels no wider than the last one.
    pub fn extended(&self, t_new: f64) -> Result<Self> {
        let t = self.t_end();
        if !(t_new > t) || !t_new.is_finite() {
            return Err(Error::BadEndpoint(t_new));
        }
        let width = t - self.breakpoints[self.breakpoints.len() - 2];
        let count = ((t_new - t) / width).ceil().max(1.0) as usize;
        let step = (t_new - t) / count as f64;
        let mut bps = self.breakpoints.clone();
        for k in 1..count {
            bps.push(t + step * k as f64);
        }
        bps.push(t_new);
        Self::from_breakpoints(bps, self.nodes_per_panel)
    }

    /// The grid cut at the breakpoint `t_cut`.
    pub fn restricted(&self, t_cut: f64) -> Result<Self> {
        match self.breakpoint_index(t_cut) {
            Some(i) if i >= 1 && i + 1 < self.breakpoints.len() => {
                Self::from_breakpoints(self.breakpoints[..=i].to_vec(), self.nodes_per_panel)
            }
            _ => Err(Error::BadEndpoint(t_cut)),
        }
    }
}

/// A vector-valued function sampled on a [`TimeGrid`], optionally with its
/// derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: TimeGrid,
    pub values: Vec<Vec<C64>>,
    pub derivatives: Option<Vec<Vec<C64>>>,
}

impl GridFunction {
    pub fn new(grid: TimeGrid, values: Vec<Vec<C64>>, derivatives: Option<Vec<Vec<C64>>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), actual: values.len() });
        }
        let dim = values.first().map_or(0, Vec::len);
        if let Some(bad) = values.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, actual: bad.len() });
        }
        if let Some(d) = &derivatives {
            if d.len() != grid.len() {
                return Err(Error::DimensionMismatch { expected: grid.len(), actual: d.len() });
            }
            if let Some(bad) = d.iter().find(|v| v.len() != dim) {
                return Err(Error::DimensionMismatch { expected: dim, actual: bad.len() });
            }
        }
        Ok(Self { grid, values, derivatives })
    }

    /// Samples `f` at every node.
    pub fn from_fn<F: FnMut(f64) -> Vec<C64>>(grid: TimeGrid, mut f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|t| f(*t)).collect();
        Self::new(grid, values, None)
    }

    pub fn zeros(grid: TimeGrid, dim: usize) -> Self {
        let n = grid.len();
        Self {
            values: alloc::vec![alloc::vec![C64::new(0.0, 0.0); dim]; n],
            derivatives: Some(alloc::vec![alloc::vec![C64::new(0.0, 0.0); dim]; n]),
            grid,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn last(&self) -> &[C64] {
        self.values.last().expect("grid functions are never empty")
    }

    pub fn at(&self, t: f64) -> Option<&[C64]> {
        self.grid.node_index(t).map(|i| self.values[i].as_slice())
    }

    /// `c * self + other`, sample by sample.
    pub fn combine(&self, c: C64, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mix = |a: &[Vec<C64>], b: &[Vec<C64>]| -> Vec<Vec<C64>> {
            a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| c * p + q).collect()).collect()
        };
        let derivatives = match (&self.derivatives, &other.derivatives) {
            (Some(a), Some(b)) => Some(mix(a, b)),
            _ => None,
        };
        Ok(Self { grid: self.grid.clone(), values: mix(&self.values, &other.values), derivatives })
    }
}
