//! The inhomogeneous Cauchy problem `u' - Au = f`, `u(0) = x` on a time
//! grid, its function-space norms, and the probe-based estimate of the
//! maximal-regularity constant `M`.
//!
//! Solutions use the variation-of-parameters formula panel by panel. On
//! each panel the forcing is an exponential or a polynomial (sampled
//! forcings are interpolated through the panel's nodes), so the
//! convolution with `e^{(t-s)A}` is integrated exactly through phi
//! functions. Stiff modes are therefore resolved independently of the
//! panel width.

use alloc::vec::Vec;
use nalgebra::DMatrix;
// float math without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::forcing::{horner, taylor_shift, Forcing};
use crate::grid::{GridFunction, TimeGrid};
use crate::linop::{step_modal, E0Norm, Modal, OperatorPair, C1};
use crate::scalar::{axpy, factorial, re, C64, ONE, ZERO};

/// Black-box access to the solution map `(f, x) -> u`.
///
/// Implementations must be pure so that callers may invoke them from
/// several threads at once.
pub trait CauchySolver {
    fn dim(&self) -> usize;

    fn e0(&self) -> &E0Norm;

    fn solve(&self, forcing: &Forcing, x0: &[C64], grid: &TimeGrid) -> Result<GridFunction>;

    /// `u(T)` only.
    fn solve_endpoint(&self, forcing: &Forcing, x0: &[C64], grid: &TimeGrid) -> Result<Vec<C64>> {
        Ok(self.solve(forcing, x0, grid)?.last().to_vec())
    }

    /// `K_A f = (d/dt - A, gamma)^{-1} (f, 0)`.
    fn solution_operator(&self, forcing: &Forcing, grid: &TimeGrid) -> Result<GridFunction> {
        self.solve(forcing, &alloc::vec![ZERO; self.dim()], grid)
    }
}

/// [`CauchySolver`] backed by an [`OperatorPair`].
#[derive(Debug, Clone, Copy)]
pub struct MatrixSolver<'a> {
    pub op: &'a OperatorPair,
}

impl<'a> MatrixSolver<'a> {
    pub fn new(op: &'a OperatorPair) -> Self {
        Self { op }
    }
}

impl CauchySolver for MatrixSolver<'_> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn e0(&self) -> &E0Norm {
        self.op.e0()
    }

    fn solve(&self, forcing: &Forcing, x0: &[C64], grid: &TimeGrid) -> Result<GridFunction> {
        match integrate(self.op, forcing, x0, grid, Output::Full)? {
            Integrated::Full(u) => Ok(u),
            _ => unreachable!(),
        }
    }

    fn solve_endpoint(&self, forcing: &Forcing, x0: &[C64], grid: &TimeGrid) -> Result<Vec<C64>> {
        match integrate(self.op, forcing, x0, grid, Output::End)? {
            Integrated::Points(mut v) => Ok(v.pop().unwrap()),
            _ => unreachable!(),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Output {
    Full,
    Breakpoints,
    End,
}

enum Integrated {
    Full(GridFunction),
    Points(Vec<Vec<C64>>),
}

/// Coordinates in which the propagation runs: modal for unitarily
/// diagonalisable operators, the original ones otherwise.
enum Work<'a> {
    Modal(Modal<'a>),
    Dense(&'a OperatorPair),
}

impl Work<'_> {
    fn to_work(&self, x: &[C64]) -> Vec<C64> {
        match self {
            Work::Modal(m) => m.to_modal(x),
            Work::Dense(_) => x.to_vec(),
        }
    }

    fn from_work(&self, x: &[C64]) -> Vec<C64> {
        match self {
            Work::Modal(m) => m.from_modal(x),
            Work::Dense(_) => x.to_vec(),
        }
    }

    fn step(&self, t: f64, shift: C64, x0: Option<&[C64]>, ws: &[Vec<C64>]) -> Vec<C64> {
        match self {
            Work::Modal(m) => step_modal(m.eigenvalues, t, shift, x0, ws),
            Work::Dense(op) => op.step(t, shift, x0, ws),
        }
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        match self {
            Work::Modal(m) => x.iter().zip(m.eigenvalues).map(|(v, l)| v * l).collect(),
            Work::Dense(op) => op.apply(x),
        }
    }
}

enum WorkTerm {
    Exp { rate: C64, dir: Vec<C64> },
    Poly { coeffs: Vec<C64>, dir: Vec<C64> },
    Samples { values: Vec<Vec<C64>> },
}

impl WorkTerm {
    fn at_node(&self, grid: &TimeGrid, i: usize, out: &mut [C64]) {
        let t = grid.nodes()[i];
        match self {
            WorkTerm::Exp { rate, dir } => axpy(out, (-rate * t).exp(), dir),
            WorkTerm::Poly { coeffs, dir } => axpy(out, horner(coeffs, re(t)), dir),
            WorkTerm::Samples { values } => axpy(out, ONE, &values[i]),
        }
    }
}

/// Inverse Vandermonde matrix on the local panel nodes `r in [0, 1]`
/// (both endpoints plus the Gauss nodes); maps samples to monomial
/// coefficients in `r`.
fn local_interpolator(grid: &TimeGrid) -> DMatrix<f64> {
    let m = grid.nodes_per_panel() + 2;
    let a = grid.breakpoints()[0];
    let h = grid.breakpoints()[1] - a;
    let r: Vec<f64> = grid.nodes()[..m].iter().map(|t| (t - a) / h).collect();
    let v = DMatrix::from_fn(m, m, |i, j| r[i].powi(j as i32));
    v.try_inverse().expect("distinct interpolation nodes")
}

fn integrate(op: &OperatorPair, forcing: &Forcing, x0: &[C64], grid: &TimeGrid, output: Output) -> Result<Integrated> {
    let n = op.dim();
    op.check_dim(x0)?;
    forcing.check_dim(n)?;
    let work = match op.modal() {
        Some(m) => Work::Modal(m),
        None => Work::Dense(op),
    };

    let mut terms = Vec::new();
    for term in forcing.terms() {
        terms.push(match term {
            Forcing::Exp { rate, direction } => WorkTerm::Exp { rate: *rate, dir: work.to_work(direction) },
            Forcing::Poly { coeffs, direction } => WorkTerm::Poly { coeffs: coeffs.clone(), dir: work.to_work(direction) },
            Forcing::Samples(g) => {
                if &g.grid != grid {
                    return Err(Error::GridMismatch);
                }
                WorkTerm::Samples { values: g.values.iter().map(|v| work.to_work(v)).collect() }
            }
            Forcing::Zero | Forcing::Sum(_) => unreachable!("flattened"),
        });
    }
    let interp = terms
        .iter()
        .any(|t| matches!(t, WorkTerm::Samples { .. }))
        .then(|| local_interpolator(grid));

    let m = grid.nodes_per_panel();
    let nodes = grid.nodes();
    let mut u = work.to_work(x0);
    let mut full = Vec::new();
    let mut points = Vec::new();
    match output {
        Output::Full => full.push(u.clone()),
        Output::Breakpoints => points.push(work.from_work(&u)),
        Output::End => {}
    }

    for (p, w) in grid.breakpoints().windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let h = b - a;
        let start = grid.panel_start_index(p);

        // Polynomial part of the forcing on this panel: sum_j d_j (t - a)^j,
        // entering as w_{j+1} = j! d_j.
        let mut ws: Vec<Vec<C64>> = Vec::new();
        let mut add_w = |j: usize, c: C64, dir: &[C64]| {
            while ws.len() <= j {
                ws.push(alloc::vec![ZERO; n]);
            }
            axpy(&mut ws[j], c * factorial(j), dir);
        };
        for term in &terms {
            match term {
                WorkTerm::Poly { coeffs, dir } => {
                    for (j, d) in taylor_shift(coeffs, a).into_iter().enumerate() {
                        add_w(j, d, dir);
                    }
                }
                WorkTerm::Samples { values } => {
                    let vinv = interp.as_ref().unwrap();
                    let local = &values[start..start + m + 2];
                    let mut hj = 1.0;
                    for j in 0..m + 2 {
                        let mut coef = alloc::vec![ZERO; n];
                        for (i, v) in local.iter().enumerate() {
                            axpy(&mut coef, re(vinv[(j, i)] / hj), v);
                        }
                        add_w(j, ONE, &coef);
                        hj *= h;
                    }
                }
                WorkTerm::Exp { .. } => {}
            }
        }

        let targets = match output {
            Output::Full => start + 1..start + m + 2,
            _ => start + m + 1..start + m + 2,
        };
        let mut next = Vec::new();
        for idx in targets {
            let c = if idx == start + m + 1 { b } else { nodes[idx] };
            let tau = c - a;
            let mut val = work.step(tau, ZERO, Some(&u), &ws);
            for term in &terms {
                if let WorkTerm::Exp { rate, dir } = term {
                    let part = work.step(tau, *rate, None, core::slice::from_ref(dir));
                    axpy(&mut val, (-rate * c).exp(), &part);
                }
            }
            if output == Output::Full {
                full.push(val.clone());
            }
            next = val;
        }
        u = next;
        if output == Output::Breakpoints {
            points.push(work.from_work(&u));
        }
    }

    match output {
        Output::Full => {
            let mut values = Vec::with_capacity(full.len());
            let mut derivatives = Vec::with_capacity(full.len());
            for (i, uw) in full.iter().enumerate() {
                let mut du = work.apply(uw);
                for term in &terms {
                    term.at_node(grid, i, &mut du);
                }
                values.push(work.from_work(uw));
                derivatives.push(work.from_work(&du));
            }
            // u(0) = x exactly, independent of the change of coordinates
            values[0] = x0.to_vec();
            Ok(Integrated::Full(GridFunction::new(grid.clone(), values, Some(derivatives))?))
        }
        Output::Breakpoints => Ok(Integrated::Points(points)),
        Output::End => Ok(Integrated::Points(alloc::vec![work.from_work(&u)])),
    }
}

/// Largest relative change a grid refinement may cause before a solve is
/// reported as under-resolved.
pub const REFINEMENT_TOLERANCE: f64 = 1e-9;

/// Solves `u' = Au + f`, `u(0) = x` on `grid`. Closed-form forcings are
/// re-solved on the refined grid and compared at the breakpoints.
pub fn solve_ivp(op: &OperatorPair, forcing: &Forcing, x: &[C64], grid: &TimeGrid) -> Result<GridFunction> {
    let u = MatrixSolver::new(op).solve(forcing, x, grid)?;
    if forcing.terms().iter().any(|t| matches!(t, Forcing::Samples(_))) {
        return Ok(u);
    }
    let fine = grid.refined()?;
    let Integrated::Points(fine_pts) = integrate(op, forcing, x, &fine, Output::Breakpoints)? else {
        unreachable!()
    };
    let scale = u.values.iter().map(|v| op.norm0(v)).fold(f64::MIN_POSITIVE, f64::max);
    let mut deviation: f64 = 0.0;
    for (k, _) in grid.breakpoints().iter().enumerate() {
        let coarse = &u.values[grid.panel_start_index(k)];
        let diff: Vec<C64> = coarse.iter().zip(&fine_pts[2 * k]).map(|(a, b)| a - b).collect();
        deviation = deviation.max(op.norm0(&diff) / scale);
    }
    if deviation > REFINEMENT_TOLERANCE {
        return Err(Error::QuadratureUnderResolved { deviation });
    }
    Ok(u)
}

/// `sup_J |f(t)|_0` over the grid nodes.
pub fn e0_norm_j(op: &OperatorPair, f: &GridFunction) -> f64 {
    f.values.iter().map(|v| op.norm0(v)).fold(0.0, f64::max)
}

/// `sup_J (|u'(t)|_0 + |u(t)|_1)` over the grid nodes.
pub fn e1_norm_j(op: &OperatorPair, u: &GridFunction) -> Result<f64> {
    let du = u.derivatives.as_ref().ok_or(Error::MissingDerivative)?;
    Ok(u.values
        .iter()
        .zip(du)
        .map(|(v, d)| op.norm0(d) + op.norm1(v))
        .fold(0.0, f64::max))
}

/// Result of applying `K_A`.
#[derive(Debug, Clone)]
pub struct SolutionOperatorOutput {
    pub u: GridFunction,
    /// `|K_A f|_{E1(J)} / |f|_{E0(J)}`, absent when `f` vanishes on the grid.
    pub ratio: Option<f64>,
}

pub fn solution_operator_ka(op: &OperatorPair, forcing: &Forcing, grid: &TimeGrid) -> Result<SolutionOperatorOutput> {
    let u = solve_ivp(op, forcing, &alloc::vec![ZERO; op.dim()], grid)?;
    let f = GridFunction::new(grid.clone(), forcing.sample(grid, op.dim())?, None)?;
    let denom = e0_norm_j(op, &f);
    let ratio = if denom > 0.0 { Some(e1_norm_j(op, &u)? / denom) } else { None };
    Ok(SolutionOperatorOutput { u, ratio })
}

/// A data pair `(f, x)` for the maximal-regularity estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub forcing: Forcing,
    pub x: Vec<C64>,
}

impl Probe {
    pub fn new(forcing: Forcing, x: Vec<C64>) -> Self {
        Self { forcing, x }
    }

    pub fn is_homogeneous_ic(&self) -> bool {
        self.x.iter().all(|v| *v == ZERO)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOutcome {
    /// `|u|_{E1(J)} / (|f|_{E0(J)} + |x|_1)`
    pub ratio: f64,
    /// Set for probes with `x = 0`: a sample of `c1 |K_A|`.
    pub c2_sample: Option<f64>,
}

pub fn probe_outcome(op: &OperatorPair, grid: &TimeGrid, probe: &Probe, index: usize) -> Result<ProbeOutcome> {
    op.check_dim(&probe.x)?;
    let f = GridFunction::new(grid.clone(), probe.forcing.sample(grid, op.dim())?, None)?;
    let denom = e0_norm_j(op, &f) + op.norm1(&probe.x);
    if !(denom > 0.0) {
        return Err(Error::ZeroProbe { index });
    }
    let u = solve_ivp(op, &probe.forcing, &probe.x, grid)?;
    let ratio = e1_norm_j(op, &u)? / denom;
    let c2_sample = probe.is_homogeneous_ic().then_some(C1 * ratio);
    Ok(ProbeOutcome { ratio, c2_sample })
}

/// Probe-based estimate of the constant `M`. Every value here is a lower
/// bound for the true constant of the continuous problem.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxRegEstimate {
    pub m_hat: f64,
    pub c2_hat: f64,
    pub probe_count: usize,
    pub grid: TimeGrid,
    pub ratios: Vec<f64>,
    /// running maximum of `ratios`
    pub running: Vec<f64>,
}

impl MaxRegEstimate {
    /// Reduces outcomes in the given (probe index) order.
    pub fn from_outcomes(grid: TimeGrid, outcomes: &[ProbeOutcome]) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::EmptyProbeSet);
        }
        let mut m_hat: f64 = 0.0;
        let mut c2_hat: f64 = 0.0;
        let mut ratios = Vec::with_capacity(outcomes.len());
        let mut running = Vec::with_capacity(outcomes.len());
        for o in outcomes {
            m_hat = m_hat.max(o.ratio);
            if let Some(c) = o.c2_sample {
                c2_hat = c2_hat.max(c);
            }
            ratios.push(o.ratio);
            running.push(m_hat);
        }
        Ok(Self { m_hat, c2_hat, probe_count: outcomes.len(), grid, ratios, running })
    }
}

pub fn estimate_m(op: &OperatorPair, grid: &TimeGrid, probes: &[Probe]) -> Result<MaxRegEstimate> {
    if probes.is_empty() {
        return Err(Error::EmptyProbeSet);
    }
    let outcomes = probes
        .iter()
        .enumerate()
        .map(|(i, p)| probe_outcome(op, grid, p, i))
        .collect::<Result<Vec<_>>>()?;
    MaxRegEstimate::from_outcomes(grid.clone(), &outcomes)
}

/// `(Ef)(t) = f(T)` for `t >= T`, on the grid continued to `t_new`.
pub fn extend_constant(f: &GridFunction, t_new: f64) -> Result<GridFunction> {
    let grid = f.grid.extended(t_new)?;
    let extra = grid.len() - f.grid.len();
    let mut values = f.values.clone();
    values.extend(core::iter::repeat_n(f.last().to_vec(), extra));
    let derivatives = f.derivatives.as_ref().map(|d| {
        let mut d = d.clone();
        d.extend(core::iter::repeat_n(alloc::vec![ZERO; f.dim()], extra));
        d
    });
    GridFunction::new(grid, values, derivatives)
}

/// Restriction to `[0, t_cut]`; `t_cut` must be an interior breakpoint.
pub fn restrict(u: &GridFunction, t_cut: f64) -> Result<GridFunction> {
    let grid = u.grid.restricted(t_cut)?;
    let k = grid.len();
    GridFunction::new(
        grid,
        u.values[..k].to_vec(),
        u.derivatives.as_ref().map(|d| d[..k].to_vec()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlueVerdict {
    /// `w` vanishes identically.
    Trivial,
    /// `u~` is not a solution of the homogeneous problem on `[0, t1]`.
    ResidualViolation,
    /// A nonzero glued solution with zero data: uniqueness would fail.
    Contradiction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlueReport {
    pub times: Vec<f64>,
    pub w: Vec<Vec<C64>>,
    /// max over the glued samples of the midpoint residual
    /// `|(w_{i+1} - w_i)/dt - A (w_i + w_{i+1})/2|_0`
    pub max_residual: f64,
    pub prefix_residual: f64,
    pub suffix_residual: f64,
    pub w_at_t1: f64,
    pub residual_tolerance: f64,
    pub verdict: GlueVerdict,
}

/// Glues `u~` on `[0, t1]` to the homogeneous solution started from
/// `u~(t1)` and reports how the pieces fit.
pub fn glue_check(op: &OperatorPair, u_tilde: &GridFunction, t1: f64, grid_ext: &TimeGrid) -> Result<GlueReport> {
    let grid = &u_tilde.grid;
    let i1 = match grid.node_index(t1) {
        Some(i) if i > 0 && i + 1 < grid.len() => i,
        _ => return Err(Error::NotANode(t1)),
    };
    op.check_dim(&u_tilde.values[0])?;
    if op.norm0(&u_tilde.values[0]) > 1e-9 {
        return Err(Error::Precondition("u~(0) must vanish".into()));
    }
    let start = u_tilde.values[i1].clone();
    let mut times: Vec<f64> = grid.nodes()[..=i1].to_vec();
    let mut w: Vec<Vec<C64>> = u_tilde.values[..=i1].to_vec();
    for s in &grid_ext.nodes()[1..] {
        times.push(t1 + s);
        w.push(op.semigroup_apply_oracle(*s, &start)?);
    }
    let residual = |i: usize| -> f64 {
        let dt = times[i + 1] - times[i];
        let mid: Vec<C64> = w[i].iter().zip(&w[i + 1]).map(|(a, b)| (a + b) * 0.5).collect();
        let amid = op.apply(&mid);
        let r: Vec<C64> = (0..op.dim()).map(|k| (w[i + 1][k] - w[i][k]) / dt - amid[k]).collect();
        op.norm0(&r)
    };
    let prefix_residual = (0..i1).map(residual).fold(0.0, f64::max);
    let suffix_residual = (i1..times.len() - 1).map(residual).fold(0.0, f64::max);
    let max_residual = prefix_residual.max(suffix_residual);
    let w_at_t1 = op.norm0(&w[i1]);
    let w_max = w.iter().map(|v| op.norm0(v)).fold(0.0, f64::max);
    let residual_tolerance = 1e-9 * (1.0 + op.operator_norm() * w_max);
    let verdict = if w_max == 0.0 {
        GlueVerdict::Trivial
    } else if prefix_residual > residual_tolerance {
        GlueVerdict::ResidualViolation
    } else {
        GlueVerdict::Contradiction
    };
    Ok(GlueReport { times, w, max_residual, prefix_residual, suffix_residual, w_at_t1, residual_tolerance, verdict })
}
