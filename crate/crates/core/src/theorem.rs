//! Resolvent bounds from maximal regularity, as algorithms.
//!
//! Given only a black-box solver for `u' - Au = f`, the operators
//!
//! ```text
//! U_mu x = 2 Re mu int_0^T e^{-mu t} u(t) dt,
//! V_mu x = 2 Re mu e^{-mu T} / (1 - e^{-2 Re mu T}) u(T),
//! ```
//!
//! with `u = K_A(e^{-conj(mu) t} x)`, satisfy
//! `(mu - A) U_mu = (1 - e^{-2 Re mu T})(I - V_mu)`. Once `|V_mu| < 1` the
//! resolvent is `U_mu (1 - e^{-2 Re mu T})^{-1} sum_k V_mu^k`.

use alloc::vec::Vec;
use nalgebra::DMatrix;
// float math without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::cauchy::CauchySolver;
use crate::error::{Error, Result};
use crate::expm::CMatrix;
use crate::forcing::Forcing;
use crate::grid::{GridFunction, TimeGrid, DEFAULT_NODES_PER_PANEL, DEFAULT_PANELS};
use crate::linop::{spectral_bound, OperatorPair, ScanPoint, SpectralReport, C1};
use crate::scalar::{axpy, re, sub, C64, ZERO};
use crate::cauchy::MatrixSolver;

/// Relative slack for comparisons of two evaluated sides of an estimate.
pub const PASS_SLACK: f64 = 1e-9;
/// Relative size of the last Neumann term kept.
pub const NEUMANN_TOLERANCE: f64 = 1e-12;
pub const MAX_NEUMANN_TERMS: usize = 200;
pub const OMEGA2_TOLERANCE: f64 = 1e-6;
/// The bisection for `omega_2` searches `[0, OMEGA2_BRACKET / T]`.
pub const OMEGA2_BRACKET: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl Comparison {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, pass: lhs <= rhs * (1.0 + PASS_SLACK) }
    }
}

/// `sup_t e^{Re mu t}(|x|_1 + |mu||x|_0)` against
/// `M (sup_t e^{Re mu t}|(mu - A)x|_0 + |x|_1)` over the grid nodes.
///
/// `m_hat` is a lower bound for `M`, so a failure asks for more probes
/// rather than refuting anything.
pub fn claim1_check(op: &OperatorPair, grid: &TimeGrid, m_hat: f64, mu: C64, x: &[C64]) -> Result<Comparison> {
    op.check_dim(x)?;
    let growth = grid.nodes().iter().map(|t| (mu.re * t).exp()).fold(0.0, f64::max);
    let x0 = op.norm0(x);
    let x1 = op.norm1(x);
    let lhs = growth * (x1 + mu.norm() * x0);
    let rhs = m_hat * (growth * op.norm0(&op.apply_shifted(mu, x)) + x1);
    Ok(Comparison::new(lhs, rhs))
}

/// Smallest `omega >= 0` with `2M <= sup_{[0,T]} e^{omega t}`.
pub fn omega1(m_hat: f64, t_end: f64) -> Result<f64> {
    omega1_weighted(m_hat, t_end, 1.0)
}

/// Smallest `omega >= 0` with `2M <= sup_{(0,T]} t^{1-sigma} e^{omega t}`.
pub fn omega1_weighted(m_hat: f64, t_end: f64, sigma: f64) -> Result<f64> {
    if !(m_hat > 0.0) {
        return Err(Error::NonpositiveM(m_hat));
    }
    if !(t_end > 0.0) {
        return Err(Error::InvalidParameter("T must be positive".into()));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::InvalidParameter("sigma must lie in (0, 1]".into()));
    }
    let log_weight = if sigma == 1.0 { 0.0 } else { (1.0 - sigma) * t_end.ln() };
    Ok(((2.0 * m_hat).ln() - log_weight).max(0.0) / t_end)
}

/// The functions `v_mu`, `g_mu`, `f_mu` and `u_mu = K_A f_mu` used to
/// derive the a priori resolvent estimate.
#[derive(Debug, Clone)]
pub struct ProofProbe {
    pub mu: C64,
    pub x: Vec<C64>,
    /// `e^{mu t} x`
    pub v_mu: GridFunction,
    /// `e^{mu t} (mu - A) x`
    pub g_mu: GridFunction,
    /// `e^{-mu t} x`
    pub f_mu: GridFunction,
    pub u_mu: GridFunction,
}

impl ProofProbe {
    pub fn new(op: &OperatorPair, grid: &TimeGrid, mu: C64, x: &[C64]) -> Result<Self> {
        op.check_dim(x)?;
        let ax = op.apply_shifted(mu, x);
        let along = |c: C64, v: &[C64]| v.iter().map(|e| c * e).collect::<Vec<_>>();
        let mut v_mu = GridFunction::from_fn(grid.clone(), |t| along((mu * t).exp(), x))?;
        v_mu.derivatives = Some(grid.nodes().iter().map(|t| along(mu * (mu * t).exp(), x)).collect());
        let g_mu = GridFunction::from_fn(grid.clone(), |t| along((mu * t).exp(), &ax))?;
        let f_mu = GridFunction::from_fn(grid.clone(), |t| along((-mu * t).exp(), x))?;
        let u_mu = MatrixSolver::new(op).solution_operator(&Forcing::exp(mu, x.to_vec()), grid)?;
        Ok(Self { mu, x: x.to_vec(), v_mu, g_mu, f_mu, u_mu })
    }

    /// `max_t |v' - Av - g|_0 / max_t |g|_0`
    pub fn v_residual(&self, op: &OperatorPair) -> f64 {
        let dv = self.v_mu.derivatives.as_ref().unwrap();
        let mut res: f64 = 0.0;
        let mut scale: f64 = f64::MIN_POSITIVE;
        for i in 0..self.v_mu.grid.len() {
            let mut r = sub(&dv[i], &op.apply(&self.v_mu.values[i]));
            axpy(&mut r, re(-1.0), &self.g_mu.values[i]);
            res = res.max(op.norm0(&r));
            scale = scale.max(op.norm0(&self.g_mu.values[i]));
        }
        res / scale
    }

    /// `max_t |u_mu(t)|_0 / |x|_0`, a sample of the constant `c2`.
    pub fn u_ratio(&self, op: &OperatorPair) -> f64 {
        let x0 = op.norm0(&self.x);
        if x0 == 0.0 {
            return 0.0;
        }
        self.u_mu.values.iter().map(|v| op.norm0(v)).fold(0.0, f64::max) / x0
    }
}

/// `U_mu` and `V_mu` applied on demand through the solver interface.
pub struct SurjectivityMaps<'a, S: CauchySolver + ?Sized> {
    solver: &'a S,
    pub mu: C64,
    pub grid: TimeGrid,
}

impl<'a, S: CauchySolver + ?Sized> SurjectivityMaps<'a, S> {
    pub fn new(solver: &'a S, mu: C64, grid: &TimeGrid) -> Result<Self> {
        if !(mu.re > 0.0) {
            return Err(Error::DegenerateReMu(mu.re));
        }
        Ok(Self { solver, mu, grid: grid.clone() })
    }

    pub fn t_end(&self) -> f64 {
        self.grid.t_end()
    }

    /// `(U_mu x, V_mu x)` from a single solve.
    pub fn apply_u_v(&self, x: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
        let u = self.solver.solution_operator(&Forcing::exp(self.mu.conj(), x.to_vec()), &self.grid)?;
        let two_re = re(2.0 * self.mu.re);
        let mut ux = alloc::vec![ZERO; x.len()];
        for ((t, w), v) in self.grid.nodes().iter().zip(self.grid.weights()).zip(&u.values) {
            if *w != 0.0 {
                axpy(&mut ux, two_re * w * (-self.mu * t).exp(), v);
            }
        }
        let factor = v_factor(self.mu, self.t_end());
        let vx = u.last().iter().map(|c| factor * c).collect();
        Ok((ux, vx))
    }

    pub fn apply_u(&self, x: &[C64]) -> Result<Vec<C64>> {
        Ok(self.apply_u_v(x)?.0)
    }

    /// `U_mu` as a dense matrix (`n` full solves).
    pub fn u_matrix(&self) -> Result<CMatrix> {
        let n = self.solver.dim();
        let mut u = DMatrix::from_element(n, n, ZERO);
        for j in 0..n {
            let col = self.apply_u(&basis(n, j))?;
            for i in 0..n {
                u[(i, j)] = col[i];
            }
        }
        Ok(u)
    }

    /// `V_mu` as a dense matrix (`n` endpoint solves).
    pub fn v_matrix(&self) -> Result<CMatrix> {
        let n = self.solver.dim();
        let factor = v_factor(self.mu, self.t_end());
        let mut v = DMatrix::from_element(n, n, ZERO);
        for j in 0..n {
            let u_t = self.solver.solve_endpoint(&Forcing::exp(self.mu.conj(), basis(n, j)), &alloc::vec![ZERO; n], &self.grid)?;
            for i in 0..n {
                v[(i, j)] = factor * u_t[i];
            }
        }
        Ok(v)
    }
}

/// The maps together with the assembled `V_mu` and its norm.
pub struct SurjectivityData<'a, S: CauchySolver + ?Sized> {
    pub maps: SurjectivityMaps<'a, S>,
    pub v_matrix: CMatrix,
    pub v_norm: f64,
    /// filled by callers that computed it
    pub omega2: Option<f64>,
    /// `ceil(log(1e-12) / log |V_mu|)`, absent when `|V_mu| >= 1`.
    pub neumann_terms: Option<usize>,
}

impl<S: CauchySolver + ?Sized> core::fmt::Debug for SurjectivityData<'_, S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SurjectivityData")
            .field("mu", &self.maps.mu)
            .field("t_end", &self.maps.t_end())
            .field("v_norm", &self.v_norm)
            .field("omega2", &self.omega2)
            .field("neumann_terms", &self.neumann_terms)
            .finish()
    }
}

fn neumann_terms(v_norm: f64) -> Option<usize> {
    if v_norm >= 1.0 {
        None
    } else if v_norm == 0.0 {
        Some(1)
    } else {
        Some((NEUMANN_TOLERANCE.ln() / v_norm.ln()).ceil().max(1.0) as usize)
    }
}

fn basis(n: usize, j: usize) -> Vec<C64> {
    let mut e = alloc::vec![ZERO; n];
    e[j] = re(1.0);
    e
}

/// `2 Re mu e^{-mu T} / (1 - e^{-2 Re mu T})`
fn v_factor(mu: C64, t_end: f64) -> C64 {
    2.0 * mu.re * (-mu * t_end).exp() / gap(mu, t_end)
}

/// `1 - e^{-2 Re mu T}`
fn gap(mu: C64, t_end: f64) -> f64 {
    -(-2.0 * mu.re * t_end).exp_m1()
}

pub fn assemble_u_v<'a, S: CauchySolver + ?Sized>(solver: &'a S, mu: C64, grid: &TimeGrid) -> Result<SurjectivityData<'a, S>> {
    let maps = SurjectivityMaps::new(solver, mu, grid)?;
    let v_matrix = maps.v_matrix()?;
    let v_norm = solver.e0().operator(&v_matrix);
    Ok(SurjectivityData { maps, v_matrix, v_norm, omega2: None, neumann_terms: neumann_terms(v_norm) })
}

impl<S: CauchySolver + ?Sized> SurjectivityData<'_, S> {
    pub fn apply_v(&self, x: &[C64]) -> Vec<C64> {
        let n = x.len();
        (0..n).map(|i| (0..n).map(|j| self.v_matrix[(i, j)] * x[j]).sum()).collect()
    }

    /// `(mu - A)^{-1} y` by the Neumann series, without access to `A`.
    pub fn resolvent(&self, y: &[C64]) -> Result<NeumannSolution> {
        if self.v_norm >= 1.0 {
            return Err(Error::NeumannDivergence { v_norm: self.v_norm });
        }
        let e0 = self.maps.solver.e0();
        let ynorm = e0.vector(y);
        let mut sum = y.to_vec();
        let mut term = y.to_vec();
        let mut terms = 1;
        while ynorm > 0.0 && e0.vector(&term) >= NEUMANN_TOLERANCE * ynorm {
            if terms >= MAX_NEUMANN_TERMS {
                return Err(Error::SlowConvergence { terms });
            }
            term = self.apply_v(&term);
            axpy(&mut sum, re(1.0), &term);
            terms += 1;
        }
        let scale = re(1.0 / gap(self.maps.mu, self.maps.t_end()));
        let x = self.maps.apply_u(&sum)?.into_iter().map(|v| v * scale).collect();
        Ok(NeumannSolution { x, terms })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeumannSolution {
    pub x: Vec<C64>,
    /// number of powers `V^0, ..., V^{terms-1}` summed
    pub terms: usize,
}

/// `|(mu - A) U_mu x - (1 - e^{-2 Re mu T})(I - V_mu) x|_0 / |x|_0`
pub fn surjectivity_identity_check<S: CauchySolver + ?Sized>(
    op: &OperatorPair,
    maps: &SurjectivityMaps<'_, S>,
    x: &[C64],
) -> Result<f64> {
    op.check_dim(x)?;
    let x0 = op.norm0(x);
    if x0 == 0.0 {
        return Ok(0.0);
    }
    let (ux, vx) = maps.apply_u_v(x)?;
    let lhs = op.apply_shifted(maps.mu, &ux);
    let g = re(gap(maps.mu, maps.t_end()));
    let rhs: Vec<C64> = x.iter().zip(&vx).map(|(a, b)| g * (a - b)).collect();
    Ok(op.norm0(&sub(&lhs, &rhs)) / x0)
}

pub fn resolvent_from_solver<S: CauchySolver + ?Sized>(solver: &S, mu: C64, y: &[C64], grid: &TimeGrid) -> Result<NeumannSolution> {
    assemble_u_v(solver, mu, grid)?.resolvent(y)
}

/// `|V_mu|` for real `mu`.
pub fn v_norm_at<S: CauchySolver + ?Sized>(solver: &S, mu: f64, grid: &TimeGrid) -> Result<f64> {
    Ok(solver.e0().operator(&SurjectivityMaps::new(solver, re(mu), grid)?.v_matrix()?))
}

/// Threshold `omega_2` such that `|V_mu| < 1/2` for real `mu > omega_2`,
/// located by bisection to `tol`.
pub fn omega2<S: CauchySolver + ?Sized>(solver: &S, grid: &TimeGrid, tol: f64) -> Result<f64> {
    let t_end = grid.t_end();
    let mut lo = 0.0;
    let mut hi = OMEGA2_BRACKET / t_end;
    if v_norm_at(solver, tol.min(hi) * 1e-3, grid)? < 0.5 {
        return Ok(0.0);
    }
    if v_norm_at(solver, hi, grid)? >= 0.5 {
        return Err(Error::InvalidParameter("|V_mu| >= 1/2 on the whole search bracket".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if v_norm_at(solver, mid, grid)? < 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Grid for the quadrature defining `U_mu`: panels narrow enough for
/// `e^{-mu t}` and graded at `t = 0` for the stiffest mode of an
/// operator of norm `stiffness` and for `|mu|`.
pub fn proof_grid(t_end: f64, panels: usize, stiffness: f64, mu: C64) -> Result<TimeGrid> {
    TimeGrid::adapted(t_end, panels, DEFAULT_NODES_PER_PANEL, stiffness + mu.norm(), mu.im.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneScan {
    pub report: SpectralReport,
    /// `2 M (1 v c1)` from `m_hat`, when supplied
    pub theorem_constant: Option<f64>,
    /// `N <= theorem_constant`; only a diagnostic since `m_hat <= M`.
    pub theorem_pass: Option<bool>,
}

/// Resolvent norms over `mu_grid` and `N = max (1 + |mu|)|(mu - A)^{-1}|`.
/// Points on the spectrum are recorded without a norm.
pub fn halfplane_scan(op: &OperatorPair, omega: f64, mu_grid: &[C64], m_hat: Option<f64>) -> Result<HalfPlaneScan> {
    if let Some(mu) = mu_grid.iter().find(|m| !(m.re > omega)) {
        return Err(Error::InvalidParameter(alloc::format!("scan point {mu} is not right of {omega}")));
    }
    let scan: Vec<ScanPoint> = mu_grid
        .iter()
        .map(|&mu| ScanPoint { mu, resolvent_norm: op.resolvent_norm(mu).ok() })
        .collect();
    Ok(halfplane_report(op, omega, scan, m_hat))
}

/// Assembles the report from already evaluated scan points, in order.
pub fn halfplane_report(op: &OperatorPair, omega: f64, scan: Vec<ScanPoint>, m_hat: Option<f64>) -> HalfPlaneScan {
    let n = scan.iter().filter_map(ScanPoint::weighted_norm).fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    let theorem_constant = m_hat.map(|m| 2.0 * m * C1.max(1.0));
    let theorem_pass = match (n, theorem_constant) {
        (Some(n), Some(c)) => Some(n <= c * (1.0 + PASS_SLACK)),
        _ => None,
    };
    let mut report = op.spectrum_and_bound();
    report.scan = scan;
    report.bound_constant = n;
    report.half_plane_offset = Some(omega);
    HalfPlaneScan { report, theorem_constant, theorem_pass }
}

/// Default scan grid: `n_re` values of `Re mu` logarithmic in
/// `[omega + 0.5, 1e3]` times `n_im` values of `Im mu` linear in
/// `[-100, 100]`.
pub fn default_mu_grid(omega: f64, n_re: usize, n_im: usize) -> Vec<C64> {
    let lo = omega + 0.5;
    let hi = 1e3f64.max(lo * 2.0);
    let mut out = Vec::with_capacity(n_re * n_im);
    for i in 0..n_re {
        let s = if n_re == 1 { 0.0 } else { i as f64 / (n_re - 1) as f64 };
        let r = lo * (hi / lo).powf(s);
        for k in 0..n_im {
            let s = if n_im == 1 { 0.5 } else { k as f64 / (n_im - 1) as f64 };
            out.push(C64::new(r, -100.0 + 200.0 * s));
        }
    }
    out
}

/// Outcome of the check that the closed right half-plane lies in the
/// resolvent set with a uniform bound.
#[derive(Debug, Clone, PartialEq)]
pub struct RplusVerdict {
    pub s_a: f64,
    /// `max_beta (1 + |beta|)|(i beta - A)^{-1}|`; infinite if the axis
    /// meets the spectrum.
    pub uniform_bound: f64,
    /// `(T, |V_1|)` for `T = 1, 2, 4, ..., 32`.
    pub v_norm_decay: Vec<(f64, f64)>,
    pub v_norm_decays: bool,
    pub pass: bool,
}

pub const VERDICT_HORIZONS: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

pub fn rplus_verdict(op: &OperatorPair, betas: &[f64], recorded_n: Option<f64>) -> Result<RplusVerdict> {
    let s_a = spectral_bound(op.eigenvalues());
    let mut uniform_bound: f64 = 0.0;
    for &b in betas {
        let mu = C64::new(0.0, b);
        match op.resolvent_norm(mu) {
            Ok(r) => uniform_bound = uniform_bound.max((1.0 + b.abs()) * r),
            Err(Error::SingularResolvent { .. }) => uniform_bound = f64::INFINITY,
            Err(e) => return Err(e),
        }
    }
    let solver = MatrixSolver::new(op);
    let mut v_norm_decay = Vec::with_capacity(VERDICT_HORIZONS.len());
    for t in VERDICT_HORIZONS {
        let grid = TimeGrid::uniform(t, DEFAULT_PANELS, DEFAULT_NODES_PER_PANEL)?;
        v_norm_decay.push((t, v_norm_at(&solver, 1.0, &grid)?));
    }
    let v_norm_decays = v_norm_decay.windows(2).all(|w| w[1].1 <= w[0].1);
    let bounded = uniform_bound.is_finite() && recorded_n.is_none_or(|n| uniform_bound <= n * (1.0 + 1e-6));
    Ok(RplusVerdict { s_a, uniform_bound, v_norm_decay, v_norm_decays, pass: s_a < 0.0 && bounded })
}
