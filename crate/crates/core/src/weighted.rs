//! Time-weighted norms `sup_t t^{1-sigma} |u(t)|`, the weighted a priori
//! estimate, an upper bound for the trace norm, the spectral realisation
//! of interpolation norms for diagonal operators, and `L_p` norms.
//!
//! With `sigma = 1` every function here evaluates exactly the same
//! floating-point operations as its unweighted counterpart.

use alloc::vec::Vec;
// float math without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::cauchy::{solve_ivp, CauchySolver, MatrixSolver};
use crate::error::{Error, Result};
use crate::forcing::Forcing;
use crate::grid::{GridFunction, TimeGrid};
use crate::linop::{E0Norm, OperatorPair, Structure};
use crate::scalar::{C64, ZERO};
use crate::theorem::Comparison;

/// Relative size of the extrapolated limit at `t = 0` above which the
/// little-o condition is reported as violated.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-2;

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::InvalidParameter("sigma must lie in (0, 1]".into()));
    }
    Ok(())
}

/// `t^{1-sigma}`; identically `1.0` for `sigma = 1`, including at `t = 0`.
pub fn weight(t: f64, sigma: f64) -> f64 {
    if sigma == 1.0 {
        1.0
    } else {
        t.powf(1.0 - sigma)
    }
}

/// Nodes entering a weighted supremum: all of them for `sigma = 1`, the
/// positive ones otherwise.
fn weighted_nodes(grid: &TimeGrid, sigma: f64) -> impl Iterator<Item = (usize, f64)> + '_ {
    grid.nodes().iter().copied().enumerate().filter(move |(_, t)| sigma == 1.0 || *t > 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNorm {
    pub value: f64,
    /// Quadratic extrapolation of `t^{1-sigma}|u(t)|` to `t = 0` from the
    /// three smallest positive nodes.
    pub limit_estimate: f64,
    /// `false` when the extrapolated limit does not vanish (`sigma < 1`).
    pub membership_ok: bool,
}

pub fn weighted_norm(e0: &E0Norm, u: &GridFunction, sigma: f64) -> Result<WeightedNorm> {
    check_sigma(sigma)?;
    let value = weighted_nodes(&u.grid, sigma)
        .map(|(i, t)| weight(t, sigma) * e0.vector(&u.values[i]))
        .fold(0.0, f64::max);
    let small: Vec<(f64, f64)> = u
        .grid
        .nodes()
        .iter()
        .enumerate()
        .filter(|(_, t)| **t > 0.0)
        .take(3)
        .map(|(i, t)| (*t, weight(*t, sigma) * e0.vector(&u.values[i])))
        .collect();
    let limit_estimate = lagrange_at_zero(&small);
    let membership_ok = sigma == 1.0 || limit_estimate.abs() <= MEMBERSHIP_TOLERANCE * value.max(f64::MIN_POSITIVE);
    Ok(WeightedNorm { value, limit_estimate, membership_ok })
}

fn lagrange_at_zero(points: &[(f64, f64)]) -> f64 {
    let mut sum = 0.0;
    for (i, (ti, yi)) in points.iter().enumerate() {
        let mut l = 1.0;
        for (j, (tj, _)) in points.iter().enumerate() {
            if i != j {
                l *= tj / (tj - ti);
            }
        }
        sum += l * yi;
    }
    sum
}

/// `sup_t t^{1-sigma}(|u'(t)|_0 + |u(t)|_1)`.
pub fn weighted_e1_norm(op: &OperatorPair, u: &GridFunction, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let du = u.derivatives.as_ref().ok_or(Error::MissingDerivative)?;
    Ok(weighted_nodes(&u.grid, sigma)
        .map(|(i, t)| weight(t, sigma) * (op.norm0(&du[i]) + op.norm1(&u.values[i])))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedMaxReg {
    /// weighted a priori estimate at `x`
    pub estimate: Comparison,
    /// `T^{1-sigma}|u(T)|_0` against `c2 T^{1-sigma}|x|_0` for
    /// `u = K_A(e^{-conj(mu) t} x)`
    pub endpoint: Comparison,
}

impl WeightedMaxReg {
    pub fn pass(&self) -> bool {
        self.estimate.pass && self.endpoint.pass
    }
}

/// Weighted form of [`crate::theorem::claim1_check`]:
/// `sup_t t^{1-sigma} e^{Re mu t}(|x|_1 + |mu||x|_0)` against
/// `M (sup_t t^{1-sigma} e^{Re mu t}|(mu - A)x|_0 + |x|_1)`.
pub fn weighted_maxreg_check(
    op: &OperatorPair,
    grid: &TimeGrid,
    m_hat: f64,
    c2_hat: f64,
    sigma: f64,
    mu: C64,
    x: &[C64],
) -> Result<WeightedMaxReg> {
    check_sigma(sigma)?;
    op.check_dim(x)?;
    let growth = grid
        .nodes()
        .iter()
        .map(|t| weight(*t, sigma) * (mu.re * t).exp())
        .fold(0.0, f64::max);
    let x0 = op.norm0(x);
    let x1 = op.norm1(x);
    let lhs = growth * (x1 + mu.norm() * x0);
    let rhs = m_hat * (growth * op.norm0(&op.apply_shifted(mu, x)) + x1);
    let w_t = weight(grid.t_end(), sigma);
    let u_t = MatrixSolver::new(op).solve_endpoint(&Forcing::exp(mu.conj(), x.to_vec()), &alloc::vec![ZERO; op.dim()], grid)?;
    let endpoint = Comparison::new(w_t * op.norm0(&u_t), c2_hat * w_t * x0);
    Ok(WeightedMaxReg { estimate: Comparison::new(lhs, rhs), endpoint })
}

/// Weighted `E1(J)` norm of `t -> e^{tA} x`. Since the trace norm is an
/// infimum over all extensions of `x`, this is an upper bound for it.
pub fn trace_norm_upper(op: &OperatorPair, x: &[C64], grid: &TimeGrid, sigma: f64) -> Result<f64> {
    let u = solve_ivp(op, &Forcing::Zero, x, grid)?;
    weighted_e1_norm(op, &u, sigma)
}

fn diagonal_weights(op: &OperatorPair, exponent: f64) -> Result<Vec<f64>> {
    if op.structure() != Structure::Diagonal {
        return Err(Error::NotDiagonal);
    }
    Ok(op.eigenvalues().iter().map(|l| (1.0 + l.norm()).powf(exponent)).collect())
}

/// `sup_k (1 + |lambda_k|)^theta |x_k|`, an equivalent norm on
/// `(E0, E1)_theta` for diagonal operators.
pub fn interp_norm_diag(op: &OperatorPair, x: &[C64], theta: f64) -> Result<f64> {
    op.check_dim(x)?;
    let w = diagonal_weights(op, theta)?;
    Ok(x.iter().zip(&w).map(|(v, w)| w * v.norm()).fold(0.0, f64::max))
}

/// The operator viewed on the interpolation scale: `E_theta` carries the
/// weights `(1 + |lambda_k|)^theta` and `E_{1+theta}` the weights
/// `(1 + |lambda_k|)^{1+theta}`.
#[derive(Debug, Clone)]
pub struct DpgScale {
    pub theta: f64,
    /// `A_theta` with `E0 = E_theta`
    pub op: OperatorPair,
    pub e_one_plus_theta: Vec<f64>,
}

pub fn dpg_scale(op: &OperatorPair, theta: f64) -> Result<DpgScale> {
    let w = diagonal_weights(op, theta)?;
    let e_one_plus_theta = diagonal_weights(op, 1.0 + theta)?;
    Ok(DpgScale { theta, op: op.with_norm(E0Norm::WeightedSup(w))?, e_one_plus_theta })
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter("p must be finite and at least 1".into()));
    }
    Ok(())
}

fn lp(grid: &TimeGrid, p: f64, mut f: impl FnMut(usize) -> f64) -> f64 {
    let scale = (0..grid.len()).map(&mut f).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = grid.weights().iter().enumerate().filter(|(_, w)| **w != 0.0).map(|(i, w)| w * (f(i) / scale).powf(p)).sum();
    scale * sum.powf(1.0 / p)
}

/// `(int_J |u|_0^p)^{1/p}`
pub fn lp_norm_e0(op: &OperatorPair, u: &GridFunction, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(lp(&u.grid, p, |i| op.norm0(&u.values[i])))
}

/// `(int_J |u|_0^p)^{1/p}` and `(int_J (|u'|_0 + |u|_1)^p)^{1/p}`.
pub fn lp_norms(op: &OperatorPair, u: &GridFunction, p: f64) -> Result<(f64, f64)> {
    let e0 = lp_norm_e0(op, u, p)?;
    let du = u.derivatives.as_ref().ok_or(Error::MissingDerivative)?;
    let e1 = lp(&u.grid, p, |i| op.norm0(&du[i]) + op.norm1(&u.values[i]));
    Ok((e0, e1))
}
