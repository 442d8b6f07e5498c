//! Complex scalars, vector norms and the phi-functions of exponential
//! integrators.

use alloc::vec::Vec;
// float math without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

pub use num_complex::Complex64 as C64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Euclidean norm with scaling against overflow.
pub fn norm2(x: &[C64]) -> f64 {
    let scale = norm_sup(x);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let sum: f64 = x.iter().map(|v| (v / scale).norm_sqr()).sum();
    scale * sum.sqrt()
}

pub fn norm_sup(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(c: C64, a: &[C64]) -> Vec<C64> {
    a.iter().map(|x| c * x).collect()
}

pub fn axpy(y: &mut [C64], c: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += c * xi;
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

const PHI_TAYLOR_RADIUS: f64 = 4.0;

/// `phi_k(z) = sum_{j>=0} z^j / (j+k)!`, so `phi_0 = exp` and
/// `phi_{k+1}(z) = (phi_k(z) - 1/k!) / z`.
///
/// Taylor series inside `|z| < 4`, the upward recurrence outside; the
/// recurrence amplifies relative error by at most `k!/4^k` there.
pub fn phi(k: usize, z: C64) -> C64 {
    if k == 0 {
        return z.exp();
    }
    if z.norm() < PHI_TAYLOR_RADIUS {
        let mut term = re(1.0 / factorial(k));
        let mut sum = term;
        for j in 1..80 {
            term = term * z / (j + k) as f64;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        return sum;
    }
    let mut value = z.exp();
    for j in 0..k {
        value = (value - re(1.0 / factorial(j))) / z;
    }
    value
}

/// All of `phi_1(z), ..., phi_p(z)` at once.
pub fn phi_all(p: usize, z: C64) -> Vec<C64> {
    if z.norm() < PHI_TAYLOR_RADIUS {
        return (1..=p).map(|k| phi(k, z)).collect();
    }
    let mut out = Vec::with_capacity(p);
    let mut value = z.exp();
    for j in 0..p {
        value = (value - re(1.0 / factorial(j))) / z;
        out.push(value);
    }
    out
}
