//! Seeded test operators, vectors and probe sets.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use semilab_core::cauchy::Probe;
use semilab_core::scalar::{re, ZERO};
use semilab_core::{E0Norm, Forcing, OperatorPair, Result, Structure, C64};

/// Independent generator for `(seed, stream)`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn complex_normal(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Gaussian vector scaled to unit Euclidean norm.
pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}

/// `Q diag(lambda) Q^H` with `Q` unitary and eigenvalues in the sector
/// `|Im lambda| <= 0.3 |Re lambda|`, `Re lambda in [-50, -0.5]`.
pub fn random_normal(dim: usize, seed: u64) -> Result<OperatorPair> {
    let mut r = rng(seed, 0);
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_normal(&mut r));
    let q = g.qr().q();
    let lambdas: Vec<C64> = (0..dim)
        .map(|_| {
            let x: f64 = -(0.5f64.ln() + (100f64).ln() * r.gen::<f64>()).exp();
            C64::new(x, 0.3 * x.abs() * (2.0 * r.gen::<f64>() - 1.0))
        })
        .collect();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(lambdas));
    let a = &q * d * q.adjoint();
    OperatorPair::new(a, E0Norm::Euclidean, Structure::Dense)
}

pub fn diagonal(values: &[f64]) -> Result<OperatorPair> {
    let v: Vec<C64> = values.iter().map(|x| re(*x)).collect();
    OperatorPair::from_diagonal(&v, E0Norm::Euclidean)
}

/// `diag(-k^2)`, `k = 1..=n`.
pub fn diag_squares(n: usize) -> Result<OperatorPair> {
    diagonal(&(1..=n).map(|k| -((k * k) as f64)).collect::<Vec<_>>())
}

/// Operators covering the solver paths: diagonal, tridiagonal Hermitian,
/// non-normal dense and normal dense.
pub fn corpus() -> Result<Vec<(String, OperatorPair)>> {
    let mut out = vec![
        ("diag(-1,-4)".to_string(), diagonal(&[-1.0, -4.0])?),
        ("diag(-k^2, 64)".to_string(), diag_squares(64)?),
    ];
    for n in [16, 64, 256] {
        out.push((format!("laplacian1d({n})"), OperatorPair::laplacian1d(n, E0Norm::Euclidean)?));
    }
    for size in [2, 4, 8] {
        out.push((format!("jordan(-1, {size})"), OperatorPair::jordan(re(-1.0), size, E0Norm::Euclidean)?));
    }
    out.push(("random_normal(16)".to_string(), random_normal(16, 7)?));
    Ok(out)
}

/// Default probe set for the constant `M`: exponential forcings with
/// rates spread over `[0.1, 100]`, polynomials of degree 0 to 3, and pure
/// initial values.
pub fn default_probes(n: usize, seed: u64) -> Vec<Probe> {
    let mut r = rng(seed, 1);
    let mut out = Vec::new();
    for k in 0..8 {
        let rate = 10f64.powf(-1.0 + 3.0 * k as f64 / 7.0);
        let im: f64 = rate * r.sample::<f64, _>(StandardNormal);
        out.push(Probe::new(Forcing::exp(C64::new(rate, im), random_unit_vector(&mut r, n)), vec![ZERO; n]));
    }
    for deg in 0..4 {
        let coeffs: Vec<C64> = (0..=deg).map(|_| complex_normal(&mut r)).collect();
        out.push(Probe::new(Forcing::poly(coeffs, random_unit_vector(&mut r, n)), vec![ZERO; n]));
    }
    let mut e1 = vec![ZERO; n];
    e1[0] = re(1.0);
    out.push(Probe::new(Forcing::Zero, e1));
    for _ in 0..3 {
        out.push(Probe::new(Forcing::Zero, random_unit_vector(&mut r, n)));
    }
    out
}
