//! Independent oracles. None of these call into the code under test
//! except to read the matrix of an operator.
#![allow(dead_code)]

use num_complex::Complex64 as C;

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn dense(rows: usize, f: impl Fn(usize, usize) -> C) -> Vec<Vec<C>> {
    (0..rows).map(|i| (0..rows).map(|j| f(i, j)).collect()).collect()
}

/// Gaussian elimination with partial pivoting on a copy of `a`.
pub fn lu_solve(a: &[Vec<C>], b: &[C]) -> Vec<C> {
    let n = b.len();
    let mut m: Vec<Vec<C>> = a.to_vec();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].norm().partial_cmp(&m[j][k].norm()).unwrap()).unwrap();
        m.swap(k, p);
        x.swap(k, p);
        for i in k + 1..n {
            let l = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= l * v;
            }
            let v = x[k];
            x[i] -= l * v;
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in k + 1..n {
            s -= m[k][j] * x[j];
        }
        x[k] = s / m[k][k];
    }
    x
}

pub fn matvec(a: &[Vec<C>], x: &[C]) -> Vec<C> {
    a.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// `(mu - A)^{-1} y` by dense elimination.
pub fn resolvent(a: &[Vec<C>], mu: C, y: &[C]) -> Vec<C> {
    let n = y.len();
    let shifted = dense(n, |i, j| if i == j { mu - a[i][j] } else { -a[i][j] });
    lu_solve(&shifted, y)
}

pub fn norm2(x: &[C]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn rel_err(a: &[C], b: &[C]) -> f64 {
    let d: Vec<C> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm2(&d) / norm2(b).max(f64::MIN_POSITIVE)
}

/// `e^{tJ} x` for the upper Jordan block `J = lambda + N` of size `n`:
/// `e^{lambda t} sum_k t^k N^k / k!`.
pub fn jordan_exp(lambda: C, t: f64, x: &[C]) -> Vec<C> {
    let n = x.len();
    let mut out = vec![C::new(0.0, 0.0); n];
    let mut coef = 1.0;
    for k in 0..n {
        if k > 0 {
            coef *= t / k as f64;
        }
        for i in 0..n - k {
            out[i] += coef * x[i + k];
        }
    }
    let e = (lambda * t).exp();
    out.iter().map(|v| e * v).collect()
}

/// Eigenvalues of the Dirichlet Laplacian on `n` interior points of
/// `(0, 1)`.
pub fn laplacian_eigenvalues(n: usize) -> Vec<f64> {
    let h = 1.0 / (n + 1) as f64;
    (1..=n)
        .map(|k| -(4.0 / (h * h)) * (k as f64 * std::f64::consts::PI * h / 2.0).sin().powi(2))
        .collect()
}

/// Eigenvector `k` (1-based) of the Dirichlet Laplacian, unit length.
pub fn laplacian_eigenvector(n: usize, k: usize) -> Vec<C> {
    let h = 1.0 / (n + 1) as f64;
    let v: Vec<f64> = (1..=n).map(|j| (k as f64 * std::f64::consts::PI * j as f64 * h).sin()).collect();
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| c(x / s)).collect()
}

/// Maximum of a unimodal `f` on `[a, b]` by golden-section search.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-12 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Smallest `omega >= 0` with `2M <= max_t weight(t) e^{omega t}` over
/// `points` equispaced nodes of `(0, T]`, found by bisection.
pub fn brute_omega1(m: f64, t_end: f64, points: usize, weight: impl Fn(f64) -> f64) -> f64 {
    let ts: Vec<f64> = (1..=points).map(|k| t_end * k as f64 / points as f64).collect();
    let sup = |w: f64| ts.iter().map(|&t| weight(t) * (w * t).exp()).fold(0.0, f64::max);
    if sup(0.0) >= 2.0 * m {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while sup(hi) < 2.0 * m {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sup(mid) >= 2.0 * m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
