//! Dense matrix exponential by scaling and squaring with Padé
//! approximants (Higham 2005 degree selection), and phi-function
//! combinations through an augmented exponential.

use alloc::vec::Vec;
use nalgebra::DMatrix;
// float math without std; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::scalar::{re, C64};

pub type CMatrix = DMatrix<C64>;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Maximum absolute column sum.
pub fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm of a non-square matrix");
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return CMatrix::from_element(n, n, C64::new(f64::NAN, f64::NAN));
    }
    for (m, theta) in THETA {
        if norm <= theta {
            return pade_low(a, m);
        }
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * re(0.5f64.powi(s));
    let mut e = pade13(&scaled);
    for _ in 0..s {
        e = &e * &e;
    }
    e
}

fn solve_pade(u: CMatrix, v: CMatrix) -> CMatrix {
    let p = &v + &u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .expect("Pade denominator is nonsingular inside the theta bounds")
}

fn pade_low(a: &CMatrix, m: usize) -> CMatrix {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    };
    let n = a.nrows();
    let ident = CMatrix::identity(n, n);
    let a2 = a * a;
    let mut powers = alloc::vec![ident.clone(), a2.clone()];
    while powers.len() <= m / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for k in 0..=m / 2 {
        u += &powers[k] * re(b[2 * k + 1]);
        v += &powers[k] * re(b[2 * k]);
    }
    let u = a * u;
    solve_pade(u, v)
}

fn pade13(a: &CMatrix) -> CMatrix {
    let b = &B13;
    let n = a.nrows();
    let ident = CMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9]);
    let u = a
        * (&a6 * inner_u
            + &a6 * re(b[7])
            + &a4 * re(b[5])
            + &a2 * re(b[3])
            + &ident * re(b[1]));
    let inner_v = &a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8]);
    let v = &a6 * inner_v + &a6 * re(b[6]) + &a4 * re(b[4]) + &a2 * re(b[2]) + ident * re(b[0]);
    solve_pade(u, v)
}

/// Returns `e^{t(A+shift)} x0 + sum_{j=1}^{p} t^j phi_j(t(A+shift)) w_j`
/// where `ws = [w_1, ..., w_p]`, from one exponential of the
/// `(n+p) x (n+p)` matrix `[[A+shift, W], [0, J]]` with `J` the shift
/// matrix (Al-Mohy & Higham, 2011).
pub fn phi_combination(a: &CMatrix, shift: C64, t: f64, x0: Option<&[C64]>, ws: &[Vec<C64>]) -> Vec<C64> {
    let n = a.nrows();
    let p = ws.len();
    let size = n + p;
    let mut aug = CMatrix::zeros(size, size);
    aug.view_mut((0, 0), (n, n)).copy_from(a);
    for i in 0..n {
        aug[(i, i)] += shift;
    }
    // Column n + p - j holds w_j.
    for (j, w) in ws.iter().enumerate() {
        let col = n + p - 1 - j;
        for i in 0..n {
            aug[(i, col)] = w[i];
        }
    }
    for k in 0..p.saturating_sub(1) {
        aug[(n + k, n + k + 1)] = re(1.0);
    }
    let e = expm(&(aug * re(t)));
    let mut out = alloc::vec![re(0.0); n];
    if p > 0 {
        for i in 0..n {
            out[i] = e[(i, size - 1)];
        }
    }
    if let Some(x) = x0 {
        for i in 0..n {
            let mut acc = re(0.0);
            for k in 0..n {
                acc += e[(i, k)] * x[k];
            }
            out[i] += acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::phi;

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_exponential_matches_scalar_exp() {
        for scale in [1e-3, 0.1, 1.0, 10.0, 200.0] {
            let d = [C64::new(-1.0, 2.0), re(0.5), re(-3.0)];
            let a = CMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d)) * re(scale);
            let e = expm(&a);
            for (i, di) in d.iter().enumerate() {
                let want = (di * scale).exp();
                assert!((e[(i, i)] - want).norm() <= 1e-13 * (1.0 + want.norm()), "scale {scale}");
            }
        }
    }

    #[test]
    fn jordan_block_closed_form() {
        // exp(t J(lambda)) = e^{lambda t} [[1, t], [0, 1]]
        let lambda = -1.0;
        for t in [0.01, 2.0, 7.5] {
            let a = CMatrix::from_row_slice(2, 2, &[re(lambda * t), re(t), re(0.0), re(lambda * t)]);
            let f = (lambda * t).exp();
            let want = CMatrix::from_row_slice(2, 2, &[re(f), re(t * f), re(0.0), re(f)]);
            assert!(max_diff(&expm(&a), &want) < 1e-14);
        }
    }

    #[test]
    fn nilpotent_series_terminates() {
        // Strictly upper triangular 3x3 with ones: e^N = I + N + N^2/2.
        let n = CMatrix::from_fn(3, 3, |i, j| if j == i + 1 { re(3.0) } else { re(0.0) });
        let want = CMatrix::identity(3, 3) + &n + &n * &n * re(0.5);
        assert!(max_diff(&expm(&n), &want) < 1e-12);
    }

    #[test]
    fn augmented_phi_reduces_to_scalar_phi() {
        let lam = C64::new(-2.0, 1.0);
        let a = CMatrix::from_element(1, 1, lam);
        let shift = C64::new(0.5, -0.25);
        let t = 0.7;
        let w1 = alloc::vec![re(1.5)];
        let w2 = alloc::vec![C64::new(0.0, 2.0)];
        let x0 = [re(3.0)];
        let got = phi_combination(&a, shift, t, Some(&x0), &[w1.clone(), w2.clone()]);
        let z = (lam + shift) * t;
        let want = z.exp() * 3.0 + phi(1, z) * t * w1[0] + phi(2, z) * t * t * w2[0];
        assert!((got[0] - want).norm() < 1e-14);
    }
}
