mod common;

use common::*;
use num_complex::Complex64 as C;
use semilab_core::cauchy::{e0_norm_j, e1_norm_j, solve_ivp};
use semilab_core::theorem::{claim1_check, omega1, omega1_weighted};
use semilab_core::weighted::{
    dpg_scale, interp_norm_diag, lp_norm_e0, lp_norms, trace_norm_upper, weighted_e1_norm, weighted_maxreg_check,
    weighted_norm,
};
use semilab_core::{E0Norm, Error, Forcing, GridFunction, OperatorPair, TimeGrid};

fn diag(v: &[f64]) -> OperatorPair {
    OperatorPair::from_diagonal(&v.iter().map(|x| c(*x)).collect::<Vec<_>>(), E0Norm::Euclidean).unwrap()
}

fn grid(t: f64) -> TimeGrid {
    TimeGrid::uniform(t, 16, 8).unwrap()
}

fn fixtures() -> Vec<OperatorPair> {
    vec![
        diag(&[-1.0]),
        diag(&[-1.0, -4.0, 0.5]),
        OperatorPair::laplacian1d(16, E0Norm::Euclidean).unwrap(),
        OperatorPair::jordan(c(-1.0), 4, E0Norm::Sup).unwrap(),
    ]
}

#[test]
fn weighted_norm_examples() {
    let sigma = 0.5;
    let g = TimeGrid::graded(1.0, 8, 8, 20).unwrap();
    let u = GridFunction::from_fn(g.clone(), |t| vec![c(if t > 0.0 { t.powf(sigma - 1.0) } else { 0.0 })]).unwrap();
    let w = weighted_norm(&E0Norm::Euclidean, &u, sigma).unwrap();
    assert!((w.value - 1.0).abs() < 1e-12);
    assert!((w.limit_estimate - 1.0).abs() < 1e-9);
    assert!(!w.membership_ok);

    let k = C::new(3.0, -4.0);
    let g2 = grid(2.0);
    let u = GridFunction::from_fn(g2.clone(), |_| vec![k]).unwrap();
    let w = weighted_norm(&E0Norm::Euclidean, &u, 0.3).unwrap();
    assert!((w.value - 2f64.powf(0.7) * 5.0).abs() < 1e-12);
}

#[test]
fn sigma_one_reproduces_unweighted_values_bit_for_bit() {
    for op in fixtures() {
        let n = op.dim();
        let g = TimeGrid::adapted(1.5, 16, 8, op.operator_norm(), 2.0).unwrap();
        let f = Forcing::exp(C::new(1.0, 2.0), vec![c(1.0); n]);
        let x: Vec<C> = (0..n).map(|k| C::new(1.0, k as f64)).collect();
        let u = solve_ivp(&op, &f, &x, &g).unwrap();
        let w = weighted_norm(op.e0(), &u, 1.0).unwrap();
        assert_eq!(w.value.to_bits(), e0_norm_j(&op, &u).to_bits());
        assert!(w.membership_ok);
        assert_eq!(weighted_e1_norm(&op, &u, 1.0).unwrap().to_bits(), e1_norm_j(&op, &u).unwrap().to_bits());
        for mu in [c(0.5), C::new(2.0, -3.0)] {
            let wm = weighted_maxreg_check(&op, &g, 1.7, 1.2, 1.0, mu, &x).unwrap();
            let cl = claim1_check(&op, &g, 1.7, mu, &x).unwrap();
            assert_eq!(wm.estimate.lhs.to_bits(), cl.lhs.to_bits());
            assert_eq!(wm.estimate.rhs.to_bits(), cl.rhs.to_bits());
            assert_eq!(wm.estimate.pass, cl.pass);
        }
    }
    for m in [0.4, 1.0, 2.5] {
        for t in [0.5, 1.0, 3.0] {
            assert_eq!(omega1_weighted(m, t, 1.0).unwrap().to_bits(), omega1(m, t).unwrap().to_bits());
        }
    }
}

#[test]
fn weighted_endpoint_scalar() {
    let zero = diag(&[0.0]);
    let wm = weighted_maxreg_check(&zero, &grid(1.0), 1.0, 1.0, 0.5, c(1.0), &[c(1.0)]).unwrap();
    assert!((wm.endpoint.lhs - (1.0 - (-1f64).exp())).abs() < 1e-13);
}

#[test]
fn weighted_lhs_is_nondecreasing_in_sigma() {
    let op = OperatorPair::laplacian1d(16, E0Norm::Euclidean).unwrap();
    let g = grid(1.0);
    let x = laplacian_eigenvector(16, 1);
    let lhs: Vec<f64> = [0.1, 0.3, 0.5, 0.7, 0.9, 1.0]
        .iter()
        .map(|s| weighted_maxreg_check(&op, &g, 1.0, 1.0, *s, C::new(1.0, 1.0), &x).unwrap().estimate.lhs)
        .collect();
    assert!(lhs.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn trace_norm_examples() {
    let g = grid(1.0);
    let x = [C::new(3.0, 4.0), c(0.0)];
    let v = trace_norm_upper(&diag(&[0.0, 0.0]), &x, &g, 1.0).unwrap();
    assert!((v - 5.0).abs() < 1e-14);
    let v = trace_norm_upper(&diag(&[-1.0]), &[c(1.0)], &g, 1.0).unwrap();
    assert!((v - 3.0).abs() < 1e-14);
    let op = OperatorPair::jordan(c(-1.0), 3, E0Norm::Euclidean).unwrap();
    let y = [c(1.0), c(-2.0), C::new(0.0, 1.0)];
    let a = trace_norm_upper(&op, &y, &g, 0.5).unwrap();
    let b = trace_norm_upper(&op, &y.map(|v| v * 2.5), &g, 0.5).unwrap();
    assert!((b - 2.5 * a).abs() < 1e-12 * b);
}

#[test]
fn trace_norm_dominates_the_interpolation_norm() {
    // for a scalar mode lambda and sigma = 1/2 the ratio is
    // sqrt(2 e lambda (1 + lambda)) / (2 lambda + 1) < sqrt(e / 2)
    let recorded = (std::f64::consts::E / 2.0).sqrt();
    let op = diag(&[-1.0, -10.0, -100.0]);
    let g = TimeGrid::graded(1.0, 16, 8, 20).unwrap();
    for x in [[c(1.0), c(0.0), c(0.0)], [c(0.0), c(0.0), c(1.0)], [c(1.0), c(-1.0), c(0.5)]] {
        let trace = trace_norm_upper(&op, &x, &g, 0.5).unwrap();
        let interp = interp_norm_diag(&op, &x, 0.5).unwrap();
        // the node supremum may miss the peak slightly
        assert!(trace * (1.0 + 1e-3) >= interp / recorded, "{trace} {interp}");
    }
}

#[test]
fn interpolation_norm_examples() {
    let op = diag(&[-1.0, -3.0]);
    let x = [c(1.0), c(1.0)];
    assert!((interp_norm_diag(&op, &x, 0.5).unwrap() - 2.0).abs() < 1e-15);
    assert_eq!(interp_norm_diag(&op, &x, 0.0).unwrap(), 1.0);
    assert_eq!(interp_norm_diag(&op, &x, 1.0).unwrap(), 4.0);
    let lap = OperatorPair::laplacian1d(4, E0Norm::Euclidean).unwrap();
    assert!(matches!(interp_norm_diag(&lap, &[c(1.0); 4], 0.5), Err(Error::NotDiagonal)));
    assert!(matches!(dpg_scale(&lap, 0.5), Err(Error::NotDiagonal)));
}

#[test]
fn interpolation_weight_matches_k_functional() {
    for lambda in [0.0, 1.0, 7.5, 300.0] {
        for theta in [0.2, 0.5, 0.8] {
            // sup_t t^{-theta} min(1, t (1 + |lambda|)) on a log grid
            let brute = (0..=200_000)
                .map(|k| 10f64.powf(-8.0 + 16.0 * k as f64 / 200_000.0))
                .map(|t| t.powf(-theta) * (t * (1.0 + lambda)).min(1.0))
                .fold(0.0, f64::max);
            let op = diag(&[-lambda]);
            let v = interp_norm_diag(&op, &[c(1.0)], theta).unwrap();
            assert!((v - brute).abs() < 1e-3 * v, "lambda {lambda} theta {theta}");
        }
    }
}

#[test]
fn dpg_scale_weights() {
    let op = diag(&[-1.0, -3.0]);
    let s = dpg_scale(&op, 0.5).unwrap();
    assert_eq!(s.op.e0(), &E0Norm::WeightedSup(vec![2f64.sqrt(), 2.0]));
    assert_eq!(s.e_one_plus_theta, vec![2f64.powf(1.5), 8.0]);
}

#[test]
fn lp_examples() {
    let zero = diag(&[0.0]);
    let g = grid(1.0);
    let mut k = GridFunction::from_fn(g.clone(), |_| vec![C::new(0.6, 0.8)]).unwrap();
    k.derivatives = Some(vec![vec![c(0.0)]; g.len()]);
    let (e0, e1) = lp_norms(&zero, &k, 3.0).unwrap();
    assert!((e0 - 1.0).abs() < 1e-14 && (e1 - 1.0).abs() < 1e-14);
    let t = GridFunction::from_fn(g.clone(), |t| vec![c(t)]).unwrap();
    assert!((lp_norm_e0(&zero, &t, 2.0).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-14);
    assert!(matches!(lp_norms(&zero, &t, 2.0), Err(Error::MissingDerivative)));

    // |u(t)| = (2 / pi) sin(pi t / 2), flat at its maximum
    let op = diag(&[0.0]);
    let u = solve_ivp(&op, &Forcing::exp(C::new(0.0, -std::f64::consts::PI), vec![c(1.0)]), &[c(0.0)], &g).unwrap();
    let sup = e0_norm_j(&op, &u);
    assert!(lp_norm_e0(&op, &u, 64.0).unwrap() >= 0.95 * sup);
    let ps = [1.0, 1.5, 2.0, 4.0, 8.0, 32.0, 64.0];
    let vals: Vec<f64> = ps.iter().map(|p| lp_norm_e0(&op, &u, *p).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12)));
}
