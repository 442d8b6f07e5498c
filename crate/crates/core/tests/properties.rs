mod common;

use common::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use semilab_core::cauchy::{e0_norm_j, estimate_m, extend_constant, restrict, solve_ivp, Probe};
use semilab_core::expm::CMatrix;
use semilab_core::theorem::{claim1_check, omega1, omega1_weighted};
use semilab_core::weighted::{interp_norm_diag, lp_norm_e0, weighted_e1_norm, weighted_maxreg_check, weighted_norm};
use semilab_core::{E0Norm, Forcing, GridFunction, OperatorPair, Structure, TimeGrid};

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<C>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n).prop_map(|v| v.into_iter().map(|(a, b)| C::new(a, b)).collect())
}

fn nonzero_vec(n: usize) -> impl Strategy<Value = Vec<C>> {
    complex_vec(n).prop_filter("nonzero", |v| norm2(v) > 1e-3)
}

/// A random dense operator with spectrum in `Re < -4`.
fn stable_dense(n: usize) -> impl Strategy<Value = OperatorPair> {
    complex_vec(n * n).prop_map(move |v| {
        let m = CMatrix::from_fn(n, n, |i, j| v[i * n + j] - if i == j { c(n as f64 + 4.0) } else { c(0.0) });
        OperatorPair::new(m, E0Norm::Euclidean, Structure::Dense).unwrap()
    })
}

fn diagonal(n: usize) -> impl Strategy<Value = OperatorPair> {
    prop::collection::vec((-50.0..0.0f64, -20.0..20.0f64), n).prop_map(|v| {
        let d: Vec<C> = v.into_iter().map(|(a, b)| C::new(a, b)).collect();
        OperatorPair::from_diagonal(&d, E0Norm::Euclidean).unwrap()
    })
}

fn any_fixture() -> impl Strategy<Value = OperatorPair> {
    prop_oneof![
        diagonal(3),
        (2usize..6).prop_map(|n| OperatorPair::jordan(c(-1.0), n, E0Norm::Euclidean).unwrap()),
        (4usize..20).prop_map(|n| OperatorPair::laplacian1d(n, E0Norm::Euclidean).unwrap()),
        stable_dense(4),
    ]
}

fn grid() -> TimeGrid {
    TimeGrid::uniform(1.0, 16, 8).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn resolvent_identity(op in stable_dense(16), y in nonzero_vec(16),
                          mu in (0.0..5.0f64, -30.0..30.0f64), nu in (0.0..5.0f64, -30.0..30.0f64)) {
        let (mu, nu) = (C::new(mu.0, mu.1), C::new(nu.0, nu.1));
        let rm = op.resolvent_solve(mu, &y).unwrap();
        let rn = op.resolvent_solve(nu, &y).unwrap();
        let rmrn = op.resolvent_solve(mu, &rn).unwrap();
        let lhs: Vec<C> = rm.iter().zip(&rn).map(|(a, b)| a - b).collect();
        let rhs: Vec<C> = rmrn.iter().map(|v| v * (nu - mu)).collect();
        let d: Vec<C> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        prop_assert!(norm2(&d) <= 1e-10 * (norm2(&rm) + norm2(&rn)));
    }

    #[test]
    fn normal_resolvent_norm_is_inverse_distance(op in diagonal(6), mu in (0.1..10.0f64, -40.0..40.0f64)) {
        let mu = C::new(mu.0, mu.1);
        let dist = op.eigenvalues().iter().map(|l| (mu - l).norm()).fold(f64::INFINITY, f64::min);
        prop_assert!((op.resolvent_norm(mu).unwrap() * dist - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn semigroup_property(op in any_fixture(), s in 0.0..2.0f64, t in 0.0..2.0f64, seed in complex_vec(20)) {
        let x: Vec<C> = seed[..op.dim().min(20)].iter().copied().chain(std::iter::repeat(c(1.0))).take(op.dim()).collect();
        let direct = op.semigroup_apply_oracle(s + t, &x).unwrap();
        let composed = op.semigroup_apply_oracle(s, &op.semigroup_apply_oracle(t, &x).unwrap()).unwrap();
        let d: Vec<C> = direct.iter().zip(&composed).map(|(a, b)| a - b).collect();
        prop_assert!(norm2(&d) <= 1e-10 * norm2(&direct).max(1e-300) + 1e-300);
    }

    #[test]
    fn graph_norm_dominates(op in any_fixture(), seed in complex_vec(20)) {
        let x: Vec<C> = seed.iter().copied().cycle().take(op.dim()).collect();
        prop_assert!(op.norm0(&x) <= op.norm1(&x));
    }

    #[test]
    fn diagonal_structure_and_bound(op in diagonal(5)) {
        let m = op.matrix();
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    prop_assert_eq!(m[(i, j)], c(0.0));
                }
            }
        }
        let s = (0..5).map(|k| m[(k, k)].re).fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(op.spectrum_and_bound().spectral_bound, s);
    }

    #[test]
    fn estimate_is_monotone_and_scale_invariant(
        op in any_fixture(),
        rates in prop::collection::vec((-3.0..3.0f64, -10.0..10.0f64), 1..5),
        k in (0.1..10.0f64, -10.0..10.0f64),
    ) {
        let n = op.dim();
        let g = TimeGrid::adapted(1.0, 16, 8, op.operator_norm(), 10.0).unwrap();
        let probes: Vec<Probe> = rates
            .iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let y: Vec<C> = (0..n).map(|j| C::new(1.0 + j as f64, i as f64)).collect();
                Probe::new(Forcing::exp(C::new(*a, *b), y), vec![c(0.5); n])
            })
            .collect();
        let mut last = 0.0;
        for m in 1..=probes.len() {
            let est = estimate_m(&op, &g, &probes[..m]).unwrap();
            prop_assert!(est.m_hat >= last);
            last = est.m_hat;
        }
        let k = C::new(k.0, k.1);
        let p = &probes[0];
        let scaled = Probe::new(p.forcing.scaled(k), p.x.iter().map(|v| v * k).collect());
        let r = estimate_m(&op, &g, std::slice::from_ref(p)).unwrap().m_hat;
        let rs = estimate_m(&op, &g, &[scaled]).unwrap().m_hat;
        prop_assert!((r - rs).abs() <= 1e-10 * r);
    }

    #[test]
    fn sigma_one_reductions(op in any_fixture(), mu in (0.1..4.0f64, -8.0..8.0f64), m in 0.5..5.0f64, t in 0.2..4.0f64) {
        let n = op.dim();
        let mu = C::new(mu.0, mu.1);
        let g = TimeGrid::adapted(t, 8, 8, op.operator_norm(), 0.0).unwrap();
        let x: Vec<C> = (0..n).map(|j| C::new(1.0, -(j as f64))).collect();
        let u = solve_ivp(&op, &Forcing::exp(mu.conj(), x.clone()), &x, &g).unwrap();
        prop_assert_eq!(weighted_norm(op.e0(), &u, 1.0).unwrap().value.to_bits(), e0_norm_j(&op, &u).to_bits());
        prop_assert_eq!(
            weighted_e1_norm(&op, &u, 1.0).unwrap().to_bits(),
            semilab_core::cauchy::e1_norm_j(&op, &u).unwrap().to_bits()
        );
        let w = weighted_maxreg_check(&op, &g, m, 1.0, 1.0, mu, &x).unwrap().estimate;
        let u1 = claim1_check(&op, &g, m, mu, &x).unwrap();
        prop_assert_eq!((w.lhs.to_bits(), w.rhs.to_bits(), w.pass), (u1.lhs.to_bits(), u1.rhs.to_bits(), u1.pass));
        prop_assert_eq!(omega1_weighted(m, t, 1.0).unwrap().to_bits(), omega1(m, t).unwrap().to_bits());
    }

    #[test]
    fn interpolation_norm_is_monotone_in_theta(op in diagonal(4), x in nonzero_vec(4), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(interp_norm_diag(&op, &x, lo).unwrap() <= interp_norm_diag(&op, &x, hi).unwrap());
    }

    #[test]
    fn lp_norm_is_monotone_in_p(coeffs in complex_vec(4), p in 1.0..40.0f64, dp in 0.0..40.0f64) {
        let zero = OperatorPair::from_diagonal(&[c(0.0)], E0Norm::Euclidean).unwrap();
        let u = GridFunction::from_fn(grid(), |t| vec![coeffs.iter().rev().fold(c(0.0), |acc, k| acc * t + k)]).unwrap();
        prop_assert!(lp_norm_e0(&zero, &u, p).unwrap() <= lp_norm_e0(&zero, &u, p + dp).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn restrict_undoes_extend(coeffs in complex_vec(3), extra in 0.1..3.0f64) {
        let u = GridFunction::from_fn(grid(), |t| vec![coeffs[0] + coeffs[1] * t, coeffs[2] * t * t]).unwrap();
        let e = extend_constant(&u, 1.0 + extra).unwrap();
        prop_assert_eq!(restrict(&e, 1.0).unwrap(), u);
    }

    #[test]
    fn e0_norm_is_homogeneous(coeffs in complex_vec(2), k in (-5.0..5.0f64, -5.0..5.0f64)) {
        let zero = OperatorPair::from_diagonal(&[c(0.0), c(0.0)], E0Norm::Euclidean).unwrap();
        let k = C::new(k.0, k.1);
        let f = GridFunction::from_fn(grid(), |t| vec![coeffs[0] * t.cos(), coeffs[1]]).unwrap();
        let kf = GridFunction::from_fn(grid(), |t| vec![k * coeffs[0] * t.cos(), k * coeffs[1]]).unwrap();
        prop_assert!((e0_norm_j(&zero, &kf) - k.norm() * e0_norm_j(&zero, &f)).abs() <= 1e-12 * (1.0 + e0_norm_j(&zero, &kf)));
    }
}
