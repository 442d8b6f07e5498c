use proptest::prelude::*;
use semilab::fixtures::{default_probes, random_normal};
use semilab::parse::{parse_complex, parse_mu_grid, parse_operator};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complex_numbers_round_trip(a in -1e6..1e6f64, b in -1e6..1e6f64) {
        let z = parse_complex(&format!("{a}{b:+}i")).unwrap();
        prop_assert_eq!((z.re, z.im), (a, b));
        prop_assert_eq!(parse_complex(&format!("{a:e}")).unwrap().re, a);
    }

    #[test]
    fn mu_grid_shape(r0 in 0.01..10.0f64, dr in 0.0..100.0f64, nr in 1usize..6,
                     i0 in -50.0..50.0f64, di in 0.0..100.0f64, ni in 1usize..6) {
        let (r1, i1) = (r0 + dr, i0 + di);
        let g = parse_mu_grid(&format!("{r0}:{r1}:{nr}:{i0}:{i1}:{ni}")).unwrap();
        prop_assert_eq!(g.len(), nr * ni);
        for z in &g {
            prop_assert!(z.re >= r0 * (1.0 - 1e-12) && z.re <= r1 * (1.0 + 1e-12));
            prop_assert!(z.im >= i0 - 1e-9 && z.im <= i1 + 1e-9);
        }
        prop_assert_eq!(g[0].re, r0);
    }

    #[test]
    fn random_normal_fixture_is_reproducible_and_sectorial(dim in 1usize..10, seed in 0u64..1000) {
        let a = random_normal(dim, seed).unwrap();
        let b = parse_operator(&format!("matrix = random_normal dim={dim} seed={seed}\n"), "f").unwrap();
        prop_assert_eq!(a.matrix(), b.matrix());
        for l in a.eigenvalues() {
            prop_assert!(l.re < 0.0 && l.im.abs() <= 0.3 * l.re.abs() + 1e-9);
        }
    }

    #[test]
    fn default_probes_depend_only_on_the_seed(n in 1usize..8, seed in 0u64..1000) {
        let p = default_probes(n, seed);
        prop_assert_eq!(p.len(), 16);
        prop_assert_eq!(&p, &default_probes(n, seed));
        prop_assert!(p.iter().all(|q| q.x.len() == n));
    }
}
