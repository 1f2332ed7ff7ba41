use proptest::prelude::*;
use std::f64::consts::PI;

use godel_c60::causality::{critical_radii, default_range, g_function, CausalClass, GodelClassParams};
use godel_c60::gauge::{FluxConfig, KPoint, MonopoleConfig};
use godel_c60::geometry::{metric_at, tetrad_at, GeometryParams};
use godel_c60::observables::{LevelSet, MLattice};
use godel_c60::spectrum::{quantization_residual, solve_spectrum, Branch, QuantumNumbers, TwiceM};

fn params() -> impl Strategy<Value = GeometryParams> {
    (0.5..1.5f64, -0.3..0.3f64, 0.3..3.0f64).prop_map(|(a, w, r)| GeometryParams::new(a, w, r).unwrap())
}

fn state() -> impl Strategy<Value = QuantumNumbers> {
    (0u32..6, -6i32..6, prop::bool::ANY)
        .prop_map(|(n, h, k)| QuantumNumbers::new(n, 2 * h + 1, if k { KPoint::Plus } else { KPoint::Minus }))
}

proptest! {
    #[test]
    fn real_roots_annihilate_the_quadratic(q in state(), p in params(), phi in 0.0..2.0 * PI, defects in 0u64..20) {
        let f = FluxConfig::new(phi);
        let c = MonopoleConfig { defects };
        let s = solve_spectrum(&q, &p, &f, &c).unwrap();
        prop_assume!(s.valid);
        for b in [Branch::Plus, Branch::Minus] {
            let l = s.lambda(b).re;
            let scale = 1.0 + l * l + q.m() * q.m() + (q.n as f64).powi(2) + c.charge().powi(2);
            prop_assert!(quantization_residual(l, &q, &p, &f, &c).abs() <= 1e-12 * scale);
        }
        prop_assert!(s.lambda_plus.re >= s.lambda_minus.re);
    }

    #[test]
    fn energies_scale_inversely_with_radius(q in state(), p in params(), phi in 0.0..2.0 * PI) {
        let f = FluxConfig::new(phi);
        let c = MonopoleConfig::c60();
        let s = solve_spectrum(&q, &p, &f, &c).unwrap();
        let p2 = GeometryParams::new(p.alpha, p.omega, 2.0 * p.radius).unwrap();
        let t = solve_spectrum(&q, &p2, &f, &c).unwrap();
        prop_assert!((s.eps_plus - t.eps_plus * 2.0).norm() <= 1e-12 * (1.0 + s.eps_plus.norm()));
    }

    #[test]
    fn flux_quantum_shifts_m_by_one(q in state(), p in params(), phi in 0.0..2.0 * PI) {
        let c = MonopoleConfig::c60();
        let s = solve_spectrum(&q, &p, &FluxConfig::new(phi), &c).unwrap();
        let shifted = QuantumNumbers { m: TwiceM(q.m.0 + 2), ..q };
        let t = solve_spectrum(&shifted, &p, &FluxConfig::new(phi + 2.0 * PI), &c).unwrap();
        prop_assert!((s.eps_plus - t.eps_plus).norm() <= 1e-12 * (1.0 + s.eps_plus.norm()));
        prop_assert!((s.eps_minus - t.eps_minus).norm() <= 1e-12 * (1.0 + s.eps_minus.norm()));
    }

    #[test]
    fn branches_mirror_without_rotation(q in state(), alpha in 0.5..1.5f64, phi in 0.0..2.0 * PI) {
        let p = GeometryParams::new(alpha, 0.0, 1.0).unwrap();
        let s = solve_spectrum(&q, &p, &FluxConfig::new(phi), &MonopoleConfig::c60()).unwrap();
        prop_assert_eq!(s.lambda_plus, -s.lambda_minus);
    }

    #[test]
    fn tetrad_reproduces_metric(p in params(), theta in 0.05..PI - 0.05) {
        let t = tetrad_at(&p, theta).unwrap();
        let g = metric_at(&p, theta).unwrap();
        let scale = g.g.amax().max(1.0);
        prop_assert!((t.induced_metric() - g.g).amax() <= 1e-12 * scale);
        prop_assert!(g.is_symmetric());
        prop_assert_eq!(g.signature(), (1, 2));
    }

    #[test]
    fn level_window_enumeration(n_max in 0u32..6, top in 0i32..8, integer in prop::bool::ANY) {
        let lattice = if integer { MLattice::Integer } else { MLattice::HalfInteger };
        let twice = if integer { 2 * top } else { 2 * top + 1 };
        let ls = LevelSet { lattice, ..LevelSet::new(n_max, TwiceM(twice), Branch::Minus) };
        let ms = ls.twice_m_values();
        prop_assert_eq!(ms.len() as i32, if integer { 2 * top + 1 } else { 2 * top + 2 });
        prop_assert!(ms.windows(2).all(|w| w[1] - w[0] == 2));
        prop_assert_eq!(ls.states().len(), (n_max as usize + 1) * ms.len());
    }

    #[test]
    fn critical_radii_are_sign_changes(omega in 0.2..3.0f64, ratio in -3.0..3.0f64) {
        let gp = GodelClassParams::new(omega, omega * omega * ratio).unwrap();
        let r_max = default_range(&gp);
        let roots = critical_radii(&gp, r_max);
        let eps = 1e-6 * r_max;
        for &r in &roots {
            let (a, b) = (g_function(&gp, r - eps), g_function(&gp, r + eps));
            prop_assert!(a.signum() != b.signum(), "no flip at {r}");
        }
        let expected = match godel_c60::causality::causal_class(&gp) {
            CausalClass::NoCTC => roots.is_empty(),
            CausalClass::OneNoncausalRegion => roots.len() == 1,
            CausalClass::AlternatingRegions => roots.len() >= 2,
        };
        prop_assert!(expected);
    }
}
