//! Particle-level quantities against independent routes.

mod common;

use torsqueeze::constants::AIR_MOLECULAR_MASS;
use torsqueeze::model::{depolarization_factors, gas_damping, Ellipsoid, GasEnvironment};
use torsqueeze::verify::trap_frequency_deviation;

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) + simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1)
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    simpson(&f, a, b, fa, fm, fb, 1e-13, 30)
}

// With s = a²(1/y² - 1) the depolarization integrals of a prolate spheroid
// become L_a = (1-e²) ∫ y²/(1-e²y²) dy and L_b = (1-e²) ∫ y²/(1-e²y²)² dy
// over y in [0, 1].
#[test]
fn depolarization_factors_match_quadrature() {
    for ratio in [0.2, 0.5, 0.7, 0.9, 0.999, 0.99999] {
        let p = Ellipsoid::new(100e-9, 100e-9 * ratio, 100e-9 * ratio, 2200.0, 2.1).unwrap();
        let e2 = 1.0 - ratio * ratio;
        let la = (1.0 - e2) * integrate(|y| y * y / (1.0 - e2 * y * y), 0.0, 1.0);
        let lb = (1.0 - e2) * integrate(|y| y * y / (1.0 - e2 * y * y).powi(2), 0.0, 1.0);
        let f = depolarization_factors(&p).unwrap();
        assert!((f.l_a - la).abs() < 1e-12, "ratio {ratio}: {} vs {la}", f.l_a);
        assert!((f.l_b - lb).abs() < 1e-12, "ratio {ratio}: {} vs {lb}", f.l_b);
        assert!((f.sum() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn sphere_is_isotropic() {
    let f = depolarization_factors(&Ellipsoid::sphere(50e-9, 2200.0, 2.1).unwrap()).unwrap();
    for l in [f.l_a, f.l_b, f.l_c] {
        assert!((l - 1.0 / 3.0).abs() < 1e-15);
    }
}

// Values printed by gas_damping_reference.py (mpmath, 50 digits).
const FROZEN: [((f64, f64, f64, f64, f64, f64), f64); 5] = [
    ((100e-9, 50e-9, 2200.0, 1e-4, 300.0, 0.9), 0.000_769_156_988_733_988_22),
    ((100e-9, 50e-9, 2200.0, 1e-2, 300.0, 1.0), 0.081_599_428_214_159_762_89),
    ((100e-9, 90e-9, 2200.0, 1e-4, 300.0, 0.5), 0.000_685_535_928_716_276_63),
    ((100e-9, 99.99e-9, 2200.0, 1e-4, 300.0, 0.9), 0.001_390_290_744_851_012_61),
    ((100e-9, 99.999_99e-9, 2200.0, 1e-4, 300.0, 0.9), 0.001_390_485_197_594_079_75),
];

#[test]
fn gas_damping_matches_frozen_reference() {
    for ((a, b, rho, p, t, acc), want) in FROZEN {
        let particle = Ellipsoid::new(a, b, b, rho, 2.1).unwrap();
        let gas = GasEnvironment {
            pressure: p,
            gas_temperature: t,
            molecular_mass: AIR_MOLECULAR_MASS,
            accommodation: acc,
            bath_temperature: t,
        };
        let got = gas_damping(&gas, &particle);
        assert!(((got - want) / want).abs() < 1e-12, "b = {b}: {got} vs {want}");
    }
}

#[test]
fn trap_frequency_matches_curvature_with_two_tweezers() {
    let base = common::reference_config(true);
    for (pa, pb) in [(0.01, 0.1), (0.05, 0.05), (0.1, 0.5)] {
        let cfg = base
            .with_parameter("tweezers[0].power_w", pa)
            .unwrap()
            .with_parameter("tweezers[1].power_w", pb)
            .unwrap();
        let (setup, _) = cfg.to_setup().unwrap();
        let dev = trap_frequency_deviation(&setup).unwrap();
        assert!(dev < 1e-6, "P = ({pa}, {pb}): {dev}");
    }
}
