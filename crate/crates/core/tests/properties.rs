//! Seeded property suites over random channels, states and unitaries.

use num_complex::Complex64;
use proptest::prelude::*;

use tecost_core::channels::JointPureState;
use tecost_core::fidelity::{
    entanglement_fidelity, entanglement_fidelity_direct, fmin_descent, numerical_range_sample,
    squared_fidelity_and_gradient,
};
use tecost_core::matcore::matrix::{inner, norm};
use tecost_core::matcore::random::{gaussian_vector, random_density, random_pure_state, random_unitary, seeded_rng};
use tecost_core::matcore::{min_eigenpair, unitary_from_angles, PureState};
use tecost_core::tecost::{
    bures_angle, channel_cost, cost_energy_product, cost_objective, hamiltonian_energies_from_unitary, unitary_cost,
};
use tecost_core::{ComplexMatrix, CostOptions, FminOptions, KrausChannel, Regime};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 100,
        ..ProptestConfig::default()
    }
}

fn g(k: &KrausChannel, v: &[Complex64]) -> f64 {
    cost_objective(k, v).unwrap().0
}

fn fast_fmin() -> FminOptions {
    FminOptions {
        restarts: 8,
        ..FminOptions::default()
    }
}

/// Euclidean distance from `p` to the convex hull of `pts` (0 inside).
fn hull_distance(pts: &[Complex64], p: Complex64) -> f64 {
    let mut v: Vec<(f64, f64)> = pts.iter().map(|z| (z.re, z.im)).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(v.iter())
        } else {
            Box::new(v.iter().rev())
        };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    let seg = |a: (f64, f64), b: (f64, f64)| {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len2 = dx * dx + dy * dy;
        let t = if len2 > 0.0 {
            (((p.re - a.0) * dx + (p.im - a.1) * dy) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        ((p.re - a.0 - t * dx).powi(2) + (p.im - a.1 - t * dy).powi(2)).sqrt()
    };
    let m = hull.len();
    if m >= 3 && (0..m).all(|i| cross(hull[i], hull[(i + 1) % m], (p.re, p.im)) >= 0.0) {
        return 0.0;
    }
    (0..m.max(1))
        .map(|i| seg(hull[i], hull[(i + 1) % m]))
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn g_is_positively_homogeneous(seed in any::<u64>(), n in 2usize..=4, d in 1usize..=4, t in 0.0f64..=1.0) {
        let k = KrausChannel::random(n, d, seed).unwrap();
        let v = random_pure_state(d, seed ^ 1).into_amplitudes();
        let tv: Vec<Complex64> = v.iter().map(|z| z * t).collect();
        prop_assert!((g(&k, &tv) - t * g(&k, &v)).abs() <= 1e-10);
    }

    #[test]
    fn g_is_midpoint_concave(seed in any::<u64>(), n in 2usize..=4, d in 1usize..=4, r1 in 0.0f64..=1.0, r2 in 0.0f64..=1.0) {
        let k = KrausChannel::random(n, d, seed).unwrap();
        let v1: Vec<Complex64> = random_pure_state(d, seed ^ 2).into_amplitudes().iter().map(|z| z * r1).collect();
        let v2: Vec<Complex64> = random_pure_state(d, seed ^ 3).into_amplitudes().iter().map(|z| z * r2).collect();
        let mid: Vec<Complex64> = v1.iter().zip(&v2).map(|(a, b)| (a + b) * 0.5).collect();
        prop_assert!(g(&k, &mid) >= 0.5 * (g(&k, &v1) + g(&k, &v2)) - 1e-10);
    }

    #[test]
    fn purification_does_not_matter(seed in any::<u64>(), n in 2usize..=4, d in 1usize..=4) {
        let k = KrausChannel::random(n, d, seed).unwrap();
        let rho = random_density(n, 1 + seed as usize % n, seed ^ 4);
        let spectral = JointPureState::purify(&rho);
        // a second purification: a random unitary on the ancilla
        let da = spectral.dim_a();
        let w = random_unitary(da, seed ^ 5);
        let coeffs = spectral.coefficients();
        let rotated = &w * &coeffs;
        let other = JointPureState::new(da, n, rotated.as_slice().to_vec()).unwrap();
        let a = entanglement_fidelity_direct(&spectral, &k).unwrap();
        let b = entanglement_fidelity_direct(&other, &k).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
        prop_assert!((a - entanglement_fidelity(&rho, &k).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn gradient_matches_finite_differences(seed in any::<u64>(), n in 2usize..=4, d in 1usize..=4) {
        let k = KrausChannel::random(n, d, seed).unwrap();
        let mut rng = seeded_rng(seed ^ 6);
        let dim_a = n;
        let psi = PureState::normalized(gaussian_vector(dim_a * n, &mut rng)).unwrap();
        let dir = gaussian_vector(dim_a * n, &mut rng);
        let (_, grad) = squared_fidelity_and_gradient(&k, psi.amplitudes(), dim_a);
        let analytic = 2.0 * inner(&grad, &dir).re;
        let h = 1e-6;
        let f = |s: f64| {
            let x: Vec<Complex64> = psi.amplitudes().iter().zip(&dir).map(|(p, q)| p + q * s).collect();
            squared_fidelity_and_gradient(&k, &x, dim_a).0
        };
        let fd = (f(h) - f(-h)) / (2.0 * h);
        prop_assert!((fd - analytic).abs() <= 1e-5 * analytic.abs().max(1e-3), "{} vs {}", fd, analytic);
    }

    #[test]
    fn unitary_cost_bounds_bures_angle(seed in any::<u64>(), n in 2usize..=4) {
        let u = random_unitary(n, seed);
        let psi1 = random_pure_state(n, seed ^ 7);
        let psi2 = PureState::normalized(u.mul_vec(psi1.amplitudes())).unwrap();
        prop_assert!(unitary_cost(&u).unwrap() >= bures_angle(&psi1, &psi2).unwrap() - 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    /// λ_min(Herm Σ w̃_i K_i) = F_min at the fidelity minimizer, the numerical
    /// range of that combination reaches F_min, and nothing in it lies left
    /// of F_min.
    #[test]
    fn minimizer_weights_certify_fmin(seed in any::<u64>(), n in 2usize..=3, d in 1usize..=3) {
        let k = KrausChannel::random(n, d, seed).unwrap();
        let r = fmin_descent(&k, &FminOptions { seed, ..fast_fmin() }).unwrap();
        if r.value > 1e-6 {
            let w = r.optimal_w.clone().expect("weights exist when F_min > 0");
            let kw = k.kraus_combination(&w).unwrap();
            let (lmin, _) = min_eigenpair(&kw.hermitian_part()).unwrap();
            prop_assert!((lmin - r.value).abs() <= 1e-7, "{} vs {}", lmin, r.value);
            let pts = numerical_range_sample(&kw, 64, seed).unwrap();
            prop_assert!(hull_distance(&pts, Complex64::new(r.value, 0.0)) <= 1e-6);
            for z in pts {
                prop_assert!(z.re >= r.value - 1e-7);
            }
        }
    }

    #[test]
    fn positive_unitary_cost_matches_energy_product(seed in any::<u64>(), n in 2usize..=4, raw in prop::array::uniform4(0.0f64..1.0)) {
        let theta: Vec<f64> = (0..n).map(|j| (raw[j] - 0.5) * std::f64::consts::PI * 0.999).collect();
        let u = unitary_from_angles(&random_unitary(n, seed), &theta);
        let k = KrausChannel::unitary(&u).unwrap();
        let cost = channel_cost(&k, &CostOptions { iters: 2_000, ..CostOptions::default() }).unwrap();
        prop_assert_eq!(cost.regime, Regime::Positive);
        let t = 1.7;
        let e = hamiltonian_energies_from_unitary(&u, t, 1.0).unwrap();
        let (lo, hi) = e.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        let product = cost_energy_product(hi, lo, t, 1.0).unwrap();
        prop_assert!((cost.angle - product).abs() <= 1e-8, "{} vs {}", cost.angle, product);
    }
}

#[test]
fn hull_distance_sanity() {
    let square = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.5, 0.5),
    ];
    assert_eq!(hull_distance(&square, Complex64::new(0.3, 0.6)), 0.0);
    assert!((hull_distance(&square, Complex64::new(2.0, 0.5)) - 1.0).abs() < 1e-15);
    let segment = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    assert!(hull_distance(&segment, Complex64::new(0.5, 0.0)) < 1e-15);
    assert!(norm(&[Complex64::new(3.0, 4.0)]) == 5.0);
    let _ = ComplexMatrix::identity(1);
}
