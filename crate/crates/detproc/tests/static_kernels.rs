use std::f64::consts::PI;

use detproc::specfun::{airy, bessel_j};
use detproc::statickernels::*;
use proptest::prelude::*;

// Reference values at 40 digits.
const AIRY_KERNEL: &[(f64, f64, f64)] = &[
    (0.0, 0.0, 0.066987483779663974144),
    (-3.0, 1.5, -0.0031818824896800272834),
    (2.0, 2.0, 0.00037919914766937371969),
    (-8.0, -7.5, 0.63568732442230617625),
    (4.0, -6.0, -0.00003154975110875917732),
    (-12.0, -12.0, 1.099910095709033625),
];

const BESSEL_KERNEL: &[(f64, f64, f64, f64)] = &[
    (0.0, 0.5, 0.5, 0.60907069028790129396),
    (0.0, 1.0, 3.0, 0.13766916207311728977),
    (0.0, 7.0, 12.0, 0.056152082856036942297),
    (0.0, 15.0, 15.0, 0.087479999180174007381),
    (0.0, 20.0, 35.0, 0.0062760122340339563887),
    (0.0, 2.0, 2.0, 0.19878649970427305804),
    (0.5, 0.5, 0.5, 0.40112701745454156118),
    (0.5, 1.0, 3.0, 0.19659204658957630255),
    (0.5, 7.0, 12.0, 0.067024806174484458787),
    (0.5, 15.0, 15.0, 0.081050078643485043092),
    (0.5, 20.0, 35.0, 0.0025867210946139884437),
    (0.5, 2.0, 2.0, 0.24840228869909545277),
    (-0.5, 0.5, 0.5, 0.49918929870256450838),
    (-0.5, 1.0, 3.0, 0.13192047883204033712),
    (-0.5, 7.0, 12.0, 0.061177908790349696596),
    (-0.5, 15.0, 15.0, 0.083324439772914905059),
    (-0.5, 20.0, 35.0, 0.0081701340562749187785),
    (-0.5, 2.0, 2.0, 0.201755869379457582),
    (2.0, 0.5, 0.5, 0.016191292622388088465),
    (2.0, 1.0, 3.0, 0.086915611552438393088),
    (2.0, 7.0, 12.0, 0.055157467721863803393),
    (2.0, 15.0, 15.0, 0.085053223441965318592),
    (2.0, 20.0, 35.0, 0.0084763682318672593207),
    (2.0, 2.0, 2.0, 0.11870882672936105103),
];

fn all_families() -> Vec<StaticKernel> {
    vec![
        StaticKernel::Sine,
        StaticKernel::Airy,
        StaticKernel::Bessel { nu: 0.0 },
        StaticKernel::Bessel { nu: 0.5 },
        StaticKernel::Bessel { nu: -0.5 },
        StaticKernel::Hermite { n: 8 },
        StaticKernel::Laguerre { n: 5, nu: 0.5 },
    ]
}

#[test]
fn sine_goldens() {
    let k = StaticKernel::Sine;
    for &x in &[-3.0, 0.0, 1.5, 100.0] {
        assert_eq!(k.eval(x, x).unwrap(), 1.0 / PI);
    }
    assert!(k.eval(0.0, PI).unwrap().abs() < 1e-14);
    assert!((k.eval(0.0, 1.0).unwrap() - 1f64.sin() / PI).abs() < 1e-15);
}

#[test]
fn airy_goldens() {
    let k = StaticKernel::Airy;
    let aip0 = airy(0.0).aip;
    assert!((k.eval(0.0, 0.0).unwrap() - aip0 * aip0).abs() < 1e-15);
    assert!((k.eval(0.0, 0.0).unwrap() - 0.0669865).abs() < 1e-6);
    for &(x, y, want) in AIRY_KERNEL {
        let got = k.eval(x, y).unwrap();
        assert!((got - want).abs() < 1e-12 * want.abs().max(1e-3), "({x},{y}): {got} want {want}");
    }
}

#[test]
fn bessel_goldens() {
    for &(nu, x, y, want) in BESSEL_KERNEL {
        let got = StaticKernel::Bessel { nu }.eval(x, y).unwrap();
        assert!((got - want).abs() < 1e-11, "nu={nu} ({x},{y}): {got} want {want}");
    }
}

#[test]
fn bessel_diagonal_matches_bessel_identity() {
    for &nu in &[0.0, 0.5, 1.0, 2.5, -0.5] {
        for i in 1..=60 {
            let x = 0.5 * i as f64;
            let z = 2.0 * f64::sqrt(x);
            let j = |n: f64| {
                if n > -1.0 {
                    bessel_j(n, z).unwrap().value
                } else {
                    // J_{n} for n in (-2,-1] via the recurrence J_{n} = 2(n+1)/z J_{n+1} - J_{n+2}
                    2.0 * (n + 1.0) / z * bessel_j(n + 1.0, z).unwrap().value
                        - bessel_j(n + 2.0, z).unwrap().value
                }
            };
            let want = j(nu) * j(nu) - j(nu + 1.0) * j(nu - 1.0);
            let got = StaticKernel::Bessel { nu }.eval(x, x).unwrap();
            assert!((got - want).abs() < 1e-10, "nu={nu} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn hermite_one_particle_is_standard_normal() {
    let k = StaticKernel::Hermite { n: 1 };
    for &x in &[0.0f64, 1.0, 2.0] {
        let want = (-x * x / 2.0).exp() / (2.0 * PI).sqrt();
        assert!((k.eval(x, x).unwrap() - want).abs() < 1e-10);
    }
}

#[test]
fn domain_errors() {
    assert!(StaticKernel::Bessel { nu: 0.5 }.eval(-1.0, 1.0).is_err());
    assert!(StaticKernel::Laguerre { n: 3, nu: 0.0 }.eval(1.0, -0.1).is_err());
    assert!(StaticKernel::Bessel { nu: -1.0 }.eval(1.0, 1.0).is_err());
    assert!(StaticKernel::Bessel { nu: -0.5 }.eval(0.0, 1.0).is_err());
    assert!(StaticKernel::Hermite { n: 0 }.eval(0.0, 1.0).is_err());
}

#[test]
fn diagonal_continuity_at_small_separations() {
    for k in all_families() {
        for &x in &[0.3, 2.0, 7.0, 11.0] {
            let d = k.eval(x, x).unwrap();
            let mut prev_gap = f64::INFINITY;
            for &h in &[1e-3, 1e-6, 1e-9] {
                let gap = (k.eval(x, x + h).unwrap() - d).abs();
                assert!(gap <= prev_gap + 1e-12, "{k:?} x={x} h={h}");
                prev_gap = gap;
            }
            // the kernel is smooth, so the last gap is about slope * 1e-9
            assert!(prev_gap < 1e-8, "{k:?} x={x}: {prev_gap}");
        }
    }
}

#[test]
fn switch_points_have_no_jump() {
    for k in [StaticKernel::Sine, StaticKernel::Airy, StaticKernel::Bessel { nu: 0.7 }] {
        for &x in &[-6.0, -1.0, 0.5, 4.0, 10.0, 25.0] {
            if k.half_line() && x < 0.0 {
                continue;
            }
            let t = near_diagonal_threshold(x, x);
            let a = k.eval(x, x + t * (1.0 - 1e-7)).unwrap();
            let b = k.eval(x, x + t * (1.0 + 1e-7)).unwrap();
            assert!((a - b).abs() < 1e-10, "{k:?} at {x}: {a} vs {b}");
        }
    }
    // Bessel series / closed-form boundary.
    let k = StaticKernel::Bessel { nu: 0.3 };
    let a = k.eval(4.0, BESSEL_SERIES_MAX).unwrap();
    let b = k.eval(4.0, BESSEL_SERIES_MAX * (1.0 + 1e-12)).unwrap();
    assert!((a - b).abs() < 1e-10);
}

#[test]
fn total_mass_equals_particle_number() {
    let one = total_mass(&StaticKernel::Hermite { n: 1 }).unwrap();
    assert!((one - 1.0).abs() < 1e-8);
    let eight = total_mass(&StaticKernel::Hermite { n: 8 }).unwrap();
    assert!((eight - 8.0).abs() < 1e-6);
    let five = total_mass(&StaticKernel::Laguerre { n: 5, nu: 0.0 }).unwrap();
    assert!((five - 5.0).abs() < 1e-6);
    let big = total_mass(&StaticKernel::Laguerre { n: 40, nu: -0.5 }).unwrap();
    assert!((big - 40.0).abs() < 1e-6);
    assert!(total_mass(&StaticKernel::Sine).is_err());
}

#[test]
fn finite_kernels_reproduce_themselves() {
    for k in [StaticKernel::Hermite { n: 8 }, StaticKernel::Laguerre { n: 6, nu: 0.5 }] {
        let rule = finite_n_rule(&k).unwrap();
        let waves: Vec<Vec<f64>> = rule.nodes.iter().map(|&z| k.wave_functions(z).unwrap()).collect();
        let pairs = [(0.3, 1.7), (2.0, 5.5), (0.9, 0.9), (4.0, 11.0)];
        for &(x, y) in &pairs {
            let (a, b) = (k.wave_functions(x).unwrap(), k.wave_functions(y).unwrap());
            let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
            let conv: f64 = waves
                .iter()
                .zip(&rule.weights)
                .map(|(w, q)| q * dot(&a, w) * dot(w, &b))
                .sum();
            let direct = k.eval(x, y).unwrap();
            assert!((conv - direct).abs() < 1e-6, "{k:?} ({x},{y}): {conv} vs {direct}");
        }
    }
}

#[test]
fn rho_m_examples() {
    let sine = StaticKernel::Sine;
    let req = |pts: Vec<f64>| CorrelationRequest { kernel: sine, points: pts };
    assert_eq!(rho_m(&req(vec![0.4, 0.4])).unwrap(), 0.0);
    assert_eq!(rho_m(&req(vec![1.0, 2.0, 1.0])).unwrap(), 0.0);
    assert_eq!(rho_m(&req(vec![0.0])).unwrap(), 1.0 / PI);
    let two = rho_m(&req(vec![0.0, 1.0])).unwrap();
    let want = 1.0 / (PI * PI) - (1f64.sin() / PI).powi(2);
    assert!((two - want).abs() < 1e-15);
    assert!(rho_m(&req(vec![])).is_err());
}

#[test]
fn hermite_pair_correlation_is_nonnegative() {
    let k = StaticKernel::Hermite { n: 8 };
    let mut state = 12345u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..100 {
        let (x, y) = (8.0 * next() - 4.0, 8.0 * next() - 4.0);
        let r = rho_m(&CorrelationRequest { kernel: k, points: vec![x, y] }).unwrap();
        // smallest eigenvalue of the 2x2 Gram matrix
        let g = k.gram(&[x, y]).unwrap();
        let tr = g[(0, 0)] + g[(1, 1)];
        let disc = ((g[(0, 0)] - g[(1, 1)]).powi(2) + 4.0 * g[(0, 1)] * g[(1, 0)]).sqrt();
        assert!(0.5 * (tr - disc) >= -1e-14);
        assert!(r >= -1e-14);
    }
}

#[test]
fn laguerre_kernel_converges_to_dilated_bessel_kernel() {
    // With the 2N scaling the finite kernel tends to K_J(x/2, y/2)/2.
    for &nu in &[0.0, 0.5] {
        let bessel = StaticKernel::Bessel { nu };
        let mut prev = f64::INFINITY;
        for &n in &[50usize, 200, 500] {
            let lag = StaticKernel::Laguerre { n, nu };
            let mut sup = 0.0f64;
            for i in 1..=20 {
                for j in 1..=20 {
                    let (x, y) = (0.2 * i as f64, 0.2 * j as f64);
                    let d = lag.eval(x, y).unwrap() - 0.5 * bessel.eval(x / 2.0, y / 2.0).unwrap();
                    sup = sup.max(d.abs());
                }
            }
            assert!(sup < prev, "nu={nu} n={n}: {sup}");
            prev = sup;
        }
        assert!(prev < 2e-3, "nu={nu}: {prev}");
    }
}

proptest! {
    #[test]
    fn kernels_are_symmetric(x in 0.0f64..30.0, y in 0.0f64..30.0, shift in -15.0f64..0.0) {
        for k in all_families() {
            let (a, b) = if k.half_line() { (x + 1e-3, y + 1e-3) } else { (x + shift, y + shift) };
            let kxy = k.eval(a, b).unwrap();
            let kyx = k.eval(b, a).unwrap();
            prop_assert!((kxy - kyx).abs() <= 1e-14);
        }
    }

    #[test]
    fn diagonals_are_nonnegative(x in 0.0f64..40.0) {
        for k in all_families() {
            let a = if k.half_line() { x + 1e-6 } else { x - 20.0 };
            prop_assert!(k.eval(a, a).unwrap() >= -1e-15);
        }
    }
}
