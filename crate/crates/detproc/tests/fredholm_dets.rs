use std::f64::consts::PI;

use detproc::configspace::Configuration;
use detproc::exttransition::ExtendedKernel;
use detproc::fredholm::*;
use detproc::noneqkernels::{NonEqFamily, NonEqKernelSpec};
use detproc::statickernels::StaticKernel;
use detproc::validate::kernel_mass;
use detproc::Error;

fn one_window(kernel: FredholmKernel, t: f64, a: f64, b: f64, f: TestFunction) -> FredholmProblem {
    FredholmProblem {
        kernel,
        times: vec![t],
        windows: vec![Window { a, b, f }],
    }
}

fn sine_from(points: &[f64]) -> FredholmKernel {
    FredholmKernel::NonEq(NonEqKernelSpec::new(NonEqFamily::Sine, Configuration::from_points(points).unwrap()).unwrap())
}

#[test]
fn short_sine_gap_matches_series() {
    let g = gap_probability(&StaticKernel::Sine, 0.0, 0.1, 8).unwrap();
    assert!((g.value - (1.0 - 0.1 / PI)).abs() < 1e-4, "{}", g.value);
    assert!((g.value - 0.96817).abs() < 1e-4);
    assert!(g.cauchy_gap <= 1e-8);
    // Two-term series: 1 - s/pi + (1/2) int int det[K] over [0, s]^2.
    let s = 0.1f64;
    let rule = detproc::quadrature::QuadratureRule::gauss_legendre(40, 0.0, s);
    let mut second = 0.0;
    for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
        for (y, wy) in rule.nodes.iter().zip(&rule.weights) {
            let k = StaticKernel::Sine.eval(*x, *y).unwrap();
            second += wx * wy * (1.0 / (PI * PI) - k * k);
        }
    }
    assert!((g.value - (1.0 - s / PI + 0.5 * second)).abs() < 1e-8);
}

#[test]
fn empty_interval_and_monotone_gaps() {
    for k in [StaticKernel::Sine, StaticKernel::Airy, StaticKernel::Bessel { nu: 0.5 }] {
        assert_eq!(gap_probability(&k, 1.0, 1.0, 8).unwrap().value, 1.0);
    }
    let mut last = 1.0;
    for s in [0.5, 1.0, 2.0, 3.0] {
        let g = gap_probability(&StaticKernel::Sine, 0.0, s, 8).unwrap();
        assert!(g.value < last && g.value > 0.0);
        assert!(g.cauchy_gap <= 1e-8);
        last = g.value;
    }
}

#[test]
fn gap_argument_errors() {
    assert!(matches!(gap_probability(&StaticKernel::Sine, 0.0, 1.0, 3), Err(Error::Domain(_))));
    assert!(gap_probability(&StaticKernel::Sine, 1.0, 0.0, 8).is_err());
    assert!(gap_probability(&StaticKernel::Bessel { nu: 0.5 }, -1.0, 1.0, 8).is_err());
    let tight = NystromSettings { start_nodes: 4, max_nodes: 8, tol: 1e-14 };
    let err = gap_probability_with(&StaticKernel::Sine, 0.0, 20.0, &tight).unwrap_err();
    assert!(err.is_numerical());
}

#[test]
fn zero_test_functions_give_one_exactly() {
    let k = sine_from(&[-1.0, 0.0, 1.0]);
    let p = FredholmProblem {
        kernel: k,
        times: vec![0.5, 1.0],
        windows: vec![
            Window { a: -3.0, b: 3.0, f: TestFunction::Zero },
            Window { a: -3.0, b: 3.0, f: TestFunction::Bump { height: 0.0 } },
        ],
    };
    assert_eq!(mgf(&p).unwrap().value, 1.0);
}

#[test]
fn single_time_gap_reduction() {
    for (kernel, a, b) in [
        (StaticKernel::Sine, 0.0, 1.3),
        (StaticKernel::Airy, -2.0, 0.5),
        (StaticKernel::Bessel { nu: 0.5 }, 0.0, 2.0),
    ] {
        let g = gap_probability(&kernel, a, b, 16).unwrap().value;
        let m = mgf(&one_window(FredholmKernel::Static(kernel), 0.0, a, b, TestFunction::Chi { z: -1.0 }))
            .unwrap()
            .value;
        assert!((g - m).abs() < 1e-9, "{kernel:?}: {g} vs {m}");
    }
}

#[test]
fn small_z_slope_is_the_expected_count() {
    let h = 1e-4;
    for (kernel, a, b) in [(StaticKernel::Sine, -0.7, 1.1), (StaticKernel::Hermite { n: 5 }, -1.0, 2.0)] {
        let at = |z: f64| {
            mgf(&one_window(FredholmKernel::Static(kernel), 0.0, a, b, TestFunction::Chi { z }))
                .unwrap()
                .value
        };
        let slope = (at(h) - at(-h)) / (2.0 * h);
        let mass = kernel_mass(&kernel, a, b).unwrap();
        assert!((slope - mass).abs() < 1e-6, "{slope} vs {mass}");
    }
}

#[test]
fn extended_kernel_block_collapses_and_matches_static() {
    let window = Window { a: -1.0, b: 1.0, f: TestFunction::Bump { height: 0.6 } };
    let single = mgf(&one_window(FredholmKernel::Static(StaticKernel::Sine), 0.0, -1.0, 1.0, window.f.clone()))
        .unwrap()
        .value;
    let extended = mgf(&FredholmProblem {
        kernel: FredholmKernel::Extended(ExtendedKernel::ExtSine),
        times: vec![0.3, 0.9],
        windows: vec![window.clone(), Window { a: -1.0, b: 1.0, f: TestFunction::Zero }],
    })
    .unwrap()
    .value;
    assert!((single - extended).abs() < 1e-9, "{single} vs {extended}");
}

#[test]
fn nonequilibrium_blocks_collapse() {
    let k = sine_from(&[-1.0, 0.0, 1.0]);
    let f1 = TestFunction::Bump { height: 0.5 };
    let alone = mgf(&one_window(k.clone(), 0.5, -3.0, 3.0, f1.clone())).unwrap().value;
    for (times, windows) in [
        (
            vec![0.5, 1.0],
            vec![
                Window { a: -3.0, b: 3.0, f: f1.clone() },
                Window { a: -3.0, b: 3.0, f: TestFunction::Zero },
            ],
        ),
        (
            vec![0.2, 0.5],
            vec![
                Window { a: -3.0, b: 3.0, f: TestFunction::Zero },
                Window { a: -3.0, b: 3.0, f: f1.clone() },
            ],
        ),
    ] {
        let both = mgf(&FredholmProblem { kernel: k.clone(), times, windows }).unwrap();
        assert!((both.value - alone).abs() < 1e-9, "{} vs {alone}", both.value);
        assert!(both.cauchy_gap <= 1e-8);
    }
}

#[test]
fn real_test_functions_give_positive_values() {
    let k = sine_from(&[-0.5, 0.7]);
    for (h1, h2) in [(0.5, -0.7), (-2.0, 1.0), (1.5, 1.5)] {
        let p = FredholmProblem {
            kernel: k.clone(),
            times: vec![0.4, 1.2],
            windows: vec![
                Window { a: -3.0, b: 3.0, f: TestFunction::Bump { height: h1 } },
                Window { a: -2.0, b: 1.0, f: TestFunction::Bump { height: h2 } },
            ],
        };
        let v = mgf(&p).unwrap();
        assert!(v.value > 0.0);
        assert!(v.cauchy_gap <= 1e-8);
    }
}

#[test]
fn sampled_functions_interpolate() {
    let f = TestFunction::Samples { values: vec![0.0, 1.0, 2.0, 3.0] };
    for x in [0.0, 0.4, 1.0, 1.7, 3.0] {
        assert!((f.f(0.0, 3.0, x) - x).abs() < 1e-14);
    }
    assert_eq!(f.f(0.0, 3.0, 3.5), 0.0);
    let bumpy = TestFunction::Samples { values: vec![0.0, 2.0, -1.0, 0.5] };
    assert!((bumpy.f(0.0, 3.0, 2.0) + 1.0).abs() < 1e-15);
    assert!((bumpy.chi(0.0, 3.0, 1.0) - 2f64.exp_m1()).abs() < 1e-14);
}

#[test]
fn problem_invariants_are_enforced() {
    let k = sine_from(&[0.0]);
    let w = Window { a: -1.0, b: 1.0, f: TestFunction::Chi { z: 0.5 } };
    let bad_order = FredholmProblem { kernel: k.clone(), times: vec![1.0, 0.5], windows: vec![w.clone(), w.clone()] };
    assert!(matches!(mgf(&bad_order), Err(Error::Domain(_))));
    let mismatched = FredholmProblem { kernel: k.clone(), times: vec![1.0], windows: vec![w.clone(), w.clone()] };
    assert!(mgf(&mismatched).is_err());
    let half = FredholmProblem {
        kernel: FredholmKernel::Static(StaticKernel::Bessel { nu: 0.5 }),
        times: vec![0.0],
        windows: vec![w.clone()],
    };
    assert!(matches!(mgf(&half), Err(Error::Domain(_))));
    let bad_chi = one_window(k, 1.0, -1.0, 1.0, TestFunction::Chi { z: -2.0 });
    assert!(mgf(&bad_chi).is_err());
}
