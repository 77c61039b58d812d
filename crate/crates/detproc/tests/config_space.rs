use std::f64::consts::PI;

use detproc::configspace::*;
use detproc::rng::PathRng;
use detproc::sde::{integrate_with, SdeSystem};
use detproc::statickernels::StaticKernel;
use detproc::validate::{kernel_mass, stationary_draw};
use detproc::Error;

fn params(rho: Density, epsilon: f64, kappa: f64, l0: u32, m0: u32) -> SpaceParams {
    SpaceParams { rho, epsilon, kappa, l0, m0 }
}

#[test]
fn configuration_basics() {
    let c = Configuration::new([(1.0, 2), (-0.5, 1), (1.0, 1)]).unwrap();
    assert_eq!(c.points(), &[-0.5, 1.0]);
    assert_eq!(c.multiplicities(), &[1, 3]);
    assert_eq!(c.total(), 4);
    assert!(!c.is_simple());
    assert!(!c.is_nonnegative());
    assert_eq!(c.expanded(), vec![-0.5, 1.0, 1.0, 1.0]);
    assert_eq!(c.count_closed(-0.5, 1.0), 4);
    assert_eq!(c.count_half_open(-0.5, 1.0), 1);
    assert_eq!(c.restrict(0.0, 2.0).total(), 3);
    assert_eq!(c.shift(0.5).points(), &[0.0, 1.5]);
    assert_eq!(c.min_gap(), Some(1.5));
    assert!(Configuration::empty().is_nonnegative());
    assert!(matches!(Configuration::new([(f64::NAN, 1)]), Err(Error::Config(_))));
    assert!(Configuration::new([(0.0, 0)]).is_err());
    let pairs = as_pairs(&c);
    assert_eq!(pairs, vec![(-0.5, 1), (1.0, 3)]);
}

fn as_pairs(c: &Configuration) -> Vec<(f64, u32)> {
    c.clone().into()
}

#[test]
fn g_kappa_examples() {
    assert_eq!(g_kappa(2.0, -3.0), -9.0);
    assert_eq!(g_kappa(0.7, 0.0), 0.0);
    for x in [-2.5, -0.1, 0.3, 7.0] {
        assert_eq!(g_kappa(1.0, x), x);
        assert_eq!(g_kappa(0.5, -x), -g_kappa(0.5, x));
    }
}

#[test]
fn cells_partition_the_line() {
    let mut rng = PathRng::new(4, 0);
    for &kappa in &[0.4, 1.0, 1.7] {
        let xs: Vec<f64> = (0..200).map(|_| 40.0 * (rng.uniform() - 0.5)).collect();
        let mut pts = xs.clone();
        pts.extend([0.0, 1.0, -1.0, 4.0]);
        let c = Configuration::from_points(&pts).unwrap();
        let counts = cell_counts(&c, kappa);
        assert_eq!(counts.iter().map(|p| p.1).sum::<usize>(), c.total());
        for &(k, n) in &counts {
            let direct = c.count_half_open(g_kappa(kappa, k as f64), g_kappa(kappa, (k + 1) as f64));
            assert_eq!(direct, n);
        }
        for x in pts {
            let k = cell_index(kappa, x);
            assert!(g_kappa(kappa, k as f64) <= x && x < g_kappa(kappa, (k + 1) as f64));
        }
    }
}

#[test]
fn empty_configuration_is_a_member_of_the_zero_space() {
    let m = membership(&Configuration::empty(), &params(Density::Zero, 0.5, 1.0, 1, 1), 50.0).unwrap();
    assert_eq!(m, Membership::Member { certified_up_to: 50.0 });
}

#[test]
fn pi_lattice_is_a_sine_member() {
    let pts: Vec<f64> = (-100..=100).map(|j| PI * j as f64).collect();
    let c = Configuration::from_points(&pts).unwrap();
    let p = params(Density::Sine, 0.5, 0.5, 2, 1);
    assert!(membership(&c, &p, 300.0).unwrap().is_member());
    // Brute force on a fine L grid.
    let mut l = 2.0;
    while l <= 300.0 {
        let right = (c.count_closed(0.0, l) as f64 - l / PI).abs();
        let left = (c.count_closed(-l, 0.0) as f64 - l / PI).abs();
        assert!(right <= l.sqrt() && left <= l.sqrt());
        l += 0.01;
    }
}

#[test]
fn crowded_cell_and_window_violations() {
    // Loose windows, so only the cell condition can fail.
    let crowded = Configuration::new([(0.3, 3)]).unwrap();
    let m = membership(&crowded, &params(Density::Sine, 0.9, 0.5, 10, 2), 20.0).unwrap();
    assert_eq!(m, Membership::Violated { witness: Witness::Cell { k: 0, count: 3 } });

    let p = params(Density::Sine, 0.5, 0.5, 2, 2);
    let sparse = Configuration::from_points(&[0.5]).unwrap();
    let m = membership(&sparse, &p, 100.0).unwrap();
    match m {
        Membership::Violated { witness: Witness::RightWindow { l, count, .. } } => {
            assert_eq!(count, 1);
            assert!(l / PI - 1.0 > l.sqrt());
        }
        other => panic!("{other:?}"),
    }
    let negative = Configuration::from_points(&[-1.0, 2.0]).unwrap();
    let m = membership(&negative, &params(Density::Bessel { nu: 0.5 }, 0.5, 1.0, 1, 1), 4.0).unwrap();
    assert_eq!(m, Membership::Violated { witness: Witness::NegativePoint { x: -1.0 } });
    let finite = Configuration::from_points(&[1.0]).unwrap();
    let m = membership(&finite, &params(Density::Zero, 0.5, 1.0, 1, 1), 4.0).unwrap();
    assert!(matches!(m, Membership::Violated { witness: Witness::TotalMass { count: 1, .. } }));
}

#[test]
fn membership_argument_errors() {
    let c = Configuration::empty();
    assert!(membership(&c, &params(Density::Sine, 1.0, 0.5, 1, 1), 5.0).is_err());
    assert!(membership(&c, &params(Density::Sine, 0.5, 1.0, 1, 1), 5.0).is_err());
    assert!(membership(&c, &params(Density::Airy, 0.5, 0.7, 1, 1), 5.0).is_err());
    assert!(membership(&c, &params(Density::Sine, 0.5, 0.5, 0, 1), 5.0).is_err());
    assert!(membership(&c, &params(Density::Sine, 0.5, 0.5, 6, 1), 5.0).is_err());
}

#[test]
fn sine_membership_is_shift_covariant() {
    let mut rng = PathRng::new(8, 0);
    let p = params(Density::Sine, 0.6, 0.8, 2, 3);
    for _ in 0..20 {
        let mut x = 0.0;
        let pts: Vec<f64> = (0..120)
            .map(|_| {
                x += 2.0 * PI * rng.uniform();
                x - 180.0
            })
            .collect();
        let c = Configuration::from_points(&pts).unwrap();
        let u = 10.0 * rng.uniform() - 5.0;
        let a = membership_about(&c, &p, 60.0, 0.0).unwrap();
        let b = membership_about(&c.shift(u), &p, 60.0, u).unwrap();
        assert_eq!(a.is_member(), b.is_member());
    }
}

#[test]
fn reference_masses_match_the_kernels() {
    for (a, b) in [(-3.0, 1.0), (0.0, 2.5), (-8.0, -4.0)] {
        let closed = Density::Airy.mass(a, b).unwrap();
        let quad = kernel_mass(&StaticKernel::Airy, a, b).unwrap();
        assert!((closed - quad).abs() < 1e-9, "{closed} vs {quad}");
    }
    for nu in [-0.5, 0.0, 1.5] {
        let d = Density::Bessel { nu };
        let direct = d.mass(-1.0, 6.0).unwrap();
        let quad = kernel_mass(&StaticKernel::Bessel { nu }, 0.0, 6.0).unwrap();
        assert!((direct - quad).abs() < 1e-8, "nu={nu}: {direct} vs {quad}");
    }
    assert!((Density::Sine.mass(1.0, 1.0 + PI).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(Density::Sine.mass(2.0, 1.0).unwrap(), 0.0);
}

#[test]
fn label_map_examples() {
    let c = Configuration::from_points(&[-2.0, 1.0, 3.0]).unwrap();
    assert_eq!(label_map(&c), vec![1.0, -2.0, 3.0]);
    assert_eq!(first_labels(&c, 2), Configuration::from_points(&[1.0, -2.0]).unwrap());
    let pair = Configuration::from_points(&[1.0, -1.0]).unwrap();
    assert_eq!(label_map(&pair), vec![-1.0, 1.0]);
    let mut rng = PathRng::new(9, 0);
    let pts: Vec<f64> = (0..50).map(|_| 10.0 * rng.normal()).collect();
    let c = Configuration::new(pts.iter().map(|&x| (x, 1 + (x.abs() as u32 % 2)))).unwrap();
    let labels = label_map(&c);
    assert!(labels.windows(2).all(|w| w[0].abs() <= w[1].abs()));
    let mut sorted = labels.clone();
    sorted.sort_by(f64::total_cmp);
    assert_eq!(sorted, c.expanded());
    assert_eq!(first_labels(&c, 1000).total(), c.total());
}

#[test]
fn path_modulus_trivial_cases() {
    let report = path_modulus(&[], 1.0, 1).unwrap();
    assert_eq!(report.max_count, 0);
    let c = Configuration::new([(0.2, 1), (0.7, 2), (2.5, 1)]).unwrap();
    let times = [0.25, 0.5, 0.75, 1.0, 1.0 / 3.0, 2.0 / 3.0];
    let mut path: Vec<(f64, Configuration)> = times.iter().map(|&t| (t, c.clone())).collect();
    path.sort_by(|a, b| a.0.total_cmp(&b.0));
    let report = path_modulus(&path, 1.0, 1).unwrap();
    let static_max = cell_counts(&c, 1.0).iter().map(|p| p.1).max().unwrap();
    assert_eq!(report.max_count, static_max);
    assert_eq!(report.witness_cell, Some(0));
    assert!(path_modulus(&path[..2], 1.0, 1).is_err());
    assert!(path_modulus(&path, 0.0, 1).is_err());
}

#[test]
fn path_modulus_of_a_simulated_path_is_grid_stable() {
    let n = 8;
    let sys = SdeSystem::DysonOu { n };
    let kappa = 1.0;
    let mut rng = PathRng::new(21, 0);
    let x0 = stationary_draw(&sys, &mut rng).unwrap();
    // Grid j / (2k) for cells |k| <= 20 contains every time j / k.
    let mut times: Vec<f64> = (1..=20u32)
        .flat_map(|k| (1..=2 * k).map(move |j| j as f64 / (2 * k) as f64))
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut path = Vec::new();
    let (mut t, mut x) = (0.0, x0);
    for &target in &times {
        let mut last = x.clone();
        integrate_with(&sys, &x, target - t, 1e-3, &mut rng, |_, s| {
            last.copy_from_slice(s);
            Ok(())
        })
        .unwrap();
        x = last;
        t = target;
        path.push((t, Configuration::from_points(&x).unwrap()));
    }
    assert!(x.iter().all(|v| v.abs() < 20.0), "cells beyond the grid");
    let report = path_modulus(&path, kappa, 1).unwrap();
    assert!(report.max_count >= 1);
    let fine = path
        .iter()
        .flat_map(|(_, c)| cell_counts(c, kappa).into_iter().map(|p| p.1))
        .max()
        .unwrap();
    assert!(fine >= report.max_count && fine - report.max_count <= 1);
}
