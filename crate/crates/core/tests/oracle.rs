use std::f64::consts::FRAC_1_SQRT_2;

use weber_dirac::model::PotentialParams;
use weber_dirac::oracle::*;
use weber_dirac::quantize::spectrum;

fn analytic(alpha: f64, g: f64, n: usize) -> Vec<f64> {
    spectrum(alpha, n).unwrap().iter().map(|r| (2.0 * g * (r.nu + 1.0)).sqrt()).collect()
}

fn shoot(p: &PotentialParams, n: usize, h_factor: f64) -> Vec<f64> {
    let base = ShootingConfig::for_params(p);
    let cfg = ShootingConfig { h: base.h * h_factor, ..base };
    let found = lowest_eigenvalues(p, n, &cfg).unwrap();
    assert!(found.iter().all(|m| m.converged));
    found.iter().map(|m| m.energy).collect()
}

#[test]
fn oracle_agrees_with_quantization_roots() {
    for alpha in [0.0, FRAC_1_SQRT_2, 1.0, 2.0] {
        let p = PotentialParams::from_alpha(alpha, 1.0).unwrap();
        let want = analytic(alpha, 1.0, 4);
        let coarse = shoot(&p, 4, 1.0);
        let fine = shoot(&p, 4, 0.25);
        for i in 0..4 {
            let err_coarse = ((coarse[i] - want[i]) / want[i]).abs();
            let err_fine = ((fine[i] - want[i]) / want[i]).abs();
            assert!(err_coarse <= 1e-4, "alpha {alpha} level {i}: {err_coarse:e}");
            assert!(err_fine <= 1e-6, "alpha {alpha} level {i}: {err_fine:e}");
            assert!(err_fine * 8.0 <= err_coarse, "alpha {alpha} level {i}: {err_coarse:e} -> {err_fine:e}");
        }
    }
}

#[test]
fn window_at_alpha_one_over_root_two() {
    let p = PotentialParams::from_alpha(FRAC_1_SQRT_2, 1.0).unwrap();
    let cfg = ShootingConfig { e_min: 0.1, e_max: 3.5, ..ShootingConfig::for_params(&p) };
    let found = eigenvalues(&p, &cfg).unwrap();
    let want: Vec<f64> = analytic(FRAC_1_SQRT_2, 1.0, 8).into_iter().filter(|e| (0.1..=3.5).contains(e)).collect();
    assert_eq!(found.len(), 5);
    assert_eq!(want.len(), 5);
    for (m, &w) in found.iter().zip(&want) {
        assert!((m.energy - w).abs() < 1e-4, "{m:?}");
        assert!(!m.near_window_edge);
    }
}

#[test]
fn level_near_the_window_edge_is_flagged() {
    let p = PotentialParams::from_alpha(FRAC_1_SQRT_2, 1.0).unwrap();
    let cfg = ShootingConfig { e_min: 0.1, e_max: 1.42, ..ShootingConfig::for_params(&p) };
    let found = eigenvalues(&p, &cfg).unwrap();
    assert_eq!(found.len(), 1);
    assert!(found[0].near_window_edge);
}

#[test]
fn massless_case_includes_the_level_below_nu_zero() {
    let p = PotentialParams::new(0.0, 1.0).unwrap();
    let e = shoot(&p, 1, 1.0)[0];
    // nu = -0.65454
    assert!((e - (2.0f64 * 0.345_46).sqrt()).abs() < 1e-4, "{e}");
}

#[test]
fn energies_scale_with_root_g() {
    for alpha in [0.0, FRAC_1_SQRT_2, 2.0] {
        let e1 = shoot(&PotentialParams::from_alpha(alpha, 1.0).unwrap(), 4, 1.0);
        let e4 = shoot(&PotentialParams::from_alpha(alpha, 4.0).unwrap(), 4, 1.0);
        for (a, b) in e1.iter().zip(&e4) {
            assert!((b / a - 2.0).abs() < 1e-9, "{a} {b}");
        }
    }
}

#[test]
fn levels_depend_only_on_alpha() {
    let a = shoot(&PotentialParams::new(1.0, 2.0).unwrap(), 3, 1.0);
    let b = shoot(&PotentialParams::new(2f64.sqrt(), 4.0).unwrap(), 3, 1.0);
    for (x, y) in a.iter().zip(&b) {
        let (sx, sy) = (x / 4f64.sqrt(), y / 8f64.sqrt());
        assert!((sx - sy).abs() < 1e-9, "{sx} {sy}");
    }
}

#[test]
fn mismatch_converges_at_fourth_order() {
    let p = PotentialParams::from_alpha(1.0, 1.0).unwrap();
    let base = ShootingConfig::for_params(&p);
    let det = |h: f64| match_determinant(&p, 2.0, &ShootingConfig { h, allow_coarse_step: true, ..base }).unwrap();
    let h = 0.08;
    let (a, b, c) = (det(h), det(h / 2.0), det(h / 4.0));
    let ratio = (a - b) / (b - c);
    assert!((ratio - 16.0).abs() < 1.5, "ratio {ratio}");
}

#[test]
fn domain_size_does_not_matter() {
    let p = PotentialParams::from_alpha(FRAC_1_SQRT_2, 1.0).unwrap();
    let base = ShootingConfig::for_params(&p);
    let narrow = ShootingConfig { x_max: 8.0, h: 0.005, ..base };
    let wide = ShootingConfig { x_max: 12.0, h: 0.005, ..base };
    let a = lowest_eigenvalues(&p, 4, &narrow).unwrap();
    let b = lowest_eigenvalues(&p, 4, &wide).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.energy - y.energy).abs() < 1e-8, "{x:?} {y:?}");
    }
}

#[test]
fn determinant_changes_sign_across_each_level() {
    let p = PotentialParams::from_alpha(FRAC_1_SQRT_2, 1.0).unwrap();
    let cfg = ShootingConfig::for_params(&p);
    let e = analytic(FRAC_1_SQRT_2, 1.0, 4);
    for w in e.windows(2) {
        let below = match_determinant(&p, w[0] - 1e-3, &cfg).unwrap();
        let above = match_determinant(&p, w[0] + 1e-3, &cfg).unwrap();
        assert!(below * above < 0.0);
        let mid = match_determinant(&p, 0.5 * (w[0] + w[1]), &cfg).unwrap();
        assert!(mid.abs() > 0.05, "{mid}");
    }
}

#[test]
fn coarse_step_misses_the_tolerance() {
    let p = PotentialParams::from_alpha(FRAC_1_SQRT_2, 1.0).unwrap();
    let want = analytic(FRAC_1_SQRT_2, 1.0, 4);
    let base = ShootingConfig::for_params(&p);
    let coarse = ShootingConfig { h: 0.5, allow_coarse_step: true, ..base };
    let got = lowest_eigenvalues(&p, 4, &coarse).unwrap();
    let worst = got.iter().zip(&want).map(|(m, w)| ((m.energy - w) / w).abs()).fold(0.0, f64::max);
    assert!(worst > 1e-4, "{worst:e}");
}
