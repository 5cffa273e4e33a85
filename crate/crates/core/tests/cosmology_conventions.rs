//! Convention checks for the minisuperspace model.

use timeobs_core::cosmology::{
    emergent_time_moment, mean_inverse_speed, mean_signed_inverse_velocity, scale_dwell,
    time_zero_norm, window, CosmoParams, CosmoState,
};
use timeobs_core::numerics::window_transform;
use timeobs_core::oracle::{grid_scale_dwell, GridSpec};
use timeobs_core::{Complex64, Dispersion, Error, Interval, MomentumProfile, Wavepacket};

fn bump_state(kappa: f64) -> CosmoState {
    CosmoState::single_sector(
        CosmoParams::new(kappa).unwrap(),
        MomentumProfile::bump(3.0, 1.0).unwrap(),
        true,
    )
}

#[test]
fn scale_window_is_sine_ratio() {
    for n in 0..100 {
        let a = 0.1 + 0.05 * n as f64;
        let p = -7.0 + 0.1413 * n as f64;
        let got = window(Interval::symmetric(0.5 * a).unwrap(), p).unwrap();
        let want = (a * p).sin() / p;
        assert!(
            (got - Complex64::new(want, 0.0)).norm() <= 1e-13 * want.abs().max(1.0),
            "a={a} p={p}"
        );
        // Same object as the aperture window, at doubled wave number.
        let w = window_transform(2.0 * p, Interval::symmetric(0.5 * a).unwrap()).unwrap();
        assert!((got - w).norm() <= 1e-13 * w.norm().max(1.0));
    }
}

#[test]
fn closed_form_weight_differs_from_direct_integral_by_kappa_squared() {
    let j = Interval::new(-1.0, 1.0).unwrap();
    let grid_for = |state: &CosmoState| {
        GridSpec::new(
            Interval::symmetric(30.0).unwrap(),
            j,
            1200,
            200,
            state.plus.support(),
            512,
        )
        .unwrap()
    };
    for kappa in [1.0, 2.0] {
        let state = bump_state(kappa);
        let closed = scale_dwell(&state, j, 1e-10).unwrap();
        let direct = grid_scale_dwell(&state, j, &grid_for(&state));
        let ratio = closed / direct.value;
        println!(
            "kappa={kappa} closed={closed:.8} direct={:.8} ratio={ratio:.6}",
            direct.value
        );
        assert!((ratio - kappa * kappa).abs() <= 1e-3 * kappa * kappa);
    }
}

#[test]
fn long_region_limit() {
    let state = bump_state(1.0);
    let (_, spread) = Wavepacket::new(state.plus.clone(), Dispersion::cosmological(1.0).unwrap())
        .position_moments(1e-10)
        .unwrap();
    let half = 50.0 * spread;
    let norm = time_zero_norm(&state, 1e-12).unwrap();
    let d = scale_dwell(&state, Interval::symmetric(half).unwrap(), 1e-10).unwrap() / norm;
    let limit = mean_inverse_speed(&state, 1e-10).unwrap();
    assert!((d / (2.0 * half) - limit).abs() <= 1e-2 * limit);
}

#[test]
fn dwell_gate_follows_vanishing_check() {
    let params = CosmoParams::default();
    let j = Interval::new(-1.0, 1.0).unwrap();
    let bad = CosmoState::new(
        params,
        MomentumProfile::bump(3.0, 1.0).unwrap(),
        MomentumProfile::gaussian(0.0, 1.0, false).unwrap(),
    );
    assert!(!bad.vanishes_at_zero());
    assert!(matches!(
        scale_dwell(&bad, j, 1e-8),
        Err(Error::NotInLeftIdeal { .. })
    ));
    let good = CosmoState::new(
        params,
        MomentumProfile::bump(3.0, 1.0).unwrap(),
        MomentumProfile::odd_gaussian(0.0, 1.0).unwrap(),
    );
    assert!(good.vanishes_at_zero());
    assert!(scale_dwell(&good, j, 1e-8).unwrap() > 0.0);
}

#[test]
fn emergent_time_is_affine_in_log_scale() {
    let state = bump_state(1.5).translated(0.7);
    let slope = mean_signed_inverse_velocity(&state, 1e-12).unwrap();
    let points: Vec<(f64, f64)> = [1e-2f64, 1e-1, 1.0, 1e1, 1e2]
        .iter()
        .map(|&p| {
            (
                p.ln(),
                emergent_time_moment(&state, p, 1e-12).unwrap().value,
            )
        })
        .collect();
    let (x0, y0) = points[0];
    let (x1, y1) = points[4];
    let fit = (y1 - y0) / (x1 - x0);
    for &(x, y) in &points {
        assert!((y - (y0 + fit * (x - x0))).abs() <= 1e-10);
    }
    assert!((fit - slope).abs() <= 1e-6 * slope.abs());
}
