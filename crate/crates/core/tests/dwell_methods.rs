//! Momentum-domain dwell times against the truncated time integral.

use timeobs_core::wavepacket::builtin_profiles;
use timeobs_core::weights::{dwell_time_by, mean_inverse_velocity, DwellMethod, MAX_TIME_WINDOW};
use timeobs_core::{Dispersion, Error, Interval, Wavepacket};

#[test]
fn methods_agree_on_builtin_profiles() {
    let disp = Dispersion::nonrelativistic(1.0).unwrap();
    let j = Interval::new(-1.0, 1.0).unwrap();
    let mut compared = 0;
    for phi in builtin_profiles()
        .into_iter()
        .filter(|p| p.vanishes_at_zero())
    {
        let label = phi.label().to_string();
        let wp = Wavepacket::new(phi, disp);
        let mom = dwell_time_by(&wp, j, 1e-9, DwellMethod::MomentumDomain).unwrap();
        match dwell_time_by(&wp, j, 1e-8, DwellMethod::TimeDomain) {
            Ok(time) => {
                let rel = (time.value - mom.value).abs() / mom.value;
                println!(
                    "{label:<28} {:.10} {:.10} T*={:.1} rel={rel:.2e}",
                    mom.value,
                    time.value,
                    time.time_window.unwrap()
                );
                assert!(rel <= 1e-3, "{label}: {rel}");
                compared += 1;
            }
            // Weight at p = 0 means no finite window lets the packet leave J;
            // that must be reported, never silently truncated.
            Err(Error::TimeWindowTooLong { required, limit }) => {
                println!(
                    "{label:<28} {:.10} time window {required:.3e} > {limit:.0}",
                    mom.value
                );
                assert!(required > MAX_TIME_WINDOW && limit == MAX_TIME_WINDOW);
                assert!(wp.speed_range().0 < 1e-2, "{label}");
            }
            Err(e) => panic!("{label}: {e}"),
        }
    }
    assert!(compared >= 4);
}

#[test]
fn long_region_dwell_is_inverse_velocity() {
    let wp = Wavepacket::new(
        timeobs_core::MomentumProfile::bump(4.0, 1.0).unwrap(),
        Dispersion::relativistic(2.0).unwrap(),
    );
    let (_, spread) = wp.position_moments(1e-10).unwrap();
    let half = 50.0 * spread;
    let d = dwell_time_by(
        &wp,
        Interval::symmetric(half).unwrap(),
        1e-9,
        DwellMethod::MomentumDomain,
    )
    .unwrap();
    let v = mean_inverse_velocity(&wp, 1e-10).unwrap();
    assert!((d.value / (2.0 * half) - v).abs() <= 1e-2 * v);
}
