//! Closed forms for `∫ e^{iδt} dt` and `∫ t e^{iδt} dt` over intervals.
//!
//! All arrival and weight kernels factor so that the time (or position)
//! integral is elementary; these are the only places the oscillation is
//! handled, and they never quadrature.

use num_complex::Complex64;
#[allow(unused_imports)]
// float math under no_std; shadowed by inherent methods when std links
use num_traits::Float;

use super::Interval;
use crate::{Error, Result};

/// `sin(y) / y`, equal to 1 at 0.
pub fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-8 {
        1.0 - y * y / 6.0
    } else {
        y.sin() / y
    }
}

/// `1 - sin(y)/y` without cancellation for small `y`.
pub fn one_minus_sinc(y: f64) -> f64 {
    if y.abs() < 0.5 {
        let y2 = y * y;
        // Alternating series y²/3! - y⁴/5! + ...
        let mut term = y2 / 6.0;
        let mut sum = term;
        let mut k = 2.0;
        while k < 16.0 {
            term *= -y2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        1.0 - y.sin() / y
    }
}

/// Spherical Bessel `j1(y) = (sin y - y cos y) / y²`.
pub fn j1(y: f64) -> f64 {
    if y.abs() < 0.5 {
        let y2 = y * y;
        // Σ (-1)^k 2(k+1) y^{2k+1} / (2k+3)!
        let mut term = y / 3.0;
        let mut sum = term;
        for k in 1..10 {
            let kf = k as f64;
            term *= -y2 * (kf + 1.0) / (kf * (2.0 * kf + 2.0) * (2.0 * kf + 3.0));
            sum += term;
        }
        sum
    } else {
        (y.sin() - y * y.cos()) / (y * y)
    }
}

/// `∫_I e^{iδt} dt`, exact for bounded `I`.
///
/// Written as `|I| sinc(δ|I|/2) e^{iδc}` with `c` the midpoint, which has
/// no cancellation as `δ -> 0`.
pub fn oscillatory_time_integral(delta: f64, interval: Interval) -> Result<Complex64> {
    if interval.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !interval.is_bounded() {
        return Err(Error::UnboundedInterval);
    }
    let len = interval.length();
    let c = interval.midpoint();
    Ok(Complex64::from_polar(
        len * sinc(0.5 * delta * len),
        delta * c,
    ))
}

/// `∫_I t e^{iδt} dt`, exact for bounded `I`.
pub fn oscillatory_time_moment(delta: f64, interval: Interval) -> Result<Complex64> {
    if interval.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !interval.is_bounded() {
        return Err(Error::UnboundedInterval);
    }
    let h = 0.5 * interval.length();
    let c = interval.midpoint();
    let y = delta * h;
    let inner = Complex64::new(2.0 * h * c * sinc(y), 2.0 * h * h * j1(y));
    Ok(Complex64::from_polar(1.0, delta * c) * inner)
}

/// `∫_J e^{-ikx} dx`: the Fourier transform of the indicator of `J`
/// (unnormalized), i.e. the spatial window of a position projection.
pub fn window_transform(k: f64, region: Interval) -> Result<Complex64> {
    oscillatory_time_integral(-k, region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_1d;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn zero_phase_is_length() {
        let v = oscillatory_time_integral(0.0, iv(0.0, 3.0)).unwrap();
        assert_eq!(v, Complex64::new(3.0, 0.0));
    }

    #[test]
    fn full_period_vanishes() {
        let v = oscillatory_time_integral(PI, iv(0.0, 2.0)).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn unit_frequency_on_unit_interval() {
        // Oracle: direct quadrature of e^{it} on [0, 1].
        let q = integrate_1d(|t| Complex64::new(0.0, t).exp(), iv(0.0, 1.0), 1e-13).unwrap();
        let v = oscillatory_time_integral(1.0, iv(0.0, 1.0)).unwrap();
        assert!((v - q.value).norm() < 1e-13);
        assert!((v.re - 0.841_470_984_807_896_5).abs() < 1e-15);
        assert!((v.im - 0.459_697_694_131_860_3).abs() < 1e-15);
    }

    #[test]
    fn unbounded_is_rejected() {
        let e = oscillatory_time_integral(1.0, iv(0.0, f64::INFINITY)).unwrap_err();
        assert_eq!(e, Error::UnboundedInterval);
        assert_eq!(
            oscillatory_time_integral(1.0, Interval::EMPTY).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn series_branches_are_continuous() {
        for &y in &[0.49999, 0.5, 0.50001, -0.5] {
            let direct_oms = 1.0 - y.sin() / y;
            assert!((one_minus_sinc(y) - direct_oms).abs() < 1e-14);
            let direct_j1 = (y.sin() - y * y.cos()) / (y * y);
            assert!((j1(y) - direct_j1).abs() < 1e-14);
        }
        assert!((one_minus_sinc(1e-3) - (1e-6 / 6.0 - 1e-12 / 120.0)).abs() < 1e-20);
        assert!((j1(1e-3) - (1e-3 / 3.0 - 1e-9 / 30.0)).abs() < 1e-17);
    }

    #[test]
    fn symmetric_window_is_sine_ratio() {
        let a = 0.7;
        for &k in &[0.3, 1.0, 5.0, -2.5] {
            let w = window_transform(k, iv(-a / 2.0, a / 2.0)).unwrap();
            assert!((w.re - 2.0 * (k * a / 2.0).sin() / k).abs() < 1e-15);
            assert_eq!(w.im, 0.0);
        }
    }

    proptest! {
        #[test]
        fn matches_quadrature(delta in -1000.0f64..1000.0, lo in -2.0f64..2.0, len in 0.0f64..3.0) {
            let i = Interval::new(lo, lo + len).unwrap();
            let closed = oscillatory_time_integral(delta, i).unwrap();
            let q = crate::numerics::Quadrature::new(1e-11)
                .integrate(|t| Complex64::new(0.0, delta * t).exp(), i)
                .unwrap();
            prop_assert!((closed - q.value).norm() < 1e-10);
        }

        #[test]
        fn moment_matches_quadrature(delta in -200.0f64..200.0, lo in -2.0f64..2.0, len in 0.0f64..3.0) {
            let i = Interval::new(lo, lo + len).unwrap();
            let closed = oscillatory_time_moment(delta, i).unwrap();
            let q = crate::numerics::Quadrature::new(1e-11)
                .integrate(|t| Complex64::new(0.0, delta * t).exp() * t, i)
                .unwrap();
            prop_assert!((closed - q.value).norm() < 1e-10);
        }
    }
}
