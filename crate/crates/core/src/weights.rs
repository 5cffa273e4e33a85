//! Weights of a free solution on space and time projections.
//!
//! For a solution `ψ` the weight of an operator `A` on `L²(ℝ_t × ℝ_x)` is
//! `∫dt ⟨ψ(t)|A|ψ(t)⟩`. It is finite for `A = E_X(J) E_T(I) E_X(J)` with
//! bounded `I`, and for the position projection `E_X(J)` alone when `φ`
//! vanishes at `p = 0`; the latter is the dwell time in `J`. The ratio of
//! the two is the conditional probability `P(I|J)` that the time lies in `I`
//! given that the particle is in `J`.

use alloc::string::String;
use core::cell::Cell;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
// float math under no_std; shadowed by inherent methods when std links
use num_traits::Float;

use crate::bilinear::pair_form;
use crate::numerics::{oscillatory_time_integral, window_transform, QuadResult, Quadrature};
use crate::wavepacket::{psi, Dispersion, MomentumProfile, Wavepacket};
use crate::{Error, Interval, Result};

/// How `∫_I dt ∫_J dx |ψ|²` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightPath {
    /// Double momentum integral with both the time and space integrals done
    /// in closed form.
    Momentum,
    /// `|ψ(t,x)|²` integrated over the rectangle, with `ψ` itself from a
    /// momentum quadrature at every node.
    Position,
}

/// `∫_I dt ∫_J dx |ψ(t,x)|²` by the momentum path.
pub fn weight_time_space(wp: &Wavepacket, i: Interval, j: Interval, tol: f64) -> Result<f64> {
    Ok(weight_time_space_by(wp, i, j, tol, WeightPath::Momentum)?
        .value
        .re)
}

pub fn weight_time_space_by(
    wp: &Wavepacket,
    i: Interval,
    j: Interval,
    tol: f64,
    path: WeightPath,
) -> Result<QuadResult> {
    if !i.is_bounded() || !j.is_bounded() {
        return Err(Error::UnboundedInterval);
    }
    if i.is_empty() || j.is_empty() || i.length() == 0.0 || j.length() == 0.0 {
        return Ok(QuadResult::zero());
    }
    let mut r = match path {
        WeightPath::Momentum => momentum_weight(&wp.profile, wp.dispersion, i, j, tol)?,
        WeightPath::Position => position_weight(wp, i, j, tol)?,
    };
    if r.value.re < -tol {
        return Err(Error::NegativeValue { value: r.value.re });
    }
    r.value = Complex64::new(r.value.re.max(0.0), 0.0);
    Ok(r)
}

fn momentum_weight(
    phi: &MomentumProfile,
    disp: Dispersion,
    i: Interval,
    j: Interval,
    tol: f64,
) -> Result<QuadResult> {
    momentum_weight_with(phi, disp, i, j, &Quadrature::new(tol))
}

fn momentum_weight_with(
    phi: &MomentumProfile,
    disp: Dispersion,
    i: Interval,
    j: Interval,
    quad: &Quadrature,
) -> Result<QuadResult> {
    pair_form(
        phi,
        Interval::REAL_LINE,
        |p, q| {
            let t = oscillatory_time_integral(disp.energy_difference(p, q), i).unwrap_or_default();
            let x = window_transform(p - q, j).unwrap_or_default();
            t * x
        },
        quad,
    )
}

fn position_weight(wp: &Wavepacket, i: Interval, j: Interval, tol: f64) -> Result<QuadResult> {
    // |ψ| <= ∫|φ|, so an error e in ψ moves |ψ|² by at most 2e∫|φ|.
    let l1 = wp
        .profile
        .integrate(|_, a| Complex64::new(a.norm(), 0.0), 1e-6)?
        .value
        .re
        .max(1e-300);
    let area = i.length() * j.length();
    let inner_tol = 0.1 * tol / (2.0 * l1 * area);
    let failure = Cell::new(None);
    let r = Quadrature::new(0.9 * tol).integrate_2d(
        |t, x| match psi(t, x, wp, inner_tol) {
            Ok(v) => Complex64::new(v.norm_sqr(), 0.0),
            Err(e) => {
                let first = failure.take();
                failure.set(first.or(Some(e)));
                Complex64::new(0.0, 0.0)
            }
        },
        i,
        j,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    r
}

/// How the dwell time is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DwellMethod {
    /// The time integral over `ℝ` reduced to the diagonal `|p| = |q|`.
    MomentumDomain,
    /// `∫_{-T}^{T} dt ∫_J dx |ψ|²` with `T` large enough for the slowest
    /// occupied momentum to have left `J`.
    TimeDomain,
}

/// Longest time window the time-domain method will integrate over.
pub const MAX_TIME_WINDOW: f64 = 2.0e3;

/// Evaluation budget of the time-domain method; its kernel oscillates
/// across the whole momentum square at rate `T*`.
pub const TIME_DOMAIN_MAX_EVALS: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DwellResult {
    /// Expected time spent in `J` for the normalized state.
    pub value: f64,
    /// The unnormalized weight `∫dt ∫_J dx |ψ|²`.
    pub weight: f64,
    pub method: DwellMethod,
    /// Half-width of the time window (time-domain method only).
    pub time_window: Option<f64>,
    pub quad: QuadResult,
}

fn require_left_ideal(phi: &MomentumProfile) -> Result<()> {
    if phi.vanishes_at_zero() {
        Ok(())
    } else {
        Err(Error::NotInLeftIdeal {
            reason: "momentum amplitude does not vanish at p = 0",
        })
    }
}

/// `∫dt ∫_J dx |ψ(t,x)|² = 2π ∫dp |v|⁻¹ conj(φ(p)) (|J| φ(p) + W_J(2p) φ(-p))`
/// with `W_J(k) = ∫_J e^{-ikx} dx`.
pub fn dwell_weight(wp: &Wavepacket, j: Interval, tol: f64) -> Result<QuadResult> {
    require_left_ideal(&wp.profile)?;
    if !j.is_bounded() {
        return Err(Error::UnboundedInterval);
    }
    if j.is_empty() || j.length() == 0.0 {
        return Ok(QuadResult::zero());
    }
    let phi = &wp.profile;
    let disp = wp.dispersion;
    let len = j.length();
    let mut r = phi.integrate(
        |p, a| {
            if a == Complex64::new(0.0, 0.0) {
                return a;
            }
            let w = window_transform(2.0 * p, j).unwrap_or_default();
            a.conj() * (a * len + w * phi.eval(-p)) * (2.0 * PI * disp.inverse_speed(p))
        },
        tol,
    )?;
    if r.value.re < -tol {
        return Err(Error::NegativeValue { value: r.value.re });
    }
    r.value = Complex64::new(r.value.re.max(0.0), 0.0);
    Ok(r)
}

/// Expected time the normalized state spends in `J`, by the momentum-domain
/// reduction.
pub fn dwell_time(wp: &Wavepacket, j: Interval, tol: f64) -> Result<DwellResult> {
    dwell_time_by(wp, j, tol, DwellMethod::MomentumDomain)
}

pub fn dwell_time_by(
    wp: &Wavepacket,
    j: Interval,
    tol: f64,
    method: DwellMethod,
) -> Result<DwellResult> {
    require_left_ideal(&wp.profile)?;
    if !j.is_bounded() {
        return Err(Error::UnboundedInterval);
    }
    let norm = wp.norm_squared(tol)?;
    if norm <= 0.0 {
        return Err(Error::ZeroCondition { weight: norm });
    }
    let (quad, time_window) = match method {
        DwellMethod::MomentumDomain => (dwell_weight(wp, j, tol * norm)?, None),
        DwellMethod::TimeDomain => {
            let window = time_domain_window(wp, j, tol)?;
            let i = Interval::symmetric(window)?;
            if j.is_empty() || j.length() == 0.0 {
                (QuadResult::zero(), Some(window))
            } else {
                let q = Quadrature::new(tol * norm).with_max_evals(TIME_DOMAIN_MAX_EVALS);
                (
                    momentum_weight_with(&wp.profile, wp.dispersion, i, j, &q)?,
                    Some(window),
                )
            }
        }
    };
    Ok(DwellResult {
        value: quad.value.re / norm,
        weight: quad.value.re,
        method,
        time_window,
        quad,
    })
}

/// `T* = 10 (D + 8Δx) / v_min`, where `D` is the distance from the initial
/// mean position to the far end of `J`, `Δx` the position spread and `v_min`
/// the slowest speed where `|φ|²` exceeds `10⁻¹⁰` of its peak.
///
/// Packets with appreciable weight near `p = 0` never leave `J` in finite
/// time; when `T*` exceeds [`MAX_TIME_WINDOW`] the method is unavailable.
pub fn time_domain_window(wp: &Wavepacket, j: Interval, tol: f64) -> Result<f64> {
    let (mean, spread) = wp.position_moments(tol.max(1e-12))?;
    let reach = (j.lo() - mean).abs().max((j.hi() - mean).abs()) + 8.0 * spread;
    let (v_min, _) = wp.speed_range();
    let required = if v_min > 0.0 {
        10.0 * reach / v_min
    } else {
        f64::INFINITY
    };
    if required > MAX_TIME_WINDOW {
        return Err(Error::TimeWindowTooLong {
            required,
            limit: MAX_TIME_WINDOW,
        });
    }
    Ok(required)
}

/// `2π∫|φ|²/|v| dp / 2π∫|φ|² dp`: the classical dwell time per unit length.
pub fn mean_inverse_velocity(wp: &Wavepacket, tol: f64) -> Result<f64> {
    require_left_ideal(&wp.profile)?;
    let phi = &wp.profile;
    let n = phi.norm_squared(tol)?;
    if n <= 0.0 {
        return Err(Error::ZeroCondition { weight: n });
    }
    let d = wp.dispersion;
    let r = phi.integrate(
        |p, a| Complex64::new(a.norm_sqr() * d.inverse_speed(p), 0.0),
        tol * n,
    )?;
    Ok(r.value.re / n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalProbability {
    pub value: f64,
    pub abs_error: f64,
    /// `∫_I dt ∫_J dx |ψ|²`.
    pub joint_weight: f64,
    /// `∫dt ∫_J dx |ψ|²`.
    pub condition_weight: f64,
}

/// `P(I|J)`: the weight of `E_X(J) E_T(I) E_X(J)` over the weight of
/// `E_X(J)`.
///
/// The two integrals converge independently and their errors are combined
/// in quadrature. `I = ℝ` gives exactly 1; other unbounded `I` are rejected.
pub fn conditional_probability(
    wp: &Wavepacket,
    i: Interval,
    j: Interval,
    tol: f64,
) -> Result<ConditionalProbability> {
    if !j.is_empty() && j.length() == 0.0 {
        return Err(Error::DegenerateRegion);
    }
    if !j.is_bounded() || !(i.is_bounded() || i.is_real_line()) {
        return Err(Error::UnboundedInterval);
    }
    let norm = wp.norm_squared(tol)?;
    let den = dwell_weight(wp, j, 1e-3 * tol * norm)?;
    let d = den.value.re;
    if d <= 10.0 * den.abs_error || d <= 1e-14 * norm {
        return Err(Error::ZeroCondition { weight: d });
    }
    let num = if i.is_real_line() {
        den
    } else {
        weight_time_space_by(wp, i, j, 0.5 * tol * d, WeightPath::Momentum)?
    };
    let w = num.value.re;
    let p = w / d;
    let err = ((num.abs_error / d).powi(2) + (p * den.abs_error / d).powi(2)).sqrt();
    Ok(ConditionalProbability {
        value: p,
        abs_error: err,
        joint_weight: w,
        condition_weight: d,
    })
}

/// A square-integrable time window `g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeWindow {
    /// Indicator of `[center - half_width, center + half_width]`.
    Indicator { center: f64, half_width: f64 },
    /// `g(t) = exp(-(t-center)²/(4 width²))`, so `|g|²` has standard
    /// deviation `width`.
    Gaussian { center: f64, width: f64 },
}

impl TimeWindow {
    fn weight(&self, t: f64) -> f64 {
        match *self {
            TimeWindow::Indicator { center, half_width } => {
                if (t - center).abs() <= half_width {
                    1.0
                } else {
                    0.0
                }
            }
            TimeWindow::Gaussian { center, width } => {
                let z = (t - center) / width;
                (-0.5 * z * z).exp()
            }
        }
    }

    fn domain(&self) -> Result<Interval> {
        match *self {
            TimeWindow::Indicator { center, half_width } => {
                if !(half_width > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "half_width",
                        value: half_width,
                    });
                }
                Interval::new(center - half_width, center + half_width)
            }
            TimeWindow::Gaussian { center, width } => {
                if !(width > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "width",
                        value: width,
                    });
                }
                Interval::new(center - 40.0 * width, center + 40.0 * width)
            }
        }
    }
}

/// `∫dt |g(t)|² f(t) ‖ψ(t)‖² / ∫dt |g(t)|² ‖ψ(t)‖²`.
///
/// The free evolution is unitary, so `‖ψ(t)‖² = 2π∫|φ|²` drops out; it is
/// still evaluated to reject the zero state.
pub fn conditional_state_expectation(
    wp: &Wavepacket,
    window: TimeWindow,
    observable: &dyn Fn(f64) -> Complex64,
    tol: f64,
) -> Result<Complex64> {
    let norm = wp.norm_squared(tol)?;
    if norm <= 0.0 {
        return Err(Error::ZeroCondition { weight: norm });
    }
    let domain = window.domain()?;
    let q = Quadrature::new(0.25 * tol).with_rel_tol(0.25 * tol);
    let den = q.integrate(|t| Complex64::new(window.weight(t), 0.0), domain)?;
    if den.value.re <= 0.0 {
        return Err(Error::ZeroCondition {
            weight: den.value.re,
        });
    }
    let num = q.integrate(|t| observable(t) * window.weight(t), domain)?;
    Ok(num.value / den.value.re)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftIdealReport {
    pub member: bool,
    pub reason: String,
}

/// Whether `E_X(J)` has finite weight, i.e. whether the dwell time in `J`
/// is finite. That holds when `φ` vanishes at `p = 0` (sampled as in
/// [`crate::wavepacket::vanishes_linearly_at_zero`]), or trivially for an
/// empty `J`.
pub fn left_ideal_diagnostic(wp: &Wavepacket, j: Interval) -> LeftIdealReport {
    use alloc::format;
    if j.is_empty() || j.length() == 0.0 {
        return LeftIdealReport {
            member: true,
            reason: String::from("empty region has zero weight"),
        };
    }
    if wp.profile.vanishes_at_zero() {
        LeftIdealReport {
            member: true,
            reason: format!(
                "{} vanishes linearly at p = 0, so the 1/|v| weighted dwell integral converges",
                wp.profile.label()
            ),
        }
    } else {
        LeftIdealReport {
            member: false,
            reason: format!(
                "{} does not vanish at p = 0: slow momenta stay in {} arbitrarily long and the dwell integral diverges",
                wp.profile.label(),
                j
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{grid_weight, GridSpec};
    use proptest::prelude::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn nonrel(phi: MomentumProfile) -> Wavepacket {
        Wavepacket::new(phi, Dispersion::nonrelativistic(1.0).unwrap())
    }

    #[test]
    fn empty_regions_weigh_nothing() {
        let wp = nonrel(MomentumProfile::bump(5.0, 1.0).unwrap());
        assert_eq!(
            weight_time_space(&wp, Interval::EMPTY, iv(0.0, 1.0), 1e-8).unwrap(),
            0.0
        );
        assert_eq!(
            weight_time_space(&wp, iv(0.0, 1.0), Interval::EMPTY, 1e-8).unwrap(),
            0.0
        );
        assert_eq!(dwell_time(&wp, Interval::EMPTY, 1e-8).unwrap().value, 0.0);
        assert!(matches!(
            weight_time_space(&wp, Interval::REAL_LINE, iv(0.0, 1.0), 1e-8),
            Err(Error::UnboundedInterval)
        ));
    }

    #[test]
    fn gaussian_weight_against_grid() {
        let wp = nonrel(MomentumProfile::gaussian(5.0, 0.5, false).unwrap());
        let (i, j) = (iv(0.0, 1.0), iv(0.0, 10.0));
        let w = weight_time_space(&wp, i, j, 1e-9).unwrap();
        let grid = GridSpec::for_profile(&wp.profile, i, j).unwrap();
        let g = grid_weight(&wp, i, j, &grid);
        assert!((w - g.value).abs() < 1e-3 * w, "{w} vs {}", g.value);
    }

    #[test]
    fn momentum_and_position_paths_agree() {
        let wp = nonrel(MomentumProfile::bump(3.0, 1.0).unwrap().translated(-1.0));
        let (i, j) = (iv(0.0, 0.7), iv(-0.5, 0.8));
        let a = weight_time_space_by(&wp, i, j, 1e-8, WeightPath::Momentum).unwrap();
        let b = weight_time_space_by(&wp, i, j, 1e-8, WeightPath::Position).unwrap();
        assert!(
            (a.value.re - b.value.re).abs() < 1e-6,
            "{} vs {}",
            a.value,
            b.value
        );
    }

    #[test]
    fn dwell_requires_vanishing_amplitude() {
        let wp = nonrel(MomentumProfile::gaussian(0.0, 1.0, false).unwrap());
        assert!(matches!(
            dwell_time(&wp, iv(-1.0, 1.0), 1e-8),
            Err(Error::NotInLeftIdeal { .. })
        ));
        assert!(!left_ideal_diagnostic(&wp, iv(-1.0, 1.0)).member);
        let odd = nonrel(MomentumProfile::odd_gaussian(0.0, 1.0).unwrap());
        assert!(left_ideal_diagnostic(&odd, iv(-1.0, 1.0)).member);
        let bump = nonrel(MomentumProfile::bump(3.0, 1.0).unwrap());
        assert!(left_ideal_diagnostic(&bump, iv(-1.0, 1.0)).member);
    }

    #[test]
    fn classical_dwell_limit() {
        let wp = nonrel(MomentumProfile::bump(5.0, 1.0).unwrap());
        let inv_v = mean_inverse_velocity(&wp, 1e-12).unwrap();
        let j = iv(-50.0, 50.0);
        let d = dwell_time(&wp, j, 1e-10).unwrap();
        assert!((d.value / j.length() - inv_v).abs() < 0.01 * inv_v);
    }

    #[test]
    fn dwell_methods_agree_on_bump() {
        let wp = nonrel(MomentumProfile::bump(3.0, 1.0).unwrap());
        let j = iv(-0.5, 0.5);
        let m = dwell_time_by(&wp, j, 1e-9, DwellMethod::MomentumDomain).unwrap();
        let t = dwell_time_by(&wp, j, 1e-9, DwellMethod::TimeDomain).unwrap();
        assert!(
            (m.value - t.value).abs() < 1e-3 * m.value,
            "{} vs {}",
            m.value,
            t.value
        );
        assert!(t.time_window.unwrap() > 1.0);
    }

    #[test]
    fn whole_time_axis_is_certain() {
        let wp = nonrel(MomentumProfile::bump(5.0, 1.0).unwrap());
        let p = conditional_probability(&wp, Interval::REAL_LINE, iv(-0.5, 0.5), 1e-8).unwrap();
        assert_eq!(p.value, 1.0);
        let wide = conditional_probability(&wp, iv(-30.0, 30.0), iv(-0.5, 0.5), 1e-7).unwrap();
        assert!((wide.value - 1.0).abs() < 1e-6, "{}", wide.value);
    }

    #[test]
    fn degenerate_and_empty_conditions() {
        let wp = nonrel(MomentumProfile::bump(5.0, 1.0).unwrap());
        assert!(matches!(
            conditional_probability(&wp, iv(0.0, 1.0), Interval::point(0.3).unwrap(), 1e-8),
            Err(Error::DegenerateRegion)
        ));
        assert!(matches!(
            conditional_probability(&wp, iv(0.0, 1.0), Interval::EMPTY, 1e-8),
            Err(Error::ZeroCondition { .. })
        ));
        let p = conditional_probability(&wp, Interval::EMPTY, iv(-1.0, 1.0), 1e-8).unwrap();
        assert_eq!(p.value, 0.0);
    }

    #[test]
    fn window_expectations() {
        let wp = nonrel(MomentumProfile::bump(5.0, 1.0).unwrap());
        let one = |_| Complex64::new(1.0, 0.0);
        let t = |t: f64| Complex64::new(t, 0.0);
        let t2 = |t: f64| Complex64::new(t * t, 0.0);
        let g = TimeWindow::Gaussian {
            center: 2.0,
            width: 0.1,
        };
        assert!(
            (conditional_state_expectation(&wp, g, &one, 1e-10)
                .unwrap()
                .re
                - 1.0)
                .abs()
                < 1e-10
        );
        assert!(
            (conditional_state_expectation(&wp, g, &t2, 1e-10)
                .unwrap()
                .re
                - 4.01)
                .abs()
                < 1e-9
        );
        for eps in [0.1, 0.01, 0.001] {
            let w = TimeWindow::Indicator {
                center: 2.0,
                half_width: eps,
            };
            let v = conditional_state_expectation(&wp, w, &t, 1e-12).unwrap();
            assert!((v.re - 2.0).abs() < 1e-10);
            let v = conditional_state_expectation(&wp, w, &t2, 1e-12).unwrap();
            assert!((v.re - 4.0 - eps * eps / 3.0).abs() < 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn weight_monotone_in_both_regions(t in 0.1f64..2.0, l in 0.2f64..3.0, grow in 0.05f64..1.0) {
            let wp = nonrel(MomentumProfile::bump(4.0, 1.0).unwrap().translated(-2.0));
            let small = weight_time_space(&wp, iv(-t, t), iv(-l, l), 1e-9).unwrap();
            let more_t = weight_time_space(&wp, iv(-t - grow, t + grow), iv(-l, l), 1e-9).unwrap();
            let more_x = weight_time_space(&wp, iv(-t, t), iv(-l - grow, l + grow), 1e-9).unwrap();
            prop_assert!(small >= 0.0);
            prop_assert!(more_t >= small - 2e-9);
            prop_assert!(more_x >= small - 2e-9);
        }

        #[test]
        fn conditional_probability_is_additive(a in -2.0f64..0.0, m in 0.0f64..1.0, b in 1.0f64..3.0) {
            let wp = nonrel(MomentumProfile::bump(5.0, 1.0).unwrap().translated(-3.0));
            let j = iv(-1.0, 1.0);
            let tol = 1e-7;
            let left = conditional_probability(&wp, iv(a, m), j, tol).unwrap().value;
            let right = conditional_probability(&wp, iv(m, b), j, tol).unwrap().value;
            let whole = conditional_probability(&wp, iv(a, b), j, tol).unwrap().value;
            prop_assert!(left >= -10.0 * tol && right >= -10.0 * tol);
            prop_assert!((left + right - whole).abs() <= 2.0 * tol);
            prop_assert!(whole <= 1.0 + tol);
        }
    }
}
