//! Double momentum integrals `∬ conj(φ(p)) K(p,q) φ(q) dp dq`.
//!
//! Every kernel used in this crate is sharply peaked along `p = q`, and the
//! time kernels also along `p = -q`. In the coordinates `s = (p+q)/2`,
//! `d = p - q` both ridges lie on the axes, so the domain is cut there and
//! the adaptive product rule refines towards rectangle edges instead of
//! chasing a diagonal.
//!
//! For a bounded momentum region `[a, b]` the square `[a, b]²` is the
//! diamond `|d| ≤ 2 min(s - a, b - s)`. Writing `d = ±2 min(s - a, b - s) u`
//! with `u ∈ [0, 1]` turns each half of it into a rectangle whose edges
//! carry the sides of the square, so an amplitude that jumps at the edge of
//! its support (a truncation at `p = 0`, say) does not cut through cells.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numerics::{QuadResult, Quadrature};
use crate::wavepacket::MomentumProfile;
use crate::{Interval, Result};

/// Which part of the square to integrate over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Half {
    Both,
    /// `p > q` only.
    Upper,
}

pub(crate) fn pair_form<K>(
    phi: &MomentumProfile,
    domain: Interval,
    kernel: K,
    quad: &Quadrature,
) -> Result<QuadResult>
where
    K: Fn(f64, f64) -> Complex64,
{
    let region = phi.support().intersection(&domain);
    square_integral(
        phi,
        region,
        Half::Both,
        |a, p, q, b| a.conj() * kernel(p, q) * b,
        quad,
    )
}

/// `∬ f(φ(p), p, q, φ(q))` over `region²` or its upper half.
pub(crate) fn square_integral<F>(
    phi: &MomentumProfile,
    region: Interval,
    half: Half,
    f: F,
    quad: &Quadrature,
) -> Result<QuadResult>
where
    F: Fn(Complex64, f64, f64, Complex64) -> Complex64,
{
    if region.is_empty() || region.length() == 0.0 {
        return Ok(QuadResult::zero());
    }
    let zero = Complex64::new(0.0, 0.0);
    let pair = |p: f64, q: f64| {
        if !region.contains(p) || !region.contains(q) {
            return zero;
        }
        let (a, b) = (phi.eval(p), phi.eval(q));
        if a == zero || b == zero {
            return zero;
        }
        f(a, p, q, b)
    };
    let signs: &[f64] = match half {
        Half::Both => &[-1.0, 1.0],
        Half::Upper => &[1.0],
    };

    let mut rects: Vec<(Interval, f64)> = Vec::new();
    if region.is_bounded() {
        let mid = region.midpoint();
        for piece in [
            Interval::new(region.lo(), mid)?,
            Interval::new(mid, region.hi())?,
        ] {
            let (neg, pos) = piece.split_at_zero();
            for s in [neg, pos] {
                if !s.is_empty() && s.length() > 0.0 {
                    rects.extend(signs.iter().map(|&sign| (s, sign)));
                }
            }
        }
    } else {
        let (neg, pos) = region.split_at_zero();
        for s in [neg, pos] {
            if !s.is_empty() && s.length() > 0.0 {
                rects.extend(signs.iter().map(|&sign| (s, sign)));
            }
        }
    }
    let share = Quadrature {
        abs_tol: quad.abs_tol / rects.len() as f64,
        ..*quad
    };
    let unit = Interval::new(0.0, 1.0)?;
    let mut total = QuadResult::zero();
    for (s, sign) in rects {
        let r = if region.is_bounded() {
            let (lo, hi) = (region.lo(), region.hi());
            share.integrate_2d(
                |s, u| {
                    let reach = 2.0 * (s - lo).min(hi - s);
                    if !(reach > 0.0) {
                        return zero;
                    }
                    let d = sign * reach * u;
                    pair(s + 0.5 * d, s - 0.5 * d) * reach
                },
                s,
                unit,
            )?
        } else {
            let d = Interval::new(0.0, f64::INFINITY)?;
            share.integrate_2d(|s, d| pair(s + 0.5 * sign * d, s - 0.5 * sign * d), s, d)?
        };
        total.value += r.value;
        total.abs_error += r.abs_error;
        total.evaluations += r.evaluations;
    }
    Ok(total)
}
