//! Brute-force references.
//!
//! Everything here is a plain midpoint Riemann sum on a fixed grid. Nothing
//! is shared with [`crate::numerics`]: the oscillatory time integral is
//! re-derived locally and wave functions are summed directly over momentum
//! samples. Each estimate also reports how much it moved when every grid
//! count was halved.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
// float math under no_std; shadowed by inherent methods when std links
use num_traits::Float;

use crate::cosmology::CosmoState;
use crate::wavepacket::{Dispersion, MomentumProfile, Wavepacket};
use crate::{Error, Interval, Result};

/// Grid resolution for the oracles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub t_range: Interval,
    pub x_range: Interval,
    pub nt: usize,
    pub nx: usize,
    pub p_range: Interval,
    pub np: usize,
}

pub const MIN_COUNT: usize = 16;
pub const DEFAULT_NP: usize = 1024;
pub const DEFAULT_NTX: usize = 400;

impl GridSpec {
    pub fn new(
        t_range: Interval,
        x_range: Interval,
        nt: usize,
        nx: usize,
        p_range: Interval,
        np: usize,
    ) -> Result<Self> {
        for r in [t_range, x_range, p_range] {
            if r.is_empty() || !r.is_bounded() {
                return Err(Error::UnboundedInterval);
            }
        }
        for (name, n) in [("nt", nt), ("nx", nx), ("np", np)] {
            if n < MIN_COUNT {
                return Err(Error::InvalidParameter {
                    name,
                    value: n as f64,
                });
            }
        }
        Ok(GridSpec {
            t_range,
            x_range,
            nt,
            nx,
            p_range,
            np,
        })
    }

    /// Default counts with the momentum range set to the profile support.
    pub fn for_profile(
        phi: &MomentumProfile,
        t_range: Interval,
        x_range: Interval,
    ) -> Result<Self> {
        GridSpec::new(
            t_range,
            x_range,
            DEFAULT_NTX,
            DEFAULT_NTX,
            phi.support(),
            DEFAULT_NP,
        )
    }

    pub fn with_counts(self, nt: usize, nx: usize, np: usize) -> Result<Self> {
        GridSpec::new(self.t_range, self.x_range, nt, nx, self.p_range, np)
    }

    fn halved(&self) -> GridSpec {
        GridSpec {
            nt: (self.nt / 2).max(1),
            nx: (self.nx / 2).max(1),
            np: (self.np / 2).max(1),
            ..*self
        }
    }
}

/// A grid value and the change observed when the grid is coarsened twofold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub refinement: f64,
}

impl OracleEstimate {
    fn from_pair(fine: f64, coarse: f64) -> Self {
        OracleEstimate {
            value: fine,
            refinement: (fine - coarse).abs(),
        }
    }

    pub fn relative_refinement(&self) -> f64 {
        if self.value == 0.0 {
            self.refinement
        } else {
            self.refinement / self.value.abs()
        }
    }
}

fn midpoints(range: Interval, n: usize) -> (Vec<f64>, f64) {
    if range.is_empty() || range.length() == 0.0 {
        return (Vec::new(), 0.0);
    }
    let h = range.length() / n as f64;
    (
        (0..n).map(|i| range.lo() + (i as f64 + 0.5) * h).collect(),
        h,
    )
}

/// `∫_I e^{iδt} dt` written out again, independently of the main path.
fn time_phase_integral(delta: f64, range: Interval) -> Complex64 {
    if range.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let (a, b) = (range.lo(), range.hi());
    let len = b - a;
    if (delta * len).abs() < 1e-4 {
        let x = delta * len;
        let mid = 0.5 * (a + b);
        return Complex64::from_polar(len * (1.0 - x * x / 24.0), delta * mid);
    }
    (Complex64::from_polar(1.0, delta * b) - Complex64::from_polar(1.0, delta * a))
        / Complex64::new(0.0, delta)
}

/// Momentum samples `(p, φ(p)·dp)`.
fn weighted_samples(phi: &MomentumProfile, range: Interval, n: usize) -> Vec<(f64, Complex64)> {
    let (ps, dp) = midpoints(range, n);
    ps.into_iter().map(|p| (p, phi.eval(p) * dp)).collect()
}

/// `Σ_p a_p e^{-i sign E(p) t + i p x_j}` for all `x_j` on an arithmetic grid,
/// stepping the spatial phase by repeated multiplication.
fn wave_row(
    samples: &[(f64, Complex64)],
    energy: &dyn Fn(f64) -> f64,
    t: f64,
    xs: &[f64],
    out: &mut [Complex64],
) {
    out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
    if xs.is_empty() {
        return;
    }
    let dx = if xs.len() > 1 { xs[1] - xs[0] } else { 0.0 };
    for &(p, a) in samples {
        let step = Complex64::from_polar(1.0, p * dx);
        let mut cur = a * Complex64::from_polar(1.0, p * xs[0] - energy(p) * t);
        for v in out.iter_mut() {
            *v += cur;
            cur *= step;
        }
    }
}

fn density_sum(
    samples: &[Vec<(f64, Complex64)>],
    energies: &[&dyn Fn(f64) -> f64],
    ts: &[f64],
    xs: &[f64],
    scale: f64,
) -> f64 {
    let mut row = vec![Complex64::new(0.0, 0.0); xs.len()];
    let mut acc = vec![Complex64::new(0.0, 0.0); xs.len()];
    let mut total = 0.0;
    for &t in ts {
        acc.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (s, e) in samples.iter().zip(energies) {
            wave_row(s, *e, t, xs, &mut row);
            for (a, r) in acc.iter_mut().zip(&row) {
                *a += *r;
            }
        }
        total += acc.iter().map(|v| v.norm_sqr()).sum::<f64>();
    }
    total * scale
}

fn weight_on(wp: &Wavepacket, i: Interval, j: Interval, grid: &GridSpec) -> f64 {
    let (ts, dt) = midpoints(i.intersection(&grid.t_range), grid.nt);
    let (xs, dx) = midpoints(j.intersection(&grid.x_range), grid.nx);
    if ts.is_empty() || xs.is_empty() {
        return 0.0;
    }
    let samples = weighted_samples(&wp.profile, grid.p_range, grid.np);
    let disp = wp.dispersion;
    let energy = move |p: f64| disp.energy(p);
    density_sum(&[samples], &[&energy], &ts, &xs, dt * dx)
}

/// `∫_I dt ∫_J dx |ψ(t,x)|²` on the grid, with `I` and `J` clipped to the
/// grid's time and space ranges.
pub fn grid_weight(wp: &Wavepacket, i: Interval, j: Interval, grid: &GridSpec) -> OracleEstimate {
    OracleEstimate::from_pair(
        weight_on(wp, i, j, grid),
        weight_on(wp, i, j, &grid.halved()),
    )
}

fn povm_on(phi: &MomentumProfile, disp: Dispersion, i: Interval, grid: &GridSpec) -> f64 {
    let samples = weighted_samples(phi, grid.p_range, grid.np);
    let norm: f64 = samples.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>() * grid.np as f64
        / grid.p_range.length();
    if i.is_empty() || norm == 0.0 {
        return 0.0;
    }
    let prepared: Vec<(f64, Complex64, f64, f64)> = samples
        .iter()
        .map(|&(p, a)| (p, a, disp.energy(p), disp.group_velocity(p).abs().sqrt()))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for &(p, a, ep, sp) in &prepared {
        for &(q, b, eq, sq) in &prepared {
            if p * q > 0.0 {
                total += a.conj() * b * (sp * sq / (2.0 * PI)) * time_phase_integral(ep - eq, i);
            }
        }
    }
    total.re / norm
}

/// Arrival probability in `I`: a double momentum sum of the arrival kernel
/// over the `pq > 0` sectors, divided by `∫|φ|² dp`.
pub fn grid_povm(
    phi: &MomentumProfile,
    disp: Dispersion,
    i: Interval,
    grid: &GridSpec,
) -> OracleEstimate {
    OracleEstimate::from_pair(
        povm_on(phi, disp, i, grid),
        povm_on(phi, disp, i, &grid.halved()),
    )
}

/// `∫|φ(p)|² dp` on the momentum grid.
pub fn grid_norm(phi: &MomentumProfile, grid: &GridSpec) -> OracleEstimate {
    let on = |g: &GridSpec| {
        let (ps, dp) = midpoints(g.p_range, g.np);
        ps.iter().map(|&p| phi.eval(p).norm_sqr()).sum::<f64>() * dp
    };
    OracleEstimate::from_pair(on(grid), on(&grid.halved()))
}

/// `∫ g(p) |φ(p)|² dp / ∫ |φ(p)|² dp` on the momentum grid.
pub fn grid_expectation(
    phi: &MomentumProfile,
    g: &dyn Fn(f64) -> f64,
    grid: &GridSpec,
) -> OracleEstimate {
    let on = |gr: &GridSpec| {
        let (ps, _) = midpoints(gr.p_range, gr.np);
        let (mut num, mut den) = (0.0, 0.0);
        for p in ps {
            let w = phi.eval(p).norm_sqr();
            if w > 0.0 {
                num += g(p) * w;
                den += w;
            }
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    };
    OracleEstimate::from_pair(on(grid), on(&grid.halved()))
}

fn cosmo_dwell_on(state: &CosmoState, j: Interval, grid: &GridSpec) -> f64 {
    let (ts, dt) = midpoints(grid.t_range, grid.nt);
    let (xs, dx) = midpoints(j.intersection(&grid.x_range), grid.nx);
    if xs.is_empty() {
        return 0.0;
    }
    let kappa = state.params.kappa();
    let omega = move |k: f64| kappa * (k * k + 1.0 / 16.0).sqrt();
    let minus_omega = move |k: f64| -omega(k);
    let plus = weighted_samples(&state.plus, grid.p_range, grid.np);
    let minus = weighted_samples(&state.minus, grid.p_range, grid.np);
    // |ψ|² carries the (2π)^{-1/2} prefactor squared.
    density_sum(
        &[plus, minus],
        &[&omega, &minus_omega],
        &ts,
        &xs,
        dt * dx / (2.0 * PI),
    )
}

/// `∫_J du ∫ dφ |ψ(φ,u)|²` for the cosmological solution
/// `ψ(φ,u) = (2π)^{-1/2} Σ_± ∫dk e^{∓iω_kφ + iku} φ_±(k)`, with `φ` running
/// over `grid.t_range` and `u` over `J ∩ grid.x_range`.
///
/// The momentum range must cover both sector supports.
pub fn grid_scale_dwell(state: &CosmoState, j: Interval, grid: &GridSpec) -> OracleEstimate {
    OracleEstimate::from_pair(
        cosmo_dwell_on(state, j, grid),
        cosmo_dwell_on(state, j, &grid.halved()),
    )
}

/// `∫dp e^{-ip²t/2m + ipx} e^{-(p-p₀)²/(2σ²)}` by completing the square.
pub fn gaussian_reference(p0: f64, sigma: f64, m: f64, t: f64, x: f64) -> Complex64 {
    let a = Complex64::new(1.0 / (2.0 * sigma * sigma), t / (2.0 * m));
    let b = Complex64::new(p0 / (sigma * sigma), x);
    let c = -p0 * p0 / (2.0 * sigma * sigma);
    (Complex64::new(PI, 0.0) / a).sqrt() * (b * b / (a * 4.0) + c).exp()
}
