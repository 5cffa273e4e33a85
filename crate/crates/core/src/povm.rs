//! Time-of-arrival measures.
//!
//! Conditioning on a shrinking region `J = [-a/2, a/2]` around the origin
//! turns `P(I|J)` into a positive operator valued measure `P_a` on the time
//! axis. Its limit `P₀` has the momentum kernel
//!
//! `P₀(I)(p,q) = √(|v(p)| |v(q)|)/(2π) ∫_I e^{i(E(p)-E(q))t} dt` for `pq > 0`
//!
//! and zero otherwise. Masses are reported for the state normalized by
//! `∫|φ|² dp`, the norm in which this kernel is complete. The first moment of
//! `P₀` is the expectation of the Aharonov-Bohm time operator
//! `T = -½(v⁻¹x + xv⁻¹)`, `x = i d/dp`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
// float math under no_std; shadowed by inherent methods when std links
use num_traits::Float;

use crate::bilinear::{pair_form, square_integral, Half};
use crate::numerics::{
    one_minus_sinc, oscillatory_time_integral, oscillatory_time_moment, pairwise, sinc, QuadResult,
    Quadrature,
};
use crate::wavepacket::{even_odd_decompose, Dispersion, MomentumProfile, Wavepacket};
use crate::{Error, Interval, Result};

const POSITIVE: Interval = Interval::raw(0.0, f64::INFINITY);
const NEGATIVE: Interval = Interval::raw(f64::NEG_INFINITY, 0.0);

/// Evaluation budget of [`povm_mass`] and of each arrival bin. Long intervals make the kernel
/// oscillate across the whole momentum square and the cost grows like
/// `|I|²`.
pub const MASS_MAX_EVALS: usize = 20_000_000;

/// The arrival kernel `P₀(I)(p,q)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArrivalKernel {
    pub dispersion: Dispersion,
}

impl ArrivalKernel {
    pub fn new(dispersion: Dispersion) -> Self {
        ArrivalKernel { dispersion }
    }

    /// `√(|v(p)v(q)|)/(2π)` on the same-sign sectors, zero across them.
    pub fn flux_factor(&self, p: f64, q: f64) -> f64 {
        if p * q <= 0.0 {
            return 0.0;
        }
        let d = self.dispersion;
        (d.group_velocity(p) * d.group_velocity(q)).abs().sqrt() / (2.0 * PI)
    }

    pub fn kernel(&self, p: f64, q: f64, i: Interval) -> Result<Complex64> {
        let f = self.flux_factor(p, q);
        if f == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(oscillatory_time_integral(self.dispersion.energy_difference(p, q), i)? * f)
    }

    /// Kernel of `∫_I t dP₀(t)`.
    pub fn moment_kernel(&self, p: f64, q: f64, i: Interval) -> Result<Complex64> {
        let f = self.flux_factor(p, q);
        if f == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(oscillatory_time_moment(self.dispersion.energy_difference(p, q), i)? * f)
    }
}

fn profile_norm(phi: &MomentumProfile, tol: f64) -> Result<f64> {
    let n = phi.norm_squared(tol)?;
    if n <= 0.0 {
        return Err(Error::ZeroCondition { weight: n });
    }
    Ok(n)
}

/// `⟨φ|P₀(I)|φ⟩ / ∫|φ|²`.
///
/// `I = ℝ` is evaluated by reducing the time integral to `2πδ(E(p)-E(q))`,
/// which gives the total mass; half-lines are rejected.
pub fn povm_mass(phi: &MomentumProfile, disp: Dispersion, i: Interval, tol: f64) -> Result<f64> {
    if i.is_empty() || i.length() == 0.0 {
        return Ok(0.0);
    }
    if i.is_real_line() {
        return povm_total_mass(phi, disp, tol);
    }
    if !i.is_bounded() {
        return Err(Error::UnboundedInterval);
    }
    let n = profile_norm(phi, 1e-3 * tol)?;
    let kernel = ArrivalKernel::new(disp);
    let q = Quadrature::new(0.25 * tol * n).with_max_evals(MASS_MAX_EVALS);
    let mut total = Complex64::new(0.0, 0.0);
    for sector in [NEGATIVE, POSITIVE] {
        let r = pair_form(
            phi,
            sector,
            |p, q| kernel.kernel(p, q, i).unwrap_or_default(),
            &q,
        )?;
        total += r.value;
    }
    let mass = total / n;
    if mass.im.abs() > 10.0 * tol {
        return Err(Error::HermiticityViolation { imaginary: mass.im });
    }
    Ok(mass.re)
}

/// `⟨φ|P₀(ℝ)|φ⟩ / ∫|φ|²`: on each sector the time integral becomes
/// `2πδ(p-q)/|v(p)|`, which cancels the flux factor on the diagonal.
pub fn povm_total_mass(phi: &MomentumProfile, disp: Dispersion, tol: f64) -> Result<f64> {
    let n = profile_norm(phi, 1e-3 * tol)?;
    let kernel = ArrivalKernel::new(disp);
    let r = phi.integrate(
        |p, a| {
            if p == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(
                kernel.flux_factor(p, p) * 2.0 * PI * disp.inverse_speed(p) * a.norm_sqr(),
                0.0,
            )
        },
        0.5 * tol * n,
    )?;
    Ok(r.value.re / n)
}

/// Arrival probabilities on a set of disjoint time bins.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrivalDistribution {
    pub bins: Vec<(Interval, f64)>,
    /// Sum of the bin masses.
    pub total_mass: f64,
    /// `∫ t dP₀` over the bins divided by `total_mass`, with the time
    /// integral done exactly inside every bin.
    pub first_moment: f64,
}

impl ArrivalDistribution {
    pub fn masses(&self) -> impl Iterator<Item = f64> + '_ {
        self.bins.iter().map(|b| b.1)
    }

    /// The same distribution with every bin reflected `t ↦ -t`, in
    /// increasing order.
    pub fn reflected(&self) -> ArrivalDistribution {
        let mut bins: Vec<(Interval, f64)> =
            self.bins.iter().map(|(b, m)| (b.reflected(), *m)).collect();
        bins.reverse();
        ArrivalDistribution {
            bins,
            total_mass: self.total_mass,
            first_moment: -self.first_moment,
        }
    }
}

fn check_disjoint(partition: &[Interval]) -> Result<()> {
    let mut sorted: Vec<Interval> = partition
        .iter()
        .copied()
        .filter(|b| !b.is_empty())
        .collect();
    sorted.sort_by(|a, b| a.lo().total_cmp(&b.lo()));
    for w in sorted.windows(2) {
        if !w[0].is_disjoint(&w[1]) {
            return Err(Error::InvalidInterval {
                lo: w[1].lo(),
                hi: w[0].hi(),
            });
        }
    }
    for b in &sorted {
        if !b.is_bounded() {
            return Err(Error::UnboundedInterval);
        }
    }
    Ok(())
}

/// Mass and first moment of one bin, unnormalized.
///
/// The kernel is Hermitian, so the full double integral is twice the real
/// part of the half with `p > q`. Mass and moment are carried as the real
/// and imaginary parts of a single integrand so that both come from one
/// adaptive pass.
fn bin_mass_and_moment(
    phi: &MomentumProfile,
    kernel: &ArrivalKernel,
    bin: Interval,
    q: &Quadrature,
) -> Result<(f64, f64, f64)> {
    if bin.is_empty() || bin.length() == 0.0 {
        return Ok((0.0, 0.0, 0.0));
    }
    let mut mass = 0.0;
    let mut moment = 0.0;
    let mut err = 0.0;
    for sector in [NEGATIVE, POSITIVE] {
        let r = upper_half_form(phi, sector, q, |p, qq| {
            let m = kernel.kernel(p, qq, bin).unwrap_or_default();
            let t = kernel.moment_kernel(p, qq, bin).unwrap_or_default();
            (m, t)
        })?;
        mass += 2.0 * r.value.re;
        moment += 2.0 * r.value.im;
        err += 2.0 * r.abs_error;
    }
    Ok((mass, moment, err))
}

/// `∬_{p>q} Re(conj φ(p) K₁ φ(q)) + i Re(conj φ(p) K₂ φ(q))` over a sector.
fn upper_half_form<K>(
    phi: &MomentumProfile,
    sector: Interval,
    quad: &Quadrature,
    kernels: K,
) -> Result<QuadResult>
where
    K: Fn(f64, f64) -> (Complex64, Complex64),
{
    let region = phi.support().intersection(&sector);
    square_integral(
        phi,
        region,
        Half::Upper,
        |a, p, q, b| {
            let ab = a.conj() * b;
            let (k1, k2) = kernels(p, q);
            Complex64::new((ab * k1).re, (ab * k2).re)
        },
        quad,
    )
}

/// Masses of `P₀` on each bin of a disjoint partition, and the first moment
/// of the distribution restricted to the bins.
pub fn arrival_distribution(
    phi: &MomentumProfile,
    disp: Dispersion,
    partition: &[Interval],
    tol: f64,
) -> Result<ArrivalDistribution> {
    check_disjoint(partition)?;
    let n = profile_norm(phi, 1e-3 * tol)?;
    let kernel = ArrivalKernel::new(disp);
    let q = Quadrature::new(0.25 * tol * n).with_max_evals(MASS_MAX_EVALS);
    let mut bins = Vec::with_capacity(partition.len());
    let mut moments = Vec::with_capacity(partition.len());
    for &bin in partition {
        let (m, t, _) = bin_mass_and_moment(phi, &kernel, bin, &q)?;
        bins.push((bin, m / n));
        moments.push(t / n);
    }
    let masses: Vec<f64> = bins.iter().map(|b| b.1).collect();
    let total_mass = pairwise(&masses);
    let first_moment = if total_mass > 0.0 {
        pairwise(&moments) / total_mass
    } else {
        0.0
    };
    Ok(ArrivalDistribution {
        bins,
        total_mass,
        first_moment,
    })
}

/// A time range centred on the Aharonov-Bohm mean that carries at least
/// `1 - tail` of the arrival mass. The half-width starts at the time a
/// packet-width takes to pass at the slowest occupied speed and doubles
/// until the mass is reached.
pub fn auto_range(
    phi: &MomentumProfile,
    disp: Dispersion,
    tail: f64,
    tol: f64,
) -> Result<Interval> {
    if !(tail > 0.0 && tail < 1.0) {
        return Err(Error::InvalidParameter {
            name: "tail",
            value: tail,
        });
    }
    let center = ab_time_moment(phi, disp, tol)?;
    let wp = Wavepacket::new(phi.clone(), disp);
    let (_, spread) = wp.position_moments(tol)?;
    let (v_min, _) = wp.speed_range();
    let mut half = (spread / v_min).max(1e-3);
    let total = povm_total_mass(phi, disp, tol)?;
    for _ in 0..40 {
        let range = Interval::new(center - half, center + half)?;
        if povm_mass(phi, disp, range, tol)? >= total - tail {
            return Ok(range);
        }
        half *= 2.0;
    }
    Err(Error::NonConvergence(QuadResult {
        value: Complex64::new(half, 0.0),
        abs_error: f64::INFINITY,
        converged: false,
        evaluations: 0,
    }))
}

/// `⟨φ|Tφ⟩/⟨φ|φ⟩` for `T = -½(v⁻¹x + xv⁻¹)`, `x = i d/dp`.
///
/// `v⁻¹` is `m/p` for the nonrelativistic and `√(p²+m²)/p` for the
/// relativistic dispersion. The anti-Hermitian part of the pairing drops
/// out and what remains is `∫ v⁻¹ Im(conj(φ) φ') dp / ∫|φ|²`, so a state
/// `e^{-ipx₀}φ₀` with real `φ₀` gives `-x₀⟨v⁻¹⟩`.
pub fn ab_time_moment(phi: &MomentumProfile, disp: Dispersion, tol: f64) -> Result<f64> {
    if !phi.vanishes_at_zero() {
        return Err(Error::SingularWeight);
    }
    let n = profile_norm(phi, 1e-3 * tol)?;
    let r = phi.integrate(
        |p, a| {
            if a == Complex64::new(0.0, 0.0) {
                return a;
            }
            let slowness = 1.0 / disp.group_velocity(p);
            Complex64::new(slowness * (a.conj() * phi.derivative(p)).im, 0.0)
        },
        0.5 * tol * n,
    )?;
    Ok(r.value.re / n)
}

/// `(a ± sin(ap)/p)^{-1/2} √|v(p)|` applied to the even and odd parts.
fn aperture_components(
    phi: &MomentumProfile,
    disp: Dispersion,
    a: f64,
) -> (MomentumProfile, MomentumProfile) {
    let (even, odd) = even_odd_decompose(phi);
    let plus = {
        let e = even.clone();
        MomentumProfile::new("aperture+", e.support(), move |p| {
            let w = a + a * sinc(a * p);
            e.eval(p) * (disp.group_velocity(p).abs() / w).sqrt()
        })
    };
    let minus = {
        let o = odd.clone();
        MomentumProfile::new("aperture-", o.support(), move |p| {
            let v = o.eval(p);
            if v == Complex64::new(0.0, 0.0) {
                return v;
            }
            let w = a * one_minus_sinc(a * p);
            v * (disp.group_velocity(p).abs() / w).sqrt()
        })
    };
    (plus, minus)
}

/// `⟨φ|Φ_a(E_T(I))|φ⟩` for the aperture `J = [-a/2, a/2]`, normalized so
/// that `I = ℝ` gives 1.
///
/// The even and odd parts `φ_±` are mapped to
/// `χ_± = √|v| (a ± sin(ap)/p)^{-1/2} φ_±`, and the time-space weight of
/// `χ = χ_+ + χ_-` is folded onto `p, q > 0` using parity:
///
/// `2 Σ_± ∬ conj(χ_±(p)) χ_±(q) (w(p-q) ± w(p+q)) ∫_I e^{i(E(p)-E(q))t} dt`,
///
/// with `w(k) = ∫_J e^{-ikx} dx = a sinc(ka/2)`, divided by `2π∫|φ|²`.
pub fn finite_aperture_mass(
    phi: &MomentumProfile,
    disp: Dispersion,
    a: f64,
    i: Interval,
    tol: f64,
) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter {
            name: "aperture",
            value: a,
        });
    }
    if !phi.vanishes_at_zero() {
        return Err(Error::NotInLeftIdeal {
            reason: "momentum amplitude does not vanish at p = 0",
        });
    }
    if i.is_empty() || i.length() == 0.0 {
        return Ok(0.0);
    }
    if !(i.is_bounded() || i.is_real_line()) {
        return Err(Error::UnboundedInterval);
    }
    let n = profile_norm(phi, 1e-3 * tol)?;
    let (plus, minus) = aperture_components(phi, disp, a);
    let w = |k: f64| a * sinc(0.5 * k * a);
    let scale = 2.0 * PI * n;
    if i.is_real_line() {
        // 2πδ(E(p)-E(q)) = 2πδ(p-q)/|v| on p, q > 0.
        let mut total = 0.0;
        for (sign, chi) in [(1.0, &plus), (-1.0, &minus)] {
            let r = chi.integrate(
                |p, c| {
                    if p <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    Complex64::new(
                        2.0 * c.norm_sqr()
                            * (a + sign * w(2.0 * p))
                            * 2.0
                            * PI
                            * disp.inverse_speed(p),
                        0.0,
                    )
                },
                0.25 * tol * scale,
            )?;
            total += r.value.re;
        }
        return Ok(total / scale);
    }
    let q = Quadrature::new(0.25 * tol * scale);
    let mut total = Complex64::new(0.0, 0.0);
    for (sign, chi) in [(1.0, &plus), (-1.0, &minus)] {
        let r = pair_form(
            chi,
            POSITIVE,
            |p, qq| {
                let t =
                    oscillatory_time_integral(disp.energy_difference(p, qq), i).unwrap_or_default();
                t * (2.0 * (w(p - qq) + sign * w(p + qq)))
            },
            &q,
        )?;
        total += r.value;
    }
    let mass = total / scale;
    if mass.im.abs() > 10.0 * tol {
        return Err(Error::HermiticityViolation { imaginary: mass.im });
    }
    Ok(mass.re)
}
