//! Flat Robertson-Walker minisuperspace with a massless scalar field.
//!
//! After the substitution `p = e^u` the Wheeler-DeWitt constraint becomes a
//! Klein-Gordon equation in `(φ, u)` with frequency `ω_k = κ√(k² + 1/16)`.
//! A state is given by its two frequency-sector amplitudes `φ_±(k)` at
//! `φ = 0`; the solution is
//! `ψ(φ,u) = (2π)^{-1/2} Σ_± ∫dk e^{∓iω_kφ + iku} φ_±(k)`.
//!
//! The scalar field plays the role of time. [`scale_dwell`] is the expected
//! `φ`-duration during which `ln p` lies in `J`, and [`emergent_time_moment`]
//! the mean instant at which `p` passes a given value.

use alloc::format;
use alloc::string::String;

use num_complex::Complex64;
#[allow(unused_imports)]
// float math under no_std; shadowed by inherent methods when std links
use num_traits::Float;

use crate::numerics::oscillatory_time_integral;
use crate::wavepacket::{Dispersion, MomentumProfile};
use crate::{Error, Interval, Result};

/// Coupling `κ = √(16πG/3)`; the only model parameter entering any formula.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CosmoParams {
    kappa: f64,
}

impl Default for CosmoParams {
    fn default() -> Self {
        CosmoParams { kappa: 1.0 }
    }
}

impl CosmoParams {
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa > 0.0 && kappa.is_finite() {
            Ok(CosmoParams { kappa })
        } else {
            Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
            })
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// The fixed mass term of the Klein-Gordon form.
    pub const MASS_TERM: f64 = 1.0 / 16.0;

    pub fn omega(&self, k: f64) -> f64 {
        self.kappa * (k * k + Self::MASS_TERM).sqrt()
    }

    pub fn dispersion(&self) -> Dispersion {
        Dispersion::Cosmological { kappa: self.kappa }
    }
}

/// Sector amplitudes `φ_+` (positive frequency) and `φ_-` at `φ = 0`.
#[derive(Clone, Debug)]
pub struct CosmoState {
    pub params: CosmoParams,
    pub plus: MomentumProfile,
    pub minus: MomentumProfile,
}

impl CosmoState {
    pub fn new(params: CosmoParams, plus: MomentumProfile, minus: MomentumProfile) -> Self {
        CosmoState {
            params,
            plus,
            minus,
        }
    }

    /// A state with only one nonzero sector.
    pub fn single_sector(
        params: CosmoParams,
        phi: MomentumProfile,
        positive_frequency: bool,
    ) -> Self {
        if positive_frequency {
            CosmoState::new(params, phi, MomentumProfile::zero())
        } else {
            CosmoState::new(params, MomentumProfile::zero(), phi)
        }
    }

    /// Both sectors vanish at least linearly at `k = 0`.
    pub fn vanishes_at_zero(&self) -> bool {
        self.plus.vanishes_at_zero() && self.minus.vanishes_at_zero()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        CosmoState::new(self.params, self.plus.scaled(c), self.minus.scaled(c))
    }

    /// `φ_± ↦ e^{-iku₀} φ_±`: the state moved to `u₀ = ln p₀`.
    pub fn translated(&self, u0: f64) -> Self {
        CosmoState::new(
            self.params,
            self.plus.translated(u0),
            self.minus.translated(u0),
        )
    }

    fn sectors(&self) -> [(f64, &MomentumProfile); 2] {
        [(1.0, &self.plus), (-1.0, &self.minus)]
    }

    pub fn describe(&self) -> String {
        format!(
            "kappa={} plus={} minus={}",
            self.params.kappa,
            self.plus.label(),
            self.minus.label()
        )
    }
}

/// Direction of the change of variables between `u` and `p = e^u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `(Vf)(p) = p^{1/4} f(ln p)`.
    Forward,
    /// `(V*g)(u) = e^{-u/4} g(e^u)`.
    Inverse,
}

/// Density of the `p`-space measure `p^{-3/2} dp` in which `V` is unitary:
/// `∫₀^∞ |Vf(p)|² p^{-3/2} dp = ∫ |f(u)|² du`.
pub fn v_measure_density(p: f64) -> f64 {
    p.powf(-1.5)
}

/// `(Vf)(p)`, defined for `p > 0`.
pub fn v_forward(f: &dyn Fn(f64) -> Complex64, p: f64) -> Result<Complex64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::DomainError { p });
    }
    Ok(f(p.ln()) * p.powf(0.25))
}

/// `(V*g)(u)`.
pub fn v_inverse(g: &dyn Fn(f64) -> Complex64, u: f64) -> Complex64 {
    g(u.exp()) * (-0.25 * u).exp()
}

/// Either direction of `V` applied to `f` at `x`.
pub fn v_transform(
    f: &dyn Fn(f64) -> Complex64,
    direction: Direction,
    x: f64,
) -> Result<Complex64> {
    match direction {
        Direction::Forward => v_forward(f, x),
        Direction::Inverse => Ok(v_inverse(f, x)),
    }
}

/// `Σ_± ∫ |φ_±(k)|² dk`.
pub fn time_zero_norm(state: &CosmoState, tol: f64) -> Result<f64> {
    Ok(state.plus.norm_squared(0.5 * tol)? + state.minus.norm_squared(0.5 * tol)?)
}

/// `W_J(k) = ∫_J e^{-2iku} du`; for `J = [-a/2, a/2]` this is `sin(ak)/k`.
pub fn window(j: Interval, k: f64) -> Result<Complex64> {
    oscillatory_time_integral(-2.0 * k, j)
}

/// `Σ_± ∫dk (ω_k/|k|) conj(φ_±(k)) (|J| φ_±(k) + W_J(k) φ_±(-k))`.
///
/// The flux weight `ω_k/|k|` is taken as written in the closed-form
/// reduction. A direct `∫_J du ∫dφ |ψ|²` of the solution gives the same
/// expression with `ω_k/(κ²|k|)`; the two agree at `κ = 1`.
pub fn scale_dwell(state: &CosmoState, j: Interval, tol: f64) -> Result<f64> {
    if !j.is_bounded() {
        return Err(Error::UnboundedInterval);
    }
    if !state.vanishes_at_zero() {
        return Err(Error::NotInLeftIdeal {
            reason: "sector amplitude does not vanish at k = 0",
        });
    }
    if j.is_empty() || j.length() == 0.0 {
        return Ok(0.0);
    }
    let len = j.length();
    let params = state.params;
    let mut total = 0.0;
    for (_, phi) in state.sectors() {
        let r = phi.integrate(
            |k, a| {
                if a == Complex64::new(0.0, 0.0) {
                    return a;
                }
                let w = window(j, k).unwrap_or_default();
                a.conj() * (a * len + w * phi.eval(-k)) * (params.omega(k) / k.abs())
            },
            0.5 * tol,
        )?;
        total += r.value.re;
    }
    if total < -tol {
        return Err(Error::NegativeValue { value: total });
    }
    Ok(total.max(0.0))
}

/// `Σ_± ±∫ (ω_k/k) |φ_±|² dk / ⟨φ|φ⟩`: the mean of the frequency-signed
/// inverse velocity, and the slope of the emergent time in `ln p`.
pub fn mean_signed_inverse_velocity(state: &CosmoState, tol: f64) -> Result<f64> {
    if !state.vanishes_at_zero() {
        return Err(Error::SingularWeight);
    }
    let norm = time_zero_norm(state, tol)?;
    if norm == 0.0 {
        return Err(Error::ZeroCondition { weight: 0.0 });
    }
    let params = state.params;
    let mut acc = 0.0;
    for (sign, phi) in state.sectors() {
        let r = phi.integrate(
            |k, a| Complex64::new(sign * params.omega(k) / k * a.norm_sqr(), 0.0),
            0.5 * tol * norm,
        )?;
        acc += r.value.re;
    }
    Ok(acc / norm)
}

/// `Σ_± ∫ (ω_k/|k|) |φ_±|² dk / ⟨φ|φ⟩`: the large-`J` limit of
/// `scale_dwell(J) / |J|`.
pub fn mean_inverse_speed(state: &CosmoState, tol: f64) -> Result<f64> {
    if !state.vanishes_at_zero() {
        return Err(Error::SingularWeight);
    }
    let norm = time_zero_norm(state, tol)?;
    if norm == 0.0 {
        return Err(Error::ZeroCondition { weight: 0.0 });
    }
    let params = state.params;
    let mut acc = 0.0;
    for (_, phi) in state.sectors() {
        let r = phi.integrate(
            |k, a| Complex64::new(params.omega(k) / k.abs() * a.norm_sqr(), 0.0),
            0.5 * tol * norm,
        )?;
        acc += r.value.re;
    }
    Ok(acc / norm)
}

/// Mean emergent time at which the scale parameter equals `p_scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmergentTime {
    pub p_scale: f64,
    /// `⟨T_1⟩`, the instant at which `p = 1`.
    pub at_unit_scale: f64,
    /// `⟨ω/k⟩`.
    pub slope: f64,
    /// `⟨T_p⟩ = ⟨T_1⟩ + ln p · ⟨ω/k⟩`.
    pub value: f64,
}

/// `⟨T_1⟩ = Re Σ_± ⟨φ_±| ±½(g u + u g) φ_±⟩ / ⟨φ|φ⟩` with `g = ω_k/k`,
/// `u = i d/dk`. Only the symmetric part survives, so this reduces to
/// `-Σ_± ±∫ g Im(conj(φ_±) φ_±') dk / ⟨φ|φ⟩`.
pub fn unit_scale_time(state: &CosmoState, tol: f64) -> Result<f64> {
    if !state.vanishes_at_zero() {
        return Err(Error::SingularWeight);
    }
    let norm = time_zero_norm(state, tol)?;
    if norm == 0.0 {
        return Err(Error::ZeroCondition { weight: 0.0 });
    }
    let params = state.params;
    let mut acc = 0.0;
    for (sign, phi) in state.sectors() {
        let r = phi.integrate(
            |k, a| {
                if a == Complex64::new(0.0, 0.0) {
                    return a;
                }
                let g = params.omega(k) / k;
                Complex64::new(-sign * g * (a.conj() * phi.derivative(k)).im, 0.0)
            },
            0.5 * tol * norm,
        )?;
        acc += r.value.re;
    }
    Ok(acc / norm)
}

/// `⟨T_p⟩` for `p = p_scale`, obtained from `⟨T_1⟩` by covariance under
/// `u ↦ u - ln p`.
pub fn emergent_time_moment(state: &CosmoState, p_scale: f64, tol: f64) -> Result<EmergentTime> {
    if !(p_scale > 0.0) || !p_scale.is_finite() {
        return Err(Error::DomainError { p: p_scale });
    }
    let at_unit_scale = unit_scale_time(state, tol)?;
    let slope = mean_signed_inverse_velocity(state, tol)?;
    Ok(EmergentTime {
        p_scale,
        at_unit_scale,
        slope,
        value: at_unit_scale + p_scale.ln() * slope,
    })
}

/// Split into expanding (`k/ω > 0`) and contracting (`k/ω < 0`) parts:
/// `φ_+` on `k > 0` and `φ_-` on `k < 0` expand.
pub fn branch_decompose(state: &CosmoState) -> (CosmoState, CosmoState) {
    let pos = Interval::new(0.0, f64::INFINITY).expect("half-line");
    let neg = Interval::new(f64::NEG_INFINITY, 0.0).expect("half-line");
    let expanding = CosmoState::new(
        state.params,
        state.plus.restricted(pos),
        state.minus.restricted(neg),
    );
    let contracting = CosmoState::new(
        state.params,
        state.plus.restricted(neg),
        state.minus.restricted(pos),
    );
    (expanding, contracting)
}
