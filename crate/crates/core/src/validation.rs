//! The standard cross-check suite: ten quadrature results compared with the
//! grid oracles.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cosmology::{scale_dwell, time_zero_norm, CosmoParams, CosmoState};
use crate::oracle::{
    grid_norm, grid_povm, grid_scale_dwell, grid_weight, GridSpec, OracleEstimate,
};
use crate::povm::povm_mass;
use crate::wavepacket::{Dispersion, MomentumProfile, Wavepacket};
use crate::weights::{conditional_probability, dwell_weight, weight_time_space};
use crate::{Interval, Result};

/// Relative agreement required between a main-path value and its oracle.
pub const DEFAULT_AGREEMENT: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationCase {
    pub name: String,
    pub value: f64,
    pub oracle: f64,
    /// Change of the oracle under halving of its grid.
    pub oracle_refinement: f64,
    pub relative_error: f64,
    pub passed: bool,
}

fn iv(lo: f64, hi: f64) -> Result<Interval> {
    Interval::new(lo, hi)
}

fn case(name: &str, value: f64, oracle: OracleEstimate, agreement: f64) -> ValidationCase {
    let scale = oracle.value.abs().max(value.abs());
    let relative_error = if scale == 0.0 {
        0.0
    } else {
        (value - oracle.value).abs() / scale
    };
    ValidationCase {
        name: String::from(name),
        value,
        oracle: oracle.value,
        oracle_refinement: oracle.refinement,
        relative_error,
        passed: relative_error <= agreement,
    }
}

fn ratio(num: OracleEstimate, den: OracleEstimate) -> OracleEstimate {
    let value = num.value / den.value;
    OracleEstimate {
        value,
        refinement: value.abs() * (num.relative_refinement() + den.relative_refinement()),
    }
}

/// Run all ten cases at quadrature tolerance `tol`.
pub fn run_validation(tol: f64, agreement: f64) -> Result<Vec<ValidationCase>> {
    let nonrel = Dispersion::nonrelativistic(1.0)?;
    let rel = Dispersion::relativistic(1.0)?;
    let mut out = Vec::with_capacity(10);

    // Space-time weights.
    let gauss = Wavepacket::new(MomentumProfile::gaussian(5.0, 0.5, false)?, nonrel);
    let (i, j) = (iv(0.0, 1.0)?, iv(0.0, 10.0)?);
    let grid = GridSpec::for_profile(&gauss.profile, i, j)?;
    out.push(case(
        "weight gaussian(5,0.5) I=[0,1] J=[0,10]",
        weight_time_space(&gauss, i, j, tol)?,
        grid_weight(&gauss, i, j, &grid),
        agreement,
    ));

    let bump = Wavepacket::new(MomentumProfile::bump(3.0, 1.0)?.translated(-1.0), nonrel);
    let (i, j) = (iv(0.0, 1.0)?, iv(-1.0, 1.0)?);
    let grid = GridSpec::for_profile(&bump.profile, i, j)?;
    out.push(case(
        "weight bump(3,1) x0=-1 I=[0,1] J=[-1,1]",
        weight_time_space(&bump, i, j, tol)?,
        grid_weight(&bump, i, j, &grid),
        agreement,
    ));

    let rel_bump = Wavepacket::new(MomentumProfile::bump(2.0, 0.5)?, rel);
    let (i, j) = (iv(0.0, 2.0)?, iv(-1.0, 1.0)?);
    let grid = GridSpec::for_profile(&rel_bump.profile, i, j)?;
    out.push(case(
        "weight relativistic bump(2,0.5) I=[0,2] J=[-1,1]",
        weight_time_space(&rel_bump, i, j, tol)?,
        grid_weight(&rel_bump, i, j, &grid),
        agreement,
    ));

    // Conditional probability and dwell time; the oracle's infinite time
    // integral is cut where the packet has long left J.
    let (i, j, t_all) = (iv(-1.0, 1.0)?, iv(-0.5, 0.5)?, iv(-8.0, 8.0)?);
    let grid = GridSpec::for_profile(&gauss.profile, t_all, j)?.with_counts(800, 100, 1024)?;
    let num = grid_weight(&gauss, i, j, &grid.with_counts(400, 100, 1024)?);
    let den = grid_weight(&gauss, t_all, j, &grid);
    out.push(case(
        "P(I|J) gaussian(5,0.5) I=[-1,1] J=[-0.5,0.5]",
        conditional_probability(&gauss, i, j, tol)?.value,
        ratio(num, den),
        agreement,
    ));

    let fast = Wavepacket::new(MomentumProfile::bump(5.0, 1.0)?, nonrel);
    let (j, t_all) = (iv(-1.0, 1.0)?, iv(-12.0, 12.0)?);
    let grid = GridSpec::for_profile(&fast.profile, t_all, j)?.with_counts(1200, 200, 1024)?;
    out.push(case(
        "dwell weight bump(5,1) J=[-1,1]",
        dwell_weight(&fast, j, tol)?.value.re,
        grid_weight(&fast, t_all, j, &grid),
        agreement,
    ));

    // Arrival masses.
    let phi = MomentumProfile::bump(5.0, 1.0)?;
    let i = iv(0.0, 0.5)?;
    let grid = GridSpec::new(i, i, 16, 16, phi.support(), 1024)?;
    out.push(case(
        "arrival mass bump(5,1) I=[0,0.5]",
        povm_mass(&phi, nonrel, i, tol)?,
        grid_povm(&phi, nonrel, i, &grid),
        agreement,
    ));

    let phi = MomentumProfile::bump(3.0, 1.0)?.translated(-2.0);
    let i = iv(0.3, 1.0)?;
    let grid = GridSpec::new(i, i, 16, 16, phi.support(), 1024)?;
    out.push(case(
        "arrival mass bump(3,1) x0=-2 I=[0.3,1]",
        povm_mass(&phi, nonrel, i, tol)?,
        grid_povm(&phi, nonrel, i, &grid),
        agreement,
    ));

    let phi = MomentumProfile::bump(2.0, 0.5)?.translated(-1.0);
    let i = iv(0.0, 2.0)?;
    let grid = GridSpec::new(i, i, 16, 16, phi.support(), 1024)?;
    out.push(case(
        "relativistic arrival mass bump(2,0.5) x0=-1 I=[0,2]",
        povm_mass(&phi, rel, i, tol)?,
        grid_povm(&phi, rel, i, &grid),
        agreement,
    ));

    // Scale-factor dwell times at unit coupling.
    let params = CosmoParams::new(1.0)?;
    let single = CosmoState::single_sector(params, MomentumProfile::bump(3.0, 1.0)?, true);
    let (j, phi_range) = (iv(-1.0, 1.0)?, iv(-30.0, 30.0)?);
    let grid = GridSpec::new(phi_range, j, 1200, 200, iv(2.0, 4.0)?, 512)?;
    out.push(case(
        "scale dwell bump(3,1) J=[-1,1]",
        scale_dwell(&single, j, tol)?,
        grid_scale_dwell(&single, j, &grid),
        agreement,
    ));

    let mixed = CosmoState::new(
        params,
        MomentumProfile::bump(2.0, 1.0)?.translated(0.5),
        MomentumProfile::bump(-3.0, 1.0)?.scaled(Complex64::new(0.0, 0.7)),
    );
    let j = iv(-0.5, 1.5)?;
    let grid = GridSpec::new(phi_range, j, 1200, 200, iv(-4.0, 3.0)?, 1024)?;
    let norm_grid = grid_norm(&mixed.plus, &grid).value + grid_norm(&mixed.minus, &grid).value;
    let dwell = grid_scale_dwell(&mixed, j, &grid);
    let norm = time_zero_norm(&mixed, tol)?;
    // Normalize both sides so the case also checks the time-zero norm.
    out.push(case(
        "scale dwell per norm, mixed sectors J=[-0.5,1.5]",
        scale_dwell(&mixed, j, tol)? / norm,
        OracleEstimate {
            value: dwell.value / norm_grid,
            refinement: dwell.refinement / norm_grid,
        },
        agreement,
    ));

    Ok(out)
}

/// `true` when every case passed.
pub fn all_passed(cases: &[ValidationCase]) -> bool {
    cases.iter().all(|c| c.passed)
}
