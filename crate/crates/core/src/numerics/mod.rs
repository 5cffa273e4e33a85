//! Quadrature engine shared by every integral-valued operation.

mod interval;
mod oscillatory;
mod quadrature;

pub use interval::Interval;
pub use oscillatory::{
    j1, one_minus_sinc, oscillatory_time_integral, oscillatory_time_moment, sinc, window_transform,
};
pub(crate) use quadrature::pairwise;
pub use quadrature::{integrate_1d, integrate_2d, QuadResult, Quadrature, DEFAULT_MAX_EVALS};
