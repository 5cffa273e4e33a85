use crate::numerics::QuadResult;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error(
        "quadrature did not converge: best estimate {} with error {:e} after {} evaluations",
        .0.value, .0.abs_error, .0.evaluations
    )]
    NonConvergence(QuadResult),

    #[error("integrand returned a non-finite value at x = {x}, y = {y:?}")]
    NonFiniteSample { x: f64, y: Option<f64> },

    #[error("interval must be bounded for this operation")]
    UnboundedInterval,

    #[error("weight evaluated to a negative value {value:e}")]
    NegativeValue { value: f64 },

    #[error("operator is not in the left ideal of the weight: {reason}")]
    NotInLeftIdeal { reason: &'static str },

    #[error("conditioning event has vanishing weight {weight:e}")]
    ZeroCondition { weight: f64 },

    #[error("spatial region has zero length; use the arrival POVM instead")]
    DegenerateRegion,

    #[error("bilinear form is not Hermitian: imaginary part {imaginary:e}")]
    HermiticityViolation { imaginary: f64 },

    #[error(
        "inverse-velocity weighted integral diverges: amplitude does not vanish at zero momentum"
    )]
    SingularWeight,

    #[error("time window {required:e} needed for the slowest occupied momentum to leave the region exceeds the limit {limit:e}")]
    TimeWindowTooLong { required: f64, limit: f64 },

    #[error("unitary map evaluated outside its domain at p = {p}")]
    DomainError { p: f64 },
}
