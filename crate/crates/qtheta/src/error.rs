//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Exponent is not an integer multiple of 1/grain.
    #[error("exponent {num}/{den} is not representable at grain {grain}")]
    NotRepresentable { num: i64, den: i64, grain: u8 },

    /// Queried a coefficient above the known order.
    #[error("exponent {exp} lies above the known order {order}")]
    AboveOrder { exp: i64, order: i64 },

    /// Inversion of a series whose lowest nonzero coefficient is not a unit.
    #[error("cannot invert: leading coefficient {0} is not a unit")]
    NonUnitLeading(String),

    /// Inversion of the zero series.
    #[error("cannot invert a series with no nonzero coefficient up to its order")]
    ZeroSeries,

    /// An infinite Pochhammer product with base exponent <= 0.
    #[error("infinite product requires base exponent >= 1/grain, got {0}")]
    InfiniteBase(i64),

    /// Demotion to grain 1 of a series with nonzero half-exponent coefficients.
    #[error("series has a nonzero coefficient at half-exponent {0}/2")]
    NotIntegral(i64),

    /// A multiplication whose result would have no known coefficients.
    #[error("order underflow: result order {order} below min exponent {min_exp}")]
    OrderUnderflow { order: i64, min_exp: i64 },

    /// Parameters outside a display's stated range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A specialization under which a stated denominator is not a unit.
    #[error("non-unit denominator: {0}")]
    NonUnitDenominator(String),

    /// A specialization under which a truncated sum does not converge.
    #[error("non-convergent specialization: {0}")]
    NonConvergent(String),

    /// Unknown registry id.
    #[error("unknown id: {0}")]
    UnknownId(String),

    /// Brute-force enumeration asked beyond its ceiling.
    #[error("n = {n} exceeds the brute-force ceiling {ceiling}; use build_table")]
    AboveCeiling { n: i64, ceiling: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
