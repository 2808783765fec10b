//! Complex scalars, polynomials, truncated series and q-special functions.

pub mod linalg;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod special;

pub use poly::{poly_dilate, Polynomial, Var};
pub use roots::poly_roots;
pub use scalar::{c64, Cdd, Field, Precision, QuarterPowers, C64};
pub use series::{series_invert, TruncatedSeries};
pub use special::{
    bracket_function, elementary_symmetric, elementary_symmetric_all, qnumber, qpoch_finite, richardson_extrapolate,
    Extrapolation,
};
