//! Structure computations for q-commutative power series rings
//! `k_q[[x_1, …, x_n]]` and Laurent series rings `k_q[[x_1^{±1}, …, x_n^{±1}]]`
//! whose commutation parameters are roots of unity.

pub mod coeff;
pub mod commutation;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod report;
pub mod series;
pub mod verify;

pub use coeff::{CoeffField, FieldKind, FieldSpec, Scalar, ScalarRepr};
pub use commutation::{CommutationData, Exponent};
pub use error::{Error, Result};
pub use lattice::{DiagonalVerdict, LatticeBasis, SnfResult};
pub use series::{central_coordinates, Precision, SeriesFile, SeriesRing, SkewSeries};
pub use report::{analyze, Config, StructureReport};
