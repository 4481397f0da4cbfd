//! Exact polarization-adapted Fedosov star products on a coordinate chart.
//!
//! All arithmetic is over ℚ with polynomial coefficients; the formal
//! parameter `lam` is a term attribute and every series is truncated by
//! Fedosov degree `2k + fiber degree`.

pub mod error;
pub mod fedosov;
pub mod geometry;
pub mod report;
pub mod ring;
pub mod samples;
pub mod weyl;

pub use error::{FedosovError, GeometryError, RingError, WeylError};
pub use fedosov::{BidiffTable, Convention, FedosovContext};
pub use geometry::{CurvatureTensor, GeometryData, LeafSpec, TorsionTensor};
pub use report::{CheckReport, Status};
pub use ring::{LambdaSeries, Polynomial, Rational, VarSpace};
pub use weyl::{WeylElement, WeylTerm};
