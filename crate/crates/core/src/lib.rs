//! Exact verification engine for generating functions of q-analogues of the
//! Bateman, Pasternack, Sylvester and Cesàro polynomials.
//!
//! Identities are decided by comparing truncated formal power series with
//! exact rational coefficients; the q ↑ 1 limit statements are checked
//! numerically with MPFR floats.

pub mod error;
pub mod families;
pub mod hyper;
pub mod limits;
pub mod numerics;
pub mod properties;
pub mod qcore;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use families::{FamilyId, ParamBinding};
pub use numerics::{parse_rational, BigFloat, Rational};
pub use qcore::QBase;
pub use series::{Comparison, TruncatedSeries};
pub use verify::{verify_all, verify_identity, Mode, ModeSelection, Status, Summary, VerificationReport};
