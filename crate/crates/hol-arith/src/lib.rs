//! Exact arithmetic substrate: finite fields, polynomials over them, places of
//! the projective line, Laurent polynomials and truncated series, `Q/Z`, and
//! finitely generated abelian groups.

pub mod abelian;
pub mod error;
pub mod fq;
pub mod laurent;
pub mod linalg;
pub mod par;
pub mod place;
pub mod poly;
pub mod ratmodz;

pub use abelian::{smith_form, FgAbelianGroup};
pub use error::{ArithError, Result};
pub use fq::{field_tower, Elem, Embedding, Fq};
pub use laurent::{LPoly, LaurentSeries};
pub use linalg::Echelon;
pub use par::Exec;
pub use place::{places_up_to, Place};
pub use poly::Poly;
pub use ratmodz::{RatModZ, Q};
