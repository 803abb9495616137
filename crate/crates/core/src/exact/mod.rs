//! Exact arithmetic: rationals, real algebraic number fields, polynomials,
//! elimination and linear algebra.

pub mod algebraic;
pub mod bipoly;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod rationalize;
pub mod roots;

pub use algebraic::{Alg, FieldRef, NumberField};
pub use bipoly::BiPoly;
pub use field::{format_rational, parse_rational, rat, Field, Ring};
pub use poly::{Poly, RatPoly};
pub use rationalize::rationalize;
