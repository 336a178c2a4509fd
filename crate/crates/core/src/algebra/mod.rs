//! Exact arithmetic core: Gaussian rationals, sparse polynomials, the text
//! grammar, resultants and small dense linear algebra.

pub mod gaussian;
pub mod linalg;
pub(crate) mod parse;
pub mod poly;
pub mod univariate;

pub use gaussian::GaussianRational;
pub use parse::valid_name;
pub use poly::{var_names, Monomial, MultiPoly};
pub use univariate::{resultant, resultant_in, UniPolyView};

/// Parses `text` over the ordered variable list.
pub fn parse_poly(text: &str, variables: &[String]) -> crate::Result<MultiPoly> {
    MultiPoly::parse(text, variables)
}
