//! Laurent polynomials in `t`, rational polynomials in `x, y, z, u`, and
//! numerical root finding.

mod laurent;
mod multi;
mod roots;

pub use laurent::{rational_degree, LaurentPoly};
pub use multi::{Exponent, MultiPoly, U, VARIABLES, X, Y, Z};
pub use roots::poly_roots;
