pub mod gcd;
pub mod grat;
pub mod matrix;
pub mod poly;
pub mod ratfun;
pub mod series;
pub mod upoly;

pub use grat::{int, parse_rational, rat, GRat};
pub use poly::{Monomial, Poly};
pub use ratfun::RationalFunction;
pub use series::HermSeries;
pub use upoly::UPoly;
