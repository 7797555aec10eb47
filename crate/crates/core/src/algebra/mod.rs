mod params;
mod parse;
mod poly;
mod weight;

pub use params::{cartan_entry, Params};
pub use parse::{format_poly, parse_monomial, parse_poly};
pub use poly::{FockPoly, Mode, Monomial, VarId};
pub use weight::{var_weight, weight_of, Weight};
