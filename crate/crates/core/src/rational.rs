//! Exact rational scalars used throughout the crate.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Q = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
