//! Exact rational scalars and their string encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_factorial(n: u64) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Q::from_integer(acc)
}

pub fn is_integral(v: &Q) -> bool {
    v.denom().is_one()
}

pub fn q_pow(v: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow(v.clone(), e as usize)
    } else {
        num_traits::pow(v.recip(), (-e) as usize)
    }
}

/// A rational written as decimal numerator and denominator strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&Q> for RationalRepr {
    fn from(v: &Q) -> Self {
        RationalRepr {
            num: v.numer().to_string(),
            den: v.denom().to_string(),
        }
    }
}

impl RationalRepr {
    pub fn to_q(&self) -> Option<Q> {
        let n: BigInt = self.num.parse().ok()?;
        let d: BigInt = self.den.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    }
}

/// `a/b` or `a` when the denominator is one.
pub fn fmt_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn abs(v: &Q) -> Q {
    v.abs()
}
