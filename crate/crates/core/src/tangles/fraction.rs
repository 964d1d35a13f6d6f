use std::fmt;
use std::ops::{Add, Neg};
use std::str::FromStr;

use num_integer::Integer;

use super::TangleError;

/// A reduced element of `ℚ ∪ {∞}`; `1/0` is `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub const INFINITY: Fraction = Fraction { num: 1, den: 0 };
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };

    /// Exact constructor: the pair must already be reduced with `den ≥ 0`.
    pub fn new(num: i64, den: i64) -> Result<Self, TangleError> {
        if den < 0 || (num == 0 && den == 0) || num.gcd(&den) != 1 || (den == 0 && num != 1) {
            return Err(TangleError::NotReduced(num, den));
        }
        Ok(Fraction { num, den })
    }

    /// Reduces any nonzero pair.
    pub fn reduced(num: i64, den: i64) -> Result<Self, TangleError> {
        Self::from_i128(num as i128, den as i128)
    }

    pub(crate) fn from_i128(num: i128, den: i128) -> Result<Self, TangleError> {
        if num == 0 && den == 0 {
            return Err(TangleError::NotReduced(0, 0));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 || (d == 0 && n < 0) {
            n = -n;
            d = -d;
        }
        Ok(Fraction {
            num: i64::try_from(n).map_err(|_| TangleError::Overflow)?,
            den: i64::try_from(d).map_err(|_| TangleError::Overflow)?,
        })
    }

    pub fn integer(n: i64) -> Self {
        Fraction { num: n, den: 1 }
    }

    /// `1/n`, the slope of a box of `n` vertical half twists.
    pub fn unit(n: i64) -> Self {
        match n {
            0 => Fraction::INFINITY,
            n if n < 0 => Fraction { num: -1, den: -n },
            n => Fraction { num: 1, den: n },
        }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn reciprocal(self) -> Self {
        if self.num < 0 {
            Fraction {
                num: -self.den,
                den: -self.num,
            }
        } else if self.num == 0 {
            Fraction::INFINITY
        } else {
            Fraction {
                num: self.den,
                den: self.num,
            }
        }
    }
}

impl Neg for Fraction {
    type Output = Fraction;

    fn neg(self) -> Fraction {
        if self.den == 0 {
            self
        } else {
            Fraction {
                num: -self.num,
                den: self.den,
            }
        }
    }
}

impl Add for Fraction {
    type Output = Result<Fraction, TangleError>;

    /// `∞ + x = ∞`; finite sums are exact.
    fn add(self, rhs: Fraction) -> Self::Output {
        if self.den == 0 || rhs.den == 0 {
            return Ok(Fraction::INFINITY);
        }
        let num = self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128;
        let den = self.den as i128 * rhs.den as i128;
        Fraction::from_i128(num, den)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den {
            0 => write!(f, "inf"),
            1 => write!(f, "{}", self.num),
            d => write!(f, "{}/{}", self.num, d),
        }
    }
}

impl FromStr for Fraction {
    type Err = TangleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parser::parse_fraction(s)
    }
}

/// Evaluates `a_1 + 1/(a_2 + 1/(… + 1/a_n))` exactly.
pub fn cf_eval(coeffs: &[i64]) -> Result<Fraction, TangleError> {
    let (&last, rest) = coeffs.split_last().ok_or(TangleError::EmptyContinuedFraction)?;
    let (mut num, mut den) = (last as i128, 1i128);
    for (depth, &a) in rest.iter().enumerate().rev() {
        if num == 0 {
            return Err(TangleError::DegenerateContinuedFraction(depth + 1));
        }
        // a + den/num
        let next = a as i128 * num + den;
        den = num;
        num = next;
        if num.unsigned_abs() > i64::MAX as u128 || den.unsigned_abs() > i64::MAX as u128 {
            return Err(TangleError::Overflow);
        }
    }
    Fraction::from_i128(num, den)
}

/// Euclidean expansion; every coefficient after the first is positive.
pub fn fraction_to_cf(f: Fraction) -> Result<Vec<i64>, TangleError> {
    if f.is_infinite() {
        return Err(TangleError::InfiniteFraction);
    }
    let (mut n, mut d) = (f.num, f.den);
    let mut out = Vec::new();
    while d != 0 {
        let q = Integer::div_floor(&n, &d);
        out.push(q);
        (n, d) = (d, n - q * d);
    }
    Ok(out)
}
