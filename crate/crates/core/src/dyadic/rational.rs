use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Real;

/// Exact dyadic rational `num / 2^exp`, kept in lowest terms
/// (`num` odd, or `exp == 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    pub fn new(num: i64, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn integer(num: i64) -> Self {
        Dyadic { num, exp: 0 }
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().min(self.exp);
        self.num >>= tz;
        self.exp -= tz;
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    /// Exponent `t` of the denominator `2^t`.
    pub fn denominator_exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn abs(self) -> Self {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    /// Halves the value exactly.
    pub fn half(self) -> Self {
        Dyadic::new(self.num, self.exp + 1)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 * (-(self.exp as f64)).exp2()
    }

    pub fn to_real<T: Real>(self) -> T {
        T::from_f64_lossy(self.to_f64())
    }

    /// Exact conversion from an `f64` that happens to be a dyadic rational
    /// with a small enough numerator.
    pub fn from_f64_exact(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        for exp in 0..=62u32 {
            let scaled = v * (exp as f64).exp2();
            if scaled.fract() == 0.0 && scaled.abs() < 9.0e15 {
                return Some(Dyadic::new(scaled as i64, exp));
            }
        }
        None
    }

    fn aligned(self, other: Self) -> (i128, i128, u32) {
        let exp = self.exp.max(other.exp);
        let a = (self.num as i128) << (exp - self.exp);
        let b = (other.num as i128) << (exp - other.exp);
        (a, b, exp)
    }

    fn from_i128(num: i128, exp: u32) -> Self {
        let mut num = num;
        let mut exp = exp;
        while num != 0 && exp > 0 && num % 2 == 0 {
            num /= 2;
            exp -= 1;
        }
        Dyadic::new(i64::try_from(num).expect("dyadic numerator overflow"), exp)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::ZERO
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, exp) = self.aligned(rhs);
        Dyadic::from_i128(a + b, exp)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num, exp: self.exp }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::from_i128(self.num as i128 * rhs.num as i128, self.exp + rhs.exp)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(*other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.exp)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDyadicError(pub String);

impl fmt::Display for ParseDyadicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid dyadic rational `{}`", self.0)
    }
}

impl std::error::Error for ParseDyadicError {}

impl FromStr for Dyadic {
    type Err = ParseDyadicError;

    /// Accepts `n`, `n/d` with `d` a power of two, or a decimal literal that
    /// is exactly dyadic (`0.375`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDyadicError(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num: i64 = n.trim().parse().map_err(|_| err())?;
            let den: u64 = d.trim().parse().map_err(|_| err())?;
            if den == 0 || !den.is_power_of_two() {
                return Err(err());
            }
            return Ok(Dyadic::new(num, den.trailing_zeros()));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(Dyadic::integer(n));
        }
        // decimal literal: n / 10^d is dyadic iff 5^d divides n
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').ok_or_else(err)?;
        if frac.len() > 20 || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits: i128 = format!("{int}{frac}").parse().map_err(|_| err())?;
        let five = 5i128.pow(frac.len() as u32);
        if digits % five != 0 {
            return Err(err());
        }
        let num = i64::try_from(digits / five).map_err(|_| err())?;
        Ok(Dyadic::new(if neg { -num } else { num }, frac.len() as u32))
    }
}

impl TryFrom<String> for Dyadic {
    type Error = ParseDyadicError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Dyadic> for String {
    fn from(d: Dyadic) -> String {
        d.to_string()
    }
}
