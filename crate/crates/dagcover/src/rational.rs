//! Exact nonnegative rationals for level diameters.
//!
//! Level diameters have the form `nW / 2^{i+1}` and must be compared exactly
//! against integer distances; floating point would round precisely where the
//! `d < 1` cutoff is load-bearing. Intermediate products use `u128`, so any
//! numerator/denominator up to `u64` is safe.

use std::cmp::Ordering;
use std::fmt;

/// A nonnegative rational `num/den` kept in lowest terms, `den >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl Rational {
    /// Builds `num/den`, reducing to lowest terms. Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        Rational { num: num / g, den: den / g }
    }

    pub fn from_int(v: u64) -> Self {
        Rational { num: v, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `ceil(num/den)` as an integer.
    pub fn ceil(&self) -> u64 {
        self.num.div_ceil(self.den)
    }

    /// `floor(num/den)` as an integer.
    pub fn floor(&self) -> u64 {
        self.num / self.den
    }

    /// Exact product by an integer.
    pub fn mul_int(&self, k: u64) -> Self {
        Rational::new(self.num.checked_mul(k).expect("rational overflow"), self.den)
    }

    /// Exact quotient by an integer. Panics if `k == 0`.
    pub fn div_int(&self, k: u64) -> Self {
        assert!(k != 0, "division by zero");
        Rational::new(self.num, self.den.checked_mul(k).expect("rational overflow"))
    }

    /// Nearest `f64`, for radius-probability computations only.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialEq<u64> for Rational {
    fn eq(&self, other: &u64) -> bool {
        self.den == 1 && self.num == *other
    }
}

impl PartialOrd<u64> for Rational {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some((self.num as u128).cmp(&(*other as u128 * self.den as u128)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

// Debug mirrors Display; a reduced fraction is already the clearest form.
impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_compares() {
        let a = Rational::new(4, 8);
        assert_eq!(a.num(), 1);
        assert_eq!(a.den(), 2);
        assert!(a < Rational::from_int(1));
        assert!(Rational::new(3, 2) > 1u64);
        assert!(Rational::new(2, 2) == 1u64);
        assert!(Rational::new(7, 2) < 4u64);
    }

    #[test]
    fn ceil_floor() {
        assert_eq!(Rational::new(7, 2).ceil(), 4);
        assert_eq!(Rational::new(7, 2).floor(), 3);
        assert_eq!(Rational::new(8, 2).ceil(), 4);
        assert_eq!(Rational::new(1, 2).ceil(), 1);
        assert_eq!(Rational::new(1, 2).floor(), 0);
        assert_eq!(Rational::new(0, 5).ceil(), 0);
    }

    #[test]
    fn int_ops() {
        let d = Rational::new(12, 1).div_int(8); // 3/2
        assert_eq!(d, Rational::new(3, 2));
        assert_eq!(d.mul_int(2), Rational::from_int(3));
        assert_eq!(d.div_int(4), Rational::new(3, 8));
    }
}
