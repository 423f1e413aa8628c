//! Exact arithmetic in a real quadratic field `Q(sqrt(D))` with `D` square-free,
//! together with square-free decomposition and the quadratic-integer predicate.

use num_rational::Ratio;
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

type Rat = Ratio<i64>;

/// Splits `k >= 1` as `k = sigma^2 * theta` with `theta` square-free, by trial
/// division. Values at desk scale are tiny, so no fancier factoring is needed.
pub fn square_free_part(k: u64) -> (u64, u64) {
    assert!(k >= 1, "square_free_part needs a positive integer");
    let mut sigma = 1u64;
    let mut theta = 1u64;
    let mut rest = k;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            sigma *= p.pow(e / 2);
            if e % 2 == 1 {
                theta *= p;
            }
        }
        p += 1;
    }
    theta *= rest; // leftover prime
    (sigma, theta)
}

/// A number `p + q*sqrt(d)` with rational `p`, `q` and `d` a positive
/// square-free integer. `q = 0` forces `d = 1` so equality is structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    p: Rat,
    q: Rat,
    d: i64,
}

impl QuadraticNumber {
    /// `(a + b*sqrt(d))/2`; `d` may carry a square factor, which is folded
    /// into the coefficient.
    pub fn half(a: i64, b: i64, d: i64) -> Self {
        Self::new(Rat::new(a, 2), Rat::new(b, 2), d)
    }

    pub fn integer(k: i64) -> Self {
        Self::new(Rat::from_integer(k), Rat::zero(), 1)
    }

    pub fn rational(r: Rat) -> Self {
        Self::new(r, Rat::zero(), 1)
    }

    /// `p + q*sqrt(d)` in canonical form.
    pub fn new(p: Rat, q: Rat, d: i64) -> Self {
        assert!(d >= 1, "radicand must be positive");
        let (sigma, theta) = square_free_part(d as u64);
        let mut q = q * Rat::from_integer(sigma as i64);
        let mut d = theta as i64;
        if d == 1 {
            return Self { p: p + q, q: Rat::zero(), d: 1 };
        }
        if q.is_zero() {
            d = 1;
            q = Rat::zero();
        }
        Self { p, q, d }
    }

    /// Square-free radicand; 1 when the number is rational.
    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn rational_part(&self) -> Rat {
        self.p
    }

    pub fn surd_coefficient(&self) -> Rat {
        self.q
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.q.is_zero() && self.p.is_integer()
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.is_integer().then(|| self.p.to_integer())
    }

    /// Writes the value as `(a + b*sqrt(D))/2` with integer `a`, `b` when the
    /// coefficients are half-integers.
    pub fn half_form(&self) -> Option<(i64, i64, i64)> {
        let a = self.p * Rat::from_integer(2);
        let b = self.q * Rat::from_integer(2);
        (a.is_integer() && b.is_integer()).then(|| (a.to_integer(), b.to_integer(), self.d))
    }

    /// Quadratic-integer test: the number is an algebraic integer of degree
    /// at most 2. For `(a + b*sqrt(D))/2` this holds exactly when
    /// `D = 2,3 (mod 4)` with `a`, `b` both even, or `D = 1 (mod 4)` with
    /// `a`, `b` of the same parity.
    pub fn is_quadratic_integer(&self) -> bool {
        let Some((a, b, d)) = self.half_form() else {
            return false;
        };
        if d == 1 {
            return a % 2 == 0;
        }
        match d.rem_euclid(4) {
            2 | 3 => a % 2 == 0 && b % 2 == 0,
            1 => (a - b) % 2 == 0,
            _ => unreachable!("square-free radicand cannot be 0 mod 4"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let p = *self.p.numer() as f64 / *self.p.denom() as f64;
        let q = *self.q.numer() as f64 / *self.q.denom() as f64;
        p + q * (self.d as f64).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn abs(&self) -> Self {
        if self.to_f64() < 0.0 {
            -*self
        } else {
            *self
        }
    }

    fn merged_radicand(&self, rhs: &Self) -> i64 {
        match (self.q.is_zero(), rhs.q.is_zero()) {
            (true, _) => rhs.d,
            (_, true) => self.d,
            _ => {
                assert_eq!(self.d, rhs.d, "arithmetic across different quadratic fields");
                self.d
            }
        }
    }
}

impl Add for QuadraticNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.merged_radicand(&rhs);
        Self::new(self.p + rhs.p, self.q + rhs.q, d)
    }
}

impl Sub for QuadraticNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QuadraticNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self { p: -self.p, q: -self.q, d: self.d }
    }
}

impl Mul for QuadraticNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.merged_radicand(&rhs);
        let p = self.p * rhs.p + self.q * rhs.q * Rat::from_integer(d);
        let q = self.p * rhs.q + self.q * rhs.p;
        Self::new(p, q, d)
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} + {}*sqrt({})", self.p, self.q, self.d)
        }
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_free_part_examples() {
        assert_eq!(square_free_part(20), (2, 5));
        assert_eq!(square_free_part(8), (2, 2));
        assert_eq!(square_free_part(53), (1, 53));
        assert_eq!(square_free_part(1), (1, 1));
        assert_eq!(square_free_part(36), (6, 1));
    }

    #[test]
    fn canonical_form() {
        // sqrt(8) = 2*sqrt(2)
        let x = QuadraticNumber::new(Rat::zero(), Rat::from_integer(1), 8);
        assert_eq!(x, QuadraticNumber::new(Rat::zero(), Rat::from_integer(2), 2));
        // zero surd coefficient collapses to d = 1
        let y = QuadraticNumber::half(6, 0, 5);
        assert_eq!(y.radicand(), 1);
        assert_eq!(y.as_integer(), Some(3));
    }

    #[test]
    fn quadratic_integer_predicate() {
        // 1 + sqrt(5) = (2 + 2*sqrt(5))/2
        assert!(QuadraticNumber::half(2, 2, 5).is_quadratic_integer());
        // golden-ratio style (1 + sqrt(5))/2
        assert!(QuadraticNumber::half(1, 1, 5).is_quadratic_integer());
        // (1 + sqrt(2))/2 is not an algebraic integer
        assert!(!QuadraticNumber::half(1, 1, 2).is_quadratic_integer());
        // sqrt(2) = (0 + 2*sqrt(2))/2 is
        assert!(QuadraticNumber::half(0, 2, 2).is_quadratic_integer());
        // 3/2 is not
        assert!(!QuadraticNumber::half(3, 0, 1).is_quadratic_integer());
        assert!(QuadraticNumber::integer(-7).is_quadratic_integer());
    }

    #[test]
    fn field_arithmetic_matches_floats() {
        let x = QuadraticNumber::half(1, 3, 5);
        let y = QuadraticNumber::half(-4, 1, 5);
        for (exact, float) in [
            (x + y, x.to_f64() + y.to_f64()),
            (x - y, x.to_f64() - y.to_f64()),
            (x * y, x.to_f64() * y.to_f64()),
        ] {
            assert!((exact.to_f64() - float).abs() < 1e-12);
        }
    }

    #[test]
    #[should_panic(expected = "different quadratic fields")]
    fn mixed_fields_rejected() {
        let _ = QuadraticNumber::half(0, 1, 2) * QuadraticNumber::half(0, 1, 5);
    }
}
