//! Exact `rational × √squarefree` numbers with a double-precision fallback.
//!
//! Every Clebsch–Gordan and 6j value is of this form. Sums of surds with
//! different radicands leave the set; those degrade to [`Coeff::Approx`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = Ratio<i128>;

/// `coeff · √radicand`, radicand squarefree and ≥ 1. Zero is stored with radicand 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Surd {
    coeff: Rational,
    radicand: u64,
}

impl Surd {
    pub fn zero() -> Self {
        Self {
            coeff: Rational::zero(),
            radicand: 1,
        }
    }

    pub fn rational(r: Rational) -> Self {
        Self {
            coeff: r,
            radicand: 1,
        }
    }

    pub fn integer(n: i128) -> Self {
        Self::rational(Rational::from_integer(n))
    }

    /// `√r` for a non-negative rational `r`.
    ///
    /// # Panics
    /// If `r` is negative.
    pub fn sqrt_of(r: Rational) -> Self {
        assert!(!r.is_negative(), "square root of negative rational");
        if r.is_zero() {
            return Self::zero();
        }
        // √(p/q) = √(p·q)/q
        let pq = (*r.numer() * *r.denom()) as u128;
        let (outside, inside) = split_square(pq);
        Self {
            coeff: Rational::new(outside as i128, *r.denom()),
            radicand: inside as u64,
        }
    }

    pub fn coeff(&self) -> Rational {
        self.coeff
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * (self.radicand as f64).sqrt()
    }

    /// Exact square, always rational.
    pub fn square(&self) -> Rational {
        self.coeff * self.coeff * Rational::from_integer(self.radicand as i128)
    }

    fn checked_add(self, other: Surd) -> Option<Surd> {
        if self.is_zero() {
            return Some(other);
        }
        if other.is_zero() {
            return Some(self);
        }
        if self.radicand != other.radicand {
            return None;
        }
        Some(Surd::normalized(self.coeff + other.coeff, self.radicand))
    }

    fn normalized(coeff: Rational, radicand: u64) -> Surd {
        if coeff.is_zero() {
            Surd::zero()
        } else {
            Surd { coeff, radicand }
        }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        if self.is_zero() || rhs.is_zero() {
            return Surd::zero();
        }
        let (outside, inside) = split_square(self.radicand as u128 * rhs.radicand as u128);
        Surd::normalized(
            self.coeff * rhs.coeff * Rational::from_integer(outside as i128),
            inside as u64,
        )
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::normalized(-self.coeff, self.radicand)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 || self.is_zero() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}·√{}", self.coeff, self.radicand)
        }
    }
}

/// Writes `n = a²·b` with `b` squarefree; returns `(a, b)`.
fn split_square(mut n: u128) -> (u128, u128) {
    let mut outside = 1u128;
    let mut inside = 1u128;
    let mut p = 2u128;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        for _ in 0..k / 2 {
            outside *= p;
        }
        if k % 2 == 1 {
            inside *= p;
        }
        p += 1;
    }
    (outside, inside * n)
}

/// A spin-algebra coefficient: exact when possible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coeff {
    Exact(Surd),
    Approx(f64),
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Exact(Surd::zero())
    }

    pub fn one() -> Self {
        Coeff::Exact(Surd::rational(Rational::one()))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coeff::Exact(s) => s.to_f64(),
            Coeff::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    pub fn as_exact(&self) -> Option<Surd> {
        match self {
            Coeff::Exact(s) => Some(*s),
            Coeff::Approx(_) => None,
        }
    }

    /// Exactly zero for exact values; `|x| ≤ tol` for approximate ones.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        match self {
            Coeff::Exact(s) => s.is_zero(),
            Coeff::Approx(x) => x.abs() <= tol,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero_within(0.0)
    }

    /// Exact comparison where both sides are exact, else within `tol`.
    pub fn equals(&self, other: &Coeff, tol: f64) -> bool {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }
}

impl From<Surd> for Coeff {
    fn from(s: Surd) -> Self {
        Coeff::Exact(s)
    }
}

impl From<Rational> for Coeff {
    fn from(r: Rational) -> Self {
        Coeff::Exact(Surd::rational(r))
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, rhs: Coeff) -> Coeff {
        if let (Coeff::Exact(a), Coeff::Exact(b)) = (self, rhs) {
            if let Some(s) = a.checked_add(b) {
                return Coeff::Exact(s);
            }
        }
        Coeff::Approx(self.to_f64() + rhs.to_f64())
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        self + (-rhs)
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Exact(s) => Coeff::Exact(-s),
            Coeff::Approx(x) => Coeff::Approx(-x),
        }
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a * b),
            _ => Coeff::Approx(self.to_f64() * rhs.to_f64()),
        }
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Coeff) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(s) => write!(f, "{s}"),
            Coeff::Approx(x) => write!(f, "{x:.15}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn sqrt_extracts_squares() {
        let s = Surd::sqrt_of(r(8, 1));
        assert_eq!(s.coeff(), r(2, 1));
        assert_eq!(s.radicand(), 2);
        let h = Surd::sqrt_of(r(1, 2));
        assert_eq!(h.coeff(), r(1, 2));
        assert_eq!(h.radicand(), 2);
        assert_eq!(Surd::sqrt_of(r(9, 4)), Surd::rational(r(3, 2)));
    }

    #[test]
    fn product_of_surds() {
        let a = Surd::sqrt_of(r(2, 3));
        let b = Surd::sqrt_of(r(3, 2));
        assert_eq!(a * b, Surd::integer(1));
        let c = Surd::sqrt_of(r(1, 2)) * Surd::sqrt_of(r(1, 6));
        assert_eq!(c, Surd::sqrt_of(r(1, 12)));
        assert_eq!(c.radicand(), 3);
    }

    #[test]
    fn mixed_radicands_fall_back() {
        let a = Coeff::from(Surd::sqrt_of(r(2, 1)));
        let b = Coeff::from(Surd::sqrt_of(r(3, 1)));
        let s = a + b;
        assert!(!s.is_exact());
        assert!((s.to_f64() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-15);
        let z = a - a;
        assert!(z.is_exact() && z.is_zero());
    }

    #[test]
    fn square_is_rational() {
        assert_eq!(Surd::sqrt_of(r(5, 7)).square(), r(5, 7));
    }
}
