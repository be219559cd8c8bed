//! The desk-scale fragment of the localized, completed Grothendieck ring:
//! exact rational functions in one symbol `L` with rational coefficients,
//! with virtual dimension (filtration degree) and specialization at `L = q`.
//!
//! Every value is stored as a reduced fraction of polynomials in `L` with a
//! monic denominator, so equality is decidable and arithmetic is exact.
//! Convergent geometric series of the completion are only ever handled in
//! closed form; no truncated series are stored.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::poly::{rational_string, Field, Poly, Rationals};

#[derive(Debug, Error, PartialEq)]
pub enum MotiveError {
    #[error("division by the zero motive")]
    DivisionByZero,
    #[error("geometric series requires positive step d, got {0}")]
    DivergentSeries(i64),
    #[error("pole at L = {0}")]
    Pole(String),
}

/// An element of Q(L): a reduced fraction `num/den` with `den` monic.
#[derive(Debug, Clone, PartialEq)]
pub struct MotiveValue {
    num: Poly<Rationals>,
    den: Poly<Rationals>,
}

impl MotiveValue {
    fn reduced(num: Poly<Rationals>, den: Poly<Rationals>) -> Self {
        let q = Rationals;
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return MotiveValue { num: Poly::zero(), den: Poly::one(&q) };
        }
        let g = num.gcd(&q, &den);
        let num = num.div_rem(&q, &g).0;
        let den = den.div_rem(&q, &g).0;
        let lc_inv = q.inv(den.leading().unwrap()).unwrap();
        MotiveValue {
            num: num.mul_scalar(&q, &lc_inv),
            den: den.mul_scalar(&q, &lc_inv),
        }
    }

    pub fn zero() -> Self {
        MotiveValue { num: Poly::zero(), den: Poly::one(&Rationals) }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// The Lefschetz symbol L itself.
    pub fn lefschetz() -> Self {
        Self::l_power(1)
    }

    /// L^k for any integer k.
    pub fn l_power(k: i64) -> Self {
        let q = Rationals;
        if k >= 0 {
            MotiveValue { num: Poly::x_power(&q, k as usize), den: Poly::one(&q) }
        } else {
            MotiveValue {
                num: Poly::one(&q),
                den: Poly::x_power(&q, (-k) as usize),
            }
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let q = Rationals;
        MotiveValue { num: Poly::constant(&q, r), den: Poly::one(&q) }
    }

    /// Builds `(c0 + c1 L + ...)/(d0 + d1 L + ...)` from integer coefficient
    /// lists in ascending degree.
    pub fn from_coeffs(num: &[i64], den: &[i64]) -> Result<Self, MotiveError> {
        let q = Rationals;
        let den = Poly::from_i64(&q, den);
        if den.is_zero() {
            return Err(MotiveError::DivisionByZero);
        }
        Ok(Self::reduced(Poly::from_i64(&q, num), den))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &Poly<Rationals> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<Rationals> {
        &self.den
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, MotiveError> {
        if other.is_zero() {
            return Err(MotiveError::DivisionByZero);
        }
        let q = Rationals;
        Ok(Self::reduced(self.num.mul(&q, &other.den), self.den.mul(&q, &other.num)))
    }

    /// Evaluation L := q, the trace-of-Frobenius side of the comparison.
    pub fn specialize(&self, q: &BigRational) -> Result<BigRational, MotiveError> {
        let field = Rationals;
        let den = self.den.eval(&field, q);
        if den.is_zero() {
            return Err(MotiveError::Pole(rational_string(q)));
        }
        Ok(self.num.eval(&field, q) / den)
    }

    pub fn specialize_at_prime(&self, p: u64) -> Result<BigRational, MotiveError> {
        self.specialize(&BigRational::from_integer(BigInt::from(p)))
    }

    /// Virtual dimension `deg num - deg den`; `None` stands for the -infinity
    /// of the zero motive. A value lies in filtration level m iff its degree
    /// is at most -m.
    pub fn filtration_degree(&self) -> Option<i64> {
        let dn = self.num.degree()?;
        let dd = self.den.degree().unwrap();
        Some(dn as i64 - dd as i64)
    }
}

impl Add for &MotiveValue {
    type Output = MotiveValue;
    fn add(self, other: &MotiveValue) -> MotiveValue {
        let q = Rationals;
        let num = self
            .num
            .mul(&q, &other.den)
            .add(&q, &other.num.mul(&q, &self.den));
        MotiveValue::reduced(num, self.den.mul(&q, &other.den))
    }
}

impl Sub for &MotiveValue {
    type Output = MotiveValue;
    fn sub(self, other: &MotiveValue) -> MotiveValue {
        let q = Rationals;
        let num = self
            .num
            .mul(&q, &other.den)
            .sub(&q, &other.num.mul(&q, &self.den));
        MotiveValue::reduced(num, self.den.mul(&q, &other.den))
    }
}

impl Mul for &MotiveValue {
    type Output = MotiveValue;
    fn mul(self, other: &MotiveValue) -> MotiveValue {
        let q = Rationals;
        MotiveValue::reduced(self.num.mul(&q, &other.num), self.den.mul(&q, &other.den))
    }
}

/// Closed form of the convergent series `sum_{l>=0} L^{-d*l - e}`, an element
/// of the completed ring: `L^{-e} / (1 - L^{-d})`. Requires `d >= 1` (terms
/// must have virtual dimension tending to -infinity).
pub fn geometric_sum(d: i64, e: i64) -> Result<MotiveValue, MotiveError> {
    if d <= 0 {
        return Err(MotiveError::DivergentSeries(d));
    }
    let one = MotiveValue::one();
    let denom = &one - &MotiveValue::l_power(-d);
    MotiveValue::l_power(-e).checked_div(&denom)
}

impl fmt::Display for MotiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            return write!(f, "0");
        }
        let num = poly_string(&self.num);
        if self.den.degree() == Some(0) {
            write!(f, "{num}")
        } else if num.contains(' ') || num.contains('/') {
            write!(f, "({num})/({})", poly_string(&self.den))
        } else {
            write!(f, "{num}/({})", poly_string(&self.den))
        }
    }
}

fn poly_string(p: &Poly<Rationals>) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let abs = c.abs();
        let coeff = if abs.is_one() && i > 0 {
            String::new()
        } else if abs.denom().is_one() {
            format!("{}", abs.numer())
        } else {
            format!("{}/{}", abs.numer(), abs.denom())
        };
        let var = match i {
            0 => String::new(),
            1 => "L".to_string(),
            _ => format!("L^{i}"),
        };
        let sep = if coeff.is_empty() || var.is_empty() { "" } else { "*" };
        let body = format!("{coeff}{sep}{var}");
        if parts.is_empty() {
            parts.push(if c.is_negative() { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{} {body}", if c.is_negative() { "-" } else { "+" }));
        }
    }
    parts.join(" ")
}

impl Serialize for MotiveValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MotiveValue", 2)?;
        let num: Vec<String> = self.num.coeffs().iter().map(rational_string).collect();
        let den: Vec<String> = self.den.coeffs().iter().map(rational_string).collect();
        s.serialize_field("num", &num)?;
        s.serialize_field("den", &den)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn l() -> MotiveValue {
        MotiveValue::lefschetz()
    }

    #[test]
    fn complement_of_point_in_affine_line() {
        let l_minus_1 = &l() - &MotiveValue::one();
        assert_eq!(&l() - &l_minus_1, MotiveValue::one());
    }

    #[test]
    fn difference_of_squares() {
        let a = &l() - &MotiveValue::one();
        let b = &l() + &MotiveValue::one();
        let expected = MotiveValue::from_coeffs(&[-1, 0, 1], &[1]).unwrap();
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn quotient_reduces() {
        // (1 - L^{-1}) / (1 - L^{-2}) = L/(L+1)
        let one = MotiveValue::one();
        let a = &one - &MotiveValue::l_power(-1);
        let b = &one - &MotiveValue::l_power(-2);
        let expected = MotiveValue::from_coeffs(&[0, 1], &[1, 1]).unwrap();
        assert_eq!(a.checked_div(&b).unwrap(), expected);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            MotiveValue::one().checked_div(&MotiveValue::zero()),
            Err(MotiveError::DivisionByZero)
        );
    }

    #[test]
    fn geometric_sum_closed_forms() {
        // d=2, e=0: 1/(1 - L^{-2}) = L^2/(L^2 - 1)
        let g = geometric_sum(2, 0).unwrap();
        assert_eq!(g, MotiveValue::from_coeffs(&[0, 0, 1], &[-1, 0, 1]).unwrap());
        // d=1, e=1: 1/(L - 1)
        let g = geometric_sum(1, 1).unwrap();
        assert_eq!(g, MotiveValue::from_coeffs(&[1], &[-1, 1]).unwrap());
        assert!(geometric_sum(0, 0).is_err());
        assert!(geometric_sum(-2, 1).is_err());
    }

    #[test]
    fn geometric_sum_times_complement_is_monomial() {
        for d in 1..=5i64 {
            for e in -3..=3i64 {
                let g = geometric_sum(d, e).unwrap();
                let factor = &MotiveValue::one() - &MotiveValue::l_power(-d);
                assert_eq!(&g * &factor, MotiveValue::l_power(-e));
            }
        }
    }

    #[test]
    fn monomial_integral_closed_form_at_m1() {
        // (1 - L^{-1}) * geometric_sum(m+1, 0) at m = 1 reduces to L/(L+1)
        let m = 1;
        let v = &(&MotiveValue::one() - &MotiveValue::l_power(-1))
            * &geometric_sum(m + 1, 0).unwrap();
        assert_eq!(v, MotiveValue::from_coeffs(&[0, 1], &[1, 1]).unwrap());
        // specialized at q=3 this is the p-adic value 3/4
        assert_eq!(
            v.specialize_at_prime(3).unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(4))
        );
    }

    #[test]
    fn specialization_values() {
        let v = MotiveValue::from_coeffs(&[0, 1], &[1, 1]).unwrap();
        assert_eq!(
            v.specialize_at_prime(5).unwrap(),
            BigRational::new(BigInt::from(5), BigInt::from(6))
        );
        assert_eq!(
            MotiveValue::l_power(-3).specialize_at_prime(2).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(8))
        );
        let pole = MotiveValue::from_coeffs(&[1], &[-3, 1]).unwrap();
        assert!(pole.specialize(&BigRational::from_integer(BigInt::from(3))).is_err());
    }

    #[test]
    fn filtration_degrees() {
        assert_eq!(MotiveValue::l_power(-3).filtration_degree(), Some(-3));
        let v = MotiveValue::from_coeffs(&[0, 1], &[1, 1]).unwrap();
        assert_eq!(v.filtration_degree(), Some(0));
        assert_eq!(MotiveValue::zero().filtration_degree(), None);
    }

    fn random_motive(rng: &mut ChaCha8Rng) -> MotiveValue {
        loop {
            let num: Vec<i64> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(-5..6)).collect();
            let den: Vec<i64> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(-5..6)).collect();
            if let Ok(v) = MotiveValue::from_coeffs(&num, &den) {
                return v;
            }
        }
    }

    #[test]
    fn specialize_is_a_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut checked = 0;
        while checked < 200 {
            let a = random_motive(&mut rng);
            let b = random_motive(&mut rng);
            for p in [3u64, 5, 7] {
                let (sa, sb) = match (a.specialize_at_prime(p), b.specialize_at_prime(p)) {
                    (Ok(sa), Ok(sb)) => (sa, sb),
                    _ => continue, // pole at this prime; skip the pair
                };
                let sum = (&a + &b).specialize_at_prime(p).unwrap();
                let prod = (&a * &b).specialize_at_prime(p).unwrap();
                assert_eq!(sum, &sa + &sb);
                assert_eq!(prod, &sa * &sb);
            }
            checked += 1;
        }
    }

    #[test]
    fn filtration_degree_is_additive_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let a = random_motive(&mut rng);
            let b = random_motive(&mut rng);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            assert_eq!(
                (&a * &b).filtration_degree().unwrap(),
                a.filtration_degree().unwrap() + b.filtration_degree().unwrap()
            );
        }
    }

    #[test]
    fn json_encoding_uses_rational_strings() {
        let v = MotiveValue::from_coeffs(&[0, 1], &[1, 1]).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"num": ["0/1", "1/1"], "den": ["1/1", "1/1"]})
        );
    }
}
