//! Exact univariate polynomial arithmetic over a field, shared by the motive
//! and orbital modules. Coefficients are stored in ascending degree with no
//! trailing zeros.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

/// Field operations with the field object carrying any context (e.g. the
/// prime of a prime field).
pub trait Field {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }
}

/// The rational numbers with exact big-integer arithmetic.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// The prime field F_p for an odd prime p, elements as canonical residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        PrimeField { p }
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, (*a % self.p) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.p as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.p == 0
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
}

/// A univariate polynomial over `F`, coefficients ascending, trimmed.
pub struct Poly<F: Field> {
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Clone for Poly<F> {
    fn clone(&self) -> Self {
        Poly { coeffs: self.coeffs.clone() }
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> std::fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly({:?})", self.coeffs)
    }
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().map(|c| field.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    pub fn one(field: &F) -> Self {
        Poly::constant(field, field.one())
    }

    /// The monomial x^k.
    pub fn x_power(field: &F, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = field.one();
        Poly { coeffs }
    }

    pub fn from_i64(field: &F, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, field: &F, k: usize) -> F::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn eval(&self, field: &F, x: &F::Elem) -> F::Elem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(field.add(&self.coeff(field, i), &other.coeff(field, i)));
        }
        Poly::new(field, coeffs)
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(field.sub(&self.coeff(field, i), &other.coeff(field, i)));
        }
        Poly::new(field, coeffs)
    }

    pub fn neg(&self, field: &F) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect() }
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = field.add(&coeffs[i + j], &field.mul(a, b));
            }
        }
        Poly::new(field, coeffs)
    }

    pub fn mul_scalar(&self, field: &F, k: &F::Elem) -> Self {
        Poly::new(field, self.coeffs.iter().map(|c| field.mul(c, k)).collect())
    }

    /// Euclidean division by a nonzero divisor: `(quotient, remainder)`.
    pub fn div_rem(&self, field: &F, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        if self.degree().map_or(true, |d| d < dd) {
            return (Poly::zero(), self.clone());
        }
        let lc_inv = field.inv(divisor.leading().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let dn = self.degree().unwrap();
        let mut quot = vec![field.zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let c = field.mul(&rem[k + dd], &lc_inv);
            if !field.is_zero(&c) {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = field.sub(&rem[k + j], &field.mul(&c, dc));
                }
            }
            quot[k] = c;
        }
        (Poly::new(field, quot), Poly::new(field, rem))
    }

    pub fn rem(&self, field: &F, divisor: &Self) -> Self {
        self.div_rem(field, divisor).1
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self, field: &F) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => {
                let inv = field.inv(lc).unwrap();
                self.mul_scalar(field, &inv)
            }
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, field: &F, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(field, &b);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    pub fn derivative(&self, field: &F) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| field.mul(&field.from_i64(i as i64), c))
            .collect();
        Poly::new(field, coeffs)
    }

    /// Multiplicity of the root 0, i.e. the index of the lowest nonzero
    /// coefficient (zero polynomial yields 0).
    pub fn order_at_zero(&self, field: &F) -> usize {
        self.coeffs
            .iter()
            .position(|c| !field.is_zero(c))
            .unwrap_or(0)
    }

    /// Divides out x^k; the first k coefficients must vanish.
    pub fn shift_down(&self, field: &F, k: usize) -> Self {
        assert!(self.coeffs.iter().take(k).all(|c| field.is_zero(c)));
        Poly::new(field, self.coeffs.iter().skip(k).cloned().collect())
    }

    /// True when gcd(f, f') is constant, i.e. f has no repeated roots.
    pub fn is_separable(&self, field: &F) -> bool {
        if self.degree().map_or(true, |d| d == 0) {
            return true;
        }
        let g = self.gcd(field, &self.derivative(field));
        g.degree() == Some(0)
    }
}

/// Resultant of two nonzero polynomials over a field, via the Euclidean
/// remainder sequence with the standard degree/leading-coefficient
/// bookkeeping: `Res(f, g) = lc(f)^{deg g} * prod g... = 0` iff f and g share
/// a root over the algebraic closure.
pub fn resultant<F: Field>(field: &F, f: &Poly<F>, g: &Poly<F>) -> F::Elem {
    assert!(!f.is_zero() && !g.is_zero(), "resultant of a zero polynomial");
    let df = f.degree().unwrap();
    let dg = g.degree().unwrap();
    if dg == 0 {
        return pow_elem(field, g.leading().unwrap(), df as u64);
    }
    if df == 0 {
        return pow_elem(field, f.leading().unwrap(), dg as u64);
    }
    if df < dg {
        let sign = if (df * dg) % 2 == 1 { field.neg(&field.one()) } else { field.one() };
        return field.mul(&sign, &resultant(field, g, f));
    }
    let r = f.rem(field, g);
    if r.is_zero() {
        return field.zero();
    }
    let dr = r.degree().unwrap();
    // Res(f, g) = (-1)^{df*dg} lc(g)^{df - dr} Res(g, r)
    let mut acc = pow_elem(field, g.leading().unwrap(), (df - dr) as u64);
    if (df * dg) % 2 == 1 {
        acc = field.neg(&acc);
    }
    field.mul(&acc, &resultant(field, g, &r))
}

fn pow_elem<F: Field>(field: &F, base: &F::Elem, mut e: u64) -> F::Elem {
    let mut acc = field.one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = field.mul(&acc, &b);
        }
        b = field.mul(&b, &b);
        e >>= 1;
    }
    acc
}

/// Lagrange interpolation through `(x_i, y_i)` with distinct nodes.
pub fn interpolate<F: Field>(field: &F, points: &[(F::Elem, F::Elem)]) -> Poly<F> {
    let mut result = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = Poly::one(field);
        let mut denom = field.one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let lin = Poly::new(field, vec![field.neg(xj), field.one()]);
            basis = basis.mul(field, &lin);
            denom = field.mul(&denom, &field.sub(xi, xj));
        }
        let scale = field.div(yi, &denom);
        result = result.add(field, &basis.mul_scalar(field, &scale));
    }
    result
}

/// Formats a rational as `num/den`, denominator always explicit and positive.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Small trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Odd prime divisors of |n|; empty for n in {-1, 0, 1}.
pub fn odd_prime_divisors(n: i64) -> Vec<u64> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    while n % 2 == 0 && n > 0 {
        n /= 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(13);
        for a in 1..13u64 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
        assert!(f.inv(&0).is_none());
    }

    #[test]
    fn div_rem_reconstructs() {
        let q = Rationals;
        let f = Poly::from_i64(&q, &[2, 0, -3, 1]);
        let g = Poly::from_i64(&q, &[-1, 1]);
        let (quot, rem) = f.div_rem(&q, &g);
        let back = quot.mul(&q, &g).add(&q, &rem);
        assert_eq!(back, f);
        assert!(rem.degree().map_or(true, |d| d < 1));
    }

    #[test]
    fn resultant_linear_difference() {
        let q = Rationals;
        for (a, b) in [(2i64, 5i64), (-1, 3), (4, 4)] {
            let f = Poly::from_i64(&q, &[-a, 1]);
            let g = Poly::from_i64(&q, &[-b, 1]);
            assert_eq!(resultant(&q, &f, &g), q.from_i64(a - b));
        }
    }

    #[test]
    fn resultant_matches_hand_sylvester() {
        let q = Rationals;
        // res(x^2 - 1, 2x) = -4 by the 3x3 Sylvester determinant
        let f = Poly::from_i64(&q, &[-1, 0, 1]);
        let g = Poly::from_i64(&q, &[0, 2]);
        assert_eq!(resultant(&q, &f, &g), q.from_i64(-4));
    }

    #[test]
    fn resultant_zero_for_shared_root() {
        let q = Rationals;
        let f = Poly::from_i64(&q, &[1, -2, 1]); // (x-1)^2
        let df = f.derivative(&q);
        assert!(q.is_zero(&resultant(&q, &f, &df)));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = Rationals;
        let f = Poly::from_i64(&q, &[3, -2, 0, 1]);
        let points: Vec<_> = (0..4)
            .map(|i| {
                let x = q.from_i64(i);
                let y = f.eval(&q, &x);
                (x, y)
            })
            .collect();
        assert_eq!(interpolate(&q, &points), f);
    }

    #[test]
    fn separability() {
        let f7 = PrimeField::new(7);
        let sep = Poly::from_i64(&f7, &[4, -5, 1]);
        assert!(sep.is_separable(&f7));
        let nonsep = Poly::from_i64(&f7, &[1, -2, 1]);
        assert!(!nonsep.is_separable(&f7));
    }

    #[test]
    fn primality_and_divisors() {
        assert!(is_prime(2) && is_prime(3) && is_prime(13) && is_prime(101));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(91));
        assert_eq!(odd_prime_divisors(45), vec![3, 5]);
        assert_eq!(odd_prime_divisors(-8), Vec::<u64>::new());
        assert_eq!(odd_prime_divisors(0), Vec::<u64>::new());
    }
}
