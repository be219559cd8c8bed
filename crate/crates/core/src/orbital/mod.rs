//! The fundamental-lemma laboratory: Newton polygons, equal-valuation strip
//! membership, reduced characteristic polynomials, point counts for the
//! associated curves, resultants, and the transfer-factor support test.

mod curves;

pub use curves::{curve_point_count, family_count, CurveCount};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use thiserror::Error;

use crate::padic::{OrdValue, PadicApprox, PadicContext, PadicError};
use crate::poly::{self, Field, Poly, PrimeField, Rationals};

#[derive(Debug, Error)]
pub enum OrbitalError {
    #[error("undecided coefficient valuation: {0}; increase depth")]
    PrecisionLoss(String),
    #[error("Newton polygon is not a single segment of slope {expected}: found {found}")]
    MixedSlopes { expected: String, found: String },
    #[error("{0}")]
    BadInput(String),
    #[error("expected degree {expected}, got {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("resultant of the zero polynomial")]
    ZeroPolynomial,
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// A polynomial with truncated p-adic coefficients, ascending degree.
#[derive(Debug, Clone)]
pub struct QpPoly {
    ctx: PadicContext,
    coeffs: Vec<PadicApprox>,
}

impl QpPoly {
    /// Builds from exact integer coefficients; a literal 0 is the exact zero.
    pub fn from_integers(ctx: &PadicContext, coeffs: &[i64]) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|&c| if c == 0 { ctx.exact_zero() } else { ctx.approx(c) })
            .collect();
        Self::new(ctx, coeffs)
    }

    pub fn from_bigints(ctx: &PadicContext, coeffs: &[BigInt]) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|c| if c.is_zero() { ctx.exact_zero() } else { ctx.approx_bigint(c) })
            .collect();
        Self::new(ctx, coeffs)
    }

    pub fn new(ctx: &PadicContext, mut coeffs: Vec<PadicApprox>) -> Self {
        while coeffs.last().map(|c| c.is_exact_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        QpPoly { ctx: *ctx, coeffs }
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[PadicApprox] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// True when all odd-index coefficients vanish to working precision.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .all(|c| c.representative() == 0)
    }

    /// The coefficients of even index, i.e. E with f(x) = E(x^2) for even f.
    fn even_part(&self) -> Vec<PadicApprox> {
        self.coeffs.iter().step_by(2).copied().collect()
    }
}

/// Parameters of an equal-valuation strip: the valuation r = ell/h in lowest
/// terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StripParams {
    ell: i64,
    h: i64,
}

impl StripParams {
    pub fn new(ell: i64, h: i64) -> Result<Self, OrbitalError> {
        if h < 1 {
            return Err(OrbitalError::BadInput(format!("h must be positive, got {h}")));
        }
        if ell.unsigned_abs().gcd(&h.unsigned_abs()) != 1 {
            return Err(OrbitalError::BadInput(format!(
                "ell = {ell} and h = {h} must be coprime"
            )));
        }
        Ok(StripParams { ell, h })
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    /// r = ell/h.
    pub fn slope(&self) -> BigRational {
        BigRational::new(BigInt::from(self.ell), BigInt::from(self.h))
    }
}

/// The lower convex hull data of a valued polynomial: (root valuation,
/// multiplicity) pairs with strictly increasing valuations.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolygon {
    segments: Vec<(BigRational, u64)>,
}

impl NewtonPolygon {
    pub fn segments(&self) -> &[(BigRational, u64)] {
        &self.segments
    }

    pub fn single_slope(&self) -> Option<&BigRational> {
        if self.segments.len() == 1 {
            Some(&self.segments[0].0)
        } else {
            None
        }
    }

    /// Total number of roots accounted for (degree minus the order of
    /// vanishing at zero).
    pub fn root_count(&self) -> u64 {
        self.segments.iter().map(|(_, m)| m).sum()
    }
}

/// Computes the Newton polygon: slope s with multiplicity m means exactly m
/// roots of valuation s over an algebraic closure. Requires every nonzero
/// coefficient to have decided valuation at the working depth.
pub fn newton_polygon(f: &QpPoly) -> Result<NewtonPolygon, OrbitalError> {
    let ctx = f.ctx;
    let mut points: Vec<(i64, i64)> = Vec::new();
    for (i, c) in f.coeffs.iter().enumerate() {
        if c.is_exact_zero() {
            continue;
        }
        match ctx.ord(*c) {
            OrdValue::Finite(k) => points.push((i as i64, k as i64)),
            OrdValue::AtLeastDepth => {
                return Err(OrbitalError::PrecisionLoss(format!(
                    "coefficient of degree {i} vanishes to depth {}",
                    ctx.depth()
                )))
            }
            OrdValue::Infinite => unreachable!("exact zeros are skipped"),
        }
    }
    if points.is_empty() {
        return Err(OrbitalError::BadInput("zero polynomial".into()));
    }
    // lower convex hull, left to right; collinear middle points are dropped
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // hull slopes increase left to right; root valuations are their negatives
    let mut segments: Vec<(BigRational, u64)> = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            let val = BigRational::new(BigInt::from(y1 - y2), BigInt::from(x2 - x1));
            (val, (x2 - x1) as u64)
        })
        .collect();
    segments.reverse();
    Ok(NewtonPolygon { segments })
}

/// A polynomial over a prime field, ascending coefficients, nonzero leading
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self, OrbitalError> {
        if !poly::is_prime(p) || p == 2 {
            return Err(OrbitalError::NotOddPrime(p));
        }
        let field = PrimeField::new(p);
        let poly = Poly::new(&field, coeffs.into_iter().map(|c| c % p).collect());
        Ok(FpPoly { p, coeffs: poly.coeffs().to_vec() })
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Result<Self, OrbitalError> {
        if !poly::is_prime(p) || p == 2 {
            return Err(OrbitalError::NotOddPrime(p));
        }
        let field = PrimeField::new(p);
        Ok(FpPoly {
            p,
            coeffs: Poly::from_i64(&field, coeffs).coeffs().to_vec(),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let field = PrimeField::new(self.p);
        self.as_poly().eval(&field, &(x % self.p))
    }

    pub fn is_separable(&self) -> bool {
        self.as_poly().is_separable(&PrimeField::new(self.p))
    }

    fn as_poly(&self) -> Poly<PrimeField> {
        Poly::new(&PrimeField::new(self.p), self.coeffs.clone())
    }
}

impl std::fmt::Display for FpPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 if *c == 1 => "u".into(),
                1 => format!("{c}*u"),
                _ if *c == 1 => format!("u^{i}"),
                _ => format!("{c}*u^{i}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0 (mod {})", self.p)
        } else {
            write!(f, "{} (mod {})", parts.join(" + "), self.p)
        }
    }
}

/// The reduced characteristic polynomial: the monic polynomial over F_p
/// whose roots are the reductions of `t_i^h / p^ell` over the roots `t_i`
/// of `p0`, with one root per `{t, -t}` pair when `p0` is even and `h` is
/// even, and all roots otherwise. Computed exactly through the lifted
/// composed power (the polynomial with roots `t^h`, via resultants)
/// followed by the `p^ell`-scaling and reduction mod p.
pub fn reduced_poly(p0: &QpPoly, s: &StripParams) -> Result<FpPoly, OrbitalError> {
    let ctx = p0.ctx;
    let n = p0.degree().ok_or_else(|| OrbitalError::BadInput("zero polynomial".into()))?;
    if n == 0 {
        return Err(OrbitalError::BadInput("constant polynomial has no roots".into()));
    }
    let polygon = newton_polygon(p0)?;
    let expected = s.slope();
    match polygon.single_slope() {
        Some(slope) if *slope == expected => {}
        _ => {
            return Err(OrbitalError::MixedSlopes {
                expected: format!("{}/{}", s.ell, s.h),
                found: format!("{:?}", polygon.segments),
            })
        }
    }
    if polygon.root_count() != n as u64 {
        return Err(OrbitalError::BadInput(
            "P0 must have nonzero roots (constant term vanishes)".into(),
        ));
    }
    let lc = *p0.coeffs.last().unwrap();
    if !matches!(ctx.ord(lc), OrdValue::Finite(0)) {
        return Err(OrbitalError::BadInput(
            "leading coefficient must be a unit".into(),
        ));
    }
    let required = s.ell.max(0) * n as i64 + 2;
    if (ctx.depth() as i64) < required {
        return Err(OrbitalError::PrecisionLoss(format!(
            "working depth {} is below ell*deg + 2 = {required}",
            ctx.depth()
        )));
    }

    // lift to a monic integer polynomial mod p^N
    let pn = BigInt::from(ctx.modulus());
    let lc_inv = modular_inverse(&BigInt::from(lc.representative()), &pn);
    let lift = |coeffs: &[PadicApprox]| -> Vec<BigInt> {
        coeffs
            .iter()
            .map(|c| (BigInt::from(c.representative()) * &lc_inv).mod_floor(&pn))
            .collect()
    };

    let halved = p0.is_even() && s.h % 2 == 0;
    let (base, power, m) = if halved {
        (lift(&p0.even_part()), (s.h / 2) as usize, n / 2)
    } else {
        (lift(&p0.coeffs), s.h as usize, n)
    };
    let composed = composed_power(&base, power);

    // scale: coefficient of mu^i picks up p^{ell*i - ell*m}
    let p_big = BigInt::from(ctx.prime());
    let mut reduced: Vec<u64> = Vec::with_capacity(m + 1);
    for (i, b) in composed.iter().enumerate() {
        let shift = s.ell * (m as i64 - i as i64);
        let value = if shift >= 0 {
            let divisor = p_big.pow(shift as u32);
            let (q, r) = b.div_rem(&divisor);
            if !r.is_zero() {
                return Err(OrbitalError::MixedSlopes {
                    expected: format!("{}/{}", s.ell, s.h),
                    found: format!(
                        "coefficient of degree {i} has valuation below {shift}"
                    ),
                });
            }
            q
        } else {
            b * p_big.pow((-shift) as u32)
        };
        reduced.push(u64::try_from(value.mod_floor(&p_big)).unwrap());
    }
    FpPoly::new(ctx.prime(), reduced)
}

fn modular_inverse(a: &BigInt, modulus: &BigInt) -> BigInt {
    let e = a.extended_gcd(modulus);
    debug_assert!(e.gcd.is_one(), "inverse of a non-unit");
    e.x.mod_floor(modulus)
}

/// The monic polynomial with roots `t^k` over the roots `t` of the monic
/// input, computed by interpolation of `Res_lambda(f, mu - lambda^k)`.
/// Coefficients are integer polynomials in the input coefficients, so the
/// computation is compatible with the mod p^N lift.
fn composed_power(monic: &[BigInt], k: usize) -> Vec<BigInt> {
    assert!(k >= 1);
    if k == 1 {
        return monic.to_vec();
    }
    let q = Rationals;
    let f = Poly::new(
        &q,
        monic.iter().map(|c| BigRational::from_integer(c.clone())).collect(),
    );
    let deg = f.degree().unwrap();
    let points: Vec<(BigRational, BigRational)> = (0..=deg as i64)
        .map(|mu| {
            // g = mu - lambda^k
            let mut g_coeffs = vec![q.from_i64(0); k + 1];
            g_coeffs[0] = q.from_i64(mu);
            g_coeffs[k] = q.from_i64(-1);
            let g = Poly::new(&q, g_coeffs);
            let value = poly::resultant(&q, &f, &g);
            (q.from_i64(mu), value)
        })
        .collect();
    let interpolated = poly::interpolate(&q, &points);
    interpolated
        .coeffs()
        .iter()
        .map(|c| {
            debug_assert!(c.denom().is_one());
            c.numer().clone()
        })
        .collect()
}

/// Tests membership in the equal-valuation strip of slope r = ell/h: the
/// Newton polygon must be the single segment of slope r and the reduced
/// characteristic polynomial must be separable with nonzero roots. Returns
/// the reduced polynomial on membership.
pub fn strip_membership(
    p0: &QpPoly,
    s: &StripParams,
) -> Result<(bool, Option<FpPoly>), OrbitalError> {
    if !p0.is_even() {
        return Err(OrbitalError::BadInput(
            "strip membership expects an even polynomial (so/sp type)".into(),
        ));
    }
    match p0.coeffs.first() {
        None => return Err(OrbitalError::BadInput("zero polynomial".into())),
        Some(c0) if c0.is_exact_zero() => {
            return Err(OrbitalError::BadInput(
                "P0 must be the nonzero-roots factor (P0(0) = 0)".into(),
            ))
        }
        _ => {}
    }
    let polygon = newton_polygon(p0)?;
    if polygon.single_slope() != Some(&s.slope()) {
        return Ok((false, None));
    }
    let r = reduced_poly(p0, s)?;
    let member = r.is_separable() && r.eval(0) != 0;
    if member {
        Ok((true, Some(r)))
    } else {
        Ok((false, None))
    }
}

/// Resultant of two nonzero polynomials over an exact field; zero iff they
/// share a root over the algebraic closure.
pub fn resultant<F: Field>(field: &F, f: &Poly<F>, g: &Poly<F>) -> Result<F::Elem, OrbitalError> {
    if f.is_zero() || g.is_zero() {
        return Err(OrbitalError::ZeroPolynomial);
    }
    Ok(poly::resultant(field, f, g))
}

/// Support of the transfer factor on a triple of characteristic polynomials:
/// true iff `PX = lambda * PY0 * PZ0` exactly (with `PY0`, `PZ0` the
/// nonzero-root factors of `PY`, `PZ`) and `PX` is regular, i.e.
/// `resultant(PX, PX') != 0`. The sign in {-1, +1} is not computed, only the
/// support.
pub fn transfer_support<F: Field>(
    field: &F,
    px: &Poly<F>,
    py: &Poly<F>,
    pz: &Poly<F>,
) -> Result<bool, OrbitalError> {
    if px.is_zero() || py.is_zero() || pz.is_zero() {
        return Err(OrbitalError::BadInput("zero polynomial input".into()));
    }
    if !field.is_zero(&px.eval(field, &field.zero())) {
        return Err(OrbitalError::BadInput(
            "PX(0) must vanish (0 is always a root of a characteristic polynomial)".into(),
        ));
    }
    let py0 = py.shift_down(field, py.order_at_zero(field));
    let pz0 = pz.shift_down(field, pz.order_at_zero(field));
    let lambda = Poly::x_power(field, 1);
    let candidate = lambda.mul(field, &py0).mul(field, &pz0);
    if candidate != *px {
        return Ok(false);
    }
    let deriv = px.derivative(field);
    if deriv.is_zero() {
        return Ok(false);
    }
    Ok(!field.is_zero(&poly::resultant(field, px, &deriv)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64, depth: u32) -> PadicContext {
        PadicContext::new(p, depth).unwrap()
    }

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn polygon_of_sqrt_p() {
        // lambda^2 - p at p = 5: two roots of valuation 1/2
        let c = ctx(5, 4);
        let f = QpPoly::from_integers(&c, &[-5, 0, 1]);
        let polygon = newton_polygon(&f).unwrap();
        assert_eq!(polygon.segments(), &[(rational(1, 2), 2)]);
    }

    #[test]
    fn polygon_with_two_slopes() {
        // (lambda - 1)(lambda - p) = lambda^2 - (p+1) lambda + p
        let c = ctx(5, 4);
        let f = QpPoly::from_integers(&c, &[5, -6, 1]);
        let polygon = newton_polygon(&f).unwrap();
        assert_eq!(
            polygon.segments(),
            &[(rational(0, 1), 1), (rational(1, 1), 1)]
        );
    }

    #[test]
    fn polygon_of_the_strip_fixture() {
        // (lambda^2 - p)(lambda^2 - 4p) at p = 7: single slope 1/2, four roots
        let c = ctx(7, 6);
        let p = 7i64;
        let f = QpPoly::from_integers(&c, &[4 * p * p, 0, -5 * p, 0, 1]);
        let polygon = newton_polygon(&f).unwrap();
        assert_eq!(polygon.segments(), &[(rational(1, 2), 4)]);
    }

    #[test]
    fn polygon_skips_roots_at_zero() {
        // lambda^3 - p lambda^2 has one nonzero root of valuation 1
        let c = ctx(5, 4);
        let f = QpPoly::from_integers(&c, &[0, 0, -5, 1]);
        let polygon = newton_polygon(&f).unwrap();
        assert_eq!(polygon.segments(), &[(rational(1, 1), 1)]);
        assert_eq!(polygon.root_count(), 1);
    }

    #[test]
    fn polygon_requires_decided_valuations() {
        let c = ctx(3, 3);
        // middle coefficient 27 = 3^3 vanishes at depth 3
        let f = QpPoly::from_integers(&c, &[1, 27, 1]);
        assert!(matches!(
            newton_polygon(&f),
            Err(OrbitalError::PrecisionLoss(_))
        ));
    }

    #[test]
    fn polygon_multiplicities_match_known_factors() {
        // random products of (lambda - u p^k) and (lambda^2 - u p^a) with
        // small unit u; the polygon must equal the multiset of root
        // valuations of the factors
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let p: u64 = [3, 5, 7, 11, 13][rng.gen_range(0..5)];
            let c = ctx(p, 14);
            let q = Rationals;
            let mut product = Poly::one(&q);
            let mut expected: std::collections::BTreeMap<BigRational, u64> =
                std::collections::BTreeMap::new();
            for _ in 0..rng.gen_range(1..=3) {
                let u = rng.gen_range(1..p) as i64;
                if rng.gen_bool(0.5) {
                    let k = rng.gen_range(0..=3u32);
                    let factor = Poly::from_i64(&q, &[-u * (p as i64).pow(k), 1]);
                    product = product.mul(&q, &factor);
                    *expected.entry(rational(k as i64, 1)).or_insert(0) += 1;
                } else {
                    let a = rng.gen_range(0..=3u32);
                    let factor = Poly::from_i64(&q, &[-u * (p as i64).pow(a), 0, 1]);
                    product = product.mul(&q, &factor);
                    *expected.entry(rational(a as i64, 2)).or_insert(0) += 2;
                }
            }
            let coeffs: Vec<BigInt> =
                product.coeffs().iter().map(|c| c.numer().clone()).collect();
            let f = QpPoly::from_bigints(&c, &coeffs);
            let polygon = newton_polygon(&f).unwrap();
            let expected: Vec<(BigRational, u64)> = expected.into_iter().collect();
            assert_eq!(polygon.segments(), expected.as_slice());
        }
    }

    #[test]
    fn reduced_poly_of_the_fixture() {
        // (lambda^2 - p)(lambda^2 - 4p), (ell, h) = (1, 2): roots t^2/p
        // reduce to 1 and 4
        for p in [7i64, 11, 13] {
            let c = ctx(p as u64, 8);
            let f = QpPoly::from_integers(&c, &[4 * p * p, 0, -5 * p, 0, 1]);
            let s = StripParams::new(1, 2).unwrap();
            let r = reduced_poly(&f, &s).unwrap();
            let expected = FpPoly::from_i64(p as u64, &[4, -5, 1]).unwrap();
            assert_eq!(r, expected);
        }
    }

    #[test]
    fn reduced_poly_single_root() {
        let c = ctx(5, 4);
        let f = QpPoly::from_integers(&c, &[-5, 0, 1]);
        let s = StripParams::new(1, 2).unwrap();
        let r = reduced_poly(&f, &s).unwrap();
        assert_eq!(r, FpPoly::from_i64(5, &[-1, 1]).unwrap());
    }

    #[test]
    fn reduced_poly_collision_is_not_separable() {
        // (lambda^2 - p)(lambda^2 - p(1+p)): both t^2/p reduce to 1
        let p = 5i64;
        let c = ctx(5, 8);
        let f = QpPoly::from_integers(&c, &[p * p * (1 + p), 0, -(2 * p + p * p), 0, 1]);
        let s = StripParams::new(1, 2).unwrap();
        let r = reduced_poly(&f, &s).unwrap();
        assert_eq!(r, FpPoly::from_i64(5, &[1, -2, 1]).unwrap());
        assert!(!r.is_separable());
    }

    #[test]
    fn reduced_poly_rejects_mixed_slopes() {
        let p = 5i64;
        let c = ctx(5, 8);
        // (lambda^2 - p)(lambda^2 - p^2) has slopes 1/2 and 1
        let f = QpPoly::from_integers(&c, &[p * p * p, 0, -(p + p * p), 0, 1]);
        let s = StripParams::new(1, 2).unwrap();
        assert!(matches!(
            reduced_poly(&f, &s),
            Err(OrbitalError::MixedSlopes { .. })
        ));
    }

    #[test]
    fn reduced_poly_enforces_depth() {
        let p = 7i64;
        let c = ctx(7, 4); // needs ell*deg + 2 = 6
        let f = QpPoly::from_integers(&c, &[4 * p * p, 0, -5 * p, 0, 1]);
        let s = StripParams::new(1, 2).unwrap();
        assert!(matches!(
            reduced_poly(&f, &s),
            Err(OrbitalError::PrecisionLoss(_))
        ));
    }

    #[test]
    fn reduced_poly_scaling_by_a_unit_scales_the_roots() {
        // replacing P0(lambda) by P0(u lambda) divides the roots t by u,
        // hence divides the roots of R by u^h
        let p = 11u64;
        let c = ctx(p, 8);
        let s = StripParams::new(1, 2).unwrap();
        let base = QpPoly::from_integers(&c, &[4 * 121, 0, -55, 0, 1]);
        let r = reduced_poly(&base, &s).unwrap();
        let u = 3i64;
        // P0(u lambda): coefficient of lambda^i picks up u^i
        let scaled_coeffs: Vec<i64> = [4 * 121i64, 0, -55, 0, 1]
            .iter()
            .enumerate()
            .map(|(i, c)| c * u.pow(i as u32))
            .collect();
        let scaled = QpPoly::from_integers(&c, &scaled_coeffs);
        let r_scaled = reduced_poly(&scaled, &s).unwrap();
        let field = PrimeField::new(p);
        let u_h = field.mul(&(u as u64), &(u as u64));
        for mu in 0..p {
            let image = field.mul(&mu, &u_h);
            assert_eq!(r_scaled.eval(mu) == 0, r.eval(image) == 0, "mu = {mu}");
        }
    }

    #[test]
    fn strip_membership_fixture() {
        let p = 7i64;
        let c = ctx(7, 8);
        let f = QpPoly::from_integers(&c, &[4 * p * p, 0, -5 * p, 0, 1]);
        let s = StripParams::new(1, 2).unwrap();
        let (member, r) = strip_membership(&f, &s).unwrap();
        assert!(member);
        assert_eq!(r.unwrap(), FpPoly::from_i64(7, &[4, -5, 1]).unwrap());
    }

    #[test]
    fn strip_membership_rejections() {
        let p = 5i64;
        let c = ctx(5, 10);
        let s = StripParams::new(1, 2).unwrap();
        // mixed slopes: member = false without error
        let mixed = QpPoly::from_integers(&c, &[p * p * p, 0, -(p + p * p), 0, 1]);
        assert_eq!(strip_membership(&mixed, &s).unwrap(), (false, None));
        // non-separable reduction: member = false
        let collide =
            QpPoly::from_integers(&c, &[p * p * (1 + p), 0, -(2 * p + p * p), 0, 1]);
        assert_eq!(strip_membership(&collide, &s).unwrap(), (false, None));
        // odd polynomial is a precondition violation
        let odd = QpPoly::from_integers(&c, &[1, 1, 1]);
        assert!(matches!(
            strip_membership(&odd, &s),
            Err(OrbitalError::BadInput(_))
        ));
    }

    #[test]
    fn tube_label_determines_the_curve_count() {
        // two strip elements with the same reduced polynomial lie in the
        // same tube; the attached curve count depends only on R_X
        let p = 7i64;
        let c = ctx(7, 10);
        let s = StripParams::new(1, 2).unwrap();
        let first = QpPoly::from_integers(&c, &[4 * p * p, 0, -5 * p, 0, 1]);
        // roots t^2 = p(1+p) and 4p(1+p^2): reductions 1 and 4 again
        let t1 = p * (1 + p);
        let t2 = 4 * p * (1 + p * p);
        let second = QpPoly::from_integers(&c, &[t1 * t2, 0, -(t1 + t2), 0, 1]);
        let (m1, r1) = strip_membership(&first, &s).unwrap();
        let (m2, r2) = strip_membership(&second, &s).unwrap();
        assert!(m1 && m2);
        let r1 = r1.unwrap();
        let r2 = r2.unwrap();
        assert_eq!(r1, r2);
        assert_eq!(
            crate::orbital::curve_point_count(&r1).unwrap(),
            crate::orbital::curve_point_count(&r2).unwrap()
        );
    }

    #[test]
    fn transfer_support_fixtures() {
        let q = Rationals;
        let py0 = Poly::from_i64(&q, &[-1, 0, 1]); // lambda^2 - 1
        let pz0 = Poly::from_i64(&q, &[-4, 0, 1]); // lambda^2 - 4
        // PX = lambda (lambda^2-1)(lambda^2-4) = lambda^5 - 5 lambda^3 + 4 lambda
        let px = Poly::from_i64(&q, &[0, 4, 0, -5, 0, 1]);
        assert!(transfer_support(&q, &px, &py0, &pz0).unwrap());
        // repeated roots force a vanishing resultant
        let px_sq = Poly::x_power(&q, 1).mul(&q, &py0).mul(&q, &py0);
        assert!(!transfer_support(&q, &px_sq, &py0, &py0).unwrap());
        // product mismatch
        let small = Poly::x_power(&q, 1).mul(&q, &py0);
        assert!(!transfer_support(&q, &small, &py0, &pz0).unwrap());
        // PX(0) != 0 is malformed
        assert!(matches!(
            transfer_support(&q, &py0, &py0, &pz0),
            Err(OrbitalError::BadInput(_))
        ));
    }

    #[test]
    fn transfer_support_is_symmetric() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        for _ in 0..20 {
            let roots_y: Vec<i64> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(-4..5)).collect();
            let roots_z: Vec<i64> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(-4..5)).collect();
            let build = |roots: &[i64]| {
                roots.iter().fold(Poly::one(&q), |acc, &r| {
                    acc.mul(&q, &Poly::from_i64(&q, &[-r, 1]))
                })
            };
            let py = build(&roots_y);
            let pz = build(&roots_z);
            let px = Poly::x_power(&q, 1).mul(&q, &py).mul(&q, &pz);
            let ab = transfer_support(&q, &px, &py, &pz).unwrap();
            let ba = transfer_support(&q, &px, &pz, &py).unwrap();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn transfer_support_over_prime_fields() {
        let f7 = PrimeField::new(7);
        let py0 = Poly::from_i64(&f7, &[-1, 0, 1]);
        let pz0 = Poly::from_i64(&f7, &[-4, 0, 1]);
        let px = Poly::from_i64(&f7, &[0, 4, 0, -5, 0, 1]);
        assert!(transfer_support(&f7, &px, &py0, &pz0).unwrap());
    }

    #[test]
    fn resultant_wrapper_rejects_zero() {
        let q = Rationals;
        let f = Poly::from_i64(&q, &[1, 1]);
        assert!(matches!(
            resultant(&q, &f, &Poly::zero()),
            Err(OrbitalError::ZeroPolynomial)
        ));
    }
}
