//! Affine point counts for the curves attached to strip elements:
//! `y^2 = R(lambda^2)` for a quadratic R, and the two-parameter family
//! `y^2 = x^4 + a x^2 + b`.
//!
//! Counts are affine and exhaustive, with a precomputed table of square-root
//! multiplicities. A projective smooth model would shift the count by a
//! bounded, model-dependent correction; the affine count is reproducible
//! without fixing a model, and the smooth flag exposes when the quartic
//! degenerates.

use super::{FpPoly, OrbitalError};

/// An affine point count of a quartic curve over F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveCount {
    pub p: u64,
    pub affine: u64,
    pub smooth: bool,
}

impl CurveCount {
    /// The Weil property for a smooth quartic: |count - p| <= 3 sqrt(p).
    pub fn within_weil_bound(&self) -> bool {
        let diff = self.affine as i64 - self.p as i64;
        (diff * diff) as u64 <= 9 * self.p
    }
}

/// Multiplicity table: `table[t]` is the number of y in F_p with y^2 = t.
fn square_table(p: u64) -> Vec<u64> {
    let mut table = vec![0u64; p as usize];
    for y in 0..p {
        let sq = (y as u128 * y as u128 % p as u128) as usize;
        table[sq] += 1;
    }
    table
}

/// Counts the affine points of `y^2 = R(lambda^2)` for a quadratic R over
/// F_p. The smooth flag records whether `R(lambda^2)` is squarefree, i.e.
/// R separable with R(0) != 0.
pub fn curve_point_count(r: &FpPoly) -> Result<CurveCount, OrbitalError> {
    let p = r.prime();
    match r.degree() {
        Some(2) => {}
        d => {
            return Err(OrbitalError::WrongDegree {
                expected: 2,
                found: d.map_or(0, |d| d),
            })
        }
    }
    let table = square_table(p);
    let mut affine = 0u64;
    for lambda in 0..p {
        let arg = (lambda as u128 * lambda as u128 % p as u128) as u64;
        affine += table[r.eval(arg) as usize];
    }
    let smooth = r.is_separable() && r.eval(0) != 0;
    Ok(CurveCount { p, affine, smooth })
}

/// Counts the affine points of `y^2 = x^4 + a x^2 + b` over F_p by direct
/// evaluation of the quartic. Agrees with [`curve_point_count`] on
/// `mu^2 + a mu + b` since the defining polynomials coincide.
pub fn family_count(a: i64, b: i64, p: u64) -> Result<CurveCount, OrbitalError> {
    if !crate::poly::is_prime(p) || p == 2 {
        return Err(OrbitalError::NotOddPrime(p));
    }
    let pa = a.rem_euclid(p as i64) as u128;
    let pb = b.rem_euclid(p as i64) as u128;
    let table = square_table(p);
    let mut affine = 0u64;
    let pp = p as u128;
    for x in 0..pp {
        let x2 = x * x % pp;
        let value = ((x2 * x2 + pa * x2) % pp + pb) % pp;
        affine += table[value as usize];
    }
    let e = FpPoly::from_i64(p, &[b, a, 1])?;
    let smooth = e.is_separable() && b.rem_euclid(p as i64) != 0;
    Ok(CurveCount { p, affine, smooth })
}
