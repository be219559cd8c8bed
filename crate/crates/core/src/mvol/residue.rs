//! The residue-condition catalog and its symbolic counts.
//!
//! Each catalog condition has a count over F_q that is one fixed element of
//! Q(L), valid for every odd prime outside a finite bad set (constants
//! colliding mod p, constants vanishing mod p). Conditions whose count
//! genuinely depends on the prime (e.g. "equals 2 and is a square", which
//! hinges on the quadratic character of 2) are outside the catalog and
//! rejected.

use std::collections::BTreeSet;

use super::MvolError;
use crate::motive::MotiveValue;
use crate::poly::odd_prime_divisors;

/// A condition on one residue-field value.
#[derive(Debug, Clone, PartialEq)]
pub enum ResidueCondition {
    /// The full residue line (no constraint).
    Any,
    /// Nonzero.
    Nonzero,
    /// Equal to the reduction of a fixed integer.
    Equals(i64),
    /// A nonzero square.
    NonzeroSquare,
    And(Box<ResidueCondition>, Box<ResidueCondition>),
    Or(Box<ResidueCondition>, Box<ResidueCondition>),
    Not(Box<ResidueCondition>),
}

impl ResidueCondition {
    pub fn and(a: ResidueCondition, b: ResidueCondition) -> Self {
        ResidueCondition::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ResidueCondition, b: ResidueCondition) -> Self {
        ResidueCondition::Or(Box::new(a), Box::new(b))
    }

    pub fn not(a: ResidueCondition) -> Self {
        ResidueCondition::Not(Box::new(a))
    }

    /// Truth of the condition at a concrete residue for a concrete odd
    /// prime. This is the semantic reference for [`residue_count`].
    pub fn holds_at(&self, xi: u64, p: u64) -> bool {
        let xi = xi % p;
        match self {
            ResidueCondition::Any => true,
            ResidueCondition::Nonzero => xi != 0,
            ResidueCondition::Equals(c) => xi == c.rem_euclid(p as i64) as u64,
            ResidueCondition::NonzeroSquare => {
                xi != 0 && (1..p).any(|y| (y as u128 * y as u128 % p as u128) as u64 == xi)
            }
            ResidueCondition::And(a, b) => a.holds_at(xi, p) && b.holds_at(xi, p),
            ResidueCondition::Or(a, b) => a.holds_at(xi, p) || b.holds_at(xi, p),
            ResidueCondition::Not(a) => !a.holds_at(xi, p),
        }
    }
}

#[derive(Debug, Default)]
struct Atoms {
    has_nonzero: bool,
    has_square: bool,
    constants: Vec<i64>,
}

fn collect_atoms(c: &ResidueCondition, atoms: &mut Atoms) {
    match c {
        ResidueCondition::Any => {}
        ResidueCondition::Nonzero => atoms.has_nonzero = true,
        ResidueCondition::NonzeroSquare => atoms.has_square = true,
        ResidueCondition::Equals(v) => {
            if !atoms.constants.contains(v) {
                atoms.constants.push(*v);
            }
        }
        ResidueCondition::And(a, b) | ResidueCondition::Or(a, b) => {
            collect_atoms(a, atoms);
            collect_atoms(b, atoms);
        }
        ResidueCondition::Not(a) => collect_atoms(a, atoms),
    }
}

/// Truth assignment to the atoms of a condition.
struct Minterm {
    nonzero: Option<bool>,
    square: Option<bool>,
    /// (constant, asserted-equal)
    equalities: Vec<(i64, bool)>,
}

fn eval_under(c: &ResidueCondition, m: &Minterm) -> bool {
    match c {
        ResidueCondition::Any => true,
        ResidueCondition::Nonzero => m.nonzero.unwrap(),
        ResidueCondition::NonzeroSquare => m.square.unwrap(),
        ResidueCondition::Equals(v) => {
            m.equalities.iter().find(|(c, _)| c == v).unwrap().1
        }
        ResidueCondition::And(a, b) => eval_under(a, m) && eval_under(b, m),
        ResidueCondition::Or(a, b) => eval_under(a, m) || eval_under(b, m),
        ResidueCondition::Not(a) => !eval_under(a, m),
    }
}

fn is_perfect_square(c: i64) -> Option<i64> {
    if c < 0 {
        return None;
    }
    let r = (c as f64).sqrt().round() as i64;
    for cand in [r - 1, r, r + 1] {
        if cand >= 0 && cand * cand == c {
            return Some(cand);
        }
    }
    None
}

fn half(v: MotiveValue) -> MotiveValue {
    use num::bigint::BigInt;
    use num::rational::BigRational;
    &v * &MotiveValue::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)))
}

fn l_minus(n: i64) -> MotiveValue {
    &MotiveValue::lefschetz() - &MotiveValue::from_integer(n)
}

/// Counts one minterm. Returns the generic count and the primes where a
/// genericity assumption (distinctness, nonvanishing, integral squareness)
/// breaks.
fn minterm_count(m: &Minterm) -> Result<(MotiveValue, BTreeSet<u64>), MvolError> {
    let mut bads: BTreeSet<u64> = BTreeSet::new();
    let add_bads = |n: i64, bads: &mut BTreeSet<u64>| {
        for p in odd_prime_divisors(n) {
            bads.insert(p);
        }
    };
    let positives: Vec<i64> =
        m.equalities.iter().filter(|(_, s)| *s).map(|(c, _)| *c).collect();
    let negatives: Vec<i64> =
        m.equalities.iter().filter(|(_, s)| !*s).map(|(c, _)| *c).collect();

    if positives.len() > 1 {
        // distinct integers cannot both hold; they collide at p | c - c2
        for (i, &a) in positives.iter().enumerate() {
            for &b in positives.iter().skip(i + 1) {
                add_bads(a - b, &mut bads);
            }
        }
        return Ok((MotiveValue::zero(), bads));
    }

    if let Some(&c) = positives.first() {
        // the value is pinned to a constant
        let mut alive = true;
        match m.nonzero {
            Some(true) => {
                if c == 0 {
                    alive = false;
                } else {
                    add_bads(c, &mut bads);
                }
            }
            Some(false) => {
                if c != 0 {
                    add_bads(c, &mut bads);
                    alive = false;
                }
            }
            None => {}
        }
        for &c2 in &negatives {
            if c2 == c {
                alive = false;
            } else {
                add_bads(c - c2, &mut bads);
            }
        }
        match m.square {
            Some(want) => match is_perfect_square(c) {
                Some(0) => {
                    // 0 is never a nonzero square
                    if want {
                        alive = false;
                    }
                }
                Some(_) => {
                    add_bads(c, &mut bads);
                    if !want {
                        alive = false;
                    }
                }
                None => {
                    return Err(MvolError::OutsideCatalog(format!(
                        "whether {c} is a square depends on the prime"
                    )))
                }
            },
            None => {}
        }
        let count = if alive { MotiveValue::one() } else { MotiveValue::zero() };
        return Ok((count, bads));
    }

    if m.nonzero == Some(false) {
        // the value is pinned to zero
        let mut alive = m.square != Some(true);
        for &c2 in &negatives {
            if c2 == 0 {
                alive = false;
            } else {
                add_bads(c2, &mut bads);
            }
        }
        let count = if alive { MotiveValue::one() } else { MotiveValue::zero() };
        return Ok((count, bads));
    }

    // base set determined by the nonzero/square literals
    let includes_zero = m.nonzero.is_none() && m.square != Some(true);
    let mut count = match (m.nonzero, m.square) {
        (None, None) => MotiveValue::lefschetz(),
        (Some(true), None) => l_minus(1),
        (_, Some(true)) => half(l_minus(1)),
        (Some(true), Some(false)) => half(l_minus(1)),
        (None, Some(false)) => half(&MotiveValue::lefschetz() + &MotiveValue::one()),
        (Some(false), _) => unreachable!("handled above"),
    };

    // exclusions
    let mut subtracted: Vec<i64> = Vec::new();
    for &c2 in &negatives {
        if c2 == 0 {
            if includes_zero {
                count = &count - &MotiveValue::one();
                subtracted.push(c2);
            }
            continue;
        }
        match m.square {
            None => {
                // a nonzero constant is generically in the base set
                count = &count - &MotiveValue::one();
                subtracted.push(c2);
                if m.nonzero == Some(true) {
                    add_bads(c2, &mut bads);
                }
            }
            Some(want) => match is_perfect_square(c2) {
                Some(_) => {
                    add_bads(c2, &mut bads);
                    if want {
                        count = &count - &MotiveValue::one();
                        subtracted.push(c2);
                    }
                }
                None => {
                    return Err(MvolError::OutsideCatalog(format!(
                        "whether {c2} is a square depends on the prime"
                    )))
                }
            },
        }
    }
    // two excluded constants colliding mod p would double-count
    for (i, &a) in subtracted.iter().enumerate() {
        for &b in subtracted.iter().skip(i + 1) {
            add_bads(a - b, &mut bads);
        }
    }
    Ok((count, bads))
}

/// The number of residues satisfying the condition, as an element of Q(L)
/// valid at every odd prime outside the returned bad set.
pub fn residue_count(
    cond: &ResidueCondition,
) -> Result<(MotiveValue, BTreeSet<u64>), MvolError> {
    let mut atoms = Atoms::default();
    collect_atoms(cond, &mut atoms);
    let k = atoms.constants.len()
        + usize::from(atoms.has_nonzero)
        + usize::from(atoms.has_square);
    if k > 16 {
        return Err(MvolError::OutsideCatalog(format!(
            "condition with {k} distinct atoms is too large"
        )));
    }

    let mut total = MotiveValue::zero();
    let mut bads: BTreeSet<u64> = BTreeSet::new();
    for mask in 0u32..(1 << k) {
        let mut bit = 0;
        let mut take = |present: bool| -> Option<bool> {
            if present {
                let v = mask >> bit & 1 == 1;
                bit += 1;
                Some(v)
            } else {
                None
            }
        };
        let nonzero = take(atoms.has_nonzero);
        let square = take(atoms.has_square);
        let equalities: Vec<(i64, bool)> = atoms
            .constants
            .iter()
            .map(|&c| (c, take(true).unwrap()))
            .collect();
        let m = Minterm { nonzero, square, equalities };
        if !eval_under(cond, &m) {
            continue;
        }
        let (count, b) = minterm_count(&m)?;
        total = &total + &count;
        bads.extend(b);
    }
    Ok((total, bads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::is_prime;

    fn count_at(cond: &ResidueCondition, p: u64) -> i64 {
        (0..p).filter(|&xi| cond.holds_at(xi, p)).count() as i64
    }

    /// Brute-force oracle: the specialized symbolic count must equal the
    /// enumerated count at every good odd prime.
    fn check_against_enumeration(cond: &ResidueCondition) {
        let (count, bads) = residue_count(cond).unwrap();
        for p in (3..40u64).filter(|p| is_prime(*p)) {
            if bads.contains(&p) {
                continue;
            }
            let expected = count_at(cond, p);
            let got = count.specialize_at_prime(p).unwrap();
            assert_eq!(
                got,
                num::rational::BigRational::from_integer(expected.into()),
                "condition {cond:?} at p = {p}"
            );
        }
    }

    #[test]
    fn unit_count() {
        let (count, bads) = residue_count(&ResidueCondition::Nonzero).unwrap();
        assert_eq!(count, l_minus(1));
        assert!(bads.is_empty());
        check_against_enumeration(&ResidueCondition::Nonzero);
    }

    #[test]
    fn nonzero_square_count() {
        let (count, bads) = residue_count(&ResidueCondition::NonzeroSquare).unwrap();
        assert_eq!(count, half(l_minus(1)));
        assert!(bads.is_empty());
        // brute counts: 2 of the 4 units at p = 5, 3 of the 6 at p = 7
        assert_eq!(count_at(&ResidueCondition::NonzeroSquare, 5), 2);
        assert_eq!(count_at(&ResidueCondition::NonzeroSquare, 7), 3);
        check_against_enumeration(&ResidueCondition::NonzeroSquare);
    }

    #[test]
    fn pinned_constant_with_unit_constraint() {
        let cond =
            ResidueCondition::and(ResidueCondition::Equals(3), ResidueCondition::Nonzero);
        let (count, bads) = residue_count(&cond).unwrap();
        assert_eq!(count, MotiveValue::one());
        assert_eq!(bads.into_iter().collect::<Vec<_>>(), vec![3]);
        check_against_enumeration(&cond);
    }

    #[test]
    fn catalog_counts_match_enumeration() {
        use ResidueCondition::*;
        let conds = vec![
            Any,
            Equals(0),
            Equals(7),
            Equals(-1),
            ResidueCondition::not(Equals(2)),
            ResidueCondition::and(Nonzero, ResidueCondition::not(Equals(3))),
            ResidueCondition::or(Equals(1), Equals(4)),
            ResidueCondition::or(Equals(2), Equals(5)),
            ResidueCondition::and(Nonzero, ResidueCondition::not(NonzeroSquare)),
            ResidueCondition::not(NonzeroSquare),
            ResidueCondition::and(NonzeroSquare, ResidueCondition::not(Equals(4))),
            ResidueCondition::and(Nonzero, ResidueCondition::or(Equals(1), Equals(6))),
            ResidueCondition::and(NonzeroSquare, Equals(9)),
            ResidueCondition::and(ResidueCondition::not(Equals(1)), ResidueCondition::not(Equals(2))),
            ResidueCondition::or(ResidueCondition::and(Nonzero, Equals(5)), Equals(0)),
        ];
        for cond in &conds {
            check_against_enumeration(cond);
        }
    }

    #[test]
    fn square_status_of_nonsquare_constants_is_rejected() {
        let cond =
            ResidueCondition::and(ResidueCondition::Equals(2), ResidueCondition::NonzeroSquare);
        assert!(matches!(
            residue_count(&cond),
            Err(MvolError::OutsideCatalog(_))
        ));
        let cond = ResidueCondition::and(
            ResidueCondition::NonzeroSquare,
            ResidueCondition::not(ResidueCondition::Equals(3)),
        );
        assert!(matches!(
            residue_count(&cond),
            Err(MvolError::OutsideCatalog(_))
        ));
    }

    #[test]
    fn contradictions_count_zero() {
        let cond = ResidueCondition::and(
            ResidueCondition::Nonzero,
            ResidueCondition::not(ResidueCondition::Nonzero),
        );
        let (count, bads) = residue_count(&cond).unwrap();
        assert!(count.is_zero());
        assert!(bads.is_empty());
    }
}
