//! Pas's three-sorted first-order language: abstract syntax, concrete text
//! grammar, sort checking, and utilities.

mod ast;
mod parse;

pub use ast::{Formula, Quantifier, Sort, Term, Var};
pub use parse::parse;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("sort error: {msg}")]
    Sort { msg: String },
    #[error("sampling requires group-sort free variables only; found {0}")]
    NonGroupFree(String),
}

/// Canonical text of a formula; round-trips through [`parse`].
pub fn print(f: &Formula) -> String {
    f.to_string()
}

/// Tests whether two formulas agree on `trials` pseudorandom integer
/// assignments to their free variables, all coordinates drawn uniformly from
/// `[-bound, bound]`, deterministically derived from `seed`. Quantifiers are
/// decided over the full integers, so this is a sampling oracle for
/// quantifier-elimination outputs, not a bounded model check.
///
/// Both formulas must have group-sort free variables only.
pub fn sample_equivalent(
    f: &Formula,
    g: &Formula,
    bound: u64,
    trials: u32,
    seed: u64,
) -> Result<bool, FormulaError> {
    let mut vars = f.free_variables();
    for v in g.free_variables() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    for v in &vars {
        if v.sort != Sort::Group {
            return Err(FormulaError::NonGroupFree(v.name()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = bound as i64;
    for _ in 0..trials {
        let mut fi = f.clone();
        let mut gi = g.clone();
        for v in &vars {
            let value = rng.gen_range(-bound..=bound);
            let term = int_term(value);
            fi = fi.substitute(*v, &term);
            gi = gi.substitute(*v, &term);
        }
        let fv = crate::presburger::decide(&fi).map_err(|e| FormulaError::Sort {
            msg: format!("left formula is not a closed Presburger sentence: {e}"),
        })?;
        let gv = crate::presburger::decide(&gi).map_err(|e| FormulaError::Sort {
            msg: format!("right formula is not a closed Presburger sentence: {e}"),
        })?;
        if fv != gv {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A group-sort literal term for an integer of either sign.
pub fn int_term(n: i64) -> Term {
    if n >= 0 {
        Term::int(n as u64, Sort::Group)
    } else {
        Term::neg(Term::int(n.unsigned_abs(), Sort::Group))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_group_quantifier_over_ord() {
        let f = parse("(exists m0 (= (+ m0 m0) (ord x0)))").unwrap();
        match &f {
            Formula::Quant(Quantifier::Exists, v, body) => {
                assert_eq!(*v, Var::group(0));
                match body.as_ref() {
                    Formula::Eq(a, b) => {
                        assert_eq!(a.sort(), Sort::Group);
                        assert_eq!(b.sort(), Sort::Group);
                    }
                    other => panic!("unexpected body {other:?}"),
                }
            }
            other => panic!("unexpected formula {other:?}"),
        }
    }

    #[test]
    fn parses_residue_atom() {
        let f = parse("(= (ac x0) 1)").unwrap();
        match &f {
            Formula::Eq(a, b) => {
                assert_eq!(a.sort(), Sort::Residue);
                assert_eq!(*b, Term::int(1, Sort::Residue));
            }
            other => panic!("unexpected formula {other:?}"),
        }
    }

    #[test]
    fn rejects_cross_sort_equality() {
        let err = parse("(= x0 m0)").unwrap_err();
        assert!(matches!(err, FormulaError::Sort { .. }), "{err}");
    }

    #[test]
    fn rejects_group_order_on_field_terms() {
        let err = parse("(< x0 x1)").unwrap_err();
        assert!(matches!(err, FormulaError::Sort { .. }), "{err}");
    }

    #[test]
    fn rejects_group_variable_products() {
        let err = parse("(= (* m0 m1) m2)").unwrap_err();
        assert!(matches!(err, FormulaError::Sort { .. }), "{err}");
        // constant * variable stays legal
        parse("(= (* 3 m0) m1)").unwrap();
        parse("(= (* m0 3) m1)").unwrap();
        // field and residue products are unrestricted
        parse("(= (* x0 x0) x1)").unwrap();
        parse("(= (* xi0 xi1) xi2)").unwrap();
    }

    #[test]
    fn syntax_error_carries_position() {
        match parse("(exists m0 (< m0 1)") {
            Err(FormulaError::Syntax { pos, .. }) => assert_eq!(pos, 19),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn print_is_canonical() {
        let f = parse("( exists   m0 (< m0 1 ))").unwrap();
        assert_eq!(print(&f), "(exists m0 (< m0 1))");
    }

    #[test]
    fn free_variables_in_first_occurrence_order() {
        let f = parse("(exists m0 (= (ord x0) m0))").unwrap();
        assert_eq!(f.free_variables(), vec![Var::field(0)]);

        let g = parse("(forall m0 (exists m1 (< m0 m1)))").unwrap();
        assert!(g.free_variables().is_empty());

        let h = parse("(and (= (ac x0) xi0) (< m0 1))").unwrap();
        assert_eq!(
            h.free_variables(),
            vec![Var::field(0), Var::residue(0), Var::group(0)]
        );
    }

    #[test]
    fn ambiguous_literal_atoms_default_to_group_sort() {
        let f = parse("(= (+ 1 1) 2)").unwrap();
        match &f {
            Formula::Eq(a, _) => assert_eq!(a.sort(), Sort::Group),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn roundtrip_on_random_asts() {
        // Random well-formed formulas built from a small grammar; the parse of
        // the canonical print must be structurally identical.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let f = random_formula(&mut rng, 3);
            let text = print(&f);
            let back = parse(&text).unwrap_or_else(|e| panic!("reparse of '{text}': {e}"));
            assert_eq!(back, f, "round-trip failed for {text}");
        }
    }

    fn random_group_term(rng: &mut ChaCha8Rng, depth: u32) -> Term {
        if depth == 0 {
            return match rng.gen_range(0..3) {
                0 => Term::var(Var::group(rng.gen_range(0..3))),
                1 => Term::int(rng.gen_range(0..10), Sort::Group),
                _ => Term::ord_of(Term::var(Var::field(rng.gen_range(0..2)))),
            };
        }
        match rng.gen_range(0..4) {
            0 => Term::add(
                random_group_term(rng, depth - 1),
                random_group_term(rng, depth - 1),
            ),
            1 => Term::mul(
                Term::int(rng.gen_range(0..5), Sort::Group),
                random_group_term(rng, depth - 1),
            ),
            2 => Term::neg(random_group_term(rng, depth - 1)),
            _ => random_group_term(rng, depth - 1),
        }
    }

    fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
        if depth == 0 {
            return match rng.gen_range(0..4) {
                0 => Formula::Eq(random_group_term(rng, 1), random_group_term(rng, 1)),
                1 => Formula::Lt(random_group_term(rng, 1), random_group_term(rng, 1)),
                2 => Formula::Divides(rng.gen_range(1..6), random_group_term(rng, 1)),
                _ => Formula::Eq(
                    Term::ac_of(Term::var(Var::field(0))),
                    Term::int(rng.gen_range(0..5), Sort::Residue),
                ),
            };
        }
        match rng.gen_range(0..5) {
            0 => Formula::and(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
            1 => Formula::or(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
            2 => Formula::not(random_formula(rng, depth - 1)),
            3 => Formula::exists(Var::group(rng.gen_range(0..3)), random_formula(rng, depth - 1)),
            _ => Formula::forall(Var::group(rng.gen_range(0..3)), random_formula(rng, depth - 1)),
        }
    }

    #[test]
    fn sample_equivalent_parity() {
        let f = parse("(exists m1 (= (+ m1 m1) m0))").unwrap();
        let g = parse("(divides 2 m0)").unwrap();
        assert!(sample_equivalent(&f, &g, 50, 200, 1).unwrap());
    }

    #[test]
    fn sample_equivalent_detects_difference() {
        let f = parse("(< m0 1)").unwrap();
        let g = parse("(< m0 2)").unwrap();
        // the witness m0 = 1 appears quickly at bound 50
        assert!(!sample_equivalent(&f, &g, 50, 500, 3).unwrap());
    }

    #[test]
    fn sample_equivalent_reflexive() {
        let f = parse("(exists m1 (< m0 m1))").unwrap();
        for seed in [0u64, 1, 42] {
            assert!(sample_equivalent(&f, &f, 10, 50, seed).unwrap());
        }
    }

    #[test]
    fn sample_equivalent_rejects_field_free_variables() {
        let f = parse("(= (ord x0) 0)").unwrap();
        let err = sample_equivalent(&f, &f, 10, 10, 0).unwrap_err();
        assert!(matches!(err, FormulaError::NonGroupFree(_)));
    }
}
