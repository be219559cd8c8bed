//! Symbolic motivic volume for one-field-variable formulas via cell
//! decomposition, and the specialization-vs-enumeration comparison harness.
//!
//! The supported fragment: boolean combinations of value-group atoms on
//! `ord x` (with group quantifiers, eliminated internally) and catalog
//! conditions on `ac x` (equality with a constant, the nonzero-square
//! pattern `exists xi (xi*xi = ac x)`). Decomposition splits the solution
//! set into cells `{x : ord x in S, ac x |= C}` with pairwise disjoint
//! residue conditions; each eventually periodic ord-set `S` is summed in
//! closed form as a finite prefix plus geometric series, one per arithmetic
//! progression.

mod residue;

pub use residue::{residue_count, ResidueCondition};

use std::collections::BTreeSet;

use num::rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Quantifier, Sort, Term, Var};
use crate::motive::{geometric_sum, MotiveError, MotiveValue};
use crate::padic::{self, PadicContext, PadicError};
use crate::poly::rational_string;
use crate::presburger::{self, PresburgerError};

#[derive(Debug, Error)]
pub enum MvolError {
    #[error("outside the one-variable fragment: {0}")]
    OutsideFragment(String),
    #[error("outside the residue-condition catalog: {0}")]
    OutsideCatalog(String),
    #[error("formula must have exactly one free field variable, found {0:?}")]
    WrongFreeVariables(Vec<String>),
    #[error(transparent)]
    Presburger(#[from] PresburgerError),
    #[error(transparent)]
    Motive(#[from] MotiveError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("ord-set period {0} is too large")]
    PeriodTooLarge(u64),
}

/// One cell of a decomposition: the set of x with `ord x` in the set carved
/// out by a quantifier-free one-variable Presburger formula (variable `m0`,
/// `m0 >= 0` implied) whose angular component satisfies the residue
/// condition.
#[derive(Debug, Clone)]
pub struct Cell {
    pub ord_set: Formula,
    pub residue: ResidueCondition,
}

// The boolean skeleton of a fragment formula over its two kinds of leaves.
enum Skeleton {
    Ord(Formula),
    Res(usize),
    And(Box<Skeleton>, Box<Skeleton>),
    Or(Box<Skeleton>, Box<Skeleton>),
    Not(Box<Skeleton>),
}

struct Translator {
    x: Var,
    ell: Var,
    residues: Vec<ResidueCondition>,
}

impl Translator {
    fn formula(&mut self, f: &Formula) -> Result<Skeleton, MvolError> {
        match f {
            Formula::Eq(a, b) => match a.sort() {
                Sort::Group => Ok(Skeleton::Ord(Formula::Eq(
                    self.group_term(a)?,
                    self.group_term(b)?,
                ))),
                Sort::Residue => self.residue_atom(a, b),
                Sort::Field => Err(MvolError::OutsideFragment(format!(
                    "field-sort atom (= {a} {b})"
                ))),
            },
            Formula::Lt(a, b) => Ok(Skeleton::Ord(Formula::Lt(
                self.group_term(a)?,
                self.group_term(b)?,
            ))),
            Formula::Divides(n, t) => {
                Ok(Skeleton::Ord(Formula::Divides(*n, self.group_term(t)?)))
            }
            Formula::And(a, b) => {
                Ok(Skeleton::And(Box::new(self.formula(a)?), Box::new(self.formula(b)?)))
            }
            Formula::Or(a, b) => {
                Ok(Skeleton::Or(Box::new(self.formula(a)?), Box::new(self.formula(b)?)))
            }
            Formula::Not(a) => Ok(Skeleton::Not(Box::new(self.formula(a)?))),
            Formula::Quant(q, v, body) => match v.sort {
                Sort::Group => {
                    let inner = self.formula(body)?;
                    let assembled = assemble_ord(&inner).ok_or_else(|| {
                        MvolError::OutsideFragment(
                            "residue condition under a group quantifier".into(),
                        )
                    })?;
                    let quantified = Formula::Quant(*q, *v, Box::new(assembled));
                    let eliminated = presburger::eliminate(&quantified)?;
                    Ok(Skeleton::Ord(eliminated))
                }
                Sort::Residue => {
                    if *q != Quantifier::Exists {
                        return Err(MvolError::OutsideFragment(
                            "universal residue quantifier".into(),
                        ));
                    }
                    self.square_pattern(*v, body)
                }
                Sort::Field => Err(MvolError::OutsideFragment(
                    "field-sort quantifier".into(),
                )),
            },
        }
    }

    /// Group terms of the fragment: linear in `ord x`, which is renamed to
    /// the working variable.
    fn group_term(&self, t: &Term) -> Result<Term, MvolError> {
        match t {
            Term::Var(v) => {
                if v.sort == Sort::Group {
                    Ok(t.clone())
                } else {
                    Err(MvolError::OutsideFragment(format!("variable {} in a group term", v.name())))
                }
            }
            Term::Int(_, _) => Ok(t.clone()),
            Term::Add(a, b) => Ok(Term::add(self.group_term(a)?, self.group_term(b)?)),
            Term::Mul(a, b) => Ok(Term::mul(self.group_term(a)?, self.group_term(b)?)),
            Term::Neg(a) => Ok(Term::neg(self.group_term(a)?)),
            Term::Ord(inner) => match inner.as_ref() {
                Term::Var(v) if *v == self.x => Ok(Term::var(self.ell)),
                other => Err(MvolError::OutsideFragment(format!(
                    "ord applied to {other}, not the free variable"
                ))),
            },
            Term::Ac(_) => Err(MvolError::OutsideFragment(format!("{t} in a group term"))),
        }
    }

    fn residue_atom(&mut self, a: &Term, b: &Term) -> Result<Skeleton, MvolError> {
        let (ac_side, other) = if is_ac_of(a, self.x) {
            (a, b)
        } else if is_ac_of(b, self.x) {
            (b, a)
        } else {
            return Err(MvolError::OutsideFragment(format!(
                "residue atom (= {a} {b}) does not compare ac of the free variable with a constant"
            )));
        };
        let _ = ac_side;
        let c = other.ground_value().ok_or_else(|| {
            MvolError::OutsideFragment(format!(
                "residue atom compares ac with the non-constant term {other}"
            ))
        })?;
        let idx = self.residues.len();
        self.residues.push(ResidueCondition::Equals(c));
        Ok(Skeleton::Res(idx))
    }

    /// Recognizes `exists xi (xi*xi = ac x)` as the nonzero-square condition
    /// (every nonzero x has nonzero ac, so the xi = 0 witness is vacuous).
    fn square_pattern(&mut self, v: Var, body: &Formula) -> Result<Skeleton, MvolError> {
        if let Formula::Eq(a, b) = body {
            let matches = (is_square_of(a, v) && is_ac_of(b, self.x))
                || (is_square_of(b, v) && is_ac_of(a, self.x));
            if matches {
                let idx = self.residues.len();
                self.residues.push(ResidueCondition::NonzeroSquare);
                return Ok(Skeleton::Res(idx));
            }
        }
        Err(MvolError::OutsideFragment(format!(
            "residue quantifier body {body} is not the square pattern (= (* {v} {v}) (ac x))",
            v = v.name()
        )))
    }
}

fn is_ac_of(t: &Term, x: Var) -> bool {
    matches!(t, Term::Ac(inner) if matches!(inner.as_ref(), Term::Var(v) if *v == x))
}

fn is_square_of(t: &Term, v: Var) -> bool {
    matches!(t, Term::Mul(a, b)
        if matches!(a.as_ref(), Term::Var(w) if *w == v)
        && matches!(b.as_ref(), Term::Var(w) if *w == v))
}

/// Rebuilds a formula from a skeleton with no residue leaves.
fn assemble_ord(s: &Skeleton) -> Option<Formula> {
    match s {
        Skeleton::Ord(f) => Some(f.clone()),
        Skeleton::Res(_) => None,
        Skeleton::And(a, b) => Some(Formula::and(assemble_ord(a)?, assemble_ord(b)?)),
        Skeleton::Or(a, b) => Some(Formula::or(assemble_ord(a)?, assemble_ord(b)?)),
        Skeleton::Not(a) => Some(Formula::not(assemble_ord(a)?)),
    }
}

enum Reduced {
    Const(bool),
    Ord(Formula),
}

/// Partial evaluation of the skeleton under a sign pattern for the residue
/// leaves.
fn reduce(s: &Skeleton, signs: u32) -> Reduced {
    match s {
        Skeleton::Ord(f) => Reduced::Ord(f.clone()),
        Skeleton::Res(i) => Reduced::Const(signs >> i & 1 == 1),
        Skeleton::And(a, b) => match (reduce(a, signs), reduce(b, signs)) {
            (Reduced::Const(false), _) | (_, Reduced::Const(false)) => Reduced::Const(false),
            (Reduced::Const(true), r) | (r, Reduced::Const(true)) => r,
            (Reduced::Ord(f), Reduced::Ord(g)) => Reduced::Ord(Formula::and(f, g)),
        },
        Skeleton::Or(a, b) => match (reduce(a, signs), reduce(b, signs)) {
            (Reduced::Const(true), _) | (_, Reduced::Const(true)) => Reduced::Const(true),
            (Reduced::Const(false), r) | (r, Reduced::Const(false)) => r,
            (Reduced::Ord(f), Reduced::Ord(g)) => Reduced::Ord(Formula::or(f, g)),
        },
        Skeleton::Not(a) => match reduce(a, signs) {
            Reduced::Const(b) => Reduced::Const(!b),
            Reduced::Ord(f) => Reduced::Ord(Formula::not(f)),
        },
    }
}

fn the_free_field_variable(f: &Formula) -> Result<Var, MvolError> {
    let free = f.free_variables();
    let fields: Vec<Var> = free.iter().copied().filter(|v| v.sort == Sort::Field).collect();
    if fields.len() != 1 || free.len() != 1 {
        return Err(MvolError::WrongFreeVariables(
            free.iter().map(|v| v.name()).collect(),
        ));
    }
    Ok(fields[0])
}

fn max_group_index(f: &Formula) -> u32 {
    fn term(t: &Term, acc: &mut u32) {
        match t {
            Term::Var(v) if v.sort == Sort::Group => *acc = (*acc).max(v.index + 1),
            Term::Add(a, b) | Term::Mul(a, b) => {
                term(a, acc);
                term(b, acc);
            }
            Term::Neg(a) | Term::Ord(a) | Term::Ac(a) => term(a, acc),
            _ => {}
        }
    }
    fn walk(f: &Formula, acc: &mut u32) {
        match f {
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                term(a, acc);
                term(b, acc);
            }
            Formula::Divides(_, t) => term(t, acc),
            Formula::And(a, b) | Formula::Or(a, b) => {
                walk(a, acc);
                walk(b, acc);
            }
            Formula::Not(a) => walk(a, acc),
            Formula::Quant(_, v, body) => {
                if v.sort == Sort::Group {
                    *acc = (*acc).max(v.index + 1);
                }
                walk(body, acc);
            }
        }
    }
    let mut acc = 0;
    walk(f, &mut acc);
    acc
}

/// Decomposes a fragment formula into disjoint cells whose union is its
/// solution set (minus the single point 0, which has measure zero).
pub fn cell_decompose(f: &Formula) -> Result<Vec<Cell>, MvolError> {
    let x = the_free_field_variable(f)?;
    let ell = Var::group(max_group_index(f));
    let mut tr = Translator { x, ell, residues: Vec::new() };
    let skeleton = tr.formula(f)?;
    let k = tr.residues.len();
    if k > 16 {
        return Err(MvolError::OutsideCatalog(format!(
            "{k} residue atoms is too many"
        )));
    }

    let mut cells = Vec::new();
    for signs in 0u32..(1 << k) {
        let ord_set = match reduce(&skeleton, signs) {
            Reduced::Const(false) => continue,
            Reduced::Const(true) => {
                // all of l >= 0
                Formula::not(Formula::Lt(
                    Term::var(ell),
                    Term::int(0, Sort::Group),
                ))
            }
            Reduced::Ord(formula) => formula,
        };
        // group quantifiers inside the pieces are already gone; rename the
        // working variable to the conventional m0
        let ord_set = presburger::eliminate(&ord_set)?;
        let ord_set = ord_set.substitute(ell, &Term::var(Var::group(0)));
        let mut residue = ResidueCondition::Nonzero;
        for (i, r) in tr.residues.iter().enumerate() {
            let lit = if signs >> i & 1 == 1 {
                r.clone()
            } else {
                ResidueCondition::not(r.clone())
            };
            residue = ResidueCondition::and(residue, lit);
        }
        cells.push(Cell { ord_set, residue });
    }
    Ok(cells)
}

/// The eventually periodic ord-set as an explicit finite prefix plus
/// arithmetic progressions `{start, start + period, ...}`.
fn ord_set_progressions(ord_set: &Formula) -> Result<(Vec<u64>, Vec<(u64, u64)>), MvolError> {
    let ell = Var::group(0);
    // the period divides the lcm of all divisibility moduli
    let mut period: u64 = 1;
    let mut threshold: i64 = 1;
    analyze(ord_set, &mut period, &mut threshold)?;
    let threshold = threshold.max(0) as u64;

    let member = |l: u64| -> Result<bool, MvolError> {
        let inst = ord_set.substitute(ell, &crate::formula::int_term(l as i64));
        Ok(presburger::decide(&inst)?)
    };

    let mut prefix = Vec::new();
    for l in 0..threshold {
        if member(l)? {
            prefix.push(l);
        }
    }
    let mut progressions = Vec::new();
    for offset in 0..period {
        let start = threshold + offset;
        if member(start)? {
            progressions.push((start, period));
        }
    }
    Ok((prefix, progressions))
}

/// Collects the period (lcm of divides moduli) and a threshold beyond which
/// every comparison atom has constant truth on each residue class.
fn analyze(f: &Formula, period: &mut u64, threshold: &mut i64) -> Result<(), MvolError> {
    match f {
        Formula::Divides(n, t) => {
            *period = lcm_u64(*period, *n).ok_or(MvolError::PeriodTooLarge(*n))?;
            if *period > 1_000_000 {
                return Err(MvolError::PeriodTooLarge(*period));
            }
            let _ = t;
            Ok(())
        }
        Formula::Eq(a, b) | Formula::Lt(a, b) => {
            let (c, d) = linear_in_ell(a, b)?;
            if c != 0 {
                let crit = d.abs() / c.abs() + 2;
                *threshold = (*threshold).max(crit);
            }
            Ok(())
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            analyze(a, period, threshold)?;
            analyze(b, period, threshold)
        }
        Formula::Not(a) => analyze(a, period, threshold),
        Formula::Quant(_, _, _) => Err(MvolError::OutsideFragment(
            "quantifier survived elimination in an ord-set".into(),
        )),
    }
}

fn lcm_u64(a: u64, b: u64) -> Option<u64> {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// The atom `a ?= b` as `c*l + d ?= 0` data: returns (c, d) for b - a.
fn linear_in_ell(a: &Term, b: &Term) -> Result<(i64, i64), MvolError> {
    fn walk(t: &Term, sign: i64, c: &mut i64, d: &mut i64) -> Result<(), MvolError> {
        match t {
            Term::Var(_) => {
                *c += sign;
                Ok(())
            }
            Term::Int(n, _) => {
                *d += sign * *n as i64;
                Ok(())
            }
            Term::Add(x, y) => {
                walk(x, sign, c, d)?;
                walk(y, sign, c, d)
            }
            Term::Neg(x) => walk(x, -sign, c, d),
            Term::Mul(x, y) => {
                if let Some(k) = x.ground_value() {
                    walk(y, sign * k, c, d)
                } else if let Some(k) = y.ground_value() {
                    walk(x, sign * k, c, d)
                } else {
                    Err(MvolError::OutsideFragment(format!("nonlinear term {t}")))
                }
            }
            Term::Ord(_) | Term::Ac(_) => {
                Err(MvolError::OutsideFragment(format!("{t} inside an ord-set")))
            }
        }
    }
    let (mut c, mut d) = (0i64, 0i64);
    walk(b, 1, &mut c, &mut d)?;
    walk(a, -1, &mut c, &mut d)?;
    Ok((c, d))
}

/// Symbolic motivic volume of the solution set of a fragment formula, with
/// the finite set of bad primes where the symbolic residue counts fail.
pub fn motivic_volume(f: &Formula) -> Result<(MotiveValue, BTreeSet<u64>), MvolError> {
    motivic_monomial_integral(f, 0)
}

/// Symbolic value of the integral of |x|^a over the solution set: the sum
/// over cells and valuation levels l of `residue_count * L^{-l-1} * L^{-a*l}`,
/// each progression summed in closed form.
pub fn motivic_monomial_integral(
    f: &Formula,
    exponent: u32,
) -> Result<(MotiveValue, BTreeSet<u64>), MvolError> {
    let cells = cell_decompose(f)?;
    let a = exponent as i64;
    let mut total = MotiveValue::zero();
    let mut bad_primes = BTreeSet::new();
    for cell in &cells {
        let (count, bads) = residue_count(&cell.residue)?;
        bad_primes.extend(bads);
        if count.is_zero() {
            continue;
        }
        let (prefix, progressions) = ord_set_progressions(&cell.ord_set)?;
        let mut levels = MotiveValue::zero();
        for l in prefix {
            levels = &levels + &MotiveValue::l_power(-((a + 1) * l as i64 + 1));
        }
        for (start, period) in progressions {
            let d = (a + 1) * period as i64;
            let e = (a + 1) * start as i64 + 1;
            levels = &levels + &geometric_sum(d, e)?;
        }
        total = &total + &(&count * &levels);
    }
    Ok((total, bad_primes))
}

/// Replaces every maximal group-quantified subformula by its quantifier-free
/// equivalent, leaving the rest of the formula untouched, so the result can
/// be fed to the p-adic evaluator.
pub fn eliminate_group_quantifiers(f: &Formula) -> Result<Formula, MvolError> {
    let x = the_free_field_variable(f)?;
    let ell = Var::group(max_group_index(f));
    elim_rec(f, x, ell)
}

fn elim_rec(f: &Formula, x: Var, ell: Var) -> Result<Formula, MvolError> {
    match f {
        Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::Divides(_, _) => Ok(f.clone()),
        Formula::And(a, b) => Ok(Formula::and(elim_rec(a, x, ell)?, elim_rec(b, x, ell)?)),
        Formula::Or(a, b) => Ok(Formula::or(elim_rec(a, x, ell)?, elim_rec(b, x, ell)?)),
        Formula::Not(a) => Ok(Formula::not(elim_rec(a, x, ell)?)),
        Formula::Quant(q, v, body) => {
            if v.sort != Sort::Group {
                return Ok(Formula::Quant(*q, *v, Box::new(elim_rec(body, x, ell)?)));
            }
            let renamed = replace_ord(f, x, ell)?;
            let eliminated = presburger::eliminate(&renamed).map_err(|e| {
                MvolError::OutsideFragment(format!(
                    "group-quantified subformula is not Presburger over ord x: {e}"
                ))
            })?;
            Ok(eliminated.substitute(ell, &Term::ord_of(Term::var(x))))
        }
    }
}

fn replace_ord(f: &Formula, x: Var, ell: Var) -> Result<Formula, MvolError> {
    fn term(t: &Term, x: Var, ell: Var) -> Result<Term, MvolError> {
        match t {
            Term::Var(_) | Term::Int(_, _) => Ok(t.clone()),
            Term::Add(a, b) => Ok(Term::add(term(a, x, ell)?, term(b, x, ell)?)),
            Term::Mul(a, b) => Ok(Term::mul(term(a, x, ell)?, term(b, x, ell)?)),
            Term::Neg(a) => Ok(Term::neg(term(a, x, ell)?)),
            Term::Ord(inner) => match inner.as_ref() {
                Term::Var(v) if *v == x => Ok(Term::var(ell)),
                other => Err(MvolError::OutsideFragment(format!(
                    "ord applied to {other} under a group quantifier"
                ))),
            },
            Term::Ac(_) => Err(MvolError::OutsideFragment(
                "residue condition under a group quantifier".into(),
            )),
        }
    }
    match f {
        Formula::Eq(a, b) => Ok(Formula::Eq(term(a, x, ell)?, term(b, x, ell)?)),
        Formula::Lt(a, b) => Ok(Formula::Lt(term(a, x, ell)?, term(b, x, ell)?)),
        Formula::Divides(n, t) => Ok(Formula::Divides(*n, term(t, x, ell)?)),
        Formula::And(a, b) => {
            Ok(Formula::and(replace_ord(a, x, ell)?, replace_ord(b, x, ell)?))
        }
        Formula::Or(a, b) => {
            Ok(Formula::or(replace_ord(a, x, ell)?, replace_ord(b, x, ell)?))
        }
        Formula::Not(a) => Ok(Formula::not(replace_ord(a, x, ell)?)),
        Formula::Quant(q, v, body) => {
            Ok(Formula::Quant(*q, *v, Box::new(replace_ord(body, x, ell)?)))
        }
    }
}

/// One prime's comparison record.
#[derive(Debug, Clone, Serialize)]
pub struct PrimeComparison {
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

/// Result of the comparison harness over a list of primes.
#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub motive: MotiveValue,
    pub bad_primes: Vec<u64>,
    pub depth: u32,
    pub exponent: u32,
    pub results: Vec<PrimeComparison>,
}

impl CompareReport {
    /// True when every non-skipped prime passed.
    pub fn all_pass(&self) -> bool {
        self.results
            .iter()
            .all(|r| r.skipped.is_some() || r.pass == Some(true))
    }
}

/// Runs both pipelines and checks that the specialization of the symbolic
/// volume lies inside the numeric bracket for each requested prime. Bad
/// primes of the residue catalog and explicitly excluded primes are skipped,
/// never silently dropped.
pub fn compare(
    f: &Formula,
    exponent: Option<u32>,
    primes: &[u64],
    depth: u32,
    exclude: &BTreeSet<u64>,
    class_limit: u64,
) -> Result<CompareReport, MvolError> {
    let a = exponent.unwrap_or(0);
    let (motive, bad_primes) = motivic_monomial_integral(f, a)?;
    let numeric_formula = eliminate_group_quantifiers(f)?;

    let mut results = Vec::new();
    for &p in primes {
        if exclude.contains(&p) {
            results.push(skip(p, "excluded"));
            continue;
        }
        if bad_primes.contains(&p) {
            results.push(skip(p, "bad prime for the residue catalog"));
            continue;
        }
        let ctx = PadicContext::new(p, depth)?;
        let (lower, upper) =
            padic::monomial_integral_numeric(&numeric_formula, a, &ctx, class_limit)?;
        let symbolic = motive.specialize_at_prime(p)?;
        let pass = lower <= symbolic && symbolic <= upper;
        results.push(PrimeComparison {
            p,
            skipped: None,
            symbolic: Some(rational_string(&symbolic)),
            lower: Some(rational_string(&lower)),
            upper: Some(rational_string(&upper)),
            exact: Some(lower == upper),
            pass: Some(pass),
        });
    }
    Ok(CompareReport {
        motive,
        bad_primes: bad_primes.into_iter().collect(),
        depth,
        exponent: a,
        results,
    })
}

fn skip(p: u64, reason: &str) -> PrimeComparison {
    PrimeComparison {
        p,
        skipped: Some(reason.to_string()),
        symbolic: None,
        lower: None,
        upper: None,
        exact: None,
        pass: None,
    }
}

/// Numeric bracket for a fragment formula at one prime, with group
/// quantifiers eliminated first; a convenience used by the CLI and tests.
pub fn numeric_bracket(
    f: &Formula,
    exponent: u32,
    ctx: &PadicContext,
    class_limit: u64,
) -> Result<(BigRational, BigRational), MvolError> {
    let g = eliminate_group_quantifiers(f)?;
    Ok(padic::monomial_integral_numeric(&g, exponent, ctx, class_limit)?)
}
