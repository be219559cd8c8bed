//! Quantifier elimination and decision procedure for the group-sort
//! (Presburger) fragment, Cooper-style.
//!
//! Elimination of `exists v` works on a negation normal form whose atoms are
//! `0 < t`, `0 = t`, `n | t`, and their negations, with `t` a linear term.
//! Coefficients of the eliminated variable are scaled to a common magnitude
//! `lambda`, the substitution `u = lambda v` adds the side condition
//! `lambda | u`, and the variable is then resolved against the smaller of the
//! lower- or upper-bound sets with a disjunction over residues modulo the
//! lcm `delta` of the divisibility moduli. Output is quantifier-free and may
//! contain `divides` atoms; no minimization beyond constant folding is done.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::formula::{Formula, Quantifier, Sort, Term, Var};

#[derive(Debug, Error)]
pub enum PresburgerError {
    #[error("not a Presburger formula: {0}")]
    NotPresburger(String),
    #[error("formula has free variables; decide requires a closed sentence")]
    OpenFormula,
}

/// A formula validated to lie in the group-sort fragment: group variables,
/// literals, sums, constant multiples, `<`, `=`, `divides`; no `ord`/`ac`,
/// no field or residue symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresburgerFormula(Formula);

impl PresburgerFormula {
    pub fn new(f: Formula) -> Result<Self, PresburgerError> {
        validate(&f)?;
        Ok(PresburgerFormula(f))
    }

    pub fn as_formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    /// Equivalent quantifier-free formula over the integers.
    pub fn eliminate(&self) -> PresburgerFormula {
        let qf = eliminate_qf(&self.0);
        PresburgerFormula(qf_to_formula(&qf))
    }

    /// Truth value of a closed sentence over the standard integers.
    pub fn decide(&self) -> Result<bool, PresburgerError> {
        if !self.0.free_variables().is_empty() {
            return Err(PresburgerError::OpenFormula);
        }
        match simplify(eliminate_qf(&self.0)) {
            Qf::True => Ok(true),
            Qf::False => Ok(false),
            other => unreachable!("closed sentence did not fold to a constant: {other:?}"),
        }
    }
}

/// Eliminates quantifiers from a Presburger formula.
pub fn eliminate(f: &Formula) -> Result<Formula, PresburgerError> {
    Ok(PresburgerFormula::new(f.clone())?.eliminate().into_formula())
}

/// Decides a closed Presburger sentence.
pub fn decide(f: &Formula) -> Result<bool, PresburgerError> {
    PresburgerFormula::new(f.clone())?.decide()
}

/// True when the formula contains no quantifiers at all.
pub fn is_quantifier_free(f: &Formula) -> bool {
    match f {
        Formula::Eq(_, _) | Formula::Lt(_, _) | Formula::Divides(_, _) => true,
        Formula::And(a, b) | Formula::Or(a, b) => is_quantifier_free(a) && is_quantifier_free(b),
        Formula::Not(a) => is_quantifier_free(a),
        Formula::Quant(_, _, _) => false,
    }
}

fn validate(f: &Formula) -> Result<(), PresburgerError> {
    f.check_sorts().map_err(PresburgerError::NotPresburger)?;
    validate_rec(f)
}

fn validate_rec(f: &Formula) -> Result<(), PresburgerError> {
    match f {
        Formula::Eq(a, b) | Formula::Lt(a, b) => {
            validate_term(a)?;
            validate_term(b)
        }
        Formula::Divides(_, t) => validate_term(t),
        Formula::And(a, b) | Formula::Or(a, b) => {
            validate_rec(a)?;
            validate_rec(b)
        }
        Formula::Not(a) => validate_rec(a),
        Formula::Quant(_, v, body) => {
            if v.sort != Sort::Group {
                return Err(PresburgerError::NotPresburger(format!(
                    "quantifier over non-group variable {}",
                    v.name()
                )));
            }
            validate_rec(body)
        }
    }
}

fn validate_term(t: &Term) -> Result<(), PresburgerError> {
    if t.sort() != Sort::Group {
        return Err(PresburgerError::NotPresburger(format!(
            "{}-sort term {t}",
            t.sort()
        )));
    }
    validate_term_rec(t)
}

fn validate_term_rec(t: &Term) -> Result<(), PresburgerError> {
    match t {
        Term::Var(_) | Term::Int(_, _) => Ok(()),
        Term::Add(a, b) | Term::Mul(a, b) => {
            validate_term_rec(a)?;
            validate_term_rec(b)
        }
        Term::Neg(a) => validate_term_rec(a),
        Term::Ord(_) | Term::Ac(_) => {
            Err(PresburgerError::NotPresburger(format!("contains {t}")))
        }
    }
}

// Linear terms: coefficient map plus constant, exact integers throughout.

#[derive(Debug, Clone, PartialEq, Eq)]
struct Lin {
    coeffs: BTreeMap<Var, BigInt>,
    constant: BigInt,
}

impl Lin {
    fn constant(c: BigInt) -> Self {
        Lin { coeffs: BTreeMap::new(), constant: c }
    }

    fn var(v: Var) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(v, BigInt::one());
        Lin { coeffs, constant: BigInt::zero() }
    }

    fn add(&self, other: &Lin) -> Lin {
        let mut coeffs = self.coeffs.clone();
        for (v, c) in &other.coeffs {
            let e = coeffs.entry(*v).or_insert_with(BigInt::zero);
            *e += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Lin { coeffs, constant: &self.constant + &other.constant }
    }

    fn scale(&self, k: &BigInt) -> Lin {
        if k.is_zero() {
            return Lin::constant(BigInt::zero());
        }
        let coeffs = self.coeffs.iter().map(|(v, c)| (*v, c * k)).collect();
        Lin { coeffs, constant: &self.constant * k }
    }

    fn neg(&self) -> Lin {
        self.scale(&BigInt::from(-1))
    }

    fn add_const(&self, k: i64) -> Lin {
        let mut r = self.clone();
        r.constant += k;
        r
    }

    fn coeff(&self, v: Var) -> BigInt {
        self.coeffs.get(&v).cloned().unwrap_or_else(BigInt::zero)
    }

    fn without(&self, v: Var) -> Lin {
        let mut r = self.clone();
        r.coeffs.remove(&v);
        r
    }

    fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn term_to_lin(t: &Term) -> Result<Lin, PresburgerError> {
    match t {
        Term::Var(v) => Ok(Lin::var(*v)),
        Term::Int(n, _) => Ok(Lin::constant(BigInt::from(*n))),
        Term::Add(a, b) => Ok(term_to_lin(a)?.add(&term_to_lin(b)?)),
        Term::Mul(a, b) => {
            // sort checking guarantees at least one ground factor
            if let Some(k) = ground_bigint(a) {
                Ok(term_to_lin(b)?.scale(&k))
            } else if let Some(k) = ground_bigint(b) {
                Ok(term_to_lin(a)?.scale(&k))
            } else {
                Err(PresburgerError::NotPresburger(format!("nonlinear product {t}")))
            }
        }
        Term::Neg(a) => Ok(term_to_lin(a)?.neg()),
        Term::Ord(_) | Term::Ac(_) => {
            Err(PresburgerError::NotPresburger(format!("contains {t}")))
        }
    }
}

fn ground_bigint(t: &Term) -> Option<BigInt> {
    match t {
        Term::Int(n, _) => Some(BigInt::from(*n)),
        Term::Add(a, b) => Some(ground_bigint(a)? + ground_bigint(b)?),
        Term::Mul(a, b) => Some(ground_bigint(a)? * ground_bigint(b)?),
        Term::Neg(a) => Some(-ground_bigint(a)?),
        Term::Var(_) | Term::Ord(_) | Term::Ac(_) => None,
    }
}

// Quantifier-free working form in negation normal form. Negation exists only
// implicitly: every atom kind is closed under negation.

#[derive(Debug, Clone, PartialEq, Eq)]
enum Atom {
    /// 0 < t
    Lt(Lin),
    /// 0 = t
    Eq(Lin),
    /// n | t with n >= 1
    Dvd(BigInt, Lin),
    /// not (n | t)
    NotDvd(BigInt, Lin),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Qf {
    True,
    False,
    Atom(Atom),
    And(Box<Qf>, Box<Qf>),
    Or(Box<Qf>, Box<Qf>),
}

fn qf_and(a: Qf, b: Qf) -> Qf {
    match (a, b) {
        (Qf::False, _) | (_, Qf::False) => Qf::False,
        (Qf::True, x) | (x, Qf::True) => x,
        (a, b) => Qf::And(Box::new(a), Box::new(b)),
    }
}

fn qf_or(a: Qf, b: Qf) -> Qf {
    match (a, b) {
        (Qf::True, _) | (_, Qf::True) => Qf::True,
        (Qf::False, x) | (x, Qf::False) => x,
        (a, b) => Qf::Or(Box::new(a), Box::new(b)),
    }
}

fn atom_qf(a: Atom) -> Qf {
    // fold ground atoms immediately
    let value = match &a {
        Atom::Lt(t) if t.is_constant() => Some(t.constant.is_positive()),
        Atom::Eq(t) if t.is_constant() => Some(t.constant.is_zero()),
        Atom::Dvd(n, t) if t.is_constant() => Some(t.constant.mod_floor(n).is_zero()),
        Atom::NotDvd(n, t) if t.is_constant() => Some(!t.constant.mod_floor(n).is_zero()),
        _ => None,
    };
    match value {
        Some(true) => Qf::True,
        Some(false) => Qf::False,
        None => match a {
            Atom::Dvd(n, t) if n.is_one() => {
                let _ = t;
                Qf::True
            }
            Atom::NotDvd(n, t) if n.is_one() => {
                let _ = t;
                Qf::False
            }
            a => Qf::Atom(a),
        },
    }
}

fn negate_qf(q: Qf) -> Qf {
    match q {
        Qf::True => Qf::False,
        Qf::False => Qf::True,
        Qf::And(a, b) => qf_or(negate_qf(*a), negate_qf(*b)),
        Qf::Or(a, b) => qf_and(negate_qf(*a), negate_qf(*b)),
        Qf::Atom(a) => match a {
            // not (0 < t)  <=>  0 < 1 - t
            Atom::Lt(t) => atom_qf(Atom::Lt(t.neg().add_const(1))),
            // not (0 = t)  <=>  0 < t  or  0 < -t
            Atom::Eq(t) => qf_or(atom_qf(Atom::Lt(t.clone())), atom_qf(Atom::Lt(t.neg()))),
            Atom::Dvd(n, t) => atom_qf(Atom::NotDvd(n, t)),
            Atom::NotDvd(n, t) => atom_qf(Atom::Dvd(n, t)),
        },
    }
}

fn simplify(q: Qf) -> Qf {
    match q {
        Qf::And(a, b) => qf_and(simplify(*a), simplify(*b)),
        Qf::Or(a, b) => qf_or(simplify(*a), simplify(*b)),
        Qf::Atom(a) => atom_qf(a),
        other => other,
    }
}

/// Translates a validated Presburger formula to quantifier-free form,
/// eliminating quantifiers innermost-first.
fn eliminate_qf(f: &Formula) -> Qf {
    match f {
        Formula::Eq(a, b) => {
            let t = term_to_lin(b).unwrap().add(&term_to_lin(a).unwrap().neg());
            atom_qf(Atom::Eq(t))
        }
        Formula::Lt(a, b) => {
            let t = term_to_lin(b).unwrap().add(&term_to_lin(a).unwrap().neg());
            atom_qf(Atom::Lt(t))
        }
        Formula::Divides(n, t) => {
            atom_qf(Atom::Dvd(BigInt::from(*n), term_to_lin(t).unwrap()))
        }
        Formula::And(a, b) => qf_and(eliminate_qf(a), eliminate_qf(b)),
        Formula::Or(a, b) => qf_or(eliminate_qf(a), eliminate_qf(b)),
        Formula::Not(a) => negate_qf(eliminate_qf(a)),
        Formula::Quant(Quantifier::Exists, v, body) => cooper_exists(*v, eliminate_qf(body)),
        Formula::Quant(Quantifier::Forall, v, body) => {
            negate_qf(cooper_exists(*v, negate_qf(eliminate_qf(body))))
        }
    }
}

fn qf_contains(q: &Qf, v: Var) -> bool {
    match q {
        Qf::True | Qf::False => false,
        Qf::Atom(a) => match a {
            Atom::Lt(t) | Atom::Eq(t) | Atom::Dvd(_, t) | Atom::NotDvd(_, t) => {
                !t.coeff(v).is_zero()
            }
        },
        Qf::And(a, b) | Qf::Or(a, b) => qf_contains(a, v) || qf_contains(b, v),
    }
}

/// Atoms of the scaled formula: the eliminated variable `u` occurs with
/// coefficient in {-1, 0, +1}; divisibility atoms are normalized to +1.
#[derive(Debug, Clone)]
enum SAtom {
    /// 0 < s*u + r
    Lt(i8, Lin),
    /// n | u + r, or n | r when u is absent
    Dvd(BigInt, bool, Lin),
    NotDvd(BigInt, bool, Lin),
    /// atom not involving u
    Free(Atom),
}

#[derive(Debug, Clone)]
enum SQf {
    True,
    False,
    Atom(SAtom),
    And(Box<SQf>, Box<SQf>),
    Or(Box<SQf>, Box<SQf>),
}

fn cooper_exists(v: Var, body: Qf) -> Qf {
    let body = simplify(body);
    if !qf_contains(&body, v) {
        return body;
    }

    // lambda = lcm of |coefficients| of v
    let mut lambda = BigInt::one();
    collect_lambda(&body, v, &mut lambda);

    let scaled = scale_qf(&body, v, &lambda);
    // u = lambda * v ranges over multiples of lambda
    let scaled = if lambda.is_one() {
        scaled
    } else {
        SQf::And(
            Box::new(scaled),
            Box::new(SQf::Atom(SAtom::Dvd(lambda.clone(), true, Lin::constant(BigInt::zero())))),
        )
    };

    // delta = lcm of divisibility moduli involving u
    let mut delta = BigInt::one();
    collect_delta(&scaled, &mut delta);

    // bound terms: lower bounds b (from 0 < u + r, b = -r) and
    // upper bounds a (from 0 < -u + r, a = r)
    let mut lower: Vec<Lin> = Vec::new();
    let mut upper: Vec<Lin> = Vec::new();
    collect_bounds(&scaled, &mut lower, &mut upper);
    dedup_lins(&mut lower);
    dedup_lins(&mut upper);

    let use_lower = lower.len() <= upper.len();
    let mut result = Qf::False;
    let mut j = BigInt::one();
    while j <= delta {
        let jn = j.clone();
        if use_lower {
            result = qf_or(result, inf_subst(&scaled, &jn, true));
            for b in &lower {
                let t = b.add(&Lin::constant(jn.clone()));
                result = qf_or(result, subst(&scaled, &t));
            }
        } else {
            result = qf_or(result, inf_subst(&scaled, &(-jn.clone()), false));
            for a in &upper {
                let t = a.add(&Lin::constant(-jn.clone()));
                result = qf_or(result, subst(&scaled, &t));
            }
        }
        j += 1;
    }
    simplify(result)
}

fn collect_lambda(q: &Qf, v: Var, lambda: &mut BigInt) {
    match q {
        Qf::True | Qf::False => {}
        Qf::Atom(a) => {
            let t = match a {
                Atom::Lt(t) | Atom::Eq(t) | Atom::Dvd(_, t) | Atom::NotDvd(_, t) => t,
            };
            let c = t.coeff(v);
            if !c.is_zero() {
                *lambda = lambda.lcm(&c.abs());
            }
        }
        Qf::And(a, b) | Qf::Or(a, b) => {
            collect_lambda(a, v, lambda);
            collect_lambda(b, v, lambda);
        }
    }
}

/// Scales every atom so that v appears with coefficient +-lambda, then
/// rewrites in terms of u = lambda*v. Equalities involving u become pairs of
/// strict inequalities so that only Lt/Dvd/NotDvd mention u.
fn scale_qf(q: &Qf, v: Var, lambda: &BigInt) -> SQf {
    match q {
        Qf::True => SQf::True,
        Qf::False => SQf::False,
        Qf::And(a, b) => {
            SQf::And(Box::new(scale_qf(a, v, lambda)), Box::new(scale_qf(b, v, lambda)))
        }
        Qf::Or(a, b) => {
            SQf::Or(Box::new(scale_qf(a, v, lambda)), Box::new(scale_qf(b, v, lambda)))
        }
        Qf::Atom(atom) => {
            let t = match atom {
                Atom::Lt(t) | Atom::Eq(t) | Atom::Dvd(_, t) | Atom::NotDvd(_, t) => t,
            };
            let c = t.coeff(v);
            if c.is_zero() {
                return SQf::Atom(SAtom::Free(atom.clone()));
            }
            let m = lambda / c.abs();
            let s: i8 = if c.is_positive() { 1 } else { -1 };
            let rest = t.without(v).scale(&m);
            match atom {
                Atom::Lt(_) => SQf::Atom(SAtom::Lt(s, rest)),
                Atom::Eq(_) => {
                    // 0 = s*u + r  <=>  0 < s*u + r + 1  and  0 < -(s*u + r) + 1
                    let a = SAtom::Lt(s, rest.add_const(1));
                    let b = SAtom::Lt(-s, rest.neg().add_const(1));
                    SQf::And(Box::new(SQf::Atom(a)), Box::new(SQf::Atom(b)))
                }
                Atom::Dvd(n, _) => {
                    // n*m | s*u + r  =>  normalize sign so u has +1
                    let n = n * &m;
                    let rest = if s > 0 { rest } else { rest.neg() };
                    SQf::Atom(SAtom::Dvd(n, true, rest))
                }
                Atom::NotDvd(n, _) => {
                    let n = n * &m;
                    let rest = if s > 0 { rest } else { rest.neg() };
                    SQf::Atom(SAtom::NotDvd(n, true, rest))
                }
            }
        }
    }
}

fn collect_delta(q: &SQf, delta: &mut BigInt) {
    match q {
        SQf::True | SQf::False => {}
        SQf::Atom(SAtom::Dvd(n, true, _)) | SQf::Atom(SAtom::NotDvd(n, true, _)) => {
            *delta = delta.lcm(n);
        }
        SQf::Atom(_) => {}
        SQf::And(a, b) | SQf::Or(a, b) => {
            collect_delta(a, delta);
            collect_delta(b, delta);
        }
    }
}

fn collect_bounds(q: &SQf, lower: &mut Vec<Lin>, upper: &mut Vec<Lin>) {
    match q {
        SQf::True | SQf::False => {}
        SQf::Atom(SAtom::Lt(s, r)) => {
            if *s > 0 {
                lower.push(r.neg());
            } else {
                upper.push(r.clone());
            }
        }
        SQf::Atom(_) => {}
        SQf::And(a, b) | SQf::Or(a, b) => {
            collect_bounds(a, lower, upper);
            collect_bounds(b, lower, upper);
        }
    }
}

fn dedup_lins(v: &mut Vec<Lin>) {
    let mut seen: Vec<Lin> = Vec::new();
    v.retain(|t| {
        if seen.contains(t) {
            false
        } else {
            seen.push(t.clone());
            true
        }
    });
}

/// Substitutes u := t into the scaled formula.
fn subst(q: &SQf, t: &Lin) -> Qf {
    match q {
        SQf::True => Qf::True,
        SQf::False => Qf::False,
        SQf::And(a, b) => qf_and(subst(a, t), subst(b, t)),
        SQf::Or(a, b) => qf_or(subst(a, t), subst(b, t)),
        SQf::Atom(a) => match a {
            SAtom::Free(atom) => atom_qf(atom.clone()),
            SAtom::Lt(s, r) => {
                let val = if *s > 0 { t.add(r) } else { t.neg().add(r) };
                atom_qf(Atom::Lt(val))
            }
            SAtom::Dvd(n, has_u, r) => {
                let val = if *has_u { t.add(r) } else { r.clone() };
                atom_qf(Atom::Dvd(n.clone(), val))
            }
            SAtom::NotDvd(n, has_u, r) => {
                let val = if *has_u { t.add(r) } else { r.clone() };
                atom_qf(Atom::NotDvd(n.clone(), val))
            }
        },
    }
}

/// The limit form as u -> -inf (when `low` is true) or u -> +inf, with u := j
/// substituted into the surviving (periodic) atoms.
fn inf_subst(q: &SQf, j: &BigInt, low: bool) -> Qf {
    match q {
        SQf::True => Qf::True,
        SQf::False => Qf::False,
        SQf::And(a, b) => qf_and(inf_subst(a, j, low), inf_subst(b, j, low)),
        SQf::Or(a, b) => qf_or(inf_subst(a, j, low), inf_subst(b, j, low)),
        SQf::Atom(a) => match a {
            SAtom::Free(atom) => atom_qf(atom.clone()),
            SAtom::Lt(s, _) => {
                let truth = if low { *s < 0 } else { *s > 0 };
                if truth {
                    Qf::True
                } else {
                    Qf::False
                }
            }
            SAtom::Dvd(n, has_u, r) => {
                let val = if *has_u { r.add(&Lin::constant(j.clone())) } else { r.clone() };
                atom_qf(Atom::Dvd(n.clone(), val))
            }
            SAtom::NotDvd(n, has_u, r) => {
                let val = if *has_u { r.add(&Lin::constant(j.clone())) } else { r.clone() };
                atom_qf(Atom::NotDvd(n.clone(), val))
            }
        },
    }
}

// Conversion of the quantifier-free working form back to formula syntax.
// Truth constants are encoded as the ground atoms (= 0 0) and (< 0 0).

fn qf_to_formula(q: &Qf) -> Formula {
    match q {
        Qf::True => Formula::Eq(Term::int(0, Sort::Group), Term::int(0, Sort::Group)),
        Qf::False => Formula::Lt(Term::int(0, Sort::Group), Term::int(0, Sort::Group)),
        Qf::And(a, b) => Formula::and(qf_to_formula(a), qf_to_formula(b)),
        Qf::Or(a, b) => Formula::or(qf_to_formula(a), qf_to_formula(b)),
        Qf::Atom(a) => match a {
            Atom::Lt(t) => {
                let (neg, pos) = split_lin(t);
                Formula::Lt(neg, pos)
            }
            Atom::Eq(t) => {
                let (neg, pos) = split_lin(t);
                Formula::Eq(neg, pos)
            }
            Atom::Dvd(n, t) => Formula::Divides(bigint_to_u64(n), lin_to_term(t)),
            Atom::NotDvd(n, t) => {
                Formula::not(Formula::Divides(bigint_to_u64(n), lin_to_term(t)))
            }
        },
    }
}

fn bigint_to_u64(n: &BigInt) -> u64 {
    u64::try_from(n.clone()).expect("divisibility modulus exceeds u64")
}

/// Splits `t` so that `0 < t` prints as `neg_part < pos_part`.
fn split_lin(t: &Lin) -> (Term, Term) {
    let mut pos: Vec<Term> = Vec::new();
    let mut neg: Vec<Term> = Vec::new();
    for (v, c) in &t.coeffs {
        if c.is_positive() {
            pos.push(monomial(c, *v));
        } else {
            neg.push(monomial(&c.abs(), *v));
        }
    }
    if t.constant.is_positive() {
        pos.push(Term::int(bigint_to_u64(&t.constant), Sort::Group));
    } else if t.constant.is_negative() {
        neg.push(Term::int(bigint_to_u64(&t.constant.abs()), Sort::Group));
    }
    (sum_terms(neg), sum_terms(pos))
}

fn lin_to_term(t: &Lin) -> Term {
    // normalize leading sign so divisibility arguments print positively
    let flip = match t.coeffs.values().next() {
        Some(c) => c.is_negative(),
        None => t.constant.is_negative(),
    };
    let t = if flip { t.neg() } else { t.clone() };
    let mut parts: Vec<Term> = Vec::new();
    for (v, c) in &t.coeffs {
        if c.is_positive() {
            parts.push(monomial(c, *v));
        } else {
            parts.push(Term::neg(monomial(&c.abs(), *v)));
        }
    }
    if t.constant.is_positive() {
        parts.push(Term::int(bigint_to_u64(&t.constant), Sort::Group));
    } else if t.constant.is_negative() {
        parts.push(Term::neg(Term::int(bigint_to_u64(&t.constant.abs()), Sort::Group)));
    }
    sum_terms(parts)
}

fn monomial(c: &BigInt, v: Var) -> Term {
    if c.is_one() {
        Term::var(v)
    } else {
        Term::mul(Term::int(bigint_to_u64(c), Sort::Group), Term::var(v))
    }
}

fn sum_terms(parts: Vec<Term>) -> Term {
    let mut it = parts.into_iter();
    match it.next() {
        None => Term::int(0, Sort::Group),
        Some(first) => it.fold(first, Term::add),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, sample_equivalent};

    fn decide_text(text: &str) -> bool {
        decide(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn decides_closed_sentences() {
        assert!(decide_text("(exists m0 (= (+ m0 m0) 2))"));
        assert!(!decide_text("(exists m0 (= (+ m0 m0) 1))"));
        assert!(decide_text("(forall m0 (exists m1 (< m0 m1)))"));
        // no integer strictly between consecutive integers
        assert!(!decide_text(
            "(forall m0 (exists m1 (and (< m0 m1) (< m1 (+ m0 1)))))"
        ));
        // but one always fits in a gap of width two
        assert!(decide_text(
            "(forall m0 (exists m1 (and (< m0 m1) (< m1 (+ m0 2)))))"
        ));
        assert!(decide_text(
            "(forall m0 (or (divides 2 m0) (divides 2 (+ m0 1))))"
        ));
    }

    #[test]
    fn decide_rejects_open_formulas() {
        let f = parse("(< m0 1)").unwrap();
        assert!(matches!(decide(&f), Err(PresburgerError::OpenFormula)));
    }

    #[test]
    fn rejects_non_presburger_input() {
        let f = parse("(= (ord x0) 0)").unwrap();
        assert!(matches!(eliminate(&f), Err(PresburgerError::NotPresburger(_))));
        let g = parse("(= (ac x0) 1)").unwrap();
        assert!(matches!(eliminate(&g), Err(PresburgerError::NotPresburger(_))));
    }

    #[test]
    fn parity_elimination() {
        let f = parse("(exists m1 (= (+ m1 m1) m0))").unwrap();
        let out = eliminate(&f).unwrap();
        assert!(is_quantifier_free(&out));
        let expected = parse("(divides 2 m0)").unwrap();
        assert!(sample_equivalent(&out, &expected, 100, 500, 11).unwrap());
    }

    #[test]
    fn gap_elimination() {
        let f = parse("(exists m2 (and (< m0 m2) (< m2 m1)))").unwrap();
        let out = eliminate(&f).unwrap();
        assert!(is_quantifier_free(&out));
        let expected = parse("(< (+ m0 1) m1)").unwrap();
        assert!(sample_equivalent(&out, &expected, 60, 800, 5).unwrap());
    }

    #[test]
    fn triple_with_bound_matches_brute_force() {
        // exists m (3m = m0 and m0 < 7), exhaustively checked on m0 in [-30,30]
        let f = parse("(exists m1 (and (= (* 3 m1) m0) (< m0 7)))").unwrap();
        let out = eliminate(&f).unwrap();
        assert!(is_quantifier_free(&out));
        let m0 = Var::group(0);
        for value in -30..=30i64 {
            let expected = brute_exists(value);
            let inst = out.substitute(m0, &crate::formula::int_term(value));
            assert_eq!(
                decide(&inst).unwrap(),
                expected,
                "mismatch at m0 = {value}: {out}"
            );
        }
    }

    /// Independent witness search for `exists m (3m = m0 and m0 < 7)`.
    fn brute_exists(m0: i64) -> bool {
        (-40..=40).any(|m| 3 * m == m0 && m0 < 7)
    }

    #[test]
    fn elimination_is_idempotent_and_quantifier_free() {
        let texts = [
            "(exists m1 (= (+ m1 m1) m0))",
            "(exists m1 (and (< m0 m1) (< m1 m2)))",
            "(forall m1 (or (< m1 m0) (< 0 (+ m1 1))))",
        ];
        for text in texts {
            let f = parse(text).unwrap();
            let once = eliminate(&f).unwrap();
            assert!(is_quantifier_free(&once));
            let twice = eliminate(&once).unwrap();
            assert!(is_quantifier_free(&twice));
            assert!(sample_equivalent(&once, &twice, 100, 300, 23).unwrap(), "{text}");
        }
    }

    #[test]
    fn eliminate_agrees_with_decide_on_closings() {
        // closing an open fixture by substitution must agree before/after QE
        let f = parse("(exists m1 (and (< m0 (* 2 m1)) (< (* 2 m1) m2)))").unwrap();
        let out = eliminate(&f).unwrap();
        for a in -6..=6i64 {
            for b in -6..=6i64 {
                let fa = f
                    .substitute(Var::group(0), &crate::formula::int_term(a))
                    .substitute(Var::group(2), &crate::formula::int_term(b));
                let oa = out
                    .substitute(Var::group(0), &crate::formula::int_term(a))
                    .substitute(Var::group(2), &crate::formula::int_term(b));
                assert_eq!(decide(&fa).unwrap(), decide(&oa).unwrap(), "at ({a},{b})");
            }
        }
    }
}
