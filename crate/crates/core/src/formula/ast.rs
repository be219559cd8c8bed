//! Abstract syntax for the three-sorted language: terms, formulas, sorts.

use std::fmt;

use serde::Serialize;

/// The three sorts of the language: valued field, value group, residue field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sort {
    Field,
    Group,
    Residue,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Field => write!(f, "field"),
            Sort::Group => write!(f, "group"),
            Sort::Residue => write!(f, "residue"),
        }
    }
}

/// A variable. The spelling fixes the sort: `x0,x1,...` are field variables,
/// `m0,m1,...` group variables, `xi0,xi1,...` residue variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub sort: Sort,
    pub index: u32,
}

impl Var {
    pub fn field(index: u32) -> Self {
        Var { sort: Sort::Field, index }
    }

    pub fn group(index: u32) -> Self {
        Var { sort: Sort::Group, index }
    }

    pub fn residue(index: u32) -> Self {
        Var { sort: Sort::Residue, index }
    }

    /// The canonical spelling, e.g. `x3`, `m0`, `xi2`.
    pub fn name(&self) -> String {
        match self.sort {
            Sort::Field => format!("x{}", self.index),
            Sort::Group => format!("m{}", self.index),
            Sort::Residue => format!("xi{}", self.index),
        }
    }

    /// Parses a variable spelling (`x<k>`, `m<k>`, `xi<k>`, no leading
    /// zeros).
    pub fn parse(s: &str) -> Option<Var> {
        let (sort, rest) = if let Some(rest) = s.strip_prefix("xi") {
            (Sort::Residue, rest)
        } else if let Some(rest) = s.strip_prefix('x') {
            (Sort::Field, rest)
        } else if let Some(rest) = s.strip_prefix('m') {
            (Sort::Group, rest)
        } else {
            return None;
        };
        if rest.is_empty() || rest.chars().any(|c| !c.is_ascii_digit()) {
            return None;
        }
        if rest.len() > 1 && rest.starts_with('0') {
            return None;
        }
        rest.parse::<u32>().ok().map(|index| Var { sort, index })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A term of the language. Every well-formed term carries a single sort,
/// computed by [`Term::sort`]; integer literals are annotated with theirs
/// during parsing (sort inference) or construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    /// Nonnegative integer literal, sugar for `1 + ... + 1` in the given sort.
    Int(u64, Sort),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    /// Valuation of a field term; yields a group term.
    Ord(Box<Term>),
    /// Angular component of a field term; yields a residue term.
    Ac(Box<Term>),
}

impl Term {
    pub fn var(v: Var) -> Self {
        Term::Var(v)
    }

    pub fn int(n: u64, sort: Sort) -> Self {
        Term::Int(n, sort)
    }

    pub fn add(a: Term, b: Term) -> Self {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Self {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Term) -> Self {
        Term::Neg(Box::new(a))
    }

    pub fn ord_of(a: Term) -> Self {
        Term::Ord(Box::new(a))
    }

    pub fn ac_of(a: Term) -> Self {
        Term::Ac(Box::new(a))
    }

    /// The sort of the term. Assumes the term is well-formed (as produced by
    /// the parser or checked by [`Formula::check_sorts`]).
    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort,
            Term::Int(_, s) => *s,
            Term::Add(a, _) | Term::Mul(a, _) | Term::Neg(a) => a.sort(),
            Term::Ord(_) => Sort::Group,
            Term::Ac(_) => Sort::Residue,
        }
    }

    /// True when the term contains no variables and no `ord`/`ac` (so it
    /// denotes a fixed integer in every interpretation).
    pub fn is_ground_int(&self) -> bool {
        match self {
            Term::Var(_) | Term::Ord(_) | Term::Ac(_) => false,
            Term::Int(_, _) => true,
            Term::Add(a, b) | Term::Mul(a, b) => a.is_ground_int() && b.is_ground_int(),
            Term::Neg(a) => a.is_ground_int(),
        }
    }

    /// Evaluates a ground term to its integer value; `None` if not ground.
    pub fn ground_value(&self) -> Option<i64> {
        match self {
            Term::Var(_) | Term::Ord(_) | Term::Ac(_) => None,
            Term::Int(n, _) => i64::try_from(*n).ok(),
            Term::Add(a, b) => a.ground_value()?.checked_add(b.ground_value()?),
            Term::Mul(a, b) => a.ground_value()?.checked_mul(b.ground_value()?),
            Term::Neg(a) => a.ground_value()?.checked_neg(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// A formula of the language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Equality of two terms of the same sort.
    Eq(Term, Term),
    /// Strict order; group sort only.
    Lt(Term, Term),
    /// `n | t` for a positive integer n and a group term t.
    Divides(u64, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Quant(Quantifier, Var, Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn exists(v: Var, body: Formula) -> Self {
        Formula::Quant(Quantifier::Exists, v, Box::new(body))
    }

    pub fn forall(v: Var, body: Formula) -> Self {
        Formula::Quant(Quantifier::Forall, v, Box::new(body))
    }

    /// Free variables in first-occurrence order, bound variables excluded.
    pub fn free_variables(&self) -> Vec<Var> {
        let mut bound: Vec<Var> = Vec::new();
        let mut free: Vec<Var> = Vec::new();
        self.collect_free(&mut bound, &mut free);
        free
    }

    fn collect_free(&self, bound: &mut Vec<Var>, free: &mut Vec<Var>) {
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                collect_free_term(a, bound, free);
                collect_free_term(b, bound, free);
            }
            Formula::Divides(_, t) => collect_free_term(t, bound, free),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, free);
                b.collect_free(bound, free);
            }
            Formula::Not(a) => a.collect_free(bound, free),
            Formula::Quant(_, v, body) => {
                bound.push(*v);
                body.collect_free(bound, free);
                bound.pop();
            }
        }
    }

    /// Substitutes `term` for free occurrences of `v`. The replacement term
    /// must not contain variables that could be captured; callers here only
    /// ever substitute ground terms or fresh variables.
    pub fn substitute(&self, v: Var, term: &Term) -> Formula {
        match self {
            Formula::Eq(a, b) => {
                Formula::Eq(subst_term(a, v, term), subst_term(b, v, term))
            }
            Formula::Lt(a, b) => {
                Formula::Lt(subst_term(a, v, term), subst_term(b, v, term))
            }
            Formula::Divides(n, t) => Formula::Divides(*n, subst_term(t, v, term)),
            Formula::And(a, b) => Formula::and(a.substitute(v, term), b.substitute(v, term)),
            Formula::Or(a, b) => Formula::or(a.substitute(v, term), b.substitute(v, term)),
            Formula::Not(a) => Formula::not(a.substitute(v, term)),
            Formula::Quant(q, w, body) => {
                if *w == v {
                    self.clone()
                } else {
                    Formula::Quant(*q, *w, Box::new(body.substitute(v, term)))
                }
            }
        }
    }

    /// Validates the sort invariants on an already-built formula: atoms
    /// relate terms of one sort, `<` only at group sort, `divides` only on
    /// group terms with positive modulus, `ord`/`ac` applied to field terms,
    /// and group products linear (one factor variable-free).
    pub fn check_sorts(&self) -> Result<(), String> {
        match self {
            Formula::Eq(a, b) => {
                check_term(a)?;
                check_term(b)?;
                if a.sort() != b.sort() {
                    return Err(format!(
                        "equality relates {} and {} terms",
                        a.sort(),
                        b.sort()
                    ));
                }
                Ok(())
            }
            Formula::Lt(a, b) => {
                check_term(a)?;
                check_term(b)?;
                if a.sort() != Sort::Group || b.sort() != Sort::Group {
                    return Err("order atoms are restricted to the group sort".into());
                }
                Ok(())
            }
            Formula::Divides(n, t) => {
                check_term(t)?;
                if *n == 0 {
                    return Err("divides modulus must be positive".into());
                }
                if t.sort() != Sort::Group {
                    return Err("divides applies to group terms only".into());
                }
                Ok(())
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.check_sorts()?;
                b.check_sorts()
            }
            Formula::Not(a) => a.check_sorts(),
            Formula::Quant(_, _, body) => body.check_sorts(),
        }
    }
}

fn collect_free_term(t: &Term, bound: &mut Vec<Var>, free: &mut Vec<Var>) {
    match t {
        Term::Var(v) => {
            if !bound.contains(v) && !free.contains(v) {
                free.push(*v);
            }
        }
        Term::Int(_, _) => {}
        Term::Add(a, b) | Term::Mul(a, b) => {
            collect_free_term(a, bound, free);
            collect_free_term(b, bound, free);
        }
        Term::Neg(a) | Term::Ord(a) | Term::Ac(a) => collect_free_term(a, bound, free),
    }
}

fn subst_term(t: &Term, v: Var, repl: &Term) -> Term {
    match t {
        Term::Var(w) => {
            if *w == v {
                repl.clone()
            } else {
                t.clone()
            }
        }
        Term::Int(_, _) => t.clone(),
        Term::Add(a, b) => Term::add(subst_term(a, v, repl), subst_term(b, v, repl)),
        Term::Mul(a, b) => Term::mul(subst_term(a, v, repl), subst_term(b, v, repl)),
        Term::Neg(a) => Term::neg(subst_term(a, v, repl)),
        Term::Ord(a) => Term::ord_of(subst_term(a, v, repl)),
        Term::Ac(a) => Term::ac_of(subst_term(a, v, repl)),
    }
}

fn check_term(t: &Term) -> Result<(), String> {
    match t {
        Term::Var(_) | Term::Int(_, _) => Ok(()),
        Term::Add(a, b) => {
            check_term(a)?;
            check_term(b)?;
            if a.sort() != b.sort() {
                return Err(format!("sum mixes {} and {} terms", a.sort(), b.sort()));
            }
            Ok(())
        }
        Term::Mul(a, b) => {
            check_term(a)?;
            check_term(b)?;
            if a.sort() != b.sort() {
                return Err(format!(
                    "product mixes {} and {} terms",
                    a.sort(),
                    b.sort()
                ));
            }
            if a.sort() == Sort::Group && !a.is_ground_int() && !b.is_ground_int() {
                return Err(
                    "group products must have a constant factor (additive theory only)".into(),
                );
            }
            Ok(())
        }
        Term::Neg(a) => check_term(a),
        Term::Ord(a) | Term::Ac(a) => {
            check_term(a)?;
            if a.sort() != Sort::Field {
                return Err(format!(
                    "{} applies to field terms, got {}",
                    if matches!(t, Term::Ord(_)) { "ord" } else { "ac" },
                    a.sort()
                ));
            }
            Ok(())
        }
    }
}

// Canonical printing. `parse(print(f))` is structurally equal to `f`.

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Int(n, _) => write!(f, "{n}"),
            Term::Add(a, b) => write!(f, "(+ {a} {b})"),
            Term::Mul(a, b) => write!(f, "(* {a} {b})"),
            Term::Neg(a) => write!(f, "(- {a})"),
            Term::Ord(a) => write!(f, "(ord {a})"),
            Term::Ac(a) => write!(f, "(ac {a})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Lt(a, b) => write!(f, "(< {a} {b})"),
            Formula::Divides(n, t) => write!(f, "(divides {n} {t})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::Quant(Quantifier::Forall, v, body) => write!(f, "(forall {v} {body})"),
            Formula::Quant(Quantifier::Exists, v, body) => write!(f, "(exists {v} {body})"),
        }
    }
}
