//! Truncated p-adic arithmetic and a three-valued evaluator/enumerator that
//! yields rigorous volume brackets for definable subsets of the integer ring
//! of Q_p.
//!
//! Field-sort quantifiers and volume enumeration range over the integer ring
//! Z_p, not the full field: the integrals in scope are over integral sets and
//! volumes over the full field diverge. The uniformizer is fixed to p; the
//! angular component is computed from the representative. The residue-class
//! representatives are known mod p^N for the context depth N, and an atom
//! receives a True/False value only when it is constant on the whole
//! precision class: otherwise the evaluator returns Unknown, which the
//! enumerator converts into bracket width.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{Formula, Quantifier, Sort, Term, Var};
use crate::poly::is_prime;

#[derive(Debug, Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residual characteristic 2 is not supported; use an odd prime")]
    EvenPrime,
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("p^depth = {p}^{depth} does not fit in 63 bits")]
    DepthOverflow { p: u64, depth: u32 },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("group-sort quantifier over {0}: eliminate group quantifiers first")]
    GroupQuantifier(String),
    #[error("enumeration needs {needed} classes, over the cap of {limit} (set PASVOL_MAX_CLASSES to raise)")]
    TooManyClasses { needed: u128, limit: u64 },
    #[error("free field variables {found:?} do not match the requested {requested:?}")]
    WrongVariables { requested: Vec<String>, found: Vec<String> },
}

/// Default cap on the number of enumerated residue classes.
pub const DEFAULT_CLASS_LIMIT: u64 = 100_000_000;

/// Truncation context: the prime and the working depth N (classes mod p^N).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicContext {
    p: u64,
    depth: u32,
    pn: u64,
}

impl PadicContext {
    pub fn new(p: u64, depth: u32) -> Result<Self, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if p == 2 {
            return Err(PadicError::EvenPrime);
        }
        if depth == 0 {
            return Err(PadicError::ZeroDepth);
        }
        let mut pn: u64 = 1;
        for _ in 0..depth {
            pn = pn
                .checked_mul(p)
                .filter(|v| *v < (1u64 << 63))
                .ok_or(PadicError::DepthOverflow { p, depth })?;
        }
        Ok(PadicContext { p, depth, pn })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// p^depth, the modulus of the representatives.
    pub fn modulus(&self) -> u64 {
        self.pn
    }

    /// The class of an integer at this precision (not marked exact).
    pub fn approx(&self, n: i64) -> PadicApprox {
        let rep = n.rem_euclid(self.pn as i64) as u64;
        PadicApprox { rep, exact_zero: false }
    }

    pub fn approx_bigint(&self, n: &BigInt) -> PadicApprox {
        use num::Integer;
        let rep = n.mod_floor(&BigInt::from(self.pn));
        PadicApprox { rep: u64::try_from(rep).unwrap(), exact_zero: false }
    }

    /// The exact zero element (ord = infinity), for point evaluation.
    pub fn exact_zero(&self) -> PadicApprox {
        PadicApprox { rep: 0, exact_zero: true }
    }

    pub fn from_rep(&self, rep: u64) -> PadicApprox {
        PadicApprox { rep: rep % self.pn, exact_zero: false }
    }

    pub fn add(&self, a: PadicApprox, b: PadicApprox) -> PadicApprox {
        if a.exact_zero {
            return b;
        }
        if b.exact_zero {
            return a;
        }
        PadicApprox { rep: (a.rep + b.rep) % self.pn, exact_zero: false }
    }

    pub fn neg(&self, a: PadicApprox) -> PadicApprox {
        if a.exact_zero {
            return a;
        }
        PadicApprox { rep: (self.pn - a.rep % self.pn) % self.pn, exact_zero: false }
    }

    pub fn sub(&self, a: PadicApprox, b: PadicApprox) -> PadicApprox {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: PadicApprox, b: PadicApprox) -> PadicApprox {
        if a.exact_zero || b.exact_zero {
            return PadicApprox { rep: 0, exact_zero: true };
        }
        let rep = ((a.rep as u128 * b.rep as u128) % self.pn as u128) as u64;
        PadicApprox { rep, exact_zero: false }
    }

    /// Valuation of the class: decided iff the representative is nonzero or
    /// the element is exactly zero.
    pub fn ord(&self, a: PadicApprox) -> OrdValue {
        if a.exact_zero {
            return OrdValue::Infinite;
        }
        if a.rep == 0 {
            return OrdValue::AtLeastDepth;
        }
        let mut k = 0u32;
        let mut r = a.rep;
        while r % self.p == 0 {
            r /= self.p;
            k += 1;
        }
        OrdValue::Finite(k)
    }

    /// Angular component: the leading unit digit when the valuation is
    /// decided, `Some(0)` for the exact zero, `None` when undecided.
    pub fn ac(&self, a: PadicApprox) -> Option<u64> {
        match self.ord(a) {
            OrdValue::Infinite => Some(0),
            OrdValue::AtLeastDepth => None,
            OrdValue::Finite(k) => {
                let mut r = a.rep;
                for _ in 0..k {
                    r /= self.p;
                }
                Some(r % self.p)
            }
        }
    }
}

/// A truncated p-adic integer: a representative in `[0, p^N)` naming the
/// whole residue class, or the exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicApprox {
    rep: u64,
    exact_zero: bool,
}

impl PadicApprox {
    pub fn representative(&self) -> u64 {
        self.rep
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }
}

/// What is known about the valuation of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdValue {
    Finite(u32),
    /// The class of 0 at depth N: the valuation is only known to be >= N.
    AtLeastDepth,
    /// The exact zero element.
    Infinite,
}

/// Kleene three-valued truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthValue {
    True,
    False,
    Unknown,
}

impl TruthValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    pub fn and(self, other: TruthValue) -> TruthValue {
        use TruthValue::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Unknown,
        }
    }

    pub fn or(self, other: TruthValue) -> TruthValue {
        use TruthValue::*;
        match (self, other) {
            (True, _) | (_, True) => True,
            (False, False) => False,
            _ => Unknown,
        }
    }

    pub fn not(self) -> TruthValue {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Unknown => TruthValue::Unknown,
        }
    }
}

/// A sort-tagged assignment value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Field(PadicApprox),
    Group(i64),
    Residue(u64),
}

impl Value {
    fn sort(&self) -> Sort {
        match self {
            Value::Field(_) => Sort::Field,
            Value::Group(_) => Sort::Group,
            Value::Residue(_) => Sort::Residue,
        }
    }
}

/// Variable assignment as a stack of bindings.
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    bindings: Vec<(Var, Value)>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment { bindings: Vec::new() }
    }

    pub fn bind(&mut self, v: Var, value: Value) {
        self.bindings.push((v, value));
    }

    fn lookup(&self, v: Var) -> Option<Value> {
        self.bindings.iter().rev().find(|(w, _)| *w == v).map(|(_, x)| *x)
    }

    fn pop(&mut self) {
        self.bindings.pop();
    }
}

// Extended integers for group-term ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ext {
    NegInf,
    Int(i64),
    PosInf,
}

impl Ext {
    fn add(self, other: Ext) -> (Ext, bool) {
        // second component: true when the sum is indeterminate (inf - inf)
        use Ext::*;
        match (self, other) {
            (Int(a), Int(b)) => (Int(a.saturating_add(b)), false),
            (PosInf, NegInf) | (NegInf, PosInf) => (Int(0), true),
            (PosInf, _) | (_, PosInf) => (PosInf, false),
            (NegInf, _) | (_, NegInf) => (NegInf, false),
        }
    }

    fn neg(self) -> Ext {
        match self {
            Ext::NegInf => Ext::PosInf,
            Ext::PosInf => Ext::NegInf,
            Ext::Int(a) => Ext::Int(-a),
        }
    }

    fn scale(self, k: i64) -> Ext {
        match self {
            Ext::Int(a) => Ext::Int(a.saturating_mul(k)),
            inf => {
                if k == 0 {
                    Ext::Int(0)
                } else if k > 0 {
                    inf
                } else {
                    inf.neg()
                }
            }
        }
    }

    fn lt(self, other: Ext) -> bool {
        use Ext::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => false,
            (NegInf, _) => true,
            (_, PosInf) => true,
            (PosInf, _) => false,
            (_, NegInf) => false,
            (Int(a), Int(b)) => a < b,
        }
    }

    fn le(self, other: Ext) -> bool {
        !other.lt(self)
    }
}

/// A sound range for the value of a group term over the precision class.
#[derive(Debug, Clone, Copy)]
struct GroupRange {
    lo: Ext,
    hi: Ext,
}

impl GroupRange {
    fn point(v: i64) -> Self {
        GroupRange { lo: Ext::Int(v), hi: Ext::Int(v) }
    }

    fn add(self, other: GroupRange) -> GroupRange {
        let (lo, lo_bad) = self.lo.add(other.lo);
        let (hi, hi_bad) = self.hi.add(other.hi);
        GroupRange {
            lo: if lo_bad { Ext::NegInf } else { lo },
            hi: if hi_bad { Ext::PosInf } else { hi },
        }
    }

    fn neg(self) -> GroupRange {
        GroupRange { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    fn scale(self, k: i64) -> GroupRange {
        if k >= 0 {
            GroupRange { lo: self.lo.scale(k), hi: self.hi.scale(k) }
        } else {
            GroupRange { lo: self.hi.scale(k), hi: self.lo.scale(k) }
        }
    }

    fn singleton(self) -> Option<Ext> {
        if self.lo == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }
}

struct Evaluator<'a> {
    ctx: PadicContext,
    assign: &'a mut Assignment,
}

impl<'a> Evaluator<'a> {
    fn field_term(&mut self, t: &Term) -> Result<PadicApprox, PadicError> {
        match t {
            Term::Var(v) => match self.assign.lookup(*v) {
                Some(Value::Field(x)) => Ok(x),
                Some(other) => Err(PadicError::SortMismatch(format!(
                    "{} bound to a {} value",
                    v.name(),
                    other.sort()
                ))),
                None => Err(PadicError::UnboundVariable(v.name())),
            },
            Term::Int(n, _) => Ok(self.ctx.approx(*n as i64)),
            Term::Add(a, b) => {
                let a = self.field_term(a)?;
                let b = self.field_term(b)?;
                Ok(self.ctx.add(a, b))
            }
            Term::Mul(a, b) => {
                let a = self.field_term(a)?;
                let b = self.field_term(b)?;
                Ok(self.ctx.mul(a, b))
            }
            Term::Neg(a) => {
                let a = self.field_term(a)?;
                Ok(self.ctx.neg(a))
            }
            Term::Ord(_) | Term::Ac(_) => {
                Err(PadicError::SortMismatch(format!("{t} is not a field term")))
            }
        }
    }

    fn group_term(&mut self, t: &Term) -> Result<GroupRange, PadicError> {
        match t {
            Term::Var(v) => match self.assign.lookup(*v) {
                Some(Value::Group(n)) => Ok(GroupRange::point(n)),
                Some(other) => Err(PadicError::SortMismatch(format!(
                    "{} bound to a {} value",
                    v.name(),
                    other.sort()
                ))),
                None => Err(PadicError::UnboundVariable(v.name())),
            },
            Term::Int(n, _) => Ok(GroupRange::point(*n as i64)),
            Term::Add(a, b) => Ok(self.group_term(a)?.add(self.group_term(b)?)),
            Term::Mul(a, b) => {
                // sort checking guarantees one ground factor
                if let Some(k) = a.ground_value() {
                    Ok(self.group_term(b)?.scale(k))
                } else if let Some(k) = b.ground_value() {
                    Ok(self.group_term(a)?.scale(k))
                } else {
                    Err(PadicError::SortMismatch(format!("nonlinear group product {t}")))
                }
            }
            Term::Neg(a) => Ok(self.group_term(a)?.neg()),
            Term::Ord(a) => {
                let x = self.field_term(a)?;
                Ok(match self.ctx.ord(x) {
                    OrdValue::Finite(k) => GroupRange::point(k as i64),
                    OrdValue::AtLeastDepth => GroupRange {
                        lo: Ext::Int(self.ctx.depth as i64),
                        hi: Ext::PosInf,
                    },
                    OrdValue::Infinite => GroupRange { lo: Ext::PosInf, hi: Ext::PosInf },
                })
            }
            Term::Ac(_) => Err(PadicError::SortMismatch(format!("{t} is not a group term"))),
        }
    }

    fn residue_term(&mut self, t: &Term) -> Result<Option<u64>, PadicError> {
        let p = self.ctx.p;
        match t {
            Term::Var(v) => match self.assign.lookup(*v) {
                Some(Value::Residue(r)) => Ok(Some(r % p)),
                Some(other) => Err(PadicError::SortMismatch(format!(
                    "{} bound to a {} value",
                    v.name(),
                    other.sort()
                ))),
                None => Err(PadicError::UnboundVariable(v.name())),
            },
            Term::Int(n, _) => Ok(Some(n % p)),
            Term::Add(a, b) => {
                let a = self.residue_term(a)?;
                let b = self.residue_term(b)?;
                Ok(match (a, b) {
                    (Some(a), Some(b)) => Some((a + b) % p),
                    _ => None,
                })
            }
            Term::Mul(a, b) => {
                let a = self.residue_term(a)?;
                let b = self.residue_term(b)?;
                Ok(match (a, b) {
                    (Some(a), Some(b)) => Some((a as u128 * b as u128 % p as u128) as u64),
                    // zero absorbs even an undecided factor
                    (Some(0), None) | (None, Some(0)) => Some(0),
                    _ => None,
                })
            }
            Term::Neg(a) => Ok(self.residue_term(a)?.map(|r| (p - r % p) % p)),
            Term::Ac(a) => {
                let x = self.field_term(a)?;
                Ok(self.ctx.ac(x))
            }
            Term::Ord(_) => {
                Err(PadicError::SortMismatch(format!("{t} is not a residue term")))
            }
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<TruthValue, PadicError> {
        match f {
            Formula::Eq(a, b) => match a.sort() {
                Sort::Field => {
                    let d = {
                        let av = self.field_term(a)?;
                        let bv = self.field_term(b)?;
                        self.ctx.sub(av, bv)
                    };
                    Ok(if d.exact_zero {
                        TruthValue::True
                    } else if d.rep != 0 {
                        TruthValue::False
                    } else {
                        TruthValue::Unknown
                    })
                }
                Sort::Group => {
                    let ra = self.group_term(a)?;
                    let rb = self.group_term(b)?;
                    Ok(group_eq(ra, rb))
                }
                Sort::Residue => {
                    let ra = self.residue_term(a)?;
                    let rb = self.residue_term(b)?;
                    Ok(match (ra, rb) {
                        (Some(x), Some(y)) => TruthValue::from_bool(x == y),
                        _ => TruthValue::Unknown,
                    })
                }
            },
            Formula::Lt(a, b) => {
                let ra = self.group_term(a)?;
                let rb = self.group_term(b)?;
                Ok(if ra.hi.lt(rb.lo) {
                    TruthValue::True
                } else if rb.hi.le(ra.lo) {
                    TruthValue::False
                } else {
                    TruthValue::Unknown
                })
            }
            Formula::Divides(n, t) => {
                if *n == 1 {
                    return Ok(TruthValue::True);
                }
                let r = self.group_term(t)?;
                Ok(match r.singleton() {
                    Some(Ext::Int(v)) => TruthValue::from_bool(v.rem_euclid(*n as i64) == 0),
                    // divisibility at an infinite valuation has no standard
                    // reading; stay undecided
                    _ => TruthValue::Unknown,
                })
            }
            Formula::And(a, b) => Ok(self.formula(a)?.and(self.formula(b)?)),
            Formula::Or(a, b) => Ok(self.formula(a)?.or(self.formula(b)?)),
            Formula::Not(a) => Ok(self.formula(a)?.not()),
            Formula::Quant(q, v, body) => match v.sort {
                Sort::Group => Err(PadicError::GroupQuantifier(v.name())),
                Sort::Residue => {
                    let mut acc = match q {
                        Quantifier::Exists => TruthValue::False,
                        Quantifier::Forall => TruthValue::True,
                    };
                    for r in 0..self.ctx.p {
                        self.assign.bind(*v, Value::Residue(r));
                        let t = self.formula(body);
                        self.assign.pop();
                        let t = t?;
                        acc = match q {
                            Quantifier::Exists => acc.or(t),
                            Quantifier::Forall => acc.and(t),
                        };
                    }
                    Ok(acc)
                }
                Sort::Field => {
                    // the quantifier ranges over the integer ring, covered by
                    // the p^N residue classes at this depth
                    let mut acc = match q {
                        Quantifier::Exists => TruthValue::False,
                        Quantifier::Forall => TruthValue::True,
                    };
                    for rep in 0..self.ctx.pn {
                        self.assign.bind(*v, Value::Field(self.ctx.from_rep(rep)));
                        let t = self.formula(body);
                        self.assign.pop();
                        let t = t?;
                        acc = match q {
                            Quantifier::Exists => acc.or(t),
                            Quantifier::Forall => acc.and(t),
                        };
                        if matches!(
                            (q, acc),
                            (Quantifier::Exists, TruthValue::True)
                                | (Quantifier::Forall, TruthValue::False)
                        ) {
                            break;
                        }
                    }
                    Ok(acc)
                }
            },
        }
    }
}

fn group_eq(a: GroupRange, b: GroupRange) -> TruthValue {
    match (a.singleton(), b.singleton()) {
        (Some(x), Some(y)) => {
            // two exact-zero ords compare equal at infinity
            TruthValue::from_bool(x == y)
        }
        _ => {
            if a.hi.lt(b.lo) || b.hi.lt(a.lo) {
                TruthValue::False
            } else {
                TruthValue::Unknown
            }
        }
    }
}

/// Evaluates a formula under an assignment covering its free variables.
/// Returns True or False only when the truth value is constant on the whole
/// precision class of the assignment.
pub fn evaluate(
    f: &Formula,
    assign: &Assignment,
    ctx: &PadicContext,
) -> Result<TruthValue, PadicError> {
    for v in f.free_variables() {
        match assign.lookup(v) {
            None => return Err(PadicError::UnboundVariable(v.name())),
            Some(value) if value.sort() != v.sort => {
                return Err(PadicError::SortMismatch(format!(
                    "{} is a {} variable but is bound to a {} value",
                    v.name(),
                    v.sort,
                    value.sort()
                )))
            }
            _ => {}
        }
    }
    let mut scratch = assign.clone();
    Evaluator { ctx: *ctx, assign: &mut scratch }.formula(f)
}

fn check_enumeration(
    f: &Formula,
    vars: &[Var],
    ctx: &PadicContext,
    class_limit: u64,
) -> Result<(), PadicError> {
    let free = f.free_variables();
    let field_free: Vec<Var> = free.iter().copied().filter(|v| v.sort == Sort::Field).collect();
    let mut requested = vars.to_vec();
    requested.sort();
    requested.dedup();
    let mut found = field_free.clone();
    found.sort();
    if requested != found || free.len() != field_free.len() || vars.len() != requested.len() {
        return Err(PadicError::WrongVariables {
            requested: vars.iter().map(|v| v.name()).collect(),
            found: free.iter().map(|v| v.name()).collect(),
        });
    }
    let needed = (ctx.pn as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if needed > class_limit as u128 {
        return Err(PadicError::TooManyClasses { needed, limit: class_limit });
    }
    Ok(())
}

/// Rigorous volume bracket for the solution set of `f` inside the unit box
/// (one copy of the integer ring per field variable), by enumeration of all
/// p^(N * |vars|) residue classes. Group quantifiers must be pre-eliminated.
pub fn volume_bounds(
    f: &Formula,
    vars: &[Var],
    ctx: &PadicContext,
    class_limit: u64,
) -> Result<(BigRational, BigRational), PadicError> {
    check_enumeration(f, vars, ctx, class_limit)?;
    let v = vars.len() as u32;
    let total: u64 = ctx.pn.pow(v);

    let counts = (0..total)
        .into_par_iter()
        .fold(
            || Ok::<(u64, u64), PadicError>((0, 0)),
            |acc, idx| {
                let (mut t, mut u) = acc?;
                let mut assign = Assignment::new();
                let mut rest = idx;
                for var in vars {
                    assign.bind(*var, Value::Field(ctx.from_rep(rest % ctx.pn)));
                    rest /= ctx.pn;
                }
                let mut eval = Evaluator { ctx: *ctx, assign: &mut assign };
                match eval.formula(f)? {
                    TruthValue::True => t += 1,
                    TruthValue::Unknown => u += 1,
                    TruthValue::False => {}
                }
                Ok((t, u))
            },
        )
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;

    let (true_count, unknown_count) = counts;
    let denom = BigInt::from(ctx.pn).pow(v);
    let lower = BigRational::new(BigInt::from(true_count), denom.clone());
    let upper = BigRational::new(BigInt::from(true_count + unknown_count), denom);
    Ok((lower, upper))
}

/// Bracket for the monomial integral of |x|^a over the solution set of a
/// one-variable formula: decided classes of valuation l contribute the exact
/// weight p^{-a*l - N}; classes with undecided truth or undecided valuation
/// contribute their worst-case spread.
pub fn monomial_integral_numeric(
    f: &Formula,
    exponent: u32,
    ctx: &PadicContext,
    class_limit: u64,
) -> Result<(BigRational, BigRational), PadicError> {
    let free = f.free_variables();
    let field_vars: Vec<Var> = free.iter().copied().filter(|v| v.sort == Sort::Field).collect();
    if field_vars.len() != 1 {
        return Err(PadicError::WrongVariables {
            requested: vec!["exactly one field variable".into()],
            found: free.iter().map(|v| v.name()).collect(),
        });
    }
    let var = field_vars[0];
    check_enumeration(f, &[var], ctx, class_limit)?;

    let n = ctx.depth as usize;
    // per-valuation counts of True and Unknown classes with decided ord,
    // plus the truth of the single undecided-ord class of 0
    let init_plain = || (vec![0u64; n], vec![0u64; n], TruthValue::False);
    let init = move || Ok::<(Vec<u64>, Vec<u64>, TruthValue), PadicError>(init_plain());
    let folded = (0..ctx.pn)
        .into_par_iter()
        .fold(init, |acc, rep| {
            let (mut tb, mut ub, mut zero_truth) = acc?;
            let x = ctx.from_rep(rep);
            let mut assign = Assignment::new();
            assign.bind(var, Value::Field(x));
            let t = Evaluator { ctx: *ctx, assign: &mut assign }.formula(f)?;
            if rep == 0 {
                zero_truth = t;
            } else {
                let k = match ctx.ord(x) {
                    OrdValue::Finite(k) => k as usize,
                    _ => unreachable!("nonzero representative has decided ord"),
                };
                match t {
                    TruthValue::True => tb[k] += 1,
                    TruthValue::Unknown => ub[k] += 1,
                    TruthValue::False => {}
                }
            }
            Ok((tb, ub, zero_truth))
        })
        .try_reduce(init_plain, |a, b| {
            let mut tb = a.0;
            let mut ub = a.1;
            for (x, y) in tb.iter_mut().zip(b.0) {
                *x += y;
            }
            for (x, y) in ub.iter_mut().zip(b.1) {
                *x += y;
            }
            // exactly one chunk saw rep 0
            let zero = if matches!(a.2, TruthValue::False) { b.2 } else { a.2 };
            Ok((tb, ub, zero))
        })?;
    let (true_by_ord, unknown_by_ord, zero_truth) = folded;

    let p = BigInt::from(ctx.p);
    let one = BigRational::one();
    let weight = |k: u32| -> BigRational {
        // p^{-a*k - N}
        let e = exponent * k + ctx.depth;
        BigRational::new(BigInt::one(), p.pow(e))
    };
    let mut lower = BigRational::from_integer(BigInt::from(0));
    let mut upper = lower.clone();
    for k in 0..n {
        let w = weight(k as u32);
        let t = BigRational::from_integer(BigInt::from(true_by_ord[k]));
        let u = BigRational::from_integer(BigInt::from(unknown_by_ord[k]));
        lower += &t * &w;
        upper += (&t + &u) * &w;
    }
    // the class of 0: valuation only known >= N
    match zero_truth {
        TruthValue::False => {}
        truth => {
            let class_measure = BigRational::new(BigInt::one(), p.pow(ctx.depth));
            if exponent == 0 {
                // weight is exactly 1 on the whole class
                if matches!(truth, TruthValue::True) {
                    lower += &class_measure * &one;
                }
                upper += &class_measure * &one;
            } else {
                // weight ranges over [0, p^{-a*N}]: the spread is
                // p^{-N} * p^{-a*N} = weight(N)
                upper += weight(ctx.depth);
            }
        }
    }
    Ok((lower, upper))
}
