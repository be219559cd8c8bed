//! S-expression grammar for formulas, with sort inference for integer
//! literals.
//!
//! ```text
//! formula := atom | "(and" f f ")" | "(or" f f ")" | "(not" f ")"
//!          | "(forall" var f ")" | "(exists" var f ")"
//! atom    := "(=" term term ")" | "(<" gterm gterm ")" | "(divides" nat gterm ")"
//! term    := var | nat | "(+" term term ")" | "(*" term term ")" | "(-" term ")"
//!          | "(ord" fterm ")" | "(ac" fterm ")"
//! ```
//!
//! Variables are spelled `x<k>` (field), `m<k>` (group), `xi<k>` (residue).
//! A literal's sort is inferred from context; an atom whose sides are all
//! literals defaults to the group sort.

use super::ast::{Formula, Quantifier, Sort, Term, Var};
use super::FormulaError;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    LParen,
    RParen,
    Symbol(String),
}

struct Lexer {
    tokens: Vec<(Token, usize)>,
}

fn lex(text: &str) -> Result<Lexer, FormulaError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            tokens.push((Token::LParen, i));
            i += 1;
        } else if c == ')' {
            tokens.push((Token::RParen, i));
            i += 1;
        } else {
            let start = i;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_whitespace() || d == '(' || d == ')' {
                    break;
                }
                i += 1;
            }
            tokens.push((Token::Symbol(text[start..i].to_string()), start));
        }
    }
    Ok(Lexer { tokens })
}

/// Untyped parse tree; literal sorts are not yet known.
#[derive(Debug, Clone)]
enum RawTerm {
    Var(Var),
    Int(u64),
    Add(Box<RawTerm>, Box<RawTerm>),
    Mul(Box<RawTerm>, Box<RawTerm>),
    Neg(Box<RawTerm>),
    Ord(Box<RawTerm>),
    Ac(Box<RawTerm>),
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<(Token, usize), FormulaError> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or(FormulaError::Syntax { pos: self.end, msg: "unexpected end of input".into() })?;
        self.pos += 1;
        Ok(t)
    }

    fn expect_rparen(&mut self) -> Result<(), FormulaError> {
        match self.next()? {
            (Token::RParen, _) => Ok(()),
            (_, p) => Err(FormulaError::Syntax { pos: p, msg: "expected ')'".into() }),
        }
    }

    fn parse_formula(&mut self) -> Result<Formula, FormulaError> {
        match self.next()? {
            (Token::LParen, p) => {
                let (head, hp) = match self.next()? {
                    (Token::Symbol(s), hp) => (s, hp),
                    (_, hp) => {
                        return Err(FormulaError::Syntax {
                            pos: hp,
                            msg: "expected connective or predicate".into(),
                        })
                    }
                };
                let f = match head.as_str() {
                    "and" | "or" => {
                        let a = self.parse_formula()?;
                        let b = self.parse_formula()?;
                        if head == "and" {
                            Formula::and(a, b)
                        } else {
                            Formula::or(a, b)
                        }
                    }
                    "not" => Formula::not(self.parse_formula()?),
                    "forall" | "exists" => {
                        let (vt, vp) = self.next()?;
                        let v = match vt {
                            Token::Symbol(s) => parse_var(&s).ok_or(FormulaError::Syntax {
                                pos: vp,
                                msg: format!("'{s}' is not a variable (x<k>, m<k>, xi<k>)"),
                            })?,
                            _ => {
                                return Err(FormulaError::Syntax {
                                    pos: vp,
                                    msg: "expected a quantified variable".into(),
                                })
                            }
                        };
                        let body = self.parse_formula()?;
                        let q = if head == "forall" {
                            Quantifier::Forall
                        } else {
                            Quantifier::Exists
                        };
                        Formula::Quant(q, v, Box::new(body))
                    }
                    "=" => {
                        let a = self.parse_term()?;
                        let b = self.parse_term()?;
                        type_eq_atom(a, b, p)?
                    }
                    "<" => {
                        let a = self.parse_term()?;
                        let b = self.parse_term()?;
                        let a = annotate(a, Sort::Group, p)?;
                        let b = annotate(b, Sort::Group, p)?;
                        Formula::Lt(a, b)
                    }
                    "divides" => {
                        let (nt, np) = self.next()?;
                        let n = match nt {
                            Token::Symbol(s) => s.parse::<u64>().ok().filter(|n| *n > 0).ok_or(
                                FormulaError::Syntax {
                                    pos: np,
                                    msg: "divides expects a positive integer modulus".into(),
                                },
                            )?,
                            _ => {
                                return Err(FormulaError::Syntax {
                                    pos: np,
                                    msg: "divides expects a positive integer modulus".into(),
                                })
                            }
                        };
                        let t = self.parse_term()?;
                        let t = annotate(t, Sort::Group, p)?;
                        Formula::Divides(n, t)
                    }
                    other => {
                        return Err(FormulaError::Syntax {
                            pos: hp,
                            msg: format!("unknown connective or predicate '{other}'"),
                        })
                    }
                };
                self.expect_rparen()?;
                Ok(f)
            }
            (_, p) => Err(FormulaError::Syntax { pos: p, msg: "expected '('".into() }),
        }
    }

    fn parse_term(&mut self) -> Result<RawTerm, FormulaError> {
        match self.next()? {
            (Token::Symbol(s), p) => {
                if let Some(v) = parse_var(&s) {
                    Ok(RawTerm::Var(v))
                } else if let Ok(n) = s.parse::<u64>() {
                    Ok(RawTerm::Int(n))
                } else {
                    Err(FormulaError::Syntax {
                        pos: p,
                        msg: format!("'{s}' is neither a variable nor a nonnegative integer"),
                    })
                }
            }
            (Token::LParen, p) => {
                let (head, hp) = match self.next()? {
                    (Token::Symbol(s), hp) => (s, hp),
                    (_, hp) => {
                        return Err(FormulaError::Syntax {
                            pos: hp,
                            msg: "expected a function symbol".into(),
                        })
                    }
                };
                let t = match head.as_str() {
                    "+" => {
                        let a = self.parse_term()?;
                        let b = self.parse_term()?;
                        RawTerm::Add(Box::new(a), Box::new(b))
                    }
                    "*" => {
                        let a = self.parse_term()?;
                        let b = self.parse_term()?;
                        RawTerm::Mul(Box::new(a), Box::new(b))
                    }
                    "-" => RawTerm::Neg(Box::new(self.parse_term()?)),
                    "ord" => RawTerm::Ord(Box::new(self.parse_term()?)),
                    "ac" => RawTerm::Ac(Box::new(self.parse_term()?)),
                    other => {
                        return Err(FormulaError::Syntax {
                            pos: hp,
                            msg: format!("unknown function symbol '{other}'"),
                        })
                    }
                };
                self.expect_rparen()?;
                let _ = p;
                Ok(t)
            }
            (Token::RParen, p) => {
                Err(FormulaError::Syntax { pos: p, msg: "expected a term".into() })
            }
        }
    }
}

fn parse_var(s: &str) -> Option<Var> {
    Var::parse(s)
}

/// The sort a raw term is forced to have, or `None` for pure-literal terms.
fn infer(t: &RawTerm, pos: usize) -> Result<Option<Sort>, FormulaError> {
    match t {
        RawTerm::Var(v) => Ok(Some(v.sort)),
        RawTerm::Int(_) => Ok(None),
        RawTerm::Add(a, b) | RawTerm::Mul(a, b) => {
            let sa = infer(a, pos)?;
            let sb = infer(b, pos)?;
            unify(sa, sb, pos)
        }
        RawTerm::Neg(a) => infer(a, pos),
        RawTerm::Ord(a) | RawTerm::Ac(a) => {
            let inner = infer(a, pos)?;
            if let Some(s) = inner {
                if s != Sort::Field {
                    return Err(FormulaError::Sort {
                        msg: format!(
                            "{} applies to field terms, got a {s} term",
                            if matches!(t, RawTerm::Ord(_)) { "ord" } else { "ac" }
                        ),
                    });
                }
            }
            Ok(Some(if matches!(t, RawTerm::Ord(_)) { Sort::Group } else { Sort::Residue }))
        }
    }
}

fn unify(a: Option<Sort>, b: Option<Sort>, _pos: usize) -> Result<Option<Sort>, FormulaError> {
    match (a, b) {
        (None, s) | (s, None) => Ok(s),
        (Some(sa), Some(sb)) if sa == sb => Ok(Some(sa)),
        (Some(sa), Some(sb)) => {
            Err(FormulaError::Sort { msg: format!("cannot combine {sa} and {sb} terms") })
        }
    }
}

/// Pushes the resolved sort into literals and produces the typed term.
fn annotate(t: RawTerm, sort: Sort, pos: usize) -> Result<Term, FormulaError> {
    let forced = infer(&t, pos)?;
    if let Some(s) = forced {
        if s != sort {
            return Err(FormulaError::Sort {
                msg: format!("expected a {sort} term, found a {s} term"),
            });
        }
    }
    annotate_unchecked(t, sort, pos)
}

fn annotate_unchecked(t: RawTerm, sort: Sort, pos: usize) -> Result<Term, FormulaError> {
    let typed = match t {
        RawTerm::Var(v) => {
            if v.sort != sort {
                return Err(FormulaError::Sort {
                    msg: format!("variable {} has sort {}, expected {}", v.name(), v.sort, sort),
                });
            }
            Term::Var(v)
        }
        RawTerm::Int(n) => Term::Int(n, sort),
        RawTerm::Add(a, b) => {
            Term::add(annotate_unchecked(*a, sort, pos)?, annotate_unchecked(*b, sort, pos)?)
        }
        RawTerm::Mul(a, b) => {
            let a = annotate_unchecked(*a, sort, pos)?;
            let b = annotate_unchecked(*b, sort, pos)?;
            if sort == Sort::Group && !a.is_ground_int() && !b.is_ground_int() {
                return Err(FormulaError::Sort {
                    msg: "group products must have a constant factor (additive theory only)"
                        .into(),
                });
            }
            Term::mul(a, b)
        }
        RawTerm::Neg(a) => Term::neg(annotate_unchecked(*a, sort, pos)?),
        RawTerm::Ord(a) => {
            if sort != Sort::Group {
                return Err(FormulaError::Sort {
                    msg: format!("ord yields a group term, expected {sort}"),
                });
            }
            Term::ord_of(annotate_unchecked(*a, Sort::Field, pos)?)
        }
        RawTerm::Ac(a) => {
            if sort != Sort::Residue {
                return Err(FormulaError::Sort {
                    msg: format!("ac yields a residue term, expected {sort}"),
                });
            }
            Term::ac_of(annotate_unchecked(*a, Sort::Field, pos)?)
        }
    };
    Ok(typed)
}

/// Types an equality atom: unify the two sides; all-literal atoms default to
/// the group sort.
fn type_eq_atom(a: RawTerm, b: RawTerm, pos: usize) -> Result<Formula, FormulaError> {
    let sa = infer(&a, pos)?;
    let sb = infer(&b, pos)?;
    let sort = unify(sa, sb, pos)?.unwrap_or(Sort::Group);
    let a = annotate_unchecked(a, sort, pos)?;
    let b = annotate_unchecked(b, sort, pos)?;
    Ok(Formula::Eq(a, b))
}

/// Parses a formula from its s-expression text and sort-checks it.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let lexer = lex(text)?;
    let mut parser = Parser { tokens: lexer.tokens, pos: 0, end: text.len() };
    let f = parser.parse_formula()?;
    if let Some((_, p)) = parser.peek() {
        return Err(FormulaError::Syntax {
            pos: *p,
            msg: "trailing input after formula".into(),
        });
    }
    f.check_sorts().map_err(|msg| FormulaError::Sort { msg })?;
    Ok(f)
}
