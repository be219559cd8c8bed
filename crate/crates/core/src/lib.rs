//! Core library for `pasvol`: a toolkit around Pas's three-sorted language
//! for valued fields.
//!
//! The crate is organized around one pipeline with two interpretations of the
//! same formula text:
//!
//! * [`formula`]: abstract syntax, s-expression grammar, sort checking.
//! * [`presburger`]: quantifier elimination and a decision procedure for the
//!   value-group fragment.
//! * [`padic`]: truncated p-adic models, with a three-valued evaluator and
//!   class enumeration producing rigorous volume brackets.
//! * [`motive`]: exact rational functions in the Lefschetz symbol `L`, the
//!   desk-scale fragment of the localized completed Grothendieck ring.
//! * [`mvol`]: symbolic motivic volumes for one-variable formulas via cell
//!   decomposition, and the specialization-vs-enumeration comparison harness.
//! * [`orbital`]: Newton polygons, equal-valuation strips, reduced
//!   characteristic polynomials, curve point counts, resultants, and the
//!   transfer-factor support test.
//! * [`poly`]: shared exact univariate polynomial arithmetic over Q and F_p.

pub mod formula;
pub mod motive;
pub mod mvol;
pub mod orbital;
pub mod padic;
pub mod poly;
pub mod presburger;

pub use formula::{Formula, Sort, Term, Var};
pub use motive::MotiveValue;
pub use padic::{PadicApprox, PadicContext, TruthValue};
