//! Exact singularity invariants of irreducible analytic plane-curve germs.
//!
//! A branch is given by its normalization `t -> (t^m, g(t))` with `g` a
//! polynomial with exact rational coefficients. From that single datum the
//! library computes, with no floating point anywhere:
//!
//! - the Puiseux characteristic sequence `(m; beta_1, ..., beta_M)` and the
//!   gcd sequence `(e_0, ..., e_M)`,
//! - the vanishing order of the pulled-back Weierstrass derivative
//!   `ord_0(P'_w ∘ Π)`, by four mutually independent methods,
//! - the Milnor number, the sharp real exponent `kappa`, and the
//!   Briançon–Skoda number of the local ring of the germ,
//! - the value semigroup (generators, gaps, conductor), and
//! - strong-holomorphy / ideal-membership decisions for meromorphic
//!   functions on the curve.
//!
//! Every number is cross-checked: the four order oracles must agree, the
//! semigroup conductor must equal the Milnor number, and the sharpness
//! witness `P'_w / z` must classify as weakly-but-not-strongly holomorphic.

pub mod branch;
pub mod corpus;
pub mod exactnum;
pub mod expr;
pub mod invariants;
pub mod membership;
pub mod sampling;
pub mod series;
pub mod weierstrass;

pub use branch::{BranchParametrization, CharacteristicSequence, CurveSpec};
pub use exactnum::{CycloElement, CycloField, Rational};
pub use expr::BivarPoly;
pub use invariants::InvariantReport;
pub use membership::{CurveMembership, Holomorphy, NumericalSemigroup, RingElementOnCurve};
pub use series::{SeriesOrder, SparseSeries, Truncation};
pub use weierstrass::WeierstrassPolynomial;
