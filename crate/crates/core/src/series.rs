//! Sparse univariate series with explicit truncation tracking.
//!
//! A `SparseSeries` is a finitely supported map exponent -> nonzero
//! coefficient together with a `Truncation` marker: `Exact` means every
//! term of the series is stored; `TruncatedAt(N)` means coefficients are
//! known exactly for exponents `<= N` and unknown beyond.
//!
//! The distinction matters for order queries: an empty exact series is the
//! zero series, an empty truncated series merely has order `> N`. Every
//! operation propagates truncation conservatively so an order reported as
//! determinate is always correct.
//!
//! Invariants:
//! - no stored coefficient is zero (checked with the exact zero-test),
//! - for `TruncatedAt(N)` all stored exponents are `<= N`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use crate::exactnum::{CycloElement, CycloField, Rational};

/// How much of a series is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// All terms are stored; the series is an exact polynomial.
    Exact,
    /// Terms with exponent `> N` are unknown.
    TruncatedAt(u64),
}

impl Truncation {
    /// Known-up-to bound; `None` means fully known.
    pub fn known_to(self) -> Option<u64> {
        match self {
            Truncation::Exact => None,
            Truncation::TruncatedAt(n) => Some(n),
        }
    }

    fn meet(self, other: Truncation) -> Truncation {
        match (self.known_to(), other.known_to()) {
            (None, None) => Truncation::Exact,
            (Some(a), None) => Truncation::TruncatedAt(a),
            (None, Some(b)) => Truncation::TruncatedAt(b),
            (Some(a), Some(b)) => Truncation::TruncatedAt(a.min(b)),
        }
    }
}

/// Result of an order query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrder {
    Order(u64),
    /// Exactly the zero series.
    ZeroSeries,
    /// Empty but truncated: the order may exceed the truncation bound.
    Indeterminate,
}

impl SeriesOrder {
    pub fn determinate(self) -> Option<u64> {
        match self {
            SeriesOrder::Order(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("division by the zero series")]
    DivisionByZeroSeries,
    #[error("quotient has a pole: numerator order {num_order} < denominator order {den_order}")]
    NotPowerSeries { num_order: u64, den_order: u64 },
    #[error("insufficient input precision: need terms up to {needed}, known only to {known}")]
    InsufficientPrecision { needed: u64, known: u64 },
}

/// Coefficient operations the series layer needs. Implemented for exact
/// rationals and for `Q(zeta_m)` elements; both have sound zero-tests.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` when not invertible (i.e. zero, since coefficients live in a
    /// field).
    fn invert(&self) -> Option<Self>;
}

impl Coeff for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn invert(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(Rational::one() / self.clone())
        }
    }
}

impl Coeff for CycloElement {
    fn is_zero(&self) -> bool {
        CycloElement::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        CycloElement::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        CycloElement::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        CycloElement::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        CycloElement::neg(self)
    }
    fn invert(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

/// Finitely supported series over a coefficient field, with truncation.
#[derive(Clone, PartialEq)]
pub struct SparseSeries<C: Coeff> {
    terms: BTreeMap<u64, C>,
    truncation: Truncation,
}

impl<C: Coeff> fmt::Debug for SparseSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseSeries({:?}, {:?})", self.truncation, self.terms)
    }
}

impl<C: Coeff> SparseSeries<C> {
    pub fn zero(truncation: Truncation) -> Self {
        SparseSeries { terms: BTreeMap::new(), truncation }
    }

    /// Build from terms, dropping zero coefficients and any term beyond the
    /// truncation bound. Duplicate exponents add up.
    pub fn from_terms<I>(terms: I, truncation: Truncation) -> Self
    where
        I: IntoIterator<Item = (u64, C)>,
    {
        let mut s = SparseSeries::zero(truncation);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn monomial(exponent: u64, coeff: C) -> Self {
        SparseSeries::from_terms([(exponent, coeff)], Truncation::Exact)
    }

    /// Add `c * t^e` in place, respecting the invariants.
    pub fn add_term(&mut self, exponent: u64, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        if let Some(n) = self.truncation.known_to() {
            if exponent > n {
                return;
            }
        }
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Iterate stored `(exponent, coefficient)` pairs in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &C)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored coefficient at `k`, if any. Absence means zero when `k` is
    /// within the known range, unknown beyond it.
    pub fn stored(&self, k: u64) -> Option<&C> {
        self.terms.get(&k)
    }

    /// Smallest stored exponent.
    pub fn min_exponent(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }

    /// The order of the series, if determinate.
    pub fn order(&self) -> SeriesOrder {
        match self.min_exponent() {
            Some(e) => SeriesOrder::Order(e),
            None => match self.truncation {
                Truncation::Exact => SeriesOrder::ZeroSeries,
                Truncation::TruncatedAt(_) => SeriesOrder::Indeterminate,
            },
        }
    }

    /// A lower bound for the order: exact when terms exist, `N + 1` for an
    /// empty truncated series, `None` (order infinite) for the exact zero.
    pub fn order_lower_bound(&self) -> Option<u64> {
        match self.min_exponent() {
            Some(e) => Some(e),
            None => match self.truncation {
                Truncation::Exact => None,
                Truncation::TruncatedAt(n) => Some(n + 1),
            },
        }
    }

    fn retrunc(mut self, truncation: Truncation) -> Self {
        if let Some(n) = truncation.known_to() {
            self.terms.retain(|&e, _| e <= n);
        }
        self.truncation = truncation;
        self
    }

    /// Weaken the series to `TruncatedAt(n)` (or keep a tighter bound it
    /// already has), discarding terms beyond `n`.
    pub fn truncate_to(&self, n: u64) -> Self {
        let t = self.truncation.meet(Truncation::TruncatedAt(n));
        self.clone().retrunc(t)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let trunc = self.truncation.meet(rhs.truncation);
        let mut out = self.clone().retrunc(trunc);
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let trunc = self.truncation.meet(rhs.truncation);
        let mut out = self.clone().retrunc(trunc);
        for (e, c) in rhs.terms() {
            out.sub_term(e, c);
        }
        out
    }

    fn sub_term(&mut self, exponent: u64, coeff: &C) {
        if coeff.is_zero() {
            return;
        }
        if let Some(n) = self.truncation.known_to() {
            if exponent > n {
                return;
            }
        }
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(coeff.neg());
            }
            Entry::Occupied(mut o) => {
                let diff = o.get().sub(coeff);
                if diff.is_zero() {
                    o.remove();
                } else {
                    o.insert(diff);
                }
            }
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // Exact zero absorbs everything, including truncated operands.
        if self.is_empty() && self.truncation == Truncation::Exact {
            return SparseSeries::zero(Truncation::Exact);
        }
        if rhs.is_empty() && rhs.truncation == Truncation::Exact {
            return SparseSeries::zero(Truncation::Exact);
        }
        // The unknown tail of one factor times the other factor starts at
        // N + ord(other); everything strictly below is fully determined.
        let mut bound: Option<u64> = None;
        if let Some(n) = self.truncation.known_to() {
            let v = rhs.order_lower_bound().expect("exact zero handled above");
            bound = Some(n + v);
        }
        if let Some(n) = rhs.truncation.known_to() {
            let v = self.order_lower_bound().expect("exact zero handled above");
            let b = n + v;
            bound = Some(bound.map_or(b, |x| x.min(b)));
        }
        let trunc = match bound {
            None => Truncation::Exact,
            Some(n) => Truncation::TruncatedAt(n),
        };
        let mut out = SparseSeries::zero(trunc);
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                let e = e1 + e2;
                if let Some(n) = bound {
                    if e > n {
                        continue;
                    }
                }
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return SparseSeries::zero(self.truncation);
        }
        SparseSeries {
            terms: self.terms.iter().map(|(&e, c)| (e, c.mul(k))).collect(),
            truncation: self.truncation,
        }
    }

    /// Multiply by `t^shift`.
    pub fn shift_up(&self, shift: u64) -> Self {
        let truncation = match self.truncation {
            Truncation::Exact => Truncation::Exact,
            Truncation::TruncatedAt(n) => Truncation::TruncatedAt(n + shift),
        };
        SparseSeries {
            terms: self.terms.iter().map(|(&e, c)| (e + shift, c.clone())).collect(),
            truncation,
        }
    }

    /// Power-series division to the requested truncation.
    ///
    /// Returns `NotPowerSeries` when the quotient would have a pole. The
    /// result is `Exact` when both inputs are exact and the division
    /// terminates with no remainder; otherwise `TruncatedAt(out_truncation)`.
    pub fn divide(num: &Self, den: &Self, out_truncation: u64) -> Result<Self, SeriesError> {
        let den_ord = match den.order_lower_bound() {
            None => return Err(SeriesError::DivisionByZeroSeries),
            Some(v) => v,
        };
        if den.is_empty() {
            // Truncated empty: ord(den) > N is known but not the leading
            // coefficient, so no quotient coefficient is computable.
            return Err(SeriesError::InsufficientPrecision { needed: den_ord, known: den_ord - 1 });
        }
        let needed = out_truncation + den_ord;
        for t in [num.truncation, den.truncation] {
            if let Some(n) = t.known_to() {
                if n < needed {
                    return Err(SeriesError::InsufficientPrecision { needed, known: n });
                }
            }
        }
        let lead_inv = den
            .stored(den_ord)
            .and_then(|c| c.invert())
            .expect("leading coefficient of a stored term is nonzero");

        let mut rem = num.terms.clone();
        rem.retain(|&e, _| e <= needed);
        // Anything discarded outside the working window forfeits the claim
        // that the quotient is an exact polynomial.
        let mut clean_finish = rem.len() == num.terms.len();
        let mut quot = SparseSeries::zero(Truncation::TruncatedAt(out_truncation));
        while let Some((&e, _)) = rem.first_key_value() {
            if e < den_ord {
                return Err(SeriesError::NotPowerSeries { num_order: e, den_order: den_ord });
            }
            if e - den_ord > out_truncation {
                clean_finish = false;
                break;
            }
            let c = rem.remove(&e).unwrap();
            let q = c.mul(&lead_inv);
            for (de, dc) in den.terms().skip(1) {
                let target = e - den_ord + de;
                if target > needed {
                    clean_finish = false;
                    break;
                }
                let delta = q.mul(dc);
                match rem.entry(target) {
                    Entry::Vacant(v) => {
                        if !delta.is_zero() {
                            v.insert(delta.neg());
                        }
                    }
                    Entry::Occupied(mut o) => {
                        let new = o.get().sub(&delta);
                        if new.is_zero() {
                            o.remove();
                        } else {
                            o.insert(new);
                        }
                    }
                }
            }
            quot.add_term(e - den_ord, q);
        }
        let exact_inputs =
            num.truncation == Truncation::Exact && den.truncation == Truncation::Exact;
        if exact_inputs && clean_finish && rem.is_empty() {
            Ok(quot.retrunc(Truncation::Exact))
        } else {
            Ok(quot)
        }
    }
}

/// The binary operations of the series layer, mirroring `cyclo_arith`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

pub fn series_arith<C: Coeff>(
    a: &SparseSeries<C>,
    b: &SparseSeries<C>,
    op: SeriesOp,
) -> SparseSeries<C> {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Sub => a.sub(b),
        SeriesOp::Mul => a.mul(b),
    }
}

impl SparseSeries<Rational> {
    /// Lift a rational series into `Q(zeta_m)` coefficients.
    pub fn lift_to(&self, field: &CycloField) -> SparseSeries<CycloElement> {
        SparseSeries {
            terms: self.terms.iter().map(|(&e, c)| (e, field.from_rational(c.clone()))).collect(),
            truncation: self.truncation,
        }
    }

    /// Substitute `t -> rho^j t`: the coefficient of `t^k` picks up the
    /// factor `(rho^j)^k`. `rho_power` must be a power of a root of unity.
    pub fn scale_argument(&self, rho_power: &CycloElement) -> SparseSeries<CycloElement> {
        self.lift_to(rho_power.field()).scale_argument(rho_power)
    }
}

impl SparseSeries<CycloElement> {
    pub fn scale_argument(&self, rho_power: &CycloElement) -> SparseSeries<CycloElement> {
        let field = rho_power.field().clone();
        let m = field.order();
        debug_assert!(rho_power.pow(m) == field.one(), "scale factor must be a root of unity");
        // (rho^j)^k depends only on k mod m; precompute the cycle.
        let mut powers = Vec::with_capacity(m as usize);
        let mut acc = field.one();
        for _ in 0..m {
            powers.push(acc.clone());
            acc = acc.mul(rho_power);
        }
        let mut out = SparseSeries::zero(self.truncation);
        for (e, c) in self.terms() {
            out.add_term(e, c.mul(&powers[(e % m) as usize]));
        }
        out
    }
}
