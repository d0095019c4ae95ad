//! The order oracles and the cross-checked invariant report.
//!
//! Four independent routes compute `ord_0(P'_w ∘ Π)`:
//!
//! 1. `closed_form`: the sum `Σ (e_(l-1) - e_l) beta_l` over the
//!    characteristic sequence — pure integer arithmetic.
//! 2. `kstar`: for each `j` in `1..m`, the least support exponent `k` of
//!    `g` with `m ∤ kj`, summed over `j` — integer divisibility only.
//! 3. `series_product`: the product of the `m - 1` factors
//!    `g(t) - g(rho^j t)` expanded exactly over `Q(zeta_m)` — this is the
//!    brute-force route the others are measured against.
//! 4. `weierstrass`: reconstruct `P`, differentiate symbolically, pull
//!    back, take the order — shares no intermediate values with 1-3.
//!
//! `full_report` runs all of them, demands exact agreement, and only then
//! derives `mu`, `Q`, `kappa` and `bs`.

use std::collections::BTreeMap;
use std::fmt;

use num::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::branch::BranchParametrization;
use crate::exactnum::{format_rational, CycloField, Rational};
use crate::series::SparseSeries;
use crate::weierstrass::{self, WeierstrassError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantError {
    #[error("k_{j}* undefined: no support exponent k of g satisfies m ∤ k*{j}")]
    KStarUndefined { j: u64 },
    #[error("k_{j}* = {kstar} is not a characteristic exponent (implementation bug)")]
    KStarNotCharacteristic { j: u64, kstar: u64 },
    #[error("histogram mismatch at beta = {beta}: counted {count}, expected e-difference {expected} (implementation bug)")]
    HistogramMismatch { beta: u64, count: u64, expected: u64 },
    #[error("order oracles disagree: {0:?}", .values)]
    OracleDisagreement { values: BTreeMap<&'static str, u64> },
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

/// The available order oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    ClosedForm,
    KStar,
    SeriesProduct,
    Weierstrass,
}

impl Oracle {
    pub const ALL: [Oracle; 4] =
        [Oracle::ClosedForm, Oracle::KStar, Oracle::SeriesProduct, Oracle::Weierstrass];

    pub fn name(self) -> &'static str {
        match self {
            Oracle::ClosedForm => "closed_form",
            Oracle::KStar => "kstar",
            Oracle::SeriesProduct => "series_product",
            Oracle::Weierstrass => "weierstrass",
        }
    }
}

/// `Σ (e_(l-1) - e_l) beta_l`; zero for a smooth branch.
pub fn ord_pw_closed_form(cs: &crate::branch::CharacteristicSequence) -> u64 {
    let e = cs.e();
    cs.beta().iter().enumerate().map(|(l, &b)| (e[l] - e[l + 1]) * b).sum()
}

/// `k_j* = min { k : c_k != 0, m ∤ kj }` for one `j` in `1..m`.
pub fn kstar(branch: &BranchParametrization, j: u64) -> Result<u64, InvariantError> {
    let m = branch.multiplicity();
    branch
        .support()
        .find(|&k| !(k * j).is_multiple_of(m))
        .ok_or(InvariantError::KStarUndefined { j })
}

/// The vector `(k_1*, ..., k_(m-1)*)`.
pub fn kstar_vector(branch: &BranchParametrization) -> Result<Vec<u64>, InvariantError> {
    (1..branch.multiplicity()).map(|j| kstar(branch, j)).collect()
}

/// `Σ_(j=1)^(m-1) k_j*`; pure integer arithmetic, no cyclotomics.
pub fn ord_pw_kstar(branch: &BranchParametrization) -> Result<u64, InvariantError> {
    Ok(kstar_vector(branch)?.into_iter().sum())
}

/// The brute-force oracle: expand `Π* P'_w = prod (g(t) - g(rho^j t))`
/// exactly over `Q(zeta_m)` and read off the order. As an internal
/// consistency check, the order of the product must equal the sum of the
/// factor orders (a theorem over a field; a violation is a bug, so it
/// panics rather than returning an error).
pub fn ord_pw_series_product(branch: &BranchParametrization) -> u64 {
    let m = branch.multiplicity();
    if m == 1 {
        return 0; // empty product = 1
    }
    let field = CycloField::new(m).expect("m >= 1");
    let g = branch.g_series();
    let g_lift = g.lift_to(&field);
    let mut prod = SparseSeries::monomial(0, field.one());
    let mut factor_order_sum = 0u64;
    for j in 1..m {
        let factor = g_lift.sub(&g.scale_argument(&field.root_power(j as i64)));
        factor_order_sum += factor
            .min_exponent()
            .expect("factor g - g(rho^j t) is nonzero for a primitive branch");
        prod = prod.mul(&factor);
    }
    let ord = prod.min_exponent().expect("product of nonzero polynomials over a field");
    assert_eq!(
        ord, factor_order_sum,
        "order of the factor product must equal the sum of factor orders"
    );
    ord
}

/// `beta_l -> #{ j : k_j* = beta_l }`, checked against the e-differences
/// `e_(l-1) - e_l`. Empty for a smooth branch.
pub fn count_kstar_histogram(
    branch: &BranchParametrization,
) -> Result<BTreeMap<u64, u64>, InvariantError> {
    let cs = branch.characteristic_sequence();
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for j in 1..branch.multiplicity() {
        let k = kstar(branch, j)?;
        if !cs.beta().contains(&k) {
            return Err(InvariantError::KStarNotCharacteristic { j, kstar: k });
        }
        *hist.entry(k).or_insert(0) += 1;
    }
    let e = cs.e();
    for (l, &b) in cs.beta().iter().enumerate() {
        let expected = e[l] - e[l + 1];
        let count = hist.get(&b).copied().unwrap_or(0);
        if count != expected {
            return Err(InvariantError::HistogramMismatch { beta: b, count, expected });
        }
    }
    Ok(hist)
}

/// All invariants of a branch, plus the per-oracle order values and the
/// agreement flag.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    /// `ord_0(P'_w ∘ Π)`, the agreed oracle value.
    pub ord_pw: u64,
    /// Milnor number `mu = ord_pw - m + 1`.
    pub mu: u64,
    /// `Q = (1 + ord_pw) / m`, exact.
    pub q: Rational,
    /// Sharp real exponent `kappa = ord_pw / m = Q - 1/m`, exact.
    pub kappa: Rational,
    /// Briançon–Skoda number `bs = ceil(Q)`.
    pub bs: u64,
    pub oracle_values: BTreeMap<&'static str, u64>,
    pub agreement: bool,
}

impl InvariantReport {
    /// `ceil((1 + ord) / m)` in exact integer arithmetic.
    fn bs_from_ord(ord: u64, m: u64) -> u64 {
        (ord + m) / m
    }
}

/// Run the selected oracles and derive the invariants from the agreed
/// order. Disagreement is a hard failure carrying every computed value.
pub fn report_with_oracles(
    branch: &BranchParametrization,
    oracles: &[Oracle],
) -> Result<InvariantReport, InvariantError> {
    assert!(!oracles.is_empty(), "at least one oracle must run");
    let cs = branch.characteristic_sequence();
    let mut values: BTreeMap<&'static str, u64> = BTreeMap::new();
    for o in oracles {
        let v = match o {
            Oracle::ClosedForm => ord_pw_closed_form(&cs),
            Oracle::KStar => ord_pw_kstar(branch)?,
            Oracle::SeriesProduct => ord_pw_series_product(branch),
            Oracle::Weierstrass => weierstrass::ord_pw_weierstrass(branch)?,
        };
        values.insert(o.name(), v);
    }
    let mut it = values.values();
    let first = *it.next().unwrap();
    if !it.all(|&v| v == first) {
        return Err(InvariantError::OracleDisagreement { values });
    }

    let m = branch.multiplicity();
    let ord = first;
    debug_assert!(ord + 1 >= m, "ord >= m - 1 for every valid branch");
    let mu = ord + 1 - m;
    let q = Rational::new(BigInt::from(ord + 1), BigInt::from(m));
    let kappa = Rational::new(BigInt::from(ord), BigInt::from(m));
    let bs = InvariantReport::bs_from_ord(ord, m);

    // The same number through the characteristic-sequence expression and
    // through mu; these are identities, so a mismatch is a hard failure.
    let bs_charseq = InvariantReport::bs_from_ord(ord_pw_closed_form(&cs), m);
    let bs_mu = 1 + mu.div_ceil(m);
    if bs != bs_charseq || bs != bs_mu {
        let mut values = values;
        values.insert("closed_form", ord_pw_closed_form(&cs));
        return Err(InvariantError::OracleDisagreement { values });
    }

    Ok(InvariantReport { ord_pw: ord, mu, q, kappa, bs, oracle_values: values, agreement: true })
}

/// Run all four oracles and cross-check everything.
pub fn full_report(branch: &BranchParametrization) -> Result<InvariantReport, InvariantError> {
    report_with_oracles(branch, &Oracle::ALL)
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ord_0(pullback P'_w) = {}", self.ord_pw)?;
        let per: Vec<String> =
            self.oracle_values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "  oracles: {} (agreement: {})", per.join(", "), self.agreement)?;
        writeln!(f, "mu     = {}", self.mu)?;
        writeln!(f, "Q      = {}", format_rational(&self.q))?;
        writeln!(f, "kappa  = {}", format_rational(&self.kappa))?;
        write!(f, "bs     = {}", self.bs)
    }
}

impl Serialize for InvariantReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("InvariantReport", 7)?;
        st.serialize_field("agreement", &self.agreement)?;
        st.serialize_field("bs", &self.bs)?;
        st.serialize_field("kappa", &format_rational(&self.kappa))?;
        st.serialize_field("mu", &self.mu)?;
        st.serialize_field("oracle_values", &self.oracle_values)?;
        st.serialize_field("ord_pw", &self.ord_pw)?;
        st.serialize_field("q", &format_rational(&self.q))?;
        st.end()
    }
}
