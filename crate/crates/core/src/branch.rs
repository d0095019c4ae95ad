//! Branch parametrizations `t -> (t^m, g(t))` and Puiseux characteristics.
//!
//! The parametrization is the single source of truth for everything else in
//! the crate. Validation enforces the normal form: every exponent of `g` is
//! `>= m`, coefficients are nonzero exact rationals, exponents are distinct,
//! and `gcd(m, supp g) = 1` so that the map really is the normalization of
//! an irreducible germ rather than a multiple cover.

use num::Integer as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{format_rational, parse_rational, Rational};
use crate::series::{Coeff as _, SparseSeries, Truncation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BranchError {
    #[error("multiplicity m must be >= 1")]
    ZeroMultiplicity,
    #[error(
        "exponent {exponent} is below the multiplicity {m}; the parametrization is not in \
         normal form (ord g >= m) — exchange the roles of the coordinates first"
    )]
    ExponentBelowMultiplicity { exponent: u64, m: u64 },
    #[error("coefficient of t^{exponent} is zero; omit the term instead")]
    ZeroCoefficient { exponent: u64 },
    #[error("exponent {exponent} appears more than once")]
    DuplicateExponent { exponent: u64 },
    #[error(
        "not primitive: gcd(m, exponents) = {gcd} > 1, so the data parametrizes a \
         {gcd}-fold cover, not a branch normalization"
    )]
    NotPrimitive { gcd: u64 },
    #[error("coefficient `{literal}` of t^{exponent} is not a rational literal")]
    BadCoefficient { exponent: u64, literal: String },
}

/// A validated branch `(t^m, g(t))` with `g` a polynomial over `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchParametrization {
    m: u64,
    /// Terms of `g`, sorted by exponent, all exponents `>= m`, coefficients
    /// nonzero.
    g: Vec<(u64, Rational)>,
}

impl BranchParametrization {
    /// Validate raw data into a parametrization. This is the only
    /// constructor; every invariant downstream relies on it.
    pub fn new(m: u64, terms: Vec<(u64, Rational)>) -> Result<Self, BranchError> {
        if m == 0 {
            return Err(BranchError::ZeroMultiplicity);
        }
        let mut g = terms;
        g.sort_by_key(|&(e, _)| e);
        for w in g.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(BranchError::DuplicateExponent { exponent: w[0].0 });
            }
        }
        for (e, c) in &g {
            if c.is_zero() {
                return Err(BranchError::ZeroCoefficient { exponent: *e });
            }
            if *e < m {
                return Err(BranchError::ExponentBelowMultiplicity { exponent: *e, m });
            }
        }
        let mut d = m;
        for (e, _) in &g {
            d = d.gcd(e);
        }
        if d != 1 {
            return Err(BranchError::NotPrimitive { gcd: d });
        }
        Ok(BranchParametrization { m, g })
    }

    pub fn multiplicity(&self) -> u64 {
        self.m
    }

    pub fn g_terms(&self) -> &[(u64, Rational)] {
        &self.g
    }

    /// `g` as an exact series in `t`.
    pub fn g_series(&self) -> SparseSeries<Rational> {
        SparseSeries::from_terms(self.g.iter().cloned(), Truncation::Exact)
    }

    /// Exponents of `g` with nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.g.iter().map(|&(e, _)| e)
    }

    /// `ord_0 g`, i.e. the pullback order of `w`; `None` when `g = 0`
    /// (only possible for the smooth axis `m = 1`).
    pub fn ord_g(&self) -> Option<u64> {
        self.g.first().map(|&(e, _)| e)
    }

    /// Extract the characteristic sequence by the gcd recursion: scan the
    /// support in increasing order, `beta_j` is the least exponent with
    /// nonzero coefficient not divisible by `e_(j-1)`, and
    /// `e_j = gcd(e_(j-1), beta_j)`, stopping at `e_M = 1`.
    pub fn characteristic_sequence(&self) -> CharacteristicSequence {
        let mut e = vec![self.m];
        let mut beta = Vec::new();
        while *e.last().unwrap() != 1 {
            let last = *e.last().unwrap();
            let b = self
                .support()
                .find(|k| k % last != 0)
                .expect("primitivity guarantees the recursion reaches e = 1");
            beta.push(b);
            e.push(last.gcd(&b));
        }
        CharacteristicSequence { m: self.m, beta, e }
    }

    /// Render as a file spec, e.g. for JSON output.
    pub fn to_spec(&self, name: Option<String>) -> CurveSpec {
        CurveSpec {
            name,
            m: self.m,
            g: self.g.iter().map(|(e, c)| (*e, format_rational(c))).collect(),
            expect: None,
        }
    }
}

/// The Puiseux characteristic `(m; beta_1, ..., beta_M)` with the gcd
/// sequence `(e_0, ..., e_M)`.
///
/// Invariants: `e_0 = m`, `e_M = 1`, `e` strictly decreasing, `beta`
/// strictly increasing with `beta_j > m`, and `e_j = gcd(e_(j-1), beta_j)`.
/// `M = 0` exactly when the branch is smooth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacteristicSequence {
    m: u64,
    beta: Vec<u64>,
    e: Vec<u64>,
}

impl CharacteristicSequence {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn beta(&self) -> &[u64] {
        &self.beta
    }

    pub fn e(&self) -> &[u64] {
        &self.e
    }

    /// The number `M` of characteristic exponents.
    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }
}

/// Expected invariants optionally attached to a curve file; `verify`
/// cross-checks computed values against any that are present.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpectedInvariants {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ord_pw: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bs: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<u64>>,
}

impl ExpectedInvariants {
    pub fn is_vacuous(&self) -> bool {
        *self == ExpectedInvariants::default()
    }
}

/// The canonical curve input document:
/// `{"m": 2, "g": [[3, "1"]], "name": "cusp"}` with coefficients as exact
/// rational strings and exponents ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m: u64,
    pub g: Vec<(u64, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<ExpectedInvariants>,
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<CurveSpec, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_branch(&self) -> Result<BranchParametrization, BranchError> {
        let mut terms = Vec::with_capacity(self.g.len());
        for (e, lit) in &self.g {
            let c = parse_rational(lit).map_err(|_| BranchError::BadCoefficient {
                exponent: *e,
                literal: lit.clone(),
            })?;
            terms.push((*e, c));
        }
        BranchParametrization::new(self.m, terms)
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            let terms: Vec<String> = self.g.iter().map(|(e, c)| format!("{c}*t^{e}")).collect();
            format!("(t^{}, {})", self.m, terms.join(" + "))
        })
    }
}
