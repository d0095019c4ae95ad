//! Weierstrass polynomial reconstruction and the pullback oracle.
//!
//! The monic polynomial `P(z, w) = w^m + b_1(z) w^(m-1) + ... + b_m(z)`
//! vanishing on the branch is recovered by expanding the product of
//! `w - g(rho^j t)` over all m-th roots of unity and descending: every
//! t-exponent of every coefficient must be a multiple of m, and every
//! coefficient must be Galois-fixed (rational), after which `t^(lm)`
//! rewrites to `z^l`. Both descent conditions are asserted, not assumed.
//!
//! Differentiating P in w symbolically and substituting `(t^m, g(t))`
//! gives a fourth, fully independent route to `ord_0(P'_w ∘ Π)`: it shares
//! no code with the closed form, the `k_j*` scan, or the factor product.
//!
//! Internally the expansion clears denominators first (`g -> lambda g`
//! maps roots `w -> lambda w`, so `b_j` rescales by `lambda^j`), which
//! keeps the root-of-unity arithmetic over integer coordinates.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Integer as _, One, Signed};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::branch::BranchParametrization;
use crate::exactnum::{format_rational, CycloField, ExactNumError, Rational};
use crate::series::{SeriesOrder, SparseSeries, Truncation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeierstrassError {
    #[error("coefficient of w^{w_power} has non-rational coefficient at t^{t_exponent}; Galois descent failed (implementation bug)")]
    GaloisDescentFailure { w_power: u64, t_exponent: u64 },
    #[error("coefficient of w^{w_power} is supported at t^{t_exponent}, not a multiple of m (implementation bug)")]
    NonMultipleExponent { w_power: u64, t_exponent: u64 },
    #[error(transparent)]
    ExactNum(#[from] ExactNumError),
}

/// `P(z, w) = w^m + b_1(z) w^(m-1) + ... + b_m(z)` with each `b_j` an
/// exact polynomial in `z` and `b_j(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassPolynomial {
    m: u64,
    b: Vec<SparseSeries<Rational>>,
}

impl WeierstrassPolynomial {
    pub fn degree(&self) -> u64 {
        self.m
    }

    /// `b_j(z)` for `j` in `1..=m`.
    pub fn coefficient(&self, j: u64) -> &SparseSeries<Rational> {
        &self.b[(j - 1) as usize]
    }

    pub fn coefficients(&self) -> &[SparseSeries<Rational>] {
        &self.b
    }

    /// `P(t^m, g(t))`, exact. Zero for the branch the polynomial was built
    /// from: that identity is the checkable content of the construction.
    pub fn eval_at_parametrization(
        &self,
        branch: &BranchParametrization,
    ) -> SparseSeries<Rational> {
        let g = branch.g_series();
        let m = self.m;
        let mut acc = g_power(&g, m);
        for (j, bj) in self.b.iter().enumerate() {
            let wpow = m - 1 - j as u64;
            let term = substitute_z(bj, m).mul(&g_power(&g, wpow));
            acc = acc.add(&term);
        }
        acc
    }

    /// The w-derivative `P'_w` as pairs `(w-power, z-polynomial)`, i.e.
    /// `m w^(m-1) + sum (m-j) b_j(z) w^(m-1-j)` over `j < m`.
    pub fn derivative_w(&self) -> Vec<(u64, SparseSeries<Rational>)> {
        let m = self.m;
        let mut out = Vec::new();
        let lead = SparseSeries::monomial(0, Rational::from(BigInt::from(m)));
        out.push((m - 1, lead));
        for j in 1..m {
            let factor = Rational::from(BigInt::from(m - j));
            let bj = self.coefficient(j).scale(&factor);
            if !bj.is_empty() {
                out.push((m - 1 - j, bj));
            }
        }
        out
    }

    /// `P'_w` as a bivariate polynomial in `z, w`.
    pub fn derivative_w_poly(&self) -> crate::expr::BivarPoly {
        let mut out = crate::expr::BivarPoly::zero();
        for (wpow, zpoly) in self.derivative_w() {
            for (ze, c) in zpoly.terms() {
                out.add_term(ze, wpow, c.clone());
            }
        }
        out
    }
}

/// Expand `prod_(j=0)^(m-1) (w - g(rho^j t))` over `Q(zeta_m)[t]`, check
/// descent, and rewrite `t^(lm) -> z^l`.
pub fn build_weierstrass(
    branch: &BranchParametrization,
) -> Result<WeierstrassPolynomial, WeierstrassError> {
    let m = branch.multiplicity();
    let field = CycloField::new(m)?;

    // Clear denominators: lambda * g has integer coefficients.
    let mut lambda = BigInt::one();
    for (_, c) in branch.g_terms() {
        lambda = lambda.lcm(c.denom());
    }
    let g_int: Vec<(u64, BigInt)> = branch
        .g_terms()
        .iter()
        .map(|(e, c)| (*e, c.numer() * (&lambda / c.denom())))
        .collect();

    // acc[i] = coefficient of w^i, a t-polynomial over Z[zeta_m].
    let mut acc: Vec<BTreeMap<u64, Vec<BigInt>>> = vec![BTreeMap::new()];
    acc[0].insert(0, {
        let mut one = field.zero_int();
        one[0] = BigInt::one();
        one
    });
    for j in 0..m {
        let root: BTreeMap<u64, Vec<BigInt>> = g_int
            .iter()
            .map(|(k, c)| {
                let mut v = field.root_power_int((k * j) as i64);
                for coord in &mut v {
                    *coord *= c;
                }
                (*k, v)
            })
            .collect();
        let mut next: Vec<BTreeMap<u64, Vec<BigInt>>> = vec![BTreeMap::new(); acc.len() + 1];
        for (i, poly) in acc.iter().enumerate() {
            // w * acc[i]
            for (e, c) in poly {
                merge_add(&mut next[i + 1], *e, c.clone(), &field);
            }
            // -root_j * acc[i]
            for (e1, c1) in poly {
                for (e2, c2) in &root {
                    let prod = field.mul_int(c1, c2);
                    merge_sub(&mut next[i], e1 + e2, prod, &field);
                }
            }
        }
        acc = next;
    }

    debug_assert_eq!(acc.len() as u64, m + 1);
    debug_assert!(
        acc[m as usize].len() == 1
            && field
                .rational_part_int(acc[m as usize].get(&0).unwrap())
                .is_some_and(|c| c.is_one()),
        "expansion must be monic in w"
    );

    // Descend: integer coordinates, exponents divisible by m, rescale by
    // lambda^j, and rewrite t^(lm) -> z^l.
    let mut b = Vec::with_capacity(m as usize);
    let mut lambda_pow = BigInt::one();
    for j in 1..=m {
        lambda_pow *= &lambda;
        let w_power = m - j;
        let poly = &acc[w_power as usize];
        let mut bj = SparseSeries::zero(Truncation::Exact);
        for (e, c) in poly {
            if e % m != 0 {
                return Err(WeierstrassError::NonMultipleExponent {
                    w_power,
                    t_exponent: *e,
                });
            }
            let r = field.rational_part_int(c).ok_or(WeierstrassError::GaloisDescentFailure {
                w_power,
                t_exponent: *e,
            })?;
            bj.add_term(e / m, Rational::new(r, lambda_pow.clone()));
        }
        assert!(bj.stored(0).is_none(), "b_{j}(0) = 0 must hold for a Weierstrass polynomial");
        b.push(bj);
    }

    Ok(WeierstrassPolynomial { m, b })
}

/// `P'_w` pulled back along the parametrization: an exact polynomial in t.
pub fn pullback_dw(
    p: &WeierstrassPolynomial,
    branch: &BranchParametrization,
) -> SparseSeries<Rational> {
    let g = branch.g_series();
    let mut acc: SparseSeries<Rational> = SparseSeries::zero(Truncation::Exact);
    for (wpow, zpoly) in p.derivative_w() {
        let term = substitute_z(&zpoly, p.m).mul(&g_power(&g, wpow));
        acc = acc.add(&term);
    }
    acc
}

/// End-to-end oracle: build P, differentiate, pull back, take the order.
pub fn ord_pw_weierstrass(branch: &BranchParametrization) -> Result<u64, WeierstrassError> {
    let p = build_weierstrass(branch)?;
    match pullback_dw(&p, branch).order() {
        SeriesOrder::Order(v) => Ok(v),
        other => unreachable!("pullback of P'_w is a nonzero polynomial, got {other:?}"),
    }
}

fn substitute_z(zpoly: &SparseSeries<Rational>, m: u64) -> SparseSeries<Rational> {
    SparseSeries::from_terms(
        zpoly.terms().map(|(e, c)| (e * m, c.clone())),
        Truncation::Exact,
    )
}

fn g_power(g: &SparseSeries<Rational>, k: u64) -> SparseSeries<Rational> {
    let mut acc = SparseSeries::monomial(0, Rational::one());
    for _ in 0..k {
        acc = acc.mul(g);
    }
    acc
}

fn merge_add(map: &mut BTreeMap<u64, Vec<BigInt>>, e: u64, v: Vec<BigInt>, field: &CycloField) {
    match map.entry(e) {
        std::collections::btree_map::Entry::Vacant(slot) => {
            if !field.is_zero_int(&v) {
                slot.insert(v);
            }
        }
        std::collections::btree_map::Entry::Occupied(mut slot) => {
            let sum = field.add_int(slot.get(), &v);
            if field.is_zero_int(&sum) {
                slot.remove();
            } else {
                slot.insert(sum);
            }
        }
    }
}

fn merge_sub(map: &mut BTreeMap<u64, Vec<BigInt>>, e: u64, v: Vec<BigInt>, field: &CycloField) {
    let neg: Vec<BigInt> = v.into_iter().map(|c| -c).collect();
    merge_add(map, e, neg, field);
}

impl fmt::Display for WeierstrassPolynomial {
    /// Human normal form, e.g. `w^2 - z^3` or `w^3 + 2*z*w - 1/2*z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_monomial(&Rational::one(), 0, self.m))?;
        for j in 1..=self.m {
            let wpow = self.m - j;
            for (e, c) in self.coefficient(j).terms() {
                let sign = if c.is_negative() { " - " } else { " + " };
                write!(f, "{sign}{}", format_monomial(&c.abs(), e, wpow))?;
            }
        }
        Ok(())
    }
}

fn format_monomial(coeff: &Rational, z_exp: u64, w_exp: u64) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !coeff.is_one() || (z_exp == 0 && w_exp == 0) {
        parts.push(format_rational(coeff));
    }
    if z_exp == 1 {
        parts.push("z".into());
    } else if z_exp > 1 {
        parts.push(format!("z^{z_exp}"));
    }
    if w_exp == 1 {
        parts.push("w".into());
    } else if w_exp > 1 {
        parts.push(format!("w^{w_exp}"));
    }
    parts.join("*")
}

impl Serialize for WeierstrassPolynomial {
    /// JSON form `{"m": 2, "b": [[], [[3, "-1"]]]}` with exact rational
    /// coefficient strings.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let b: Vec<Vec<(u64, String)>> = self
            .b
            .iter()
            .map(|s| s.terms().map(|(e, c)| (e, format_rational(c))).collect())
            .collect();
        let mut st = serializer.serialize_struct("WeierstrassPolynomial", 2)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("b", &b)?;
        st.end()
    }
}
