//! Exact rational arithmetic and the cyclotomic fields `Q(zeta_m)`.
//!
//! Elements of `Q(zeta_m)` are residue classes modulo the m-th cyclotomic
//! polynomial `Phi_m`, stored as the unique reduced remainder of degree
//! `< phi(m)`. Because `Phi_m` is irreducible over `Q`, the quotient is a
//! field and "all coordinates zero" is a sound and complete zero-test.
//! That zero-test is what makes order computations on series over
//! `Q(zeta_m)` trustworthy: `1 - rho^(kj)` vanishes exactly when `m | kj`.
//!
//! Invariants:
//! - `Rational` values are always reduced, denominator positive.
//! - `CycloElement::coeffs` has length exactly `phi(m)`.
//! - All values are immutable after construction; no global state.

use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = BigRational;

/// Arbitrary-precision integer.
pub type Integer = BigInt;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactNumError {
    #[error("cyclotomic order must be >= 1")]
    ZeroOrder,
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u64, u64),
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Parse an exact rational from `"p"` or `"p/q"` form.
pub fn parse_rational(s: &str) -> Result<Rational, ExactNumError> {
    let bad = || ExactNumError::BadRational(s.to_string());
    let t = s.trim();
    let (num_str, den_str) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let numer: Integer = num_str.parse().map_err(|_| bad())?;
    let denom: Integer = den_str.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical string form: `"p/q"` reduced, or `"p"` when the denominator
/// is one. This is the form used in all JSON output.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

// ---------------------------------------------------------------------------
// Dense integer polynomials (little-endian), just enough for Phi_n.
// ---------------------------------------------------------------------------

fn poly_trim(p: &mut Vec<Integer>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// `x^n - 1`.
fn x_pow_minus_one(n: u64) -> Vec<Integer> {
    let mut p = vec![Integer::zero(); n as usize + 1];
    p[0] = -Integer::one();
    p[n as usize] = Integer::one();
    p
}

/// Exact division of integer polynomials; panics if the division is not
/// exact or the divisor is not monic (both would be internal bugs here,
/// since we only ever divide `x^n - 1` by products of cyclotomics).
fn poly_div_exact_monic(num: &[Integer], den: &[Integer]) -> Vec<Integer> {
    assert!(!den.is_empty() && den.last().unwrap().is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    if rem.is_empty() {
        return vec![];
    }
    let dd = den.len() - 1;
    assert!(rem.len() > dd);
    let mut quot = vec![Integer::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = std::mem::replace(&mut rem[i + dd], Integer::zero());
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate().take(dd) {
            let t = d * &c;
            rem[i + j] -= t;
        }
        quot[i] = c;
    }
    poly_trim(&mut rem);
    assert!(rem.is_empty(), "non-exact polynomial division");
    quot
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    ds.sort_unstable();
    ds
}

/// The n-th cyclotomic polynomial `Phi_n` as integer coefficients,
/// little-endian, monic, of degree `phi(n)`.
///
/// Computed by iterated exact division: `Phi_n = (x^n - 1) / prod Phi_d`
/// over the proper divisors `d` of `n`.
pub fn cyclotomic_polynomial(n: u64) -> Result<Vec<Integer>, ExactNumError> {
    if n == 0 {
        return Err(ExactNumError::ZeroOrder);
    }
    let mut table: Vec<(u64, Vec<Integer>)> = Vec::new();
    for d in divisors(n) {
        let mut p = x_pow_minus_one(d);
        for (dd, phi) in &table {
            if d % dd == 0 {
                p = poly_div_exact_monic(&p, phi);
            }
        }
        table.push((d, p));
    }
    Ok(table.pop().unwrap().1)
}

// ---------------------------------------------------------------------------
// The field Q(zeta_m).
// ---------------------------------------------------------------------------

struct FieldInner {
    m: u64,
    degree: usize,
    phi: Vec<Integer>,
    /// `x^k mod Phi_m` for `k < m`; integer rows since `Phi_m` is monic.
    root_powers: Vec<Vec<Integer>>,
}

/// A handle to `Q(zeta_m)`; cheap to clone, elements keep one alive.
#[derive(Clone)]
pub struct CycloField {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloField(m={})", self.inner.m)
    }
}

impl CycloField {
    pub fn new(m: u64) -> Result<Self, ExactNumError> {
        let phi = cyclotomic_polynomial(m)?;
        let degree = phi.len() - 1;
        // Rows x^k mod Phi for k = 0..m, built by shift-and-reduce.
        let mut root_powers = Vec::with_capacity(m as usize);
        let mut row = vec![Integer::zero(); degree];
        if degree > 0 {
            row[0] = Integer::one();
        }
        for _ in 0..m {
            root_powers.push(row.clone());
            // multiply by x
            let top = row.pop().unwrap_or_else(Integer::zero);
            row.insert(0, Integer::zero());
            if !top.is_zero() {
                for (i, c) in phi.iter().enumerate().take(degree) {
                    row[i] -= c * &top;
                }
            }
        }
        Ok(CycloField { inner: Arc::new(FieldInner { m, degree, phi, root_powers }) })
    }

    pub fn order(&self) -> u64 {
        self.inner.m
    }

    /// Degree of `Phi_m`, i.e. Euler phi of m.
    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn phi_polynomial(&self) -> &[Integer] {
        &self.inner.phi
    }

    pub fn zero(&self) -> CycloElement {
        CycloElement { field: self.clone(), coeffs: vec![Rational::zero(); self.inner.degree] }
    }

    pub fn one(&self) -> CycloElement {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, q: Rational) -> CycloElement {
        let mut coeffs = vec![Rational::zero(); self.inner.degree];
        // deg Phi_1 = 1, so there is always at least one coordinate.
        coeffs[0] = q;
        CycloElement { field: self.clone(), coeffs }
    }

    /// `rho^e` for the canonical primitive m-th root of unity `rho`
    /// (the residue class of `x`). Negative exponents wrap modulo m.
    pub fn root_power(&self, e: i64) -> CycloElement {
        let m = self.inner.m as i64;
        let k = e.rem_euclid(m) as usize;
        let coeffs = self.inner.root_powers[k]
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        CycloElement { field: self.clone(), coeffs }
    }

    pub fn element_from_coeffs(&self, coeffs: Vec<Rational>) -> CycloElement {
        assert_eq!(coeffs.len(), self.inner.degree, "coefficient vector length must be phi(m)");
        CycloElement { field: self.clone(), coeffs }
    }

    /// Reduce a raw product (length <= 2*degree - 1) modulo `Phi_m`,
    /// folding `x^k = -x^(k-deg) * (phi_0 + ... + phi_(deg-1) x^(deg-1))`
    /// from the top down.
    fn reduce(&self, mut raw: Vec<Rational>) -> Vec<Rational> {
        let deg = self.inner.degree;
        raw.resize(2 * deg.max(1), Rational::zero());
        for k in (deg..2 * deg.max(1)).rev() {
            let top = std::mem::replace(&mut raw[k], Rational::zero());
            if top.is_zero() {
                continue;
            }
            for (i, c) in self.inner.phi.iter().enumerate().take(deg) {
                let t = Rational::from(c.clone()) * &top;
                raw[k - deg + i] -= t;
            }
        }
        raw.truncate(deg);
        raw
    }

    // -- integer-coefficient engine (used by the heavy expansion paths) ----

    pub(crate) fn zero_int(&self) -> Vec<Integer> {
        vec![Integer::zero(); self.inner.degree]
    }

    pub(crate) fn root_power_int(&self, e: i64) -> Vec<Integer> {
        let m = self.inner.m as i64;
        self.inner.root_powers[e.rem_euclid(m) as usize].clone()
    }

    pub(crate) fn is_zero_int(&self, a: &[Integer]) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    /// `Some(c)` when the element lies in `Q` (all non-constant coordinates
    /// vanish), i.e. it is fixed by the Galois action.
    pub(crate) fn rational_part_int(&self, a: &[Integer]) -> Option<Integer> {
        if a[1..].iter().all(|c| c.is_zero()) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    pub(crate) fn add_int(&self, a: &[Integer], b: &[Integer]) -> Vec<Integer> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub(crate) fn mul_int(&self, a: &[Integer], b: &[Integer]) -> Vec<Integer> {
        let deg = self.inner.degree;
        let mut raw = vec![Integer::zero(); 2 * deg.max(1)];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        // Fold exponents >= deg using the monic relation for x^deg.
        for k in (deg..2 * deg.max(1)).rev() {
            let top = std::mem::replace(&mut raw[k], Integer::zero());
            if top.is_zero() {
                continue;
            }
            for (i, c) in self.inner.phi.iter().enumerate().take(deg) {
                let t = c * &top;
                raw[k - deg + i] -= t;
            }
        }
        raw.truncate(deg);
        raw
    }
}

/// An element of `Q(zeta_m)`: the reduced residue class modulo `Phi_m`.
#[derive(Clone)]
pub struct CycloElement {
    field: CycloField,
    coeffs: Vec<Rational>,
}

impl CycloElement {
    pub fn order(&self) -> u64 {
        self.field.order()
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    /// Coordinates in the basis `1, x, ..., x^(phi(m)-1)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `Some(q)` when the element is rational (Galois-fixed).
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn assert_same_order(&self, other: &CycloElement) {
        assert_eq!(
            self.order(),
            other.order(),
            "cyclotomic order mismatch in arithmetic; lift operands to a common field first"
        );
    }

    pub fn add(&self, other: &CycloElement) -> CycloElement {
        self.assert_same_order(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycloElement { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &CycloElement) -> CycloElement {
        self.assert_same_order(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CycloElement { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> CycloElement {
        CycloElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, other: &CycloElement) -> CycloElement {
        self.assert_same_order(other);
        let deg = self.field.inner.degree;
        let mut raw = vec![Rational::zero(); 2 * deg.max(1)];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        let coeffs = self.field.reduce(raw);
        CycloElement { field: self.field.clone(), coeffs }
    }

    pub fn scale(&self, q: &Rational) -> CycloElement {
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_m` (irreducible, so every nonzero element is invertible).
    pub fn inverse(&self) -> Result<CycloElement, ExactNumError> {
        if self.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        let phi: Vec<Rational> =
            self.field.inner.phi.iter().map(|c| Rational::from(c.clone())).collect();
        let (g, _, t) = rpoly_xgcd(&phi, &self.coeffs);
        // g = s*phi + t*self; g is a nonzero constant since Phi_m is
        // irreducible and self != 0 mod Phi_m.
        assert_eq!(g.len(), 1, "gcd with the cyclotomic polynomial must be constant");
        let ginv = Rational::one() / g[0].clone();
        let mut inv: Vec<Rational> = t.iter().map(|c| c * &ginv).collect();
        inv.resize(self.field.inner.degree, Rational::zero());
        let inv = self.field.reduce(inv);
        Ok(CycloElement { field: self.field.clone(), coeffs: inv })
    }

    pub fn div(&self, other: &CycloElement) -> Result<CycloElement, ExactNumError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `self^k` for k >= 0.
    pub fn pow(&self, mut k: u64) -> CycloElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}
impl Eq for CycloElement {}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "Cyclo(m={}; [{}])", self.order(), parts.join(", "))
    }
}

/// Arithmetic with an explicit order check, mirroring the element methods.
pub fn cyclo_arith(
    a: &CycloElement,
    b: &CycloElement,
    op: CycloOp,
) -> Result<CycloElement, ExactNumError> {
    if a.order() != b.order() {
        return Err(ExactNumError::OrderMismatch(a.order(), b.order()));
    }
    Ok(match op {
        CycloOp::Add => a.add(b),
        CycloOp::Sub => a.sub(b),
        CycloOp::Mul => a.mul(b),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Sub,
    Mul,
}

/// The residue class of `x^(e mod m)` in `Q(zeta_m)`, representing `rho^e`.
pub fn cyclo_root_power(m: u64, e: i64) -> Result<CycloElement, ExactNumError> {
    Ok(CycloField::new(m)?.root_power(e))
}

// ---------------------------------------------------------------------------
// Dense rational polynomials, only for the extended Euclid above.
// ---------------------------------------------------------------------------

fn rpoly_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn rpoly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    rpoly_trim(&mut rem);
    let mut den = den.to_vec();
    rpoly_trim(&mut den);
    assert!(!den.is_empty(), "polynomial division by zero");
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let lead = den[dd].clone();
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone() / lead.clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            let t = d * &c;
            rem[i + j] -= t;
        }
        quot[i] = c;
    }
    rpoly_trim(&mut rem);
    (quot, rem)
}

fn rpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    rpoly_trim(&mut out);
    out
}

/// Returns `(g, s, t)` with `g = s*a + t*b` and `g` the monicless gcd.
fn rpoly_xgcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    rpoly_trim(&mut r0);
    rpoly_trim(&mut r1);
    let mut s0 = vec![Rational::one()];
    let mut s1: Vec<Rational> = vec![];
    let mut t0: Vec<Rational> = vec![];
    let mut t1 = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, r) = rpoly_divrem(&r0, &r1);
        let ns = rpoly_sub(&s0, &rpoly_mul(&q, &s1));
        let nt = rpoly_sub(&t0, &rpoly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    (r0, s0, t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_poly(coeffs: &[i64]) -> Vec<Integer> {
        coeffs.iter().map(|&c| Integer::from(c)).collect()
    }

    #[test]
    fn cyclotomic_small_cases() {
        // Phi_1 = x - 1, Phi_4 = x^2 + 1 by definition/forced factorization.
        assert_eq!(cyclotomic_polynomial(1).unwrap(), int_poly(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4).unwrap(), int_poly(&[1, 0, 1]));
        // Phi_6 checked against independent long division of x^6 - 1 by
        // Phi_1 * Phi_2 * Phi_3 = x^4 + x^3 - x - 1.
        let prod = poly_div_exact_monic(&x_pow_minus_one(6), &int_poly(&[-1, -1, 0, 1, 1]));
        assert_eq!(prod, int_poly(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(6).unwrap(), prod);
    }

    #[test]
    fn cyclotomic_product_over_divisors_is_x_n_minus_one() {
        for n in 1..=60u64 {
            let mut prod = vec![Integer::one()];
            for d in divisors(n) {
                let phi = cyclotomic_polynomial(d).unwrap();
                let mut out = vec![Integer::zero(); prod.len() + phi.len() - 1];
                for (i, x) in prod.iter().enumerate() {
                    for (j, y) in phi.iter().enumerate() {
                        out[i + j] += x * y;
                    }
                }
                prod = out;
            }
            assert_eq!(prod, x_pow_minus_one(n), "divisor product failed at n={n}");
        }
    }

    #[test]
    fn cyclotomic_rejects_zero() {
        assert_eq!(cyclotomic_polynomial(0), Err(ExactNumError::ZeroOrder));
    }

    #[test]
    fn root_powers_match_known_values() {
        // m=2: rho = -1.
        let r = cyclo_root_power(2, 1).unwrap();
        assert_eq!(r.as_rational(), Some(Rational::from(Integer::from(-1))));
        // m=4: rho^2 = -1, rho itself is the class of x.
        let f4 = CycloField::new(4).unwrap();
        assert_eq!(f4.root_power(2).as_rational(), Some(Rational::from(Integer::from(-1))));
        let rho = f4.root_power(1);
        assert_eq!(rho.coeffs()[0], Rational::zero());
        assert_eq!(rho.coeffs()[1], Rational::one());
        assert!(rho.as_rational().is_none());
    }

    #[test]
    fn arithmetic_known_identities() {
        // (-1)*(-1) = 1 in Q(zeta_2).
        let f2 = CycloField::new(2).unwrap();
        let m1 = f2.root_power(1);
        assert_eq!(cyclo_arith(&m1, &m1, CycloOp::Mul).unwrap(), f2.one());

        // (1 - zeta_4)(1 + zeta_4) = 2.
        let f4 = CycloField::new(4).unwrap();
        let rho = f4.root_power(1);
        let a = f4.one().sub(&rho);
        let b = f4.one().add(&rho);
        assert_eq!(a.mul(&b).as_rational(), Some(Rational::from(Integer::from(2))));

        // 1 + zeta_3 + zeta_3^2 = 0.
        let f3 = CycloField::new(3).unwrap();
        let s = f3.one().add(&f3.root_power(1)).add(&f3.root_power(2));
        assert!(s.is_zero());
    }

    #[test]
    fn arith_rejects_mixed_orders() {
        let a = cyclo_root_power(2, 1).unwrap();
        let b = cyclo_root_power(4, 1).unwrap();
        assert_eq!(cyclo_arith(&a, &b, CycloOp::Add), Err(ExactNumError::OrderMismatch(2, 4)));
    }

    #[test]
    fn zero_test_detects_m_divides_kj() {
        // is_zero(1 - rho^(kj)) iff m | kj; the exact test the k_j* scan
        // depends on.
        for m in 1..=12u64 {
            let f = CycloField::new(m).unwrap();
            for j in 1..m {
                for k in 0..=(2 * m) {
                    let d = f.one().sub(&f.root_power((k * j) as i64));
                    assert_eq!(d.is_zero(), (k * j) % m == 0, "m={m} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn inverse_and_division() {
        let f5 = CycloField::new(5).unwrap();
        let a = f5.one().add(&f5.root_power(2)).sub(&f5.root_power(4).scale(&Rational::new(
            Integer::from(3),
            Integer::from(7),
        )));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), f5.one());
        assert_eq!(f5.zero().inverse(), Err(ExactNumError::DivisionByZero));

        // (1 + zeta_4)^-1 = (1 - zeta_4)/2.
        let f4 = CycloField::new(4).unwrap();
        let b = f4.one().add(&f4.root_power(1));
        let expect = f4.one().sub(&f4.root_power(1)).scale(&Rational::new(1.into(), 2.into()));
        assert_eq!(b.inverse().unwrap(), expect);
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn check<T: Send + Sync>() {}
        check::<Rational>();
        check::<CycloField>();
        check::<CycloElement>();
    }

    #[test]
    fn integer_engine_matches_rational_path() {
        let f = CycloField::new(12).unwrap();
        let a = f.root_power(5).add(&f.root_power(7)).add(&f.one());
        let b = f.root_power(11).sub(&f.root_power(2));
        let slow = a.mul(&b);
        let to_int = |e: &CycloElement| -> Vec<Integer> {
            e.coeffs().iter().map(|q| q.to_integer()).collect()
        };
        let fast = f.mul_int(&to_int(&a), &to_int(&b));
        let lifted: Vec<Rational> = fast.into_iter().map(Rational::from).collect();
        assert_eq!(slow.coeffs(), &lifted[..]);
    }

    #[test]
    fn rational_parsing_round_trip() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("-6/4").unwrap(), Rational::new((-3).into(), 2.into()));
        assert_eq!(format_rational(&parse_rational("-6/4").unwrap()), "-3/2");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = Rational> {
            (-1000i64..=1000, 1i64..=1000)
                .prop_map(|(p, q)| Rational::new(Integer::from(p), Integer::from(q)))
        }

        proptest! {
            /// (a + b) - b == a exactly; the reason floats are banned.
            #[test]
            fn add_sub_round_trips(a in arb_rational(), b in arb_rational()) {
                prop_assert_eq!(&(&a + &b) - &b, a);
            }

            /// Display/parse round trip through the canonical "p/q" form.
            #[test]
            fn string_form_round_trips(a in arb_rational()) {
                prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
            }
        }
    }
}
