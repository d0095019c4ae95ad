//! The value semigroup, strong-holomorphy decisions, and the empirical
//! Briançon–Skoda inclusion checks.
//!
//! The value semigroup `{ ord_0(h ∘ Π) : h in O_(C,0) }` is computed by a
//! linear-algebra closure: starting from the pullbacks of `z` and `w`,
//! products with the generators are echelon-reduced by leading order until
//! the order set carries a full window `[c, c + m - 1]`; from there on
//! every order is attained (add multiples of `m`), so `c` is the conductor
//! and the gap set is final. No closed-form semigroup formula is used
//! anywhere: conductor == Milnor number is a genuine cross-check.
//!
//! A meromorphic `psi = num/den` on the curve is classified as
//!
//! - `NotWeak` when the pullback quotient has a pole (psi unbounded),
//! - `WeakOnly` when the quotient is a power series whose greedy reduction
//!   against the stored order basis gets stuck below the conductor at a
//!   gap order (bounded, but not the restriction of an ambient function),
//! - `Strong` when the reduction drives the remainder to zero or to order
//!   `>= conductor`; sound and complete because every order `>= conductor`
//!   is realized by an element of the local ring.
//!
//! The decision by conductor and order basis replaces an analytic
//! d-bar-closedness criterion with exact, terminating arithmetic; the two
//! agree at the level of orders because the maximal pole a generating
//! residue form can have is exactly the Milnor number, which equals the
//! conductor here.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::branch::BranchParametrization;
use crate::exactnum::Rational;
use crate::expr::BivarPoly;
use crate::invariants::ord_pw_closed_form;
use crate::series::{Coeff as _, SeriesError, SeriesOrder, SparseSeries, Truncation};
use crate::weierstrass::{build_weierstrass, WeierstrassError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MembershipError {
    #[error("denominator vanishes identically on the curve")]
    DenominatorVanishesOnCurve,
    #[error("ideal generator vanishes identically on the curve")]
    GeneratorVanishesOnCurve,
    #[error("ideal generator is a unit (pullback order 0); a non-unit is required")]
    GeneratorIsUnit,
    #[error("the sharpness witness applies to singular branches only (m >= 2)")]
    RequiresSingularBranch,
    #[error("closure did not stabilize below the bound {bound} after {attempts} doublings")]
    BoundTooSmall { bound: u64, attempts: u32 },
    #[error("insufficient precision in supplied series data: {0}")]
    Precision(SeriesError),
    #[error("decision still indeterminate after raising truncation to {final_truncation}")]
    PrecisionExhausted { final_truncation: u64 },
    #[error("witness P'_w / z unexpectedly classified {got:?} (contradicts the sharpness law)")]
    WitnessUnexpectedlyStrong { got: Holomorphy },
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

/// A numerical semigroup given by minimal generators, conductor, and gaps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericalSemigroup {
    pub generators: Vec<u64>,
    pub conductor: u64,
    pub gaps: Vec<u64>,
}

impl NumericalSemigroup {
    pub fn contains(&self, n: u64) -> bool {
        n >= self.conductor || self.gaps.binary_search(&n).is_err()
    }

    /// Largest gap (Frobenius number), `None` for the full semigroup.
    pub fn frobenius(&self) -> Option<u64> {
        self.gaps.last().copied()
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>, conductor {}", gens.join(","), self.conductor)
    }
}

/// Classification of a meromorphic function on the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Holomorphy {
    /// Restriction of an ambient holomorphic function.
    Strong,
    /// Bounded on the curve but not a restriction.
    WeakOnly,
    /// Unbounded (the pullback quotient has a pole).
    NotWeak,
}

/// A function on the curve: either an ambient polynomial in `z, w` or a
/// directly given pullback series in `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum RingElementOnCurve {
    Polynomial(BivarPoly),
    Pullback(SparseSeries<Rational>),
}

impl RingElementOnCurve {
    pub fn parse(input: &str) -> Result<Self, crate::expr::ExprError> {
        BivarPoly::parse(input).map(RingElementOnCurve::Polynomial)
    }

    /// The pullback along the parametrization; exact for polynomials,
    /// as-given for pullback data.
    pub fn pullback(&self, branch: &BranchParametrization) -> SparseSeries<Rational> {
        match self {
            RingElementOnCurve::Polynomial(p) => p.pullback(branch),
            RingElementOnCurve::Pullback(s) => s.clone(),
        }
    }
}

/// The verdict together with the pullback order ledger.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemberVerdict {
    pub classification: Holomorphy,
    /// `None` when the numerator vanishes identically on the curve.
    pub ord_num: Option<u64>,
    pub ord_den: u64,
    /// `ord_num - ord_den` when both are finite.
    pub ord_quotient: Option<i64>,
}

/// Report for the sharpness witness `psi = P'_w / z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub ord_pw: u64,
    pub ord_witness: u64,
    pub classification: Holomorphy,
    pub witness_order_is_gap: bool,
}

/// One failed inclusion candidate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionFailure {
    pub candidate: String,
    pub ord: u64,
    pub classification: Holomorphy,
}

/// Outcome of an inclusion sweep at exponent `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionReport {
    pub k: u64,
    pub l: u64,
    pub ord_a: u64,
    pub threshold: u64,
    pub sample_bound: u64,
    pub seed: u64,
    pub tested: u64,
    pub passes: u64,
    pub failures: Vec<InclusionFailure>,
}

/// Options for `check_bs_inclusion`. `k` is the exponent under test
/// (normally `bs(C)`, or `bs(C) - 1` to exhibit the sharpness failure).
#[derive(Clone, Copy, Debug)]
pub struct InclusionOptions {
    pub k: u64,
    pub l: u64,
    pub sample_bound: Option<u64>,
    pub seed: u64,
}

/// The frozen decision context for one branch: semigroup plus one monic
/// reduction-basis element per attained order below the working bound.
#[derive(Clone, Debug)]
pub struct CurveMembership {
    branch: BranchParametrization,
    semigroup: NumericalSemigroup,
    basis: BTreeMap<u64, SparseSeries<Rational>>,
}

enum Decision {
    Done(Holomorphy),
    Indeterminate,
}

impl CurveMembership {
    /// Run the closure, doubling the bound on the (defensive) failure path.
    pub fn new(branch: &BranchParametrization) -> Result<Self, MembershipError> {
        let m = branch.multiplicity();
        let mu = ord_pw_closed_form(&branch.characteristic_sequence()) + 1 - m;
        let mut bound = 2 * mu + 2 * m;
        let attempts = 8;
        for _ in 0..attempts {
            if let Some((basis, conductor)) = closure_with_bound(branch, bound) {
                let semigroup = extract_semigroup(&basis, conductor, m);
                return Ok(CurveMembership { branch: branch.clone(), semigroup, basis });
            }
            bound *= 2;
        }
        Err(MembershipError::BoundTooSmall { bound, attempts })
    }

    pub fn semigroup(&self) -> &NumericalSemigroup {
        &self.semigroup
    }

    pub fn branch(&self) -> &BranchParametrization {
        &self.branch
    }

    /// Decide strong holomorphy of `num/den` on the curve.
    pub fn classify(
        &self,
        num: &RingElementOnCurve,
        den: &RingElementOnCurve,
    ) -> Result<MemberVerdict, MembershipError> {
        self.classify_with_truncation(num, den, None)
    }

    /// As `classify`, with an explicit starting truncation for the quotient
    /// (the default policy is `conductor + 1 + ord(num pullback)`).
    pub fn classify_with_truncation(
        &self,
        num: &RingElementOnCurve,
        den: &RingElementOnCurve,
        trunc_override: Option<u64>,
    ) -> Result<MemberVerdict, MembershipError> {
        let c = self.semigroup.conductor;
        let den_p = den.pullback(&self.branch);
        let den_ord = match den_p.order() {
            SeriesOrder::Order(v) => v,
            SeriesOrder::ZeroSeries => return Err(MembershipError::DenominatorVanishesOnCurve),
            SeriesOrder::Indeterminate => {
                return Err(MembershipError::Precision(SeriesError::InsufficientPrecision {
                    needed: den_p.truncation().known_to().unwrap_or(0) + 1,
                    known: den_p.truncation().known_to().unwrap_or(0),
                }))
            }
        };
        let num_p = num.pullback(&self.branch);
        let num_ord = match num_p.order() {
            SeriesOrder::Order(v) => v,
            SeriesOrder::ZeroSeries => {
                // psi = 0 on the curve.
                return Ok(MemberVerdict {
                    classification: Holomorphy::Strong,
                    ord_num: None,
                    ord_den: den_ord,
                    ord_quotient: None,
                });
            }
            SeriesOrder::Indeterminate => {
                let known = num_p.truncation().known_to().unwrap_or(0);
                if known >= c + den_ord {
                    // Quotient vanishes to order >= conductor: strong.
                    return Ok(MemberVerdict {
                        classification: Holomorphy::Strong,
                        ord_num: None,
                        ord_den: den_ord,
                        ord_quotient: None,
                    });
                }
                return Err(MembershipError::Precision(SeriesError::InsufficientPrecision {
                    needed: c + den_ord,
                    known,
                }));
            }
        };
        if num_ord < den_ord {
            return Ok(MemberVerdict {
                classification: Holomorphy::NotWeak,
                ord_num: Some(num_ord),
                ord_den: den_ord,
                ord_quotient: Some(num_ord as i64 - den_ord as i64),
            });
        }

        let mut n = trunc_override.unwrap_or(c + 1 + num_ord);
        for _ in 0..=6 {
            let h = match SparseSeries::divide(&num_p, &den_p, n) {
                Ok(h) => h,
                Err(e @ SeriesError::InsufficientPrecision { .. }) => {
                    // Fixed input data cannot be extended by retrying.
                    return Err(MembershipError::Precision(e));
                }
                Err(e) => unreachable!("pole and zero cases were handled: {e}"),
            };
            match self.reduce_decide(h) {
                Decision::Done(classification) => {
                    return Ok(MemberVerdict {
                        classification,
                        ord_num: Some(num_ord),
                        ord_den: den_ord,
                        ord_quotient: Some(num_ord as i64 - den_ord as i64),
                    })
                }
                // A too-small override (even 0) must still make progress.
                Decision::Indeterminate => n = (n * 2).max(c + 1),
            }
        }
        Err(MembershipError::PrecisionExhausted { final_truncation: n })
    }

    /// Greedy subalgebra reduction of a pullback quotient.
    fn reduce_decide(&self, mut h: SparseSeries<Rational>) -> Decision {
        let c = self.semigroup.conductor;
        loop {
            match h.order() {
                SeriesOrder::ZeroSeries => return Decision::Done(Holomorphy::Strong),
                SeriesOrder::Indeterminate => {
                    // Zero as far as we can see; enough iff that reaches c.
                    let known = h.truncation().known_to().unwrap_or(0);
                    if known >= c {
                        return Decision::Done(Holomorphy::Strong);
                    }
                    return Decision::Indeterminate;
                }
                SeriesOrder::Order(v) if v >= c => return Decision::Done(Holomorphy::Strong),
                SeriesOrder::Order(v) => match self.basis.get(&v) {
                    None => return Decision::Done(Holomorphy::WeakOnly),
                    Some(b) => {
                        let lead = h.stored(v).expect("order came from a stored term").clone();
                        h = h.sub(&b.scale(&lead));
                    }
                },
            }
        }
    }

    /// The witness `psi = P'_w / z`: weakly holomorphic of order
    /// `ord_pw - m`, never strongly holomorphic.
    pub fn sharpness_witness(&self) -> Result<WitnessReport, MembershipError> {
        let m = self.branch.multiplicity();
        if m < 2 {
            return Err(MembershipError::RequiresSingularBranch);
        }
        let p = build_weierstrass(&self.branch)?;
        let dw = RingElementOnCurve::Polynomial(p.derivative_w_poly());
        let z = RingElementOnCurve::Polynomial(BivarPoly::var_z());
        let verdict = self.classify(&dw, &z)?;
        let ord_pw = verdict.ord_num.expect("P'_w does not vanish on the curve");
        let ord_witness = ord_pw - m;
        if verdict.classification != Holomorphy::WeakOnly {
            return Err(MembershipError::WitnessUnexpectedlyStrong {
                got: verdict.classification,
            });
        }
        Ok(WitnessReport {
            ord_pw,
            ord_witness,
            classification: verdict.classification,
            witness_order_is_gap: !self.semigroup.contains(ord_witness),
        })
    }

    /// Sample functions `phi` with `ord(phi ∘ Π) >= (k + l - 1) ord(a ∘ Π)`
    /// and test `phi in (a^l)` by deciding `phi / a^l`. With `k = bs(C)`
    /// every candidate must pass; with `k = bs(C) - 1` the witness `P'_w`
    /// (included in the pool whenever it qualifies) must fail.
    pub fn check_bs_inclusion(
        &self,
        a: &RingElementOnCurve,
        opts: InclusionOptions,
    ) -> Result<InclusionReport, MembershipError> {
        let m = self.branch.multiplicity();
        let c = self.semigroup.conductor;
        let a_pull = a.pullback(&self.branch);
        let ord_a = match a_pull.order() {
            SeriesOrder::Order(0) => return Err(MembershipError::GeneratorIsUnit),
            SeriesOrder::Order(v) => v,
            SeriesOrder::ZeroSeries => return Err(MembershipError::GeneratorVanishesOnCurve),
            SeriesOrder::Indeterminate => {
                return Err(MembershipError::Precision(SeriesError::InsufficientPrecision {
                    needed: 1,
                    known: a_pull.truncation().known_to().unwrap_or(0),
                }))
            }
        };
        let threshold = (opts.k + opts.l - 1) * ord_a;
        let sample_bound = opts.sample_bound.unwrap_or(threshold + c + 2 * m);
        let den_ord = opts.l * ord_a;
        // Window deep enough to decide every candidate against a^l.
        let window = c + 1 + den_ord + m;
        let den_pull = series_pow(&a_pull, opts.l).truncate_to(window);

        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

        // Monomial candidates z^p w^q by exact pullback order p*m + q*ord(g).
        let g_ord = self.branch.ord_g();
        let mut monomials: Vec<(u64, u64, u64)> = Vec::new(); // (ord, p, q)
        let q_max = match g_ord {
            Some(og) => sample_bound / og,
            None => 0,
        };
        for q in 0..=q_max {
            let base = q * g_ord.unwrap_or(0);
            if base > sample_bound {
                break;
            }
            for p in 0.. {
                let ord = base + p * m;
                if ord > sample_bound {
                    break;
                }
                if ord >= threshold {
                    monomials.push((ord, p, q));
                }
            }
        }
        monomials.sort_unstable();
        if monomials.len() > 48 {
            let head: Vec<_> = monomials[..24].to_vec();
            let mut tail: Vec<_> = monomials[24..].to_vec();
            tail.shuffle(&mut rng);
            tail.truncate(24);
            tail.sort_unstable();
            monomials = head.into_iter().chain(tail).collect();
        }

        // Truncated powers of g, shared by all candidates.
        let g = self.branch.g_series().truncate_to(window);
        let q_cap = monomials.iter().map(|&(_, _, q)| q).max().unwrap_or(0);
        let mut g_pows: Vec<SparseSeries<Rational>> =
            vec![SparseSeries::monomial(0, rational_one()).truncate_to(window)];
        for _ in 0..q_cap {
            let next = g_pows.last().unwrap().mul(&g).truncate_to(window);
            g_pows.push(next);
        }
        let monomial_pull = |p: u64, q: u64| g_pows[q as usize].shift_up(p * m);

        struct Candidate {
            label: String,
            ord: u64,
            pull: SparseSeries<Rational>,
        }
        let mut candidates: Vec<Candidate> = monomials
            .iter()
            .map(|&(ord, p, q)| Candidate {
                label: monomial_label(p, q),
                ord,
                pull: monomial_pull(p, q),
            })
            .collect();

        // Small random combinations of the sampled monomials.
        if monomials.len() >= 2 {
            for _ in 0..8 {
                let picks = 2 + (rng.gen::<u64>() % 2) as usize;
                let mut pull = SparseSeries::zero(Truncation::TruncatedAt(window));
                let mut labels = Vec::new();
                for _ in 0..picks {
                    let &(_, p, q) = monomials.choose(&mut rng).unwrap();
                    let coeff = loop {
                        let c = rng.gen_range(-3i64..=3);
                        if c != 0 {
                            break Rational::from(num::BigInt::from(c));
                        }
                    };
                    pull = pull.add(&monomial_pull(p, q).scale(&coeff));
                    labels.push(format!("{}*{}", coeff, monomial_label(p, q)));
                }
                if let Some(ord) = pull.min_exponent() {
                    if ord >= threshold {
                        candidates.push(Candidate { label: labels.join(" + "), ord, pull });
                    }
                }
            }
        }

        // The canonical witness, whenever its order satisfies the premise.
        if m >= 2 {
            let p = build_weierstrass(&self.branch)?;
            let dw = p.derivative_w_poly();
            let pull = dw.pullback_truncated(&self.branch, window);
            if let Some(ord) = pull.min_exponent() {
                if ord >= threshold {
                    candidates.push(Candidate { label: "P'_w".to_string(), ord, pull });
                }
            }
        }

        let mut passes = 0u64;
        let mut failures = Vec::new();
        for cand in &candidates {
            let h = match SparseSeries::divide(&cand.pull, &den_pull, c + 1) {
                Ok(h) => h,
                Err(SeriesError::NotPowerSeries { .. }) => {
                    // Only possible when threshold < l*ord(a), i.e. k < 1:
                    // the quotient is unbounded, a genuine counterexample.
                    failures.push(InclusionFailure {
                        candidate: cand.label.clone(),
                        ord: cand.ord,
                        classification: Holomorphy::NotWeak,
                    });
                    continue;
                }
                Err(e) => return Err(MembershipError::Precision(e)),
            };
            let classification = match self.reduce_decide(h) {
                Decision::Done(v) => v,
                Decision::Indeterminate => {
                    return Err(MembershipError::PrecisionExhausted { final_truncation: c + 1 })
                }
            };
            if classification == Holomorphy::Strong {
                passes += 1;
            } else {
                failures.push(InclusionFailure {
                    candidate: cand.label.clone(),
                    ord: cand.ord,
                    classification,
                });
            }
        }

        Ok(InclusionReport {
            k: opts.k,
            l: opts.l,
            ord_a,
            threshold,
            sample_bound,
            seed: opts.seed,
            tested: candidates.len() as u64,
            passes,
            failures,
        })
    }
}

fn rational_one() -> Rational {
    Rational::from(num::BigInt::from(1))
}

fn series_pow(s: &SparseSeries<Rational>, k: u64) -> SparseSeries<Rational> {
    let mut acc = SparseSeries::monomial(0, rational_one());
    for _ in 0..k {
        acc = acc.mul(s);
    }
    acc
}

fn monomial_label(p: u64, q: u64) -> String {
    match (p, q) {
        (0, 0) => "1".to_string(),
        (p, 0) => format!("z^{p}"),
        (0, q) => format!("w^{q}"),
        (p, q) => format!("z^{p}*w^{q}"),
    }
}

/// One echelon pass of the closure at a fixed bound. Returns the basis and
/// the conductor, or `None` when the full window `[c, c + m - 1]` was not
/// certified below the bound.
fn closure_with_bound(
    branch: &BranchParametrization,
    bound: u64,
) -> Option<(BTreeMap<u64, SparseSeries<Rational>>, u64)> {
    let m = branch.multiplicity();
    let z_pull = SparseSeries::monomial(m, rational_one()).truncate_to(bound);
    let w_pull = branch.g_series().truncate_to(bound);
    let gens: Vec<(u64, SparseSeries<Rational>)> = if let Some(og) = branch.ord_g() {
        vec![(m, z_pull), (og, w_pull)]
    } else {
        vec![(m, z_pull)]
    };

    let mut basis: BTreeMap<u64, SparseSeries<Rational>> = BTreeMap::new();
    basis.insert(0, SparseSeries::monomial(0, rational_one()).truncate_to(bound));
    let mut member = vec![false; bound as usize + 1];
    member[0] = true;

    // Pending products (order, source key, generator index), popped in
    // ascending order so every order below the next pop is final.
    let mut heap: BinaryHeap<Reverse<(u64, u64, usize)>> = BinaryHeap::new();
    for (gi, (go, _)) in gens.iter().enumerate() {
        if *go <= bound {
            heap.push(Reverse((*go, 0, gi)));
        }
    }

    let stabilized = |member: &[bool], horizon: u64| -> Option<u64> {
        // Conductor candidate from the final region below `horizon`.
        let upto = horizon.min(bound + 1);
        let mut c_star = 0u64;
        for n in 0..upto {
            if !member[n as usize] {
                c_star = n + 1;
            }
        }
        (c_star + m <= horizon).then_some(c_star)
    };

    let mut conductor: Option<u64> = None;
    while let Some(Reverse((order, src, gi))) = heap.pop() {
        if let Some(c) = stabilized(&member, order) {
            conductor = Some(c);
            break;
        }
        if order > bound {
            continue;
        }
        let mut h = basis[&src].mul(&gens[gi].1).truncate_to(bound);
        // Echelon insert: cancel leading terms against existing pivots.
        while let Some(v) = h.min_exponent() {
            if v > bound {
                break;
            }
            match basis.get(&v) {
                Some(b) => {
                    let lead = h.stored(v).unwrap().clone();
                    h = h.sub(&b.scale(&lead));
                }
                None => {
                    let inv = h.stored(v).unwrap().invert().expect("nonzero lead");
                    basis.insert(v, h.scale(&inv));
                    member[v as usize] = true;
                    for (gi, (go, _)) in gens.iter().enumerate() {
                        if v + go <= bound {
                            heap.push(Reverse((v + go, v, gi)));
                        }
                    }
                    break;
                }
            }
        }
    }
    let conductor = conductor.or_else(|| stabilized(&member, bound + 1))?;
    Some((basis, conductor))
}

fn extract_semigroup(
    basis: &BTreeMap<u64, SparseSeries<Rational>>,
    conductor: u64,
    m: u64,
) -> NumericalSemigroup {
    let contains = |n: u64| -> bool { n >= conductor || basis.contains_key(&n) };
    let gaps: Vec<u64> = (0..conductor).filter(|&n| !contains(n)).collect();
    let top = (conductor + m).max(m + 1);
    let mut generators = Vec::new();
    for n in 1..top {
        if !contains(n) {
            continue;
        }
        let decomposable = (1..n).any(|s| contains(s) && contains(n - s));
        if !decomposable {
            generators.push(n);
        }
    }
    NumericalSemigroup { generators, conductor, gaps }
}

/// Compute the value semigroup of the branch.
pub fn value_semigroup(
    branch: &BranchParametrization,
) -> Result<NumericalSemigroup, MembershipError> {
    Ok(CurveMembership::new(branch)?.semigroup().clone())
}

/// One-shot strong-holomorphy decision. Building a `CurveMembership` and
/// reusing it is cheaper when deciding many functions on one curve.
pub fn strongly_holomorphic(
    num: &RingElementOnCurve,
    den: &RingElementOnCurve,
    branch: &BranchParametrization,
) -> Result<MemberVerdict, MembershipError> {
    CurveMembership::new(branch)?.classify(num, den)
}

/// One-shot sharpness witness check.
pub fn bs_sharpness_witness(
    branch: &BranchParametrization,
) -> Result<WitnessReport, MembershipError> {
    CurveMembership::new(branch)?.sharpness_witness()
}

/// One-shot inclusion sweep.
pub fn check_bs_inclusion(
    branch: &BranchParametrization,
    a: &RingElementOnCurve,
    opts: InclusionOptions,
) -> Result<InclusionReport, MembershipError> {
    CurveMembership::new(branch)?.check_bs_inclusion(a, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_rational;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn branch(m: u64, terms: &[(u64, &str)]) -> BranchParametrization {
        BranchParametrization::new(m, terms.iter().map(|&(e, c)| (e, q(c))).collect()).unwrap()
    }

    fn elem(s: &str) -> RingElementOnCurve {
        RingElementOnCurve::parse(s).unwrap()
    }

    #[test]
    fn semigroup_examples() {
        let s = value_semigroup(&branch(2, &[(3, "1")])).unwrap();
        assert_eq!(s.generators, vec![2, 3]);
        assert_eq!(s.conductor, 2);
        assert_eq!(s.gaps, vec![1]);

        let s = value_semigroup(&branch(2, &[(5, "1")])).unwrap();
        assert_eq!(s.generators, vec![2, 5]);
        assert_eq!(s.conductor, 4);
        assert_eq!(s.gaps, vec![1, 3]);

        let s = value_semigroup(&branch(4, &[(6, "1"), (7, "1")])).unwrap();
        assert_eq!(s.generators, vec![4, 6, 13]);
        assert_eq!(s.conductor, 16);
        assert_eq!(s.gaps, vec![1, 2, 3, 5, 7, 9, 11, 15]);

        let s = value_semigroup(&branch(6, &[(8, "1"), (9, "1")])).unwrap();
        assert_eq!(s.generators, vec![6, 8, 25]);
        assert_eq!(s.conductor, 36);

        let s = value_semigroup(&branch(1, &[(1, "1")])).unwrap();
        assert_eq!(s.generators, vec![1]);
        assert_eq!(s.conductor, 0);
        assert!(s.gaps.is_empty());

        // The smooth axis (t, 0).
        let s = value_semigroup(&branch(1, &[])).unwrap();
        assert_eq!(s.generators, vec![1]);
        assert_eq!(s.conductor, 0);
    }

    #[test]
    fn semigroup_structural_invariants() {
        use num::Integer as _;
        for b in [
            branch(2, &[(3, "1")]),
            branch(2, &[(5, "1")]),
            branch(4, &[(6, "1"), (7, "1")]),
            branch(6, &[(8, "1"), (9, "1")]),
            branch(8, &[(12, "1"), (18, "1"), (27, "1")]),
            branch(1, &[(1, "1")]),
        ] {
            let s = value_semigroup(&b).unwrap();
            // conductor = largest gap + 1 (0 when there are no gaps).
            assert_eq!(s.conductor, s.frobenius().map_or(0, |f| f + 1), "{b:?}");
            // The generators are coprime overall.
            let d = s.generators.iter().fold(0u64, |acc, g| acc.gcd(g));
            assert_eq!(d, 1, "{b:?}");
            // Gaps are exactly the non-members below the conductor.
            for n in 0..s.conductor {
                assert_eq!(s.contains(n), !s.gaps.contains(&n), "{b:?} at {n}");
            }
        }
    }

    #[test]
    fn classify_examples_on_the_cusp() {
        let ctx = CurveMembership::new(&branch(2, &[(3, "1")])).unwrap();

        // w/z pulls back to t, order 1 — a gap of <2,3>.
        let v = ctx.classify(&elem("w"), &elem("z")).unwrap();
        assert_eq!(v.classification, Holomorphy::WeakOnly);
        assert_eq!((v.ord_num, v.ord_den, v.ord_quotient), (Some(3), 2, Some(1)));

        // w^2/z pulls back to t^4 = pullback of z^2.
        let v = ctx.classify(&elem("w^2"), &elem("z")).unwrap();
        assert_eq!(v.classification, Holomorphy::Strong);
        assert_eq!(v.ord_quotient, Some(4));

        // z/w has a pole.
        let v = ctx.classify(&elem("z"), &elem("w")).unwrap();
        assert_eq!(v.classification, Holomorphy::NotWeak);
        assert_eq!(v.ord_quotient, Some(-1));

        // Something identically zero on the curve is trivially strong.
        let v = ctx.classify(&elem("w^2 - z^3"), &elem("z")).unwrap();
        assert_eq!(v.classification, Holomorphy::Strong);
        assert_eq!(v.ord_num, None);

        // Denominator vanishing on the curve is rejected.
        assert_eq!(
            ctx.classify(&elem("z"), &elem("w^2 - z^3")),
            Err(MembershipError::DenominatorVanishesOnCurve)
        );
    }

    #[test]
    fn classify_direct_pullback_data() {
        let ctx = CurveMembership::new(&branch(2, &[(3, "1")])).unwrap();
        let one = RingElementOnCurve::Polynomial(BivarPoly::constant(q("1")));

        // t^1 given directly: gap order, hence weak only.
        let t1 = RingElementOnCurve::Pullback(SparseSeries::monomial(1, q("1")));
        assert_eq!(ctx.classify(&t1, &one).unwrap().classification, Holomorphy::WeakOnly);

        // t^2 = pullback of z.
        let t2 = RingElementOnCurve::Pullback(SparseSeries::monomial(2, q("1")));
        assert_eq!(ctx.classify(&t2, &one).unwrap().classification, Holomorphy::Strong);

        // Truncated-empty data that is known deep enough counts as zero.
        let deep = RingElementOnCurve::Pullback(SparseSeries::zero(Truncation::TruncatedAt(50)));
        assert_eq!(ctx.classify(&deep, &one).unwrap().classification, Holomorphy::Strong);

        // Truncated-empty data that is too shallow is refused.
        let shallow = RingElementOnCurve::Pullback(SparseSeries::zero(Truncation::TruncatedAt(1)));
        assert!(matches!(
            ctx.classify(&shallow, &one),
            Err(MembershipError::Precision(_))
        ));
    }

    #[test]
    fn witness_examples() {
        // cusp: psi = P'_w/z = 2t, order 1, weak only.
        let w = bs_sharpness_witness(&branch(2, &[(3, "1")])).unwrap();
        assert_eq!((w.ord_pw, w.ord_witness), (3, 1));
        assert_eq!(w.classification, Holomorphy::WeakOnly);
        assert!(w.witness_order_is_gap);

        // (2; 5): witness order 3, a gap of <2,5>.
        let w = bs_sharpness_witness(&branch(2, &[(5, "1")])).unwrap();
        assert_eq!((w.ord_pw, w.ord_witness), (5, 3));
        assert_eq!(w.classification, Holomorphy::WeakOnly);
        assert!(w.witness_order_is_gap);

        // (4; 6,7): witness order 15, a gap of <4,6,13>.
        let w = bs_sharpness_witness(&branch(4, &[(6, "1"), (7, "1")])).unwrap();
        assert_eq!((w.ord_pw, w.ord_witness), (19, 15));
        assert!(w.witness_order_is_gap);

        assert_eq!(
            bs_sharpness_witness(&branch(1, &[(1, "1")])),
            Err(MembershipError::RequiresSingularBranch)
        );
    }

    #[test]
    fn inclusion_passes_at_bs_and_fails_below() {
        let b = branch(2, &[(3, "1")]);
        let ctx = CurveMembership::new(&b).unwrap();
        let z = elem("z");

        // k = bs = 2: every candidate passes.
        let r = ctx
            .check_bs_inclusion(&z, InclusionOptions { k: 2, l: 1, sample_bound: None, seed: 7 })
            .unwrap();
        assert!(r.tested > 0);
        assert!(r.failures.is_empty(), "unexpected failures: {:?}", r.failures);

        // k = bs - 1 = 1: the witness P'_w qualifies (ord 3 >= 1*2) and fails.
        let r = ctx
            .check_bs_inclusion(&z, InclusionOptions { k: 1, l: 1, sample_bound: None, seed: 7 })
            .unwrap();
        assert!(!r.failures.is_empty());
        assert!(r.failures.iter().any(|f| f.candidate == "P'_w"));

        // l = 2 and l = 3 at k = bs also pass.
        for l in [2, 3] {
            let r = ctx
                .check_bs_inclusion(&z, InclusionOptions { k: 2, l, sample_bound: None, seed: 7 })
                .unwrap();
            assert!(r.failures.is_empty());
        }

        // A unit generator is rejected.
        assert_eq!(
            ctx.check_bs_inclusion(
                &elem("1"),
                InclusionOptions { k: 2, l: 1, sample_bound: None, seed: 7 }
            ),
            Err(MembershipError::GeneratorIsUnit)
        );

        // k = 0 weakens the premise below l*ord(a): candidates with poles
        // are genuine counterexamples, reported rather than panicking.
        let r = ctx
            .check_bs_inclusion(&z, InclusionOptions { k: 0, l: 1, sample_bound: None, seed: 7 })
            .unwrap();
        assert!(r.failures.iter().any(|f| f.classification == Holomorphy::NotWeak));
    }

    #[test]
    fn tiny_truncation_override_still_decides() {
        let ctx = CurveMembership::new(&branch(2, &[(3, "1")])).unwrap();
        // Polynomial inputs are exact, so escalation from an absurdly small
        // override must converge to the same verdicts.
        for (num, den, expect) in [
            ("w", "z", Holomorphy::WeakOnly),
            ("w^2", "z", Holomorphy::Strong),
            ("w^2 - z^3", "z", Holomorphy::Strong),
        ] {
            let v = ctx
                .classify_with_truncation(&elem(num), &elem(den), Some(0))
                .unwrap();
            assert_eq!(v.classification, expect, "{num}/{den}");
        }
    }

    #[test]
    fn gap_orders_classify_weak_only() {
        for b in [branch(2, &[(3, "1")]), branch(2, &[(5, "1")]), branch(4, &[(6, "1"), (7, "1")])]
        {
            let ctx = CurveMembership::new(&b).unwrap();
            let one = RingElementOnCurve::Polynomial(BivarPoly::constant(q("1")));
            for &gap in &ctx.semigroup().gaps {
                let cand = RingElementOnCurve::Pullback(SparseSeries::monomial(gap, q("1")));
                assert_eq!(
                    ctx.classify(&cand, &one).unwrap().classification,
                    Holomorphy::WeakOnly,
                    "gap {gap} of {b:?}"
                );
            }
        }
    }

    #[test]
    fn closure_bound_failure_path() {
        // A bound far below the conductor cannot certify a window.
        let b = branch(4, &[(6, "1"), (7, "1")]);
        assert!(closure_with_bound(&b, 6).is_none());
        // The real conductor is 16; a bound of 16 + 4 - 1 = 19 is still too
        // small to certify [16, 19], while 2*mu + 2*m = 40 works.
        assert!(closure_with_bound(&b, 40).is_some());
    }

    /// Test-only oracle: the semigroup generators from the classical
    /// recursion over the characteristic sequence,
    /// `v_0 = m`, `v_1 = beta_1`,
    /// `v_(q+1) = (e_(q-1)/e_q) v_q + beta_(q+1) - beta_q`.
    /// Completely independent of the echelon closure.
    fn recursion_generators(b: &BranchParametrization) -> Vec<u64> {
        let cs = b.characteristic_sequence();
        let (beta, e) = (cs.beta(), cs.e());
        let mut v = vec![b.multiplicity()];
        if !beta.is_empty() {
            v.push(beta[0]);
            for q in 1..beta.len() {
                let next = (e[q - 1] / e[q]) * v[q] + beta[q] - beta[q - 1];
                v.push(next);
            }
        }
        v
    }

    fn generated_membership(gens: &[u64], bound: u64) -> Vec<bool> {
        let mut mem = vec![false; bound as usize + 1];
        mem[0] = true;
        for &g in gens {
            for i in g..=bound {
                if mem[(i - g) as usize] {
                    mem[i as usize] = true;
                }
            }
        }
        mem
    }

    fn assert_matches_recursion(b: &BranchParametrization) {
        let s = value_semigroup(b).unwrap();
        let gens = recursion_generators(b);
        let bound = s.conductor + b.multiplicity() + 1;
        let mem = generated_membership(&gens, bound);
        for n in 0..=bound {
            assert_eq!(
                s.contains(n),
                mem[n as usize],
                "membership of {n} differs (closure vs recursion <{gens:?}>) on {b:?}"
            );
        }
        let frobenius = (0..=bound).filter(|&n| !mem[n as usize]).max();
        assert_eq!(s.conductor, frobenius.map_or(0, |f| f + 1), "{b:?}");
    }

    #[test]
    fn semigroup_matches_characteristic_recursion() {
        for b in [
            branch(2, &[(3, "1")]),
            branch(2, &[(5, "1")]),
            branch(4, &[(6, "1"), (7, "1")]),
            branch(6, &[(8, "1"), (9, "1")]),
            branch(8, &[(12, "1"), (18, "-2"), (27, "1/3")]),
            // ord(g) below the first characteristic exponent.
            branch(4, &[(8, "1"), (10, "1"), (13, "2")]),
            branch(1, &[(1, "1")]),
        ] {
            assert_matches_recursion(&b);
        }
    }

    prop_compose! {
        fn arb_branch()(m in 1u64..=8, raw in proptest::collection::btree_map(1u64..=40, (-5i64..=5).prop_filter("nonzero", |c| *c != 0), 0..5)) -> Option<BranchParametrization> {
            let terms: Vec<(u64, Rational)> =
                raw.into_iter().map(|(e, c)| (e + m - 1, Rational::from(num::BigInt::from(c)))).collect();
            BranchParametrization::new(m, terms).ok()
        }
    }

    prop_compose! {
        fn arb_poly()(raw in proptest::collection::btree_map((0u64..4, 0u64..3), -4i64..=4, 1..4)) -> BivarPoly {
            let mut p = BivarPoly::zero();
            for ((ze, we), c) in raw {
                p.add_term(ze, we, Rational::from(num::BigInt::from(c)));
            }
            p
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// f*g / g is always strongly holomorphic (membership of a product
        /// with its own denominator).
        #[test]
        fn product_with_denominator_is_strong(f in arb_poly(), g in arb_poly()) {
            let b = branch(4, &[(6, "1"), (7, "1")]);
            let ctx = CurveMembership::new(&b).unwrap();
            prop_assume!(!g.pullback(&b).is_empty());
            let num = RingElementOnCurve::Polynomial(f.mul(&g));
            let den = RingElementOnCurve::Polynomial(g);
            let v = ctx.classify(&num, &den).unwrap();
            prop_assert_eq!(v.classification, Holomorphy::Strong);
        }

        /// The closure agrees with the classical recursion on random
        /// branches.
        #[test]
        fn closure_matches_recursion_on_random_branches(b in arb_branch()) {
            prop_assume!(b.is_some());
            assert_matches_recursion(&b.unwrap());
        }
    }
}
