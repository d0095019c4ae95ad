//! Acceptance suite: one test per criterion, each printing a pass line
//! with the checked values (visible with `--nocapture`). Every assertion
//! is exact equality; the only tolerances anywhere are the wall-clock
//! budgets, which are asserted too.
//!
//!     cargo test -p puiseux-core --test acceptance -- --nocapture

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use puiseux_core::branch::BranchParametrization;
use puiseux_core::corpus;
use puiseux_core::exactnum::{parse_rational, Rational};
use puiseux_core::expr::BivarPoly;
use puiseux_core::invariants::{
    count_kstar_histogram, full_report, kstar_vector, ord_pw_closed_form,
};
use puiseux_core::membership::{
    CurveMembership, Holomorphy, InclusionOptions, RingElementOnCurve,
};
use puiseux_core::sampling::{random_branch, BranchDistribution};
use puiseux_core::weierstrass::build_weierstrass;

fn branch(m: u64, terms: &[(u64, &str)]) -> BranchParametrization {
    BranchParametrization::new(
        m,
        terms.iter().map(|&(e, c)| (e, parse_rational(c).unwrap())).collect(),
    )
    .unwrap()
}

fn rational(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

#[test]
fn criterion_1_cusp_invariants() {
    let start = Instant::now();
    let b = branch(2, &[(3, "1")]);
    let r = full_report(&b).unwrap();
    assert_eq!(r.ord_pw, 3);
    assert_eq!(r.mu, 2);
    assert_eq!(r.q, rational("2"));
    assert_eq!(r.kappa, rational("3/2"));
    assert_eq!(r.bs, 2);
    assert!(r.agreement);
    assert_eq!(r.oracle_values.len(), 4);
    assert!(r.oracle_values.values().all(|&v| v == 3));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 0.1, "cusp took {elapsed:?}, budget 0.1 s");
    println!(
        "[criterion 1] PASS — cusp: ord=3, mu=2, Q=2, kappa=3/2, bs=2, 4 oracles agree, {elapsed:?}"
    );
}

#[test]
fn criterion_2_m2_t5_invariants_and_semigroup() {
    let b = branch(2, &[(5, "1")]);
    let r = full_report(&b).unwrap();
    assert_eq!(r.ord_pw, 5);
    assert_eq!(r.mu, 4);
    assert_eq!(r.bs, 3);
    assert_eq!(r.kappa, rational("5/2"));
    let ctx = CurveMembership::new(&b).unwrap();
    assert_eq!(ctx.semigroup().generators, vec![2, 5]);
    assert_eq!(ctx.semigroup().conductor, 4);
    println!("[criterion 2] PASS — (2;5): ord=5, mu=4, bs=3, kappa=5/2, semigroup <2,5> conductor 4");
}

#[test]
#[allow(clippy::identity_op)] // the literal e-difference sum is the point
fn criterion_3_m4_t6_t7_full_profile() {
    let b = branch(4, &[(6, "1"), (7, "1")]);
    let cs = b.characteristic_sequence();
    assert_eq!(cs.beta(), &[6, 7]);
    assert_eq!(cs.e(), &[4, 2, 1]);
    assert_eq!(ord_pw_closed_form(&cs), (4 - 2) * 6 + (2 - 1) * 7);
    let r = full_report(&b).unwrap();
    assert_eq!(r.ord_pw, 19);
    assert_eq!(r.mu, 16);
    assert_eq!(r.bs, 5);
    assert_eq!(r.kappa, rational("19/4"));
    assert_eq!(kstar_vector(&b).unwrap(), vec![6, 7, 6]);
    let ctx = CurveMembership::new(&b).unwrap();
    assert_eq!(ctx.semigroup().generators, vec![4, 6, 13]);
    assert_eq!(ctx.semigroup().conductor, 16);
    println!(
        "[criterion 3] PASS — (4;6,7): beta=(6,7), e=(4,2,1), ord=19, mu=16, bs=5, kappa=19/4, \
         semigroup <4,6,13> conductor 16, k*=(6,7,6)"
    );
}

#[test]
fn criterion_4_m6_t8_t9_order_and_histogram() {
    let b = branch(6, &[(8, "1"), (9, "1")]);
    let r = full_report(&b).unwrap();
    assert_eq!(r.ord_pw, 41);
    assert_eq!(r.mu, 36);
    assert_eq!(r.bs, 7);
    let hist = count_kstar_histogram(&b).unwrap();
    assert_eq!(hist, BTreeMap::from([(8, 4), (9, 1)]));
    // The histogram counts are exactly the e-differences.
    let cs = b.characteristic_sequence();
    let e = cs.e();
    assert_eq!(e, &[6, 2, 1]);
    assert_eq!(hist[&8], e[0] - e[1]);
    assert_eq!(hist[&9], e[1] - e[2]);
    println!("[criterion 4] PASS — (6;8,9): ord=41, mu=36, bs=7, histogram {{8:4, 9:1}} == e-differences");
}

#[test]
fn criterion_5_smooth_branch() {
    let b = branch(1, &[(1, "1")]);
    let r = full_report(&b).unwrap();
    assert_eq!(r.bs, 1);
    assert_eq!(r.ord_pw, 0);
    assert_eq!(r.mu, 0);
    // bs = 1 exactly for smooth branches: every singular corpus curve has
    // bs >= 2.
    for spec in corpus::load() {
        let b = spec.to_branch().unwrap();
        let r = full_report(&b).unwrap();
        assert_eq!(r.bs == 1, b.multiplicity() == 1, "{}", spec.display_name());
    }
    println!("[criterion 5] PASS — smooth branch: bs=1, ord=0, mu=0; bs=1 iff m=1 across the corpus");
}

#[test]
fn criterion_6_property_suite_200_random_branches() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97);
    let dist = BranchDistribution::default(); // m <= 8, <= 6 terms, exponents <= 60
    let cases = 200;
    for i in 0..cases {
        let b = random_branch(&mut rng, &dist);
        let m = b.multiplicity();
        let r = full_report(&b).unwrap_or_else(|e| panic!("case {i}: {e} on {b:?}"));
        assert!(r.agreement, "case {i}: oracle disagreement on {b:?}");
        assert_eq!(r.oracle_values.len(), 4);
        // Ceiling identities.
        assert_eq!(r.bs, (r.ord_pw + m) / m, "case {i}");
        assert_eq!(r.bs, 1 + r.mu.div_ceil(m), "case {i}");
        // Conductor == Milnor number.
        let ctx = CurveMembership::new(&b).unwrap_or_else(|e| panic!("case {i}: {e}"));
        assert_eq!(ctx.semigroup().conductor, r.mu, "case {i}: conductor != mu on {b:?}");
        if m >= 2 {
            // k_j* symmetry.
            let ks = kstar_vector(&b).unwrap();
            for j in 1..m {
                assert_eq!(ks[(j - 1) as usize], ks[(m - j - 1) as usize], "case {i}, j={j}");
            }
            // Histogram identity (checked against e-differences inside).
            let hist = count_kstar_histogram(&b).unwrap_or_else(|e| panic!("case {i}: {e}"));
            assert_eq!(hist.values().sum::<u64>(), m - 1, "case {i}");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "property suite took {elapsed:?}, budget 60 s");
    println!(
        "[criterion 6] PASS — {cases} seeded random branches: 4-oracle agreement, bs ceilings, \
         conductor == mu, k* symmetry, histogram identity; {elapsed:?}"
    );
}

#[test]
fn criterion_7_sharpness_and_inclusion_over_corpus() {
    let start = Instant::now();
    let seed = 0x5eed;
    let mut singular = 0;
    for spec in corpus::load() {
        let b = spec.to_branch().unwrap();
        let m = b.multiplicity();
        if m < 2 {
            continue;
        }
        singular += 1;
        let name = spec.display_name();
        let r = full_report(&b).unwrap();
        let ctx = CurveMembership::new(&b).unwrap();

        // Witness: P'_w / z is weakly but not strongly holomorphic, with
        // pullback order ord_pw - m = m*(kappa - 1).
        let w = ctx.sharpness_witness().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(w.classification, Holomorphy::WeakOnly, "{name}");
        assert_eq!(w.ord_witness, r.ord_pw - m, "{name}");
        assert!(w.witness_order_is_gap, "{name}");
        let m_rat = Rational::new(m.into(), 1.into());
        let one = Rational::new(1.into(), 1.into());
        assert_eq!(
            Rational::new(w.ord_witness.into(), 1.into()),
            m_rat * (r.kappa.clone() - one),
            "{name}: witness order != m*(kappa - 1)"
        );

        // Inclusion law: no failures at k = bs for l in {1,2,3} ...
        let z = RingElementOnCurve::Polynomial(BivarPoly::var_z());
        for l in [1, 2, 3] {
            let rep = ctx
                .check_bs_inclusion(&z, InclusionOptions { k: r.bs, l, sample_bound: None, seed })
                .unwrap_or_else(|e| panic!("{name} l={l}: {e}"));
            assert!(rep.tested > 0, "{name} l={l}");
            assert!(
                rep.failures.is_empty(),
                "{name} l={l}: inclusion failed at bs: {:?}",
                rep.failures
            );
        }
        // ... and at least one failure at k = bs - 1.
        let rep = ctx
            .check_bs_inclusion(
                &z,
                InclusionOptions { k: r.bs - 1, l: 1, sample_bound: None, seed },
            )
            .unwrap();
        assert!(!rep.failures.is_empty(), "{name}: no failure found below bs");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "sharpness suite took {elapsed:?}, budget 120 s");
    println!(
        "[criterion 7] PASS — {singular} singular corpus branches: witness WeakOnly at ord-m, \
         inclusion clean at bs (l=1,2,3), >=1 failure at bs-1; {elapsed:?}"
    );
}

#[test]
fn criterion_8_weierstrass_reconstruction() {
    for spec in corpus::load() {
        let b = spec.to_branch().unwrap();
        let p = build_weierstrass(&b).unwrap();
        let residue = p.eval_at_parametrization(&b);
        assert!(
            residue.is_empty(),
            "{}: P(t^m, g(t)) != 0: {residue:?}",
            spec.display_name()
        );
    }
    let cusp = build_weierstrass(&branch(2, &[(3, "1")])).unwrap();
    assert_eq!(cusp.to_string(), "w^2 - z^3");
    println!(
        "[criterion 8] PASS — P(t^m, g(t)) == 0 on all 25 corpus branches; cusp prints verbatim \
         as w^2 - z^3"
    );
}
