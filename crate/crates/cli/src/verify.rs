//! The `verify` subcommand: run every cross-check law on one curve or on
//! the whole built-in corpus, print one line per check, and fail with the
//! first broken law.

use serde_json::json;

use puiseux_core::branch::{BranchParametrization, CurveSpec};
use puiseux_core::corpus;
use puiseux_core::expr::BivarPoly;
use puiseux_core::invariants::{count_kstar_histogram, full_report};
use puiseux_core::membership::{
    CurveMembership, Holomorphy, InclusionOptions, RingElementOnCurve,
};
use puiseux_core::weierstrass::build_weierstrass;

use crate::CliError;

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name, pass, detail: detail.into() }
    }
}

pub fn cmd_verify(
    curve: Option<&str>,
    corpus_flag: bool,
    json: bool,
    seed: u64,
) -> Result<(), CliError> {
    let targets: Vec<(String, CurveSpec, BranchParametrization)> = match (curve, corpus_flag) {
        (Some(_), true) => {
            return Err(CliError::Input("pass a curve file or --corpus, not both".into()))
        }
        (None, false) => {
            return Err(CliError::Input("pass a curve file or --corpus".into()))
        }
        (Some(path), false) => {
            let (spec, branch) = crate::read_curve(path)?;
            vec![(spec.display_name(), spec, branch)]
        }
        (None, true) => corpus::load()
            .into_iter()
            .map(|spec| {
                let branch = spec.to_branch().expect("corpus curves validate");
                (spec.display_name(), spec, branch)
            })
            .collect(),
    };

    let mut curves_json = Vec::new();
    let mut first_failure: Option<(String, &'static str)> = None;
    let mut total_checks = 0usize;

    for (name, spec, branch) in &targets {
        let checks = verify_curve(spec, branch, seed);
        total_checks += checks.len();
        for c in &checks {
            if !json {
                println!(
                    "[{name}] {} {} — {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if !c.pass && first_failure.is_none() {
                first_failure = Some((name.clone(), c.name));
            }
        }
        curves_json.push(json!({
            "name": name,
            "checks": checks
                .iter()
                .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
                .collect::<Vec<_>>(),
        }));
    }

    if json {
        crate::print_json(&json!({
            "all_passed": first_failure.is_none(),
            "checks_run": total_checks,
            "curves": curves_json,
            "seed": seed,
        }));
    } else {
        match &first_failure {
            None => println!(
                "verify: {} curve(s), {} checks, all passed (seed {})",
                targets.len(),
                total_checks,
                seed
            ),
            Some((curve, law)) => {
                println!("verify: FAILED — first failing law: {law} on {curve}")
            }
        }
    }
    match first_failure {
        None => Ok(()),
        Some((curve, law)) => Err(CliError::Math(format!("{law} failed on {curve}"))),
    }
}

fn verify_curve(spec: &CurveSpec, branch: &BranchParametrization, seed: u64) -> Vec<Check> {
    let m = branch.multiplicity();
    let mut checks = Vec::new();

    // Law 1: the four order oracles agree.
    let report = match full_report(branch) {
        Ok(r) => {
            checks.push(Check::new(
                "oracle agreement",
                true,
                format!("ord_pw = {} from {:?}", r.ord_pw, r.oracle_values),
            ));
            r
        }
        Err(e) => {
            checks.push(Check::new("oracle agreement", false, e.to_string()));
            return checks;
        }
    };

    // Law 2: frozen expected values, when the fixture carries them.
    if let Some(expect) = &spec.expect {
        let mut bad: Vec<String> = Vec::new();
        let mut check_eq = |label: &str, want: Option<u64>, got: u64| {
            if let Some(w) = want {
                if w != got {
                    bad.push(format!("{label}: expected {w}, computed {got}"));
                }
            }
        };
        check_eq("ord_pw", expect.ord_pw, report.ord_pw);
        check_eq("mu", expect.mu, report.mu);
        check_eq("bs", expect.bs, report.bs);
        if let Some(beta) = &expect.beta {
            let got = branch.characteristic_sequence().beta().to_vec();
            if beta != &got {
                bad.push(format!("beta: expected {beta:?}, computed {got:?}"));
            }
        }
        checks.push(match bad.is_empty() {
            true => Check::new("expected values", true, "fixture matches computation"),
            false => Check::new("expected values", false, bad.join("; ")),
        });
    }

    // Law 3: k* histogram counts equal the e-differences.
    if m >= 2 {
        checks.push(match count_kstar_histogram(branch) {
            Ok(h) => Check::new("histogram identity", true, format!("{h:?}")),
            Err(e) => Check::new("histogram identity", false, e.to_string()),
        });
    }

    // Law 4 needs the semigroup; everything after shares the context.
    let ctx = match CurveMembership::new(branch) {
        Ok(ctx) => ctx,
        Err(e) => {
            checks.push(Check::new("conductor == mu", false, e.to_string()));
            return checks;
        }
    };
    let sg = ctx.semigroup();
    checks.push(Check::new(
        "conductor == mu",
        sg.conductor == report.mu,
        format!("conductor = {}, mu = {}", sg.conductor, report.mu),
    ));
    if let Some(expect) = &spec.expect {
        let mut bad: Vec<String> = Vec::new();
        if let Some(c) = expect.conductor {
            if c != sg.conductor {
                bad.push(format!("conductor: expected {c}, computed {}", sg.conductor));
            }
        }
        if let Some(g) = &expect.generators {
            if g != &sg.generators {
                bad.push(format!("generators: expected {g:?}, computed {:?}", sg.generators));
            }
        }
        checks.push(match bad.is_empty() {
            true => Check::new("expected semigroup", true, format!("{sg}")),
            false => Check::new("expected semigroup", false, bad.join("; ")),
        });
    }

    // Law 5: the reconstructed P vanishes on the curve.
    checks.push(match build_weierstrass(branch) {
        Ok(p) => {
            let residue = p.eval_at_parametrization(branch);
            Check::new(
                "weierstrass identity",
                residue.is_empty(),
                format!("P(t^m, g(t)) == 0 for P = {p}"),
            )
        }
        Err(e) => Check::new("weierstrass identity", false, e.to_string()),
    });

    // Laws 6-8 concern the singular case only.
    if m >= 2 {
        checks.push(match ctx.sharpness_witness() {
            Ok(w) => {
                let ord_ok = w.ord_witness == report.ord_pw - m;
                let pass = w.classification == Holomorphy::WeakOnly
                    && ord_ok
                    && w.witness_order_is_gap;
                Check::new(
                    "sharpness witness",
                    pass,
                    format!(
                        "P'_w/z: ord {} (= ord_pw - m: {}), {:?}, gap: {}",
                        w.ord_witness, ord_ok, w.classification, w.witness_order_is_gap
                    ),
                )
            }
            Err(e) => Check::new("sharpness witness", false, e.to_string()),
        });
    }

    let z = RingElementOnCurve::Polynomial(BivarPoly::var_z());
    let mut inclusion_ok = true;
    let mut inclusion_detail = Vec::new();
    for l in [1, 2, 3] {
        let opts = InclusionOptions { k: report.bs, l, sample_bound: None, seed };
        match ctx.check_bs_inclusion(&z, opts) {
            Ok(r) if r.failures.is_empty() => {
                inclusion_detail.push(format!("l={l}: {}/{} pass", r.passes, r.tested));
            }
            Ok(r) => {
                inclusion_ok = false;
                inclusion_detail.push(format!(
                    "l={l}: {} failure(s), first: {} (ord {})",
                    r.failures.len(),
                    r.failures[0].candidate,
                    r.failures[0].ord
                ));
            }
            Err(e) => {
                inclusion_ok = false;
                inclusion_detail.push(format!("l={l}: {e}"));
            }
        }
    }
    checks.push(Check::new("inclusion at bs", inclusion_ok, inclusion_detail.join("; ")));

    if m >= 2 {
        let opts = InclusionOptions { k: report.bs - 1, l: 1, sample_bound: None, seed };
        checks.push(match ctx.check_bs_inclusion(&z, opts) {
            Ok(r) if !r.failures.is_empty() => Check::new(
                "inclusion fails below bs",
                true,
                format!("{} failure(s) at k = bs - 1, witness included", r.failures.len()),
            ),
            Ok(_) => Check::new(
                "inclusion fails below bs",
                false,
                "no failure found at k = bs - 1, contradicting sharpness",
            ),
            Err(e) => Check::new("inclusion fails below bs", false, e.to_string()),
        });
    }

    checks
}
