//! Command-line front end for plane-curve germ invariants.
//!
//! Exit codes are a stable scripting contract:
//!   0  success
//!   2  input, parse, or validation error
//!   3  mathematical cross-check failure (oracle disagreement, conductor
//!      vs Milnor mismatch, witness misclassification, inclusion failure,
//!      or a tampered fixture)

mod verify;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use puiseux_core::branch::{BranchParametrization, CurveSpec};
use puiseux_core::invariants::{report_with_oracles, Oracle};
use puiseux_core::membership::{CurveMembership, MembershipError, RingElementOnCurve};
use puiseux_core::weierstrass::build_weierstrass;

#[derive(Parser)]
#[command(
    name = "puiseux",
    version,
    about = "Exact singularity invariants of irreducible plane-curve germs",
    after_help = "Curve files are JSON: {\"m\": 2, \"g\": [[3, \"1\"]], \"name\": \"cusp\"} with \
                  coefficients as exact rationals \"p/q\". Pass `-` to read from stdin.\n\
                  Ring elements are polynomials in z and w, e.g. \"w^2 - z^3\" or \"z*w + 3/2*z^2\"."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Characteristic sequence and the cross-checked invariant report
    Invariants {
        /// Curve file path, or `-` for stdin
        curve: String,
        /// Emit canonical JSON instead of text
        #[arg(long)]
        json: bool,
        /// Which order oracles to run (all by default, with agreement check)
        #[arg(long, value_enum, default_value_t = OracleArg::All)]
        oracles: OracleArg,
    },
    /// Value semigroup of the branch: generators, gaps, conductor
    Semigroup {
        curve: String,
        /// Emit canonical JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Decide whether num/den is strongly holomorphic on the curve
    Member {
        curve: String,
        /// Numerator, a polynomial in z and w
        num: String,
        /// Denominator, a polynomial in z and w
        den: String,
        /// Emit canonical JSON instead of text
        #[arg(long)]
        json: bool,
        /// Override the decision truncation (default: conductor + 1 + ord num)
        #[arg(long)]
        trunc_override: Option<u64>,
    },
    /// Print the Weierstrass polynomial P(z, w) of the branch
    Weierstrass {
        curve: String,
        /// Emit canonical JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Run the full cross-check suite on one curve or the built-in corpus
    Verify {
        /// Curve file path or `-`; omit together with --corpus
        curve: Option<String>,
        /// Verify every built-in corpus fixture
        #[arg(long)]
        corpus: bool,
        /// Emit canonical JSON instead of text
        #[arg(long)]
        json: bool,
        /// Seed for the deterministic inclusion sampling
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    All,
    Closed,
    Kstar,
    Product,
    Weierstrass,
}

impl OracleArg {
    fn to_oracles(self) -> Vec<Oracle> {
        match self {
            OracleArg::All => Oracle::ALL.to_vec(),
            OracleArg::Closed => vec![Oracle::ClosedForm],
            OracleArg::Kstar => vec![Oracle::KStar],
            OracleArg::Product => vec![Oracle::SeriesProduct],
            OracleArg::Weierstrass => vec![Oracle::Weierstrass],
        }
    }
}

/// Errors with their exit code: `Input` -> 2, `Math` -> 3.
pub enum CliError {
    Input(String),
    Math(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Math(_) => "math",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Math(m) => m,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 3,
        }
    }
}

impl From<MembershipError> for CliError {
    fn from(e: MembershipError) -> Self {
        match e {
            MembershipError::BoundTooSmall { .. }
            | MembershipError::PrecisionExhausted { .. }
            | MembershipError::WitnessUnexpectedlyStrong { .. }
            | MembershipError::Weierstrass(_) => CliError::Math(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn read_curve(path: &str) -> Result<(CurveSpec, BranchParametrization), CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("reading {path}: {e}")))?
    };
    let spec = CurveSpec::from_json(&text)
        .map_err(|e| CliError::Input(format!("parsing {path}: {e}")))?;
    let branch = spec.to_branch().map_err(|e| CliError::Input(e.to_string()))?;
    Ok((spec, branch))
}

/// Canonical JSON: route through `Value` so keys are sorted, then pretty.
fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON serialization"));
}

fn parse_element(text: &str) -> Result<RingElementOnCurve, CliError> {
    RingElementOnCurve::parse(text)
        .map_err(|e| CliError::Input(format!("parsing expression `{text}`: {e}")))
}

fn cmd_invariants(curve: &str, json: bool, oracles: OracleArg) -> Result<(), CliError> {
    let (spec, branch) = read_curve(curve)?;
    let cs = branch.characteristic_sequence();
    let report = report_with_oracles(&branch, &oracles.to_oracles())
        .map_err(|e| CliError::Math(e.to_string()))?;
    if json {
        let value = json!({
            "curve": serde_json::to_value(&spec).unwrap(),
            "characteristic": serde_json::to_value(&cs).unwrap(),
            "report": serde_json::to_value(&report).unwrap(),
        });
        print_json(&value);
    } else {
        println!("curve: {}", spec.display_name());
        let beta: Vec<String> = cs.beta().iter().map(|b| b.to_string()).collect();
        let e: Vec<String> = cs.e().iter().map(|x| x.to_string()).collect();
        println!("m = {}, beta = ({}), e = ({})", cs.m(), beta.join(", "), e.join(", "));
        println!("{report}");
    }
    Ok(())
}

fn cmd_semigroup(curve: &str, json: bool) -> Result<(), CliError> {
    let (spec, branch) = read_curve(curve)?;
    let ctx = CurveMembership::new(&branch).map_err(CliError::from)?;
    let sg = ctx.semigroup();
    // Milnor number from the cheap oracle; the conductor must match it.
    let report = report_with_oracles(&branch, &[Oracle::ClosedForm])
        .map_err(|e| CliError::Math(e.to_string()))?;
    let matches = sg.conductor == report.mu;
    if json {
        let value = json!({
            "curve": spec.name,
            "semigroup": serde_json::to_value(sg).unwrap(),
            "mu": report.mu,
            "conductor_equals_mu": matches,
        });
        print_json(&value);
    } else {
        println!("curve: {}", spec.display_name());
        let gaps: Vec<String> = sg.gaps.iter().map(|g| g.to_string()).collect();
        println!("semigroup: {sg}");
        println!("gaps: {{{}}}", gaps.join(", "));
        println!("conductor == mu: {} (mu = {})", matches, report.mu);
    }
    if !matches {
        return Err(CliError::Math(format!(
            "conductor {} != Milnor number {}",
            sg.conductor, report.mu
        )));
    }
    Ok(())
}

fn cmd_member(
    curve: &str,
    num: &str,
    den: &str,
    json: bool,
    trunc_override: Option<u64>,
) -> Result<(), CliError> {
    let (_, branch) = read_curve(curve)?;
    let num_el = parse_element(num)?;
    let den_el = parse_element(den)?;
    let ctx = CurveMembership::new(&branch).map_err(CliError::from)?;
    let verdict = ctx.classify_with_truncation(&num_el, &den_el, trunc_override)?;
    if json {
        let value = json!({
            "num": num,
            "den": den,
            "verdict": serde_json::to_value(&verdict).unwrap(),
        });
        print_json(&value);
    } else {
        println!("classification: {:?}", verdict.classification);
        let fmt_ord = |o: Option<u64>| o.map_or("infinite (vanishes on curve)".into(), |v| v.to_string());
        println!("ord(num ∘ Π) = {}", fmt_ord(verdict.ord_num));
        println!("ord(den ∘ Π) = {}", verdict.ord_den);
        match verdict.ord_quotient {
            Some(q) => println!("ord(quotient) = {q}"),
            None => println!("ord(quotient) = infinite (zero function)"),
        }
    }
    Ok(())
}

fn cmd_weierstrass(curve: &str, json: bool) -> Result<(), CliError> {
    let (spec, branch) = read_curve(curve)?;
    let p = build_weierstrass(&branch).map_err(|e| CliError::Math(e.to_string()))?;
    if json {
        print_json(&serde_json::to_value(&p).unwrap());
    } else {
        println!("curve: {}", spec.display_name());
        println!("P(z, w) = {p}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = match &cli.cmd {
        Cmd::Invariants { json, .. }
        | Cmd::Semigroup { json, .. }
        | Cmd::Member { json, .. }
        | Cmd::Weierstrass { json, .. }
        | Cmd::Verify { json, .. } => *json,
    };
    let result = match cli.cmd {
        Cmd::Invariants { ref curve, json, oracles } => cmd_invariants(curve, json, oracles),
        Cmd::Semigroup { ref curve, json } => cmd_semigroup(curve, json),
        Cmd::Member { ref curve, ref num, ref den, json, trunc_override } => {
            cmd_member(curve, num, den, json, trunc_override)
        }
        Cmd::Weierstrass { ref curve, json } => cmd_weierstrass(curve, json),
        Cmd::Verify { ref curve, corpus, json, seed } => {
            verify::cmd_verify(curve.as_deref(), corpus, json, seed)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if json_mode {
                let value = json!({
                    "error": {
                        "exit_code": e.exit_code(),
                        "kind": e.kind(),
                        "message": e.message(),
                    }
                });
                eprintln!("{}", serde_json::to_string_pretty(&value).expect("JSON"));
            } else {
                eprintln!("error ({}): {}", e.kind(), e.message());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
