//! Regenerate the corpus fixtures under `corpus/`.
//!
//! The five named curves are fixed; the twenty random branches are drawn
//! from a ChaCha stream with the seed below, so rerunning this tool
//! reproduces the committed files byte for byte.
//!
//!     cargo run -p puiseux-core --example gen_corpus -- <output-dir>

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use puiseux_core::branch::{BranchParametrization, ExpectedInvariants};
use puiseux_core::exactnum::parse_rational;
use puiseux_core::invariants::full_report;
use puiseux_core::membership::value_semigroup;
use puiseux_core::sampling::{random_branch, BranchDistribution};

const RANDOM_SEED: u64 = 0x5eed_cafe;

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "corpus".to_string())
        .into();
    std::fs::create_dir_all(&out).expect("create output dir");

    let named = vec![
        ("cusp", 2u64, vec![(3u64, "1")]),
        ("m2-t5", 2, vec![(5, "1")]),
        ("m4-t6-t7", 4, vec![(6, "1"), (7, "1")]),
        ("m6-t8-t9", 6, vec![(8, "1"), (9, "1")]),
        ("smooth", 1, vec![(1, "1")]),
    ];

    let mut files = Vec::new();
    for (name, m, terms) in named {
        let b = BranchParametrization::new(
            m,
            terms.iter().map(|&(e, c)| (e, parse_rational(c).unwrap())).collect(),
        )
        .unwrap();
        files.push((name.to_string(), b));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let dist = BranchDistribution { min_m: 2, ..Default::default() };
    for i in 1..=20 {
        let b = random_branch(&mut rng, &dist);
        files.push((format!("random-{i:02}"), b));
    }

    for (name, b) in files {
        let report = full_report(&b).expect("oracle agreement");
        let sg = value_semigroup(&b).expect("semigroup closure");
        assert_eq!(sg.conductor, report.mu, "conductor != mu for {name}");
        let mut spec = b.to_spec(Some(name.clone()));
        spec.expect = Some(ExpectedInvariants {
            ord_pw: Some(report.ord_pw),
            mu: Some(report.mu),
            bs: Some(report.bs),
            conductor: Some(sg.conductor),
            generators: Some(sg.generators.clone()),
            beta: Some(b.characteristic_sequence().beta().to_vec()),
        });
        let value = serde_json::to_value(&spec).unwrap();
        let path = out.join(format!("{name}.json"));
        std::fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&value).unwrap()))
            .expect("write corpus file");
        println!("wrote {} (m={}, ord={}, bs={})", path.display(), b.multiplicity(), report.ord_pw, report.bs);
    }
}
