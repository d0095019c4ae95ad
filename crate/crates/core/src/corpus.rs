//! The built-in verification corpus.
//!
//! Twenty-five curve fixtures live under `corpus/` at the workspace root
//! and are embedded here at compile time: five named curves and twenty
//! seeded random branches (see `examples/gen_corpus.rs` for the exact
//! generator and seed). Each file carries an `expect` block of frozen
//! invariants that `verify` checks against recomputed values.

use crate::branch::CurveSpec;

macro_rules! corpus_file {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/", $name, ".json")),
        )
    };
}

/// `(name, raw JSON)` for every fixture, in verification order.
pub const RAW: &[(&str, &str)] = &[
    corpus_file!("cusp"),
    corpus_file!("m2-t5"),
    corpus_file!("m4-t6-t7"),
    corpus_file!("m6-t8-t9"),
    corpus_file!("smooth"),
    corpus_file!("random-01"),
    corpus_file!("random-02"),
    corpus_file!("random-03"),
    corpus_file!("random-04"),
    corpus_file!("random-05"),
    corpus_file!("random-06"),
    corpus_file!("random-07"),
    corpus_file!("random-08"),
    corpus_file!("random-09"),
    corpus_file!("random-10"),
    corpus_file!("random-11"),
    corpus_file!("random-12"),
    corpus_file!("random-13"),
    corpus_file!("random-14"),
    corpus_file!("random-15"),
    corpus_file!("random-16"),
    corpus_file!("random-17"),
    corpus_file!("random-18"),
    corpus_file!("random-19"),
    corpus_file!("random-20"),
];

/// Parse every fixture. The files are version-controlled and embedded, so
/// a parse failure is a build defect, not a runtime condition.
pub fn load() -> Vec<CurveSpec> {
    RAW.iter()
        .map(|(name, text)| {
            CurveSpec::from_json(text)
                .unwrap_or_else(|e| panic!("corpus fixture {name} is malformed: {e}"))
        })
        .collect()
}

pub fn by_name(name: &str) -> Option<CurveSpec> {
    RAW.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| CurveSpec::from_json(text).expect("corpus fixture is well-formed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses_and_validates() {
        let specs = load();
        assert_eq!(specs.len(), 25);
        for spec in &specs {
            let b = spec.to_branch().expect("corpus curves validate");
            assert!(b.multiplicity() <= 8);
            let expect = spec.expect.as_ref().expect("corpus carries expected values");
            assert!(!expect.is_vacuous());
        }
    }

    #[test]
    fn named_lookup() {
        assert!(by_name("cusp").is_some());
        assert!(by_name("no-such-curve").is_none());
    }
}
