//! Built-in fixtures. The same files ship under `fixtures/` and are
//! embedded here, so loading a shipped file and loading the embedded copy
//! give the same result.

use crate::presentation::{parse_presentation, presentation_diff, AlgebraPresentation, PresentationDiff};

pub const H_ALG: &str = include_str!("../fixtures/h.alg");
pub const PKZ_ALG: &str = include_str!("../fixtures/pkz.alg");
pub const RAW_PKZ_ALG: &str = include_str!("../fixtures/raw_pkz.alg");
pub const BF_ALG: &str = include_str!("../fixtures/bf.alg");
pub const RAW_BF_ALG: &str = include_str!("../fixtures/raw_bf.alg");
pub const PKZ_CURATION_JSON: &str = include_str!("../fixtures/pkz_curation.json");
pub const BF_CURATION_JSON: &str = include_str!("../fixtures/bf_curation.json");

pub const PKZ_COVERING_PDE: &str = include_str!("../fixtures/pkz_covering.pde");
pub const BF_COVERING_PDE: &str = include_str!("../fixtures/bf_covering.pde");
pub const BROKEN_PKZ_COVERING_PDE: &str = include_str!("../fixtures/broken_pkz_covering.pde");
pub const GRADIENT_COVERING_PDE: &str = include_str!("../fixtures/gradient_covering.pde");

pub const PKZ_MCF: &str = include_str!("../fixtures/pkz.mcf");
pub const BF_MCF: &str = include_str!("../fixtures/bf.mcf");

/// Equations whose printed coefficients are known to be ambiguous or
/// inconsistent in the literal transcriptions; curation is expected to
/// touch only these.
pub const PKZ_AMBIGUOUS: &[&str] = &["theta3", "s13", "eta4"];
pub const BF_AMBIGUOUS: &[&str] = &["theta3", "s33"];

/// Every embedded text file by its shipped file name.
pub fn embedded_files() -> &'static [(&'static str, &'static str)] {
    &[
        ("h.alg", H_ALG),
        ("pkz.alg", PKZ_ALG),
        ("raw_pkz.alg", RAW_PKZ_ALG),
        ("bf.alg", BF_ALG),
        ("raw_bf.alg", RAW_BF_ALG),
        ("pkz_curation.json", PKZ_CURATION_JSON),
        ("bf_curation.json", BF_CURATION_JSON),
        ("pkz_covering.pde", PKZ_COVERING_PDE),
        ("bf_covering.pde", BF_COVERING_PDE),
        ("broken_pkz_covering.pde", BROKEN_PKZ_COVERING_PDE),
        ("gradient_covering.pde", GRADIENT_COVERING_PDE),
        ("pkz.mcf", PKZ_MCF),
        ("bf.mcf", BF_MCF),
    ]
}

pub fn embedded(name: &str) -> Option<&'static str> {
    embedded_files().iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

fn load(text: &str) -> AlgebraPresentation {
    parse_presentation(text).expect("embedded fixture parses")
}

/// Five-dimensional solvable algebra with ζ = θ¹.
pub fn h() -> AlgebraPresentation {
    load(H_ALG)
}

/// Curated presentation for the potential Khokhlov–Zabolotskaya pseudo-group.
pub fn pkz() -> AlgebraPresentation {
    load(PKZ_ALG)
}

pub fn raw_pkz() -> AlgebraPresentation {
    load(RAW_PKZ_ALG)
}

/// Curated presentation for the Boyer–Finley pseudo-group.
pub fn bf() -> AlgebraPresentation {
    load(BF_ALG)
}

pub fn raw_bf() -> AlgebraPresentation {
    load(RAW_BF_ALG)
}

/// Curated presentation by its `algebra` name.
pub fn presentation_by_name(name: &str) -> Option<AlgebraPresentation> {
    match name {
        "h" => Some(h()),
        "pkz" => Some(pkz()),
        "pkz_raw" => Some(raw_pkz()),
        "bf" => Some(bf()),
        "bf_raw" => Some(raw_bf()),
        _ => None,
    }
}

pub fn pkz_curation() -> PresentationDiff {
    presentation_diff(&raw_pkz(), &pkz())
}

pub fn bf_curation() -> PresentationDiff {
    presentation_diff(&raw_bf(), &bf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{serialize_presentation, validate_presentation};

    #[test]
    fn curated_fixtures_validate() {
        for p in [h(), pkz(), bf()] {
            let r = validate_presentation(&p);
            assert!(r.pass, "{}: {:?}", p.name, r);
        }
    }

    #[test]
    fn symbol_counts() {
        assert_eq!(pkz().known_count(), 20);
        assert_eq!(pkz().coframe().len(), 25);
        assert_eq!(bf().known_count(), 17);
        assert_eq!(bf().coframe().len(), 21);
    }

    #[test]
    fn raw_bf_fails_on_zeta() {
        let r = validate_presentation(&raw_bf());
        assert!(!r.pass);
        assert_eq!(r.failing_marks(), vec!["zeta"]);
        assert_eq!(r.closed_marks[0].residual, "2*xi3^s33");
    }

    #[test]
    fn fixtures_round_trip() {
        for p in [h(), pkz(), raw_pkz(), bf(), raw_bf()] {
            let again = parse_presentation(&serialize_presentation(&p)).unwrap();
            assert_eq!(again, p);
        }
    }

    /// Set DEFCOHOM_BLESS=1 to rewrite the shipped curation diffs.
    #[test]
    fn shipped_curation_json_is_current() {
        if std::env::var_os("DEFCOHOM_BLESS").is_some() {
            let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/");
            std::fs::write(format!("{dir}pkz_curation.json"), pkz_curation().to_json() + "\n").unwrap();
            std::fs::write(format!("{dir}bf_curation.json"), bf_curation().to_json() + "\n").unwrap();
            return;
        }
        assert_eq!(PKZ_CURATION_JSON.trim(), pkz_curation().to_json().trim());
        assert_eq!(BF_CURATION_JSON.trim(), bf_curation().to_json().trim());
    }
}
