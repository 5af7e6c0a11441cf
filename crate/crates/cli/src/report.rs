//! Run reports: one structured value per command, rendered as text or as
//! versioned JSON. Both renderings come from the same value, so their numbers agree.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use defcohom::coordforms::{CheckKind, CheckOutcome, CoordCheck};

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(name: &str, contents: &str) -> Self {
        let digest = Sha256::digest(contents.as_bytes());
        let hex = digest.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
        InputDigest { name: name.to_string(), sha256: hex }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    pub residual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Resonance {
    pub lambda: String,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairResult {
    pub primary: String,
    pub secondary: String,
    pub off_shell: String,
    pub on_shell: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Check {
        algebra: String,
        generators: Vec<Residual>,
        closed_marks: Vec<Residual>,
    },
    Cohomology {
        algebra: String,
        zeta: String,
        restrict_ideal: bool,
        degree: usize,
        /// The λ used; for a generic request this is the probe value.
        lambda: String,
        generic: bool,
        dimension: usize,
        kernel_dimension: usize,
        image_dimension: usize,
        cochain_dimension: usize,
        representatives: Vec<String>,
    },
    Resonances {
        algebra: String,
        zeta: String,
        restrict_ideal: bool,
        degree: usize,
        seed: u64,
        generic_dimension: usize,
        generic_dimension_from_ranks: usize,
        probe: String,
        candidates: Vec<String>,
        resonances: Vec<Resonance>,
        drops: Vec<Resonance>,
        pivot_polynomials: Vec<String>,
        irrational_witness: Vec<String>,
    },
    Covering {
        independent: Vec<String>,
        solved: Option<String>,
        pairs: Vec<PairResult>,
    },
    Coords {
        fixture: String,
        checks: Vec<CoordCheck>,
    },
    Reproduce {
        seed: u64,
        criteria: Vec<CriterionResult>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub results: Results,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs: Vec<InputDigest>, results: Results, pass: bool) -> Self {
        RunReport { schema_version: SCHEMA_VERSION, command, inputs, results, verdict: Verdict::from_bool(pass), timing_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command.join(" "));
        for i in &self.inputs {
            let _ = writeln!(s, "input: {} sha256={}", i.name, i.sha256);
        }
        render_results(&mut s, &self.results);
        if let Some(t) = self.timing_ms {
            let _ = writeln!(s, "time: {t} ms");
        }
        let _ = writeln!(s, "verdict: {}", self.verdict.label());
        s
    }
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "ok  "
    } else {
        "FAIL"
    }
}

fn render_results(s: &mut String, r: &Results) {
    match r {
        Results::Check { algebra, generators, closed_marks } => {
            let _ = writeln!(s, "algebra: {algebra}");
            let failing = generators.iter().filter(|g| !g.pass).count();
            let _ = writeln!(s, "d(d) residuals: {} generators, {failing} nonzero", generators.len());
            for g in generators.iter().filter(|g| !g.pass) {
                let _ = writeln!(s, "  FAIL d(d {}) = {}", g.name, g.residual);
            }
            for m in closed_marks {
                let _ = writeln!(s, "  {} closed {}: d = {}", mark(m.pass), m.name, m.residual);
            }
        }
        Results::Cohomology {
            algebra,
            zeta,
            restrict_ideal,
            degree,
            lambda,
            generic,
            dimension,
            kernel_dimension,
            image_dimension,
            cochain_dimension,
            representatives,
        } => {
            let _ = writeln!(s, "algebra: {algebra}");
            let _ = writeln!(s, "zeta: {zeta}");
            let _ = writeln!(s, "restrict to ideal: {}", if *restrict_ideal { "yes" } else { "no" });
            let at = if *generic { format!("generic (probe {lambda})") } else { lambda.clone() };
            let _ = writeln!(s, "degree {degree}, lambda = {at}");
            let _ = writeln!(s, "dimension: {dimension}");
            let _ = writeln!(
                s,
                "cochains: {cochain_dimension}, cocycles: {kernel_dimension}, coboundaries: {image_dimension}"
            );
            if representatives.is_empty() {
                let _ = writeln!(s, "representatives: none");
            } else {
                let _ = writeln!(s, "representatives:");
                for r in representatives {
                    let _ = writeln!(s, "  {r}");
                }
            }
        }
        Results::Resonances {
            algebra,
            zeta,
            restrict_ideal,
            degree,
            seed,
            generic_dimension,
            generic_dimension_from_ranks,
            probe,
            candidates,
            resonances,
            drops,
            pivot_polynomials,
            irrational_witness,
        } => {
            let _ = writeln!(s, "algebra: {algebra}");
            let _ = writeln!(s, "zeta: {zeta}");
            let _ = writeln!(s, "restrict to ideal: {}", if *restrict_ideal { "yes" } else { "no" });
            let _ = writeln!(s, "degree: {degree}");
            let _ = writeln!(s, "generic dimension: {generic_dimension} (probe {probe}, seed {seed}; from ranks: {generic_dimension_from_ranks})");
            let _ = writeln!(s, "pivot polynomials: {}", list_or(pivot_polynomials, "none"));
            let _ = writeln!(s, "candidates: {}", list_or(candidates, "none"));
            if resonances.is_empty() {
                let _ = writeln!(s, "resonances: none (generic only)");
            } else {
                let _ = writeln!(s, "resonances:");
                for r in resonances {
                    let _ = writeln!(s, "  lambda = {}: dimension {}", r.lambda, r.dimension);
                }
            }
            if !drops.is_empty() {
                let _ = writeln!(s, "drops below generic:");
                for r in drops {
                    let _ = writeln!(s, "  lambda = {}: dimension {}", r.lambda, r.dimension);
                }
            }
            if !irrational_witness.is_empty() {
                let _ = writeln!(s, "factors without rational roots: {}", irrational_witness.join(", "));
            }
        }
        Results::Covering { independent, solved, pairs } => {
            let _ = writeln!(s, "independent: {}", independent.join(" "));
            let _ = writeln!(s, "equation: {}", solved.as_deref().unwrap_or("none"));
            for p in pairs {
                let _ = writeln!(s, "{} [D_{}, D_{}]", mark(p.pass), p.primary, p.secondary);
                let _ = writeln!(s, "  off shell: {}", p.off_shell);
                let _ = writeln!(s, "  on shell:  {}", p.on_shell);
            }
        }
        Results::Coords { fixture, checks } => {
            let _ = writeln!(s, "fixture: {fixture}");
            for c in checks {
                let kind = match c.kind {
                    CheckKind::Equation => "d",
                    CheckKind::Closed => "closed",
                    CheckKind::Extension => "extension",
                };
                match &c.outcome {
                    CheckOutcome::Pass => {
                        let _ = writeln!(s, "ok   {kind} {}", c.name);
                    }
                    CheckOutcome::Fail { residual } => {
                        let _ = writeln!(s, "FAIL {kind} {}: residual {residual}", c.name);
                    }
                    CheckOutcome::NotVerifiable { .. } => {}
                }
            }
            let skipped: Vec<&CoordCheck> =
                checks.iter().filter(|c| matches!(c.outcome, CheckOutcome::NotVerifiable { .. })).collect();
            if !skipped.is_empty() {
                let _ = writeln!(s, "not verifiable in coordinates:");
                for c in skipped {
                    if let CheckOutcome::NotVerifiable { reason } = &c.outcome {
                        let _ = writeln!(s, "  {}: {reason}", c.name);
                    }
                }
            }
        }
        Results::Reproduce { seed, criteria } => {
            let _ = writeln!(s, "seed: {seed}");
            for c in criteria {
                let _ = writeln!(s, "{} [{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.title, c.detail);
            }
        }
    }
}

fn list_or(items: &[String], empty: &str) -> String {
    if items.is_empty() {
        empty.to_string()
    } else {
        items.join(", ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(resonances: Vec<Resonance>) -> RunReport {
        RunReport::new(
            vec!["defcohom".into(), "resonances".into()],
            vec![InputDigest::of("x.alg", "algebra x\n")],
            Results::Resonances {
                algebra: "x".into(),
                zeta: "theta1".into(),
                restrict_ideal: false,
                degree: 2,
                seed: 0,
                generic_dimension: 0,
                generic_dimension_from_ranks: 0,
                probe: "5/7".into(),
                candidates: vec![],
                resonances,
                drops: vec![],
                pivot_polynomials: vec![],
                irrational_witness: vec![],
            },
            true,
        )
    }

    #[test]
    fn empty_resonances_are_explicit() {
        assert!(sample(vec![]).to_text().contains("resonances: none (generic only)"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let r = sample(vec![Resonance { lambda: "-1".into(), dimension: 2 }]);
        assert_eq!(r.to_text(), r.clone().to_text());
        assert_eq!(r.to_json(), r.clone().to_json());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["results"]["resonances"][0]["dimension"], 2);
        assert!(r.to_text().contains("lambda = -1: dimension 2"));
        assert!(v.get("timing_ms").is_none());
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            InputDigest::of("e", "").sha256,
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
