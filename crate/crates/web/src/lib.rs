//! Browser demo: compatibility check, resonance scan and covering check on
//! text typed into the page. Every entry point takes text and returns a JSON
//! string, `{"ok": true, ...}` or `{"ok": false, "error": "..."}`.
//!
//! Build with: wasm-pack build crates/web --target web --out-dir www/pkg

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use defcohom::cohomology::DeformedComplex;
use defcohom::fixtures;
use defcohom::jetcalc::{covering_compatibility_residual, parse_pde};
use defcohom::presentation::{parse_presentation, validate_presentation};
use defcohom::scalars::fmt_rational;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(mut v) => {
            v["ok"] = json!(true);
            v.to_string()
        }
        Err(e) => json!({ "ok": false, "error": e }).to_string(),
    }
}

/// Text of a shipped fixture (`h.alg`, `pkz_covering.pde`, ...), or "".
#[wasm_bindgen]
pub fn fixture(name: &str) -> String {
    fixtures::embedded(name).unwrap_or_default().to_string()
}

/// d(dω) = 0 for every generator of an `.alg` presentation.
#[wasm_bindgen]
pub fn check(text: &str) -> String {
    respond((|| {
        let p = parse_presentation(text).map_err(|e| e.to_string())?;
        let r = validate_presentation(&p);
        let failing: Vec<Value> = r
            .per_generator
            .iter()
            .filter(|g| g.terms > 0)
            .map(|g| json!({ "symbol": g.symbol, "residual": g.residual }))
            .collect();
        let marks: Vec<Value> = r.closed_marks.iter().map(|m| json!({ "name": m.name, "residual": m.residual })).collect();
        Ok(json!({
            "algebra": p.name,
            "pass": r.pass,
            "generators": r.per_generator.len(),
            "failing": failing,
            "closed_marks": marks,
        }))
    })())
}

/// λ values where the degree-k deformed cohomology jumps, with ζ the first
/// closed mark of the presentation.
#[wasm_bindgen]
pub fn resonances(text: &str, degree: usize, restrict_ideal: bool, seed: u32) -> String {
    respond((|| {
        let p = parse_presentation(text).map_err(|e| e.to_string())?;
        let cx = DeformedComplex::with_default_mark(&p, restrict_ideal).map_err(|e| e.to_string())?;
        let s = cx.resonance_scan(degree, u64::from(seed)).map_err(|e| e.to_string())?;
        let listing = |m: &std::collections::BTreeMap<_, usize>| -> Vec<Value> {
            m.iter().map(|(l, d)| json!({ "lambda": fmt_rational(l), "dimension": d })).collect()
        };
        Ok(json!({
            "algebra": p.name,
            "zeta": cx.zeta().to_string(),
            "degree": degree,
            "generic_dimension": s.generic_dimension,
            "probe": fmt_rational(&s.probe),
            "candidates": s.candidates.iter().map(fmt_rational).collect::<Vec<_>>(),
            "resonances": listing(&s.resonances),
            "drops": listing(&s.drops),
        }))
    })())
}

/// Commutation of the extended total derivatives of a `.pde` covering.
#[wasm_bindgen]
pub fn verify_covering(text: &str) -> String {
    respond((|| {
        let sys = parse_pde(text).map_err(|e| e.to_string())?;
        if sys.covering.is_none() {
            return Err("no covering relations declared".to_string());
        }
        let r = covering_compatibility_residual(&sys).map_err(|e| e.to_string())?;
        let pairs: Vec<Value> = r
            .pairs
            .iter()
            .map(|p| {
                json!({
                    "pair": format!("[D_{}, D_{}]", p.primary, p.secondary),
                    "off_shell": p.off_shell.to_string(),
                    "on_shell": p.on_shell.to_string(),
                })
            })
            .collect();
        Ok(json!({ "pass": r.pass, "pairs": pairs }))
    })())
}
