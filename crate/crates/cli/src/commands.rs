//! Command implementations. Each returns a [`RunReport`] or an input error;
//! the binary maps those to exit codes 0/1 (verdict) and 2 (input error).

use std::fmt;
use std::path::Path;

use defcohom::cohomology::DeformedComplex;
use defcohom::coordforms::{load_fixture, parse_mcf, CheckOutcome, CoordCheck, McFixture};
use defcohom::exterior::KForm;
use defcohom::fixtures;
use defcohom::jetcalc::{covering_compatibility_residual, parse_pde};
use defcohom::presentation::{parse_presentation, validate_presentation, AlgebraPresentation};
use defcohom::scalars::{fmt_rational, Rational};

use crate::report::{InputDigest, PairResult, Residual, Resonance, Results, RunReport};
use crate::reproduce;

/// Anything that prevents a verification from running at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(context: &str) -> impl Fn(&dyn fmt::Display) -> InputError + '_ {
    move |e| InputError(format!("{context}: {e}"))
}

/// An input file: read from disk, or one of the embedded fixtures by file name.
#[derive(Clone, Debug)]
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn load(arg: &str) -> Result<Source, InputError> {
        let path = Path::new(arg);
        if path.exists() {
            let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{arg}: {e}")))?;
            return Ok(Source { name: arg.to_string(), text });
        }
        match fixtures::embedded(arg) {
            Some(text) => Ok(Source { name: format!("embedded:{arg}"), text: text.to_string() }),
            None => Err(InputError(format!("{arg}: no such file or embedded fixture"))),
        }
    }

    pub fn inline(name: &str, text: &str) -> Source {
        Source { name: name.to_string(), text: text.to_string() }
    }

    fn digest(&self) -> InputDigest {
        InputDigest::of(&self.name, &self.text)
    }

    fn presentation(&self) -> Result<AlgebraPresentation, InputError> {
        parse_presentation(&self.text).map_err(|e| input_err(&self.name)(&e))
    }
}

pub fn check(command: Vec<String>, src: &Source) -> Result<RunReport, InputError> {
    let p = src.presentation()?;
    let r = validate_presentation(&p);
    let generators = r
        .per_generator
        .iter()
        .map(|g| Residual { name: g.symbol.clone(), residual: g.residual.clone(), pass: g.terms == 0 })
        .collect();
    let closed_marks = r
        .closed_marks
        .iter()
        .map(|m| Residual { name: m.name.clone(), residual: m.residual.clone(), pass: m.residual == "0" })
        .collect();
    let results = Results::Check { algebra: p.name.clone(), generators, closed_marks };
    Ok(RunReport::new(command, vec![src.digest()], results, r.pass))
}

fn complex(p: &AlgebraPresentation, zeta: Option<&str>, restrict_ideal: bool) -> Result<DeformedComplex, InputError> {
    let cx = match zeta {
        Some(name) => DeformedComplex::with_mark(p, name, restrict_ideal),
        None => DeformedComplex::with_default_mark(p, restrict_ideal),
    };
    cx.map_err(|e| input_err("zeta")(&e))
}

fn zeta_text(cx: &DeformedComplex) -> String {
    let p = cx.presentation();
    let name = p.closed_marks().iter().find(|m| &m.form == cx.zeta()).map(|m| m.name.clone());
    match name {
        Some(n) => format!("{n} = {}", cx.zeta()),
        None => cx.zeta().to_string(),
    }
}

/// Where to evaluate the cohomology.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaChoice {
    At(Rational),
    /// A seeded random probe avoiding every resonance candidate.
    Generic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexArgs {
    pub degree: usize,
    pub restrict_ideal: bool,
    pub zeta: Option<String>,
    pub seed: u64,
}

pub fn cohomology(command: Vec<String>, src: &Source, args: &ComplexArgs, lambda: &LambdaChoice) -> Result<RunReport, InputError> {
    let p = src.presentation()?;
    let cx = complex(&p, args.zeta.as_deref(), args.restrict_ideal)?;
    let value = match lambda {
        LambdaChoice::At(l) => l.clone(),
        LambdaChoice::Generic => cx.resonance_scan(args.degree, args.seed).map_err(|e| input_err("cohomology")(&e))?.probe,
    };
    let r = cx.cohomology_dimension(args.degree, &value).map_err(|e| input_err("cohomology")(&e))?;
    let results = Results::Cohomology {
        algebra: p.name.clone(),
        zeta: zeta_text(&cx),
        restrict_ideal: args.restrict_ideal,
        degree: args.degree,
        lambda: fmt_rational(&value),
        generic: *lambda == LambdaChoice::Generic,
        dimension: r.dimension,
        kernel_dimension: r.kernel_dimension,
        image_dimension: r.image_dimension,
        cochain_dimension: r.cochain_dimension,
        representatives: r.representatives.iter().map(KForm::to_string).collect(),
    };
    Ok(RunReport::new(command, vec![src.digest()], results, true))
}

pub fn resonances(command: Vec<String>, src: &Source, args: &ComplexArgs) -> Result<RunReport, InputError> {
    let p = src.presentation()?;
    let cx = complex(&p, args.zeta.as_deref(), args.restrict_ideal)?;
    let s = cx.resonance_scan(args.degree, args.seed).map_err(|e| input_err("resonances")(&e))?;
    let listing = |m: &std::collections::BTreeMap<Rational, usize>| {
        m.iter().map(|(l, d)| Resonance { lambda: fmt_rational(l), dimension: *d }).collect::<Vec<_>>()
    };
    let consistent = s.generic_dimension == s.generic_dimension_from_ranks;
    let results = Results::Resonances {
        algebra: p.name.clone(),
        zeta: zeta_text(&cx),
        restrict_ideal: args.restrict_ideal,
        degree: args.degree,
        seed: args.seed,
        generic_dimension: s.generic_dimension,
        generic_dimension_from_ranks: s.generic_dimension_from_ranks,
        probe: fmt_rational(&s.probe),
        candidates: s.candidates.iter().map(fmt_rational).collect(),
        resonances: listing(&s.resonances),
        drops: listing(&s.drops),
        pivot_polynomials: s.pivot_polynomials.iter().map(|q| q.to_string()).collect(),
        irrational_witness: s.irrational_witness.iter().map(|q| q.to_string()).collect(),
    };
    Ok(RunReport::new(command, vec![src.digest()], results, consistent))
}

pub fn verify_covering(command: Vec<String>, src: &Source) -> Result<RunReport, InputError> {
    let sys = parse_pde(&src.text).map_err(|e| input_err(&src.name)(&e))?;
    if sys.covering.is_none() {
        return Err(InputError(format!("{}: no covering relations declared", src.name)));
    }
    let r = covering_compatibility_residual(&sys).map_err(|e| input_err("covering")(&e))?;
    let pairs = r
        .pairs
        .iter()
        .map(|p| PairResult {
            primary: p.primary.clone(),
            secondary: p.secondary.clone(),
            off_shell: p.off_shell.to_string(),
            on_shell: p.on_shell.to_string(),
            pass: p.on_shell.is_zero(),
        })
        .collect();
    let solved = sys.reduction.as_ref().map(|e| format!("{} = {}", e.solved, e.rhs));
    let results = Results::Covering { independent: sys.space.independents().to_vec(), solved, pairs };
    Ok(RunReport::new(command, vec![src.digest()], results, r.pass))
}

/// Which coordinate checks to run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordSelection {
    All,
    Equation(String),
    Extension(String),
    Closed(String),
}

/// Loads a coordinate fixture: a shipped name (`pkz`, `bf`) or an `.mcf`
/// path. Algebras named inside the file resolve against `algebra` first,
/// then against the shipped presentations.
pub fn load_coords(arg: &str, algebra: Option<&Source>) -> Result<(McFixture, Vec<InputDigest>), InputError> {
    let extra = algebra.map(|a| a.presentation()).transpose()?;
    let mut digests = Vec::new();
    if let Some(a) = algebra {
        digests.push(a.digest());
    }
    if !Path::new(arg).exists() && extra.is_none() {
        if let Ok(fx) = load_fixture(arg) {
            let text = fixtures::embedded(&format!("{arg}.mcf")).unwrap_or_default();
            digests.push(InputDigest::of(&format!("embedded:{arg}.mcf"), text));
            return Ok((fx, digests));
        }
    }
    let src = Source::load(arg)?;
    let lookup = |name: &str| match &extra {
        Some(p) if p.name == name => Some(p.clone()),
        _ => fixtures::presentation_by_name(name),
    };
    let fx = parse_mcf(&src.text, lookup).map_err(|e| input_err(&src.name)(&e))?;
    digests.push(src.digest());
    Ok((fx, digests))
}

pub fn verify_coords(
    command: Vec<String>,
    fixture: &str,
    algebra: Option<&Source>,
    selection: &CoordSelection,
) -> Result<RunReport, InputError> {
    let (fx, digests) = load_coords(fixture, algebra)?;
    let checks: Vec<CoordCheck> = match selection {
        CoordSelection::All => fx.check_all(),
        CoordSelection::Equation(s) => fx.check_equation(s).map(|c| vec![c]),
        CoordSelection::Extension(s) => fx.check_extension(s).map(|c| vec![c]),
        CoordSelection::Closed(s) => fx.check_closed(s).map(|c| vec![c]),
    }
    .map_err(|e| input_err("coordinates")(&e))?;
    let failed = checks.iter().any(|c| matches!(c.outcome, CheckOutcome::Fail { .. }));
    let verified = checks.iter().any(|c| c.outcome == CheckOutcome::Pass);
    let results = Results::Coords { fixture: fx.name.clone(), checks };
    Ok(RunReport::new(command, digests, results, verified && !failed))
}

pub fn reproduce(command: Vec<String>, seed: u64) -> RunReport {
    let criteria = reproduce::run_all(seed);
    let pass = criteria.iter().all(|c| c.pass);
    let inputs = fixtures::embedded_files().iter().map(|(n, t)| InputDigest::of(&format!("embedded:{n}"), t)).collect();
    RunReport::new(command, inputs, Results::Reproduce { seed, criteria }, pass)
}
