use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("malformed rational literal `{0}`")]
    BadLiteral(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("forms belong to different coframes")]
    MixedPresentation,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("differential of `{0}` is not known at this truncation")]
    UnknownDifferential(String),
    #[error("1-form is not closed; d = {residual}")]
    NotClosed { residual: String },
    #[error("expected a 1-form, got degree {0}")]
    NotOneForm(usize),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("line {line}, column {column}: expected {expected}")]
    Syntax { line: usize, column: usize, expected: String },
    #[error("line {line}: undeclared symbol `{name}`")]
    UndeclaredSymbol { name: String, line: usize },
    #[error("line {line}: `{name}` declared twice")]
    DuplicateDeclaration { name: String, line: usize },
    #[error("line {line}: `{name}` is a prolongation symbol and cannot have a differential")]
    DifferentialOfProlongation { name: String, line: usize },
    #[error("form `{0}` has no `d` declaration")]
    MissingDifferential(String),
    #[error("missing `algebra NAME` header")]
    MissingHeader,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("degree {0} outside the computable range (k >= 1)")]
    DegreeOutOfRange(usize),
    #[error("candidate has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("candidate uses tuple {0} outside the cochain space")]
    OutsideCochainSpace(String),
    #[error("no closed 1-form named `{0}`")]
    UnknownZeta(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("expression leaves the supported class: {0}")]
    UnsupportedShape(String),
    #[error("no covering relation for the derivative of `{atom}` in direction `{direction}`")]
    MissingCoveringRelation { atom: String, direction: String },
    #[error("nonlocal jet `{0}` is not on the fiber tower")]
    NonlocalOffFiber(String),
    #[error("reduction did not terminate within {0} rewrites")]
    NonTermination(usize),
    #[error("`{0}` is not an independent variable")]
    NotIndependent(String),
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Declaration { line: usize, message: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("`{0}` cannot be verified: {1}")]
    NotVerifiable(String, String),
    #[error("1-form is not of Wahlquist-Estabrook shape: {0}")]
    NotWEShape(String),
    #[error("atom `{0}` is not in the fixture's atom universe")]
    UnknownAtom(String),
    #[error("unknown fixture item `{0}`")]
    UnknownItem(String),
    #[error("line {line}: {message}")]
    Declaration { line: usize, message: String },
}
