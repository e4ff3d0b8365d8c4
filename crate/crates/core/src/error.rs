//! Error type shared by all modules.

/// Errors produced by symbolic and numerical operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("context mismatch: ({0}) vs ({1})")]
    ContextMismatch(String, String),
    #[error("variable index {0} out of range (n = {1})")]
    VarIndex(usize, usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("degree-zero part singular or ill-conditioned (cond {0:.3e})")]
    SingularLeadingTerm(f64),
    #[error("point not in the resolvent set (cond {0:.3e})")]
    NotResolvent(f64),
    #[error("point outside the declared domain")]
    OutsideDomain,
    #[error("tensor factor has positive variable degree")]
    FactorNotScalar,
    #[error("value spaces are incompatible")]
    ValueSpaceMismatch,
    #[error("evaluation does not respect the block structure: {0}")]
    NotFullyMatricial(String),
    #[error("Choi matrix not Hermitian (defect {0:.3e})")]
    ChoiNotHermitian(f64),
    #[error("rational rule denominator singular at the evaluation point")]
    RationalSingular,
    #[error("matrix not in the scalar span (residual {0:.3e})")]
    NotInSpan(f64),
    #[error("site flag required: {0}")]
    SiteFlags(&'static str),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
