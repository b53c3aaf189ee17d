use thiserror::Error;

use crate::expr::ExprError;
use crate::grade::GradeError;
use crate::hypergeom::HypergeomError;
use crate::odelocal::OdeError;
use crate::series::SeriesError;

/// Any domain error from the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Hypergeom(#[from] HypergeomError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Grade(#[from] GradeError),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Expr(e) => match e {
                ExprError::Syntax { .. } => "SyntaxError",
                ExprError::Arity { .. } => "ArityError",
                ExprError::ArityMismatch { .. } => "ArityMismatch",
                ExprError::InvalidWindow(_) => "InvalidWindow",
                ExprError::DenominatorVanishes(_) => "DenominatorVanishes",
                ExprError::CapNegative => "CapNegative",
                ExprError::NotLaurentPolynomial => "NotLaurentPolynomial",
                ExprError::TruncationUnreachable => "TruncationUnreachable",
            },
            Error::Series(e) => match e {
                SeriesError::ArityMismatch { .. } => "ArityMismatch",
                SeriesError::NotPowerSeries => "NotPowerSeries",
                SeriesError::WindowTooSmall { .. } => "WindowTooSmall",
                SeriesError::ResidueOutOfRange { .. } => "ResidueOutOfRange",
                SeriesError::EmptyList => "EmptyList",
                SeriesError::ArityTooSmall(_) => "ArityTooSmall",
                SeriesError::SeedInconsistent { .. } => "SeedInconsistent",
                SeriesError::ContinuationSingular { .. } => "ContinuationSingular",
                SeriesError::Invalid(_) => "InvalidInput",
                SeriesError::Expr(e) => Error::Expr(e.clone()).kind(),
            },
            Error::Hypergeom(e) => match e {
                HypergeomError::InvalidParams(_) => "InvalidParams",
                HypergeomError::PochhammerZeroDenominator { .. } => "PochhammerZeroDenominator",
            },
            Error::Ode(e) => match e {
                OdeError::ZeroOperator => "ZeroOperator",
                OdeError::WindowTooSmall { .. } => "WindowTooSmall",
                OdeError::IrregularSingular => "IrregularSingular",
                OdeError::IrrationalExponent(_) => "IrrationalExponent",
                OdeError::Invalid(_) => "InvalidInput",
            },
            Error::Grade(e) => match e {
                GradeError::GuessFailed { .. } => "GuessFailed",
                GradeError::WitnessFailed { .. } => "WitnessFailed",
                GradeError::InconsistentBounds { .. } => "InconsistentBounds",
                GradeError::WindowTooSmall { .. } => "WindowTooSmall",
                GradeError::InvalidWitness(_) => "InvalidWitness",
                GradeError::Expr(e) => Error::Expr(e.clone()).kind(),
                GradeError::Series(e) => Error::Series(e.clone()).kind(),
                GradeError::Ode(e) => Error::Ode(e.clone()).kind(),
            },
        }
    }
}
