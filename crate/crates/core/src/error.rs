use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    ShapeMismatch(&'static str),
    NotHermitian { asymmetry: f64 },
    NotPsd { min_eig: f64 },
    NotEffect,
    NotProjection,
    NotSubalgebra(&'static str),
    NotSummable { excess: f64 },
    NotPositive,
    TargetNotFactor,
    NotADilationTriple { residual: f64 },
    NotIsomorphic(&'static str),
    UniversalPropertyViolated { residual: f64 },
    NotPure,
    NotSharp,
    NotDefined,
    NotNormalized,
    InvalidInput(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch(what) => write!(f, "shape mismatch: {what}"),
            Error::NotHermitian { asymmetry } => {
                write!(f, "matrix is not Hermitian (max |A - A*| = {asymmetry:e})")
            }
            Error::NotPsd { min_eig } => {
                write!(f, "matrix is not positive semidefinite (min eigenvalue {min_eig:e})")
            }
            Error::NotEffect => f.write_str("element is not an effect"),
            Error::NotProjection => f.write_str("element is not a projection"),
            Error::NotSubalgebra(why) => write!(f, "not a *-subalgebra: {why}"),
            Error::NotSummable { excess } => {
                write!(f, "maps are not summable (f(1)+g(1) exceeds 1 by {excess:e})")
            }
            Error::NotPositive => f.write_str("functional is not positive"),
            Error::TargetNotFactor => f.write_str("target algebra has more than one block"),
            Error::NotADilationTriple { residual } => {
                write!(f, "triple does not dilate the map (residual {residual:e})")
            }
            Error::NotIsomorphic(why) => write!(f, "dilations are not isomorphic: {why}"),
            Error::UniversalPropertyViolated { residual } => {
                write!(f, "universal property violated (residual {residual:e})")
            }
            Error::NotPure => f.write_str("map is not pure"),
            Error::NotSharp => f.write_str("predicate is not sharp"),
            Error::NotDefined => f.write_str("operation not defined on these arguments"),
            Error::NotNormalized => f.write_str("coefficients do not sum to one"),
            Error::InvalidInput(why) => write!(f, "invalid input: {why}"),
        }
    }
}

impl core::error::Error for Error {}
