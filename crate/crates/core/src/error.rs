use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by null split-complex value {0}+{1}k'")]
    NullDivisor(f64, f64),
    #[error("value out of floating range: {0}")]
    OutOfRange(String),
    #[error("{0}+{1}k' lies outside the right wedge re > |im|")]
    OutsideWedge(f64, f64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("operation does not support a nonzero winding term")]
    WindingNotSupported,
    #[error("realness violation: {0}")]
    RealnessViolation(String),
    #[error("curve is not lightlike: {0}")]
    NotLightlikeCurve(String),
    #[error("vector field is not lightlike: {0}")]
    NotLightlikeField(String),
    #[error("curve tangent and field are not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("data is totally degenerate: metric determinant vanishes on the whole sample grid")]
    TotallyDegenerate,
    #[error("radius {0} out of range (must exceed 1)")]
    RadiusOutOfRange(f64),
    #[error("curve mean is incompatible with the target point: {0}")]
    InfeasibleMean(String),
    #[error("curve means differ: {0}")]
    MeanMismatch(String),
    #[error("curve windings differ")]
    WindingMismatch,
    #[error("bad search range: {0}")]
    BadRange(String),
    #[error("curve is neither spacelike nor timelike (classified {0})")]
    NotSpaceOrTimelike(String),
    #[error("grid outside the surface domain: {0}")]
    GridOutsideDomain(String),
    #[error("invalid input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable variant name, used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NullDivisor(..) => "NullDivisor",
            Error::OutOfRange(_) => "OutOfRange",
            Error::OutsideWedge(..) => "OutsideWedge",
            Error::DomainError(_) => "DomainError",
            Error::WindingNotSupported => "WindingNotSupported",
            Error::RealnessViolation(_) => "RealnessViolation",
            Error::NotLightlikeCurve(_) => "NotLightlikeCurve",
            Error::NotLightlikeField(_) => "NotLightlikeField",
            Error::NotOrthogonal(_) => "NotOrthogonal",
            Error::TotallyDegenerate => "TotallyDegenerate",
            Error::RadiusOutOfRange(_) => "RadiusOutOfRange",
            Error::InfeasibleMean(_) => "InfeasibleMean",
            Error::MeanMismatch(_) => "MeanMismatch",
            Error::WindingMismatch => "WindingMismatch",
            Error::BadRange(_) => "BadRange",
            Error::NotSpaceOrTimelike(_) => "NotSpaceOrTimelike",
            Error::GridOutsideDomain(_) => "GridOutsideDomain",
            Error::Format(_) => "Format",
            Error::Io(_) => "IoError",
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TotallyDegenerate => 4,
            _ => 2,
        }
    }
}
