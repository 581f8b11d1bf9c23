use thiserror::Error;

/// Whether a failure came from bad input or from a broken internal invariant.
///
/// The CLI maps the first to exit code 1 and the second to exit code 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Invariant,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported discriminant {0}: expected one of -1, -2, -3, -7, -11")]
    UnsupportedDiscriminant(i64),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("entry is not integral over the base order: {0}")]
    NotIntegral(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial vanishes at 0")]
    RootAtZero,
    #[error("zero passed where a nonzero element is required")]
    ZeroDivisor,
    #[error("columns are linearly dependent over the fraction field")]
    DependentColumns,
    #[error("matrix is singular")]
    Singular,
    #[error("not an isogeny: {0}")]
    NotAnIsogeny(String),
    #[error("hermitian form is degenerate")]
    DegenerateH,
    #[error("reference form is not positive definite")]
    NonPositiveReference,
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("element is not symplectic")]
    NotSymplectic,
    #[error("projection to the source is not an isogeny")]
    DegenerateProjection,
    #[error("L x M does not surject onto the middle space")]
    NotSurjectiveOntoMiddle,
    #[error("presentation does not project to the given element: {0}")]
    PresentationMismatch(String),
    #[error("correspondence is degenerate: {0}")]
    Degenerate(String),
    #[error("kernel order {0} is not a perfect square")]
    NonSquareKernelOrder(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("no shear n <= {0} makes every item nondegenerate")]
    ShearSearchExhausted(u32),
    #[error("b-block singular: pair is outside U0 x U0 with product in U0")]
    NotInU0,
    #[error("no reduction found within shear bound {0}")]
    ReductionFailed(u32),
    #[error("value is not an integer square: {0}")]
    NotSquare(String),
    #[error("two computations disagree: {0}")]
    RoutesDisagree(String),
    #[error("ring has no complex multiplication")]
    NotCM,
    #[error("determinant {0} is not of the form conj(a)/a")]
    NoSolution(String),
    #[error("presentation has q = 0")]
    DegeneratePresentation,
    #[error("invalid finite group: {0}")]
    InvalidGroup(String),
    #[error("pairing is not a skew pairing: {0}")]
    NotSkew(String),
    #[error("pairing is degenerate: {0}")]
    DegeneratePairing(String),
    #[error("pairing is not perfect: {0}")]
    PairingNotPerfect(String),
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("subgroup search exhausted bound {0}")]
    SearchExhausted(usize),
    #[error("cocycle restricted to the subgroup is not a coboundary")]
    LiftObstructed,
    #[error("matrices do not form a projective representation: {0}")]
    NotARepresentation(String),
    #[error("subgroup is not central in the chosen position")]
    NotCentral,
    #[error("quotient is not a Heisenberg group")]
    QuotientNotHeisenberg,
    #[error("lagrangians are not transversal")]
    NotTransversal,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            NotHermitian
            | NonSquareKernelOrder(_)
            | RoutesDisagree(_)
            | NotSquare(_)
            | NoSolution(_)
            | PairingNotPerfect(_)
            | LiftObstructed
            | NotARepresentation(_)
            | Invariant(_) => ErrorClass::Invariant,
            _ => ErrorClass::Validation,
        }
    }

    /// Stable machine-readable code used in CLI output.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            UnsupportedDiscriminant(_) => "unsupported_discriminant",
            RingMismatch(_) => "ring_mismatch",
            Shape(_) => "shape",
            NotIntegral(_) => "not_integral",
            ZeroPolynomial => "zero_polynomial",
            RootAtZero => "root_at_zero",
            ZeroDivisor => "zero_divisor",
            DependentColumns => "dependent_columns",
            Singular => "singular",
            NotAnIsogeny(_) => "not_an_isogeny",
            DegenerateH => "degenerate_h",
            NonPositiveReference => "non_positive_reference",
            NotHermitian => "not_hermitian",
            NotSymplectic => "not_symplectic",
            DegenerateProjection => "degenerate_projection",
            NotSurjectiveOntoMiddle => "not_surjective_onto_middle",
            PresentationMismatch(_) => "presentation_mismatch",
            Degenerate(_) => "degenerate",
            NonSquareKernelOrder(_) => "non_square_kernel_order",
            EmptyInput(_) => "empty_input",
            ShearSearchExhausted(_) => "shear_search_exhausted",
            NotInU0 => "not_in_u0",
            ReductionFailed(_) => "reduction_failed",
            NotSquare(_) => "not_integral",
            RoutesDisagree(_) => "routes_disagree",
            NotCM => "not_cm",
            NoSolution(_) => "no_solution",
            DegeneratePresentation => "degenerate_presentation",
            InvalidGroup(_) => "invalid_group",
            NotSkew(_) => "not_skew",
            DegeneratePairing(_) => "degenerate_pairing",
            PairingNotPerfect(_) => "pairing_not_perfect",
            NotIsotropic => "not_isotropic",
            SearchExhausted(_) => "search_exhausted",
            LiftObstructed => "lift_obstructed",
            NotARepresentation(_) => "not_a_representation",
            NotCentral => "not_central",
            QuotientNotHeisenberg => "quotient_not_heisenberg",
            NotTransversal => "not_transversal",
            Invariant(_) => "invariant_violation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
