use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {modulus:?} is reducible over GF({p})")]
    Reducible { p: u32, modulus: Vec<u32> },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field order {0} exceeds the supported maximum 3^10")]
    FieldTooLarge(u64),
    #[error("shape mismatch: {0} vs {1}")]
    ShapeMismatch(usize, usize),
    #[error("operation needs odd characteristic")]
    OddCharacteristicRequired,
    #[error("operation needs characteristic 2, got {0}")]
    EvenCharacteristicRequired(u32),
    #[error("element is not in the Teichmüller set")]
    NotTeichmuller,
    #[error("mixed root orders {0} and {1}")]
    MixedRootOrder(u32, u32),
    #[error("unsupported root order {0}")]
    UnsupportedRootOrder(u32),
    #[error("integer overflow in cyclotomic arithmetic")]
    Overflow,
    #[error("parameter constraint violated: {0}")]
    Parameter(String),
    #[error("multiplication is only available as a table, a coefficient form is needed")]
    NoCoefficientForm,
    #[error("singular linear map: {0}")]
    SingularLinearMap(String),
    #[error("not symplectic: {0}")]
    NotSymplectic(String),
    #[error("not totally isotropic: {0}")]
    NotIsotropic(String),
    #[error("not pseudo-planar: {0}")]
    NotPseudoPlanar(String),
    #[error("construction paths disagree: {0}")]
    ConstructionMismatch(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
