use thiserror::Error;

/// Everything that can go wrong outside of plain programming errors.
///
/// Dimension and modulus misuse (mixing ring degrees, `m < 2`) are bugs in
/// the caller and panic instead; see the individual operation docs.
#[derive(Debug, Error)]
pub enum NnruError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("element is not invertible modulo {modulus}")]
    NotInvertible { modulus: i64 },

    #[error("key generation failed: retry limit {retries} exhausted while sampling {what}")]
    KeygenFailure { what: &'static str, retries: u32 },

    #[error("plaintext coefficient {value} outside the centered mod-{p} range")]
    PlaintextRange { value: i64, p: i64 },

    #[error("message encoding requires p = 3, got p = {p}")]
    UnsupportedEncoding { p: i64 },

    #[error("malformed message block: {0}")]
    DecodeError(String),

    #[error("malformed key or ciphertext bytes: {0}")]
    FormatError(String),

    #[error("parameter mismatch between key and ciphertext: {0}")]
    ParamsMismatch(String),

    #[error("search space of {space} candidates exceeds budget {budget}")]
    SearchSpaceTooLarge { space: String, budget: u64 },

    #[error("attack inapplicable: {0}")]
    AttackInapplicable(String),
}

pub type Result<T> = std::result::Result<T, NnruError>;
