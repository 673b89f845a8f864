//! NNRU: a noncommutative public-key cryptosystem over k×k matrices of
//! convolution polynomials, with a classic commutative baseline and an
//! analysis suite covering norm estimates, failure rates, security counts,
//! attack experiments, and speed comparisons.
//!
//! Research code. No padding, no ciphertext integrity, no side-channel
//! hardening — never use it to protect real data.

pub mod analysis;
pub mod error;
pub mod ring;
pub mod matrix;
pub mod rng;
pub mod params;
pub mod sample;
pub mod scheme;
pub mod encoding;
pub mod serial;
pub mod ntru;

pub use error::{NnruError, Result};
pub use matrix::MatrixElement;
pub use params::{NtruParams, Params, Preset};
pub use ring::RingElement;
pub use rng::Streams;
pub use scheme::{Ciphertext, Plaintext, PrivateKey, PublicKey};
