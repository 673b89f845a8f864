//! Byte-stream ↔ plaintext-block encoding (p = 3 only).
//!
//! Layout: the message is prefixed with its 32-bit little-endian byte
//! count, then every byte expands to six base-3 digits, least significant
//! digit first, with digit 2 mapped to coefficient −1. Digits fill matrix
//! entries in row-major order, coefficients in ascending degree; the final
//! block is zero-padded. Each block carries floor(nk²/6) whole bytes.

use crate::error::{NnruError, Result};
use crate::matrix::MatrixElement;
use crate::params::Params;
use crate::ring::RingElement;
use crate::scheme::Plaintext;

/// Message bytes per plaintext block: floor(nk²/6).
pub fn block_capacity(params: &Params) -> usize {
    params.coeff_count() / 6
}

fn byte_to_trits(byte: u8) -> [i64; 6] {
    let mut rest = byte as u16;
    let mut trits = [0i64; 6];
    for t in trits.iter_mut() {
        let digit = rest % 3;
        rest /= 3;
        *t = match digit {
            0 => 0,
            1 => 1,
            _ => -1,
        };
    }
    trits
}

fn trits_to_byte(trits: &[i64]) -> Result<u8> {
    let mut value = 0u32;
    let mut base = 1u32;
    for &t in trits {
        let digit = match t {
            0 => 0u32,
            1 => 1,
            -1 => 2,
            other => {
                return Err(NnruError::DecodeError(format!(
                    "coefficient {other} is not a centered trit"
                )))
            }
        };
        value += digit * base;
        base *= 3;
    }
    u8::try_from(value)
        .map_err(|_| NnruError::DecodeError(format!("trit group decodes to {value} > 255")))
}

fn check_params(params: &Params) -> Result<usize> {
    if params.p != 3 {
        return Err(NnruError::UnsupportedEncoding { p: params.p });
    }
    let capacity = block_capacity(params);
    if capacity == 0 {
        return Err(NnruError::InvalidParams(format!(
            "block holds only {} coefficients, fewer than one byte",
            params.coeff_count()
        )));
    }
    Ok(capacity)
}

/// Splits a byte message into plaintext blocks.
pub fn encode_message(message: &[u8], params: &Params) -> Result<Vec<Plaintext>> {
    let capacity = check_params(params)?;
    let length = u32::try_from(message.len()).map_err(|_| {
        NnruError::InvalidParams(format!("message of {} bytes exceeds 2³²−1", message.len()))
    })?;
    let mut stream = Vec::with_capacity(4 + message.len());
    stream.extend_from_slice(&length.to_le_bytes());
    stream.extend_from_slice(message);

    let mut blocks = Vec::new();
    for chunk in stream.chunks(capacity) {
        let mut coeffs = Vec::with_capacity(params.coeff_count());
        for &byte in chunk {
            coeffs.extend_from_slice(&byte_to_trits(byte));
        }
        coeffs.resize(params.coeff_count(), 0);
        let entries = coeffs
            .chunks(params.n)
            .map(|c| RingElement::from_coeffs(c.to_vec()))
            .collect();
        blocks.push(Plaintext {
            m: MatrixElement::from_entries(params.k, params.n, entries),
        });
    }
    Ok(blocks)
}

/// Inverse of [`encode_message`]; discards the padding via the length
/// prefix.
pub fn decode_message(blocks: &[Plaintext], params: &Params) -> Result<Vec<u8>> {
    let capacity = check_params(params)?;
    let mut bytes = Vec::with_capacity(blocks.len() * capacity);
    for block in blocks {
        let coeffs: Vec<i64> = block.m.coeffs().collect();
        if coeffs.len() != params.coeff_count() {
            return Err(NnruError::DecodeError(format!(
                "block has {} coefficients, parameters say {}",
                coeffs.len(),
                params.coeff_count()
            )));
        }
        for group in coeffs.chunks_exact(6).take(capacity) {
            bytes.push(trits_to_byte(group)?);
        }
    }
    if bytes.len() < 4 {
        return Err(NnruError::DecodeError(
            "no room for the length prefix".into(),
        ));
    }
    let length = u32::from_le_bytes(bytes[..4].try_into().unwrap()) as usize;
    if bytes.len() - 4 < length {
        return Err(NnruError::DecodeError(format!(
            "length prefix claims {length} bytes but blocks carry {}",
            bytes.len() - 4
        )));
    }
    bytes.drain(..4);
    bytes.truncate(length);
    Ok(bytes)
}
