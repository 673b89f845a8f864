//! Combinatorial security estimates.
//!
//! The search-space sizes are exact integer counts of the sampling spaces
//! an attacker must cover: a single ternary polynomial with d coefficients
//! of each sign contributes n!/((n−2d)!·(d!)²) candidates, and a key pair
//! exposes 2k² such polynomials. Counts use the uniform-weight model in
//! which every entry carries the headline weight; the actual sampling
//! promotes diagonal entries by one, so these figures are a slightly
//! conservative floor for the real space. The meet-in-the-middle cost is
//! the floor square root of the exhaustive count.

use num_bigint::BigUint;

use crate::error::{NnruError, Result};
use crate::params::Params;

/// Number of ternary polynomials of length n with exactly d1 coefficients
/// equal to +1 and d2 equal to −1, as the exact integer
/// n!/((n−d1−d2)!·d1!·d2!).
pub fn candidate_polynomials(n: usize, d1: usize, d2: usize) -> Result<BigUint> {
    if d1 + d2 > n {
        return Err(NnruError::InvalidParams(format!(
            "weights d1 = {d1}, d2 = {d2} exceed length n = {n}"
        )));
    }
    let count = factorial(n) / (factorial(n - d1 - d2) * factorial(d1) * factorial(d2));
    Ok(count)
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u8), |acc, i| acc * i)
}

/// Exhaustive key-search space: the per-polynomial count for weight d_f
/// raised to the 2k² polynomials across f and g.
pub fn key_security(params: &Params) -> Result<BigUint> {
    params.validate()?;
    let per_poly = candidate_polynomials(params.n, params.d_f, params.d_f)?;
    Ok(per_poly.pow(2 * (params.k * params.k) as u32))
}

/// Exhaustive message-recovery space: the blinding matrix φ contributes
/// k² polynomials of weight d_φ, squared for the two-sided structure.
pub fn message_security(params: &Params) -> Result<BigUint> {
    params.validate()?;
    let per_poly = candidate_polynomials(params.n, params.d_phi, params.d_phi)?;
    Ok(per_poly.pow(2 * (params.k * params.k) as u32))
}

/// Meet-in-the-middle cost: floor square root of the exhaustive count.
pub fn mitm_cost(count: &BigUint) -> BigUint {
    count.sqrt()
}

#[derive(Clone, Debug)]
pub struct SecurityReport {
    pub params: Params,
    pub key_count: BigUint,
    pub key_mitm: BigUint,
    pub message_count: BigUint,
    pub message_mitm: BigUint,
}

pub fn security_report(params: &Params) -> Result<SecurityReport> {
    let key_count = key_security(params)?;
    let message_count = message_security(params)?;
    let key_mitm = mitm_cost(&key_count);
    let message_mitm = mitm_cost(&message_count);
    Ok(SecurityReport {
        params: *params,
        key_count,
        key_mitm,
        message_count,
        message_mitm,
    })
}

/// Brute-force oracle for the per-polynomial count: walks all 3^n ternary
/// vectors and counts those with exactly d1 plus-ones and d2 minus-ones.
/// Only intended for tiny n; rejects n > 12.
pub fn enumerate_ternary_count(n: usize, d1: usize, d2: usize) -> Result<u64> {
    if n > 12 {
        return Err(NnruError::InvalidParams(format!(
            "enumeration oracle supports n ≤ 12, got {n}"
        )));
    }
    let mut count = 0u64;
    let total = 3u64.pow(n as u32);
    for mut code in 0..total {
        let mut ones = 0usize;
        let mut negs = 0usize;
        for _ in 0..n {
            match code % 3 {
                1 => ones += 1,
                2 => negs += 1,
                _ => {}
            }
            code /= 3;
        }
        if ones == d1 && negs == d2 {
            count += 1;
        }
    }
    Ok(count)
}
