//! Sampling of ternary ring elements, matrices, and plaintexts.
//!
//! The secret matrices (f, g, c, w) give their diagonal entries weight
//! (d+1, d) instead of (d, d). A matrix whose every entry has coefficient
//! sum zero evaluates to the zero matrix at X = 1, and since X − 1 divides
//! X^n − 1 modulo everything, such a matrix is invertible modulo nothing.
//! The extra diagonal +1 makes the X = 1 evaluation the identity matrix,
//! which removes that obstruction; rejection sampling handles the rest.

use crate::error::{NnruError, Result};
use crate::matrix::MatrixElement;
use crate::params::Params;
use crate::ring::RingElement;
use crate::scheme::Plaintext;
use rand::Rng;

/// A ternary polynomial with exactly `d1` coefficients +1 and `d2`
/// coefficients −1, positions chosen uniformly without replacement.
pub fn sample_ternary(n: usize, d1: usize, d2: usize, rng: &mut impl Rng) -> Result<RingElement> {
    if d1 + d2 > n {
        return Err(NnruError::InvalidParams(format!(
            "cannot place {d1} ones and {d2} minus-ones in {n} coefficients"
        )));
    }
    let positions = rand::seq::index::sample(rng, n, d1 + d2);
    let mut coeffs = vec![0i64; n];
    for (slot, pos) in positions.iter().enumerate() {
        coeffs[pos] = if slot < d1 { 1 } else { -1 };
    }
    Ok(RingElement::from_coeffs(coeffs))
}

/// A k×k matrix with independent L(d, d) entries (used for the blinding
/// value φ).
pub fn sample_matrix(params: &Params, d: usize, rng: &mut impl Rng) -> Result<MatrixElement> {
    let mut entries = Vec::with_capacity(params.k * params.k);
    for _ in 0..params.k * params.k {
        entries.push(sample_ternary(params.n, d, d, rng)?);
    }
    Ok(MatrixElement::from_entries(params.k, params.n, entries))
}

/// A secret-shaped matrix: L(d+1, d) on the diagonal, L(d, d) off it, so
/// that the evaluation at X = 1 is the identity matrix.
pub fn sample_secret_matrix(
    params: &Params,
    d: usize,
    rng: &mut impl Rng,
) -> Result<MatrixElement> {
    let mut entries = Vec::with_capacity(params.k * params.k);
    for i in 0..params.k {
        for j in 0..params.k {
            let d1 = if i == j { d + 1 } else { d };
            entries.push(sample_ternary(params.n, d1, d, rng)?);
        }
    }
    Ok(MatrixElement::from_entries(params.k, params.n, entries))
}

/// A uniform plaintext: every coefficient independent uniform in
/// [−(p−1)/2, (p−1)/2].
pub fn sample_plaintext(params: &Params, rng: &mut impl Rng) -> Plaintext {
    let half = (params.p - 1) / 2;
    let m = MatrixElement::from_fn(params.k, params.n, |_, _| {
        RingElement::from_coeffs((0..params.n).map(|_| rng.random_range(-half..=half)).collect())
    });
    Plaintext { m }
}
