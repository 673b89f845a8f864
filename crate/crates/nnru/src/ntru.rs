//! Classic commutative baseline scheme at matched block size N = nk².
//!
//! Same convolution primitives, k = 1 structure: h = F_q·g (mod q), with
//! the p factor applied at encryption (e = p·φ·h + m), so the two systems
//! differ only in the algebra. Used by the benchmark comparison; the CLI
//! never serializes these keys.

use crate::error::{NnruError, Result};
use crate::params::{NtruParams, RETRY_LIMIT};
use crate::ring::{
    poly_inverse_mod_2e, poly_inverse_mod_prime, reduce_centered, reduce_mod, ring_add, ring_mul,
    RingElement,
};
use crate::sample::sample_ternary;
use rand::Rng;

/// Baseline key pair. f and g are ternary; f is kept with its stored mod-p
/// inverse, g only for identity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NtruKeyPair {
    pub params: NtruParams,
    pub h: RingElement,
    pub f: RingElement,
    pub f_p: RingElement,
    pub g: RingElement,
}

/// Samples f from L(d+1, d) until invertible mod q and mod p, g from
/// L(d, d), and publishes h = F_q·g (mod q).
///
/// f takes the extra +1 for the same reason the matrix scheme's secrets do:
/// a zero coefficient sum kills invertibility outright.
pub fn ntru_keygen(params: &NtruParams, rng: &mut impl Rng) -> Result<NtruKeyPair> {
    params.validate()?;
    if params.d == 0 {
        return Err(NnruError::KeygenFailure {
            what: "f (weight 0)",
            retries: 0,
        });
    }
    let e = params.q_exponent();
    for _ in 0..RETRY_LIMIT {
        let f = sample_ternary(params.n, params.d + 1, params.d, rng)?;
        let Ok(f_q) = poly_inverse_mod_2e(&f, e) else {
            continue;
        };
        let Ok(f_p) = poly_inverse_mod_prime(&f, params.p) else {
            continue;
        };
        let g = sample_ternary(params.n, params.d, params.d, rng)?;
        let h = reduce_mod(&ring_mul(&f_q, &g), params.q);
        debug_assert_eq!(
            reduce_mod(&ring_mul(&f, &h), params.q),
            reduce_mod(&g, params.q)
        );
        return Ok(NtruKeyPair {
            params: *params,
            h,
            f,
            f_p,
            g,
        });
    }
    Err(NnruError::KeygenFailure {
        what: "f (invertible mod q and mod p)",
        retries: RETRY_LIMIT,
    })
}

/// e = p·φ·h + m (mod q) with a caller-supplied blinding polynomial.
pub fn ntru_encrypt_with_phi(
    params: &NtruParams,
    h: &RingElement,
    m: &RingElement,
    phi: &RingElement,
) -> Result<RingElement> {
    let half = (params.p - 1) / 2;
    for &value in &m.coeffs {
        if value < -half || value > half {
            return Err(NnruError::PlaintextRange {
                value,
                p: params.p,
            });
        }
    }
    Ok(reduce_mod(
        &ring_add(&ring_mul(phi, h).scale(params.p), m),
        params.q,
    ))
}

/// e = p·φ·h + m (mod q), φ fresh from L(d, d).
pub fn ntru_encrypt(
    params: &NtruParams,
    h: &RingElement,
    m: &RingElement,
    rng: &mut impl Rng,
) -> Result<RingElement> {
    let phi = sample_ternary(params.n, params.d, params.d, rng)?;
    ntru_encrypt_with_phi(params, h, m, &phi)
}

/// a = center(f·e mod q); m = center(F_p·a mod p).
pub fn ntru_decrypt(key: &NtruKeyPair, e: &RingElement) -> RingElement {
    let a = reduce_centered(&ring_mul(&key.f, e), key.params.q);
    reduce_centered(&ring_mul(&key.f_p, &a), key.params.p)
}
