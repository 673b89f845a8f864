//! The NNRU cryptosystem: key generation, encryption, decryption.
//!
//! Keys: sample secret ternary matrices f, g, c, w; publish
//! h ≡ w·G_q (mod q) and H ≡ F_q·c (mod q). Encrypt as
//! e ≡ p·φ·h + H·m (mod q) with a fresh blinding matrix φ per message.
//! Decryption computes A ≡ f·e·g (mod q, centered); sandwiching by f and g
//! turns the ciphertext into the exact integer matrix B = p·f·φ·w + c·m·g
//! whenever B's coefficients fit in the centered mod-q window, after which
//! B mod p kills the p-multiple and C_p·B·G_p (mod p) peels c and g off m.
//!
//! There is no ciphertext integrity: decrypting a mangled or wrong-key
//! ciphertext silently yields a range-valid but unrelated plaintext. Do not
//! use any of this for real secrets; it exists to study the construction.

use crate::error::{NnruError, Result};
use crate::matrix::{mat_add, mat_inverse_mod_2e, mat_inverse_mod_prime, mat_mul, mat_reduce, MatrixElement};
use crate::params::{Params, RETRY_LIMIT};
use crate::sample::{sample_matrix, sample_secret_matrix};
use rand::Rng;

/// Published pair (h, H), coefficients in [0, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub h: MatrixElement,
    /// The matrix H = F_q·c (mod q).
    pub big_h: MatrixElement,
    pub params: Params,
}

/// Retained secrets: the ternary f, g, c plus the stored mod-p inverses
/// C_p and G_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivateKey {
    pub f: MatrixElement,
    pub g: MatrixElement,
    pub c: MatrixElement,
    pub c_p: MatrixElement,
    pub g_p: MatrixElement,
    pub params: Params,
}

/// A message matrix with centered mod-p coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plaintext {
    pub m: MatrixElement,
}

impl Plaintext {
    /// Checks every coefficient against the centered mod-p window.
    pub fn check_range(&self, p: i64) -> Result<()> {
        let half = (p - 1) / 2;
        for value in self.m.coeffs() {
            if value < -half || value > half {
                return Err(NnruError::PlaintextRange { value, p });
            }
        }
        Ok(())
    }
}

/// An encrypted matrix, coefficients in [0, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub e: MatrixElement,
    pub params: Params,
}

/// Everything keygen produced, including the w that neither key needs but
/// the failure analysis does (B's first term is p·f·φ·w).
#[derive(Clone, Debug)]
pub struct KeygenTranscript {
    pub public: PublicKey,
    pub private: PrivateKey,
    pub w: MatrixElement,
}

/// Generates a key pair. See [`keygen_with_transcript`] for the variant
/// that also returns w.
pub fn keygen(params: &Params, rng: &mut impl Rng) -> Result<(PublicKey, PrivateKey)> {
    let t = keygen_with_transcript(params, rng)?;
    Ok((t.public, t.private))
}

/// Key generation with rejection sampling: f until invertible mod q, g
/// until invertible mod q and mod p, c until invertible mod p; w is
/// sampled once with no invertibility requirement. Each loop gives up
/// after [`RETRY_LIMIT`] attempts.
pub fn keygen_with_transcript(params: &Params, rng: &mut impl Rng) -> Result<KeygenTranscript> {
    params.validate()?;
    if params.d_f == 0 || params.d_c == 0 {
        // Weight-zero secrets have no off-diagonal mass at all and exist
        // only as degenerate near-identity matrices; treat as a parameter
        // failure rather than generating cryptographically empty keys.
        return Err(NnruError::KeygenFailure {
            what: "secret matrix with weight 0",
            retries: 0,
        });
    }
    let e = params.q_exponent();

    let mut f = None;
    for _ in 0..RETRY_LIMIT {
        let candidate = sample_secret_matrix(params, params.d_f, rng)?;
        if let Ok(f_q) = mat_inverse_mod_2e(&candidate, e) {
            f = Some((candidate, f_q));
            break;
        }
    }
    let Some((f, f_q)) = f else {
        return Err(NnruError::KeygenFailure {
            what: "f (invertible mod q)",
            retries: RETRY_LIMIT,
        });
    };

    let mut g = None;
    for _ in 0..RETRY_LIMIT {
        let candidate = sample_secret_matrix(params, params.d_f, rng)?;
        let Ok(g_q) = mat_inverse_mod_2e(&candidate, e) else {
            continue;
        };
        let Ok(g_p) = mat_inverse_mod_prime(&candidate, params.p) else {
            continue;
        };
        g = Some((candidate, g_q, g_p));
        break;
    }
    let Some((g, g_q, g_p)) = g else {
        return Err(NnruError::KeygenFailure {
            what: "g (invertible mod q and mod p)",
            retries: RETRY_LIMIT,
        });
    };

    let mut c = None;
    for _ in 0..RETRY_LIMIT {
        let candidate = sample_secret_matrix(params, params.d_c, rng)?;
        if let Ok(c_p) = mat_inverse_mod_prime(&candidate, params.p) {
            c = Some((candidate, c_p));
            break;
        }
    }
    let Some((c, c_p)) = c else {
        return Err(NnruError::KeygenFailure {
            what: "c (invertible mod p)",
            retries: RETRY_LIMIT,
        });
    };

    let w = sample_secret_matrix(params, params.d_w, rng)?;

    let h = mat_reduce(&mat_mul(&w, &g_q), params.q, false);
    let big_h = mat_reduce(&mat_mul(&f_q, &c), params.q, false);

    debug_assert_eq!(
        mat_reduce(&mat_mul(&h, &g), params.q, false),
        mat_reduce(&w, params.q, false)
    );
    debug_assert_eq!(
        mat_reduce(&mat_mul(&f, &big_h), params.q, false),
        mat_reduce(&c, params.q, false)
    );

    Ok(KeygenTranscript {
        public: PublicKey {
            h,
            big_h,
            params: *params,
        },
        private: PrivateKey {
            f,
            g,
            c,
            c_p,
            g_p,
            params: *params,
        },
        w,
    })
}

/// Samples a fresh blinding matrix φ from L(d_φ, d_φ) entries.
pub fn sample_phi(params: &Params, rng: &mut impl Rng) -> Result<MatrixElement> {
    sample_matrix(params, params.d_phi, rng)
}

/// Encrypts with a caller-supplied blinding matrix. Exposed for tests and
/// for the multiple-transmission harness; normal callers want [`encrypt`].
pub fn encrypt_with_phi(
    public: &PublicKey,
    m: &Plaintext,
    phi: &MatrixElement,
) -> Result<Ciphertext> {
    let params = &public.params;
    m.check_range(params.p)?;
    let blinded = mat_mul(phi, &public.h).scale(params.p);
    let masked = mat_mul(&public.big_h, &m.m);
    Ok(Ciphertext {
        e: mat_reduce(&mat_add(&blinded, &masked), params.q, false),
        params: *params,
    })
}

/// e ≡ p·φ·h + H·m (mod q), φ fresh per call.
pub fn encrypt(public: &PublicKey, m: &Plaintext, rng: &mut impl Rng) -> Result<Ciphertext> {
    let phi = sample_phi(&public.params, rng)?;
    encrypt_with_phi(public, m, &phi)
}

/// A ≡ f·e·g (mod q, centered); B ≡ A (mod p); C ≡ C_p·B·G_p (mod p,
/// centered). Produces garbage (not an error) when B's exact coefficients
/// overflow the centered window or the ciphertext is unrelated to the key.
pub fn decrypt(private: &PrivateKey, ciphertext: &Ciphertext) -> Result<Plaintext> {
    let params = &private.params;
    if ciphertext.params != *params {
        return Err(NnruError::ParamsMismatch(format!(
            "key has (n,k,p,q) = ({},{},{},{}), ciphertext has ({},{},{},{})",
            params.n,
            params.k,
            params.p,
            params.q,
            ciphertext.params.n,
            ciphertext.params.k,
            ciphertext.params.p,
            ciphertext.params.q
        )));
    }
    let a = mat_reduce(
        &mat_mul(&mat_mul(&private.f, &ciphertext.e), &private.g),
        params.q,
        true,
    );
    let b = mat_reduce(&a, params.p, false);
    let c = mat_reduce(
        &mat_mul(&mat_mul(&private.c_p, &b), &private.g_p),
        params.p,
        true,
    );
    Ok(Plaintext { m: c })
}

/// The exact integer matrix B = p·f·φ·w + c·m·g whose width decides
/// decryption success. Used by the failure analysis, which knows φ and w.
pub fn exact_b(
    private: &PrivateKey,
    w: &MatrixElement,
    m: &Plaintext,
    phi: &MatrixElement,
) -> MatrixElement {
    let first = mat_mul(&mat_mul(&private.f, phi), w).scale(private.params.p);
    let second = mat_mul(&mat_mul(&private.c, &m.m), &private.g);
    mat_add(&first, &second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{mat_sub, mat_width_inf};
    use crate::params::Preset;
    use crate::rng::Streams;
    use crate::sample::sample_plaintext;

    fn toy_keys(seed: u64) -> KeygenTranscript {
        let params = Preset::Toy.params();
        keygen_with_transcript(&params, &mut Streams::new(seed).stream("keygen", 0)).unwrap()
    }

    #[test]
    fn keygen_identities_hold() {
        let params = Preset::Toy.params();
        for seed in 0..10 {
            let t = toy_keys(seed);
            let hg = mat_reduce(&mat_mul(&t.public.h, &t.private.g), params.q, false);
            assert_eq!(hg, mat_reduce(&t.w, params.q, false), "h·g ≢ w at seed {seed}");
            let fh = mat_reduce(&mat_mul(&t.private.f, &t.public.big_h), params.q, false);
            assert_eq!(
                fh,
                mat_reduce(&t.private.c, params.q, false),
                "f·H ≢ c at seed {seed}"
            );
        }
    }

    #[test]
    fn keygen_is_deterministic() {
        let params = Preset::Small.params();
        let streams = Streams::new(99);
        let a = keygen(&params, &mut streams.stream("keygen", 0)).unwrap();
        let b = keygen(&params, &mut streams.stream("keygen", 0)).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn zero_weight_fails_keygen() {
        let mut params = Preset::Toy.params();
        params.d_f = 0;
        let err = keygen(&params, &mut Streams::new(1).stream("keygen", 0)).unwrap_err();
        assert!(matches!(err, NnruError::KeygenFailure { .. }));
    }

    #[test]
    fn round_trip_at_all_presets() {
        for preset in [Preset::ToyMicro, Preset::Toy, Preset::Small, Preset::Reference] {
            let params = preset.params();
            let streams = Streams::new(2024);
            let (public, private) =
                keygen(&params, &mut streams.stream("keygen", 0)).unwrap();
            for trial in 0..5 {
                let mut rng = streams.stream("message", trial);
                let m = sample_plaintext(&params, &mut rng);
                let e = encrypt(&public, &m, &mut rng).unwrap();
                let back = decrypt(&private, &e).unwrap();
                assert_eq!(back, m, "{} trial {trial}", preset.name());
            }
        }
    }

    #[test]
    fn zero_message_zero_phi_gives_zero_ciphertext() {
        let t = toy_keys(3);
        let params = t.public.params;
        let m = Plaintext {
            m: MatrixElement::zero(params.k, params.n),
        };
        let phi = MatrixElement::zero(params.k, params.n);
        let e = encrypt_with_phi(&t.public, &m, &phi).unwrap();
        assert!(e.e.is_zero());
        let back = decrypt(&t.private, &e).unwrap();
        assert!(back.m.is_zero());
    }

    #[test]
    fn zero_phi_leaves_only_masked_message() {
        let t = toy_keys(4);
        let params = t.public.params;
        let mut rng = Streams::new(4).stream("message", 0);
        let m = sample_plaintext(&params, &mut rng);
        let phi = MatrixElement::zero(params.k, params.n);
        let e = encrypt_with_phi(&t.public, &m, &phi).unwrap();
        let expected = mat_reduce(&mat_mul(&t.public.big_h, &m.m), params.q, false);
        assert_eq!(e.e, expected);
    }

    #[test]
    fn out_of_range_plaintext_rejected() {
        let t = toy_keys(5);
        let params = t.public.params;
        let mut bad = MatrixElement::zero(params.k, params.n);
        bad[(0, 0)].coeffs[0] = 2;
        let err = encrypt(
            &t.public,
            &Plaintext { m: bad },
            &mut Streams::new(5).stream("phi", 0),
        )
        .unwrap_err();
        assert!(matches!(err, NnruError::PlaintextRange { value: 2, p: 3 }));
    }

    #[test]
    fn params_mismatch_rejected() {
        let toy = toy_keys(6);
        let micro = Preset::ToyMicro.params();
        let (public, _) = keygen(&micro, &mut Streams::new(6).stream("keygen", 0)).unwrap();
        let mut rng = Streams::new(6).stream("message", 0);
        let m = sample_plaintext(&micro, &mut rng);
        let e = encrypt(&public, &m, &mut rng).unwrap();
        assert!(matches!(
            decrypt(&toy.private, &e),
            Err(NnruError::ParamsMismatch(_))
        ));
    }

    #[test]
    fn adversarial_ciphertext_yields_range_valid_garbage() {
        let t = toy_keys(7);
        let params = t.public.params;
        let mut rng = Streams::new(7).stream("garbage", 0);
        use rand::Rng;
        let e = Ciphertext {
            e: MatrixElement::from_fn(params.k, params.n, |_, _| {
                crate::ring::RingElement::from_coeffs(
                    (0..params.n).map(|_| rng.random_range(0..params.q)).collect(),
                )
            }),
            params,
        };
        let out = decrypt(&t.private, &e).unwrap();
        let half = (params.p - 1) / 2;
        assert!(out.m.coeffs().all(|c| c.abs() <= half));
    }

    #[test]
    fn congruence_identity_f_e_g_vs_exact_b() {
        // f·e·g − (p·f·φ·w + c·m·g) is divisible by q coefficientwise.
        let t = toy_keys(8);
        let params = t.public.params;
        let mut rng = Streams::new(8).stream("message", 0);
        let m = sample_plaintext(&params, &mut rng);
        let phi = sample_phi(&params, &mut rng).unwrap();
        let e = encrypt_with_phi(&t.public, &m, &phi).unwrap();
        let feg = mat_mul(&mat_mul(&t.private.f, &e.e), &t.private.g);
        let b = exact_b(&t.private, &t.w, &m, &phi);
        let difference = mat_sub(&feg, &b);
        assert!(difference.coeffs().all(|c| c % params.q == 0));
    }

    #[test]
    fn success_iff_centered_width_condition() {
        let t = toy_keys(9);
        let params = t.public.params;
        for trial in 0..20 {
            let mut rng = Streams::new(9).stream("trial", trial);
            let m = sample_plaintext(&params, &mut rng);
            let phi = sample_phi(&params, &mut rng).unwrap();
            let e = encrypt_with_phi(&t.public, &m, &phi).unwrap();
            let b = exact_b(&t.private, &t.w, &m, &phi);
            let fits = mat_reduce(&b, params.q, true) == b;
            let success = decrypt(&t.private, &e).unwrap() == m;
            assert_eq!(success, fits, "trial {trial}");
            if !success {
                assert!(mat_width_inf(&b) > params.q);
            }
        }
    }
}
