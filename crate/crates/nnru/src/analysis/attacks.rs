//! Concrete attacks against the scheme at toy sizes.
//!
//! The brute-force search walks the exact candidate space key generation
//! samples from (diagonal entries one unit heavier than off-diagonal ones)
//! and flags every candidate that behaves like a secret: g' is flagged
//! when h·g' reduces to a short matrix mod q, f' when f'·H does. The true
//! key always lands in the flagged set because h·g ≡ w and f·H ≡ c with
//! ternary w and c.
//!
//! The multiple-transmission attack exploits blinding reuse of a plaintext:
//! when h is invertible mod q, (e_i − e_1)·h⁻¹·p⁻¹ centered mod q equals
//! φ_i − φ_1 exactly, leaking the difference of blinding matrices.

use num_bigint::BigUint;

use super::security::candidate_polynomials;
use crate::error::{NnruError, Result};
use crate::matrix::{
    is_short, mat_inverse_mod_2e, mat_mul, mat_reduce, mat_sub, MatrixElement,
};
use crate::ring::{mod_inverse_2e, RingElement};
use crate::scheme::{Ciphertext, PublicKey};

#[derive(Clone, Debug)]
pub struct BruteForceOutcome {
    /// Candidates enumerated on each side.
    pub g_space: u64,
    pub f_space: u64,
    /// Candidates g' with h·g' short mod q (the true g is always here).
    pub flagged_g: Vec<MatrixElement>,
    /// Candidates f' with f'·H short mod q (the true f is always here).
    pub flagged_f: Vec<MatrixElement>,
}

/// Exhaustive key search. Refuses to run when the candidate space exceeds
/// `budget` enumerations, reporting the space size in the error.
pub fn brute_force_attack(public: &PublicKey, budget: u64) -> Result<BruteForceOutcome> {
    let params = &public.params;
    params.validate()?;

    // Budget check runs on closed-form counts before any candidate list is
    // materialized; the lists themselves are astronomically large at real
    // parameter sizes.
    let diag_count = candidate_polynomials(params.n, params.d_f + 1, params.d_f)?;
    let off_count = candidate_polynomials(params.n, params.d_f, params.d_f)?;
    let per_side = diag_count.pow(params.k as u32)
        * off_count.pow((params.k * params.k - params.k) as u32);
    let total = &per_side * 2u32;
    if total > BigUint::from(budget) {
        return Err(NnruError::SearchSpaceTooLarge {
            space: total.to_string(),
            budget,
        });
    }
    let per_side = u64::try_from(&per_side).expect("space within u64 budget");

    let diag = candidate_list(params.n, params.d_f + 1, params.d_f);
    let off = candidate_list(params.n, params.d_f, params.d_f);
    let mut flagged_g = Vec::new();
    enumerate_matrices(params.k, params.n, &diag, &off, |candidate| {
        let product = mat_reduce(&mat_mul(&public.h, candidate), params.q, true);
        if is_short(&product, params.p) {
            flagged_g.push(candidate.clone());
        }
    });
    let mut flagged_f = Vec::new();
    enumerate_matrices(params.k, params.n, &diag, &off, |candidate| {
        let product = mat_reduce(&mat_mul(candidate, &public.big_h), params.q, true);
        if is_short(&product, params.p) {
            flagged_f.push(candidate.clone());
        }
    });

    Ok(BruteForceOutcome {
        g_space: per_side,
        f_space: per_side,
        flagged_g,
        flagged_f,
    })
}

/// All ternary polynomials of length n with d1 coefficients +1 and d2
/// coefficients −1, in a fixed lexicographic order.
fn candidate_list(n: usize, d1: usize, d2: usize) -> Vec<RingElement> {
    let mut out = Vec::new();
    for_each_combination(n, d1, &mut |plus| {
        let complement: Vec<usize> = (0..n).filter(|i| !plus.contains(i)).collect();
        for_each_combination(complement.len(), d2, &mut |minus| {
            let mut coeffs = vec![0i64; n];
            for &i in plus {
                coeffs[i] = 1;
            }
            for &j in minus {
                coeffs[complement[j]] = -1;
            }
            out.push(RingElement::from_coeffs(coeffs));
        });
    });
    out
}

/// Visits every size-r subset of 0..n in lexicographic order.
fn for_each_combination(n: usize, r: usize, visit: &mut impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut indices: Vec<usize> = (0..r).collect();
    loop {
        visit(&indices);
        // advance the rightmost index that still has headroom
        let mut pos = r;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if indices[pos] < n - r + pos {
                indices[pos] += 1;
                for later in pos + 1..r {
                    indices[later] = indices[later - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Odometer over all k×k matrices whose diagonal entries come from `diag`
/// and off-diagonal entries from `off`.
fn enumerate_matrices(
    k: usize,
    n: usize,
    diag: &[RingElement],
    off: &[RingElement],
    mut visit: impl FnMut(&MatrixElement),
) {
    let cells = k * k;
    let cap = |pos: usize| {
        if pos / k == pos % k {
            diag.len()
        } else {
            off.len()
        }
    };
    if (0..cells).any(|pos| cap(pos) == 0) {
        return;
    }
    let mut idx = vec![0usize; cells];
    loop {
        let entries: Vec<RingElement> = (0..cells)
            .map(|pos| {
                let list = if pos / k == pos % k { diag } else { off };
                list[idx[pos]].clone()
            })
            .collect();
        visit(&MatrixElement::from_entries(k, n, entries));
        let mut pos = cells;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < cap(pos) {
                break;
            }
            idx[pos] = 0;
        }
    }
}

#[derive(Clone, Debug)]
pub struct MtaDelta {
    /// Index of the ciphertext this delta compares against the first one.
    pub index: usize,
    /// Centered representative of (e_i − e_1)·h⁻¹·p⁻¹ mod q.
    pub delta: MatrixElement,
    /// Whether every coefficient lies in [−2, 2], the range a genuine
    /// difference of two ternary blinding matrices must occupy.
    pub clean: bool,
}

#[derive(Clone, Debug)]
pub struct MtaReport {
    pub deltas: Vec<MtaDelta>,
    pub all_clean: bool,
}

/// Recovers blinding differences from repeated transmissions of one
/// plaintext. Needs at least two ciphertexts under the same key; fails
/// with [`NnruError::AttackInapplicable`] when h is not invertible mod q.
pub fn multiple_transmission_attack(
    public: &PublicKey,
    ciphertexts: &[Ciphertext],
) -> Result<MtaReport> {
    let params = &public.params;
    if ciphertexts.len() < 2 {
        return Err(NnruError::InvalidParams(format!(
            "multiple-transmission attack needs at least 2 ciphertexts, got {}",
            ciphertexts.len()
        )));
    }
    for ct in ciphertexts {
        if ct.params != *params {
            return Err(NnruError::ParamsMismatch(
                "ciphertext parameters differ from the public key's".into(),
            ));
        }
    }

    let e = params.q_exponent();
    let h_inv = mat_inverse_mod_2e(&public.h, e).map_err(|_| {
        NnruError::AttackInapplicable("public matrix h is not invertible mod q".into())
    })?;
    let p_inv = mod_inverse_2e(params.p, e)?;

    let mut deltas = Vec::with_capacity(ciphertexts.len() - 1);
    for (index, ct) in ciphertexts.iter().enumerate().skip(1) {
        let difference = mat_sub(&ct.e, &ciphertexts[0].e);
        let unblinded = mat_mul(&difference, &h_inv).scale(p_inv);
        let delta = mat_reduce(&unblinded, params.q, true);
        let clean = delta.coeffs().all(|c| c.abs() <= 2);
        deltas.push(MtaDelta {
            index,
            delta,
            clean,
        });
    }
    let all_clean = deltas.iter().all(|d| d.clean);
    Ok(MtaReport { deltas, all_clean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{Params, Preset};
    use crate::rng::Streams;
    use crate::sample::sample_plaintext;
    use crate::scheme::{encrypt_with_phi, keygen_with_transcript, sample_phi};

    #[test]
    fn combination_walk_matches_binomials() {
        let mut count = 0;
        for_each_combination(6, 3, &mut |c| {
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            count += 1;
        });
        assert_eq!(count, 20);

        let list = candidate_list(5, 2, 1);
        assert_eq!(list.len(), 30);
        let mut unique = list.clone();
        unique.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
        unique.dedup();
        assert_eq!(unique.len(), 30);
    }

    #[test]
    fn brute_force_flags_the_true_key() {
        let params = Preset::ToyMicro.params();
        let t = keygen_with_transcript(&params, &mut Streams::new(21).stream("keygen", 0))
            .unwrap();
        let outcome = brute_force_attack(&t.public, 1_000_000).unwrap();
        assert_eq!(outcome.g_space, 30);
        assert_eq!(outcome.f_space, 30);
        assert!(
            outcome.flagged_g.contains(&t.private.g),
            "true g missing from flagged set"
        );
        assert!(
            outcome.flagged_f.contains(&t.private.f),
            "true f missing from flagged set"
        );
    }

    #[test]
    fn budget_zero_refuses_to_search() {
        let params = Preset::ToyMicro.params();
        let t = keygen_with_transcript(&params, &mut Streams::new(22).stream("keygen", 0))
            .unwrap();
        let err = brute_force_attack(&t.public, 0).unwrap_err();
        match err {
            NnruError::SearchSpaceTooLarge { space, budget } => {
                assert_eq!(space, "60");
                assert_eq!(budget, 0);
            }
            other => panic!("expected SearchSpaceTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn reference_sized_space_exceeds_any_practical_budget() {
        let params = Preset::Reference.params();
        let t = keygen_with_transcript(&params, &mut Streams::new(23).stream("keygen", 0))
            .unwrap();
        assert!(matches!(
            brute_force_attack(&t.public, u64::MAX),
            Err(NnruError::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn mta_recovers_blinding_differences_exactly() {
        let params = Preset::Toy.params();
        let streams = Streams::new(24);
        let t = keygen_with_transcript(&params, &mut streams.stream("keygen", 0)).unwrap();
        let m = sample_plaintext(&params, &mut streams.stream("message", 0));

        let phis: Vec<MatrixElement> = (0..5)
            .map(|i| sample_phi(&params, &mut streams.stream("phi", i)).unwrap())
            .collect();
        let cts: Vec<Ciphertext> = phis
            .iter()
            .map(|phi| encrypt_with_phi(&t.public, &m, phi).unwrap())
            .collect();

        let report = multiple_transmission_attack(&t.public, &cts).unwrap();
        assert_eq!(report.deltas.len(), 4);
        assert!(report.all_clean);
        for d in &report.deltas {
            let expected = mat_sub(&phis[d.index], &phis[0]);
            assert_eq!(d.delta, expected, "delta {} wrong", d.index);
        }
    }

    #[test]
    fn mta_identical_ciphertexts_give_zero_delta() {
        let params = Preset::Toy.params();
        let streams = Streams::new(25);
        let t = keygen_with_transcript(&params, &mut streams.stream("keygen", 0)).unwrap();
        let m = sample_plaintext(&params, &mut streams.stream("message", 0));
        let phi = sample_phi(&params, &mut streams.stream("phi", 0)).unwrap();
        let ct = encrypt_with_phi(&t.public, &m, &phi).unwrap();
        let report =
            multiple_transmission_attack(&t.public, &[ct.clone(), ct]).unwrap();
        assert!(report.deltas[0].delta.is_zero());
        assert!(report.deltas[0].clean);
    }

    #[test]
    fn mta_flags_different_plaintexts_as_unclean() {
        // Not every key is applicable (h must be invertible mod q), so
        // scan seeds for one that is.
        let params = Preset::Toy.params();
        for seed in 26.. {
            let streams = Streams::new(seed);
            let t = keygen_with_transcript(&params, &mut streams.stream("keygen", 0)).unwrap();
            let m1 = sample_plaintext(&params, &mut streams.stream("message", 0));
            let m2 = sample_plaintext(&params, &mut streams.stream("message", 1));
            assert_ne!(m1, m2);
            let e1 = encrypt_with_phi(
                &t.public,
                &m1,
                &sample_phi(&params, &mut streams.stream("phi", 0)).unwrap(),
            )
            .unwrap();
            let e2 = encrypt_with_phi(
                &t.public,
                &m2,
                &sample_phi(&params, &mut streams.stream("phi", 1)).unwrap(),
            )
            .unwrap();
            let report = match multiple_transmission_attack(&t.public, &[e1, e2]) {
                Err(NnruError::AttackInapplicable(_)) => continue,
                other => other.unwrap(),
            };
            assert!(!report.deltas[0].clean);
            return;
        }
    }

    #[test]
    fn mta_rejects_singular_h_and_short_lists() {
        let params = Preset::Toy.params();
        let streams = Streams::new(27);
        let t = keygen_with_transcript(&params, &mut streams.stream("keygen", 0)).unwrap();
        let m = sample_plaintext(&params, &mut streams.stream("message", 0));
        let phi = sample_phi(&params, &mut streams.stream("phi", 0)).unwrap();
        let ct = encrypt_with_phi(&t.public, &m, &phi).unwrap();

        assert!(matches!(
            multiple_transmission_attack(&t.public, std::slice::from_ref(&ct)),
            Err(NnruError::InvalidParams(_))
        ));

        let singular = PublicKey {
            h: MatrixElement::zero(params.k, params.n),
            big_h: t.public.big_h.clone(),
            params,
        };
        assert!(matches!(
            multiple_transmission_attack(&singular, &[ct.clone(), ct]),
            Err(NnruError::AttackInapplicable(_))
        ));
    }

    #[test]
    fn custom_k2_space_counts_include_heavier_diagonal() {
        // n=5, d=1, k=2: diagonal entries draw from 30 candidates,
        // off-diagonal from 20, so one side is 30²·20² = 360000.
        let params = Params {
            n: 5,
            k: 2,
            p: 3,
            q: 64,
            d_f: 1,
            d_w: 1,
            d_c: 1,
            d_phi: 1,
        };
        let t = keygen_with_transcript(&params, &mut Streams::new(28).stream("keygen", 0))
            .unwrap();
        let err = brute_force_attack(&t.public, 700_000).unwrap_err();
        match err {
            NnruError::SearchSpaceTooLarge { space, .. } => {
                assert_eq!(space, "720000");
            }
            other => panic!("expected SearchSpaceTooLarge, got {other:?}"),
        }
    }
}
