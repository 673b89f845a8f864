//! Size accounting and timing comparison against the commutative baseline.
//!
//! The baseline runs at ring degree N = nk², so one block of either scheme
//! carries the same nk²·log₂p plaintext bits. Schoolbook encryption costs
//! 2k³ polynomial multiplications of length n for the matrix scheme versus
//! one multiplication of length N = nk² for the baseline, so the model
//! predicts a speedup of N²/(2k³n²) = k/2. Timings are wall-clock over
//! batches that run for at least 50 ms each; multiplication counts come
//! from the counted matrix-product routines and are exact.

use std::hint::black_box;
use std::time::{Duration, Instant};

use crate::error::{NnruError, Result};
use crate::matrix::{mat_mul_counted, mat_mul_strassen_counted};
use crate::ntru::{ntru_decrypt, ntru_encrypt_with_phi, ntru_keygen, NtruKeyPair};
use crate::params::{NtruParams, Params};
use crate::rng::Streams;
use crate::sample::{sample_plaintext, sample_ternary};
use crate::scheme::{decrypt, encrypt_with_phi, keygen, sample_phi};

/// Closed-form object sizes in bits.
#[derive(Clone, Copy, Debug)]
pub struct SizeTable {
    /// nk²·log₂p
    pub plaintext_bits: f64,
    /// nk²·log₂q
    pub ciphertext_bits: f64,
    /// 2nk²·log₂p, the information content of the two retained ternary
    /// secrets (serialized files store extra cached inverses for speed).
    pub private_key_bits: f64,
    /// 2nk²·log₂q for the pair (h, H).
    pub public_key_bits: f64,
    /// Ciphertext expansion log₂q / log₂p.
    pub expansion: f64,
}

pub fn size_table(params: &Params) -> SizeTable {
    let coeffs = params.coeff_count() as f64;
    let lp = (params.p as f64).log2();
    let lq = (params.q as f64).log2();
    SizeTable {
        plaintext_bits: coeffs * lp,
        ciphertext_bits: coeffs * lq,
        private_key_bits: 2.0 * coeffs * lp,
        public_key_bits: 2.0 * coeffs * lq,
        expansion: lq / lp,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OpTimings {
    pub keygen_ms: f64,
    pub encrypt_ms: f64,
    pub decrypt_ms: f64,
}

#[derive(Clone, Debug)]
pub struct BenchmarkReport {
    pub params: Params,
    pub ntru_params: NtruParams,
    pub sizes: SizeTable,
    pub nnru: OpTimings,
    pub ntru: OpTimings,
    /// Exact polynomial multiplications per encryption, 2k³.
    pub nnru_mults_schoolbook: u64,
    /// Per encryption with Strassen matrix products (2·7^⌈log₂k⌉ after
    /// padding odd k).
    pub nnru_mults_strassen: u64,
    /// Per baseline encryption: a single length-N multiplication.
    pub ntru_mults: u64,
    /// Measured baseline-encrypt over matrix-encrypt wall-clock ratio.
    pub encrypt_speedup: f64,
    /// The k/2 prediction for the same ratio.
    pub model_speedup: f64,
}

/// Times one operation by running batches until a batch takes at least
/// 50 ms, starting at `min_batch` repetitions. Returns milliseconds per
/// operation.
fn time_per_op_ms(min_batch: usize, mut op: impl FnMut()) -> f64 {
    let floor = Duration::from_millis(50);
    let mut batch = min_batch.max(1);
    loop {
        let start = Instant::now();
        for _ in 0..batch {
            op();
        }
        let elapsed = start.elapsed();
        if elapsed >= floor {
            return elapsed.as_secs_f64() * 1000.0 / batch as f64;
        }
        batch = batch.saturating_mul(4);
    }
}

/// Benchmarks both schemes on identical plaintext bit-loads. `trials` is
/// the minimum batch size per measurement and must be at least 10.
pub fn benchmark_compare(
    params: &Params,
    trials: usize,
    streams: &Streams,
) -> Result<BenchmarkReport> {
    params.validate()?;
    if trials < 10 {
        return Err(NnruError::InvalidParams(format!(
            "benchmark needs at least 10 trials, got {trials}"
        )));
    }
    let ntru_params = NtruParams {
        n: params.coeff_count(),
        p: params.p,
        q: params.q,
        d: 5,
    };
    ntru_params.validate()?;

    let (public, private) = keygen(params, &mut streams.stream("bench-keygen", 0))?;
    let mut rng = streams.stream("bench-data", 0);
    let m = sample_plaintext(params, &mut rng);
    let phi = sample_phi(params, &mut rng)?;
    let ciphertext = encrypt_with_phi(&public, &m, &phi)?;

    let ntru_key: NtruKeyPair = ntru_keygen(&ntru_params, &mut streams.stream("bench-ntru", 0))?;
    let mut ntru_rng = streams.stream("bench-ntru-data", 0);
    let half = (ntru_params.p - 1) / 2;
    let ntru_m = crate::ring::RingElement::from_coeffs(
        (0..ntru_params.n)
            .map(|_| rand::Rng::random_range(&mut ntru_rng, -half..=half))
            .collect(),
    );
    let ntru_phi = sample_ternary(ntru_params.n, ntru_params.d, ntru_params.d, &mut ntru_rng)?;
    let ntru_ct = ntru_encrypt_with_phi(&ntru_params, &ntru_key.h, &ntru_m, &ntru_phi)?;

    let mut keygen_rng = streams.stream("bench-keygen-loop", 0);
    let nnru = OpTimings {
        keygen_ms: time_per_op_ms(1, || {
            black_box(keygen(params, &mut keygen_rng).expect("keygen during benchmark"));
        }),
        encrypt_ms: time_per_op_ms(trials, || {
            black_box(encrypt_with_phi(&public, &m, &phi).expect("encrypt during benchmark"));
        }),
        decrypt_ms: time_per_op_ms(trials, || {
            black_box(decrypt(&private, &ciphertext).expect("decrypt during benchmark"));
        }),
    };

    let mut ntru_keygen_rng = streams.stream("bench-ntru-keygen-loop", 0);
    let ntru = OpTimings {
        keygen_ms: time_per_op_ms(1, || {
            black_box(ntru_keygen(&ntru_params, &mut ntru_keygen_rng).expect("ntru keygen"));
        }),
        encrypt_ms: time_per_op_ms(trials, || {
            black_box(
                ntru_encrypt_with_phi(&ntru_params, &ntru_key.h, &ntru_m, &ntru_phi)
                    .expect("ntru encrypt during benchmark"),
            );
        }),
        decrypt_ms: time_per_op_ms(trials, || {
            black_box(ntru_decrypt(&ntru_key, &ntru_ct));
        }),
    };

    let (_, c1) = mat_mul_counted(&phi, &public.h);
    let (_, c2) = mat_mul_counted(&public.big_h, &m.m);
    let (_, s1) = mat_mul_strassen_counted(&phi, &public.h);
    let (_, s2) = mat_mul_strassen_counted(&public.big_h, &m.m);

    Ok(BenchmarkReport {
        params: *params,
        ntru_params,
        sizes: size_table(params),
        nnru,
        ntru,
        nnru_mults_schoolbook: c1 + c2,
        nnru_mults_strassen: s1 + s2,
        ntru_mults: 1,
        encrypt_speedup: ntru.encrypt_ms / nnru.encrypt_ms,
        model_speedup: params.k as f64 / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Preset;

    #[test]
    fn size_table_matches_closed_forms() {
        let params = Preset::Reference.params();
        let sizes = size_table(&params);
        let coeffs = (59 * 9) as f64;
        assert_eq!(sizes.plaintext_bits, coeffs * 3f64.log2());
        assert_eq!(sizes.ciphertext_bits, coeffs * 11.0);
        assert_eq!(sizes.private_key_bits, 2.0 * coeffs * 3f64.log2());
        assert_eq!(sizes.public_key_bits, 2.0 * coeffs * 11.0);
        assert!((sizes.expansion - 11.0 / 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn mult_counts_follow_the_models() {
        let params = Preset::Small.params();
        let report = benchmark_compare(&params, 10, &Streams::new(41)).unwrap();
        let k = params.k as u64;
        assert_eq!(report.nnru_mults_schoolbook, 2 * k * k * k);
        // k = 3 pads to 4, so each Strassen product costs 7² = 49.
        assert_eq!(report.nnru_mults_strassen, 2 * 49);
        assert_eq!(report.ntru_mults, 1);
        assert_eq!(report.ntru_params.n, params.coeff_count());
        assert!(report.encrypt_speedup > 0.0);
        assert!(report.nnru.encrypt_ms > 0.0);
        assert!(report.ntru.encrypt_ms > 0.0);
    }

    #[test]
    fn rejects_tiny_trial_counts() {
        let params = Preset::Toy.params();
        assert!(benchmark_compare(&params, 5, &Streams::new(42)).is_err());
    }
}
