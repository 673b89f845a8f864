//! Decryption failure measurement.
//!
//! Each trial runs a fresh keygen, encrypts a uniform plaintext, decrypts,
//! and records whether the result matched alongside the width of the exact
//! noise matrix B = p·f·φ·w + c·m·g. The exact matrix lets the report
//! verify the structural claim that decryption succeeds precisely when
//! every coefficient of B survives centered reduction mod q, and it feeds
//! the pooled empirical sigma that the prediction model is judged against.

use rayon::prelude::*;

use crate::error::Result;
use crate::matrix::{mat_centered_l2, mat_reduce, mat_width_inf};
use crate::params::{predict_b_norm, Params};
use crate::rng::Streams;
use crate::sample::sample_plaintext;
use crate::scheme::{decrypt, encrypt_with_phi, exact_b, keygen_with_transcript, sample_phi};

#[derive(Clone, Copy, Debug)]
pub struct FailureRecord {
    pub trial: u64,
    /// Width of the exact noise matrix B before any reduction.
    pub b_width: i64,
    /// Whether every coefficient of B lies in the centered window mod q.
    pub window_ok: bool,
    /// Whether decryption reproduced the plaintext.
    pub success: bool,
}

#[derive(Clone, Debug)]
pub struct FailureReport {
    pub params: Params,
    pub trials: usize,
    pub failures: usize,
    pub predicted_b_norm: f64,
    pub predicted_sigma: f64,
    /// Pooled RMS of the centered coefficients of B across all trials.
    pub empirical_sigma: f64,
    /// True when success agreed with the centered-window condition in
    /// every single trial.
    pub width_consistent: bool,
    pub records: Vec<FailureRecord>,
}

impl FailureReport {
    pub fn failure_rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }
}

/// Runs `trials` independent end-to-end encrypt/decrypt experiments.
/// Trials draw from per-trial random streams, so the aggregate is
/// reproducible regardless of thread scheduling.
pub fn measure_failure_rate(
    params: &Params,
    trials: usize,
    streams: &Streams,
) -> Result<FailureReport> {
    params.validate()?;
    if trials == 0 {
        return Err(crate::error::NnruError::InvalidParams(
            "failure measurement needs at least one trial".into(),
        ));
    }

    let per_trial: Vec<(FailureRecord, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| -> Result<(FailureRecord, f64)> {
            let mut rng = streams.stream("failure-trial", trial);
            let transcript = keygen_with_transcript(params, &mut rng)?;
            let m = sample_plaintext(params, &mut rng);
            let phi = sample_phi(params, &mut rng)?;
            let e = encrypt_with_phi(&transcript.public, &m, &phi)?;
            let decrypted = decrypt(&transcript.private, &e)?;

            let b = exact_b(&transcript.private, &transcript.w, &m, &phi);
            let window_ok = mat_reduce(&b, params.q, true) == b;
            let record = FailureRecord {
                trial,
                b_width: mat_width_inf(&b),
                window_ok,
                success: decrypted == m,
            };
            Ok((record, mat_centered_l2(&b).powi(2)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut records: Vec<FailureRecord> = per_trial.iter().map(|(r, _)| *r).collect();
    records.sort_by_key(|r| r.trial);
    let failures = records.iter().filter(|r| !r.success).count();
    let width_consistent = records.iter().all(|r| r.success == r.window_ok);
    let sq_sum: f64 = per_trial.iter().map(|(_, sq)| sq).sum();
    let coeff_count = (trials * params.coeff_count()) as f64;
    let (predicted_b_norm, predicted_sigma) = predict_b_norm(params);

    Ok(FailureReport {
        params: *params,
        trials,
        failures,
        predicted_b_norm,
        predicted_sigma,
        empirical_sigma: (sq_sum / coeff_count).sqrt(),
        width_consistent,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Preset;

    #[test]
    fn toy_preset_is_failure_free_and_consistent() {
        let params = Preset::Toy.params();
        let report = measure_failure_rate(&params, 60, &Streams::new(11)).unwrap();
        assert_eq!(report.trials, 60);
        assert_eq!(report.failures, 0);
        assert!(report.width_consistent);
        assert!(report.records.iter().all(|r| r.b_width < params.q));
    }

    #[test]
    fn empirical_sigma_close_to_prediction_on_small() {
        let params = Preset::Small.params();
        let report = measure_failure_rate(&params, 80, &Streams::new(12)).unwrap();
        let deviation = (report.empirical_sigma - report.predicted_sigma).abs()
            / report.predicted_sigma;
        assert!(
            deviation < 0.25,
            "sigma deviation {:.3} (empirical {:.2}, predicted {:.2})",
            deviation,
            report.empirical_sigma,
            report.predicted_sigma
        );
    }

    #[test]
    fn deterministic_aggregation_despite_parallelism() {
        let params = Preset::Toy.params();
        let a = measure_failure_rate(&params, 30, &Streams::new(13)).unwrap();
        let b = measure_failure_rate(&params, 30, &Streams::new(13)).unwrap();
        assert_eq!(a.failures, b.failures);
        assert_eq!(a.empirical_sigma, b.empirical_sigma);
        let widths_a: Vec<i64> = a.records.iter().map(|r| r.b_width).collect();
        let widths_b: Vec<i64> = b.records.iter().map(|r| r.b_width).collect();
        assert_eq!(widths_a, widths_b);
    }

    #[test]
    fn zero_trials_rejected() {
        let params = Preset::Toy.params();
        assert!(measure_failure_rate(&params, 0, &Streams::new(14)).is_err());
    }
}
