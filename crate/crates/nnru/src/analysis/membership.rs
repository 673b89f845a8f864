//! Shift-module membership: does solving S·h ≡ target over a prime field
//! recover anything short?
//!
//! The right-multiplication map S ↦ S·h is linear over F_m in the nk²
//! coefficients of S, with a basis given by the matrices E_ij·X^t. For
//! k = 1 the ring is commutative, so the target f·h·g equals (f·g)·h and
//! the unique solution is the genuinely short product f·g. For k ≥ 2 the
//! sandwich does not commute past h; the solution is the conjugate
//! f·h·g·h⁻¹, which behaves like a uniform residue matrix. The experiment
//! quantifies that contrast.

use crate::error::{NnruError, Result};
use crate::matrix::{mat_centered_l2, mat_mul, mat_reduce, mat_sigma, MatrixElement};
use crate::params::{is_small_prime, Params};
use crate::ring::mod_inverse_prime;
use crate::rng::Streams;
use crate::scheme::keygen_with_transcript;

/// Largest nk² the dense solver will accept.
const MAX_DIMENSION: usize = 1024;

#[derive(Clone, Debug)]
pub struct ShiftSolution {
    /// Number of unknowns, nk².
    pub dimension: usize,
    /// Rank of the coefficient matrix.
    pub rank: usize,
    /// A centered solution matrix, or None when the system is
    /// inconsistent. Underdetermined systems report the particular
    /// solution with all free coordinates zero.
    pub solution: Option<MatrixElement>,
    pub unique: bool,
}

impl ShiftSolution {
    /// Coefficient standard deviation of the centered solution.
    pub fn sigma(&self) -> Option<f64> {
        self.solution.as_ref().map(mat_sigma)
    }

    pub fn centered_norm(&self) -> Option<f64> {
        self.solution.as_ref().map(mat_centered_l2)
    }
}

/// Solves S·h ≡ target (mod modulus) for S by Gaussian elimination over
/// F_modulus. The modulus must be an odd prime and nk² at most 1024.
pub fn shift_module_solution(
    h: &MatrixElement,
    target: &MatrixElement,
    modulus: i64,
) -> Result<ShiftSolution> {
    if h.k() != target.k() || h.n() != target.n() {
        return Err(NnruError::InvalidParams(
            "h and target must have matching dimensions".into(),
        ));
    }
    if !is_small_prime(modulus) || modulus == 2 {
        return Err(NnruError::InvalidParams(format!(
            "shift-module modulus {modulus} must be an odd prime"
        )));
    }
    let k = h.k();
    let n = h.n();
    let dim = n * k * k;
    if dim > MAX_DIMENSION {
        return Err(NnruError::InvalidParams(format!(
            "system dimension nk² = {dim} exceeds solver limit {MAX_DIMENSION}"
        )));
    }

    // Column c of the system is coefficient c of flatten(S); row r is the
    // equation for coefficient r of flatten(S·h). flatten maps entry (i,j)
    // coefficient t to index (i·k + j)·n + t. The basis matrix E_ij·X^t
    // contributes h[(j, j2)][s] to output coefficient (i, j2, (t+s) mod n).
    let mut system = vec![vec![0i64; dim + 1]; dim];
    for i in 0..k {
        for j in 0..k {
            for t in 0..n {
                let unknown = (i * k + j) * n + t;
                for j2 in 0..k {
                    let entry = &h[(j, j2)];
                    for s in 0..n {
                        let coefficient = entry.coeffs[s].rem_euclid(modulus);
                        if coefficient == 0 {
                            continue;
                        }
                        let equation = (i * k + j2) * n + (t + s) % n;
                        system[equation][unknown] =
                            (system[equation][unknown] + coefficient) % modulus;
                    }
                }
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            for t in 0..n {
                let equation = (i * k + j) * n + t;
                system[equation][dim] = target[(i, j)].coeffs[t].rem_euclid(modulus);
            }
        }
    }

    // Gauss-Jordan with pivot bookkeeping.
    let mut pivot_of_column = vec![None; dim];
    let mut row = 0;
    for col in 0..dim {
        let Some(pivot) = (row..dim).find(|&r| system[r][col] != 0) else {
            continue;
        };
        system.swap(row, pivot);
        let inv = mod_inverse_prime(system[row][col], modulus);
        for value in &mut system[row][col..=dim] {
            *value = *value * inv % modulus;
        }
        let pivot_values = std::mem::take(&mut system[row]);
        for (r, other) in system.iter_mut().enumerate() {
            if r == row || other[col] == 0 {
                continue;
            }
            let factor = other[col];
            for (value, &pivot_value) in other[col..=dim].iter_mut().zip(&pivot_values[col..=dim]) {
                *value = (*value - factor * pivot_value).rem_euclid(modulus);
            }
        }
        system[row] = pivot_values;
        pivot_of_column[col] = Some(row);
        row += 1;
        if row == dim {
            break;
        }
    }
    let rank = row;

    let consistent = (rank..dim).all(|r| system[r][dim] == 0);
    let solution = consistent.then(|| {
        let mut flat = vec![0i64; dim];
        for (col, pivot) in pivot_of_column.iter().enumerate() {
            if let Some(r) = pivot {
                flat[col] = system[*r][dim];
            }
        }
        let matrix = MatrixElement::from_fn(k, n, |i, j| {
            let base = (i * k + j) * n;
            crate::ring::RingElement::from_coeffs(flat[base..base + n].to_vec())
        });
        mat_reduce(&matrix, modulus, true)
    });

    Ok(ShiftSolution {
        dimension: dim,
        rank,
        solution,
        unique: rank == dim,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct MembershipRecord {
    pub trial: u64,
    /// Whether the system had a unique solution for this key.
    pub applicable: bool,
    pub sigma: f64,
    /// σ at most 30% of the uniform-residue level.
    pub short: bool,
    /// σ within 20% of the uniform-residue level.
    pub near_uniform: bool,
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub params: Params,
    pub modulus: i64,
    pub trials: usize,
    pub applicable: usize,
    pub short_count: usize,
    pub near_uniform_count: usize,
    /// σ of a uniform centered residue, modulus/√12.
    pub uniform_sigma: f64,
    pub records: Vec<MembershipRecord>,
}

/// Runs the shift-module attack against `trials` fresh keys, solving
/// S·h ≡ f·h·g (mod modulus) and classifying the recovered S. Singular
/// systems are counted as inapplicable and excluded from the short and
/// near-uniform tallies.
pub fn membership_experiment(
    params: &Params,
    modulus: i64,
    trials: usize,
    streams: &Streams,
) -> Result<MembershipReport> {
    params.validate()?;
    if trials == 0 {
        return Err(NnruError::InvalidParams(
            "membership experiment needs at least one trial".into(),
        ));
    }
    let uniform_sigma = modulus as f64 / 12f64.sqrt();

    let mut records = Vec::with_capacity(trials);
    let mut applicable = 0;
    let mut short_count = 0;
    let mut near_uniform_count = 0;
    for trial in 0..trials as u64 {
        let mut rng = streams.stream("membership-trial", trial);
        let t = keygen_with_transcript(params, &mut rng)?;
        let target = mat_mul(&mat_mul(&t.private.f, &t.public.h), &t.private.g);
        let solved = shift_module_solution(&t.public.h, &target, modulus)?;
        let record = if solved.unique {
            let sigma = solved.sigma().expect("unique implies solution");
            MembershipRecord {
                trial,
                applicable: true,
                sigma,
                short: sigma <= 0.3 * uniform_sigma,
                near_uniform: (sigma - uniform_sigma).abs() <= 0.2 * uniform_sigma,
            }
        } else {
            MembershipRecord {
                trial,
                applicable: false,
                sigma: f64::NAN,
                short: false,
                near_uniform: false,
            }
        };
        if record.applicable {
            applicable += 1;
            if record.short {
                short_count += 1;
            }
            if record.near_uniform {
                near_uniform_count += 1;
            }
        }
        records.push(record);
    }

    Ok(MembershipReport {
        params: *params,
        modulus,
        trials,
        applicable,
        short_count,
        near_uniform_count,
        uniform_sigma,
        records,
    })
}
