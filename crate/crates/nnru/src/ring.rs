//! Exact arithmetic in the convolution polynomial ring R = Z[X]/(X^n − 1).
//!
//! Elements are dense coefficient vectors (index i holds the coefficient of
//! X^i) over exact signed 64-bit integers; nothing in this module rounds or
//! reduces unless asked to. Multiplication is circular convolution, so the
//! ring is commutative; the noncommutativity of the cryptosystem lives one
//! level up, in the matrix ring.

use crate::error::{NnruError, Result};

/// A polynomial in Z[X]/(X^n − 1), dense ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub coeffs: Vec<i64>,
}

impl RingElement {
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "ring degree n must be at least 1");
        RingElement { coeffs }
    }

    /// The zero polynomial of degree parameter `n`.
    pub fn zero(n: usize) -> Self {
        Self::from_coeffs(vec![0; n])
    }

    /// The multiplicative identity 1 of degree parameter `n`.
    pub fn one(n: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[0] = 1;
        Self::from_coeffs(coeffs)
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Multiplies every coefficient by the scalar `s`.
    pub fn scale(&self, s: i64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Sum of all coefficients, i.e. the evaluation at X = 1.
    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

/// Componentwise sum. Panics if the degrees differ.
pub fn ring_add(a: &RingElement, b: &RingElement) -> RingElement {
    assert_eq!(a.n(), b.n(), "ring degree mismatch: {} vs {}", a.n(), b.n());
    RingElement::from_coeffs(
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| x + y)
            .collect(),
    )
}

/// Componentwise difference. Panics if the degrees differ.
pub fn ring_sub(a: &RingElement, b: &RingElement) -> RingElement {
    assert_eq!(a.n(), b.n(), "ring degree mismatch: {} vs {}", a.n(), b.n());
    RingElement::from_coeffs(
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| x - y)
            .collect(),
    )
}

/// Circular convolution: result[t] = Σ_{i+j ≡ t (mod n)} a[i]·b[j].
///
/// Deliberately the dense schoolbook double loop with no sparsity shortcut,
/// so that operation counts and timings scale as n² regardless of how many
/// coefficients happen to be zero. Panics if the degrees differ.
pub fn ring_mul(a: &RingElement, b: &RingElement) -> RingElement {
    assert_eq!(a.n(), b.n(), "ring degree mismatch: {} vs {}", a.n(), b.n());
    let n = a.n();
    let mut out = vec![0i64; n];
    for (i, &ai) in a.coeffs.iter().enumerate() {
        for (j, &bj) in b.coeffs.iter().enumerate() {
            let mut t = i + j;
            if t >= n {
                t -= n;
            }
            out[t] += ai * bj;
        }
    }
    RingElement::from_coeffs(out)
}

/// Replaces every coefficient by its non-negative residue in [0, m).
/// Panics if `m < 2`.
pub fn reduce_mod(a: &RingElement, m: i64) -> RingElement {
    assert!(m >= 2, "modulus must be at least 2, got {m}");
    RingElement::from_coeffs(a.coeffs.iter().map(|&c| c.rem_euclid(m)).collect())
}

/// Centered residue of a single integer: the representative of c mod m in
/// (−m/2, m/2] for even m and [−(m−1)/2, (m−1)/2] for odd m.
pub fn center_coeff(c: i64, m: i64) -> i64 {
    let mut r = c.rem_euclid(m);
    if 2 * r > m {
        r -= m;
    }
    r
}

/// Replaces every coefficient by its centered residue (see [`center_coeff`];
/// for even m the boundary value +m/2 is kept). Panics if `m < 2`.
pub fn reduce_centered(a: &RingElement, m: i64) -> RingElement {
    assert!(m >= 2, "modulus must be at least 2, got {m}");
    RingElement::from_coeffs(a.coeffs.iter().map(|&c| center_coeff(c, m)).collect())
}

/// Width ‖a‖∞: maximum coefficient minus minimum coefficient.
pub fn poly_width_inf(a: &RingElement) -> i64 {
    let max = a.coeffs.iter().copied().max().unwrap();
    let min = a.coeffs.iter().copied().min().unwrap();
    max - min
}

/// Plain (uncentered) L2 norm sqrt(Σ c²).
pub fn poly_l2_norm(a: &RingElement) -> f64 {
    (a.coeffs.iter().map(|&c| (c * c) as f64).sum::<f64>()).sqrt()
}

/// Inverse of `a` in F_prime[X]/(X^n − 1), by the extended Euclidean
/// algorithm of `a` against X^n − 1 over F_prime[X].
///
/// The result has coefficients in [0, prime). Fails with
/// [`NnruError::NotInvertible`] when gcd(a, X^n − 1) ≠ 1.
pub fn poly_inverse_mod_prime(a: &RingElement, prime: i64) -> Result<RingElement> {
    assert!(prime >= 2, "modulus must be at least 2, got {prime}");
    let n = a.n();
    // Dense polynomials over F_prime, tracked with explicit degrees.
    let mut r0 = vec![0i64; n + 1];
    r0[0] = prime - 1; // X^n − 1 ≡ X^n + (p−1)
    r0[n] = 1;
    let mut r1: Vec<i64> = a.coeffs.iter().map(|&c| c.rem_euclid(prime)).collect();
    let mut t0: Vec<i64> = vec![];
    let mut t1: Vec<i64> = vec![1];
    while fp_deg(&r1) >= 0 {
        let (quot, rem) = fp_divmod(&r0, &r1, prime);
        let t_next = fp_sub(&t0, &fp_mul(&quot, &t1, prime), prime);
        r0 = r1;
        r1 = rem;
        t0 = t1;
        t1 = t_next;
    }
    if fp_deg(&r0) != 0 {
        return Err(NnruError::NotInvertible { modulus: prime });
    }
    let scale = mod_inverse_prime(r0[0], prime);
    // t0 · scale is the inverse in F_prime[X]; fold it back mod X^n − 1.
    let mut out = vec![0i64; n];
    for (i, &c) in t0.iter().enumerate() {
        out[i % n] = (out[i % n] + c * scale).rem_euclid(prime);
    }
    let b = RingElement::from_coeffs(out);
    debug_assert_eq!(reduce_mod(&ring_mul(a, &b), prime), RingElement::one(n));
    Ok(b)
}

/// Inverse of `a` mod 2^e in Z[X]/(X^n − 1): invert mod 2, then Newton-lift
/// b ← b·(2 − a·b), doubling the modulus precision each step.
///
/// The result has coefficients in [0, 2^e). Fails when `a` is not invertible
/// mod 2.
pub fn poly_inverse_mod_2e(a: &RingElement, e: u32) -> Result<RingElement> {
    assert!((1..=62).contains(&e), "exponent out of range: {e}");
    let n = a.n();
    let mut b = poly_inverse_mod_prime(a, 2)?;
    let mut bits = 1u32;
    while bits < e {
        bits = (2 * bits).min(e);
        let m = 1i64 << bits;
        let mut two = RingElement::zero(n);
        two.coeffs[0] = 2;
        let correction = ring_sub(&two, &ring_mul(&reduce_mod(a, m), &b));
        b = reduce_mod(&ring_mul(&b, &correction), m);
    }
    debug_assert_eq!(reduce_mod(&ring_mul(a, &b), 1 << e), RingElement::one(n));
    Ok(b)
}

/// Inverse of the integer `c` modulo the prime `prime`.
pub fn mod_inverse_prime(c: i64, prime: i64) -> i64 {
    mod_pow(c.rem_euclid(prime), prime - 2, prime)
}

/// Inverse of an odd integer `c` modulo 2^e, by Newton lifting.
pub fn mod_inverse_2e(c: i64, e: u32) -> Result<i64> {
    if c % 2 == 0 {
        return Err(NnruError::NotInvertible { modulus: 2 });
    }
    let m = 1i64 << e;
    let mut b = 1i64;
    let mut bits = 1u32;
    while bits < e {
        bits = (2 * bits).min(e);
        let step = 1i64 << bits;
        b = (b * (2 - ((c % step) * b) % step)).rem_euclid(step);
    }
    debug_assert_eq!((c.rem_euclid(m) * b).rem_euclid(m), 1);
    Ok(b)
}

fn mod_pow(mut base: i64, mut exp: i64, m: i64) -> i64 {
    let mut acc = 1i64;
    base = base.rem_euclid(m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

// Helpers for dense F_p[X] arithmetic used by the extended Euclid above.

fn fp_deg(f: &[i64]) -> isize {
    for i in (0..f.len()).rev() {
        if f[i] != 0 {
            return i as isize;
        }
    }
    -1
}

fn fp_trim(mut f: Vec<i64>) -> Vec<i64> {
    let d = fp_deg(&f);
    f.truncate((d + 1).max(0) as usize);
    f
}

fn fp_mul(f: &[i64], g: &[i64], p: i64) -> Vec<i64> {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![0i64; f.len() + g.len() - 1];
    for (i, &x) in f.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_sub(f: &[i64], g: &[i64], p: i64) -> Vec<i64> {
    let len = f.len().max(g.len());
    let out = (0..len)
        .map(|i| {
            let x = f.get(i).copied().unwrap_or(0);
            let y = g.get(i).copied().unwrap_or(0);
            (x - y).rem_euclid(p)
        })
        .collect();
    fp_trim(out)
}

fn fp_divmod(f: &[i64], g: &[i64], p: i64) -> (Vec<i64>, Vec<i64>) {
    let dg = fp_deg(g);
    assert!(dg >= 0, "division by zero polynomial");
    let inv_lead = mod_inverse_prime(g[dg as usize], p);
    let mut rem: Vec<i64> = f.to_vec();
    let mut quot = vec![0i64; f.len().saturating_sub(dg as usize)];
    while fp_deg(&rem) >= dg {
        let dr = fp_deg(&rem) as usize;
        let c = rem[dr] * inv_lead % p;
        let shift = dr - dg as usize;
        quot[shift] = c;
        for j in 0..=dg as usize {
            rem[shift + j] = (rem[shift + j] - c * g[j]).rem_euclid(p);
        }
    }
    (fp_trim(quot), fp_trim(rem))
}
