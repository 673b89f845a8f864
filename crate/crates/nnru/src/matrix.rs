//! Arithmetic in M = M_k(Z)[X]/(X^n − I): k×k matrices whose entries live in
//! the convolution ring R. For k ≥ 2 multiplication is noncommutative, which
//! is the whole point of the cryptosystem built on top.
//!
//! Inverses are computed modulo a prime (Gauss–Jordan with unit-pivot search
//! over F_p[X]/(X^n − 1)) or modulo 2^e (invert mod 2, then Newton-lift).
//! Both return two-sided inverses: the base ring is commutative, so a
//! one-sided matrix inverse is automatically two-sided; we verify anyway.

use crate::error::{NnruError, Result};
use crate::ring::{
    poly_inverse_mod_prime, reduce_centered, reduce_mod, ring_add, ring_mul, ring_sub,
    RingElement,
};
use std::ops::{Index, IndexMut};

/// A k×k matrix over R, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixElement {
    k: usize,
    n: usize,
    entries: Vec<RingElement>,
}

impl MatrixElement {
    pub fn from_entries(k: usize, n: usize, entries: Vec<RingElement>) -> Self {
        assert!(k >= 1 && n >= 1, "dimensions must be positive");
        assert_eq!(entries.len(), k * k, "expected k² entries");
        assert!(entries.iter().all(|e| e.n() == n), "entry degree mismatch");
        MatrixElement { k, n, entries }
    }

    pub fn from_fn(k: usize, n: usize, mut f: impl FnMut(usize, usize) -> RingElement) -> Self {
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                entries.push(f(i, j));
            }
        }
        Self::from_entries(k, n, entries)
    }

    pub fn zero(k: usize, n: usize) -> Self {
        Self::from_fn(k, n, |_, _| RingElement::zero(n))
    }

    pub fn identity(k: usize, n: usize) -> Self {
        Self::from_fn(k, n, |i, j| {
            if i == j {
                RingElement::one(n)
            } else {
                RingElement::zero(n)
            }
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Multiplies every coefficient by the scalar `s`.
    pub fn scale(&self, s: i64) -> Self {
        Self::from_entries(self.k, self.n, self.entries.iter().map(|e| e.scale(s)).collect())
    }

    /// All n·k² coefficients in row-major entry order, ascending degree.
    pub fn coeffs(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.iter().flat_map(|e| e.coeffs.iter().copied())
    }
}

impl Index<(usize, usize)> for MatrixElement {
    type Output = RingElement;
    fn index(&self, (i, j): (usize, usize)) -> &RingElement {
        &self.entries[i * self.k + j]
    }
}

impl IndexMut<(usize, usize)> for MatrixElement {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RingElement {
        &mut self.entries[i * self.k + j]
    }
}

fn assert_same_dims(a: &MatrixElement, b: &MatrixElement) {
    assert_eq!(
        (a.k, a.n),
        (b.k, b.n),
        "matrix dimension mismatch: ({},{}) vs ({},{})",
        a.k,
        a.n,
        b.k,
        b.n
    );
}

/// Entrywise sum. Panics on dimension mismatch.
pub fn mat_add(a: &MatrixElement, b: &MatrixElement) -> MatrixElement {
    assert_same_dims(a, b);
    MatrixElement::from_entries(
        a.k,
        a.n,
        a.entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| ring_add(x, y))
            .collect(),
    )
}

/// Entrywise difference. Panics on dimension mismatch.
pub fn mat_sub(a: &MatrixElement, b: &MatrixElement) -> MatrixElement {
    assert_same_dims(a, b);
    MatrixElement::from_entries(
        a.k,
        a.n,
        a.entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| ring_sub(x, y))
            .collect(),
    )
}

/// Schoolbook matrix product: k³ polynomial multiplications, exact integers.
pub fn mat_mul(a: &MatrixElement, b: &MatrixElement) -> MatrixElement {
    mat_mul_counted(a, b).0
}

/// Schoolbook product plus the number of polynomial multiplications
/// performed (always k³; returned so benchmark counters need no globals).
pub fn mat_mul_counted(a: &MatrixElement, b: &MatrixElement) -> (MatrixElement, u64) {
    assert_same_dims(a, b);
    let (k, n) = (a.k, a.n);
    let mut mults = 0u64;
    let out = MatrixElement::from_fn(k, n, |i, j| {
        let mut acc = RingElement::zero(n);
        for u in 0..k {
            acc = ring_add(&acc, &ring_mul(&a[(i, u)], &b[(u, j)]));
            mults += 1;
        }
        acc
    });
    (out, mults)
}

/// Strassen product: identical value to [`mat_mul`], seven recursive block
/// products per halving. Odd k is padded to k+1 with zero blocks; the
/// padding blocks go through the same recursion, so the multiplication count
/// reflects the padded size.
pub fn mat_mul_strassen(a: &MatrixElement, b: &MatrixElement) -> MatrixElement {
    mat_mul_strassen_counted(a, b).0
}

/// Strassen product plus the polynomial-multiplication count
/// (7^log₂k for power-of-two k).
pub fn mat_mul_strassen_counted(a: &MatrixElement, b: &MatrixElement) -> (MatrixElement, u64) {
    assert_same_dims(a, b);
    strassen_rec(a, b)
}

fn strassen_rec(a: &MatrixElement, b: &MatrixElement) -> (MatrixElement, u64) {
    let (k, n) = (a.k, a.n);
    if k == 1 {
        return (
            MatrixElement::from_entries(1, n, vec![ring_mul(&a[(0, 0)], &b[(0, 0)])]),
            1,
        );
    }
    if k % 2 == 1 {
        let (padded, count) = strassen_rec(&pad(a, k + 1), &pad(b, k + 1));
        return (crop(&padded, k), count);
    }
    let h = k / 2;
    let (a11, a12, a21, a22) = (block(a, 0, 0, h), block(a, 0, h, h), block(a, h, 0, h), block(a, h, h, h));
    let (b11, b12, b21, b22) = (block(b, 0, 0, h), block(b, 0, h, h), block(b, h, 0, h), block(b, h, h, h));

    let (m1, c1) = strassen_rec(&mat_add(&a11, &a22), &mat_add(&b11, &b22));
    let (m2, c2) = strassen_rec(&mat_add(&a21, &a22), &b11);
    let (m3, c3) = strassen_rec(&a11, &mat_sub(&b12, &b22));
    let (m4, c4) = strassen_rec(&a22, &mat_sub(&b21, &b11));
    let (m5, c5) = strassen_rec(&mat_add(&a11, &a12), &b22);
    let (m6, c6) = strassen_rec(&mat_sub(&a21, &a11), &mat_add(&b11, &b12));
    let (m7, c7) = strassen_rec(&mat_sub(&a12, &a22), &mat_add(&b21, &b22));

    let c11 = mat_add(&mat_sub(&mat_add(&m1, &m4), &m5), &m7);
    let c12 = mat_add(&m3, &m5);
    let c21 = mat_add(&m2, &m4);
    let c22 = mat_add(&mat_add(&mat_sub(&m1, &m2), &m3), &m6);

    let out = MatrixElement::from_fn(k, n, |i, j| {
        let q = match (i < h, j < h) {
            (true, true) => &c11,
            (true, false) => &c12,
            (false, true) => &c21,
            (false, false) => &c22,
        };
        q[(i % h, j % h)].clone()
    });
    (out, c1 + c2 + c3 + c4 + c5 + c6 + c7)
}

fn block(a: &MatrixElement, row: usize, col: usize, size: usize) -> MatrixElement {
    MatrixElement::from_fn(size, a.n, |i, j| a[(row + i, col + j)].clone())
}

fn pad(a: &MatrixElement, size: usize) -> MatrixElement {
    MatrixElement::from_fn(size, a.n, |i, j| {
        if i < a.k && j < a.k {
            a[(i, j)].clone()
        } else {
            RingElement::zero(a.n)
        }
    })
}

fn crop(a: &MatrixElement, size: usize) -> MatrixElement {
    MatrixElement::from_fn(size, a.n, |i, j| a[(i, j)].clone())
}

/// Entrywise modular reduction; `centered` selects the centered window.
/// Panics if `m < 2`.
pub fn mat_reduce(a: &MatrixElement, m: i64, centered: bool) -> MatrixElement {
    let f = if centered { reduce_centered } else { reduce_mod };
    MatrixElement::from_entries(a.k, a.n, a.entries.iter().map(|e| f(e, m)).collect())
}

/// Inverse modulo a prime, by Gauss–Jordan elimination over
/// F_prime[X]/(X^n − 1) with unit-pivot search: each column is scanned top
/// to bottom for an entry invertible in the quotient ring, and the first
/// unit found becomes the pivot.
pub fn mat_inverse_mod_prime(a: &MatrixElement, prime: i64) -> Result<MatrixElement> {
    let (k, n) = (a.k, a.n);
    // Augmented [A | I], all arithmetic mod prime.
    let mut rows: Vec<Vec<RingElement>> = (0..k)
        .map(|i| {
            let mut row: Vec<RingElement> =
                (0..k).map(|j| reduce_mod(&a[(i, j)], prime)).collect();
            row.extend((0..k).map(|j| {
                if i == j {
                    RingElement::one(n)
                } else {
                    RingElement::zero(n)
                }
            }));
            row
        })
        .collect();

    for col in 0..k {
        let pivot = (col..k).find_map(|row| {
            poly_inverse_mod_prime(&rows[row][col], prime)
                .ok()
                .map(|inv| (row, inv))
        });
        let Some((pivot_row, pivot_inv)) = pivot else {
            return Err(NnruError::NotInvertible { modulus: prime });
        };
        rows.swap(col, pivot_row);
        for x in rows[col].iter_mut() {
            *x = reduce_mod(&ring_mul(&pivot_inv, x), prime);
        }
        let pivot_values = std::mem::take(&mut rows[col]);
        for (row, other) in rows.iter_mut().enumerate() {
            if row == col || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (value, pivot_value) in other.iter_mut().zip(&pivot_values) {
                let delta = ring_mul(&factor, pivot_value);
                *value = reduce_mod(&ring_sub(value, &delta), prime);
            }
        }
        rows[col] = pivot_values;
    }

    let inv = MatrixElement::from_fn(k, n, |i, j| rows[i][k + j].clone());
    let id = MatrixElement::identity(k, n);
    if mat_reduce(&mat_mul(a, &inv), prime, false) != id
        || mat_reduce(&mat_mul(&inv, a), prime, false) != id
    {
        return Err(NnruError::NotInvertible { modulus: prime });
    }
    Ok(inv)
}

/// Inverse modulo 2^e: invert mod 2, then Newton-lift B ← B(2I − AB),
/// doubling the modulus precision until 2^e. Two-sided, verified.
pub fn mat_inverse_mod_2e(a: &MatrixElement, e: u32) -> Result<MatrixElement> {
    assert!((1..=62).contains(&e), "exponent out of range: {e}");
    let (k, n) = (a.k, a.n);
    let mut b = mat_inverse_mod_prime(a, 2)?;
    let mut bits = 1u32;
    while bits < e {
        bits = (2 * bits).min(e);
        let m = 1i64 << bits;
        let a_red = mat_reduce(a, m, false);
        let two_i = MatrixElement::identity(k, n).scale(2);
        let correction = mat_sub(&two_i, &mat_mul(&a_red, &b));
        b = mat_reduce(&mat_mul(&b, &correction), m, false);
    }
    let m = 1i64 << e;
    let id = MatrixElement::identity(k, n);
    if mat_reduce(&mat_mul(a, &b), m, false) != id || mat_reduce(&mat_mul(&b, a), m, false) != id {
        return Err(NnruError::NotInvertible { modulus: m });
    }
    Ok(b)
}

/// Width ‖A‖∞: global max coefficient minus global min coefficient over all
/// k² polynomials.
pub fn mat_width_inf(a: &MatrixElement) -> i64 {
    let max = a.coeffs().max().unwrap();
    let min = a.coeffs().min().unwrap();
    max - min
}

/// An element is short when its width is at most p.
pub fn is_short(a: &MatrixElement, p: i64) -> bool {
    mat_width_inf(a) <= p
}

/// Centered L2 norm: sqrt(Σ (c − μ)²) with μ the mean over all nk²
/// coefficients.
pub fn mat_centered_l2(a: &MatrixElement) -> f64 {
    let count = (a.n * a.k * a.k) as f64;
    let mean = a.coeffs().map(|c| c as f64).sum::<f64>() / count;
    a.coeffs()
        .map(|c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Coefficient standard deviation σ = ‖A‖/sqrt(nk²) with ‖·‖ the centered
/// L2 norm.
pub fn mat_sigma(a: &MatrixElement) -> f64 {
    mat_centered_l2(a) / ((a.n * a.k * a.k) as f64).sqrt()
}
