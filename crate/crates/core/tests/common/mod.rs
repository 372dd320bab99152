//! Independent reference computations. Nothing here calls into the
//! eigendecomposition, Ryser or LU paths of the crate.
#![allow(dead_code)]

use itertools::Itertools;
use spinstat::{CMatrix, C64};

/// `exp(a)` by scaling and squaring around a plain Taylor series.
pub fn expm_taylor(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|z| z / 2f64.powi(squarings as i32));
    let mut term = CMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=30 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(i·angle·h)` via [`expm_taylor`].
pub fn expm_i(h: &CMatrix, angle: f64) -> CMatrix {
    expm_taylor(&h.map(|z| z * C64::new(0.0, angle)))
}

fn sign_of(p: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sum over all `n!` permutations, optionally signed.
fn permutation_sum(m: &CMatrix, signed: bool) -> C64 {
    let n = m.nrows();
    (0..n)
        .permutations(n)
        .map(|p| {
            let prod: C64 = p.iter().enumerate().map(|(i, &j)| m[(i, j)]).product();
            if signed {
                prod * sign_of(&p)
            } else {
                prod
            }
        })
        .sum()
}

pub fn naive_permanent(m: &CMatrix) -> C64 {
    permutation_sum(m, false)
}

pub fn leibniz_determinant(m: &CMatrix) -> C64 {
    permutation_sum(m, true)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Operator exchanging the two factors of `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> CMatrix {
    CMatrix::from_fn(d * d, d * d, |i, j| {
        let (i1, i2) = (i / d, i % d);
        let (j1, j2) = (j / d, j % d);
        if i1 == j2 && i2 == j1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
