//! Small dense-matrix helpers shared by the spin and tilted-basis code.

use nalgebra::SymmetricEigen;

use crate::{CMatrix, CVector, C64};

/// `exp(i·angle·h)` for a Hermitian `h`, through its unitary eigendecomposition.
///
/// Only the Hermitian part of `h` is used; callers pass generators that are
/// Hermitian by construction.
pub fn exp_i_hermitian(h: &CMatrix, angle: f64) -> CMatrix {
    let n = h.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let phases = CVector::from_iterator(
        n,
        eig.eigenvalues
            .iter()
            .map(|&lambda| C64::from_polar(1.0, angle * lambda)),
    );
    let scaled = CMatrix::from_fn(n, n, |i, j| v[(i, j)] * phases[j]);
    scaled * v.adjoint()
}

/// Eigenvector of the Hermitian matrix `h` with the largest eigenvalue,
/// normalized and with its largest-magnitude component made real positive.
pub fn top_eigenvector(h: &CMatrix) -> CVector {
    let eig = SymmetricEigen::new(h.clone());
    let (k, _) =
        eig.eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &l)| {
                if l > best.1 {
                    (i, l)
                } else {
                    best
                }
            });
    let mut v = eig.eigenvectors.column(k).into_owned();
    fix_phase(&mut v);
    v
}

/// Rotates the global phase of `v` so that its largest component is real positive.
pub fn fix_phase(v: &mut CVector) {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C64::new(0.0, 0.0));
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

/// Largest entrywise modulus of `a - b`. Shapes must agree.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `‖U†U − I‖∞` (largest entrywise modulus).
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && max_abs_diff(a, &a.adjoint()) < tol
}

/// Smallest singular value of `a` (zero for an empty matrix).
pub fn min_singular_value(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Sign of the permutation `perm` of `0..perm.len()`, from its cycle decomposition.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0usize;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
