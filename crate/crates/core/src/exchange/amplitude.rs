//! Product-orbital amplitudes: the determinant for fermions and the
//! permanent for bosons. Entry `(i, j)` is orbital `j` evaluated at particle `i`.

use crate::{CMatrix, Error, Result, C64};

/// Largest matrix accepted by [`permanent_amplitude`].
pub const MAX_PERMANENT_DIM: usize = 12;

fn check_square(m: &CMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn slater_amplitude(orbital_matrix: &CMatrix) -> Result<C64> {
    let n = check_square(orbital_matrix)?;
    let mut a = orbital_matrix.clone();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))
            .expect("non-empty range");
        if a[(pivot, col)].norm() == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        if pivot != col {
            a.swap_rows(pivot, col);
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for row in col + 1..n {
            let factor = a[(row, col)] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col + 1..n {
                let v = a[(col, k)];
                a[(row, k)] -= factor * v;
            }
        }
    }
    Ok(det)
}

/// Permanent by Ryser's inclusion–exclusion formula, visiting column subsets
/// in Gray-code order so each step updates the row sums with one column.
///
/// `perm(A) = (−1)^n Σ_{S ⊆ cols} (−1)^{|S|} Π_i Σ_{j∈S} a_ij`, `O(2ⁿ·n)`.
pub fn permanent_amplitude(orbital_matrix: &CMatrix) -> Result<C64> {
    let n = check_square(orbital_matrix)?;
    if n > MAX_PERMANENT_DIM {
        return Err(Error::TooLarge {
            n,
            max: MAX_PERMANENT_DIM,
        });
    }
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut gray: u32 = 0;
    for step in 1u32..(1 << n) {
        let next = step ^ (step >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        gray = next;
        for (i, sum) in row_sums.iter_mut().enumerate() {
            if added {
                *sum += orbital_matrix[(i, col)];
            } else {
                *sum -= orbital_matrix[(i, col)];
            }
        }
        let prod: C64 = row_sums.iter().product();
        if gray.count_ones().is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n % 2 == 0 { total } else { -total })
}
