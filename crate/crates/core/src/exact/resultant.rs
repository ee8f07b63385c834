use super::poly::ExactPoly;
use crate::error::{Error, Result};

/// Sylvester resultant of `p` and `q` with respect to `ν`.
///
/// The Sylvester matrix has `deg q` shifted rows of `p`'s coefficients (leading
/// first) above `deg p` rows of `q`'s. Its entries live in `Q[z, b]`; the
/// determinant is taken by fraction-free Bareiss elimination, whose divisions
/// are exact in that ring.
pub fn resultant_nu(p: &ExactPoly, q: &ExactPoly) -> Result<ExactPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::Degenerate("resultant of the zero polynomial"));
    }
    let m = p.deg_nu().unwrap_or(0) as usize;
    let n = q.deg_nu().unwrap_or(0) as usize;
    if m == 0 || n == 0 {
        return Err(Error::Degenerate("resultant input has ν-degree 0"));
    }
    let size = m + n;
    let mut mat = vec![vec![ExactPoly::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            mat[i][i + j] = p.coeff_nu((m - j) as u32);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            mat[n + i][i + j] = q.coeff_nu((n - j) as u32);
        }
    }
    Ok(bareiss_det(mat))
}

/// Determinant over `Q[z, ν, b]` by Bareiss elimination.
pub fn bareiss_det(mut a: Vec<Vec<ExactPoly>>) -> ExactPoly {
    let n = a.len();
    if n == 0 {
        return ExactPoly::one();
    }
    let mut negate = false;
    let mut prev = ExactPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return ExactPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division is exact");
            }
            a[i][k] = ExactPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}
