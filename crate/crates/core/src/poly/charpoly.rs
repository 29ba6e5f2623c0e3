//! Characteristic polynomials via Berkowitz's division-free recurrence.

use nalgebra::DMatrix;
use num_complex::Complex;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{cone, czero, Scalar};

/// `det(xI − mat)` as a monic polynomial of degree `n`.
///
/// Each leading principal block `[[M, c], [r, a]]` multiplies the running
/// polynomial by the Toeplitz column `(1, −a, −r·c, −r·M·c, −r·M²·c, …)`.
pub fn char_poly<T: Scalar>(mat: &DMatrix<Complex<T>>) -> Result<Polynomial<T>> {
    let (rows, cols) = mat.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let n = rows;
    // descending coefficients of the characteristic polynomial of the leading i×i block
    let mut desc = vec![cone::<T>()];
    let mut col = vec![czero::<T>(); n];
    let mut next = vec![czero::<T>(); n];
    for i in 0..n {
        let mut toeplitz = Vec::with_capacity(i + 2);
        toeplitz.push(cone());
        toeplitz.push(-mat[(i, i)]);
        for (r, slot) in col[..i].iter_mut().enumerate() {
            *slot = mat[(r, i)];
        }
        for _ in 0..i {
            let dot = (0..i).fold(czero(), |acc, j| acc + mat[(i, j)] * col[j]);
            toeplitz.push(-dot);
            for (r, slot) in next[..i].iter_mut().enumerate() {
                *slot = (0..i).fold(czero(), |acc, j| acc + mat[(r, j)] * col[j]);
            }
            col[..i].copy_from_slice(&next[..i]);
        }
        let mut updated = vec![czero(); i + 2];
        for (t, out) in updated.iter_mut().enumerate() {
            for (j, q) in toeplitz.iter().enumerate().take(t + 1) {
                if let Some(&p) = desc.get(t - j) {
                    *out += *q * p;
                }
            }
        }
        desc = updated;
    }
    desc.reverse();
    Ok(Polynomial::new(desc))
}
