use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{invalid, Error, Result};

const MAX_TERMS: usize = 60;

/// `exp(t * matrix)` by scaling and squaring around a truncated Taylor series.
///
/// The scaled argument has 1-norm at most one; the series stops once a term
/// falls below machine precision relative to the partial sum.
pub fn expm(matrix: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() || t < 0.0 {
        return invalid(format!("expm needs a finite t >= 0, got {t}"));
    }
    if !matrix.is_finite() {
        return invalid("expm argument has non-finite entries");
    }
    let n = matrix.dim();
    let x = matrix.scale(Complex64::new(t, 0.0));
    let norm = x.norm1();
    let squarings = if norm > 1.0 {
        norm.log2().ceil() as u32
    } else {
        0
    };
    let y = x.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &y).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.norm1() <= f64::EPSILON * 0.5 * sum.norm1() {
            break;
        }
    }
    for done in 0..squarings {
        sum = &sum * &sum;
        if !sum.is_finite() {
            return Err(Error::ExpmOverflow {
                squarings: done + 1,
            });
        }
    }
    Ok(sum)
}
