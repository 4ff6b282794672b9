use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{invalid, Error, Result};

const MAX_DIM: usize = 400;
const DEFLATION_TOL: f64 = 1e-14;

/// Eigenvalues of a matrix, sorted by real part then imaginary part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub eigenvalues: Vec<Complex64>,
    /// Largest real part over all eigenvalues.
    pub spectral_abscissa: f64,
    /// Number of QR sweeps spent.
    pub iterations: usize,
}

impl EigenReport {
    fn new(mut eigenvalues: Vec<Complex64>, iterations: usize) -> Self {
        eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let spectral_abscissa = eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        Self {
            eigenvalues,
            spectral_abscissa,
            iterations,
        }
    }

    pub fn max_abs_real(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re.abs())
            .fold(0.0, f64::max)
    }
}

/// Complex Givens rotation `[[c, s], [-conj(s), c]]` with real `c`, mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let r = an.hypot(b.norm());
    if r == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    (an / r, (a / an) * b.conj() / r)
}

/// Eigenvalue of the 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let delta = (a - d) * 0.5;
    let bc = b * c;
    let mut s = (delta * delta + bc).sqrt();
    if (delta.conj() * s).re < 0.0 {
        s = -s;
    }
    let denom = delta + s;
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// One explicitly shifted QR sweep restricted to the active window `lo..=hi`.
fn qr_sweep(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        for i in lo..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + s.conj() * y;
            h[(i, k + 1)] = -s * x + y * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// All eigenvalues of an upper Hessenberg matrix by shifted QR with deflation.
///
/// Uses Wilkinson shifts from the trailing 2x2 block, an exceptional shift every
/// tenth stalled sweep, and a total budget of `100 * n` sweeps.
pub fn eig_hessenberg(matrix: &ComplexMatrix) -> Result<EigenReport> {
    let n = matrix.dim();
    if n > MAX_DIM {
        return invalid(format!("eigen solver supports n <= {MAX_DIM}, got {n}"));
    }
    if !matrix.is_upper_hessenberg() {
        return invalid("matrix is not upper Hessenberg");
    }
    if !matrix.is_finite() {
        return invalid("matrix has non-finite entries");
    }
    let mut h = matrix.clone();
    let hnorm = matrix
        .as_slice()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let budget = 100 * n;
    let mut eigenvalues = vec![Complex64::new(0.0, 0.0); n];
    let mut sweeps = 0usize;
    let mut stalled = 0usize;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eigenvalues[0] = h[(0, 0)];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if scale == 0.0 {
                scale = hnorm;
            }
            if sub <= DEFLATION_TOL * scale {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eigenvalues[hi] = h[(hi, hi)];
            hi -= 1;
            stalled = 0;
            continue;
        }
        if sweeps >= budget {
            return Err(Error::NonConvergence {
                what: "Hessenberg QR",
                budget,
            });
        }
        sweeps += 1;
        stalled += 1;
        let mu = if stalled.is_multiple_of(10) {
            let sub = h[(hi, hi - 1)].norm();
            h[(hi, hi)] + Complex64::new(0.75 * sub, 0.4 * sub)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_sweep(&mut h, lo, hi, mu);
    }
    Ok(EigenReport::new(eigenvalues, sweeps))
}

/// LU factorisation of `T - shift*I` for a real tridiagonal `T` with partial
/// pivoting, followed by a solve. Zero pivots are nudged to `tiny`.
fn shifted_tridiagonal_solve(diag: &[f64], off: &[f64], shift: f64, tiny: f64, rhs: &mut [f64]) {
    let n = diag.len();
    let mut d: Vec<f64> = diag.iter().map(|x| x - shift).collect();
    let mut dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
            swapped[i] = true;
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            rhs.swap(i, i + 1);
        }
        rhs[i + 1] -= dl[i] * rhs[i];
    }
    rhs[n - 1] /= d[n - 1];
    if n >= 2 {
        rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
}

fn real_tridiagonal(diag: &[f64], off: &[f64]) -> ComplexMatrix {
    let c = |x: &f64| Complex64::new(*x, 0.0);
    let offc: Vec<Complex64> = off.iter().map(c).collect();
    let diagc: Vec<Complex64> = diag.iter().map(c).collect();
    ComplexMatrix::tridiagonal(&offc, &diagc, &offc)
}

fn check_tridiagonal(diag: &[f64], off: &[f64]) -> Result<()> {
    if diag.is_empty() || off.len() + 1 != diag.len() {
        return invalid("tridiagonal bands have inconsistent lengths");
    }
    if diag.iter().chain(off).any(|x| !x.is_finite()) {
        return invalid("tridiagonal matrix has non-finite entries");
    }
    Ok(())
}

/// Eigenvalues (ascending) and unit eigenvectors of a real symmetric tridiagonal
/// matrix. Eigenvalues come from [`eig_hessenberg`]; eigenvectors from two
/// rounds of inverse iteration at the computed eigenvalue.
pub fn symmetric_tridiagonal_eigenpairs(
    diag: &[f64],
    off: &[f64],
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    check_tridiagonal(diag, off)?;
    let n = diag.len();
    let report = eig_hessenberg(&real_tridiagonal(diag, off))?;
    let values: Vec<f64> = report.eigenvalues.iter().map(|z| z.re).collect();
    let tnorm = diag
        .iter()
        .map(|x| x.abs())
        .chain(off.iter().map(|x| 2.0 * x.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * tnorm;
    let vectors = values
        .iter()
        .map(|&lambda| {
            let mut v: Vec<f64> = (0..n)
                .map(|i| 1.0 + 0.37 * ((i * 7 + 3) % 11) as f64)
                .collect();
            for _ in 0..3 {
                shifted_tridiagonal_solve(diag, off, lambda, tiny, &mut v);
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter_mut().for_each(|x| *x /= norm);
            }
            v
        })
        .collect();
    Ok((values, vectors))
}

/// Whether the eigenvalues of consecutive leading principal submatrices of a
/// real symmetric tridiagonal matrix strictly interlace.
pub fn char_poly_roots_interlace(diag: &[f64], off: &[f64]) -> Result<bool> {
    check_tridiagonal(diag, off)?;
    if off.contains(&0.0) {
        return invalid("interlacing requires nonzero subdiagonal entries");
    }
    let mut previous: Option<Vec<f64>> = None;
    for order in 1..=diag.len() {
        let report = eig_hessenberg(&real_tridiagonal(&diag[..order], &off[..order - 1]))?;
        let roots: Vec<f64> = report.eigenvalues.iter().map(|z| z.re).collect();
        if let Some(inner) = &previous {
            let interlaced = inner
                .iter()
                .enumerate()
                .all(|(j, &r)| roots[j] < r && r < roots[j + 1]);
            if !interlaced {
                return Ok(false);
            }
        }
        previous = Some(roots);
    }
    Ok(true)
}
