//! Hermitian eigendecomposition by the cyclic complex Jacobi method.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, HERMITIAN_TOL, ZERO};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
    /// `max |x_ij − conj(x_ji)|` of the input before symmetrization.
    pub hermitian_deviation: f64,
}

impl HermitianSpectrum {
    /// Diagonalizes the Hermitian part of `x`; fails if `x` is not Hermitian
    /// within the relative tolerance `1e-12·(1 + max|x|)`.
    pub fn new(x: &ComplexMatrix) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::DimensionMismatch {
                context: "HermitianSpectrum::new",
                expected: x.rows(),
                found: x.cols(),
            });
        }
        let deviation = x.hermitian_deviation();
        let tolerance = HERMITIAN_TOL * (1.0 + x.max_abs());
        if deviation > tolerance {
            return Err(Error::NotHermitian {
                deviation,
                tolerance,
            });
        }
        let (eigenvalues, eigenvectors) = jacobi(x.hermitian_part());
        Ok(Self {
            eigenvalues,
            eigenvectors,
            hermitian_deviation: deviation,
        })
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("empty spectrum")
    }

    pub fn min_vector(&self) -> Vec<C64> {
        self.eigenvectors.column(0)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_min_eig(x: &ComplexMatrix) -> Result<f64> {
    Ok(HermitianSpectrum::new(x)?.min())
}

/// Smallest eigenvalue together with a unit eigenvector.
pub fn hermitian_min_pair(x: &ComplexMatrix) -> Result<(f64, Vec<C64>)> {
    let s = HermitianSpectrum::new(x)?;
    Ok((s.min(), s.min_vector()))
}

/// Spectrum of the Hermitian part without the Hermiticity check, for
/// matrices derived from an already validated Hermitian operator.
pub(crate) fn spectrum_of_hermitian_part(x: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    jacobi(x.hermitian_part())
}

pub(crate) fn min_pair_unchecked(x: &ComplexMatrix) -> (f64, Vec<C64>) {
    let (values, vectors) = spectrum_of_hermitian_part(x);
    (values[0], vectors.column(0))
}

pub fn is_psd(x: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(hermitian_min_eig(x)? >= -tol)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(mut a: ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    let threshold = OFF_DIAGONAL_TOL * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// Annihilates `a[p][q]` with the unitary `U = diag-phase · real rotation`
/// acting on columns `p, q`, updating `a ← U* a U` and `v ← v U`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    // After the phase diag(1, e^{-iθ}) the block is real: [[app, g], [g, aqq]].
    let phase = apq / g;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();
    // U = [[c, s], [-s·e^{-iθ}, c·e^{-iθ}]] on (p, q).
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = pc * (-s);
    let u_qq = pc * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Scales `x` to unit norm in place and returns the original norm.
pub(crate) fn normalize(x: &mut [C64]) -> f64 {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in x.iter_mut() {
            *z /= norm;
        }
    }
    norm
}
