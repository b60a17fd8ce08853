//! Dense complex matrices and the fixed operators on `H ⊗ H`.
//!
//! Composite indices follow `(i, j) ↦ i·dim(second) + j`, so the first tensor
//! factor is the slow index.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Relative tolerance used when a matrix is required to be Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Which leg of a bipartite space `K ⊗ H` to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Leg {
    First,
    Second,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "ComplexMatrix::from_vec",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row slices. Handy for literals in tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Rank-one `|x⟩⟨y|`.
    pub fn outer(x: &[C64], y: &[C64]) -> Self {
        Self::from_fn(x.len(), y.len(), |i, j| x[i] * y[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose `X*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance; panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max |x_ij − conj(x_ji)|`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermitian_deviation() <= rel_tol * (1.0 + self.max_abs())
    }

    /// `(X + X*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square(), "hermitian_part needs a square matrix");
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `⟨x|X|x⟩`.
    pub fn quadratic_form(&self, x: &[C64]) -> C64 {
        let ax = self.matvec(x);
        x.iter().zip(&ax).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: "matmul",
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `Tr(X·Y)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> C64 {
        assert_eq!((self.cols, self.rows), (rhs.rows, rhs.cols));
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.data[i * self.cols + k] * rhs.data[k * rhs.cols + i];
            }
        }
        acc
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in elementwise op"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Panics on inner-dimension mismatch; use [`ComplexMatrix::matmul`] for a
/// fallible product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Kronecker product of vectors.
pub fn kron_vec(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter()
        .flat_map(|&a| y.iter().map(move |&b| a * b))
        .collect()
}

/// Traces out one leg of an operator on `K ⊗ H` with `dims = (k, n)`.
pub fn partial_trace(x: &ComplexMatrix, leg: Leg, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let (k, n) = dims;
    if !x.is_square() || x.rows != k * n {
        return Err(Error::DimensionMismatch {
            context: "partial_trace",
            expected: k * n,
            found: x.rows,
        });
    }
    Ok(match leg {
        Leg::First => {
            ComplexMatrix::from_fn(n, n, |r, s| (0..k).map(|i| x[(i * n + r, i * n + s)]).sum())
        }
        Leg::Second => {
            ComplexMatrix::from_fn(k, k, |i, j| (0..n).map(|r| x[(i * n + r, j * n + r)]).sum())
        }
    })
}

/// Partial transpose of one leg of an operator on `K ⊗ H` with `dims = (k, n)`.
pub fn partial_transpose(
    x: &ComplexMatrix,
    leg: Leg,
    dims: (usize, usize),
) -> Result<ComplexMatrix> {
    let (k, n) = dims;
    if !x.is_square() || x.rows != k * n {
        return Err(Error::DimensionMismatch {
            context: "partial_transpose",
            expected: k * n,
            found: x.rows,
        });
    }
    Ok(ComplexMatrix::from_fn(x.rows, x.cols, |row, col| {
        let (i, r) = (row / n, row % n);
        let (j, s) = (col / n, col % n);
        match leg {
            Leg::First => x[(j * n + r, i * n + s)],
            Leg::Second => x[(i * n + s, j * n + r)],
        }
    }))
}

/// Matrix unit `e_ij` in `M_n`, one-based indices.
pub fn matrix_unit(i: usize, j: usize, n: usize) -> Result<ComplexMatrix> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexOutOfRange {
            row: i,
            col: j,
            dim: n,
        });
    }
    Ok(unit(i - 1, j - 1, n))
}

/// Zero-based matrix unit, for internal loops.
pub(crate) fn unit(i: usize, j: usize, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// Unnormalized `p = Σ e_ij ⊗ e_ij`, i.e. `|u⟩⟨u|` with `u = Σ e_i ⊗ e_i`.
pub fn max_entangled_p(n: usize) -> ComplexMatrix {
    let d = n * n;
    let mut p = ComplexMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            p[(i * n + i, j * n + j)] = ONE;
        }
    }
    p
}

/// Flip `F = Σ e_ij ⊗ e_ji`, the swap `x ⊗ y ↦ y ⊗ x`.
pub fn flip_operator(n: usize) -> ComplexMatrix {
    let d = n * n;
    let mut f = ComplexMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            f[(i * n + j, j * n + i)] = ONE;
        }
    }
    f
}

/// Integer square root when `d` is a perfect square.
pub(crate) fn exact_sqrt(d: usize) -> Option<usize> {
    let r = (d as f64).sqrt().round() as usize;
    (r * r == d).then_some(r)
}

/// `J x J` for the antilinear flip `J(z e_i ⊗ e_j) = z̄ e_j ⊗ e_i`.
pub fn j_conjugate(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch {
            context: "j_conjugate",
            expected: x.rows,
            found: x.cols,
        });
    }
    let n = exact_sqrt(x.rows).ok_or(Error::NotPerfectSquare(x.rows))?;
    Ok(ComplexMatrix::from_fn(x.rows, x.cols, |r, c| {
        let (a, b) = (r / n, r % n);
        let (cc, d) = (c / n, c % n);
        x[(b * n + a, d * n + cc)].conj()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample_2x2(seed: f64) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, j| {
            let t = seed + (i * 2 + j) as f64;
            c(t.sin(), (1.7 * t).cos())
        })
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_unit_bookkeeping() {
        let e11 = matrix_unit(1, 1, 2).unwrap();
        let e22 = matrix_unit(2, 2, 2).unwrap();
        let k = kron(&e11, &e22);
        for r in 0..4 {
            for s in 0..4 {
                let expect = if r == 1 && s == 1 { ONE } else { ZERO };
                assert_eq!(k[(r, s)], expect);
            }
        }
    }

    #[test]
    fn kron_trace_is_multiplicative_and_associative() {
        let (a, b, d) = (sample_2x2(0.3), sample_2x2(1.1), sample_2x2(2.9));
        let lhs = kron(&a, &b).trace();
        assert!((lhs - a.trace() * b.trace()).norm() < 1e-12);
        let left = kron(&kron(&a, &b), &d);
        let right = kron(&a, &kron(&b, &d));
        assert!(left.distance(&right) < 1e-14);
    }

    #[test]
    fn partial_traces_of_p_are_identity() {
        let p = max_entangled_p(2);
        let i2 = ComplexMatrix::identity(2);
        assert!(partial_trace(&p, Leg::First, (2, 2)).unwrap().distance(&i2) < 1e-15);
        assert!(
            partial_trace(&p, Leg::Second, (2, 2))
                .unwrap()
                .distance(&i2)
                < 1e-15
        );
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let b = sample_2x2(0.7);
        let ab = kron(&a, &b);
        let first = partial_trace(&ab, Leg::First, (2, 2)).unwrap();
        assert!(first.distance(&b.scale_real(3.0)) < 1e-12);
        let rect = kron(&ComplexMatrix::identity(3), &b);
        let second = partial_trace(&rect, Leg::Second, (3, 2)).unwrap();
        assert!(second.distance(&ComplexMatrix::identity(3).scale(b.trace())) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let x = ComplexMatrix::identity(5);
        assert!(matches!(
            partial_trace(&x, Leg::First, (2, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_transpose_of_products() {
        let (a, b) = (
            sample_2x2(0.9),
            ComplexMatrix::identity(3).scale(c(0.5, -1.0)),
        );
        let b = &b + &ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64 * 0.3));
        let ab = kron(&a, &b);
        let first = partial_transpose(&ab, Leg::First, (2, 3)).unwrap();
        assert!(first.distance(&kron(&a.transpose(), &b)) < 1e-14);
        let second = partial_transpose(&ab, Leg::Second, (2, 3)).unwrap();
        assert!(second.distance(&kron(&a, &b.transpose())) < 1e-14);
        // (ι⊗t)(p) = F
        let pt = partial_transpose(&max_entangled_p(3), Leg::Second, (3, 3)).unwrap();
        assert_eq!(pt, flip_operator(3));
    }

    #[test]
    fn matrix_unit_algebra() {
        let e11 = matrix_unit(1, 1, 2).unwrap();
        let e12 = matrix_unit(1, 2, 2).unwrap();
        let e21 = matrix_unit(2, 1, 2).unwrap();
        assert_eq!(
            e11,
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])
        );
        assert_eq!(&e12 * &e21, e11);
        assert_eq!(&e12 * &e12, ComplexMatrix::zeros(2, 2));
        assert!(matrix_unit(0, 1, 2).is_err());
        assert!(matrix_unit(1, 3, 2).is_err());
    }

    #[test]
    fn p_entries_and_square() {
        let p = max_entangled_p(2);
        let ones = [(0, 0), (0, 3), (3, 0), (3, 3)];
        for r in 0..4 {
            for s in 0..4 {
                let expect = if ones.contains(&(r, s)) { ONE } else { ZERO };
                assert_eq!(p[(r, s)], expect);
            }
        }
        assert_eq!(&p * &p, p.scale_real(2.0));
        assert_eq!(p.trace(), c(2.0, 0.0));
    }

    #[test]
    fn trace_against_p_is_trace_of_a_bt() {
        let (a, b) = (sample_2x2(0.4), sample_2x2(3.3));
        let lhs = max_entangled_p(2).trace_product(&kron(&a, &b));
        let rhs = (&a * &b.transpose()).trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn normalized_p_is_a_projection() {
        for n in 1..=4 {
            let q = max_entangled_p(n).scale_real(1.0 / n as f64);
            assert!((&q * &q).distance(&q) < 1e-12);
            assert!(q.hermitian_deviation() < 1e-12);
        }
    }

    #[test]
    fn flip_swaps_factors() {
        let f = flip_operator(2);
        let e1 = [ONE, ZERO];
        let e2 = [ZERO, ONE];
        assert_eq!(f.matvec(&kron_vec(&e1, &e2)), kron_vec(&e2, &e1));
        let (a, b) = (sample_2x2(0.2), sample_2x2(5.0));
        let swapped = &(&f * &kron(&a, &b)) * &f;
        assert!(swapped.distance(&kron(&b, &a)) < 1e-14);
        assert!((&f * &f).distance(&ComplexMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn j_conjugation_properties() {
        let p = max_entangled_p(2);
        assert_eq!(j_conjugate(&p).unwrap(), p);

        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[-0.5, 3.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.5], &[4.0, -1.0]]);
        assert!(j_conjugate(&kron(&a, &b)).unwrap().distance(&kron(&b, &a)) < 1e-14);

        let i_id = ComplexMatrix::identity(4).scale(c(0.0, 1.0));
        assert_eq!(j_conjugate(&i_id).unwrap(), i_id.scale_real(-1.0));

        let x = kron(&sample_2x2(1.3), &sample_2x2(-0.4));
        let back = j_conjugate(&j_conjugate(&x).unwrap()).unwrap();
        assert!(back.distance(&x) < 1e-14);

        let real = x.hermitian_part().conj().hermitian_part();
        let real = ComplexMatrix::from_fn(4, 4, |i, j| c(real[(i, j)].re, 0.0));
        let f = flip_operator(2);
        assert!(j_conjugate(&real).unwrap().distance(&(&(&f * &real) * &f)) < 1e-14);
    }

    #[test]
    fn j_conjugate_needs_square_dimension() {
        assert!(matches!(
            j_conjugate(&ComplexMatrix::identity(3)),
            Err(Error::NotPerfectSquare(3))
        ));
    }
}
