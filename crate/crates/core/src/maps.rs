//! Linear maps `B(K) → B(H)` carried by their Choi matrices.
//!
//! The Choi matrix of `φ: M_k → M_n` is `C_φ = Σ_ij e_ij ⊗ φ(e_ij)`, a
//! `(k·n) × (k·n)` matrix whose first leg is the input and second leg the
//! output, so `C_φ[(i, r), (j, s)] = φ(e_ij)[r, s]`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{kron, max_entangled_p, unit, ComplexMatrix, C64, ZERO};
use crate::rng;

/// Tolerance on the imaginary part of a pairing of Hermitian Choi matrices.
const PAIRING_IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SuperMap {
    in_dim: usize,
    out_dim: usize,
    choi: ComplexMatrix,
}

impl SuperMap {
    pub fn from_choi(in_dim: usize, out_dim: usize, choi: ComplexMatrix) -> Result<Self> {
        let d = in_dim * out_dim;
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::InvalidArgument(
                "map dimensions must be positive".into(),
            ));
        }
        if choi.rows() != d || choi.cols() != d {
            return Err(Error::DimensionMismatch {
                context: "SuperMap::from_choi",
                expected: d,
                found: if choi.rows() != d {
                    choi.rows()
                } else {
                    choi.cols()
                },
            });
        }
        Ok(Self {
            in_dim,
            out_dim,
            choi,
        })
    }

    /// Builds the Choi matrix from the action of `f` on the matrix units.
    pub fn from_fn(
        in_dim: usize,
        out_dim: usize,
        f: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Self {
        let (k, n) = (in_dim, out_dim);
        let mut choi = ComplexMatrix::zeros(k * n, k * n);
        for i in 0..k {
            for j in 0..k {
                let img = f(&unit(i, j, k));
                assert_eq!(
                    (img.rows(), img.cols()),
                    (n, n),
                    "map image has wrong shape"
                );
                for r in 0..n {
                    for s in 0..n {
                        choi[(i * n + r, j * n + s)] = img[(r, s)];
                    }
                }
            }
        }
        Self {
            in_dim,
            out_dim,
            choi,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn into_choi(self) -> ComplexMatrix {
        self.choi
    }

    pub fn is_square(&self) -> bool {
        self.in_dim == self.out_dim
    }

    /// Frobenius distance between Choi matrices; infinite for different shapes.
    pub fn distance(&self, other: &Self) -> f64 {
        if (self.in_dim, self.out_dim) != (other.in_dim, other.out_dim) {
            return f64::INFINITY;
        }
        self.choi.distance(&other.choi)
    }

    pub fn scale(&self, w: f64) -> Self {
        Self {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            choi: self.choi.scale_real(w),
        }
    }

    /// `φ(a) = Tr_first((aᵗ ⊗ I)·C_φ)`.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (k, n) = (self.in_dim, self.out_dim);
        if a.rows() != k || a.cols() != k {
            return Err(Error::DimensionMismatch {
                context: "SuperMap::apply",
                expected: k,
                found: if a.rows() != k { a.rows() } else { a.cols() },
            });
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..k {
            for j in 0..k {
                let aij = a[(i, j)];
                if aij == ZERO {
                    continue;
                }
                for r in 0..n {
                    for s in 0..n {
                        out[(r, s)] += aij * self.choi[(i * n + r, j * n + s)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Image of the matrix unit `e_ij` (zero-based), read off the Choi matrix.
    pub(crate) fn image_of_unit(&self, i: usize, j: usize) -> ComplexMatrix {
        let n = self.out_dim;
        ComplexMatrix::from_fn(n, n, |r, s| self.choi[(i * n + r, j * n + s)])
    }
}

/// `ι` on `M_n`; its Choi matrix is `p`.
pub fn identity_map(n: usize) -> SuperMap {
    SuperMap {
        in_dim: n,
        out_dim: n,
        choi: max_entangled_p(n),
    }
}

/// `t(a) = aᵗ`; its Choi matrix is the flip.
pub fn transpose_map(n: usize) -> SuperMap {
    SuperMap::from_fn(n, n, ComplexMatrix::transpose)
}

/// `Ad V: a ↦ V a V*` for `V` of shape `n × k`.
pub fn ad_v(v: &ComplexMatrix) -> SuperMap {
    let (n, k) = (v.rows(), v.cols());
    // C = |w⟩⟨w| with w[(i, r)] = V[r, i]
    let w: Vec<C64> = (0..k)
        .flat_map(|i| (0..n).map(move |r| (i, r)))
        .map(|(i, r)| v[(r, i)])
        .collect();
    SuperMap {
        in_dim: k,
        out_dim: n,
        choi: ComplexMatrix::outer(&w, &w),
    }
}

/// `Λ_μ(a) = Tr(a)·I − μ·a` on `M_n`. `μ = 1` is the reduction map.
pub fn lambda_mu(n: usize, mu: f64) -> SuperMap {
    let choi = &ComplexMatrix::identity(n * n) - &max_entangled_p(n).scale_real(mu);
    SuperMap {
        in_dim: n,
        out_dim: n,
        choi,
    }
}

/// The reduction map `a ↦ Tr(a)·I − a`.
pub fn reduction_map(n: usize) -> SuperMap {
    lambda_mu(n, 1.0)
}

/// Nonnegative combination `Σ w_i φ_i`.
pub fn sum_maps(terms: &[(f64, SuperMap)]) -> Result<SuperMap> {
    let (_, first) = terms
        .first()
        .ok_or(Error::Empty("sum_maps needs at least one term"))?;
    let (k, n) = (first.in_dim, first.out_dim);
    let mut choi = ComplexMatrix::zeros(k * n, k * n);
    for (w, m) in terms {
        if !(*w >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative weight {w}")));
        }
        if (m.in_dim, m.out_dim) != (k, n) {
            return Err(Error::DimensionMismatch {
                context: "sum_maps",
                expected: k * n,
                found: m.in_dim * m.out_dim,
            });
        }
        choi = &choi + &m.choi.scale_real(*w);
    }
    Ok(SuperMap {
        in_dim: k,
        out_dim: n,
        choi,
    })
}

fn check_composable(phi: &SuperMap, psi: &SuperMap) -> Result<()> {
    if psi.out_dim != phi.in_dim {
        return Err(Error::DimensionMismatch {
            context: "compose",
            expected: phi.in_dim,
            found: psi.out_dim,
        });
    }
    Ok(())
}

/// `φ ∘ ψ`. Debug builds also evaluate [`compose_via_p`] and assert the
/// two routes agree.
pub fn compose(phi: &SuperMap, psi: &SuperMap) -> Result<SuperMap> {
    let direct = compose_direct(phi, psi)?;
    #[cfg(debug_assertions)]
    {
        let via_p = compose_via_p(phi, psi)?;
        let diff = direct.distance(&via_p);
        let scale = 1.0 + direct.choi.frobenius_norm();
        debug_assert!(diff <= 1e-9 * scale, "compose routes disagree by {diff:e}");
    }
    Ok(direct)
}

/// `C_{φ∘ψ} = Σ e_ij ⊗ φ(ψ(e_ij))`.
pub fn compose_direct(phi: &SuperMap, psi: &SuperMap) -> Result<SuperMap> {
    check_composable(phi, psi)?;
    let (k, n) = (psi.in_dim, phi.out_dim);
    let mut choi = ComplexMatrix::zeros(k * n, k * n);
    for i in 0..k {
        for j in 0..k {
            let img = phi.apply(&psi.image_of_unit(i, j))?;
            for r in 0..n {
                for s in 0..n {
                    choi[(i * n + r, j * n + s)] = img[(r, s)];
                }
            }
        }
    }
    Ok(SuperMap {
        in_dim: k,
        out_dim: n,
        choi,
    })
}

/// `C_{φ∘ψ} = (ψ^{*t} ⊗ φ)(p)`.
pub fn compose_via_p(phi: &SuperMap, psi: &SuperMap) -> Result<SuperMap> {
    check_composable(phi, psi)?;
    let choi = tensor_on_p(&star_t(psi), phi)?;
    SuperMap::from_choi(psi.in_dim, phi.out_dim, choi)
}

/// `ψ ⊗ φ: B(K₁ ⊗ K₂) → B(H₁ ⊗ H₂)`.
pub fn tensor(psi: &SuperMap, phi: &SuperMap) -> SuperMap {
    let (k1, n1) = (psi.in_dim, psi.out_dim);
    let (k2, n2) = (phi.in_dim, phi.out_dim);
    let (k, n) = (k1 * k2, n1 * n2);
    let mut choi = ComplexMatrix::zeros(k * n, k * n);
    for row in 0..k * n {
        let (i, r) = (row / n, row % n);
        let (i1, i2, r1, r2) = (i / k2, i % k2, r / n2, r % n2);
        let a_row = i1 * n1 + r1;
        let b_row = i2 * n2 + r2;
        for col in 0..k * n {
            let (j, s) = (col / n, col % n);
            let (j1, j2, s1, s2) = (j / k2, j % k2, s / n2, s % n2);
            let a = psi.choi[(a_row, j1 * n1 + s1)];
            if a == ZERO {
                continue;
            }
            choi[(row, col)] = a * phi.choi[(b_row, j2 * n2 + s2)];
        }
    }
    SuperMap {
        in_dim: k,
        out_dim: n,
        choi,
    }
}

/// `(ψ ⊗ φ)(p) = Σ_ij ψ(e_ij) ⊗ φ(e_ij)` without forming the tensor map.
pub fn tensor_on_p(psi: &SuperMap, phi: &SuperMap) -> Result<ComplexMatrix> {
    if psi.in_dim != phi.in_dim {
        return Err(Error::DimensionMismatch {
            context: "tensor_on_p",
            expected: psi.in_dim,
            found: phi.in_dim,
        });
    }
    let m = psi.in_dim;
    let (n1, n2) = (psi.out_dim, phi.out_dim);
    let mut out = ComplexMatrix::zeros(n1 * n2, n1 * n2);
    for i in 0..m {
        for j in 0..m {
            let term = kron(&psi.image_of_unit(i, j), &phi.image_of_unit(i, j));
            out = &out + &term;
        }
    }
    Ok(out)
}

/// Adjoint with respect to `Tr(φ(a)·b) = Tr(a·φ*(b))`.
///
/// For Hermiticity-preserving square maps this coincides with
/// `C_{φ*} = J C_φ J`; the index form used here holds for any map.
pub fn adjoint(phi: &SuperMap) -> SuperMap {
    let (k, n) = (phi.in_dim, phi.out_dim);
    // C*[(a, b), (c, d)] = C[(d, c), (b, a)], a, c ∈ [n], b, d ∈ [k]
    let choi = ComplexMatrix::from_fn(n * k, n * k, |row, col| {
        let (a, b) = (row / k, row % k);
        let (c, d) = (col / k, col % k);
        phi.choi[(d * n + c, b * n + a)]
    });
    SuperMap {
        in_dim: n,
        out_dim: k,
        choi,
    }
}

/// `φ^t = t ∘ φ ∘ t`, whose Choi matrix is `C_φᵗ`.
pub fn transpose_conj(phi: &SuperMap) -> SuperMap {
    SuperMap {
        in_dim: phi.in_dim,
        out_dim: phi.out_dim,
        choi: phi.choi.transpose(),
    }
}

/// `φ^{*t}`; the two operations commute.
pub fn star_t(phi: &SuperMap) -> SuperMap {
    transpose_conj(&adjoint(phi))
}

/// `φ̃(x) = Tr(C_φᵗ·x)`, so that `φ̃(a ⊗ b) = Tr(φ(a)·bᵗ)`.
pub fn tilde_apply(phi: &SuperMap, x: &ComplexMatrix) -> Result<C64> {
    let d = phi.in_dim * phi.out_dim;
    if x.rows() != d || x.cols() != d {
        return Err(Error::DimensionMismatch {
            context: "tilde_apply",
            expected: d,
            found: x.rows(),
        });
    }
    Ok(phi
        .choi
        .as_slice()
        .iter()
        .zip(x.as_slice())
        .map(|(c, v)| c * v)
        .sum())
}

/// `Tr(C_φ·C_ψ)`, real for Hermitian Choi matrices.
pub fn pair(phi: &SuperMap, psi: &SuperMap) -> Result<f64> {
    if (phi.in_dim, phi.out_dim) != (psi.in_dim, psi.out_dim) {
        return Err(Error::DimensionMismatch {
            context: "pair",
            expected: phi.in_dim * phi.out_dim,
            found: psi.in_dim * psi.out_dim,
        });
    }
    let z = phi.choi.trace_product(&psi.choi);
    if z.im.abs() > PAIRING_IMAG_TOL * (1.0 + z.re.abs()) {
        return Err(Error::NonRealPairing { imag: z.im });
    }
    Ok(z.re)
}

/// Linear contraction with `π(a ⊗ b) = bᵗ·a` on `B(H ⊗ H)`.
pub fn pi_contract(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch {
            context: "pi_contract",
            expected: x.rows(),
            found: x.cols(),
        });
    }
    let n = crate::matrix::exact_sqrt(x.rows()).ok_or(Error::NotPerfectSquare(x.rows()))?;
    Ok(ComplexMatrix::from_fn(n, n, |r, s| {
        (0..n).map(|m| x[(m * n + m, s * n + r)]).sum()
    }))
}

/// Map with an arbitrary Gaussian Choi matrix; not Hermiticity preserving.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, in_dim: usize, out_dim: usize) -> SuperMap {
    let d = in_dim * out_dim;
    SuperMap {
        in_dim,
        out_dim,
        choi: rng::gaussian_matrix(rng, d, d),
    }
}

/// Map with a Gaussian Hermitian Choi matrix: Hermiticity preserving, not
/// positive in general.
pub fn random_hermitian_map<R: Rng + ?Sized>(
    rng: &mut R,
    in_dim: usize,
    out_dim: usize,
) -> SuperMap {
    SuperMap {
        in_dim,
        out_dim,
        choi: rng::gaussian_hermitian(rng, in_dim * out_dim),
    }
}

/// Completely positive `Σ Ad V_i` with Gaussian Kraus operators.
pub fn random_cp_map<R: Rng + ?Sized>(
    rng: &mut R,
    in_dim: usize,
    out_dim: usize,
    terms: usize,
) -> SuperMap {
    let mut choi = ComplexMatrix::zeros(in_dim * out_dim, in_dim * out_dim);
    for _ in 0..terms.max(1) {
        let v = rng::gaussian_matrix(rng, out_dim, in_dim);
        choi = &choi + ad_v(&v).choi();
    }
    SuperMap {
        in_dim,
        out_dim,
        choi,
    }
}
