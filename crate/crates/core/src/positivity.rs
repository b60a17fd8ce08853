//! Positivity certification for maps carried by Choi matrices.
//!
//! Falsification is exact: a `Falsified` verdict carries a [`Witness`] whose
//! re-evaluation reproduces the reported negative value. Positive answers are
//! either structural (`CertifiedPositive`, from complete positivity or
//! co-complete positivity of the Choi matrix) or empirical
//! (`NoCounterexample`, from seeded searches that came up empty).

use crate::error::{Error, Result};
use crate::exec::{argmin_by_key, map_indexed, Execution};
use crate::maps::{ad_v, sum_maps, SuperMap};
use crate::matrix::{
    exact_sqrt, flip_operator, kron_vec, max_entangled_p, partial_transpose, ComplexMatrix, Leg,
    C64, HERMITIAN_TOL, ZERO,
};
use crate::rng;
use crate::spectrum::{min_pair_unchecked, normalize, HermitianSpectrum};

/// Stream offset separating PSD-input sampling from block-search restarts.
const SAMPLE_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub conv_tol: f64,
    pub psd_tol: f64,
    /// Random PSD inputs tried by [`is_positive_map`].
    pub psd_samples: usize,
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 50,
            max_iters: 200,
            conv_tol: 1e-12,
            psd_tol: 1e-9,
            psd_samples: 100,
            execution: Execution::Parallel,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        if !(self.conv_tol > 0.0) || !(self.psd_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Falsified,
    NoCounterexample,
    CertifiedPositive,
}

/// Structural reason behind a `CertifiedPositive` verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// `C_φ ≥ 0`.
    CompletelyPositive,
    /// `(ι ⊗ t)(C_φ) ≥ 0`, i.e. `φ = t ∘ χ` with `χ` completely positive.
    CoCompletelyPositive,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Unit vector `v` with `⟨v|C_φ|v⟩ = value`.
    ChoiVector { vector: Vec<C64>, value: f64 },
    /// Unit vectors with `⟨x⊗y|C_φ|x⊗y⟩ = ⟨y|φ(x̄x̄*)|y⟩ = value`.
    ProductVectors {
        x: Vec<C64>,
        y: Vec<C64>,
        value: f64,
    },
    /// PSD `input` and unit `direction` with `⟨y|φ(input)|y⟩ = value`.
    Input {
        input: ComplexMatrix,
        direction: Vec<C64>,
        value: f64,
    },
}

impl Witness {
    pub fn value(&self) -> f64 {
        match self {
            Witness::ChoiVector { value, .. }
            | Witness::ProductVectors { value, .. }
            | Witness::Input { value, .. } => *value,
        }
    }

    /// Recomputes the witnessed value from scratch against `phi`.
    pub fn evaluate(&self, phi: &SuperMap) -> Result<f64> {
        match self {
            Witness::ChoiVector { vector, .. } => {
                check_len(vector.len(), phi.choi().rows(), "ChoiVector witness")?;
                Ok(phi.choi().quadratic_form(vector).re)
            }
            Witness::ProductVectors { x, y, .. } => {
                check_len(x.len(), phi.in_dim(), "ProductVectors witness x")?;
                check_len(y.len(), phi.out_dim(), "ProductVectors witness y")?;
                Ok(product_value(phi.choi(), x, y))
            }
            Witness::Input {
                input, direction, ..
            } => {
                let out = phi.apply(input)?;
                check_len(direction.len(), out.rows(), "Input witness direction")?;
                Ok(out.quadratic_form(direction).re)
            }
        }
    }

    /// The PSD input matrix that the map sends outside the PSD cone.
    pub fn input_matrix(&self) -> Option<ComplexMatrix> {
        match self {
            Witness::ProductVectors { x, .. } => {
                let xb: Vec<C64> = x.iter().map(|z| z.conj()).collect();
                Some(ComplexMatrix::outer(&xb, &xb))
            }
            Witness::Input { input, .. } => Some(input.clone()),
            Witness::ChoiVector { .. } => None,
        }
    }
}

fn check_len(found: usize, expected: usize, context: &'static str) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SearchStats {
    pub restarts: usize,
    pub best_value: f64,
    pub tolerance: f64,
    /// Minimum of `⟨x⊗y|C|x⊗y⟩` found by the product-vector search.
    pub block_min: Option<f64>,
    /// Minimum output eigenvalue over the sampled trace-one PSD inputs.
    pub sampled_min: Option<f64>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    /// Most negative value seen, or the Choi/partial-transpose minimum
    /// eigenvalue for structural verdicts.
    pub value: f64,
    pub witness: Option<Witness>,
    pub certificate: Option<Certificate>,
    pub stats: SearchStats,
}

impl Verdict {
    pub fn is_falsified(&self) -> bool {
        self.status == Status::Falsified
    }
}

fn require_hermitian_choi(phi: &SuperMap) -> Result<()> {
    let c = phi.choi();
    let deviation = c.hermitian_deviation();
    let tolerance = HERMITIAN_TOL * (1.0 + c.max_abs());
    if deviation > tolerance {
        return Err(Error::NotHermitian {
            deviation,
            tolerance,
        });
    }
    Ok(())
}

fn spectral_verdict(spectrum: &HermitianSpectrum, tol: f64, certificate: Certificate) -> Verdict {
    let value = spectrum.min();
    let stats = SearchStats {
        best_value: value,
        tolerance: tol,
        ..SearchStats::default()
    };
    if value >= -tol {
        Verdict {
            status: Status::CertifiedPositive,
            value,
            witness: None,
            certificate: Some(certificate),
            stats,
        }
    } else {
        Verdict {
            status: Status::Falsified,
            value,
            witness: Some(Witness::ChoiVector {
                vector: spectrum.min_vector(),
                value,
            }),
            certificate: None,
            stats,
        }
    }
}

/// Complete positivity: `C_φ ≥ −tol`.
pub fn is_cp(phi: &SuperMap, tol: f64) -> Result<Verdict> {
    Ok(spectral_verdict(
        &HermitianSpectrum::new(phi.choi())?,
        tol,
        Certificate::CompletelyPositive,
    ))
}

/// Co-complete positivity: the output-leg partial transpose of `C_φ` is PSD.
///
/// A falsifying witness is an eigenvector of the partial transpose, not of
/// `C_φ`; it does not witness non-positivity of `φ`.
pub fn is_co_cp(phi: &SuperMap, tol: f64) -> Result<Verdict> {
    require_hermitian_choi(phi)?;
    let pt = partial_transpose(phi.choi(), Leg::Second, (phi.in_dim(), phi.out_dim()))?;
    let spectrum = HermitianSpectrum::new(&pt)?;
    let mut v = spectral_verdict(&spectrum, tol, Certificate::CoCompletelyPositive);
    v.witness = None;
    Ok(v)
}

/// Result of a product-vector search.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductMin {
    pub value: f64,
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub restart: usize,
}

fn product_value(choi: &ComplexMatrix, x: &[C64], y: &[C64]) -> f64 {
    choi.quadratic_form(&kron_vec(x, y)).re
}

/// `M[i, j] = Σ_rs ȳ_r C[(i, r), (j, s)] y_s`.
fn contract_output(choi: &ComplexMatrix, k: usize, n: usize, y: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(k, k, |i, j| {
        let mut acc = ZERO;
        for r in 0..n {
            let yr = y[r].conj();
            for s in 0..n {
                acc += yr * choi[(i * n + r, j * n + s)] * y[s];
            }
        }
        acc
    })
}

/// `M[r, s] = Σ_ij x̄_i C[(i, r), (j, s)] x_j`.
fn contract_input(choi: &ComplexMatrix, k: usize, n: usize, x: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |r, s| {
        let mut acc = ZERO;
        for i in 0..k {
            let xi = x[i].conj();
            for j in 0..k {
                acc += xi * choi[(i * n + r, j * n + s)] * x[j];
            }
        }
        acc
    })
}

fn product_restart(phi: &SuperMap, cfg: &SearchConfig, restart: usize) -> ProductMin {
    let (k, n) = (phi.in_dim(), phi.out_dim());
    let choi = phi.choi();
    let mut rng = rng::stream(cfg.seed, restart as u64);
    let mut y = rng::unit_vector(&mut rng, n);
    let mut x = rng::unit_vector(&mut rng, k);
    let mut last = f64::INFINITY;
    for _ in 0..cfg.max_iters.max(1) {
        let (_, xs) = min_pair_unchecked(&contract_output(choi, k, n, &y));
        x = xs;
        let (val, ys) = min_pair_unchecked(&contract_input(choi, k, n, &x));
        y = ys;
        if last - val < cfg.conv_tol {
            break;
        }
        last = val;
    }
    ProductMin {
        value: product_value(choi, &x, &y),
        x,
        y,
        restart,
    }
}

/// Heuristic minimum of `⟨x⊗y|C_φ|x⊗y⟩` over unit vectors by alternating
/// exact eigenvector steps. The returned value is attained by the returned
/// vectors, so it bounds the true minimum from above.
pub fn block_positivity_min(phi: &SuperMap, cfg: &SearchConfig) -> Result<ProductMin> {
    cfg.validate()?;
    require_hermitian_choi(phi)?;
    let runs = map_indexed(cfg.execution, cfg.restarts, |r| {
        product_restart(phi, cfg, r)
    });
    let best = argmin_by_key(&runs, |m| m.value).expect("restarts >= 1");
    Ok(runs.into_iter().nth(best).expect("index in range"))
}

/// Positivity of `φ`.
///
/// Structural certificates are tried first. Otherwise the map is probed with
/// the maximally entangled `p` (when the input dimension is a square), then
/// with the product-vector search, then with `cfg.psd_samples` random
/// trace-one PSD inputs alternating between pure and full-rank states.
pub fn is_positive_map(phi: &SuperMap, cfg: &SearchConfig) -> Result<Verdict> {
    cfg.validate()?;
    let tol = cfg.psd_tol;
    let cp = is_cp(phi, tol)?;
    if cp.status == Status::CertifiedPositive {
        return Ok(cp);
    }
    let cocp = is_co_cp(phi, tol)?;
    if cocp.status == Status::CertifiedPositive {
        return Ok(cocp);
    }

    let mut stats = SearchStats {
        tolerance: tol,
        best_value: f64::INFINITY,
        ..SearchStats::default()
    };

    if let Some(m) = exact_sqrt(phi.in_dim()) {
        let p = max_entangled_p(m);
        let (value, direction) = min_pair_unchecked(&phi.apply(&p)?);
        stats.best_value = value;
        if value < -tol {
            return Ok(falsified(
                Witness::Input {
                    input: p,
                    direction,
                    value,
                },
                stats,
            ));
        }
    }

    let block = block_positivity_min(phi, cfg)?;
    stats.restarts = cfg.restarts;
    stats.block_min = Some(block.value);
    stats.best_value = stats.best_value.min(block.value);
    if block.value < -tol {
        return Ok(falsified(
            Witness::ProductVectors {
                x: block.x,
                y: block.y,
                value: block.value,
            },
            stats,
        ));
    }

    let k = phi.in_dim();
    let samples = map_indexed(cfg.execution, cfg.psd_samples, |i| {
        let mut rng = rng::stream(cfg.seed, SAMPLE_STREAM_BASE + i as u64);
        let rank = if i % 2 == 0 { 1 } else { k };
        let input = rng::density_matrix(&mut rng, k, rank);
        let (value, direction) = phi
            .apply(&input)
            .map(|out| min_pair_unchecked(&out))
            .expect("input shape matches map");
        (input, direction, value)
    });
    stats.samples = samples.len();
    if let Some(best) = argmin_by_key(&samples, |s| s.2) {
        let (input, direction, value) = samples.into_iter().nth(best).expect("index in range");
        stats.sampled_min = Some(value);
        stats.best_value = stats.best_value.min(value);
        if value < -tol {
            return Ok(falsified(
                Witness::Input {
                    input,
                    direction,
                    value,
                },
                stats,
            ));
        }
    }

    Ok(Verdict {
        status: Status::NoCounterexample,
        value: stats.best_value,
        witness: None,
        certificate: None,
        stats,
    })
}

fn falsified(witness: Witness, stats: SearchStats) -> Verdict {
    Verdict {
        status: Status::Falsified,
        value: witness.value(),
        witness: Some(witness),
        certificate: None,
        stats,
    }
}

/// Result of a bounded-Schmidt-rank search.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtMin {
    pub value: f64,
    /// Unit vector on `K ⊗ H` of Schmidt rank at most `k`.
    pub z: Vec<C64>,
    pub restart: usize,
}

/// Orthonormalizes the columns of `m` by modified Gram–Schmidt, filling
/// rank-deficient columns from the standard basis.
fn orthonormal_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let mut fallback = 0;
    for j in 0..cols {
        let mut v = m.column(j);
        loop {
            for b in &basis {
                let proj: C64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
            if normalize(&mut v) > 1e-10 {
                break;
            }
            v = vec![ZERO; rows];
            v[fallback % rows] = C64::new(1.0, 0.0);
            fallback += 1;
        }
        basis.push(v);
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i])
}

fn schmidt_vector(a: &ComplexMatrix, b: &ComplexMatrix) -> Vec<C64> {
    let (k, n, rank) = (a.rows(), b.rows(), a.cols());
    (0..k * n)
        .map(|idx| {
            let (i, r) = (idx / n, idx % n);
            (0..rank).map(|l| a[(i, l)] * b[(r, l)]).sum()
        })
        .collect()
}

fn schmidt_restart(phi: &SuperMap, rank: usize, cfg: &SearchConfig, restart: usize) -> SchmidtMin {
    let (k, n) = (phi.in_dim(), phi.out_dim());
    let choi = phi.choi();
    let mut rng = rng::stream(cfg.seed, restart as u64);
    let mut b = orthonormal_columns(&rng::gaussian_matrix(&mut rng, n, rank));
    let mut a = orthonormal_columns(&rng::gaussian_matrix(&mut rng, k, rank));
    let mut last = f64::INFINITY;
    for _ in 0..cfg.max_iters.max(1) {
        // z = Σ_l a_l ⊗ b_l; with B orthonormal, ‖z‖ = ‖A‖_F.
        let ma = ComplexMatrix::from_fn(k * rank, k * rank, |row, col| {
            let (i, l) = (row / rank, row % rank);
            let (j, m) = (col / rank, col % rank);
            let mut acc = ZERO;
            for r in 0..n {
                let br = b[(r, l)].conj();
                for s in 0..n {
                    acc += br * choi[(i * n + r, j * n + s)] * b[(s, m)];
                }
            }
            acc
        });
        let (_, av) = min_pair_unchecked(&ma);
        a = orthonormal_columns(&ComplexMatrix::from_fn(k, rank, |i, l| av[i * rank + l]));

        let mb = ComplexMatrix::from_fn(n * rank, n * rank, |row, col| {
            let (r, l) = (row / rank, row % rank);
            let (s, m) = (col / rank, col % rank);
            let mut acc = ZERO;
            for i in 0..k {
                let ai = a[(i, l)].conj();
                for j in 0..k {
                    acc += ai * choi[(i * n + r, j * n + s)] * a[(j, m)];
                }
            }
            acc
        });
        let (val, bv) = min_pair_unchecked(&mb);
        b = ComplexMatrix::from_fn(n, rank, |r, l| bv[r * rank + l]);
        if last - val < cfg.conv_tol {
            break;
        }
        last = val;
        b = orthonormal_columns(&b);
    }
    let mut z = schmidt_vector(&a, &b);
    normalize(&mut z);
    SchmidtMin {
        value: choi.quadratic_form(&z).re,
        z,
        restart,
    }
}

/// Heuristic minimum of `⟨z|C_φ|z⟩` over unit `z` of Schmidt rank `≤ k`.
/// `φ` is k-positive exactly when this minimum is nonnegative. For
/// `k = min(in_dim, out_dim)` the minimum is the smallest Choi eigenvalue and
/// is computed exactly.
pub fn k_block_positivity_min(phi: &SuperMap, k: usize, cfg: &SearchConfig) -> Result<SchmidtMin> {
    cfg.validate()?;
    let max_rank = phi.in_dim().min(phi.out_dim());
    if k == 0 || k > max_rank {
        return Err(Error::InvalidArgument(format!(
            "Schmidt rank {k} outside 1..={max_rank}"
        )));
    }
    require_hermitian_choi(phi)?;
    if k == max_rank {
        let spectrum = HermitianSpectrum::new(phi.choi())?;
        return Ok(SchmidtMin {
            value: spectrum.min(),
            z: spectrum.min_vector(),
            restart: 0,
        });
    }
    let runs = map_indexed(cfg.execution, cfg.restarts, |r| {
        schmidt_restart(phi, k, cfg, r)
    });
    let best = argmin_by_key(&runs, |m| m.value).expect("restarts >= 1");
    Ok(runs.into_iter().nth(best).expect("index in range"))
}

/// Random k-superpositive map `Σ Ad V_i` with `V_i = G_i H_i`, `G_i` of
/// shape `out × k` and `H_i` of shape `k × in`, so `rank V_i ≤ k`.
pub fn random_sp_k(
    k: usize,
    in_dim: usize,
    out_dim: usize,
    terms: usize,
    seed: u64,
) -> Result<SuperMap> {
    let max_rank = in_dim.min(out_dim);
    if k == 0 || k > max_rank {
        return Err(Error::InvalidArgument(format!(
            "rank bound {k} outside 1..={max_rank}"
        )));
    }
    if terms == 0 {
        return Err(Error::Empty("random_sp_k needs at least one term"));
    }
    let mut rng = rng::stream(seed, 0);
    let maps: Vec<(f64, SuperMap)> = (0..terms)
        .map(|_| {
            let g = rng::gaussian_matrix(&mut rng, out_dim, k);
            let h = rng::gaussian_matrix(&mut rng, k, in_dim);
            (1.0, ad_v(&(&g * &h)))
        })
        .collect();
    sum_maps(&maps)
}

/// Local filter `v` with `(1 ⊗ v)·u = x` for `u = Σ e_i ⊗ e_i`, hence
/// `Ad(1 ⊗ v)(p) = |x⟩⟨x|`. Column `i` of `v` is the block `x_i` of
/// `x = Σ e_i ⊗ x_i`.
pub fn local_filter_from_vector(x: &[C64]) -> Result<ComplexMatrix> {
    let n = exact_sqrt(x.len()).ok_or(Error::NotPerfectSquare(x.len()))?;
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnitVector(norm));
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, i| x[i * n + r]))
}

/// Diagnostics for `φ = φ* = φ^t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    pub max_imag: f64,
    /// `‖C − Cᵗ‖_F`
    pub asymmetry: f64,
    /// `‖C − F C F‖_F`
    pub flip_deviation: f64,
    /// `‖C_φ − C_{φ*}‖_F`
    pub adjoint_deviation: f64,
    /// `‖C_φ − C_{φ^t}‖_F`
    pub transpose_deviation: f64,
    /// Real, symmetric and flip-invariant Choi matrix.
    pub choi_test: bool,
    /// `φ = φ*` and `φ = φ^t` as maps.
    pub map_test: bool,
}

impl SymmetryReport {
    pub fn holds(&self) -> bool {
        self.choi_test
    }

    pub fn routes_agree(&self) -> bool {
        self.choi_test == self.map_test
    }
}

pub fn check_star_t_symmetry(phi: &SuperMap, tol: f64) -> Result<SymmetryReport> {
    if !phi.is_square() {
        return Err(Error::DimensionMismatch {
            context: "check_star_t_symmetry",
            expected: phi.in_dim(),
            found: phi.out_dim(),
        });
    }
    let c = phi.choi();
    let f = flip_operator(phi.in_dim());
    let max_imag = c.max_imag();
    let asymmetry = c.distance(&c.transpose());
    let flip_deviation = c.distance(&(&(&f * c) * &f));
    let adjoint_deviation = phi.distance(&crate::maps::adjoint(phi));
    let transpose_deviation = phi.distance(&crate::maps::transpose_conj(phi));
    Ok(SymmetryReport {
        max_imag,
        asymmetry,
        flip_deviation,
        adjoint_deviation,
        transpose_deviation,
        choi_test: max_imag <= tol && asymmetry <= tol && flip_deviation <= tol,
        map_test: adjoint_deviation <= tol && transpose_deviation <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{compose, identity_map, lambda_mu, reduction_map, tensor, transpose_map};
    use crate::matrix::{kron, unit};
    use crate::rng::stream;

    fn quick() -> SearchConfig {
        SearchConfig {
            restarts: 8,
            max_iters: 100,
            psd_samples: 40,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn cp_verdicts() {
        let v = rng::gaussian_matrix(&mut stream(1, 0), 2, 2);
        let ad = is_cp(&ad_v(&v), 1e-9).unwrap();
        assert_eq!(ad.status, Status::CertifiedPositive);
        assert!(ad.value.abs() < 1e-9);

        let t = is_cp(&transpose_map(2), 1e-9).unwrap();
        assert_eq!(t.status, Status::Falsified);
        assert!((t.value + 1.0).abs() < 1e-12);

        let r = is_cp(&reduction_map(2), 1e-9).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
        let w = r.witness.unwrap();
        assert!((w.evaluate(&reduction_map(2)).unwrap() - w.value()).abs() < 1e-10);
    }

    #[test]
    fn cp_on_transposed_choi_agrees() {
        let mut rng = stream(2, 0);
        for n in [2, 3] {
            let phi = crate::maps::random_hermitian_map(&mut rng, n, n);
            let a = crate::spectrum::hermitian_min_eig(phi.choi()).unwrap();
            let b = crate::spectrum::hermitian_min_eig(&phi.choi().transpose()).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn non_hermitian_choi_is_an_error() {
        let mut c = ComplexMatrix::zeros(4, 4);
        c[(0, 1)] = C64::new(1.0, 0.0);
        let odd = SuperMap::from_choi(2, 2, c).unwrap();
        assert!(is_cp(&odd, 1e-9).is_err());
    }

    #[test]
    fn block_min_identity_and_reduction() {
        let cfg = quick();
        let id = block_positivity_min(&identity_map(2), &cfg).unwrap();
        assert!(id.value.abs() < 1e-9);
        assert!(id.value >= -1e-12);
        let red = block_positivity_min(&reduction_map(2), &cfg).unwrap();
        assert!(red.value.abs() < 1e-9);
    }

    #[test]
    fn block_min_of_partial_transpose_tensor() {
        // min over pure inputs of the partial transpose's lowest eigenvalue,
        // −s₁s₂ ≥ −1/2 for two qubits, attained at maximal entanglement
        let m = tensor(&transpose_map(2), &identity_map(2));
        let b = block_positivity_min(&m, &quick()).unwrap();
        assert!((b.value + 0.5).abs() < 1e-8, "{}", b.value);
        let recheck = product_value(m.choi(), &b.x, &b.y);
        assert!((recheck - b.value).abs() < 1e-12);
    }

    #[test]
    fn block_min_monotone_in_restarts() {
        let phi = lambda_mu(3, 1.4);
        let mut last = f64::INFINITY;
        for restarts in [1, 2, 4, 8] {
            let cfg = SearchConfig {
                restarts,
                ..quick()
            };
            let v = block_positivity_min(&phi, &cfg).unwrap().value;
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn positive_map_examples() {
        let cfg = quick();
        let t = is_positive_map(&transpose_map(2), &cfg).unwrap();
        assert_eq!(t.status, Status::CertifiedPositive);
        assert_eq!(t.certificate, Some(Certificate::CoCompletelyPositive));

        let m = tensor(&transpose_map(2), &identity_map(2));
        let v = is_positive_map(&m, &cfg).unwrap();
        assert_eq!(v.status, Status::Falsified);
        assert!((v.value + 1.0).abs() < 1e-12);
        let w = v.witness.as_ref().unwrap();
        assert_eq!(w.input_matrix().unwrap(), max_entangled_p(2));
        assert!((w.evaluate(&m).unwrap() - v.value).abs() < 1e-10);

        let r = is_positive_map(&reduction_map(2), &cfg).unwrap();
        // reduction map on M_2 is co-CP (partial transpose of I − p is I − F)
        assert_eq!(r.status, Status::CertifiedPositive);
        let r3 = is_positive_map(&reduction_map(3), &cfg).unwrap();
        assert_ne!(r3.status, Status::Falsified);
    }

    #[test]
    fn positive_map_search_finds_product_witness() {
        // Λ_μ with μ > 1 is not positive: block value 1 − μ < 0 on n = 3
        let phi = lambda_mu(3, 1.5);
        let v = is_positive_map(&phi, &quick()).unwrap();
        assert_eq!(v.status, Status::Falsified);
        assert!((v.value + 0.5).abs() < 1e-8);
        let w = v.witness.unwrap();
        assert!(matches!(w, Witness::ProductVectors { .. }));
        assert!((w.evaluate(&phi).unwrap() - w.value()).abs() < 1e-10);
        let input = w.input_matrix().unwrap();
        assert!(crate::spectrum::hermitian_min_eig(&input).unwrap() > -1e-12);
    }

    #[test]
    fn non_decomposable_positive_map_is_not_falsified() {
        // Choi map on M_3: positive, neither CP nor co-CP
        let choi_map = SuperMap::from_fn(3, 3, |a| {
            let mut out = a.scale_real(-1.0);
            for i in 0..3 {
                out[(i, i)] = a[(i, i)] + a[((i + 2) % 3, (i + 2) % 3)];
            }
            out
        });
        let v = is_positive_map(&choi_map, &quick()).unwrap();
        assert_eq!(v.status, Status::NoCounterexample);
        assert!(v.stats.block_min.unwrap() > -1e-9);
    }

    #[test]
    fn schmidt_closed_forms() {
        let cfg = quick();
        let r2 = reduction_map(2);
        assert!(k_block_positivity_min(&r2, 1, &cfg).unwrap().value.abs() < 1e-8);
        assert!((k_block_positivity_min(&r2, 2, &cfg).unwrap().value + 1.0).abs() < 1e-10);
        let half = lambda_mu(3, 0.5);
        let v = k_block_positivity_min(&half, 2, &cfg).unwrap();
        assert!(v.value.abs() < 1e-8, "{}", v.value);
        let one = lambda_mu(3, 1.0);
        let v1 = k_block_positivity_min(&one, 2, &cfg).unwrap();
        assert!((v1.value + 1.0).abs() < 1e-8);
        assert!(k_block_positivity_min(&one, 0, &cfg).is_err());
        assert!(k_block_positivity_min(&one, 4, &cfg).is_err());
    }

    #[test]
    fn schmidt_witness_has_bounded_rank() {
        let v = k_block_positivity_min(&lambda_mu(3, 1.0), 2, &quick()).unwrap();
        let zm = ComplexMatrix::from_fn(3, 3, |i, r| v.z[i * 3 + r]);
        let s = HermitianSpectrum::new(&(&zm * &zm.adjoint())).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-10);
        let norm: f64 = v.z.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sp_k_samples() {
        let full = random_sp_k(2, 2, 2, 1, 3).unwrap();
        assert_eq!(
            is_cp(&full, 1e-9).unwrap().status,
            Status::CertifiedPositive
        );

        let rank_one = random_sp_k(1, 3, 2, 1, 4).unwrap();
        let s = HermitianSpectrum::new(rank_one.choi()).unwrap();
        assert!(s.eigenvalues[..5].iter().all(|e| e.abs() < 1e-9));
        // the single Choi eigenvector is a product vector: its 3×2 reshape has rank one
        let w = s.eigenvectors.column(5);
        let wm = ComplexMatrix::from_fn(3, 2, |i, r| w[i * 2 + r]);
        let g = HermitianSpectrum::new(&(&wm.adjoint() * &wm)).unwrap();
        assert!(g.eigenvalues[0].abs() < 1e-10);

        let a = random_sp_k(2, 3, 3, 3, 9).unwrap();
        let b = random_sp_k(2, 3, 3, 3, 9).unwrap();
        assert_eq!(a, b);
        assert!(random_sp_k(3, 2, 3, 1, 0).is_err());
        assert!(random_sp_k(1, 2, 2, 0, 0).is_err());
    }

    #[test]
    fn local_filter_examples() {
        let one = C64::new(1.0, 0.0);
        let e1e2 = vec![ZERO, one, ZERO, ZERO];
        assert_eq!(local_filter_from_vector(&e1e2).unwrap(), unit(1, 0, 2));

        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let bell = vec![h, ZERO, ZERO, h];
        let v = local_filter_from_vector(&bell).unwrap();
        assert!(v.distance(&ComplexMatrix::identity(2).scale(h)) < 1e-15);
        let filtered = ad_v(&kron(&ComplexMatrix::identity(2), &v))
            .apply(&max_entangled_p(2))
            .unwrap();
        assert!(filtered.distance(&max_entangled_p(2).scale_real(0.5)) < 1e-14);

        let mut rng = stream(5, 0);
        for n in [2, 3, 4] {
            let x = rng::unit_vector(&mut rng, n * n);
            let v = local_filter_from_vector(&x).unwrap();
            let filtered = ad_v(&kron(&ComplexMatrix::identity(n), &v))
                .apply(&max_entangled_p(n))
                .unwrap();
            assert!(filtered.distance(&ComplexMatrix::outer(&x, &x)) < 1e-12);
        }

        assert!(matches!(
            local_filter_from_vector(&[one, ZERO, ZERO]),
            Err(Error::NotPerfectSquare(3))
        ));
        assert!(matches!(
            local_filter_from_vector(&[ZERO; 4]),
            Err(Error::NotUnitVector(_))
        ));
    }

    #[test]
    fn symmetry_examples() {
        assert!(check_star_t_symmetry(&transpose_map(2), 1e-10)
            .unwrap()
            .holds());
        let v = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.0]]);
        let r = check_star_t_symmetry(&ad_v(&v), 1e-10).unwrap();
        assert!(r.holds() && r.routes_agree());
        let r = check_star_t_symmetry(&ad_v(&unit(1, 0, 2)), 1e-10).unwrap();
        assert!(!r.holds() && r.routes_agree());
        assert!(check_star_t_symmetry(
            &crate::maps::ad_v(&rng::gaussian_matrix(&mut stream(0, 0), 3, 2)),
            1e-10
        )
        .is_err());
    }

    #[test]
    fn compose_with_transpose_is_detected() {
        let v = is_cp(&compose(&identity_map(2), &transpose_map(2)).unwrap(), 1e-9).unwrap();
        assert_eq!(v.status, Status::Falsified);
        assert!((v.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn execution_modes_agree() {
        let phi = lambda_mu(3, 1.2);
        let par = SearchConfig {
            execution: Execution::Parallel,
            ..quick()
        };
        let seq = SearchConfig {
            execution: Execution::Sequential,
            ..quick()
        };
        assert_eq!(
            block_positivity_min(&phi, &par).unwrap(),
            block_positivity_min(&phi, &seq).unwrap()
        );
        assert_eq!(
            is_positive_map(&phi, &par).unwrap(),
            is_positive_map(&phi, &seq).unwrap()
        );
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig {
            restarts: 0,
            ..SearchConfig::default()
        };
        assert!(block_positivity_min(&identity_map(2), &bad).is_err());
        let bad = SearchConfig {
            psd_tol: 0.0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
