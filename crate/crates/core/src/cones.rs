//! Symmetric mapping cones given by finite generator lists, dual-cone
//! membership tests, and executable checks of the tensor-positivity
//! equivalences for a symmetric cone `𝒞` and a candidate `φ`:
//!
//! * `φ ∈ 𝒞°`, i.e. `Tr(C_φ C_ψ) ≥ 0` for all `ψ ∈ 𝒞`;
//! * `φ ∘ ψ` is completely positive for all `ψ ∈ 𝒞`;
//! * `ψ ⊗ φ` is positive for all `ψ ∈ 𝒞`;
//! * `(ψ ⊗ φ)(p) ≥ 0` for all `ψ ∈ 𝒞`.
//!
//! Cone elements are sampled as `Σ w_j · Ad u_j ∘ g_j ∘ Ad v_j` over the
//! generators `g_j`. Non-membership is always certified by an explicit cone
//! element; membership is reported as consistent unless a structural
//! certificate applies.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::{argmin_by_key, map_indexed};
use crate::maps::{
    ad_v, adjoint, compose, compose_direct, identity_map, pair, star_t, sum_maps, tensor,
    tensor_on_p, transpose_conj, transpose_map, SuperMap,
};
use crate::matrix::{kron, ComplexMatrix, C64, ZERO};
use crate::positivity::{
    check_star_t_symmetry, is_cp, is_positive_map, k_block_positivity_min,
    local_filter_from_vector, SearchConfig, Status, Verdict, Witness,
};
use crate::rng;
use crate::spectrum::{min_pair_unchecked, HermitianSpectrum};

/// Choi distance below which two generators are considered equal.
pub const GENERATOR_DEDUP_TOL: f64 = 1e-10;

/// Stream offset separating cone sampling from search restarts.
const CONE_STREAM_BASE: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq)]
pub struct MappingCone {
    dim: usize,
    generators: Vec<SuperMap>,
    symmetric: bool,
}

impl MappingCone {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[SuperMap] {
        &self.generators
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Completely positive maps, generated by `ι`.
    pub fn completely_positive(n: usize) -> Self {
        Self {
            dim: n,
            generators: vec![identity_map(n)],
            symmetric: true,
        }
    }

    /// Co-completely positive maps, generated by `t`.
    pub fn co_completely_positive(n: usize) -> Self {
        Self {
            dim: n,
            generators: vec![transpose_map(n)],
            symmetric: true,
        }
    }

    /// Mapping cone generated by a single `g` with `g = g* = g^t`.
    pub fn generated_by(g: &SuperMap) -> Result<Self> {
        let tol = GENERATOR_DEDUP_TOL * (1.0 + g.choi().frobenius_norm());
        let report = check_star_t_symmetry(g, tol)?;
        if !report.holds() {
            return Err(Error::HypothesisViolated(format!(
                "generator is not *- and t-invariant (imag {:.3e}, asymmetry {:.3e}, flip deviation {:.3e})",
                report.max_imag, report.asymmetry, report.flip_deviation
            )));
        }
        Ok(Self {
            dim: g.in_dim(),
            generators: vec![g.clone()],
            symmetric: true,
        })
    }
}

fn push_unique(list: &mut Vec<SuperMap>, m: SuperMap) {
    if list.iter().all(|g| g.distance(&m) > GENERATOR_DEDUP_TOL) {
        list.push(m);
    }
}

/// Closes `generators` under `*` and `t`, after checking that each one is
/// square of a common dimension and not refuted as a positive map.
pub fn make_symmetric_cone(generators: &[SuperMap], cfg: &SearchConfig) -> Result<MappingCone> {
    let first = generators
        .first()
        .ok_or(Error::Empty("a mapping cone needs at least one generator"))?;
    let n = first.in_dim();
    let mut closed = Vec::new();
    for (idx, g) in generators.iter().enumerate() {
        if g.in_dim() != n || g.out_dim() != n {
            return Err(Error::DimensionMismatch {
                context: "make_symmetric_cone",
                expected: n,
                found: if g.in_dim() != n {
                    g.in_dim()
                } else {
                    g.out_dim()
                },
            });
        }
        let verdict = is_positive_map(g, cfg)?;
        if verdict.status == Status::Falsified {
            return Err(Error::HypothesisViolated(format!(
                "generator {idx} is not a positive map (value {:.6e})",
                verdict.value
            )));
        }
        let star = adjoint(g);
        let t = transpose_conj(g);
        let st = transpose_conj(&star);
        for m in [g.clone(), star, t, st] {
            push_unique(&mut closed, m);
        }
    }
    Ok(MappingCone {
        dim: n,
        generators: closed,
        symmetric: true,
    })
}

/// `Ad u ∘ g ∘ Ad v`.
pub fn dress(g: &SuperMap, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<SuperMap> {
    compose_direct(&ad_v(u), &compose_direct(g, &ad_v(v))?)
}

fn sample_from<R: Rng + ?Sized>(cone: &MappingCone, rng: &mut R) -> Result<SuperMap> {
    let n = cone.dim;
    let terms = rng.random_range(1..=3usize);
    let mut parts = Vec::with_capacity(terms);
    for _ in 0..terms {
        let w = rng::exponential(rng);
        let g = &cone.generators[rng.random_range(0..cone.generators.len())];
        let u = rng::scaled_gaussian_matrix(rng, n, n, n as f64);
        let v = rng::scaled_gaussian_matrix(rng, n, n, n as f64);
        parts.push((w, dress(g, &u, &v)?));
    }
    sum_maps(&parts)
}

/// Random element `Σ_j w_j · Ad u_j ∘ g_j ∘ Ad v_j` of the cone, with one to
/// three terms, exponential weights and Gaussian `u_j, v_j` scaled to
/// `‖·‖_F² = n`.
pub fn sample_element(cone: &MappingCone, seed: u64) -> Result<SuperMap> {
    sample_from(cone, &mut rng::stream(seed, CONE_STREAM_BASE))
}

/// Candidate `i` of a trial sequence: generators first, then samples.
fn trial_element(cone: &MappingCone, cfg: &SearchConfig, i: usize) -> Result<SuperMap> {
    let ngen = cone.generators.len();
    if i < ngen {
        Ok(cone.generators[i].clone())
    } else {
        sample_from(
            cone,
            &mut rng::stream(cfg.seed, CONE_STREAM_BASE + i as u64),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipStatus {
    NotMember,
    ConsistentWithMembership,
    Member,
}

/// Cone element `ψ` with `(ψ ⊗ φ)(p)` having eigenvalue `value < 0` along
/// `vector`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWitness {
    pub psi: SuperMap,
    pub value: f64,
    pub vector: Vec<C64>,
    pub trial: usize,
}

impl DualWitness {
    /// Smallest eigenvalue of `(ψ ⊗ φ)(p)`, recomputed.
    pub fn evaluate(&self, phi: &SuperMap) -> Result<f64> {
        Ok(HermitianSpectrum::new(&tensor_on_p(&self.psi, phi)?)?.min())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub status: MembershipStatus,
    pub witness: Option<DualWitness>,
    /// Smallest eigenvalue of `(ψ ⊗ φ)(p)` over the trials.
    pub min_value: f64,
    pub trials: usize,
}

fn check_candidate(cone: &MappingCone, phi: &SuperMap) -> Result<()> {
    if phi.in_dim() != cone.dim || phi.out_dim() != cone.dim {
        return Err(Error::DimensionMismatch {
            context: "dual cone candidate",
            expected: cone.dim,
            found: if phi.in_dim() != cone.dim {
                phi.in_dim()
            } else {
                phi.out_dim()
            },
        });
    }
    Ok(())
}

/// Searches for `ψ ∈ 𝒞` with `(ψ ⊗ φ)(p)` not PSD. All generators are tried
/// first; random cone elements, up to `trials` candidates in total, are drawn
/// only if no generator refutes membership.
pub fn falsify_dual_membership(
    cone: &MappingCone,
    phi: &SuperMap,
    trials: usize,
    cfg: &SearchConfig,
) -> Result<MembershipReport> {
    cfg.validate()?;
    check_candidate(cone, phi)?;
    let ngen = cone.generators.len();
    let total = trials.max(ngen);
    let eval = |i: usize| -> Result<(SuperMap, f64, Vec<C64>)> {
        let psi = trial_element(cone, cfg, i)?;
        let s = HermitianSpectrum::new(&tensor_on_p(&psi, phi)?)?;
        let (value, vector) = (s.min(), s.min_vector());
        Ok((psi, value, vector))
    };
    let mut runs: Vec<_> = map_indexed(cfg.execution, ngen, eval)
        .into_iter()
        .collect::<Result<_>>()?;
    // a refuting generator ends the search before any sampling
    let refuted = runs.iter().any(|r| r.1 < -cfg.psd_tol);
    if !refuted && total > ngen {
        let sampled = map_indexed(cfg.execution, total - ngen, |i| eval(ngen + i));
        for run in sampled {
            runs.push(run?);
        }
    }
    let used = runs.len();
    let best = argmin_by_key(&runs, |r| r.1).expect("at least one generator");
    let min_value = runs[best].1;
    let (status, witness) = if min_value < -cfg.psd_tol {
        let (psi, value, vector) = runs.into_iter().nth(best).expect("index in range");
        (
            MembershipStatus::NotMember,
            Some(DualWitness {
                psi,
                value,
                vector,
                trial: best,
            }),
        )
    } else {
        (MembershipStatus::ConsistentWithMembership, None)
    };
    Ok(MembershipReport {
        status,
        witness,
        min_value,
        trials: used,
    })
}

/// Lowest pairing found by [`dual_pair_min`] and the cone point attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMin {
    pub value: f64,
    pub generator: usize,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
    /// `None` when the minimum is a raw generator.
    pub restart: Option<usize>,
}

impl PairMin {
    pub fn element(&self, cone: &MappingCone) -> Result<SuperMap> {
        dress(&cone.generators[self.generator], &self.u, &self.v)
    }
}

/// Quadratic form in `u` of `Tr(A·(I⊗u) B (I⊗u)*)`:
/// `M[(t, w), (r, s)] = Σ_il A[(l, t), (i, r)] · B[(i, s), (l, w)]`.
fn output_leg_form(a: &ComplexMatrix, b: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let d = n * n;
    ComplexMatrix::from_fn(d, d, |row, col| {
        let (t, w) = (row / n, row % n);
        let (r, s) = (col / n, col % n);
        let mut acc = ZERO;
        for i in 0..n {
            for l in 0..n {
                acc += a[(l * n + t, i * n + r)] * b[(i * n + s, l * n + w)];
            }
        }
        acc
    })
}

/// Quadratic form in `w` of `Tr(A·(w⊗I) B (w⊗I)*)`:
/// `M[(l, m), (i, j)] = Σ_rt A[(l, t), (i, r)] · B[(j, r), (m, t)]`.
fn input_leg_form(a: &ComplexMatrix, b: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let d = n * n;
    ComplexMatrix::from_fn(d, d, |row, col| {
        let (l, m) = (row / n, row % n);
        let (i, j) = (col / n, col % n);
        let mut acc = ZERO;
        for r in 0..n {
            for t in 0..n {
                acc += a[(l * n + t, i * n + r)] * b[(j * n + r, m * n + t)];
            }
        }
        acc
    })
}

fn reshape_scaled(vec: &[C64], n: usize, transpose: bool) -> ComplexMatrix {
    let s = (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let idx = if transpose { j * n + i } else { i * n + j };
        vec[idx] * s
    })
}

fn pair_restart(
    cone: &MappingCone,
    phi: &SuperMap,
    cfg: &SearchConfig,
    restart: usize,
) -> Result<PairMin> {
    let n = cone.dim;
    let generator = restart % cone.generators.len();
    let g = &cone.generators[generator];
    let mut rng = rng::stream(cfg.seed, restart as u64);
    let mut u = rng::scaled_gaussian_matrix(&mut rng, n, n, n as f64);
    let mut v = rng::scaled_gaussian_matrix(&mut rng, n, n, n as f64);
    let a = phi.choi();
    let mut last = f64::INFINITY;
    for _ in 0..cfg.max_iters.max(1) {
        let h = compose_direct(g, &ad_v(&v))?;
        let (_, uv) = min_pair_unchecked(&output_leg_form(a, h.choi(), n));
        u = reshape_scaled(&uv, n, false);

        let h = compose_direct(&ad_v(&u), g)?;
        let (lambda, wv) = min_pair_unchecked(&input_leg_form(a, h.choi(), n));
        // w = vᵗ
        v = reshape_scaled(&wv, n, true);
        let value = lambda * n as f64;
        if last - value < cfg.conv_tol {
            break;
        }
        last = value;
    }
    let value = pair(phi, &dress(g, &u, &v)?)?;
    Ok(PairMin {
        value,
        generator,
        u,
        v,
        restart: Some(restart),
    })
}

/// Heuristic minimum of `Tr(C_φ C_ψ)` over `ψ = Ad u ∘ g ∘ Ad v` with
/// `‖u‖_F² = ‖v‖_F² = n`, alternating exact minimization over `u` and `v`.
/// Raw generators (`u = v = I`) are always included, so the result never
/// exceeds `pair(φ, g)` for any generator. A negative value certifies
/// `φ ∉ 𝒞°`.
pub fn dual_pair_min(cone: &MappingCone, phi: &SuperMap, cfg: &SearchConfig) -> Result<PairMin> {
    cfg.validate()?;
    check_candidate(cone, phi)?;
    let n = cone.dim;
    let mut candidates = Vec::with_capacity(cone.generators.len() + cfg.restarts);
    for (idx, g) in cone.generators.iter().enumerate() {
        candidates.push(PairMin {
            value: pair(phi, g)?,
            generator: idx,
            u: ComplexMatrix::identity(n),
            v: ComplexMatrix::identity(n),
            restart: None,
        });
    }
    let runs = map_indexed(cfg.execution, cfg.restarts, |r| {
        pair_restart(cone, phi, cfg, r)
    });
    for run in runs {
        candidates.push(run?);
    }
    let best = argmin_by_key(&candidates, |c| c.value).expect("non-empty");
    Ok(candidates.into_iter().nth(best).expect("index in range"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorDecision {
    pub status: MembershipStatus,
    /// Positivity verdict on `g ⊗ φ`.
    pub verdict: Verdict,
    /// Independent dual-cone search on the cone generated by `g`.
    pub cross_check: MembershipReport,
    pub pair_min: PairMin,
    /// False only if one route certifies membership and the other refutes it.
    pub routes_agree: bool,
}

/// Decides `φ ∈ 𝒞_g°` through the positivity of `g ⊗ φ`, for a generator
/// with `g = g* = g^t`.
pub fn decide_corollary4(
    g: &SuperMap,
    phi: &SuperMap,
    cfg: &SearchConfig,
) -> Result<GeneratorDecision> {
    cfg.validate()?;
    let cone = MappingCone::generated_by(g)?;
    check_candidate(&cone, phi)?;
    let verdict = is_positive_map(&tensor(g, phi), cfg)?;
    let status = match verdict.status {
        Status::Falsified => MembershipStatus::NotMember,
        Status::CertifiedPositive => MembershipStatus::Member,
        Status::NoCounterexample => MembershipStatus::ConsistentWithMembership,
    };
    let cross_check = falsify_dual_membership(&cone, phi, cfg.restarts, cfg)?;
    let pair_min = dual_pair_min(&cone, phi, cfg)?;
    let refuted =
        cross_check.status == MembershipStatus::NotMember || pair_min.value < -cfg.psd_tol;
    let routes_agree = !(status == MembershipStatus::Member && refuted)
        && !(status != MembershipStatus::NotMember
            && cross_check.status == MembershipStatus::NotMember);
    Ok(GeneratorDecision {
        status,
        verdict,
        cross_check,
        pair_min,
        routes_agree,
    })
}

/// Aggregate of one of the equivalent conditions over the evaluated cone
/// elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionOutcome {
    pub falsified: bool,
    pub min_value: f64,
}

impl ConditionOutcome {
    fn new() -> Self {
        Self {
            falsified: false,
            min_value: f64::INFINITY,
        }
    }

    fn record(&mut self, value: f64, falsified: bool) {
        self.min_value = self.min_value.min(value);
        self.falsified |= falsified;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentConditionsReport {
    /// `φ ∘ ψ` completely positive.
    pub composition_cp: ConditionOutcome,
    /// `ψ ⊗ φ` positive.
    pub tensor_positive: ConditionOutcome,
    /// `(ψ ⊗ φ)(p) ≥ 0`.
    pub tensor_on_p: ConditionOutcome,
    /// Dual-cone pairing minimum, `Tr(C_φ C_ψ)`.
    pub pairing: ConditionOutcome,
    /// Largest `‖C_{φ∘ψ} − (ψ^{*t} ⊗ φ)(p)‖_F` seen.
    pub route_residual: f64,
    /// Number of cone elements evaluated, including `*t` partners and
    /// filtered elements built from positivity witnesses.
    pub evaluated: usize,
    pub inconsistencies: Vec<String>,
}

impl EquivalentConditionsReport {
    pub fn consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }

    /// Common outcome of the conditions, if they agree.
    pub fn all_falsified(&self) -> bool {
        self.composition_cp.falsified
            && self.tensor_positive.falsified
            && self.tensor_on_p.falsified
    }

    pub fn none_falsified(&self) -> bool {
        !self.composition_cp.falsified
            && !self.tensor_positive.falsified
            && !self.tensor_on_p.falsified
            && !self.pairing.falsified
    }
}

/// Unit vector `x` on `K₁ ⊗ K₂` with `⟨y|(ψ⊗φ)(|x⟩⟨x|)|y⟩ < 0`, extracted from
/// a positivity witness. Mixed inputs are reduced to their worst eigenvector.
fn rank_one_input(witness: &Witness, map: &SuperMap) -> Result<Option<Vec<C64>>> {
    match witness {
        Witness::ProductVectors { x, .. } => Ok(Some(x.iter().map(|z| z.conj()).collect())),
        Witness::Input {
            input, direction, ..
        } => {
            let s = HermitianSpectrum::new(input)?;
            let mut best: Option<(f64, Vec<C64>)> = None;
            for (idx, &weight) in s.eigenvalues.iter().enumerate() {
                if weight <= 1e-14 {
                    continue;
                }
                let e = s.eigenvectors.column(idx);
                let out = map.apply(&ComplexMatrix::outer(&e, &e))?;
                let val = out.quadratic_form(direction).re;
                if best.as_ref().map_or(true, |(b, _)| val < *b) {
                    best = Some((val, e));
                }
            }
            Ok(best.filter(|(v, _)| *v < 0.0).map(|(_, e)| e))
        }
        Witness::ChoiVector { .. } => Ok(None),
    }
}

/// Evaluates the equivalent conditions on generators, sampled elements and
/// their `*t` partners, and transports every positivity failure of `ψ ⊗ φ` to
/// a composition failure via the local filter `Ad v ∘ ψ^{*t}`. Any
/// disagreement lands in `inconsistencies`; it indicates a numerical or
/// implementation fault, not a failure of the equivalence.
pub fn verify_theorem2(
    cone: &MappingCone,
    phi: &SuperMap,
    trials: usize,
    cfg: &SearchConfig,
) -> Result<EquivalentConditionsReport> {
    cfg.validate()?;
    if !cone.symmetric {
        return Err(Error::HypothesisViolated("cone is not symmetric".into()));
    }
    check_candidate(cone, phi)?;
    let tol = cfg.psd_tol;
    let total = trials.max(cone.generators.len());

    struct Eval {
        comp_min: f64,
        route_residual: f64,
        on_p_min: f64,
        positivity: Verdict,
        tensor: SuperMap,
        psi: SuperMap,
    }

    let eval = |psi: SuperMap| -> Result<Eval> {
        let comp = compose(phi, &psi)?;
        let via_p = tensor_on_p(&star_t(&psi), phi)?;
        let route_residual = comp.choi().distance(&via_p);
        let comp_min = HermitianSpectrum::new(comp.choi())?.min();
        let on_p_min = HermitianSpectrum::new(&tensor_on_p(&psi, phi)?)?.min();
        let tensor = tensor(&psi, phi);
        let positivity = is_positive_map(&tensor, cfg)?;
        Ok(Eval {
            comp_min,
            route_residual,
            on_p_min,
            positivity,
            tensor,
            psi,
        })
    };

    let evals = map_indexed(cfg.execution, 2 * total, |idx| -> Result<Eval> {
        let base = trial_element(cone, cfg, idx / 2)?;
        eval(if idx % 2 == 0 { base } else { star_t(&base) })
    });
    let evals: Vec<Eval> = evals.into_iter().collect::<Result<_>>()?;

    let mut report = EquivalentConditionsReport {
        composition_cp: ConditionOutcome::new(),
        tensor_positive: ConditionOutcome::new(),
        tensor_on_p: ConditionOutcome::new(),
        pairing: ConditionOutcome::new(),
        route_residual: 0.0,
        evaluated: evals.len(),
        inconsistencies: Vec::new(),
    };
    let scale = 1.0 + phi.choi().frobenius_norm();

    for (idx, e) in evals.iter().enumerate() {
        report.route_residual = report.route_residual.max(e.route_residual);
        if e.route_residual > 1e-9 * scale * (1.0 + e.psi.choi().frobenius_norm()) {
            report.inconsistencies.push(format!(
                "element {idx}: composition routes differ by {:.3e}",
                e.route_residual
            ));
        }
        report.composition_cp.record(e.comp_min, e.comp_min < -tol);
        report.tensor_on_p.record(e.on_p_min, e.on_p_min < -tol);
        let pos_falsified = e.positivity.status == Status::Falsified;
        report
            .tensor_positive
            .record(e.positivity.value, pos_falsified);
        let pv = pair(phi, &e.psi)?;
        report.pairing.record(pv, pv < -tol);

        if e.on_p_min < -tol && !pos_falsified {
            report.inconsistencies.push(format!(
                "element {idx}: (ψ⊗φ)(p) has eigenvalue {:.6e} but ψ⊗φ was not refuted",
                e.on_p_min
            ));
        }
        let partner = if idx % 2 == 0 { idx + 1 } else { idx - 1 };
        let partner_on_p = evals[partner].on_p_min;
        if (e.comp_min < -tol) != (partner_on_p < -tol) {
            report.inconsistencies.push(format!(
                "element {idx}: φ∘ψ min eigenvalue {:.6e} but (ψ^{{*t}}⊗φ)(p) min eigenvalue {:.6e}",
                e.comp_min, partner_on_p
            ));
        }

        if pos_falsified {
            let witness = e
                .positivity
                .witness
                .as_ref()
                .expect("falsified verdict has witness");
            match rank_one_input(witness, &e.tensor)? {
                Some(x) => {
                    let v = local_filter_from_vector(&x)?;
                    let filtered = compose_direct(&ad_v(&v), &star_t(&e.psi))?;
                    let transported =
                        HermitianSpectrum::new(compose(phi, &filtered)?.choi())?.min();
                    report
                        .composition_cp
                        .record(transported, transported < -tol);
                    report.evaluated += 1;
                    if transported >= -tol {
                        report.inconsistencies.push(format!(
                            "element {idx}: ψ⊗φ refuted but filtered element Ad v∘ψ^{{*t}} gives CP composition ({transported:.6e})"
                        ));
                    }
                }
                None => report.inconsistencies.push(format!(
                    "element {idx}: positivity witness has no rank-one negative component"
                )),
            }
        }
    }

    let flags = [
        report.composition_cp.falsified,
        report.tensor_positive.falsified,
        report.tensor_on_p.falsified,
    ];
    if flags.iter().any(|&f| f) && !flags.iter().all(|&f| f) {
        report.inconsistencies.push(format!(
            "conditions disagree: composition CP falsified {}, tensor positivity falsified {}, (ψ⊗φ)(p) falsified {}",
            flags[0], flags[1], flags[2]
        ));
    }
    if report.pairing.falsified && !report.tensor_on_p.falsified {
        // A negative pairing refutes φ ∈ 𝒞° outright.
        report.inconsistencies.push(format!(
            "pairing {:.6e} < 0 while no tensor condition was refuted",
            report.pairing.min_value
        ));
    }
    Ok(report)
}

/// Which cone the maps `α` and `γ` are drawn from.
#[derive(Debug, Clone, Copy)]
pub enum DressedHypothesis<'a> {
    /// `α ∈ 𝒞` for the given cone; `γ` must survive a dual-membership search.
    Cone {
        cone: &'a MappingCone,
        dual_trials: usize,
    },
    /// `α` k-positive, `γ` k-superpositive.
    KPositive { k: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DressedTensorReport {
    pub verdict: Verdict,
    /// Smallest output eigenvalue over the sampled trace-one PSD inputs.
    pub min_sampled_eigenvalue: Option<f64>,
    pub block_min: Option<f64>,
}

impl DressedTensorReport {
    pub fn counterexample_found(&self) -> bool {
        self.verdict.status == Status::Falsified
    }
}

/// Checks that `(α∘β) ⊗ (γ∘δ)` is not refuted as a positive map when `β, δ`
/// are completely positive, `α` lies in the cone and `γ` in its dual.
pub fn verify_corollary3(
    hypothesis: DressedHypothesis<'_>,
    alpha: &SuperMap,
    gamma: &SuperMap,
    beta: &SuperMap,
    delta: &SuperMap,
    cfg: &SearchConfig,
) -> Result<DressedTensorReport> {
    cfg.validate()?;
    let tol = cfg.psd_tol;
    if is_cp(beta, tol)?.status != Status::CertifiedPositive {
        return Err(Error::HypothesisViolated(
            "beta is not completely positive".into(),
        ));
    }
    if is_cp(delta, tol)?.status != Status::CertifiedPositive {
        return Err(Error::HypothesisViolated(
            "delta is not completely positive".into(),
        ));
    }
    match hypothesis {
        DressedHypothesis::Cone { cone, dual_trials } => {
            check_candidate(cone, alpha)?;
            if is_positive_map(alpha, cfg)?.status == Status::Falsified {
                return Err(Error::HypothesisViolated(
                    "alpha is not a positive map".into(),
                ));
            }
            let dual = falsify_dual_membership(cone, gamma, dual_trials, cfg)?;
            if dual.status == MembershipStatus::NotMember {
                return Err(Error::HypothesisViolated(format!(
                    "gamma is not in the dual cone: (ψ⊗γ)(p) has eigenvalue {:.6e}",
                    dual.min_value
                )));
            }
        }
        DressedHypothesis::KPositive { k } => {
            let kmin = k_block_positivity_min(alpha, k, cfg)?;
            if kmin.value < -tol {
                return Err(Error::HypothesisViolated(format!(
                    "alpha is not {k}-positive: Schmidt-rank-{k} value {:.6e}",
                    kmin.value
                )));
            }
            if is_cp(gamma, tol)?.status != Status::CertifiedPositive {
                return Err(Error::HypothesisViolated(
                    "gamma is not completely positive, so not k-superpositive".into(),
                ));
            }
        }
    }
    let psi = compose(alpha, beta)?;
    let phi = compose(gamma, delta)?;
    let verdict = is_positive_map(&tensor(&psi, &phi), cfg)?;
    Ok(DressedTensorReport {
        min_sampled_eigenvalue: verdict.stats.sampled_min,
        block_min: verdict.stats.block_min,
        verdict,
    })
}

/// `(Ad u ⊗ ι)`, used to check the factorization of dressed tensor maps.
pub fn ad_on_first_leg(u: &ComplexMatrix, n: usize) -> SuperMap {
    ad_v(&kron(u, &ComplexMatrix::identity(n)))
}
