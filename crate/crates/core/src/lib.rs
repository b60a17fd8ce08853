//! Choi-matrix calculus for linear maps between matrix algebras, with
//! numerical certification of positivity, k-positivity and membership in
//! symmetric mapping cones and their duals.
//!
//! Falsification is always exact: a negative verdict carries a witness that
//! re-evaluates to the reported value. Positive verdicts are either
//! structural (complete positivity or co-complete positivity of the Choi
//! matrix) or empirical, meaning a seeded search found no counterexample.

pub mod cones;
pub mod error;
pub mod exec;
pub mod maps;
pub mod matrix;
pub mod positivity;
pub mod rng;
pub mod spectrum;
pub mod suites;

pub use cones::{
    decide_corollary4, dual_pair_min, falsify_dual_membership, make_symmetric_cone, sample_element,
    verify_corollary3, verify_theorem2, DressedHypothesis, DressedTensorReport, DualWitness,
    EquivalentConditionsReport, GeneratorDecision, MappingCone, MembershipReport, MembershipStatus,
    PairMin,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use maps::{
    ad_v, adjoint, compose, compose_direct, compose_via_p, identity_map, lambda_mu, pair,
    pi_contract, random_cp_map, random_hermitian_map, random_map, reduction_map, star_t, sum_maps,
    tensor, tensor_on_p, tilde_apply, transpose_conj, transpose_map, SuperMap,
};
pub use matrix::{
    flip_operator, j_conjugate, kron, matrix_unit, max_entangled_p, partial_trace, ComplexMatrix,
    Leg, C64,
};
pub use positivity::{
    block_positivity_min, check_star_t_symmetry, is_co_cp, is_cp, is_positive_map,
    k_block_positivity_min, local_filter_from_vector, random_sp_k, Certificate, SearchConfig,
    Status, SymmetryReport, Verdict, Witness,
};
pub use spectrum::{hermitian_min_eig, is_psd, HermitianSpectrum};
pub use suites::{run_suite, Bound, Check, Suite, SuiteReport};
