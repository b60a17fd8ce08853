//! Subcommand drivers. Each one builds a [`Report`] whose exit code follows
//! the shared convention: 0 pass, 1 refuted with witness, 2 inconclusive.

use std::path::{Path, PathBuf};

use posmap::{
    check_star_t_symmetry, compose, decide_corollary4, dual_pair_min, falsify_dual_membership,
    is_cp, is_positive_map, k_block_positivity_min, make_symmetric_cone, pair, run_suite, star_t,
    tensor, Bound, Certificate, Error, MembershipStatus, SearchConfig, Status, Suite, SuperMap,
    Verdict, Witness,
};
use serde_json::{json, Value};

use crate::mapfile::{parse_map_file, ParseError};
use crate::report::{self, num, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) => m,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Empty(_) => CliError::Usage(e.to_string()),
            Error::DimensionMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::NotHermitian { .. }
            | Error::NonRealPairing { .. }
            | Error::NotPerfectSquare(_)
            | Error::NotUnitVector(_)
            | Error::HypothesisViolated(_) => CliError::Parse(e.to_string()),
        }
    }
}

pub type CliResult = Result<Report, CliError>;

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub cfg: SearchConfig,
}

impl Context {
    fn report(&self, command: &str, args: Value) -> Report {
        let c = &self.cfg;
        Report::new(
            command,
            args,
            c.seed,
            json!({
                "psd_tol": num(c.psd_tol),
                "conv_tol": num(c.conv_tol),
                "restarts": c.restarts,
                "max_iters": c.max_iters,
                "psd_samples": c.psd_samples,
            }),
        )
    }
}

fn path_str(p: &Path) -> Value {
    json!(p.display().to_string())
}

fn load(path: &Path) -> Result<SuperMap, CliError> {
    Ok(parse_map_file(path)?.map)
}

fn witness_value(w: &Witness) -> Value {
    match w {
        Witness::ChoiVector { vector, value } => json!({
            "type": "choi_vector",
            "value": num(*value),
            "vector": report::vector(vector),
        }),
        Witness::ProductVectors { x, y, value } => json!({
            "type": "product_vectors",
            "value": num(*value),
            "x": report::vector(x),
            "y": report::vector(y),
            "input": report::matrix(&w.input_matrix().expect("product witness has an input")),
        }),
        Witness::Input {
            input,
            direction,
            value,
        } => json!({
            "type": "input",
            "value": num(*value),
            "input": report::matrix(input),
            "direction": report::vector(direction),
        }),
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Falsified => "falsified",
        Status::NoCounterexample => "no-counterexample",
        Status::CertifiedPositive => "certified-positive",
    }
}

fn verdict_exit(s: Status) -> i32 {
    if s == Status::Falsified {
        EXIT_REFUTED
    } else {
        EXIT_PASS
    }
}

fn record_verdict(r: &mut Report, v: &Verdict) {
    r.status(status_name(v.status), verdict_exit(v.status));
    r.value("value", num(v.value));
    if let Some(c) = v.certificate {
        let name = match c {
            Certificate::CompletelyPositive => "completely-positive",
            Certificate::CoCompletelyPositive => "co-completely-positive",
        };
        r.value("certificate", json!(name));
    }
    if let Some(b) = v.stats.block_min {
        r.value("block_min", num(b));
    }
    if let Some(s) = v.stats.sampled_min {
        r.value("sampled_min", num(s));
        r.value("samples", json!(v.stats.samples));
    }
    if let Some(w) = &v.witness {
        r.witness = Some(witness_value(w));
    }
}

pub fn check_cp(ctx: &Context, file: &Path) -> CliResult {
    let phi = load(file)?;
    let mut r = ctx.report("check-cp", json!({ "file": path_str(file) }));
    let v = is_cp(&phi, ctx.cfg.psd_tol)?;
    record_verdict(&mut r, &v);
    r.value("min_eigenvalue", num(v.value));
    r.line(format!("Choi matrix minimum eigenvalue {:.12}", v.value));
    Ok(r)
}

pub fn check_positive(ctx: &Context, file: &Path) -> CliResult {
    let phi = load(file)?;
    let mut r = ctx.report("check-positive", json!({ "file": path_str(file) }));
    let v = is_positive_map(&phi, &ctx.cfg)?;
    record_verdict(&mut r, &v);
    r.line(match (v.status, v.certificate) {
        (Status::CertifiedPositive, Some(Certificate::CompletelyPositive)) => {
            "map is completely positive".to_string()
        }
        (Status::CertifiedPositive, _) => "map is co-completely positive".to_string(),
        (Status::Falsified, _) => format!(
            "PSD input sent to an operator with eigenvalue {:.12}",
            v.value
        ),
        (Status::NoCounterexample, _) => {
            format!("no counterexample found; lowest value seen {:.12}", v.value)
        }
    });
    Ok(r)
}

pub fn check_k_positive(ctx: &Context, file: &Path, k: usize) -> CliResult {
    let phi = load(file)?;
    let mut r = ctx.report(
        "check-k-positive",
        json!({ "file": path_str(file), "k": k }),
    );
    let m = k_block_positivity_min(&phi, k, &ctx.cfg)?;
    let exact = k == phi.in_dim().min(phi.out_dim());
    let status = if m.value < -ctx.cfg.psd_tol {
        Status::Falsified
    } else if exact {
        Status::CertifiedPositive
    } else {
        Status::NoCounterexample
    };
    r.status(status_name(status), verdict_exit(status));
    r.value("value", num(m.value));
    r.value("exact", json!(exact));
    r.line(format!(
        "minimum of ⟨z|C|z⟩ over Schmidt rank ≤ {k}: {:.12}{}",
        m.value,
        if exact {
            " (exact: full Schmidt rank)"
        } else {
            ""
        }
    ));
    if status == Status::Falsified {
        r.witness = Some(json!({
            "type": "choi_vector",
            "value": num(m.value),
            "vector": report::vector(&m.z),
            "restart": m.restart,
        }));
    }
    Ok(r)
}

pub fn pair_maps(ctx: &Context, a: &Path, b: &Path) -> CliResult {
    let phi = load(a)?;
    let psi = load(b)?;
    let mut r = ctx.report(
        "pair",
        json!({ "first": path_str(a), "second": path_str(b) }),
    );
    let v = pair(&phi, &psi)?;
    r.status(
        if v < -ctx.cfg.psd_tol {
            "negative"
        } else {
            "nonnegative"
        },
        EXIT_PASS,
    );
    r.value("pairing", num(v));
    r.line(format!("Tr(C_φ C_ψ) = {v:.12}"));
    Ok(r)
}

fn membership_name(s: MembershipStatus) -> &'static str {
    match s {
        MembershipStatus::NotMember => "not-member",
        MembershipStatus::ConsistentWithMembership => "consistent-with-membership",
        MembershipStatus::Member => "member",
    }
}

pub fn dual(ctx: &Context, gens: &[PathBuf], candidate: &Path, trials: usize) -> CliResult {
    let generators = gens
        .iter()
        .map(|g| load(g))
        .collect::<Result<Vec<_>, _>>()?;
    let phi = load(candidate)?;
    let args = json!({
        "cone_gen": gens.iter().map(|g| path_str(g)).collect::<Vec<_>>(),
        "candidate": path_str(candidate),
        "trials": trials,
    });
    let mut r = ctx.report("dual", args);
    let cone = make_symmetric_cone(&generators, &ctx.cfg)?;
    let search = falsify_dual_membership(&cone, &phi, trials, &ctx.cfg)?;
    let pmin = dual_pair_min(&cone, &phi, &ctx.cfg)?;
    r.value("generators", json!(cone.generators().len()));
    r.value("trials", json!(search.trials));
    r.value("min_eigenvalue", num(search.min_value));
    r.value("pair_min", num(pmin.value));
    if let Some(w) = &search.witness {
        r.status(membership_name(MembershipStatus::NotMember), EXIT_REFUTED);
        let origin = if w.trial < cone.generators().len() {
            "generator"
        } else {
            "sampled element"
        };
        r.line(format!(
            "(ψ⊗φ)(p) has eigenvalue {:.12} for ψ = {origin} at trial {}",
            w.value, w.trial
        ));
        r.line("check-cp on witness.composition (φ∘ψ^{*t}) reproduces the eigenvalue");
        r.witness = Some(json!({
            "type": "dual_element",
            "value": num(w.value),
            "trial": w.trial,
            "vector": report::vector(&w.vector),
            "psi": report::map(&w.psi),
            "composition": report::map(&compose(&phi, &star_t(&w.psi))?),
        }));
    } else if pmin.value < -ctx.cfg.psd_tol {
        r.status(membership_name(MembershipStatus::NotMember), EXIT_REFUTED);
        r.line(format!(
            "Tr(C_φ C_ψ) = {:.12} for a cone element ψ",
            pmin.value
        ));
        r.line("pair on the candidate and witness.psi reproduces the value");
        r.witness = Some(json!({
            "type": "pairing",
            "value": num(pmin.value),
            "psi": report::map(&pmin.element(&cone)?),
        }));
    } else {
        r.status(
            membership_name(MembershipStatus::ConsistentWithMembership),
            EXIT_PASS,
        );
        r.line(format!(
            "no cone element refutes membership; lowest (ψ⊗φ)(p) eigenvalue {:.12}, lowest pairing {:.12}",
            search.min_value, pmin.value
        ));
    }
    Ok(r)
}

pub fn cor4(ctx: &Context, gen: &Path, candidate: &Path) -> CliResult {
    let g = load(gen)?;
    let phi = load(candidate)?;
    let mut r = ctx.report(
        "cor4",
        json!({ "gen": path_str(gen), "candidate": path_str(candidate) }),
    );
    let d = decide_corollary4(&g, &phi, &ctx.cfg)?;
    r.value("tensor_value", num(d.verdict.value));
    r.value("tensor_status", json!(status_name(d.verdict.status)));
    r.value("cross_check", json!(membership_name(d.cross_check.status)));
    r.value("cross_check_min_eigenvalue", num(d.cross_check.min_value));
    r.value("pair_min", num(d.pair_min.value));
    r.value("routes_agree", json!(d.routes_agree));
    if !d.routes_agree {
        r.status("inconclusive", EXIT_INCONCLUSIVE);
        r.line(format!(
            "positivity of g⊗φ says {} but the dual-cone search says {}",
            membership_name(d.status),
            membership_name(d.cross_check.status)
        ));
        return Ok(r);
    }
    let exit = if d.status == MembershipStatus::NotMember {
        EXIT_REFUTED
    } else {
        EXIT_PASS
    };
    r.status(membership_name(d.status), exit);
    r.line(match d.status {
        MembershipStatus::Member => "g⊗φ is structurally positive".to_string(),
        MembershipStatus::NotMember => {
            format!("g⊗φ is not positive: value {:.12}", d.verdict.value)
        }
        MembershipStatus::ConsistentWithMembership => {
            format!(
                "no counterexample to positivity of g⊗φ; lowest value {:.12}",
                d.verdict.value
            )
        }
    });
    if let Some(w) = &d.verdict.witness {
        let mut wv = witness_value(w);
        wv["tensor_map"] = report::map(&tensor(&g, &phi));
        r.witness = Some(wv);
    }
    Ok(r)
}

pub fn prop5(ctx: &Context, file: &Path) -> CliResult {
    let phi = load(file)?;
    let mut r = ctx.report("prop5", json!({ "file": path_str(file) }));
    let tol = ctx.cfg.psd_tol * (1.0 + phi.choi().frobenius_norm());
    let s = check_star_t_symmetry(&phi, tol)?;
    r.value("max_imag", num(s.max_imag));
    r.value("asymmetry", num(s.asymmetry));
    r.value("flip_deviation", num(s.flip_deviation));
    r.value("adjoint_deviation", num(s.adjoint_deviation));
    r.value("transpose_deviation", num(s.transpose_deviation));
    r.value("choi_test", json!(s.choi_test));
    r.value("map_test", json!(s.map_test));
    if !s.routes_agree() {
        r.status("inconclusive", EXIT_INCONCLUSIVE);
        r.line("Choi-level and map-level tests disagree");
    } else if s.holds() {
        r.status("symmetric", EXIT_PASS);
        r.line("Choi matrix is real, symmetric and flip-invariant, so φ = φ* = φ^t");
    } else {
        r.status("not-symmetric", EXIT_REFUTED);
        r.line("φ differs from φ* or φ^t");
    }
    Ok(r)
}

/// Names accepted by `verify`, with their default trial counts and dimensions.
pub fn suite_for(name: &str) -> Option<(Suite, usize, &'static [usize])> {
    Some(match name {
        "eq1" => (Suite::TildeFunctional, 100, &[2, 3]),
        "lemma1" => (Suite::CompositionIdentities, 100, &[2, 3]),
        "adjoint" => (Suite::AdjointStructure, 100, &[2, 3]),
        "prop5" => (Suite::StarTSymmetry, 100, &[2, 3]),
        "thm2" => (Suite::EquivalentConditions, 4, &[2, 3]),
        "cor3" => (Suite::DressedTensors, 5, &[2, 3]),
        "cor4-demo" => (Suite::SingleGenerator, 0, &[2]),
        "cp-selfdual" => (Suite::CpSelfDuality, 100, &[2, 3]),
        _ => return None,
    })
}

pub fn verify(ctx: &Context, name: &str, dims: &[usize], trials: Option<usize>) -> CliResult {
    let (suite, default_trials, default_dims) =
        suite_for(name).ok_or_else(|| CliError::Usage(format!("unknown suite \"{name}\"")))?;
    let trials = trials.unwrap_or(default_trials);
    let dims = if dims.is_empty() { default_dims } else { dims };
    let mut r = ctx.report(
        "verify",
        json!({ "suite": name, "dims": dims, "trials": trials }),
    );
    let rep = run_suite(suite, dims, trials, &ctx.cfg)?;
    let mut checks = Vec::new();
    for c in &rep.checks {
        let (bound, bound_text) = match c.bound {
            Bound::AtMost(t) => (json!({ "at_most": num(t) }), format!("≤ {t:e}")),
            Bound::AtLeast(t) => (json!({ "at_least": num(t) }), format!("≥ {t:e}")),
            Bound::Holds => (json!("holds"), "holds".to_string()),
        };
        r.line(format!(
            "{} {}: {:.6e} ({bound_text}, {} samples){}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.samples,
            c.detail
                .as_ref()
                .map(|d| format!(" [{d}]"))
                .unwrap_or_default()
        ));
        checks.push(json!({
            "name": c.name,
            "value": num(c.value),
            "bound": bound,
            "samples": c.samples,
            "passed": c.passed,
            "detail": c.detail,
        }));
    }
    r.value("suite", json!(suite.name()));
    r.value("checks", Value::Array(checks));
    if rep.passed() {
        r.status("pass", EXIT_PASS);
    } else if suite == Suite::EquivalentConditions {
        r.status("inconsistent", EXIT_INCONCLUSIVE);
    } else {
        r.status("fail", EXIT_REFUTED);
    }
    Ok(r)
}
