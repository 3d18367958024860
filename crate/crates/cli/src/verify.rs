//! `fsamp verify`: recoverability, the four theorem conditions, and
//! randomized reconstruction trials.

use std::time::Instant;

use finite_sampling::covariance::check_stationarity;
use finite_sampling::sampling::{
    candidate_reconstruction_vectors, evaluate_theorem, frame_bounds_in, g_compatible_left_inverse,
    interpolation_deviation, reconstruct, GCompatibleLeftInverse, TheoremConditions,
};
use finite_sampling::{tolerance, CVector, CoefficientVector, SamplingDesign};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{gaussian_vector, DesignConfig};
use crate::error::{CliError, ExitStatus, Stage};
use crate::pipeline::Pipeline;
use crate::report::{labels, Check, DesignSummary, FrameSummary, ResidualStats};

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub trials: u64,
    pub seed: Option<u64>,
    pub expect_unrecoverable: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { trials: 20, seed: None, expect_unrecoverable: false }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TheoremSummary {
    pub rank_full: bool,
    pub inverse_ok: bool,
    pub expansion_exact: bool,
    pub frame_ok: bool,
    pub agree: bool,
}

impl From<TheoremConditions> for TheoremSummary {
    fn from(t: TheoremConditions) -> Self {
        Self {
            rank_full: t.rank_full,
            inverse_ok: t.inverse_ok,
            expansion_exact: t.expansion_exact,
            frame_ok: t.frame_ok,
            agree: t.all_agree(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrialResult {
    pub trial: u64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub design: DesignSummary,
    pub seed: u64,
    pub trials: u64,
    pub rank: usize,
    pub recoverable: bool,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub cutoff: f64,
    pub ill_conditioned: bool,
    pub frame: Option<FrameSummary>,
    pub theorem: TheoremSummary,
    pub interpolation: Option<Check>,
    pub checks: Vec<Check>,
    pub trial_residuals: Vec<TrialResult>,
    pub residuals: ResidualStats,
    pub status: ExitStatus,
    pub timing_ms: f64,
}

impl VerifyReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().chain(self.interpolation.iter()).filter(|c| !c.passed)
    }
}

pub fn summary(cfg: &DesignConfig, p: &Pipeline) -> DesignSummary {
    DesignSummary {
        id: cfg.design_id().to_string(),
        group_order: p.group.order(),
        dim: p.dim(),
        ell: p.transversal.ell(),
        h_order: p.transversal.h().order(),
        systems: p.systems.len(),
        k: labels(&p.group, p.transversal.taus()),
        h: labels(&p.group, p.transversal.h().elements()),
    }
}

/// Per-trial stream: the master seed with the trial number as stream id.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A random `x = T(alpha)` in `A_a` together with `alpha`.
pub fn random_state(p: &Pipeline, rng: &mut ChaCha8Rng) -> (CoefficientVector, CVector) {
    let alpha = CoefficientVector::new(gaussian_vector(p.group.order(), rng));
    let x = p.subspace.synthesize(&alpha).expect("pipeline guarantees an independent orbit");
    (alpha, x)
}

fn structure_mismatches(p: &Pipeline, design: &SamplingDesign, inv: &GCompatibleLeftInverse) -> usize {
    let s = inv.structured();
    let ell = design.ell();
    let mut bad = 0;
    for j in 0..design.n_systems() {
        let base: Vec<_> = s.column(j * ell).iter().copied().collect();
        for n in 0..ell {
            let map = p.ordering.left_translation_map(&p.group, p.transversal.tau(n));
            bad += map.iter().enumerate().filter(|&(i, &src)| s[(i, j * ell + n)] != base[src]).count();
        }
    }
    bad
}

fn empty_report(cfg: &DesignConfig, p: &Pipeline, seed: u64, opts: &VerifyOptions) -> VerifyReport {
    VerifyReport {
        design: summary(cfg, p),
        seed,
        trials: opts.trials,
        rank: 0,
        recoverable: false,
        sigma_min: 0.0,
        sigma_max: 0.0,
        cutoff: 0.0,
        ill_conditioned: false,
        frame: None,
        theorem: TheoremSummary { rank_full: false, inverse_ok: false, expansion_exact: false, frame_ok: false, agree: true },
        interpolation: None,
        checks: Vec::new(),
        trial_residuals: Vec::new(),
        residuals: ResidualStats::of(&[]),
        status: ExitStatus::Unrecoverable,
        timing_ms: 0.0,
    }
}

pub fn run_verify(cfg: &DesignConfig, opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let start = Instant::now();
    let p = Pipeline::build(cfg)?;
    let seed = opts.seed.unwrap_or(cfg.seed);
    let tol_recon = cfg.tolerances.reconstruction.unwrap_or(tolerance::RECONSTRUCTION);
    let tol_interp = cfg.tolerances.interpolation.unwrap_or(tolerance::INTERPOLATION);
    let tol_inverse = cfg.tolerances.left_inverse.unwrap_or(tolerance::LEFT_INVERSE);

    let mut report = match &p.design {
        None => empty_report(cfg, &p, seed, opts),
        Some(design) => verify_design(cfg, &p, design, seed, opts, tol_recon, tol_interp, tol_inverse)?,
    };

    let theorem_check = Check::flag("theorem_conditions_agree", report.theorem.agree);
    let all_pass = theorem_check.passed && report.failed_checks().next().is_none();
    report.checks.push(theorem_check);
    report.status = match (report.recoverable, opts.expect_unrecoverable) {
        (true, true) => ExitStatus::CheckFailure,
        (false, false) => ExitStatus::Unrecoverable,
        _ if all_pass => ExitStatus::Pass,
        _ => ExitStatus::CheckFailure,
    };
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn verify_design(
    cfg: &DesignConfig,
    p: &Pipeline,
    design: &SamplingDesign,
    seed: u64,
    opts: &VerifyOptions,
    tol_recon: f64,
    tol_interp: f64,
    tol_inverse: f64,
) -> Result<VerifyReport, CliError> {
    let rec = design.check_recoverability();
    let mut checks = Vec::new();

    let diag = p.rep.diagnostics();
    let d = p.dim() as f64;
    checks.push(Check::within("representation_identity", diag.identity_deviation, tolerance::REP_IDENTITY));
    checks.push(Check::within("representation_unitarity", diag.unitarity_defect, tolerance::REP_CHECK * d));
    checks.push(Check::within("representation_homomorphism", diag.homomorphism_defect, tolerance::REP_CHECK * d));
    let orbit: Vec<CVector> = (0..p.group.order()).map(|g| p.rep.apply(g, p.subspace.generator())).collect();
    let stationary = check_stationarity(&p.group, &orbit).map_err(|e| CliError::config(Stage::Subspace, e))?;
    checks.push(Check::flag("orbit_stationary", stationary));

    let theorem = evaluate_theorem(design, &[]).map_err(|e| CliError::config(Stage::Design, e))?;

    let inv = if rec.recoverable {
        Some(g_compatible_left_inverse(design, None).map_err(|e| CliError::check(Stage::Inverse, e))?)
    } else {
        None
    };
    let recon_vectors = match &inv {
        Some(inv) => inv.recon_vectors().to_vec(),
        None => candidate_reconstruction_vectors(design),
    };

    let mut frame = None;
    let mut interpolation = None;
    if let Some(inv) = &inv {
        checks.push(Check::within("left_inverse", design.left_inverse_residual(inv.structured()), tol_inverse));
        checks.push(Check::within("structure_mismatches", structure_mismatches(p, design, inv) as f64, 0.0));
        let translates: Vec<CVector> = inv
            .recon_vectors()
            .iter()
            .flat_map(|c| (0..design.ell()).map(move |n| p.rep.apply(p.transversal.tau(n), c)))
            .collect();
        let fb = frame_bounds_in(&translates, p.subspace.orthonormal_basis())
            .map_err(|e| CliError::check(Stage::Inverse, e))?;
        checks.push(Check::flag("frame_lower_bound_positive", fb.is_frame()));
        frame = Some(FrameSummary { lower: fb.lower, upper: fb.upper });
        if design.n_systems() == design.h_order() {
            let dev = interpolation_deviation(design, inv).map_err(|e| CliError::check(Stage::Inverse, e))?;
            interpolation = Some(Check::within("interpolation", dev, tol_interp));
        }
    }

    let pinv = if rec.recoverable { design.moore_penrose_left_inverse().ok() } else { None };
    let frame_vectors = design.frame_vectors();
    let mut trial_residuals = Vec::new();
    let (mut worst_coeff, mut worst_dual_mp, mut worst_dual_s): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for trial in 0..opts.trials {
        let mut rng = trial_rng(seed, trial);
        let (alpha, x) = random_state(p, &mut rng);
        let samples = design.generalized_samples(&x).map_err(|e| CliError::check(Stage::Reconstruct, e))?;
        let recon = match &inv {
            Some(inv) => reconstruct(design, inv, &samples).map_err(|e| CliError::check(Stage::Reconstruct, e))?,
            None => {
                let mut acc = CVector::zeros(p.dim());
                for (j, c) in recon_vectors.iter().enumerate() {
                    for n in 0..design.ell() {
                        acc += p.rep.apply(p.transversal.tau(n), c) * samples.get(j, n);
                    }
                }
                acc
            }
        };
        let residual = (recon - &x).norm() / x.norm();
        trial_residuals.push(TrialResult { trial, residual });

        if let (Some(inv), Some(pinv)) = (&inv, &pinv) {
            let a = alpha.as_vector();
            let scale = a.norm();
            let via_s = inv.structured() * samples.values();
            let via_mp = pinv * samples.values();
            worst_coeff = worst_coeff.max((&via_s - &via_mp).norm() / scale);
            let weights: Vec<_> = frame_vectors.iter().map(|g| g.as_vector().dotc(a)).collect();
            let mut dual_mp = CVector::zeros(a.len());
            let mut dual_s = CVector::zeros(a.len());
            for (k, w) in weights.iter().enumerate() {
                dual_mp += pinv.column(k) * *w;
                dual_s += inv.structured().column(k) * *w;
            }
            worst_dual_mp = worst_dual_mp.max((dual_mp - a).norm() / scale);
            worst_dual_s = worst_dual_s.max((dual_s - a).norm() / scale);
        }
    }
    let residual_values: Vec<f64> = trial_residuals.iter().map(|t| t.residual).collect();
    let residuals = ResidualStats::of(&residual_values);
    if rec.recoverable {
        checks.push(Check::within("reconstruction", residuals.max, tol_recon));
        checks.push(Check::within("coefficient_agreement", worst_coeff, tol_recon));
        checks.push(Check::within("dual_frame_moore_penrose", worst_dual_mp, tol_recon));
        checks.push(Check::within("dual_frame_structured", worst_dual_s, tol_recon));
    }

    Ok(VerifyReport {
        design: summary(cfg, p),
        seed,
        trials: opts.trials,
        rank: rec.rank,
        recoverable: rec.recoverable,
        sigma_min: rec.sigma_min,
        sigma_max: rec.sigma_max,
        cutoff: rec.cutoff,
        ill_conditioned: rec.ill_conditioned,
        frame,
        theorem: theorem.into(),
        interpolation,
        checks,
        trial_residuals,
        residuals,
        status: ExitStatus::Pass,
        timing_ms: 0.0,
    })
}

/// One CSV row per trial: design id, trial, residual, sigma_min, A, B.
pub fn verify_csv(report: &VerifyReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::config(Stage::Output, e);
    w.write_record(["design_id", "trial", "residual", "sigma_min", "A", "B"]).map_err(io)?;
    let (a, b) = report.frame.map_or((0.0, 0.0), |f| (f.lower, f.upper));
    for t in &report.trial_residuals {
        w.serialize((&report.design.id, t.trial, t.residual, report.sigma_min, a, b)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::config(Stage::Output, e))?;
    String::from_utf8(bytes).map_err(|e| CliError::config(Stage::Output, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> DesignConfig {
        DesignConfig::from_json(json).unwrap()
    }

    const Z6: &str = r#"{
        "group": {"kind": "cyclic", "m": 6},
        "representation": {"kind": "cyclic_shift"},
        "generator": {"delta": 0},
        "systems": [{"delta": 0}, {"delta": 1}],
        "k_generators": [2],
        "seed": 1
    }"#;

    #[test]
    fn z6_delta_design_passes() {
        let r = run_verify(&cfg(Z6), &VerifyOptions::default()).unwrap();
        assert_eq!(r.status, ExitStatus::Pass, "{:?}", r.failed_checks().collect::<Vec<_>>());
        assert_eq!(r.rank, 6);
        assert_eq!(r.design.h, vec!["0", "3"]);
        assert!(r.interpolation.as_ref().unwrap().passed);
        assert_eq!(r.residuals.count, 20);
        let csv = verify_csv(&r).unwrap();
        assert_eq!(csv.lines().count(), 21);
        assert!(csv.starts_with("design_id,trial,residual,sigma_min,A,B"));
    }

    #[test]
    fn d3_with_two_systems_is_unrecoverable() {
        let json = r#"{
            "group": {"kind": "dihedral", "m": 3},
            "representation": {"kind": "regular"},
            "generator": {"random": 4},
            "systems": [{"random": 5}, {"random": 6}],
            "k_generators": ["t"],
            "h_generators": ["g"]
        }"#;
        let r = run_verify(&cfg(json), &VerifyOptions::default()).unwrap();
        assert!(!r.recoverable);
        assert_eq!(r.status, ExitStatus::Unrecoverable);
        assert!(r.theorem.agree && !r.theorem.frame_ok);
        let opts = VerifyOptions { expect_unrecoverable: true, ..Default::default() };
        assert_eq!(run_verify(&cfg(json), &opts).unwrap().status, ExitStatus::Pass);
    }

    #[test]
    fn zero_systems_are_unrecoverable() {
        let json = Z6.replace(r#"[{"delta": 0}, {"delta": 1}]"#, "[]");
        let r = run_verify(&cfg(&json), &VerifyOptions::default()).unwrap();
        assert!(!r.recoverable);
        assert_eq!(r.rank, 0);
        assert_eq!(r.status, ExitStatus::Unrecoverable);
    }

    #[test]
    fn expecting_failure_on_a_good_design_is_a_check_failure() {
        let opts = VerifyOptions { expect_unrecoverable: true, ..Default::default() };
        assert_eq!(run_verify(&cfg(Z6), &opts).unwrap().status, ExitStatus::CheckFailure);
    }

    #[test]
    fn complement_search_and_stage_errors() {
        let json = Z6.replace(r#""k_generators": [2]"#, r#""k_generators": [3]"#);
        let r = run_verify(&cfg(&json), &VerifyOptions::default()).unwrap();
        assert_eq!(r.design.h, vec!["0", "2", "4"]);
        assert!(!r.recoverable);

        let json = Z6.replace(r#""m": 6"#, r#""m": 4"#).replace(r#""k_generators": [2]"#, r#""k_generators": [2], "h_generators": []"#);
        let err = run_verify(&cfg(&json), &VerifyOptions::default()).unwrap_err();
        assert_eq!(err.stage, Stage::Group);

        let json = Z6.replace(r#""generator": {"delta": 0}"#, r#""generator": [[1,0],[1,0],[1,0],[1,0],[1,0],[1,0]]"#);
        let err = run_verify(&cfg(&json), &VerifyOptions::default()).unwrap_err();
        assert_eq!(err.stage, Stage::Subspace);
    }
}
