//! The periodic-signal scenario on `Z_M` and the dihedral scenario on `D_m`.

use std::time::Instant;

use finite_sampling::sampling::{g_compatible_left_inverse, interpolation_deviation, reconstruct};
use finite_sampling::{cross_covariance, CVector, Complex64};
use serde::Serialize;

use crate::commands::{block_pattern, complex_rows};
use crate::config::{DesignConfig, ElementRef, GroupSpec, RepKind, RepSpec, Tolerances, VectorSpec};
use crate::error::{CliError, ExitStatus, Stage};
use crate::pipeline::Pipeline;
use crate::report::{labels, pairs, ResidualStats};
use crate::verify::{random_state, trial_rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorChoice {
    /// `a = delta_e`, so that `A_a` is the whole space.
    Delta,
    Random,
}

#[derive(Debug, Clone)]
pub enum SystemsChoice {
    Default,
    Deltas(Vec<ElementRef>),
    Random(usize),
}

#[derive(Debug, Clone)]
pub struct DemoOptions {
    pub generator: GeneratorChoice,
    pub systems: SystemsChoice,
    pub seed: u64,
    pub trials: u64,
}

impl Default for DemoOptions {
    fn default() -> Self {
        Self { generator: GeneratorChoice::Delta, systems: SystemsChoice::Default, seed: 0, trials: 20 }
    }
}

fn generator(opts: &DemoOptions) -> VectorSpec {
    match opts.generator {
        GeneratorChoice::Delta => VectorSpec::Delta { delta: ElementRef::Index(0) },
        GeneratorChoice::Random => VectorSpec::Random { random: opts.seed },
    }
}

fn systems(opts: &DemoOptions, default: Vec<VectorSpec>) -> Vec<VectorSpec> {
    match &opts.systems {
        SystemsChoice::Default => default,
        SystemsChoice::Deltas(refs) => refs.iter().map(|r| VectorSpec::Delta { delta: r.clone() }).collect(),
        SystemsChoice::Random(n) => (0..*n as u64)
            .map(|j| VectorSpec::Random { random: opts.seed.wrapping_mul(1_000).wrapping_add(j + 1) })
            .collect(),
    }
}

fn config(group: GroupSpec, rep: RepKind, opts: &DemoOptions, sys: Vec<VectorSpec>, k: usize, h: Option<usize>) -> DesignConfig {
    DesignConfig {
        id: None,
        group,
        representation: RepSpec { kind: rep, conjugate_seed: None },
        generator: generator(opts),
        systems: sys,
        k_generators: vec![ElementRef::Index(k)],
        h_generators: h.map(|h| vec![ElementRef::Index(h)]),
        seed: opts.seed,
        tolerances: Tolerances::default(),
        state: None,
        hamiltonian: None,
        times: None,
    }
}

/// Reconstruction residuals, the `c_j` and the interpolation deviation of
/// a recoverable pipeline.
struct Trials {
    residuals: ResidualStats,
    recon_vectors: Vec<Vec<[f64; 2]>>,
    interpolation: Option<f64>,
}

fn run_trials(p: &Pipeline, opts: &DemoOptions) -> Result<Option<Trials>, CliError> {
    let design = match &p.design {
        Some(d) if d.is_recoverable() => d,
        _ => return Ok(None),
    };
    let inv = g_compatible_left_inverse(design, None).map_err(|e| CliError::check(Stage::Inverse, e))?;
    let mut residuals = Vec::new();
    for trial in 0..opts.trials {
        let (_, x) = random_state(p, &mut trial_rng(opts.seed, trial));
        let samples = design.generalized_samples(&x).map_err(|e| CliError::check(Stage::Reconstruct, e))?;
        let recon = reconstruct(design, &inv, &samples).map_err(|e| CliError::check(Stage::Reconstruct, e))?;
        residuals.push((recon - &x).norm() / x.norm());
    }
    let interpolation = if design.n_systems() == design.h_order() {
        Some(interpolation_deviation(design, &inv).map_err(|e| CliError::check(Stage::Inverse, e))?)
    } else {
        None
    };
    Ok(Some(Trials {
        residuals: ResidualStats::of(&residuals),
        recon_vectors: inv.recon_vectors().iter().map(pairs).collect(),
        interpolation,
    }))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[derive(Debug, Clone, Serialize)]
pub struct CyclicDemoReport {
    pub m: usize,
    pub r: usize,
    pub ell: usize,
    pub h: Vec<String>,
    pub systems: usize,
    pub rank: usize,
    pub recoverable: bool,
    pub sigma_min: f64,
    /// Largest entrywise gap between inner-product and convolution samples.
    pub convolution_deviation: f64,
    pub residuals: Option<ResidualStats>,
    pub recon_vectors: Option<Vec<Vec<[f64; 2]>>>,
    pub interpolation_deviation: Option<f64>,
    pub status: ExitStatus,
    pub timing_ms: f64,
}

/// `(x * h)(k) = sum_m x(m) h(k - m)` on `Z_M`.
pub fn periodic_convolution(x: &CVector, h: &CVector, k: usize) -> Complex64 {
    let m = x.len();
    (0..m).map(|i| x[i] * h[(k + m - i) % m]).sum()
}

/// `h_j(m) = conj b_j(-m)`.
pub fn matched_filter(b: &CVector) -> CVector {
    let m = b.len();
    CVector::from_fn(m, |i, _| b[(m - i) % m].conj())
}

/// Samples `x` at `r Z_M` through `N` convolution systems and reconstructs it.
/// Needs `r | M` and `gcd(r, M/r) = 1` so that `K = <r>` has a complement.
pub fn demo_cyclic(m: usize, r: usize, opts: &DemoOptions) -> Result<CyclicDemoReport, CliError> {
    let start = Instant::now();
    if m == 0 || r == 0 || !m.is_multiple_of(r) {
        return Err(CliError::config(Stage::Parse, format!("sampling period r = {r} must divide M = {m}")));
    }
    if gcd(r, m / r) != 1 {
        return Err(CliError::config(
            Stage::Group,
            format!("K = <{r}> has no complement in Z_{m} (gcd({r}, {}) != 1)", m / r),
        ));
    }
    let default = if r == 1 {
        vec![generator(opts)]
    } else {
        (0..r).map(|i| VectorSpec::Delta { delta: ElementRef::Index(i) }).collect()
    };
    let cfg = config(GroupSpec::Cyclic { m }, RepKind::CyclicShift, opts, systems(opts, default), r % m, None);
    let p = Pipeline::build(&cfg)?;
    let design = p.design.as_ref().ok_or_else(|| CliError::config(Stage::Design, "no systems given"))?;

    let filters: Vec<CVector> = p.systems.iter().map(matched_filter).collect();
    let mut deviation: f64 = 0.0;
    for trial in 0..opts.trials {
        let (_, x) = random_state(&p, &mut trial_rng(opts.seed, trial));
        let samples = design.generalized_samples(&x).map_err(|e| CliError::check(Stage::Design, e))?;
        for (j, h) in filters.iter().enumerate() {
            for n in 0..design.ell() {
                let conv = periodic_convolution(&x, h, p.transversal.tau(n));
                deviation = deviation.max((conv - samples.get(j, n)).norm());
            }
        }
    }

    let rec = design.check_recoverability();
    let trials = run_trials(&p, opts)?;
    let status = match &trials {
        None => ExitStatus::Unrecoverable,
        Some(t) if deviation <= 1e-10 && t.residuals.max <= finite_sampling::tolerance::RECONSTRUCTION => ExitStatus::Pass,
        Some(_) => ExitStatus::CheckFailure,
    };
    Ok(CyclicDemoReport {
        m,
        r,
        ell: design.ell(),
        h: labels(&p.group, p.transversal.h().elements()),
        systems: design.n_systems(),
        rank: rec.rank,
        recoverable: rec.recoverable,
        sigma_min: rec.sigma_min,
        convolution_deviation: deviation,
        residuals: trials.as_ref().map(|t| t.residuals),
        interpolation_deviation: trials.as_ref().and_then(|t| t.interpolation),
        recon_vectors: trials.map(|t| t.recon_vectors),
        status,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DihedralDemoReport {
    pub m: usize,
    pub k: Vec<String>,
    pub h: Vec<String>,
    pub systems: usize,
    /// `pattern[n][col]` names the element `s` with entry `(n, col)` of every
    /// block equal to `R_{b_j,a}(s)`.
    pub block_pattern: Vec<Vec<String>>,
    pub blocks: Vec<Vec<Vec<[f64; 2]>>>,
    pub pattern_deviation: f64,
    pub rank: usize,
    pub recoverable: bool,
    pub sigma_min: f64,
    pub residuals: Option<ResidualStats>,
    pub recon_vectors: Option<Vec<Vec<[f64; 2]>>>,
    pub interpolation_deviation: Option<f64>,
    pub status: ExitStatus,
    pub timing_ms: f64,
}

/// Samples at `K = {e, t}` in the regular representation of `D_m`, with `H`
/// the rotations. Default systems are deltas at `e, g, .., g^{m-1}`.
pub fn demo_dihedral(m: usize, opts: &DemoOptions) -> Result<DihedralDemoReport, CliError> {
    let start = Instant::now();
    if m < 2 {
        return Err(CliError::config(Stage::Parse, "dihedral demo needs m >= 2"));
    }
    let default = (0..m).map(|i| VectorSpec::Delta { delta: ElementRef::Index(i) }).collect();
    let cfg = config(GroupSpec::Dihedral { m }, RepKind::Regular, opts, systems(opts, default), m, Some(1));
    let p = Pipeline::build(&cfg)?;
    let design = p.design.as_ref().ok_or_else(|| CliError::config(Stage::Design, "no systems given"))?;

    let pattern = block_pattern(&p);
    let mut pattern_deviation: f64 = 0.0;
    for (j, b) in p.systems.iter().enumerate() {
        for (n, row) in pattern.iter().enumerate() {
            for (col, name) in row.iter().enumerate() {
                let s = p.group.element(name).map_err(|e| CliError::check(Stage::Design, e))?;
                let expected = cross_covariance(&p.rep, b, p.subspace.generator(), s)
                    .map_err(|e| CliError::check(Stage::Design, e))?;
                pattern_deviation = pattern_deviation.max((design.block(j)[(n, col)] - expected).norm());
            }
        }
    }

    let rec = design.check_recoverability();
    let trials = run_trials(&p, opts)?;
    let status = match &trials {
        None => ExitStatus::Unrecoverable,
        Some(t) if pattern_deviation <= 1e-12 && t.residuals.max <= finite_sampling::tolerance::RECONSTRUCTION => {
            ExitStatus::Pass
        }
        Some(_) => ExitStatus::CheckFailure,
    };
    Ok(DihedralDemoReport {
        m,
        k: labels(&p.group, p.transversal.taus()),
        h: labels(&p.group, p.transversal.h().elements()),
        systems: design.n_systems(),
        block_pattern: pattern,
        blocks: design.blocks().iter().map(complex_rows).collect(),
        pattern_deviation,
        rank: rec.rank,
        recoverable: rec.recoverable,
        sigma_min: rec.sigma_min,
        residuals: trials.as_ref().map(|t| t.residuals),
        interpolation_deviation: trials.as_ref().and_then(|t| t.interpolation),
        recon_vectors: trials.map(|t| t.recon_vectors),
        status,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
