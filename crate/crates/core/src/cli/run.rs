use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{AlphaDecl, ChannelDecl, CheckDecl, RunConfig, StateDecl, Suite, Task};
use crate::channel::{
    build_channel, vacuum_covariance_d0, vacuum_covariance_dneq0, BuiltChannel, CovarianceBranch, VacuumCovariance,
};
use crate::error::{Error, Result};
use crate::gaussian::{apply_channel, symmetric_squeezed_state, vacuum_state, GaussianChannel, GaussianState};
use crate::kgmodes::{
    bogoliubov_matrices, check_normalization, frequency_gram_matrix, mode_gram_matrix, negative_separation_diagnostic,
    overlap_in_frequency_space, BogoliubovMatrices, MinkowskiSpectrum, RindlerGeometry, RindlerSpectrum,
};
use crate::scenario::{diagonal_channel, relative_purity_surface, AlphaProfile};
use crate::specfun::{bessel_k_imag_order, try_integrate_finite, QuadratureSpec};

/// Command-line overrides applied on top of a config.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunOptions {
    /// Replaces `quadrature.abs_tol`.
    pub tol: Option<f64>,
    /// Covariance branch to insist on; must match the sign class of D.
    pub branch: Option<CovarianceBranch>,
}

/// What a task produced: the output document, diagnostics for stderr and
/// whether every check it ran passed.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl RunOutput {
    fn ok(text: String, warnings: Vec<String>) -> Self {
        RunOutput {
            text,
            warnings,
            passed: true,
        }
    }
}

/// Dispatches to the task runner.
pub fn run(task: Task, config: &RunConfig, options: &RunOptions) -> Result<RunOutput> {
    config.require_task(task)?;
    match task {
        Task::Channel => run_channel(config, options),
        Task::Transform => run_transform(config, options),
        Task::Sweep => run_sweep(config, options),
        Task::Check => run_check(config, options),
        Task::Specfun => run_specfun(config, options),
    }
}

fn quadrature(config: &RunConfig, options: &RunOptions) -> Result<QuadratureSpec> {
    let mut spec = config.quadrature;
    if let Some(tol) = options.tol {
        spec.abs_tol = tol;
    }
    spec.validate()?;
    Ok(spec)
}

fn branch(geometry: &RindlerGeometry, options: &RunOptions) -> Result<CovarianceBranch> {
    let b = options
        .branch
        .unwrap_or_else(|| CovarianceBranch::for_geometry(geometry));
    b.check(geometry)?;
    Ok(b)
}

fn covariance(
    psi: &[RindlerSpectrum],
    geometry: &RindlerGeometry,
    branch: CovarianceBranch,
    spec: &QuadratureSpec,
) -> Result<VacuumCovariance> {
    let cov = match branch {
        CovarianceBranch::DZero => vacuum_covariance_d0(psi, geometry, spec)?,
        CovarianceBranch::DNonzero => vacuum_covariance_dneq0(psi, geometry, spec)?,
    };
    if !cov.unconverged.is_empty() {
        return Err(Error::Precondition(format!(
            "vacuum covariance quadrature did not converge at elements {}",
            index_list(&cov.unconverged)
        )));
    }
    Ok(cov)
}

fn index_list(entries: &[(usize, usize)]) -> String {
    entries
        .iter()
        .map(|(i, j)| format!("({i}, {j})"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Channel from the config's modes; also returns the diagnostics raised
/// along the way.
pub fn computed_channel(config: &RunConfig, options: &RunOptions) -> Result<(BuiltChannel, Vec<String>)> {
    let spec = quadrature(config, options)?;
    let geometry = config.geometry()?;
    let branch = branch(&geometry, options)?;
    let psi = config.psi_specs()?;
    let phi = config.phi_specs()?;
    let mut warnings = Vec::new();
    if let Some(w) = negative_separation_diagnostic(&psi, &geometry, &spec, config.check_decl().orthogonality_tol)? {
        warnings.push(w);
    }
    let bogo = bogoliubov_matrices(&psi, &phi, &geometry, &spec)?;
    bogo.require_converged()?;
    let cov = covariance(&psi, &geometry, branch, &spec)?;
    let built = build_channel(&bogo, &cov)?;
    if !built.is_physical(config.check_decl().physicality_tol) {
        warnings.push(format!(
            "channel is not completely positive: min eig(N + i(Ω − MΩMᵀ)) = {:e}",
            built.physicality_margin
        ));
    }
    Ok((built, warnings))
}

/// Bogoliubov matrices, vacuum covariance and channel, dumped as channel JSON.
pub fn run_channel(config: &RunConfig, options: &RunOptions) -> Result<RunOutput> {
    let (built, warnings) = computed_channel(config, options)?;
    Ok(RunOutput::ok(built.channel.to_json() + "\n", warnings))
}

fn load_state(config: &RunConfig, decl: &StateDecl) -> Result<GaussianState> {
    match decl {
        StateDecl::File { path } => GaussianState::load(config.resolve_path(path)),
        StateDecl::Vacuum { modes } => vacuum_state(*modes),
        StateDecl::SymmetricSqueezed { modes, r } => symmetric_squeezed_state(*modes, *r),
    }
}

fn load_channel(
    config: &RunConfig,
    options: &RunOptions,
    decl: &ChannelDecl,
) -> Result<(GaussianChannel, Vec<String>)> {
    match decl {
        ChannelDecl::File { path } => Ok((GaussianChannel::load(config.resolve_path(path))?, Vec::new())),
        ChannelDecl::Identity { modes } => {
            if *modes == 0 {
                return Err(Error::Config("identity channel needs at least one mode".into()));
            }
            Ok((GaussianChannel::identity(*modes), Vec::new()))
        }
        ChannelDecl::Diagonal { alpha, modes } => Ok((diagonal_channel(*alpha, *modes)?, Vec::new())),
        ChannelDecl::Computed => computed_channel(config, options).map(|(b, w)| (b.channel, w)),
    }
}

/// Applies the declared channel to the declared state; dumps the state JSON.
pub fn run_transform(config: &RunConfig, options: &RunOptions) -> Result<RunOutput> {
    let decl = config.transform_decl()?;
    let state = load_state(config, &decl.state)?;
    let (channel, warnings) = load_channel(config, options, &decl.channel)?;
    if state.modes() != channel.modes() {
        return Err(Error::Dimension {
            expected: channel.modes(),
            got: state.modes(),
            context: "modes of the state against modes of the channel".into(),
        });
    }
    let out = apply_channel(&channel, &state)?;
    Ok(RunOutput::ok(out.to_json() + "\n", warnings))
}

/// Relative-purity surface as CSV.
pub fn run_sweep(config: &RunConfig, options: &RunOptions) -> Result<RunOutput> {
    let decl = config.sweep_decl()?;
    let grid = decl.grid();
    grid.validate()?;
    let mut warnings = Vec::new();
    let profile = match &decl.alpha {
        AlphaDecl::Table { path } => AlphaProfile::load(config.resolve_path(path))?,
        AlphaDecl::Computed { family } => {
            let spec = quadrature(config, options)?;
            let m = match &config.geometry {
                Some(_) => config.geometry()?.m,
                None => 1.0,
            };
            let mut accs = grid.accelerations.clone();
            accs.sort_by(f64::total_cmp);
            accs.dedup();
            let (profile, samples) = AlphaProfile::compute(family, &accs, m, &spec)?;
            for s in samples.iter().filter(|s| s.clamped) {
                warnings.push(format!(
                    "alpha at A = {} had modulus {} above 1 and was clamped",
                    s.acceleration,
                    s.raw_alpha.norm()
                ));
            }
            profile
        }
    };
    if let Some(w) = profile.monotonicity_warning() {
        warnings.push(w);
    }
    let result = relative_purity_surface(&grid, &profile)?;
    Ok(RunOutput::ok(result.to_csv(), warnings))
}

#[derive(Serialize)]
struct SpecfunDump {
    nu: Vec<f64>,
    x: Vec<f64>,
    /// values[i][j] = K_{iν_i}(x_j).
    values: Vec<Vec<f64>>,
    errors: Vec<Vec<f64>>,
}

/// K_{iν}(x) on the declared grid, as JSON.
pub fn run_specfun(config: &RunConfig, options: &RunOptions) -> Result<RunOutput> {
    let decl = config.specfun_decl()?;
    let spec = quadrature(config, options)?;
    let nu = decl.nu.points("nu")?;
    let x = decl.x.points("x")?;
    let cells = (0..nu.len() * x.len())
        .into_par_iter()
        .map(|idx| bessel_k_imag_order(nu[idx / x.len()], x[idx % x.len()], &spec))
        .collect::<Result<Vec<_>>>()?;
    let unconverged: Vec<(usize, usize)> = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.converged)
        .map(|(idx, _)| (idx / x.len(), idx % x.len()))
        .collect();
    if !unconverged.is_empty() {
        return Err(Error::Precondition(format!(
            "K_iν quadrature did not converge at (nu, x) indices {}",
            index_list(&unconverged)
        )));
    }
    let rows = |f: fn(&crate::specfun::IntegralResult<f64>) -> f64| {
        cells.chunks(x.len()).map(|r| r.iter().map(f).collect()).collect()
    };
    let dump = SpecfunDump {
        values: rows(|c| c.value),
        errors: rows(|c| c.error_estimate),
        nu,
        x,
    };
    let text = serde_json::to_string_pretty(&dump).expect("specfun serialization is infallible") + "\n";
    Ok(RunOutput::ok(text, Vec::new()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Warn,
    Skip,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warn => "WARN",
            Status::Skip => "SKIP",
        }
    }
}

struct Report {
    lines: Vec<(Status, String)>,
}

impl Report {
    fn residual(&mut self, suite: Suite, what: &str, residual: f64, tol: f64) {
        let status = if residual <= tol { Status::Pass } else { Status::Fail };
        self.lines.push((
            status,
            format!("{} {what}: residual {residual:.3e} (tol {tol:.1e})", suite.name()),
        ));
    }

    /// Passes when `margin` ≥ −tol.
    fn margin(&mut self, suite: Suite, what: &str, margin: f64, tol: f64) {
        let status = if margin >= -tol { Status::Pass } else { Status::Fail };
        self.lines.push((
            status,
            format!("{} {what}: margin {margin:.3e} (tol -{tol:.1e})", suite.name()),
        ));
    }

    fn note(&mut self, status: Status, suite: Suite, what: impl AsRef<str>) {
        self.lines.push((status, format!("{} {}", suite.name(), what.as_ref())));
    }

    fn error(&mut self, suite: Suite, e: &Error) {
        self.note(Status::Fail, suite, format!("error: {e}"));
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn off_identity(gram: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            if i != j {
                worst = worst.max(gram[(i, j)].norm());
            }
        }
    }
    worst
}

/// ∫ f_i* f_j dk over the common support of two inertial packets.
fn minkowski_gram(phi: &[MinkowskiSpectrum], spec: &QuadratureSpec) -> Result<DMatrix<Complex64>> {
    let n = phi.len();
    let mut gram = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let (si, sj) = (phi[i].f.profile.support(), phi[j].f.profile.support());
            let (lo, hi) = (si.0.max(sj.0), si.1.min(sj.1));
            if !(hi > lo) {
                continue;
            }
            let mut bp = phi[i].f.profile.breakpoints();
            bp.extend(phi[j].f.profile.breakpoints());
            bp.retain(|&b| b > lo && b < hi);
            bp.sort_by(f64::total_cmp);
            bp.dedup();
            let v = try_integrate_finite(|k| Ok(phi[i].eval(k).conj() * phi[j].eval(k)), lo, hi, &bp, spec)?.value;
            gram[(i, j)] = v;
            gram[(j, i)] = v.conj();
        }
    }
    Ok(gram)
}

/// Position-route Bogoliubov matrices against the Ω-space route.
fn oracle_residual(
    bogo: &BogoliubovMatrices,
    psi: &[RindlerSpectrum],
    phi: &[MinkowskiSpectrum],
    geometry: &RindlerGeometry,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let mut worst: Option<(f64, f64)> = None;
    for (i, p) in psi.iter().enumerate() {
        for (j, f) in phi.iter().enumerate() {
            let r = overlap_in_frequency_space(p, f, geometry, spec)?;
            let d = (bogo.alpha[(i, j)] - r.value[0])
                .norm()
                .max((bogo.beta[(i, j)] - r.value[1]).norm());
            let allowance = bogo.error_estimates[(i, j)] + r.error_estimate;
            if worst.is_none_or(|w| d - allowance > w.0 - w.1) {
                worst = Some((d, allowance));
            }
        }
    }
    Ok(worst.unwrap_or((0.0, 0.0)))
}

fn check_report(config: &RunConfig, options: &RunOptions, checks: &CheckDecl) -> Result<(Report, Vec<String>)> {
    let spec = quadrature(config, options)?;
    let geometry = config.geometry()?;
    let branch = branch(&geometry, options)?;
    let psi = config.psi_specs()?;
    let phi = if config.modes.iter().all(|m| m.phi.is_some()) {
        Some(config.phi_specs()?)
    } else {
        None
    };
    let suites = checks.selected();
    let mut report = Report { lines: Vec::new() };
    let mut warnings = Vec::new();
    let needs_cov = suites
        .iter()
        .any(|s| matches!(s, Suite::Physicality | Suite::Consistency));
    let cov = needs_cov.then(|| covariance(&psi, &geometry, branch, &spec));
    let needs_bogo = phi.is_some()
        && suites
            .iter()
            .any(|s| matches!(s, Suite::Physicality | Suite::Consistency | Suite::Oracle));
    let bogo = if needs_bogo {
        Some(bogoliubov_matrices(&psi, phi.as_deref().unwrap(), &geometry, &spec))
    } else {
        None
    };
    let built = match (&bogo, &cov) {
        (Some(Ok(b)), Some(Ok(c))) => Some(b.require_converged().and_then(|_| build_channel(b, c))),
        _ => None,
    };

    for suite in suites {
        match suite {
            Suite::Normalization => {
                for (n, p) in psi.iter().enumerate() {
                    match check_normalization(p, &geometry) {
                        Ok(v) => {
                            report.residual(suite, &format!("psi[{n}]"), (v - 1.0).abs(), checks.normalization_tol)
                        }
                        Err(e) => report.error(suite, &e),
                    }
                }
                for (n, f) in phi.iter().flatten().enumerate() {
                    match f.norm_squared(&spec) {
                        Ok(v) => {
                            report.residual(suite, &format!("phi[{n}]"), (v - 1.0).abs(), checks.normalization_tol)
                        }
                        Err(e) => report.error(suite, &e),
                    }
                }
            }
            Suite::Orthogonality => {
                // Ω-space products equal the commutators only when the wedges are disjoint.
                let gram = if geometry.d >= 0.0 {
                    frequency_gram_matrix(&psi, &spec)
                } else {
                    mode_gram_matrix(&psi, &geometry, &spec)
                };
                match gram {
                    Ok(g) => report.residual(
                        suite,
                        "psi off-diagonal Gram",
                        off_identity(&g),
                        checks.orthogonality_tol,
                    ),
                    Err(e) => report.error(suite, &e),
                }
                if let Some(phi) = &phi {
                    match minkowski_gram(phi, &spec) {
                        Ok(g) => report.residual(
                            suite,
                            "phi off-diagonal Gram",
                            off_identity(&g),
                            checks.orthogonality_tol,
                        ),
                        Err(e) => report.error(suite, &e),
                    }
                }
            }
            Suite::Physicality => {
                match cov.as_ref().expect("computed for this suite") {
                    Ok(c) => report.margin(
                        suite,
                        "vacuum covariance min eig(σ + iΩ)",
                        c.uncertainty_margin(),
                        checks.physicality_tol,
                    ),
                    Err(e) => report.error(suite, e),
                }
                match &built {
                    Some(Ok(b)) => report.margin(
                        suite,
                        "channel min eig(N + i(Ω − MΩMᵀ))",
                        b.physicality_margin,
                        checks.physicality_tol,
                    ),
                    Some(Err(e)) => report.error(suite, e),
                    None if phi.is_none() => report.note(Status::Skip, suite, "channel: no phi declared"),
                    None => {}
                }
            }
            Suite::Consistency => match &built {
                Some(Ok(b)) => {
                    let c = cov
                        .as_ref()
                        .and_then(|r| r.as_ref().ok())
                        .expect("channel built from it");
                    let m = b.channel.m();
                    let r = max_abs(&(m * m.transpose() + b.channel.n() - &c.matrix));
                    report.residual(suite, "MMᵀ + N − σ_vac", r, checks.consistency_tol);
                }
                Some(Err(e)) => report.error(suite, e),
                None => match (&cov, &bogo) {
                    (Some(Err(e)), _) | (_, Some(Err(e))) => report.error(suite, e),
                    _ => report.note(Status::Skip, suite, "no phi declared"),
                },
            },
            Suite::Oracle => match (&bogo, &phi) {
                (Some(Ok(b)), Some(phi)) => {
                    if !b.unconverged.is_empty() {
                        report.note(
                            Status::Fail,
                            suite,
                            format!("position route unconverged at {}", index_list(&b.unconverged)),
                        );
                    }
                    match oracle_residual(b, &psi, phi, &geometry, &spec) {
                        Ok((d, allowance)) => report.residual(
                            suite,
                            &format!("position vs frequency route α, β (allowance {allowance:.1e})"),
                            d,
                            checks.oracle_tol + allowance,
                        ),
                        Err(e) => report.error(suite, &e),
                    }
                }
                (Some(Err(e)), _) => report.error(suite, e),
                _ => report.note(Status::Skip, suite, "no phi declared"),
            },
            Suite::Overlap => match negative_separation_diagnostic(&psi, &geometry, &spec, checks.orthogonality_tol) {
                Ok(Some(w)) => {
                    report.note(Status::Warn, suite, &w);
                    warnings.push(w);
                }
                Ok(None) if geometry.d >= 0.0 => report.note(Status::Pass, suite, "wedges disjoint (D ≥ 0)"),
                Ok(None) => report.note(Status::Pass, suite, "cross-wedge overlaps below tolerance"),
                Err(e) => report.error(suite, &e),
            },
        }
    }
    Ok((report, warnings))
}

/// Runs the requested suites and prints one PASS/FAIL/WARN/SKIP line each,
/// with the measured residual. `passed` is false when any line fails.
pub fn run_check(config: &RunConfig, options: &RunOptions) -> Result<RunOutput> {
    let checks = config.check_decl();
    let (report, warnings) = check_report(config, options, &checks)?;
    let mut text = String::new();
    let mut counts = [0usize; 4];
    for (status, line) in &report.lines {
        counts[*status as usize] += 1;
        let _ = writeln!(text, "{} {line}", status.label());
    }
    let _ = writeln!(
        text,
        "checks: {} passed, {} failed, {} warnings, {} skipped",
        counts[0], counts[1], counts[2], counts[3]
    );
    Ok(RunOutput {
        text,
        warnings,
        passed: counts[Status::Fail as usize] == 0,
    })
}
