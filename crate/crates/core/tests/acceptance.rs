//! Acceptance criteria 1 to 9. Each criterion prints one PASS/FAIL line with
//! its worst residual and the target exits nonzero if any criterion fails.

mod common;

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rindler_gauss::channel::{
    build_channel, vacuum_covariance, vacuum_covariance_d0, vacuum_covariance_dneq0, CovarianceBranch,
};
use rindler_gauss::gaussian::{relative_purity, symmetric_squeezed_state};
use rindler_gauss::kgmodes::{
    bogoliubov_matrices, check_normalization, default_mode_quadrature, frequency_gram_matrix, mode_gram_matrix,
    negative_separation_diagnostic, BogoliubovMatrices, MinkowskiSpectrum, MomentumBump, OmegaBump, RindlerGeometry,
    RindlerSpectrum, Wedge,
};
use rindler_gauss::scenario::{
    closed_form_relative_purity, diagonal_channel, relative_purity_surface, AlphaProfile, PacketFamily, SweepGrid,
};
use rindler_gauss::specfun::{bessel_k_imag_order, QuadratureSpec};

/// Outcome of one criterion: pass flag and a one-line summary.
struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            passed,
            detail: detail.into(),
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn geometry(a: f64, d: f64) -> RindlerGeometry {
    RindlerGeometry::new(a, 1.0, d).unwrap()
}

fn bump(wedge: Wedge, center: f64, width: f64) -> RindlerSpectrum {
    RindlerSpectrum::bump(wedge, center, width).unwrap()
}

/// Equal-weight two-wedge mode with a relative phase on the wedge-II part.
fn split(center: f64, width: f64, phase: f64) -> RindlerSpectrum {
    let b = OmegaBump::new(center, width).unwrap();
    RindlerSpectrum::split(
        b,
        c(FRAC_1_SQRT_2, 0.0),
        b.with_phase(phase),
        c(0.0, FRAC_1_SQRT_2),
    )
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let nus = linspace(0.0, 10.0, 7);
    let xs: Vec<f64> = linspace(0.1f64.ln(), 20.0f64.ln(), 7)
        .into_iter()
        .map(f64::exp)
        .collect();
    let mut worst = 0.0f64;
    let mut all_converged = true;
    for &x in &xs {
        let oracle = common::BesselOracle::new(x, 10.0);
        for &nu in &nus {
            let r = bessel_k_imag_order(nu, x, &spec).unwrap();
            all_converged &= r.converged;
            worst = worst.max((r.value - oracle.eval(nu)).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(
        worst <= 1e-8 && all_converged && secs < 10.0,
        format!("K_iν vs cosine-transform oracle, 49 points: max |Δ| {worst:.2e} (tol 1e-8), {secs:.3} s"),
    )
}

fn criterion_2() -> Verdict {
    let mut worst = 0.0f64;
    for z in 2..=6 {
        for r in linspace(0.0, 2.0, 9) {
            let det = symmetric_squeezed_state(z, r).unwrap().determinant();
            worst = worst.max((det - 1.0).abs());
        }
    }
    Verdict::new(
        worst <= 1e-10,
        format!("|det σ − 1| over Z 2..6, r 0..2: max {worst:.2e} (tol 1e-10)"),
    )
}

/// ψ bumps and inertial momentum bumps, one pair per wedge.
fn scenario_modes() -> (Vec<RindlerSpectrum>, Vec<MinkowskiSpectrum>) {
    let psi = vec![bump(Wedge::I, 3.0, 0.5), bump(Wedge::II, 3.0, 0.5)];
    let phi = vec![
        MinkowskiSpectrum::new(MomentumBump::new(0.0, 0.5, 6.0).unwrap()),
        MinkowskiSpectrum::new(MomentumBump::new(0.0, 0.5, -6.0).unwrap()),
    ];
    (psi, phi)
}

fn criterion_3() -> Verdict {
    let spec = default_mode_quadrature();
    let (psi, phi) = scenario_modes();
    let mut worst = 0.0f64;
    let mut count = 0;
    for d in [0.0, 0.5, 2.0] {
        let g = geometry(1.0, d);
        let cv = vacuum_covariance(&psi, &g, &spec).unwrap();
        let computed = bogoliubov_matrices(&psi, &phi, &g, &spec).unwrap();
        computed.require_converged().unwrap();
        let theta: f64 = 0.7;
        let rotated = BogoliubovMatrices::diagonal(&[c(theta.cos(), theta.sin()), c(0.9, 0.0)]);
        let mixing = BogoliubovMatrices::from_parts(
            DMatrix::from_row_slice(2, 2, &[c(0.8, 0.1), c(0.2, 0.0), c(0.0, -0.3), c(0.7, 0.2)]),
            DMatrix::from_row_slice(2, 2, &[c(0.01, 0.0), c(0.0, 0.02), c(-0.01, 0.01), c(0.0, 0.0)]),
        )
        .unwrap();
        for bogo in [&computed, &rotated, &mixing] {
            let ch = build_channel(bogo, &cv).unwrap().channel;
            let m = ch.m();
            let residual = (m * m.transpose() + ch.n() - &cv.matrix).abs().max();
            worst = worst.max(residual);
            count += 1;
        }
    }
    Verdict::new(
        worst <= 1e-12,
        format!("‖MMᵀ + N − σ_vac‖_max over {count} channels: {worst:.2e} (tol 1e-12)"),
    )
}

fn criterion_4() -> Verdict {
    let spec = QuadratureSpec::default();
    let mut cases = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        for d in [0.0, 0.5, -0.5, 2.0] {
            for w0 in [1.0, 3.0] {
                let (w, s) = (w0 * a, 0.5 * a);
                cases.push((a, d, w0, "I", vec![bump(Wedge::I, w, s)]));
                cases.push((a, d, w0, "I+II", vec![bump(Wedge::I, w, s), bump(Wedge::II, w, s)]));
                cases.push((a, d, w0, "split", vec![split(w, s, 0.4)]));
            }
        }
    }
    let results: Vec<_> = cases
        .par_iter()
        .map(|(a, d, w0, label, modes)| {
            let g = geometry(*a, *d);
            let cv = match CovarianceBranch::for_geometry(&g) {
                CovarianceBranch::DZero => vacuum_covariance_d0(modes, &g, &spec),
                CovarianceBranch::DNonzero => vacuum_covariance_dneq0(modes, &g, &spec),
            }
            .unwrap();
            let warning = negative_separation_diagnostic(modes, &g, &spec, 1e-6).unwrap();
            (
                *a,
                *d,
                *w0,
                *label,
                cv.uncertainty_margin(),
                cv.branch,
                warning.is_none(),
            )
        })
        .collect();
    let mut worst = f64::INFINITY;
    let mut branches = (0, 0);
    let mut excluded = Vec::new();
    for &(a, d, w0, label, margin, branch, admissible) in &results {
        if !admissible {
            excluded.push(format!("a={a} D={d} Ω₀/a={w0} {label}: {margin:.2e}"));
            continue;
        }
        worst = worst.min(margin);
        match branch {
            CovarianceBranch::DZero => branches.0 += 1,
            CovarianceBranch::DNonzero => branches.1 += 1,
        }
    }
    let detail = format!(
        "min eig(σ + iΩ) over {} configurations (D0 {}, D≠0 {}): {worst:.2e} (tol −1e-8); \
         {} D<0 configurations excluded as non-commuting, margins [{}]",
        branches.0 + branches.1,
        branches.0,
        branches.1,
        excluded.len(),
        excluded.join("; ")
    );
    Verdict::new(worst >= -1e-8 && branches.0 > 0 && branches.1 > 0, detail)
}

fn criterion_5() -> Verdict {
    let spec = QuadratureSpec::default();
    // Bumps 3 apart at width 0.25 overlap at e^{−18}, so the modes commute.
    let pair = || vec![bump(Wedge::I, 1.0, 0.25), bump(Wedge::II, 1.0, 0.25)];
    let triple = || {
        vec![
            bump(Wedge::I, 1.0, 0.25),
            bump(Wedge::II, 1.0, 0.25),
            split(4.0, 0.25, 0.4),
        ]
    };
    let cases = vec![
        (0.0, pair()),
        (0.5, pair()),
        (0.0, triple()),
        (0.5, triple()),
        (2.0, triple()),
        (-0.5, vec![bump(Wedge::I, 1.0, 0.25), bump(Wedge::I, 4.0, 0.25)]),
    ];
    let results: Vec<_> = cases
        .par_iter()
        .map(|(d, modes)| {
            let g = geometry(1.0, *d);
            let gram = if *d < 0.0 {
                mode_gram_matrix(modes, &g, &spec).unwrap()
            } else {
                frequency_gram_matrix(modes, &spec).unwrap()
            };
            let gram_dev = (gram - DMatrix::<Complex64>::identity(modes.len(), modes.len()))
                .map(|z| z.norm())
                .max();
            let cv = vacuum_covariance(modes, &g, &spec).unwrap();
            let oracle = common::covariance_oracle(modes, &g, 32);
            let mut excess = f64::NEG_INFINITY;
            let mut raw = 0.0f64;
            for i in 0..cv.matrix.nrows() {
                for j in 0..cv.matrix.ncols() {
                    let diff = (cv.matrix[(i, j)] - oracle[(i, j)]).abs();
                    raw = raw.max(diff);
                    excess = excess.max(diff - 1e-6 - cv.element_errors[(i, j)]);
                }
            }
            (modes.len(), raw, excess, gram_dev)
        })
        .collect();
    let raw = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let excess = results.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
    let gram_dev = results.iter().map(|r| r.3).fold(0.0, f64::max);
    Verdict::new(
        excess <= 0.0 && gram_dev <= 1e-6 && results.iter().any(|r| r.0 == 3),
        format!(
            "closed formulas vs two-point assembly, {} configurations (2 and 3 modes, Gram deviation {gram_dev:.1e}): \
             max |Δ| {raw:.2e} (tol 1e-6 + element error)",
            results.len()
        ),
    )
}

fn criterion_6() -> Verdict {
    let spec = QuadratureSpec::default();
    let modes = vec![
        split(3.0, 0.5, 0.4),
        bump(Wedge::I, 3.0, 0.5),
        bump(Wedge::II, 3.0, 0.5),
    ];
    let d0 = vacuum_covariance_d0(&modes, &geometry(1.0, 0.0), &spec).unwrap();
    let near = vacuum_covariance_dneq0(&modes, &geometry(1.0, 1e-3), &spec).unwrap();
    let diff = (&near.matrix - &d0.matrix).abs().max();
    Verdict::new(diff <= 1e-3, format!("max |σ(D=1e-3) − σ(D=0)|: {diff:.2e} (tol 1e-3)"))
}

fn criterion_7() -> Verdict {
    let mut worst = 0.0f64;
    let mut count = 0;
    let spec = default_mode_quadrature();
    for a in [0.5, 1.0, 2.0] {
        for (center, width) in [(1.0, 0.5), (3.0, 0.5), (2.0, 1.0), (8.0, 1.0)] {
            let (w, s) = (center * a, width * a);
            let g = geometry(a, 0.0);
            for psi in [bump(Wedge::I, w, s), bump(Wedge::II, w, s), split(w, s, 0.4)] {
                worst = worst.max((check_normalization(&psi, &g).unwrap() - 1.0).abs());
                count += 1;
            }
        }
    }
    let family = PacketFamily::default();
    for acc in [0.05, 0.1, 0.5, 1.0, 2.0] {
        let pair = family.matched_pair(acc, 1.0).unwrap();
        worst = worst.max((check_normalization(&pair.psi, &pair.geometry).unwrap() - 1.0).abs());
        worst = worst.max((pair.phi.norm_squared(&spec).unwrap() - 1.0).abs());
        count += 2;
    }
    for (k0, s, x0) in [(0.0, 0.5, 6.0), (1.0, 0.3, -2.0), (-2.0, 1.0, 0.0)] {
        let phi = MinkowskiSpectrum::new(MomentumBump::new(k0, s, x0).unwrap());
        worst = worst.max((phi.norm_squared(&spec).unwrap() - 1.0).abs());
        count += 1;
    }
    Verdict::new(
        worst <= 1e-6,
        format!("|‖mode‖² − 1| over {count} shipped profiles: max {worst:.2e} (tol 1e-6)"),
    )
}

fn criterion_8() -> Verdict {
    let (computed, _) = AlphaProfile::compute(
        &PacketFamily::default(),
        &[0.5, 1.0, 2.0],
        1.0,
        &default_mode_quadrature(),
    )
    .unwrap();
    let profiles = [
        AlphaProfile::from_points(&[(0.05, 1.0), (0.5, 0.9), (1.0, 0.7), (2.0, 0.4)]).unwrap(),
        AlphaProfile::from_points(&[(0.1, 0.99), (1.0, 0.5), (3.0, 0.05)]).unwrap(),
        computed,
    ];
    let squeezings = linspace(0.0, 2.0, 9);
    let mut failures = Vec::new();
    let mut closed_gap = 0.0f64;
    for (p, profile) in profiles.iter().enumerate() {
        let grid = SweepGrid {
            accelerations: profile.accelerations().to_vec(),
            squeezings: squeezings.clone(),
            mode_counts: vec![2, 3, 4, 5, 6],
        };
        let rows = relative_purity_surface(&grid, profile).unwrap().rows;
        let at = |acc: f64, r: f64, z: usize| {
            rows.iter()
                .find(|row| row.acceleration == acc && row.r == r && row.modes == z)
                .unwrap()
        };
        for row in &rows {
            let closed = closed_form_relative_purity(row.alpha, row.modes, row.r).unwrap();
            closed_gap = closed_gap.max((closed - row.mu_rel).abs());
            if row.r == 0.0 && (row.mu_rel - 1.0).abs() > 1e-12 {
                failures.push(format!("profile {p}: μ_rel {} at r = 0", row.mu_rel));
            }
            if row.alpha > 0.0 && row.alpha < 1.0 && row.r > 0.0 {
                let prev = at(row.acceleration, row.r - 0.25, row.modes);
                if row.mu_rel >= prev.mu_rel {
                    failures.push(format!("profile {p}: not decreasing in r at {row:?}"));
                }
                if row.modes == 4 && row.mu_rel > at(row.acceleration, row.r, 2).mu_rel {
                    failures.push(format!("profile {p}: Z = 4 above Z = 2 at {row:?}"));
                }
            }
        }
    }
    // Matrix path against the closed form, off the sweep grid.
    for z in 2..=6 {
        for alpha in [0.05, 0.5, 0.93] {
            for r in [0.3, 1.7] {
                let state = symmetric_squeezed_state(z, r).unwrap();
                let matrix = relative_purity(&state, &diagonal_channel(alpha, z).unwrap()).unwrap();
                let closed = closed_form_relative_purity(alpha, z, r).unwrap();
                closed_gap = closed_gap.max((matrix - closed).abs());
            }
        }
    }
    if closed_gap > 1e-10 {
        failures.push(format!("closed form vs matrix path {closed_gap:.2e}"));
    }
    let detail = if failures.is_empty() {
        format!(
            "{} monotone profiles: μ_rel(r=0) = 1, decreasing in r, Z=4 ≤ Z=2; closed form vs matrix path {closed_gap:.2e} \
             (tol 1e-10)",
            profiles.len()
        )
    } else {
        failures.join("; ")
    };
    Verdict::new(failures.is_empty(), detail)
}

fn criterion_9() -> Verdict {
    let family = PacketFamily::default();
    let spec = default_mode_quadrature();
    let mut worst = 0.0f64;
    for acc in [0.05, 0.1] {
        let s = family.sample(acc, 1.0, &spec).unwrap();
        worst = worst.max(s.beta / s.alpha);
    }
    Verdict::new(
        worst <= 1e-6,
        format!("|β|/|α| for matched pairs at 𝒜 = 0.05, 0.1: max {worst:.2e} (tol 1e-6)"),
    )
}

fn main() -> ExitCode {
    let criteria: [fn() -> Verdict; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let verdicts: Vec<Verdict> = criteria.par_iter().map(|f| f()).collect();
    for (i, v) in verdicts.iter().enumerate() {
        println!(
            "criterion {}: {} {}",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    let passed = verdicts.iter().filter(|v| v.passed).count();
    println!("acceptance: {passed}/{} criteria passed", verdicts.len());
    if passed == verdicts.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
