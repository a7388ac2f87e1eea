mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rindler_gauss::kgmodes::{
    bogoliubov_matrices, check_normalization, evaluate_minkowski_wavepacket, evaluate_rindler_wavepacket,
    kg_inner_product, minkowski_content, overlap_in_frequency_space, rindler_mode_normalization, Conjugate,
    MinkowskiMode, MinkowskiSpectrum, OmegaBump, RindlerGeometry, RindlerMode, RindlerSpectrum, TabulatedProfile,
    Wedge,
};
use rindler_gauss::specfun::QuadratureSpec;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn geometry(a: f64, d: f64) -> RindlerGeometry {
    RindlerGeometry::new(a, 1.0, d).unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// φ(x, t) and ∂_tφ by a fixed composite rule over the k support.
fn minkowski_oracle(s: &MinkowskiSpectrum, m: f64, x: f64, t: f64) -> (Complex64, Complex64) {
    let (lo, hi) = s.f.profile.support();
    let (ks, ws) = common::composite(lo, hi, 200, 16);
    let mut v = c(0.0, 0.0);
    let mut d = c(0.0, 0.0);
    for (&k, &w) in ks.iter().zip(&ws) {
        let om = (k * k + m * m).sqrt();
        let u = Complex64::from_polar(1.0, k * x - om * t) / (4.0 * PI * om).sqrt();
        v += w * s.eval(k) * u;
        d += w * s.eval(k) * u * c(0.0, -om);
    }
    (v, d)
}

/// ψ(x) and ∂_tψ on the t = 0 slice by a fixed Ω grid with the cosine-transform
/// Bessel oracle; χ is the distance from the wedge apex.
fn rindler_oracle(s: &RindlerSpectrum, wedge: Wedge, g: &RindlerGeometry, chi: f64) -> (Complex64, Complex64) {
    let (lo, hi) = s.support(wedge).unwrap();
    let (ws, wts) = common::composite(lo, hi, 64, 16);
    let k = common::BesselOracle::new(g.m * chi, hi / g.a);
    let mut v = c(0.0, 0.0);
    let mut d = c(0.0, 0.0);
    for (&w, &q) in ws.iter().zip(&wts) {
        let term = q * s.eval(wedge, w) * rindler_mode_normalization(w, g.a) * k.eval(w / g.a);
        v += term;
        d += term * c(0.0, -w / (g.a * chi));
    }
    (v, d)
}

#[test]
fn minkowski_packet_matches_fourier_oracle() {
    let g = geometry(1.0, 0.0);
    let narrow = MinkowskiSpectrum::bump(0.0, 0.2, 0.0).unwrap();
    let v = evaluate_minkowski_wavepacket(&narrow, &g, 0.0, 0.0).unwrap();
    assert!(v.0.re > 0.0 && v.0.im.abs() < 1e-12 * v.0.re);
    let s = MinkowskiSpectrum::bump(1.5, 0.7, 2.0).unwrap();
    for &(x, t) in &[(0.0, 0.0), (2.3, 0.0), (-1.0, 0.4), (3.0, 1.5)] {
        let got = evaluate_minkowski_wavepacket(&s, &g, x, t).unwrap();
        let (v, d) = minkowski_oracle(&s, g.m, x, t);
        assert!((got.0 - v).norm() < 1e-10, "({x}, {t}): {} vs {v}", got.0);
        assert!((got.1 - d).norm() < 1e-10);
    }
}

#[test]
fn minkowski_packet_is_localized() {
    let g = geometry(1.0, 0.0);
    let s = MinkowskiSpectrum::bump(0.5, 1.0, 0.0).unwrap();
    for x in [-40.0, 40.0] {
        assert!(evaluate_minkowski_wavepacket(&s, &g, x, 0.0).unwrap().0.norm() < 1e-12);
    }
}

#[test]
fn narrow_spectrum_time_derivative_is_mean_frequency() {
    let g = geometry(1.0, 0.0);
    let k0: f64 = 2.0;
    let s = MinkowskiSpectrum::bump(k0, 0.02, 0.0).unwrap();
    let v = evaluate_minkowski_wavepacket(&s, &g, 0.0, 0.0).unwrap();
    let om = (k0 * k0 + 1.0).sqrt();
    let predicted = c(0.0, -om) * v.0;
    assert!((v.1 - predicted).norm() < 1e-3 * predicted.norm());
}

#[test]
fn rindler_packet_matches_omega_grid_oracle() {
    let g = geometry(1.0, 0.4);
    let s = RindlerSpectrum::single(Wedge::I, OmegaBump::new(1.0, 0.5).unwrap().with_phase(0.3));
    // The turning point of K_{iν}(mχ) sits at mχ = ν.
    for chi in [0.2, 1.0, 2.5] {
        let x = 0.2 + chi;
        let got = evaluate_rindler_wavepacket(&s, &g, x).unwrap();
        let (v, d) = rindler_oracle(&s, Wedge::I, &g, chi);
        assert!(v.norm() > 1e-3);
        assert!((got.0 - v).norm() < 1e-9, "χ = {chi}: {} vs {v}", got.0);
        assert!((got.1 - d).norm() < 1e-9);
    }
    let s2 = RindlerSpectrum::single(Wedge::II, OmegaBump::new(2.0, 0.5).unwrap());
    let got = evaluate_rindler_wavepacket(&s2, &g, -0.2 - 0.7).unwrap();
    let (v, _) = rindler_oracle(&s2, Wedge::II, &g, 0.7);
    assert!((got.0 - v).norm() < 1e-9);
}

#[test]
fn rindler_packet_vanishes_outside_its_wedge() {
    let g = geometry(1.0, 1.0);
    let s = RindlerSpectrum::single(Wedge::I, OmegaBump::new(1.0, 0.5).unwrap());
    for x in [-0.3, 0.0, 0.49] {
        let v = evaluate_rindler_wavepacket(&s, &g, x).unwrap();
        assert_eq!(v, (c(0.0, 0.0), c(0.0, 0.0)));
    }
    let only_ii = RindlerSpectrum::single(Wedge::II, OmegaBump::new(1.0, 0.5).unwrap());
    let v = evaluate_rindler_wavepacket(&only_ii, &g, 2.0).unwrap();
    assert_eq!(v, (c(0.0, 0.0), c(0.0, 0.0)));
}

#[test]
fn minkowski_norms() {
    let g = geometry(1.0, 0.0);
    let s = MinkowskiSpectrum::bump(0.7, 0.5, 1.0).unwrap();
    let phi = MinkowskiMode::new(&s, &g).unwrap();
    let n = kg_inner_product(&phi, &phi, &spec()).unwrap().value;
    assert!((n - 1.0).norm() < 1e-8, "{n}");
    let nc = kg_inner_product(&Conjugate(&phi), &Conjugate(&phi), &spec())
        .unwrap()
        .value;
    assert!((nc + 1.0).norm() < 1e-8, "{nc}");
    let mixed = kg_inner_product(&phi, &Conjugate(&phi), &spec()).unwrap().value;
    assert!(mixed.norm() < 1e-8);
}

#[test]
fn separated_momentum_packets_are_orthogonal() {
    let g = geometry(1.0, 0.0);
    let a = MinkowskiMode::new(&MinkowskiSpectrum::bump(-4.0, 0.3, 0.0).unwrap(), &g).unwrap();
    let b = MinkowskiMode::new(&MinkowskiSpectrum::bump(4.0, 0.3, 0.0).unwrap(), &g).unwrap();
    assert!(kg_inner_product(&a, &b, &spec()).unwrap().value.norm() < 1e-8);
}

#[test]
fn rindler_norm_matches_frequency_space() {
    for (d, spectrum) in [
        (
            0.5,
            RindlerSpectrum::single(Wedge::I, OmegaBump::new(1.0, 0.5).unwrap()),
        ),
        (
            0.0,
            RindlerSpectrum::single(Wedge::II, OmegaBump::new(2.5, 0.4).unwrap().with_delay(3.0)),
        ),
        (
            1.0,
            RindlerSpectrum::split(
                OmegaBump::new(1.0, 0.5).unwrap(),
                c(FRAC_1_SQRT_2, 0.0),
                OmegaBump::new(1.5, 0.5).unwrap(),
                c(0.0, FRAC_1_SQRT_2),
            ),
        ),
    ] {
        let g = geometry(1.0, d);
        let psi = RindlerMode::new(&spectrum, &g).unwrap();
        let kg = kg_inner_product(&psi, &psi, &spec()).unwrap().value;
        let omega_space = check_normalization(&spectrum, &g).unwrap();
        assert!((kg - omega_space).norm() < 1e-8, "{kg} vs {omega_space}");
        assert!((omega_space - 1.0).abs() < 1e-8);
    }
}

#[test]
fn opposite_wedges_are_orthogonal_for_nonnegative_separation() {
    for d in [0.0, 0.5] {
        let g = geometry(1.0, d);
        let a = RindlerMode::new(
            &RindlerSpectrum::single(Wedge::I, OmegaBump::new(1.0, 0.5).unwrap()),
            &g,
        )
        .unwrap();
        let b = RindlerMode::new(
            &RindlerSpectrum::single(Wedge::II, OmegaBump::new(1.0, 0.5).unwrap()),
            &g,
        )
        .unwrap();
        assert_eq!(kg_inner_product(&a, &b, &spec()).unwrap().value, c(0.0, 0.0));
    }
}

#[test]
fn normalization_examples() {
    let g = geometry(1.0, 0.0);
    let b = RindlerSpectrum::single(Wedge::I, OmegaBump::new(1.0, 0.5).unwrap());
    assert!((check_normalization(&b, &g).unwrap() - 1.0).abs() < 1e-8);
    assert!((check_normalization(&b.clone().scaled(c(2.0, 0.0)), &g).unwrap() - 4.0).abs() < 4e-8);
    let half = c(FRAC_1_SQRT_2, 0.0);
    let split = RindlerSpectrum::split(
        OmegaBump::new(1.0, 0.5).unwrap(),
        half,
        OmegaBump::new(2.0, 0.3).unwrap(),
        half,
    );
    assert!((check_normalization(&split, &g).unwrap() - 1.0).abs() < 1e-8);
}

fn modes_and_packets() -> (RindlerGeometry, Vec<RindlerSpectrum>, Vec<MinkowskiSpectrum>) {
    let g = geometry(1.0, 0.0);
    let psi = vec![
        RindlerSpectrum::single(Wedge::I, OmegaBump::new(1.0, 0.5).unwrap()),
        RindlerSpectrum::single(Wedge::I, OmegaBump::new(2.0, 0.5).unwrap().with_delay(2.0)),
    ];
    let phi = vec![
        MinkowskiSpectrum::bump(0.5, 0.5, 2.0).unwrap(),
        MinkowskiSpectrum::bump(-0.3, 0.4, 3.0).unwrap(),
    ];
    (g, psi, phi)
}

#[test]
fn bogoliubov_rows_follow_mode_order() {
    let (g, psi, phi) = modes_and_packets();
    let m = bogoliubov_matrices(&psi, &phi, &g, &spec()).unwrap();
    let swapped: Vec<_> = psi.iter().rev().cloned().collect();
    let s = bogoliubov_matrices(&swapped, &phi, &g, &spec()).unwrap();
    for j in 0..2 {
        for i in 0..2 {
            assert!((m.alpha[(i, j)] - s.alpha[(1 - i, j)]).norm() < 1e-12);
            assert!((m.beta[(i, j)] - s.beta[(1 - i, j)]).norm() < 1e-12);
        }
    }
    assert!(m.alpha[(0, 0)].norm() > 1e-2);
}

#[test]
fn bogoliubov_is_linear_in_each_packet() {
    let (g, psi, phi) = modes_and_packets();
    let m = bogoliubov_matrices(&psi, &phi, &g, &spec()).unwrap();
    let k = c(0.6, -1.3);
    let scaled = vec![phi[0].clone(), phi[1].clone().scaled(k)];
    let s = bogoliubov_matrices(&psi, &scaled, &g, &spec()).unwrap();
    for i in 0..2 {
        assert!((s.alpha[(i, 0)] - m.alpha[(i, 0)]).norm() < 1e-12);
        assert!((s.alpha[(i, 1)] - k * m.alpha[(i, 1)]).norm() < 1e-9);
        // β is antilinear in φ: −(ψ|(cφ)*) = −c*(ψ|φ*).
        assert!((s.beta[(i, 1)] - k.conj() * m.beta[(i, 1)]).norm() < 1e-9);
    }
}

#[test]
fn packets_outside_the_wedge_do_not_couple() {
    let g = geometry(1.0, 0.0);
    let psi = [RindlerSpectrum::single(Wedge::I, OmegaBump::new(1.0, 0.5).unwrap())];
    let phi = [MinkowskiSpectrum::bump(0.0, 1.0, -30.0).unwrap()];
    let m = bogoliubov_matrices(&psi, &phi, &g, &spec()).unwrap();
    assert!(m.alpha[(0, 0)].norm() < 1e-10 && m.beta[(0, 0)].norm() < 1e-10);
}

#[test]
fn bogoliubov_length_mismatch_is_config_error() {
    let (g, psi, phi) = modes_and_packets();
    assert!(matches!(
        bogoliubov_matrices(&psi, &phi[..1], &g, &spec()),
        Err(rindler_gauss::Error::Config(_))
    ));
}

#[test]
fn position_and_frequency_routes_agree() {
    for d in [0.0, 0.6] {
        let g = geometry(1.0, d);
        let psi = RindlerSpectrum::split(
            OmegaBump::new(1.0, 0.5).unwrap(),
            c(0.6, 0.0),
            OmegaBump::new(1.4, 0.5).unwrap().with_phase(0.5),
            c(0.0, 0.8),
        );
        let phi = MinkowskiSpectrum::bump(0.4, 0.6, 1.5).unwrap();
        let m = bogoliubov_matrices(std::slice::from_ref(&psi), std::slice::from_ref(&phi), &g, &spec()).unwrap();
        let f = overlap_in_frequency_space(&psi, &phi, &g, &spec()).unwrap().value;
        assert!(
            (m.alpha[(0, 0)] - f[0]).norm() < 1e-7,
            "{} vs {}",
            m.alpha[(0, 0)],
            f[0]
        );
        assert!((m.beta[(0, 0)] - f[1]).norm() < 1e-7, "{} vs {}", m.beta[(0, 0)], f[1]);
        assert!(m.beta[(0, 0)].norm() > 1e-6, "β should be resolvable here");
    }
}

#[test]
fn matched_packets_suppress_beta() {
    // ψ a deep wedge-I bump (Ω₀ = 8a, where e^{−πΩ/a} ≈ 1e-11); φ its
    // positive-frequency Minkowski content, tabulated on |asinh k| ≤ 5 and
    // normalized.
    let g = geometry(1.0, 0.0);
    let psi = RindlerSpectrum::bump(Wedge::I, 8.0, 1.0).unwrap();
    let n = 241;
    let ks: Vec<f64> = (0..n)
        .map(|j| (-5.0 + 10.0 * j as f64 / (n - 1) as f64).sinh())
        .collect();
    let f: Vec<Complex64> = ks
        .iter()
        .map(|&k| minkowski_content(&psi, k, &g, &spec()).unwrap().value[0])
        .collect();
    let norm = MinkowskiSpectrum::new(TabulatedProfile::new(ks.clone(), f.clone()).unwrap())
        .norm_squared(&spec())
        .unwrap();
    let f: Vec<Complex64> = f.iter().map(|v| v / norm.sqrt()).collect();
    let phi = MinkowskiSpectrum::new(TabulatedProfile::new(ks, f).unwrap());
    let tol = QuadratureSpec::default().with_abs_tol(1e-9).with_rel_tol(1e-9);
    let m = bogoliubov_matrices(&[psi], &[phi], &g, &tol).unwrap();
    m.require_converged().unwrap();
    let (alpha, beta) = (m.alpha[(0, 0)].norm(), m.beta[(0, 0)].norm());
    assert!((alpha - 1.0).abs() < 1e-6, "{alpha}");
    assert!(beta <= 1e-8 * alpha, "{beta}");
}
