//! Field modes evaluable on the t = 0 Cauchy slice.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::geometry::{RindlerGeometry, Wedge};
use super::spectrum::{MinkowskiSpectrum, RindlerSpectrum};
use crate::error::{Error, Result};
use crate::specfun::{gauss_legendre, try_integrate_finite, QuadValue, QuadratureSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Smallest ln(mχ) resolved near a wedge apex.
pub const LOG_APEX_CUTOFF: f64 = -700.0;

/// A field value and its Minkowski-time derivative at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeValue {
    pub value: Complex64,
    pub dt: Complex64,
}

impl ModeValue {
    pub const ZERO: ModeValue = ModeValue { value: ZERO, dt: ZERO };

    pub fn conj(self) -> Self {
        ModeValue {
            value: self.value.conj(),
            dt: self.dt.conj(),
        }
    }
}

impl Add for ModeValue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ModeValue {
            value: self.value + rhs.value,
            dt: self.dt + rhs.dt,
        }
    }
}

impl Sub for ModeValue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ModeValue {
            value: self.value - rhs.value,
            dt: self.dt - rhs.dt,
        }
    }
}

impl Mul<f64> for ModeValue {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        ModeValue {
            value: self.value * rhs,
            dt: self.dt * rhs,
        }
    }
}

impl QuadValue for ModeValue {
    fn zero() -> Self {
        ModeValue::ZERO
    }
    fn magnitude(&self) -> f64 {
        self.value.norm().max(self.dt.norm())
    }
    fn is_finite_value(&self) -> bool {
        self.value.is_finite_value() && self.dt.is_finite_value()
    }
}

/// Spatial interval where a mode may be non-negligible on the t = 0 slice.
/// An endpoint flagged as an apex is a wedge horizon, where the mode
/// oscillates in ln χ and inner products switch to logarithmic coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
    pub lo_apex: bool,
    pub hi_apex: bool,
    /// ln(mχ) below which the mode is negligible near its apex.
    pub log_floor: f64,
}

impl Support {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Support {
            lo,
            hi,
            lo_apex: false,
            hi_apex: false,
            log_floor: f64::NEG_INFINITY,
        }
    }

    pub fn contains_interval(&self, lo: f64, hi: f64) -> bool {
        self.lo <= lo && hi <= self.hi
    }
}

/// A classical solution evaluable with its time derivative on t = 0.
pub trait FieldMode: Sync {
    fn eval(&self, x: f64) -> Result<ModeValue>;
    /// Value at x = apex + dir·χ. Modes singular at `apex` override this to
    /// keep full relative precision in χ, which may be far below the ulp of x.
    fn eval_from(&self, apex: f64, dir: f64, chi: f64) -> Result<ModeValue> {
        self.eval(apex + dir * chi)
    }
    fn supports(&self) -> Vec<Support>;
    /// Mass setting the length scale of apex neighborhoods.
    fn mass(&self) -> f64;
}

/// Complex conjugate of a mode: value and time derivative conjugated.
pub struct Conjugate<'a, M: FieldMode + ?Sized>(pub &'a M);

impl<M: FieldMode + ?Sized> FieldMode for Conjugate<'_, M> {
    fn eval(&self, x: f64) -> Result<ModeValue> {
        Ok(self.0.eval(x)?.conj())
    }
    fn eval_from(&self, apex: f64, dir: f64, chi: f64) -> Result<ModeValue> {
        Ok(self.0.eval_from(apex, dir, chi)?.conj())
    }
    fn supports(&self) -> Vec<Support> {
        self.0.supports()
    }
    fn mass(&self) -> f64 {
        self.0.mass()
    }
}

/// Accuracy used inside mode evaluations.
pub fn default_mode_quadrature() -> QuadratureSpec {
    QuadratureSpec::default()
        .with_abs_tol(1e-14)
        .with_rel_tol(1e-12)
        .with_max_subdivisions(2000)
}

/// Minkowski wavepacket φ(x, t) = ∫dk f(k) e^{i(kx−ωt)}/√(4πω).
///
/// The k integral uses a composite Gauss–Legendre rule sized for the phase
/// range over the spatial support at t = 0; points outside that range fall
/// back to adaptive quadrature.
#[derive(Clone, Debug)]
pub struct MinkowskiMode {
    spectrum: MinkowskiSpectrum,
    mass: f64,
    quadrature: QuadratureSpec,
    k_range: (f64, f64),
    breakpoints: Vec<f64>,
    support: Support,
    /// Phase budget |x| + |t| the node set resolves.
    reach: f64,
    ks: Vec<f64>,
    omegas: Vec<f64>,
    /// w_n f(k_n) / √(4πω_n).
    weights: Vec<Complex64>,
}

const GL_ORDER: usize = 20;

fn composite_nodes(edges: &[f64], panels_per_piece: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(GL_ORDER);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for piece in edges.windows(2) {
        let width = (piece[1] - piece[0]) / panels_per_piece as f64;
        for p in 0..panels_per_piece {
            let c = piece[0] + (p as f64 + 0.5) * width;
            for (x, w) in xs.iter().zip(&ws) {
                nodes.push(c + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
    }
    (nodes, weights)
}

impl MinkowskiMode {
    pub fn new(spectrum: &MinkowskiSpectrum, geometry: &RindlerGeometry) -> Result<Self> {
        geometry.validate()?;
        spectrum.f.profile.validate()?;
        let m = geometry.m;
        let k_range = spectrum.f.profile.support();
        let breakpoints: Vec<f64> = spectrum
            .f
            .profile
            .breakpoints()
            .into_iter()
            .filter(|&b| b > k_range.0 && b < k_range.1)
            .collect();
        let support = match &spectrum.f.profile {
            super::Profile::MomentumBump(b) => {
                // Gaussian envelope 1/(2s) wide, smeared by the e^{−m|x|} tail of 1/√ω.
                let s = b.width;
                let r = (6.5 / s).max((42.0 + m * m / (4.0 * s * s)) / m);
                Support::interval(b.position - r, b.position + r)
            }
            _ => {
                let r = QuadratureSpec::default().upper_cutoff;
                Support::interval(-r, r)
            }
        };
        let mut mode = MinkowskiMode {
            spectrum: spectrum.clone(),
            mass: m,
            quadrature: default_mode_quadrature(),
            k_range,
            breakpoints,
            support,
            reach: 0.0,
            ks: Vec::new(),
            omegas: Vec::new(),
            weights: Vec::new(),
        };
        mode.build_nodes()?;
        Ok(mode)
    }

    fn build_nodes(&mut self) -> Result<()> {
        let (lo, hi) = self.k_range;
        let reach = self.support.lo.abs().max(self.support.hi.abs()) + 1.0;
        let mut edges = vec![lo];
        edges.extend(self.breakpoints.iter().copied());
        edges.push(hi);
        let base = ((hi - lo) * reach / 4.0).ceil().max(4.0) as usize;
        let mut panels = base.div_ceil(edges.len() - 1).max(1);
        let probes = [
            self.support.lo,
            0.5 * (self.support.lo + self.support.hi),
            self.support.hi,
        ];
        let mut previous: Option<Vec<Complex64>> = None;
        let mut last_diff = f64::INFINITY;
        for _ in 0..8 {
            self.set_nodes(&edges, panels);
            let values: Vec<Complex64> = probes.iter().map(|&x| self.sum_nodes(x, 0.0).value).collect();
            // Summation rounding scales with Σ|w_n|.
            let scale = self.weights.iter().map(|w| w.norm()).sum::<f64>();
            if let Some(prev) = &previous {
                let diff = values.iter().zip(prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                if diff <= 1e-14 * scale {
                    self.reach = reach;
                    return Ok(());
                }
                // A growing difference near the floor is rounding; keep the coarser set.
                if diff > last_diff && last_diff <= 1e-12 * scale {
                    self.set_nodes(&edges, panels / 2);
                    self.reach = reach;
                    return Ok(());
                }
                last_diff = diff;
            }
            previous = Some(values);
            panels *= 2;
        }
        Err(Error::Precondition(
            "Minkowski wavepacket: k transform did not converge; profile too rough".into(),
        ))
    }

    fn set_nodes(&mut self, edges: &[f64], panels: usize) {
        let (ks, ws) = composite_nodes(edges, panels);
        let m2 = self.mass * self.mass;
        let f = self.spectrum.f.profile.evaluator();
        let amp = self.spectrum.f.amplitude;
        self.omegas = ks.iter().map(|k| (k * k + m2).sqrt()).collect();
        self.weights = ks
            .iter()
            .zip(&ws)
            .zip(&self.omegas)
            .map(|((&k, &w), &om)| amp * f(k) * (w / (4.0 * PI * om).sqrt()))
            .collect();
        self.ks = ks;
    }

    fn sum_nodes(&self, x: f64, t: f64) -> ModeValue {
        let mut v = ZERO;
        let mut d = ZERO;
        for ((k, om), w) in self.ks.iter().zip(&self.omegas).zip(&self.weights) {
            let term = w * Complex64::from_polar(1.0, k * x - om * t);
            v += term;
            d += term * om;
        }
        ModeValue { value: v, dt: -I * d }
    }

    pub fn with_quadrature(mut self, spec: QuadratureSpec) -> Self {
        self.quadrature = spec;
        self
    }

    /// φ(x, t) and ∂_tφ(x, t).
    pub fn eval_at(&self, x: f64, t: f64) -> Result<ModeValue> {
        if x.abs() + t.abs() <= self.reach {
            return Ok(self.sum_nodes(x, t));
        }
        let (lo, hi) = self.k_range;
        let m2 = self.mass * self.mass;
        let f = self.spectrum.f.profile.evaluator();
        let amp = self.spectrum.f.amplitude;
        let r = try_integrate_finite(
            |k| {
                let w = (k * k + m2).sqrt();
                let u = Complex64::from_polar((4.0 * PI * w).sqrt().recip(), k * x - w * t);
                let v = f(k) * u;
                Ok(ModeValue {
                    value: v,
                    dt: -I * w * v,
                })
            },
            lo,
            hi,
            &self.breakpoints,
            &self.quadrature,
        )?;
        Ok(ModeValue {
            value: amp * r.value.value,
            dt: amp * r.value.dt,
        })
    }
}

impl FieldMode for MinkowskiMode {
    fn eval(&self, x: f64) -> Result<ModeValue> {
        self.eval_at(x, 0.0)
    }
    fn supports(&self) -> Vec<Support> {
        vec![self.support]
    }
    fn mass(&self) -> f64 {
        self.mass
    }
}

/// φ(x, t) and ∂_tφ(x, t) for a Minkowski wavepacket.
pub fn evaluate_minkowski_wavepacket(
    spectrum: &MinkowskiSpectrum,
    geometry: &RindlerGeometry,
    x: f64,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    let v = MinkowskiMode::new(spectrum, geometry)?.eval_at(x, t)?;
    Ok((v.value, v.dt))
}

/// Normalization √(sinh(πν)/(π²a)) of the Rindler mode w_ΛΩ.
pub fn rindler_mode_normalization(omega: f64, a: f64) -> f64 {
    let nu = omega / a;
    let x = PI * nu;
    let log_sinh = if x > 20.0 {
        x - std::f64::consts::LN_2
    } else {
        x.sinh().ln()
    };
    (0.5 * log_sinh).exp() / (PI * a.sqrt())
}

/// One wedge of a Rindler wavepacket, stored as the cosine transforms
///
/// ```text
/// G₀(t) = ∫dΩ g(Ω) N(Ω) cos(Ωt/a),   G₁(t) = ∫dΩ Ω g(Ω) N(Ω) cos(Ωt/a)
/// ```
///
/// on a trapezoidal grid in t. Substituting K_{iν}(x) = ∫₀^∞ e^{−x cosh t} cos(νt) dt
/// turns ψ(χ) into a single sum Σ_j w_j e^{−mχ cosh t_j} G₀(t_j). Large t
/// probes small χ: the grid reaches t ≈ −LOG_APEX_CUTOFF and is cut where
/// G₀ and G₁ become negligible.
#[derive(Clone, Debug)]
struct WedgePacket {
    wedge: Wedge,
    apex: f64,
    chi_max: f64,
    log_floor: f64,
    weights: Vec<f64>,
    cosh_t: Vec<f64>,
    g0: Vec<Complex64>,
    g1: Vec<Complex64>,
}

/// Relative size of G below which the t grid is truncated.
const TRANSFORM_FLOOR: f64 = 1e-17;

impl WedgePacket {
    fn build(spectrum: &RindlerSpectrum, wedge: Wedge, geometry: &RindlerGeometry) -> Result<Option<Self>> {
        let Some(comp) = spectrum.component(wedge) else {
            return Ok(None);
        };
        let Some((lo, hi)) = spectrum.support(wedge) else {
            return Ok(None);
        };
        if !(hi > lo) {
            return Ok(None);
        }
        let a = geometry.a;
        let nu_max = hi / a;
        // Trapezoid aliasing below e^{−π(ν_max+27)/2} in absolute terms.
        let h0 = 2.0 * PI / (2.0 * nu_max + 27.0);
        let t_max = (1.0 + 60.0 / LOG_APEX_CUTOFF.exp()).acosh();
        let n = (t_max / h0).ceil() as usize;
        let h = t_max / n as f64;

        let eval = comp.profile.evaluator();
        let amp = comp.amplitude;
        let gn = |w: f64| amp * eval(w) * rindler_mode_normalization(w, a);
        let mut edges = vec![lo];
        edges.extend(comp.profile.breakpoints().into_iter().filter(|&b| b > lo && b < hi));
        edges.push(hi);

        // Composite Gauss–Legendre in Ω, refined until two panel counts agree
        // on a set of probe times that includes the largest phase.
        let probes: Vec<f64> = [1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.05, 0.02, 0.01, 0.0]
            .iter()
            .map(|f| f * t_max)
            .chain([1.0, 3.0, 10.0])
            .collect();
        let base_panels = ((hi - lo) * t_max / (10.0 * a)).ceil().max(4.0) as usize;
        let mut panels = base_panels.div_ceil(edges.len() - 1).max(1);
        let mut prev = cosine_transforms(&gn, &edges, panels, &probes, a, false);
        let mut converged = false;
        let mut last_diff = f64::INFINITY;
        for _ in 0..6 {
            panels *= 2;
            let next = cosine_transforms(&gn, &edges, panels, &probes, a, false);
            let scale = next
                .0
                .iter()
                .chain(&next.1)
                .map(|z| z.norm())
                .fold(0.0, f64::max)
                .max(1e-300);
            let diff = next
                .0
                .iter()
                .zip(&prev.0)
                .chain(next.1.iter().zip(&prev.1))
                .map(|(p, q)| (p - q).norm())
                .fold(0.0, f64::max);
            prev = next;
            if diff <= 1e-13 * scale {
                converged = true;
                break;
            }
            // A growing difference near the floor is summation rounding.
            if diff > last_diff && last_diff <= 1e-11 * scale {
                panels /= 2;
                converged = true;
                break;
            }
            last_diff = diff;
        }
        if !converged {
            return Err(Error::Precondition(format!(
                "Rindler wavepacket in wedge {wedge:?}: Ω transform did not converge; profile too rough"
            )));
        }
        let ts: Vec<f64> = (0..=n).map(|j| j as f64 * h).collect();
        let (mut g0, mut g1) = cosine_transforms(&gn, &edges, panels / 2, &ts, a, true);
        let scale = g0.iter().chain(&g1).map(|z| z.norm()).fold(0.0, f64::max);
        let last = (0..=n)
            .rev()
            .find(|&j| g0[j].norm().max(g1[j].norm()) > TRANSFORM_FLOOR * scale)
            .unwrap_or(0);
        let keep = (last + 2).min(n + 1);
        g0.truncate(keep);
        g1.truncate(keep);
        let weights = (0..keep).map(|j| if j == 0 { 0.5 * h } else { h }).collect();
        let cosh_t = ts[..keep].iter().map(|t| t.cosh()).collect();
        // Beyond t_keep the sum is Σ w_j G(t_j)(1 − x cosh t_j + …), whose
        // leading term is the vanishing Ω = 0 value of gN.
        let log_floor = (-(ts[keep - 1] + 40.0)).max(LOG_APEX_CUTOFF);
        let chi_max = (50.0 + 2.6 * nu_max) / geometry.m;
        Ok(Some(WedgePacket {
            wedge,
            apex: geometry.apex(wedge),
            chi_max,
            log_floor,
            weights,
            cosh_t,
            g0,
            g1,
        }))
    }

    fn eval(&self, chi: f64, m: f64, a: f64) -> ModeValue {
        let x = m * chi;
        let mut s0 = ZERO;
        let mut s1 = ZERO;
        for j in 0..self.weights.len() {
            let e = x * self.cosh_t[j];
            if e > 745.0 {
                break;
            }
            let w = self.weights[j] * (-e).exp();
            s0 += self.g0[j] * w;
            s1 += self.g1[j] * w;
        }
        ModeValue {
            value: s0,
            dt: -I * s1 / (a * chi),
        }
    }

    fn support(&self) -> Support {
        let (lo, hi, lo_apex, hi_apex) = match self.wedge {
            Wedge::I => (self.apex, self.apex + self.chi_max, true, false),
            Wedge::II => (self.apex - self.chi_max, self.apex, false, true),
        };
        Support {
            lo,
            hi,
            lo_apex,
            hi_apex,
            log_floor: self.log_floor,
        }
    }
}

/// Cosine transforms of gN and ΩgN at times `ts`. With `uniform` set, `ts`
/// is an arithmetic progression from 0 and cos(νt_j) is advanced by complex
/// rotation, resynchronized every 64 steps.
fn cosine_transforms(
    gn: &dyn Fn(f64) -> Complex64,
    edges: &[f64],
    panels_per_piece: usize,
    ts: &[f64],
    a: f64,
    uniform: bool,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let (omegas, ws) = composite_nodes(edges, panels_per_piece);
    let mut g0 = vec![ZERO; ts.len()];
    let mut g1 = vec![ZERO; ts.len()];
    let h = if ts.len() > 1 { ts[1] - ts[0] } else { 0.0 };
    for (&w, &q) in omegas.iter().zip(&ws) {
        let v0 = gn(w) * q;
        if v0 == ZERO {
            continue;
        }
        let v1 = v0 * w;
        let nu = w / a;
        if uniform {
            let step = Complex64::from_polar(1.0, nu * h);
            let mut z = Complex64::new(1.0, 0.0);
            for j in 0..ts.len() {
                if j % 64 == 0 {
                    z = Complex64::from_polar(1.0, nu * ts[j]);
                }
                g0[j] += v0 * z.re;
                g1[j] += v1 * z.re;
                z *= step;
            }
        } else {
            for (j, &t) in ts.iter().enumerate() {
                let c = (nu * t).cos();
                g0[j] += v0 * c;
                g1[j] += v1 * c;
            }
        }
    }
    (g0, g1)
}

/// Rindler wavepacket ψ = ∫dΩ (g_I w_IΩ + g_II w_IIΩ) on the t = 0 slice,
/// with w_ΛΩ = √(sinh(πΩ/a)/(π²a)) K_{iΩ/a}(mχ) and ∂_t w_ΛΩ = −iΩ/(aχ) w_ΛΩ,
/// χ the distance from the wedge apex.
#[derive(Clone, Debug)]
pub struct RindlerMode {
    geometry: RindlerGeometry,
    wedges: Vec<WedgePacket>,
}

impl RindlerMode {
    pub fn new(spectrum: &RindlerSpectrum, geometry: &RindlerGeometry) -> Result<Self> {
        geometry.validate()?;
        spectrum.validate()?;
        let mut wedges = Vec::new();
        for w in [Wedge::I, Wedge::II] {
            if let Some(p) = WedgePacket::build(spectrum, w, geometry)? {
                wedges.push(p);
            }
        }
        Ok(RindlerMode {
            geometry: *geometry,
            wedges,
        })
    }

    pub fn geometry(&self) -> &RindlerGeometry {
        &self.geometry
    }

    /// Contribution of a single wedge; zero outside that wedge.
    pub fn eval_wedge(&self, wedge: Wedge, x: f64) -> ModeValue {
        let g = &self.geometry;
        self.wedges
            .iter()
            .filter(|p| p.wedge == wedge)
            .filter_map(|p| g.wedge_distance(wedge, x).map(|chi| p.eval(chi, g.m, g.a)))
            .fold(ModeValue::ZERO, |acc, v| acc + v)
    }
}

impl FieldMode for RindlerMode {
    fn eval(&self, x: f64) -> Result<ModeValue> {
        Ok(self.eval_wedge(Wedge::I, x) + self.eval_wedge(Wedge::II, x))
    }
    fn eval_from(&self, apex: f64, dir: f64, chi: f64) -> Result<ModeValue> {
        let g = &self.geometry;
        let x = apex + dir * chi;
        let mut total = ModeValue::ZERO;
        for p in &self.wedges {
            let outward = match p.wedge {
                Wedge::I => 1.0,
                Wedge::II => -1.0,
            };
            let own = if p.apex == apex && dir == outward {
                Some(chi)
            } else {
                g.wedge_distance(p.wedge, x)
            };
            if let Some(c) = own.filter(|&c| c > 0.0) {
                total = total + p.eval(c, g.m, g.a);
            }
        }
        Ok(total)
    }
    fn supports(&self) -> Vec<Support> {
        self.wedges.iter().map(|p| p.support()).collect()
    }
    fn mass(&self) -> f64 {
        self.geometry.m
    }
}

/// ψ(x, t=0) and its Minkowski-time derivative. Exact zero outside the wedges.
pub fn evaluate_rindler_wavepacket(
    spectrum: &RindlerSpectrum,
    geometry: &RindlerGeometry,
    x: f64,
) -> Result<(Complex64, Complex64)> {
    let v = RindlerMode::new(spectrum, geometry)?.eval(x)?;
    Ok((v.value, v.dt))
}
