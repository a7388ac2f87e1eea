//! Spectral profiles: complex functions of Ω (Rindler) or k (Minkowski).

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{try_integrate_finite, QuadratureSpec};

/// |profile| below this is treated as zero when reporting support.
pub const SUPPORT_THRESHOLD: f64 = 1e-17;

/// Unit-norm Rindler bump on Ω > 0:
///
/// ```text
/// g(Ω) = C exp(−(Ω−Ω₀)²/(4s²)) exp(−(Ω_c/Ω)²) exp(i(φ₀ − Ωτ))
/// ```
///
/// The infrared factor makes g vanish faster than any power at Ω = 0. This
/// keeps 1/sinh(πΩ/a) in the vacuum covariance integrable and makes the
/// packet decay quickly in ln χ towards the horizon, where position-space
/// inner products are truncated. `delay` τ shifts the packet in Rindler time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "OmegaBumpParams", into = "OmegaBumpParams")]
pub struct OmegaBump {
    center: f64,
    width: f64,
    phase: f64,
    delay: f64,
    ir_cutoff: f64,
    norm: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
struct OmegaBumpParams {
    center: f64,
    width: f64,
    #[serde(default)]
    phase: f64,
    #[serde(default)]
    delay: f64,
    #[serde(default)]
    ir_cutoff: Option<f64>,
}

impl From<OmegaBumpParams> for OmegaBump {
    fn from(p: OmegaBumpParams) -> Self {
        let mut b = OmegaBump {
            center: p.center,
            width: p.width,
            phase: p.phase,
            delay: p.delay,
            ir_cutoff: p.ir_cutoff.unwrap_or(DEFAULT_IR_FRACTION * p.width),
            norm: f64::NAN,
        };
        b.norm = b.compute_normalization();
        b
    }
}

impl From<OmegaBump> for OmegaBumpParams {
    fn from(b: OmegaBump) -> Self {
        OmegaBumpParams {
            center: b.center,
            width: b.width,
            phase: b.phase,
            delay: b.delay,
            ir_cutoff: Some(b.ir_cutoff),
        }
    }
}

/// Default Ω_c as a fraction of the bump width.
pub const DEFAULT_IR_FRACTION: f64 = 0.4;

impl OmegaBump {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        let b = OmegaBump::from(OmegaBumpParams {
            center,
            width,
            phase: 0.0,
            delay: 0.0,
            ir_cutoff: None,
        });
        b.validate()?;
        Ok(b)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    pub fn ir_cutoff(&self) -> f64 {
        self.ir_cutoff
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_delay(mut self, delay: f64) -> Self {
        self.delay = delay;
        self
    }

    pub fn with_ir_cutoff(mut self, ir_cutoff: f64) -> Self {
        self.ir_cutoff = ir_cutoff;
        self.norm = self.compute_normalization();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) || !self.center.is_finite() {
            return Err(Error::Domain(format!(
                "Ω bump needs a finite center and positive width, got ({}, {})",
                self.center, self.width
            )));
        }
        if !(self.ir_cutoff > 0.0 && self.ir_cutoff.is_finite()) {
            return Err(Error::Domain(format!(
                "Ω bump infrared cutoff must be positive, got {}",
                self.ir_cutoff
            )));
        }
        if !self.phase.is_finite() || !self.delay.is_finite() {
            return Err(Error::Domain("Ω bump phase and delay must be finite".into()));
        }
        if !(self.norm.is_finite() && self.norm > 0.0) {
            return Err(Error::Domain("Ω bump has no weight on Ω > 0".into()));
        }
        Ok(())
    }

    fn envelope(&self, omega: f64) -> f64 {
        let z = (omega - self.center) / self.width;
        let q = self.ir_cutoff / omega;
        (-0.25 * z * z - q * q).exp()
    }

    fn compute_normalization(&self) -> f64 {
        if !(self.width > 0.0) || !(self.ir_cutoff > 0.0) || !self.center.is_finite() {
            return f64::NAN;
        }
        let (lo, hi) = self.raw_support(1e-20);
        let spec = QuadratureSpec::default()
            .with_abs_tol(1e-300)
            .with_rel_tol(1e-15)
            .with_max_subdivisions(2000);
        let bp: Vec<f64> = (1..16).map(|i| lo + (hi - lo) * i as f64 / 16.0).collect();
        match try_integrate_finite(|w| Ok(self.envelope(w).powi(2)), lo, hi, &bp, &spec) {
            Ok(r) if r.value > 0.0 => r.value.sqrt().recip(),
            _ => f64::NAN,
        }
    }

    /// C such that ∫₀^∞ |g|² dΩ = 1.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn eval(&self, omega: f64) -> Complex64 {
        if omega <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.norm * self.envelope(omega), self.phase - omega * self.delay)
    }

    /// Interval of the unnormalized envelope above `threshold`.
    fn raw_support(&self, threshold: f64) -> (f64, f64) {
        let r = 2.0 * self.width * (1.0 / threshold).ln().sqrt();
        let hi = self.center + r;
        // exp(−(Ω_c/Ω)²) < threshold below Ω_c / √ln(1/threshold).
        let ir = self.ir_cutoff / (1.0 / threshold).ln().sqrt();
        let lo = (self.center - r).max(ir);
        (lo.min(hi * 0.5), hi)
    }

    /// Interval outside which |g| < `threshold`.
    pub fn support(&self, threshold: f64) -> (f64, f64) {
        let peak = self.norm.max(1.0);
        self.raw_support(threshold / peak)
    }
}

/// Unit-norm Minkowski bump on the real k line:
///
/// ```text
/// f(k) = (2πs²)^{−1/4} exp(−(k−k₀)²/(4s²)) exp(i(φ₀ − k x₀))
/// ```
///
/// `position` x₀ is the packet's center at t = 0; its spatial width is 1/(2s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumBump {
    pub center: f64,
    pub width: f64,
    #[serde(default)]
    pub position: f64,
    #[serde(default)]
    pub phase: f64,
}

impl MomentumBump {
    pub fn new(center: f64, width: f64, position: f64) -> Result<Self> {
        let b = MomentumBump {
            center,
            width,
            position,
            phase: 0.0,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) || !self.center.is_finite() {
            return Err(Error::Domain(format!(
                "k bump needs a finite center and positive width, got ({}, {})",
                self.center, self.width
            )));
        }
        if !self.position.is_finite() || !self.phase.is_finite() {
            return Err(Error::Domain("k bump position and phase must be finite".into()));
        }
        Ok(())
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        let s = self.width;
        let z = (k - self.center) / s;
        let envelope = (2.0 * PI * s * s).powf(-0.25) * (-0.25 * z * z).exp();
        Complex64::from_polar(envelope, self.phase - k * self.position)
    }

    pub fn support(&self, threshold: f64) -> (f64, f64) {
        let peak = (2.0 * PI * self.width * self.width).powf(-0.25);
        let r = 2.0 * self.width * (peak / threshold).ln().max(1.0).sqrt();
        (self.center - r, self.center + r)
    }
}

/// Natural cubic spline through real samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots; zero at both ends.
    m: Vec<f64>,
}

impl CubicSpline {
    fn new(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Tridiagonal system for interior second derivatives (Thomas algorithm).
            let mut c_prime = vec![0.0; n];
            let mut d_prime = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                let diag = 2.0 * (h0 + h1);
                let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
                let denom = diag - h0 * c_prime[i - 1];
                c_prime[i] = h1 / denom;
                d_prime[i] = (rhs - h0 * d_prime[i - 1]) / denom;
            }
            for i in (1..n - 1).rev() {
                m[i] = d_prime[i] - c_prime[i] * m[i + 1];
            }
        }
        CubicSpline {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        }
    }

    fn eval_segment(&self, i: usize, t: f64) -> f64 {
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let a = (x1 - t) / h;
        let b = (t - x0) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

/// Complex profile sampled on a strictly increasing grid, interpolated by
/// natural cubic splines in the real and imaginary parts, zero outside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TabulatedProfile {
    re: CubicSpline,
    im: CubicSpline,
}

impl TabulatedProfile {
    pub fn new(abscissae: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if abscissae.len() != values.len() {
            return Err(Error::Dimension {
                expected: abscissae.len(),
                got: values.len(),
                context: "tabulated profile values".into(),
            });
        }
        if abscissae.len() < 2 {
            return Err(Error::Config("a tabulated profile needs at least two rows".into()));
        }
        if abscissae.iter().any(|x| !x.is_finite()) || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Config("tabulated profile contains non-finite entries".into()));
        }
        if let Some(w) = abscissae.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Config(format!(
                "tabulated profile abscissae must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
        let re: Vec<f64> = values.iter().map(|v| v.re).collect();
        let im: Vec<f64> = values.iter().map(|v| v.im).collect();
        Ok(TabulatedProfile {
            re: CubicSpline::new(&abscissae, &re),
            im: CubicSpline::new(&abscissae, &im),
        })
    }

    /// Samples `f` on `n` equally spaced points of `[lo, hi]`.
    pub fn sample(f: impl Fn(f64) -> Complex64, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(Error::Config(format!("cannot sample on [{lo}, {hi}] with {n} points")));
        }
        let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let vs = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, vs)
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.re.x
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.re
            .y
            .iter()
            .zip(&self.im.y)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.re.x[0], *self.re.x.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let xs = &self.re.x;
        let (lo, hi) = self.range();
        if !(x >= lo && x <= hi) {
            return Complex64::new(0.0, 0.0);
        }
        let i = xs.partition_point(|&v| v <= x).saturating_sub(1).min(xs.len() - 2);
        Complex64::new(self.re.eval_segment(i, x), self.im.eval_segment(i, x))
    }

    /// Knots of the table, used as quadrature breakpoints.
    pub fn knots(&self) -> &[f64] {
        &self.re.x
    }

    /// Parses rows `x re im`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    "profile table",
                    format!("line {}: expected 3 columns, found {}", lineno + 1, fields.len()),
                ));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::parse("profile table", format!("line {}: {e}", lineno + 1)))
            };
            xs.push(num(fields[0])?);
            vs.push(Complex64::new(num(fields[1])?, num(fields[2])?));
        }
        Self::new(xs, vs)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_table_string(&self) -> String {
        let mut out = String::new();
        for (x, v) in self.abscissae().iter().zip(self.values()) {
            let _ = writeln!(out, "{x:.17e} {:.17e} {:.17e}", v.re, v.im);
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_table_string()).map_err(|e| Error::io(path, e))
    }
}

/// A spectral profile in one of the supported representations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    OmegaBump(OmegaBump),
    MomentumBump(MomentumBump),
    Table(TabulatedProfile),
}

impl Profile {
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Profile::OmegaBump(b) => b.eval(x),
            Profile::MomentumBump(b) => b.eval(x),
            Profile::Table(t) => t.eval(x),
        }
    }

    /// Closed interval outside which the profile is negligible.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Profile::OmegaBump(b) => b.support(SUPPORT_THRESHOLD),
            Profile::MomentumBump(b) => b.support(SUPPORT_THRESHOLD),
            Profile::Table(t) => t.range(),
        }
    }

    /// Points where the profile is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::Table(t) => t.knots().to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::OmegaBump(b) => b.validate(),
            Profile::MomentumBump(b) => b.validate(),
            Profile::Table(_) => Ok(()),
        }
    }

    pub fn evaluator(&self) -> impl Fn(f64) -> Complex64 + '_ {
        move |x| self.eval(x)
    }
}

impl From<OmegaBump> for Profile {
    fn from(b: OmegaBump) -> Self {
        Profile::OmegaBump(b)
    }
}

impl From<MomentumBump> for Profile {
    fn from(b: MomentumBump) -> Self {
        Profile::MomentumBump(b)
    }
}

impl From<TabulatedProfile> for Profile {
    fn from(t: TabulatedProfile) -> Self {
        Profile::Table(t)
    }
}
