use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kgmodes::{
    Component, MinkowskiSpectrum, MomentumBump, OmegaBump, Profile, RindlerGeometry, RindlerSpectrum, TabulatedProfile,
};
use crate::scenario::{AlphaProfile, PacketFamily, SweepGrid};
use crate::specfun::QuadratureSpec;

/// Built-in configuration: two commuting single-wedge modes at D > 0 whose
/// checks all pass.
pub const DEFAULT_CONFIG: &str = include_str!("../../configs/default.toml");

/// The five batch tasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Channel,
    Transform,
    Sweep,
    Check,
    Specfun,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Task::Channel => "channel",
            Task::Transform => "transform",
            Task::Sweep => "sweep",
            Task::Check => "check",
            Task::Specfun => "specfun",
        };
        f.write_str(s)
    }
}

/// A profile as written in a config file; tables are referenced by path,
/// relative paths resolve against the config's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileDecl {
    OmegaBump(OmegaBump),
    MomentumBump(MomentumBump),
    Table { path: PathBuf },
}

impl ProfileDecl {
    fn resolve(&self, base: &Path) -> Result<Profile> {
        let p: Profile = match self {
            ProfileDecl::OmegaBump(b) => (*b).into(),
            ProfileDecl::MomentumBump(b) => (*b).into(),
            ProfileDecl::Table { path } => TabulatedProfile::load(base.join(path))?.into(),
        };
        p.validate()?;
        Ok(p)
    }
}

/// Profile with an optional complex amplitude `[re, im]` (default 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentDecl {
    #[serde(flatten)]
    pub profile: ProfileDecl,
    #[serde(default)]
    pub amplitude: Option<[f64; 2]>,
}

impl ComponentDecl {
    fn resolve(&self, base: &Path) -> Result<Component> {
        let [re, im] = self.amplitude.unwrap_or([1.0, 0.0]);
        Ok(Component::new(self.profile.resolve(base)?, Complex64::new(re, im)))
    }
}

/// Accelerated packet ψ: one component per wedge, either may be absent.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RindlerDecl {
    #[serde(default)]
    pub wedge_i: Option<ComponentDecl>,
    #[serde(default)]
    pub wedge_ii: Option<ComponentDecl>,
}

/// One mode: the accelerated packet ψ and, for channel construction, the
/// inertial packet φ it is paired with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeDecl {
    pub psi: RindlerDecl,
    #[serde(default)]
    pub phi: Option<ComponentDecl>,
}

/// Geometry with every field optional so that a missing one is reported
/// by its config path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDecl {
    pub a: Option<f64>,
    pub m: Option<f64>,
    pub d: Option<f64>,
}

impl GeometryDecl {
    fn resolve(&self) -> Result<RindlerGeometry> {
        let need = |v: Option<f64>, name: &str, what: &str| {
            v.ok_or_else(|| Error::Config(format!("missing field `geometry.{name}` ({what})")))
        };
        RindlerGeometry::new(
            need(self.a, "a", "acceleration parameter")?,
            need(self.m, "m", "field mass")?,
            need(self.d, "d", "wedge separation")?,
        )
    }
}

/// Where a transform takes its state from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateDecl {
    File { path: PathBuf },
    Vacuum { modes: usize },
    SymmetricSqueezed { modes: usize, r: f64 },
}

/// Where a transform takes its channel from. `computed` builds it from the
/// config's modes and geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelDecl {
    File { path: PathBuf },
    Identity { modes: usize },
    Diagonal { alpha: f64, modes: usize },
    Computed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformDecl {
    pub state: StateDecl,
    pub channel: ChannelDecl,
}

/// α(𝒜) either computed from a packet family or read from an `A alpha` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlphaDecl {
    Computed {
        #[serde(default)]
        family: PacketFamily,
    },
    Table {
        path: PathBuf,
    },
}

impl Default for AlphaDecl {
    fn default() -> Self {
        AlphaDecl::Computed {
            family: PacketFamily::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDecl {
    pub accelerations: Vec<f64>,
    pub squeezings: Vec<f64>,
    pub mode_counts: Vec<usize>,
    #[serde(default)]
    pub alpha: AlphaDecl,
}

impl SweepDecl {
    pub fn grid(&self) -> SweepGrid {
        SweepGrid {
            accelerations: self.accelerations.clone(),
            squeezings: self.squeezings.clone(),
            mode_counts: self.mode_counts.clone(),
        }
    }
}

/// The check suites; all run when none are listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Normalization,
    Orthogonality,
    Physicality,
    Consistency,
    Oracle,
    Overlap,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Normalization,
        Suite::Orthogonality,
        Suite::Physicality,
        Suite::Consistency,
        Suite::Oracle,
        Suite::Overlap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Normalization => "normalization",
            Suite::Orthogonality => "orthogonality",
            Suite::Physicality => "physicality",
            Suite::Consistency => "consistency",
            Suite::Oracle => "oracle",
            Suite::Overlap => "overlap",
        }
    }
}

fn default_normalization_tol() -> f64 {
    1e-6
}
fn default_orthogonality_tol() -> f64 {
    1e-6
}
fn default_physicality_tol() -> f64 {
    1e-8
}
fn default_consistency_tol() -> f64 {
    1e-12
}
fn default_oracle_tol() -> f64 {
    1e-6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDecl {
    #[serde(default)]
    pub suites: Vec<Suite>,
    #[serde(default = "default_normalization_tol")]
    pub normalization_tol: f64,
    #[serde(default = "default_orthogonality_tol")]
    pub orthogonality_tol: f64,
    #[serde(default = "default_physicality_tol")]
    pub physicality_tol: f64,
    #[serde(default = "default_consistency_tol")]
    pub consistency_tol: f64,
    #[serde(default = "default_oracle_tol")]
    pub oracle_tol: f64,
}

impl Default for CheckDecl {
    fn default() -> Self {
        CheckDecl {
            suites: Vec::new(),
            normalization_tol: default_normalization_tol(),
            orthogonality_tol: default_orthogonality_tol(),
            physicality_tol: default_physicality_tol(),
            consistency_tol: default_consistency_tol(),
            oracle_tol: default_oracle_tol(),
        }
    }
}

impl CheckDecl {
    /// Requested suites in canonical order without repeats.
    pub fn selected(&self) -> Vec<Suite> {
        if self.suites.is_empty() {
            return Suite::ALL.to_vec();
        }
        let mut s = self.suites.clone();
        s.sort();
        s.dedup();
        s
    }
}

/// Either an explicit list or `count` equally spaced points on [start, stop].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisDecl {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl AxisDecl {
    pub fn points(&self, name: &str) -> Result<Vec<f64>> {
        let pts = match self {
            AxisDecl::List(v) => v.clone(),
            AxisDecl::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
        };
        if pts.is_empty() {
            return Err(Error::Config(format!("specfun.{name} must not be empty")));
        }
        Ok(pts)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecfunDecl {
    pub nu: AxisDecl,
    pub x: AxisDecl,
}

/// Declarative run description, parsed from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Task the file is written for; when present it must match the
    /// requested subcommand.
    #[serde(default)]
    pub task: Option<Task>,
    #[serde(default)]
    pub geometry: Option<GeometryDecl>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub modes: Vec<ModeDecl>,
    #[serde(default)]
    pub transform: Option<TransformDecl>,
    #[serde(default)]
    pub sweep: Option<SweepDecl>,
    #[serde(default)]
    pub check: Option<CheckDecl>,
    #[serde(default)]
    pub specfun: Option<SpecfunDecl>,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| Error::parse("run config", e.message()))?;
        cfg.base_dir = base_dir.into();
        cfg.quadrature.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base)
    }

    /// The shipped configuration, with paths relative to the working directory.
    pub fn default_config() -> Self {
        Self::parse(DEFAULT_CONFIG, ".").expect("the shipped config parses")
    }

    pub fn resolve_path(&self, path: &Path) -> PathBuf {
        self.base_dir.join(path)
    }

    /// Fails when the file names a different task.
    pub fn require_task(&self, task: Task) -> Result<()> {
        match self.task {
            Some(t) if t != task => Err(Error::Config(format!(
                "config is written for task `{t}` but `{task}` was requested"
            ))),
            _ => Ok(()),
        }
    }

    pub fn geometry(&self) -> Result<RindlerGeometry> {
        self.geometry
            .as_ref()
            .ok_or_else(|| Error::Config("missing section `[geometry]`".into()))?
            .resolve()
    }

    /// Accelerated packets ψ_n in declaration order.
    pub fn psi_specs(&self) -> Result<Vec<RindlerSpectrum>> {
        if self.modes.is_empty() {
            return Err(Error::Config("at least one `[[modes]]` entry is required".into()));
        }
        self.modes
            .iter()
            .enumerate()
            .map(|(n, mode)| {
                let spec = RindlerSpectrum {
                    g_i: mode
                        .psi
                        .wedge_i
                        .as_ref()
                        .map(|c| c.resolve(&self.base_dir))
                        .transpose()?,
                    g_ii: mode
                        .psi
                        .wedge_ii
                        .as_ref()
                        .map(|c| c.resolve(&self.base_dir))
                        .transpose()?,
                };
                if spec.g_i.is_none() && spec.g_ii.is_none() {
                    return Err(Error::Config(format!("modes[{n}].psi declares no wedge component")));
                }
                Ok(spec)
            })
            .collect()
    }

    /// Inertial packets φ_n; every mode must declare one.
    pub fn phi_specs(&self) -> Result<Vec<MinkowskiSpectrum>> {
        self.modes
            .iter()
            .enumerate()
            .map(|(n, mode)| {
                let decl = mode
                    .phi
                    .as_ref()
                    .ok_or_else(|| Error::Config(format!("missing field `modes[{n}].phi`")))?;
                Ok(MinkowskiSpectrum {
                    f: decl.resolve(&self.base_dir)?,
                })
            })
            .collect()
    }

    pub fn transform_decl(&self) -> Result<&TransformDecl> {
        self.transform
            .as_ref()
            .ok_or_else(|| Error::Config("missing section `[transform]`".into()))
    }

    pub fn sweep_decl(&self) -> Result<&SweepDecl> {
        self.sweep
            .as_ref()
            .ok_or_else(|| Error::Config("missing section `[sweep]`".into()))
    }

    pub fn specfun_decl(&self) -> Result<&SpecfunDecl> {
        self.specfun
            .as_ref()
            .ok_or_else(|| Error::Config("missing section `[specfun]`".into()))
    }

    pub fn check_decl(&self) -> CheckDecl {
        self.check.clone().unwrap_or_default()
    }

    /// Table-sourced α profile, or `None` for a computed one.
    pub fn alpha_table(&self) -> Result<Option<AlphaProfile>> {
        match &self.sweep_decl()?.alpha {
            AlphaDecl::Table { path } => AlphaProfile::load(self.resolve_path(path)).map(Some),
            AlphaDecl::Computed { .. } => Ok(None),
        }
    }
}
