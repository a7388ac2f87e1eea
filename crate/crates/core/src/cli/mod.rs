//! Batch front end: a declarative TOML run description and one runner per
//! task, each returning its output document instead of writing it.

mod config;
mod run;

pub use config::{
    AlphaDecl, AxisDecl, ChannelDecl, CheckDecl, ComponentDecl, GeometryDecl, ModeDecl, ProfileDecl, RindlerDecl,
    RunConfig, SpecfunDecl, StateDecl, Suite, SweepDecl, Task, TransformDecl, DEFAULT_CONFIG,
};
pub use run::{
    computed_channel, run, run_channel, run_check, run_specfun, run_sweep, run_transform, RunOptions, RunOutput,
};
