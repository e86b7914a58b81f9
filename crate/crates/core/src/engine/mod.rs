//! Simulation assembly: configuration, behaviors, random streams, and the
//! generation driver.
//!
//! A run is `(config, behavior, seed, clock)`. The [`config`] module parses
//! and validates the parameter file; [`behavior`] defines the extension
//! points a simulation can customize and the built-in presets; [`rng`]
//! derives an independent random stream for every consumer so results never
//! depend on evaluation order; [`driver`] owns the generation loop and the
//! files it writes.

pub mod behavior;
pub mod config;
pub mod driver;
pub mod rng;

pub use behavior::{preset, preset_names, Behavior, CytoplasmBehavior, DivergenceBehavior, NoopBehavior};
pub use config::{instruction_table, load_config, ConfigError, SimulationConfig};
pub use driver::{
    run_simulation, write_result_header, Clock, FixedClock, Phase, RunArtifacts, RunError,
    SystemClock,
};
pub use rng::{derive_stream, StreamPurpose};
