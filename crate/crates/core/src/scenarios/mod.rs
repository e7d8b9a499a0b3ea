//! Built-in meters, seeded random scenarios, closed-form oracles and the
//! scenario file format.

mod builders;
mod config;
mod oracle;

pub use builders::{make_pointer_meter, make_qubit_meter, make_random_scenario, POINTER_MIN_DIM, POINTER_WIDTH};
pub use config::{
    load_scenario, parse_scenario, write_scenario, LoadedScenario, MeterConfig, ReadoutConfig, ScenarioConfig,
    SweepSettings, SystemConfig,
};
pub use oracle::{gaussian_decoherence, QubitMeterOracle};
