//! Online engines and the traces they produce.

mod engine;
mod state;
mod trace;

pub use engine::{
    run, run_fixed_rate, run_ogd, run_ogd_with_schedule, run_static_averaged, run_with_schedule,
};
pub use state::{advance, advance_ogd, step_rate, AlgoState, RateSchedule, RoundFeedback};
pub use trace::{AssumptionBreach, AssumptionKind, EngineKind, RoundRecord, RunTrace};

pub(crate) use state::check_epsilon;
