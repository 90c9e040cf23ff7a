//! Joint planning of electric drayage trucks, charging stations and
//! substation capacity as a mixed-integer linear program.

pub mod bigm;
pub mod builder;
pub mod costs;
pub mod domain;
pub mod error;
pub mod pipeline;
pub mod scenario;
pub mod tiers;

pub use bigm::{compute_bigm, BigMBook};
pub use builder::{
    build_budget_constraint, build_charging_access, build_costs, build_grid_connection, build_model,
    build_plan, build_station_capacity, build_truck_energy, set_objective, BuildOptions,
    ChargeEfficiency, PlanModel, PlanObjective,
};
pub use costs::{amortize, CostBook, CostRow, TouSchedule};
pub use domain::{
    derive_subsets, haversine_miles, next_time, validate_instance, AccessMatrix, GeoPoint, GridParams,
    Instance, SiteKind, StationSite, SubstationNode, Subsets, TimeGrid, TruckProfile, ValidationReport,
};
pub use error::{BuildError, DomainError, PipelineError, ScenarioError};
pub use scenario::{
    emit_report, ghg, interpolate_targets, run_mode1, run_mode1_sweep, run_mode2, run_mode2_years,
    run_mode3, utilization, PlanReport, ScenarioOptions,
};
pub use tiers::{tier_indicator_exact, ChargerCatalog, ChargerTier, TierLinParams};

pub use milp;
