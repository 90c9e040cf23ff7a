#![allow(dead_code)]

use std::collections::BTreeSet;

use drayplan::domain::StationLink;
use drayplan::pipeline::{generate_synthetic, SyntheticSpec};
use drayplan::{
    build_plan, AccessMatrix, BuildOptions, CostBook, GeoPoint, GridParams, Instance, PlanObjective, SiteKind,
    StationSite, SubstationNode, TimeGrid, TruckProfile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Most free binaries allowed in an oracle fixture.
pub const ORACLE_BINARIES: usize = 14;

pub fn tiny_spec(seed: u64) -> SyntheticSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let substations = rng.gen_range(1..=2);
    let steps = [4, 6, 8][rng.gen_range(0..3)];
    SyntheticSpec {
        trucks: rng.gen_range(1..=3),
        stations: rng.gen_range(1..=3),
        substations,
        steps,
        seed,
        extent_miles: 4.0,
        demand_kwh: (80.0, 600.0),
        capacity_kw: (20.0, 300.0),
        k_nearest: rng.gen_range(1..=substations),
        max_windows: if steps == 4 { 1 } else { 2 },
        max_window_steps: if steps == 8 { 3 } else { 2 },
        overlap_prob: 0.3,
        depot_prob: 0.3,
    }
}

/// The first instance at or after `seed` whose cost model has at most
/// [`ORACLE_BINARIES`] free binaries.
pub fn oracle_fixture(seed: u64) -> (u64, Instance) {
    let mut s = seed;
    loop {
        let inst = generate_synthetic(&tiny_spec(s)).expect("spec is consistent");
        let pm = build_plan(&inst, BuildOptions::default(), PlanObjective::MinCost { target: 0 }).unwrap();
        if pm.ir.free_integer_vars().len() <= ORACLE_BINARIES {
            return (s, inst);
        }
        s += 1_000;
    }
}

/// A truck as `(stop_fraction, consumption)` per step.
pub type TruckRows = (Vec<f64>, Vec<f64>);

/// Hand-built instance: public truck stops, substations with the given
/// remaining capacities, explicit access triples and `(j, k, miles)` links.
pub fn hand_instance(
    grid: TimeGrid,
    trucks: &[TruckRows],
    stations: usize,
    substations: &[f64],
    access: &[(usize, usize, usize)],
    links: &[(usize, usize, f64)],
) -> Instance {
    let costs = CostBook::default();
    let origin = GeoPoint::new(-118.25, 33.80);
    Instance {
        grid,
        trucks: trucks
            .iter()
            .enumerate()
            .map(|(i, (r, c))| TruckProfile {
                id: format!("truck-{i}"),
                stop_fraction: r.clone(),
                consumption: c.clone(),
                diesel_emission: 1.7 * c.iter().sum::<f64>() / 2.0,
                position: None,
            })
            .collect(),
        stations: (0..stations)
            .map(|j| StationSite {
                id: format!("site-{j}"),
                kind: SiteKind::TruckStop,
                location: origin,
                owner_truck_ids: BTreeSet::new(),
            })
            .collect(),
        substations: substations
            .iter()
            .enumerate()
            .map(|(k, &cap)| SubstationNode {
                id: format!("sub-{k}"),
                location: origin,
                remaining_capacity: cap,
            })
            .collect(),
        access: AccessMatrix {
            truck_station: access.iter().copied().collect(),
            station_substation: links
                .iter()
                .map(|&(station, substation, distance_miles)| StationLink {
                    station,
                    substation,
                    distance_miles,
                })
                .collect(),
            max_substation_neighbors: 5,
        },
        params: GridParams::with_grid(&grid, &costs),
        costs,
    }
}
