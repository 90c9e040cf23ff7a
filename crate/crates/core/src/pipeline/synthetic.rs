//! Seeded desk-scale instances for tests and demos.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::costs::CostBook;
use crate::domain::{
    haversine_miles, AccessMatrix, GeoPoint, GridParams, Instance, SiteKind, StationLink, StationSite,
    SubstationNode, TimeGrid, TruckProfile,
};
use crate::error::PipelineError;
use crate::pipeline::downsample::{DEFAULT_DIESEL_KG_PER_MILE, DEFAULT_KWH_PER_MILE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub trucks: usize,
    pub stations: usize,
    pub substations: usize,
    pub steps: usize,
    pub seed: u64,
    /// Side of the square holding all sites, in miles.
    pub extent_miles: f64,
    /// Daily consumption per truck is drawn from this range (kWh).
    pub demand_kwh: (f64, f64),
    pub capacity_kw: (f64, f64),
    pub k_nearest: usize,
    /// Parked windows per truck, at most.
    pub max_windows: usize,
    /// Longest parked window in steps.
    pub max_window_steps: usize,
    /// Chance that a parked window also reaches a second station.
    pub overlap_prob: f64,
    /// Chance that a station visited by trucks is a private depot.
    pub depot_prob: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            trucks: 3,
            stations: 2,
            substations: 1,
            steps: 8,
            seed: 0,
            extent_miles: 10.0,
            demand_kwh: (100.0, 500.0),
            capacity_kw: (50.0, 400.0),
            k_nearest: 1,
            max_windows: 2,
            max_window_steps: 3,
            overlap_prob: 0.25,
            depot_prob: 0.3,
        }
    }
}

impl SyntheticSpec {
    fn check(&self) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::Spec(m.to_string()));
        if self.steps < 2 {
            return bad("need at least 2 steps");
        }
        if self.demand_kwh.0 < 0.0 || self.demand_kwh.0 > self.demand_kwh.1 {
            return bad("demand range must be non-negative and ordered");
        }
        if self.capacity_kw.0 < 0.0 || self.capacity_kw.0 > self.capacity_kw.1 {
            return bad("capacity range must be non-negative and ordered");
        }
        if self.demand_kwh.1 > 0.0 && self.trucks > 0 && self.stations == 0 {
            return bad("trucks with demand need at least one station");
        }
        if self.max_windows == 0 || self.max_window_steps == 0 {
            return bad("each truck needs a parked window");
        }
        if self.max_windows * (self.max_window_steps + 1) > self.steps && self.demand_kwh.1 > 0.0 {
            // Windows must leave room for driving steps in between.
            return bad("parked windows do not fit in the day with driving between them");
        }
        if !(0.0..=1.0).contains(&self.overlap_prob) || !(0.0..=1.0).contains(&self.depot_prob) {
            return bad("probabilities must be in [0, 1]");
        }
        Ok(())
    }
}

const ORIGIN: GeoPoint = GeoPoint {
    lon: -118.25,
    lat: 33.80,
};

fn offset(miles_e: f64, miles_n: f64) -> GeoPoint {
    let lat = ORIGIN.lat + miles_n / 69.0;
    let lon = ORIGIN.lon + miles_e / (69.0 * ORIGIN.lat.to_radians().cos());
    GeoPoint::new(lon, lat)
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// A valid instance: each truck alternates between parked windows at
/// stations and driving steps that carry all of its consumption.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Instance, PipelineError> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let grid = TimeGrid::daily(spec.steps)?;
    let ext = spec.extent_miles;

    let stations_at: Vec<GeoPoint> = (0..spec.stations)
        .map(|_| offset(rng.gen_range(0.0..=ext), rng.gen_range(0.0..=ext)))
        .collect();
    let substations: Vec<SubstationNode> = (0..spec.substations)
        .map(|k| SubstationNode {
            id: format!("sub-{k}"),
            location: offset(rng.gen_range(0.0..=ext), rng.gen_range(0.0..=ext)),
            remaining_capacity: draw(&mut rng, spec.capacity_kw).round(),
        })
        .collect();

    let mut trucks = Vec::with_capacity(spec.trucks);
    let mut visits: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..spec.trucks {
        let n = spec.steps;
        let windows = rng.gen_range(1..=spec.max_windows);
        let mut starts: Vec<usize> = (0..n).collect();
        starts.shuffle(&mut rng);
        let mut parked = vec![None::<Vec<usize>>; n];
        let mut placed = 0;
        for &s in &starts {
            if placed == windows {
                break;
            }
            let len = rng.gen_range(1..=spec.max_window_steps);
            // Keep a driving step on both sides of every window.
            let span: Vec<usize> = (0..len + 2).map(|d| (s + n - 1 + d) % n).collect();
            if span.iter().any(|&t| parked[t].is_some()) || len + 2 > n {
                continue;
            }
            let mut at = vec![rng.gen_range(0..spec.stations.max(1))];
            if spec.stations >= 2 && rng.gen_bool(spec.overlap_prob) {
                let other = (at[0] + rng.gen_range(1..spec.stations)) % spec.stations;
                at.push(other);
                at.sort_unstable();
            }
            for &t in &span[1..=len] {
                parked[t] = Some(at.clone());
            }
            placed += 1;
        }
        let mut stop_fraction = vec![0.0; n];
        let mut consumption = vec![0.0; n];
        let driving: Vec<usize> = (0..n).filter(|&t| parked[t].is_none()).collect();
        let demand = draw(&mut rng, spec.demand_kwh).round();
        for (t, p) in parked.iter().enumerate() {
            if let Some(at) = p {
                stop_fraction[t] = 1.0;
                if spec.stations > 0 {
                    visits.extend(at.iter().map(|&j| (i, j, t)));
                }
            }
        }
        if !driving.is_empty() {
            let weights: Vec<f64> = driving.iter().map(|_| rng.gen_range(0.5..1.5)).collect();
            let total: f64 = weights.iter().sum();
            for (&t, w) in driving.iter().zip(&weights) {
                consumption[t] = demand * w / total;
                stop_fraction[t] = if rng.gen_bool(0.3) { 0.25 } else { 0.0 };
            }
        }
        let miles = demand / DEFAULT_KWH_PER_MILE;
        trucks.push(TruckProfile {
            id: format!("truck-{i}"),
            stop_fraction,
            consumption,
            diesel_emission: (miles * DEFAULT_DIESEL_KG_PER_MILE * 100.0).round() / 100.0,
            position: None,
        });
    }

    let kinds = [SiteKind::TruckStop, SiteKind::Intermodal];
    let stations: Vec<StationSite> = stations_at
        .iter()
        .enumerate()
        .map(|(j, &loc)| {
            let owners: BTreeSet<String> =
                visits.iter().filter(|v| v.1 == j).map(|v| trucks[v.0].id.clone()).collect();
            let depot = !owners.is_empty() && rng.gen_bool(spec.depot_prob);
            StationSite {
                id: format!("site-{j}"),
                kind: if depot { SiteKind::Depot } else { kinds[j % 2] },
                location: loc,
                owner_truck_ids: if depot { owners } else { BTreeSet::new() },
            }
        })
        .collect();

    let mut access = AccessMatrix::new(spec.k_nearest);
    access.truck_station.extend(visits);
    for (j, s) in stations.iter().enumerate() {
        let mut d: Vec<(f64, usize)> = substations
            .iter()
            .enumerate()
            .map(|(k, sub)| (haversine_miles(s.location, sub.location), k))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut near: Vec<_> = d.into_iter().take(spec.k_nearest).collect();
        near.sort_by_key(|x| x.1);
        for (dist, k) in near {
            access.station_substation.push(StationLink {
                station: j,
                substation: k,
                distance_miles: (dist * 1000.0).round() / 1000.0,
            });
        }
    }

    let costs = CostBook::default();
    let params = GridParams::with_grid(&grid, &costs);
    Ok(Instance {
        grid,
        trucks,
        stations,
        substations,
        access,
        params,
        costs,
    })
}
