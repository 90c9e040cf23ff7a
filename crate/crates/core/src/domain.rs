//! Planning data: the cyclic time grid, trucks, candidate sites, substations
//! and the access relation between them.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::costs::CostBook;
use crate::error::DomainError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MAX_SUBSTATION_NEIGHBORS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub step_count: usize,
    pub step_hours: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            step_count: 96,
            step_hours: 0.25,
        }
    }
}

impl TimeGrid {
    pub fn new(step_count: usize, step_hours: f64) -> Result<Self, DomainError> {
        let g = TimeGrid {
            step_count,
            step_hours,
        };
        match g.problems().into_iter().next() {
            Some(msg) => Err(DomainError::InvalidGrid(msg)),
            None => Ok(g),
        }
    }

    /// A grid covering one day with `step_count` equal steps.
    pub fn daily(step_count: usize) -> Result<Self, DomainError> {
        Self::new(step_count, 24.0 / step_count.max(1) as f64)
    }

    fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.step_count < 2 {
            out.push(format!("step_count {} is below 2", self.step_count));
        }
        if !(self.step_hours > 0.0 && self.step_hours.is_finite()) {
            out.push(format!("step_hours {} must be positive", self.step_hours));
        }
        if self.step_count as f64 * self.step_hours > 24.0 + 1e-9 {
            out.push(format!(
                "{} steps of {} h exceed one day",
                self.step_count, self.step_hours
            ));
        }
        out
    }

    pub fn next(&self, t: usize) -> Result<usize, DomainError> {
        next_time(self, t)
    }

    pub(crate) fn succ(&self, t: usize) -> usize {
        if t + 1 == self.step_count {
            0
        } else {
            t + 1
        }
    }

    pub fn horizon_hours(&self) -> f64 {
        self.step_count as f64 * self.step_hours
    }

    /// Hour of day at the middle of step `t`.
    pub fn midpoint_hour(&self, t: usize) -> f64 {
        (t as f64 + 0.5) * self.step_hours
    }
}

/// Cyclic successor: the step after the last one is the first.
pub fn next_time(grid: &TimeGrid, t: usize) -> Result<usize, DomainError> {
    if t >= grid.step_count {
        return Err(DomainError::StepOutOfRange {
            t,
            steps: grid.step_count,
        });
    }
    Ok(grid.succ(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lon: f64,
    pub lat: f64,
}

impl GeoPoint {
    pub fn new(lon: f64, lat: f64) -> Self {
        GeoPoint { lon, lat }
    }
}

const EARTH_RADIUS_MILES: f64 = 3958.7613;

/// Great-circle distance in miles.
pub fn haversine_miles(a: GeoPoint, b: GeoPoint) -> f64 {
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dp = p2 - p1;
    let dl = (b.lon - a.lon).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_MILES * h.sqrt().min(1.0).asin()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruckProfile {
    pub id: String,
    pub stop_fraction: Vec<f64>,
    /// kWh consumed while driving in each step.
    pub consumption: Vec<f64>,
    /// kg CO2 per day when running on diesel.
    pub diesel_emission: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Vec<GeoPoint>>,
}

impl TruckProfile {
    pub fn daily_consumption(&self) -> f64 {
        self.consumption.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SiteKind {
    Depot,
    TruckStop,
    Intermodal,
}

impl SiteKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SiteKind::Depot => "depot",
            SiteKind::TruckStop => "truck-stop",
            SiteKind::Intermodal => "intermodal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "depot" => Some(SiteKind::Depot),
            "truck-stop" | "truckstop" => Some(SiteKind::TruckStop),
            "intermodal" => Some(SiteKind::Intermodal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationSite {
    pub id: String,
    pub kind: SiteKind,
    pub location: GeoPoint,
    #[serde(default)]
    pub owner_truck_ids: BTreeSet<String>,
}

impl StationSite {
    pub fn is_public(&self) -> bool {
        self.owner_truck_ids.is_empty()
    }

    pub fn admits(&self, truck_id: &str) -> bool {
        self.is_public() || self.owner_truck_ids.contains(truck_id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubstationNode {
    pub id: String,
    pub location: GeoPoint,
    /// Remaining hosting capacity in kW.
    pub remaining_capacity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationLink {
    pub station: usize,
    pub substation: usize,
    pub distance_miles: f64,
}

/// Sparse access relation, held by position in the instance's lists.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AccessMatrix {
    /// `(truck, station, step)` triples with `a = 1`.
    pub truck_station: BTreeSet<(usize, usize, usize)>,
    pub station_substation: Vec<StationLink>,
    pub max_substation_neighbors: usize,
}

impl AccessMatrix {
    pub fn new(max_substation_neighbors: usize) -> Self {
        AccessMatrix {
            max_substation_neighbors,
            ..Default::default()
        }
    }

    pub fn has(&self, i: usize, j: usize, t: usize) -> bool {
        self.truck_station.contains(&(i, j, t))
    }

    pub fn len(&self) -> usize {
        self.truck_station.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truck_station.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub p_max: f64,
    pub e_base: f64,
    pub soc_min: f64,
    pub soc_max: f64,
    pub kappa: f64,
    pub pf: f64,
    /// Standard transformer rating in kVA.
    pub p_upg_std: f64,
    pub days_per_year: f64,
    pub tou_price: Vec<f64>,
    pub carbon_intensity: Vec<f64>,
}

/// Flat grid carbon intensity used when none is supplied, kg CO2/kWh.
pub const DEFAULT_CARBON_INTENSITY: f64 = 0.25;

impl GridParams {
    pub fn with_grid(grid: &TimeGrid, costs: &CostBook) -> Self {
        GridParams {
            p_max: 1000.0,
            e_base: 900.0,
            soc_min: 0.10,
            soc_max: 1.00,
            kappa: 0.95,
            pf: 0.95,
            p_upg_std: 28_000.0,
            days_per_year: 365.0,
            tou_price: costs.tou.prices(grid),
            carbon_intensity: vec![DEFAULT_CARBON_INTENSITY; grid.step_count],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub grid: TimeGrid,
    pub trucks: Vec<TruckProfile>,
    pub stations: Vec<StationSite>,
    pub substations: Vec<SubstationNode>,
    pub access: AccessMatrix,
    pub params: GridParams,
    pub costs: CostBook,
}

impl Instance {
    pub fn truck_index(&self) -> BTreeMap<&str, usize> {
        self.trucks.iter().enumerate().map(|(i, t)| (t.id.as_str(), i)).collect()
    }

    /// Copy with every substation capacity multiplied by `fraction`.
    pub fn with_capacity_fraction(&self, fraction: f64) -> Instance {
        let mut out = self.clone();
        for k in &mut out.substations {
            k.remaining_capacity *= fraction;
        }
        out
    }

    pub fn total_diesel_emission(&self) -> f64 {
        self.trucks.iter().map(|t| t.diesel_emission).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceDoc::from(self)).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, DomainError> {
        let doc: InstanceDoc = serde_json::from_str(s)?;
        doc.into_instance()
    }

    pub fn save(&self, path: &Path) -> Result<(), DomainError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, DomainError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    schema: u32,
    grid: TimeGrid,
    trucks: Vec<TruckProfile>,
    stations: Vec<StationSite>,
    substations: Vec<SubstationNode>,
    access: AccessDoc,
    params: GridParams,
    costs: CostBook,
}

#[derive(Serialize, Deserialize)]
struct AccessDoc {
    truck_station: Vec<(String, String, usize)>,
    station_substation: Vec<LinkDoc>,
    #[serde(default = "default_neighbors")]
    max_substation_neighbors: usize,
}

fn default_neighbors() -> usize {
    DEFAULT_MAX_SUBSTATION_NEIGHBORS
}

#[derive(Serialize, Deserialize)]
struct LinkDoc {
    station: String,
    substation: String,
    distance_miles: f64,
}

impl From<&Instance> for InstanceDoc {
    fn from(inst: &Instance) -> Self {
        let a = &inst.access;
        InstanceDoc {
            schema: SCHEMA_VERSION,
            grid: inst.grid,
            trucks: inst.trucks.clone(),
            stations: inst.stations.clone(),
            substations: inst.substations.clone(),
            access: AccessDoc {
                truck_station: a
                    .truck_station
                    .iter()
                    .map(|&(i, j, t)| (inst.trucks[i].id.clone(), inst.stations[j].id.clone(), t))
                    .collect(),
                station_substation: a
                    .station_substation
                    .iter()
                    .map(|l| LinkDoc {
                        station: inst.stations[l.station].id.clone(),
                        substation: inst.substations[l.substation].id.clone(),
                        distance_miles: l.distance_miles,
                    })
                    .collect(),
                max_substation_neighbors: a.max_substation_neighbors,
            },
            params: inst.params.clone(),
            costs: inst.costs.clone(),
        }
    }
}

fn index_of<'a>(
    kind: &'static str,
    ids: impl Iterator<Item = &'a str>,
) -> Result<BTreeMap<&'a str, usize>, DomainError> {
    let mut out = BTreeMap::new();
    for (k, id) in ids.enumerate() {
        if out.insert(id, k).is_some() {
            return Err(DomainError::DuplicateId {
                kind,
                id: id.to_string(),
            });
        }
    }
    Ok(out)
}

fn lookup(map: &BTreeMap<&str, usize>, kind: &'static str, id: &str) -> Result<usize, DomainError> {
    map.get(id).copied().ok_or_else(|| DomainError::UnknownId {
        kind,
        id: id.to_string(),
    })
}

impl InstanceDoc {
    fn into_instance(self) -> Result<Instance, DomainError> {
        if self.schema != SCHEMA_VERSION {
            return Err(DomainError::Schema(self.schema));
        }
        let access = {
            let ti = index_of("truck", self.trucks.iter().map(|t| t.id.as_str()))?;
            let si = index_of("station", self.stations.iter().map(|s| s.id.as_str()))?;
            let ki = index_of("substation", self.substations.iter().map(|s| s.id.as_str()))?;
            let mut a = AccessMatrix::new(self.access.max_substation_neighbors);
            for (tr, st, t) in &self.access.truck_station {
                a.truck_station
                    .insert((lookup(&ti, "truck", tr)?, lookup(&si, "station", st)?, *t));
            }
            for l in &self.access.station_substation {
                a.station_substation.push(StationLink {
                    station: lookup(&si, "station", &l.station)?,
                    substation: lookup(&ki, "substation", &l.substation)?,
                    distance_miles: l.distance_miles,
                });
            }
            a
        };
        Ok(Instance {
            grid: self.grid,
            trucks: self.trucks,
            stations: self.stations,
            substations: self.substations,
            access,
            params: self.params,
            costs: self.costs,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub entity: String,
    pub id: String,
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn len(&self) -> usize {
        self.issues.len()
    }

    fn push(&mut self, entity: &str, id: &str, field: impl Into<String>, message: impl Into<String>) {
        self.issues.push(ValidationIssue {
            entity: entity.to_string(),
            id: id.to_string(),
            field: field.into(),
            message: message.into(),
        });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.issues {
            writeln!(f, "{} {} {}: {}", v.entity, v.id, v.field, v.message)?;
        }
        Ok(())
    }
}

fn finite_nonneg(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

/// Lists every broken invariant. Never fails: problems are data.
pub fn validate_instance(inst: &Instance) -> ValidationReport {
    let mut r = ValidationReport::default();
    let n = inst.grid.step_count;
    for msg in inst.grid.problems() {
        r.push("grid", "", "step_count", msg);
    }

    let mut seen = HashSet::new();
    for tr in &inst.trucks {
        if !seen.insert(tr.id.as_str()) {
            r.push("truck", &tr.id, "id", "duplicate id");
        }
        if tr.stop_fraction.len() != n {
            r.push("truck", &tr.id, "stop_fraction", format!("length {} != {n}", tr.stop_fraction.len()));
        }
        if tr.consumption.len() != n {
            r.push("truck", &tr.id, "consumption", format!("length {} != {n}", tr.consumption.len()));
        }
        for (t, &s) in tr.stop_fraction.iter().enumerate() {
            if !(0.0..=1.0).contains(&s) {
                r.push("truck", &tr.id, format!("stop_fraction[{t}]"), format!("{s} outside [0,1]"));
            }
        }
        for (t, &c) in tr.consumption.iter().enumerate() {
            if !finite_nonneg(c) {
                r.push("truck", &tr.id, format!("consumption[{t}]"), format!("{c} is negative"));
            } else if c > 0.0 && tr.stop_fraction.get(t) == Some(&1.0) {
                r.push("truck", &tr.id, format!("consumption[{t}]"), "consumption while fully stopped");
            }
        }
        if !finite_nonneg(tr.diesel_emission) {
            r.push("truck", &tr.id, "diesel_emission", "must be non-negative");
        }
        if let Some(p) = &tr.position {
            if p.len() != n {
                r.push("truck", &tr.id, "position", format!("length {} != {n}", p.len()));
            }
        }
    }

    let truck_ids: HashSet<&str> = inst.trucks.iter().map(|t| t.id.as_str()).collect();
    let mut seen = HashSet::new();
    for s in &inst.stations {
        if !seen.insert(s.id.as_str()) {
            r.push("station", &s.id, "id", "duplicate id");
        }
        match s.kind {
            SiteKind::Depot if s.owner_truck_ids.is_empty() => {
                r.push("station", &s.id, "owner_truck_ids", "depot without owners")
            }
            SiteKind::TruckStop | SiteKind::Intermodal if !s.owner_truck_ids.is_empty() => {
                r.push("station", &s.id, "owner_truck_ids", "public site with owners")
            }
            _ => {}
        }
        for o in &s.owner_truck_ids {
            if !truck_ids.contains(o.as_str()) {
                r.push("station", &s.id, "owner_truck_ids", format!("unknown truck `{o}`"));
            }
        }
    }

    let mut seen = HashSet::new();
    for k in &inst.substations {
        if !seen.insert(k.id.as_str()) {
            r.push("substation", &k.id, "id", "duplicate id");
        }
        if !finite_nonneg(k.remaining_capacity) {
            r.push("substation", &k.id, "remaining_capacity", "must be non-negative");
        }
    }

    let a = &inst.access;
    for &(i, j, t) in &a.truck_station {
        let key = format!("[{i},{j},{t}]");
        let Some(tr) = inst.trucks.get(i) else {
            r.push("access", &key, "truck", "truck index out of range");
            continue;
        };
        let Some(st) = inst.stations.get(j) else {
            r.push("access", &key, "station", "station index out of range");
            continue;
        };
        if t >= n {
            r.push("access", &key, "t", "step out of range");
            continue;
        }
        if tr.stop_fraction.get(t).copied().unwrap_or(0.0) <= 0.0 {
            r.push("access", &key, "truck_station", "access without stop");
        }
        if !st.admits(&tr.id) {
            r.push("access", &key, "truck_station", "private site of another fleet");
        }
    }
    let mut degree = vec![0usize; inst.stations.len()];
    let mut pairs = HashSet::new();
    for l in &a.station_substation {
        let key = format!("[{},{}]", l.station, l.substation);
        if l.station >= inst.stations.len() || l.substation >= inst.substations.len() {
            r.push("access", &key, "station_substation", "index out of range");
            continue;
        }
        if !pairs.insert((l.station, l.substation)) {
            r.push("access", &key, "station_substation", "duplicate link");
        }
        degree[l.station] += 1;
        if !finite_nonneg(l.distance_miles) {
            r.push("access", &key, "distance_miles", "must be non-negative");
        }
    }
    for (j, &d) in degree.iter().enumerate() {
        if d > a.max_substation_neighbors {
            r.push(
                "station",
                &inst.stations[j].id,
                "station_substation",
                format!("{d} substation neighbors exceed {}", a.max_substation_neighbors),
            );
        }
    }

    let p = &inst.params;
    if !(p.p_max > 0.0 && p.p_max.is_finite()) {
        r.push("params", "", "p_max", "must be positive");
    }
    if !finite_nonneg(p.e_base) {
        r.push("params", "", "e_base", "must be non-negative");
    }
    if !(0.0 <= p.soc_min && p.soc_min < p.soc_max && p.soc_max <= 1.0) {
        r.push("params", "", "soc_min", "need 0 <= soc_min < soc_max <= 1");
    }
    if !(p.kappa > 0.0 && p.kappa <= 1.0) {
        r.push("params", "", "kappa", "need 0 < kappa <= 1");
    }
    if !(p.pf > 0.0 && p.pf <= 1.0) {
        r.push("params", "", "pf", "need 0 < pf <= 1");
    }
    if !finite_nonneg(p.p_upg_std) {
        r.push("params", "", "p_upg_std", "must be non-negative");
    }
    if !(p.days_per_year > 0.0) {
        r.push("params", "", "days_per_year", "must be positive");
    }
    if p.tou_price.len() != n {
        r.push("params", "", "tou_price", format!("length {} != {n}", p.tou_price.len()));
    }
    if p.carbon_intensity.len() != n {
        r.push("params", "", "carbon_intensity", format!("length {} != {n}", p.carbon_intensity.len()));
    }
    if p.tou_price.iter().chain(&p.carbon_intensity).any(|&v| !finite_nonneg(v)) {
        r.push("params", "", "tou_price", "tariff and intensity must be non-negative");
    }
    for (field, v) in inst.costs.coefficients() {
        if !finite_nonneg(v) {
            r.push("costs", "", field, "must be non-negative");
        }
    }
    r
}

/// Index sets derived from the access relation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Subsets {
    /// `j_it[i][t]`: stations truck `i` can use at `t`, ascending.
    pub j_it: Vec<Vec<Vec<usize>>>,
    /// `i_jt[j][t]`: trucks that can use station `j` at `t`, ascending.
    pub i_jt: Vec<Vec<Vec<usize>>>,
    /// `k_j[j]`: substation neighbors of `j` with line length, ascending by substation.
    pub k_j: Vec<Vec<(usize, f64)>>,
    /// `j_k[k]`: stations that may connect to `k`, ascending.
    pub j_k: Vec<Vec<usize>>,
}

impl Subsets {
    /// True when any truck can reach station `j` at some step.
    pub fn station_active(&self, j: usize) -> bool {
        self.i_jt[j].iter().any(|s| !s.is_empty())
    }

    pub fn max_simultaneous(&self, j: usize) -> usize {
        self.i_jt[j].iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn derive_subsets(
    access: &AccessMatrix,
    trucks: usize,
    stations: usize,
    substations: usize,
    steps: usize,
) -> Subsets {
    let mut s = Subsets {
        j_it: vec![vec![Vec::new(); steps]; trucks],
        i_jt: vec![vec![Vec::new(); steps]; stations],
        k_j: vec![Vec::new(); stations],
        j_k: vec![Vec::new(); substations],
    };
    // BTreeSet iteration is (i, j, t)-ordered, so both lists come out sorted.
    for &(i, j, t) in &access.truck_station {
        s.j_it[i][t].push(j);
        s.i_jt[j][t].push(i);
    }
    for l in &access.station_substation {
        s.k_j[l.station].push((l.substation, l.distance_miles));
        s.j_k[l.substation].push(l.station);
    }
    for k in &mut s.k_j {
        k.sort_by_key(|&(sub, _)| sub);
    }
    for j in &mut s.j_k {
        j.sort_unstable();
        j.dedup();
    }
    s
}

impl Instance {
    pub fn subsets(&self) -> Subsets {
        derive_subsets(
            &self.access,
            self.trucks.len(),
            self.stations.len(),
            self.substations.len(),
            self.grid.step_count,
        )
    }
}
