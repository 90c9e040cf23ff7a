//! CSV readers and the traces-to-instance pipeline.

use std::collections::BTreeMap;
use std::io::Read;

use chrono::{DateTime, FixedOffset, NaiveDateTime};
use serde::Deserialize;

use crate::costs::CostBook;
use crate::domain::{GeoPoint, GridParams, Instance, SiteKind, StationSite, SubstationNode, TimeGrid};
use crate::error::PipelineError;
use crate::pipeline::access::{build_access_matrix, DEFAULT_ACCESS_RADIUS_MI, DEFAULT_K_NEAREST};
use crate::pipeline::cluster::{cluster_depots, DEFAULT_DEPOT_RADIUS_FT};
use crate::pipeline::downsample::{day_start_of, downsample, DownsampleOptions};
use crate::pipeline::trace::{
    classify_stops, RawTrace, TraceSample, DEFAULT_MIN_STOP_MIN, DEFAULT_SPEED_THRESH_MPH,
};

pub fn parse_timestamp(s: &str) -> Option<DateTime<FixedOffset>> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t);
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M"] {
        if let Ok(n) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(n.and_utc().fixed_offset());
        }
    }
    None
}

#[derive(Deserialize)]
struct TraceRow {
    truck_id: String,
    #[serde(alias = "timestamp_iso8601")]
    timestamp: String,
    lon: f64,
    lat: f64,
}

/// Reads `truck_id,timestamp,lon,lat` rows. Rows of one truck may be
/// interleaved with others but must be in time order; traces come out
/// sorted by truck id.
pub fn read_traces<R: Read>(input: R) -> Result<Vec<RawTrace>, PipelineError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut by_truck: BTreeMap<String, Vec<TraceSample>> = BTreeMap::new();
    for (k, row) in rdr.deserialize::<TraceRow>().enumerate() {
        let row = row?;
        let time = parse_timestamp(&row.timestamp).ok_or_else(|| PipelineError::Csv {
            line: k + 2,
            msg: format!("bad timestamp `{}`", row.timestamp),
        })?;
        by_truck.entry(row.truck_id).or_default().push(TraceSample {
            time,
            pos: GeoPoint::new(row.lon, row.lat),
        });
    }
    by_truck.into_iter().map(|(id, s)| RawTrace::new(id, s)).collect()
}

#[derive(Deserialize)]
struct SiteRow {
    id: String,
    kind: String,
    lon: f64,
    lat: f64,
}

/// Reads `id,kind,lon,lat`; kinds are `depot`, `truck-stop`, `intermodal`.
pub fn read_sites<R: Read>(input: R) -> Result<Vec<(String, SiteKind, GeoPoint)>, PipelineError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut out = Vec::new();
    for (k, row) in rdr.deserialize::<SiteRow>().enumerate() {
        let row = row?;
        let kind = SiteKind::parse(&row.kind).ok_or_else(|| PipelineError::Csv {
            line: k + 2,
            msg: format!("unknown site kind `{}`", row.kind),
        })?;
        out.push((row.id, kind, GeoPoint::new(row.lon, row.lat)));
    }
    Ok(out)
}

#[derive(Deserialize)]
struct SubRow {
    id: String,
    lon: f64,
    lat: f64,
    capacity_kw: f64,
}

pub fn read_substations<R: Read>(input: R) -> Result<Vec<SubstationNode>, PipelineError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut out = Vec::new();
    for row in rdr.deserialize::<SubRow>() {
        let row = row?;
        out.push(SubstationNode {
            id: row.id,
            location: GeoPoint::new(row.lon, row.lat),
            remaining_capacity: row.capacity_kw,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestOptions {
    pub grid: TimeGrid,
    pub speed_thresh_mph: f64,
    pub min_stop_min: f64,
    pub kwh_per_mile: f64,
    pub depot_radius_ft: f64,
    pub access_radius_mi: f64,
    pub k_nearest: usize,
    pub costs: CostBook,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            grid: TimeGrid::default(),
            speed_thresh_mph: DEFAULT_SPEED_THRESH_MPH,
            min_stop_min: DEFAULT_MIN_STOP_MIN,
            kwh_per_mile: crate::pipeline::downsample::DEFAULT_KWH_PER_MILE,
            depot_radius_ft: DEFAULT_DEPOT_RADIUS_FT,
            access_radius_mi: DEFAULT_ACCESS_RADIUS_MI,
            k_nearest: DEFAULT_K_NEAREST,
            costs: CostBook::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IngestResult {
    pub instance: Instance,
    pub warnings: Vec<String>,
    /// Share of trucks with no step they could charge in.
    pub share_without_access: f64,
}

/// Stop detection, resampling, depot clustering and access for a set of
/// traces. Public sites come from `sites`; depot rows there are ignored in
/// favor of clustered depots.
pub fn ingest(
    traces: &[RawTrace],
    sites: &[(String, SiteKind, GeoPoint)],
    substations: Vec<SubstationNode>,
    opts: &IngestOptions,
) -> Result<IngestResult, PipelineError> {
    let mut warnings = Vec::new();
    let mut profiles = Vec::new();
    let mut depot_points = Vec::new();
    for tr in traces {
        let labeled = classify_stops(tr, opts.speed_thresh_mph, opts.min_stop_min);
        let day = day_start_of(&labeled).ok_or_else(|| PipelineError::Trace {
            truck: tr.truck_id.clone(),
            msg: "empty trace".into(),
        })?;
        let mut dopt = DownsampleOptions::new(opts.grid, day);
        dopt.kwh_per_mile = opts.kwh_per_mile;
        dopt.speed_thresh_mph = opts.speed_thresh_mph;
        let d = downsample(&labeled, &dopt)?;
        warnings.extend(d.warnings);
        if let Some(p) = labeled.longest_stop() {
            depot_points.push((tr.truck_id.clone(), p));
        }
        profiles.push(d.profile);
    }

    let mut stations: Vec<StationSite> = Vec::new();
    for (id, kind, loc) in sites {
        if *kind == SiteKind::Depot {
            warnings.push(format!("site `{id}`: listed depots are replaced by clustered depots"));
            continue;
        }
        stations.push(StationSite {
            id: id.clone(),
            kind: *kind,
            location: *loc,
            owner_truck_ids: Default::default(),
        });
    }
    stations.extend(cluster_depots(&depot_points, opts.depot_radius_ft));

    let access = build_access_matrix(&profiles, &stations, &substations, opts.access_radius_mi, opts.k_nearest);
    let mut reach = vec![false; profiles.len()];
    for &(i, _, _) in &access.truck_station {
        reach[i] = true;
    }
    let share_without_access = if profiles.is_empty() {
        0.0
    } else {
        reach.iter().filter(|r| !**r).count() as f64 / profiles.len() as f64
    };
    let params = GridParams::with_grid(&opts.grid, &opts.costs);
    Ok(IngestResult {
        instance: Instance {
            grid: opts.grid,
            trucks: profiles,
            stations,
            substations,
            access,
            params,
            costs: opts.costs.clone(),
        },
        warnings,
        share_without_access,
    })
}
