//! Resampling a labeled trace onto the planning grid.

use chrono::{DateTime, Duration, FixedOffset};

use crate::domain::{GeoPoint, TimeGrid, TruckProfile};
use crate::error::PipelineError;
use crate::pipeline::trace::{hours_between, Activity, LabeledTrace, DEFAULT_SPEED_THRESH_MPH};

pub const DEFAULT_KWH_PER_MILE: f64 = 2.0;
/// Diesel tailpipe CO2 per mile for a loaded drayage tractor.
pub const DEFAULT_DIESEL_KG_PER_MILE: f64 = 1.7;

#[derive(Debug, Clone, PartialEq)]
pub struct DownsampleOptions {
    pub grid: TimeGrid,
    pub day_start: DateTime<FixedOffset>,
    pub kwh_per_mile: f64,
    pub diesel_kg_per_mile: f64,
    pub speed_thresh_mph: f64,
}

impl DownsampleOptions {
    pub fn new(grid: TimeGrid, day_start: DateTime<FixedOffset>) -> Self {
        DownsampleOptions {
            grid,
            day_start,
            kwh_per_mile: DEFAULT_KWH_PER_MILE,
            diesel_kg_per_mile: DEFAULT_DIESEL_KG_PER_MILE,
            speed_thresh_mph: DEFAULT_SPEED_THRESH_MPH,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Downsampled {
    pub profile: TruckProfile,
    pub step_miles: Vec<f64>,
    pub step_stop_hours: Vec<f64>,
    /// Distance and stopped time of the trace inside the grid's window.
    pub window_miles: f64,
    pub window_stop_hours: f64,
    pub warnings: Vec<String>,
}

/// Midnight (in the trace's own offset) of the first sample's date.
pub fn day_start_of(labeled: &LabeledTrace) -> Option<DateTime<FixedOffset>> {
    let t = labeled.trace.samples.first()?.time;
    let midnight = t.date_naive().and_hms_opt(0, 0, 0)?;
    midnight.and_local_timezone(*t.offset()).single()
}

/// Each step takes the time share spent in qualified stops and the
/// distance travelled, spreading every interval's distance uniformly over
/// its duration.
pub fn downsample(labeled: &LabeledTrace, opts: &DownsampleOptions) -> Result<Downsampled, PipelineError> {
    let tr = &labeled.trace;
    let g = &opts.grid;
    let err = |msg: String| PipelineError::Trace {
        truck: tr.truck_id.clone(),
        msg,
    };
    let (Some(first), Some(last)) = (tr.samples.first(), tr.samples.last()) else {
        return Err(err("empty trace".into()));
    };
    let window_end = opts.day_start + Duration::milliseconds((g.horizon_hours() * 3.6e6).round() as i64);
    if first.time > opts.day_start || last.time < window_end {
        return Err(err(format!(
            "trace {} .. {} does not span {} .. {}",
            first.time, last.time, opts.day_start, window_end
        )));
    }

    let n = g.step_count;
    let at = |t0: DateTime<FixedOffset>| hours_between(opts.day_start, t0);
    let mut step_miles = vec![0.0; n];
    let mut step_stop = vec![0.0; n];
    let mut window_miles = 0.0;
    let mut window_stop = 0.0;
    let mut warnings = Vec::new();
    for k in 0..tr.samples.len() - 1 {
        let (a, b) = (at(tr.samples[k].time), at(tr.samples[k + 1].time));
        let (lo, hi) = (a.max(0.0), b.min(g.horizon_hours()));
        if hi <= lo {
            continue;
        }
        let len = b - a;
        let miles = tr.interval_miles(k);
        let stopped = labeled.intervals[k] == Activity::QualifiedStop;
        if len > g.step_hours + 1e-9 {
            let slow = miles / len < opts.speed_thresh_mph;
            warnings.push(format!(
                "{}: {:.1} min gap after sample {k} treated as {} by average speed",
                tr.truck_id,
                len * 60.0,
                if slow { "stationary" } else { "moving" }
            ));
        }
        window_miles += miles * (hi - lo) / len;
        if stopped {
            window_stop += hi - lo;
        }
        let s0 = ((lo / g.step_hours).floor() as usize).min(n - 1);
        let s1 = ((hi / g.step_hours).ceil() as usize).min(n);
        for s in s0..s1 {
            let (ss, se) = (s as f64 * g.step_hours, (s + 1) as f64 * g.step_hours);
            let ov = hi.min(se) - lo.max(ss);
            if ov <= 0.0 {
                continue;
            }
            step_miles[s] += miles * ov / len;
            if stopped {
                step_stop[s] += ov;
            }
        }
    }

    let stop_fraction: Vec<f64> = step_stop
        .iter()
        .map(|h| {
            let r = h / g.step_hours;
            if r > 1.0 - 1e-9 {
                1.0
            } else {
                r.max(0.0)
            }
        })
        .collect();
    let consumption = step_miles
        .iter()
        .zip(&stop_fraction)
        .map(|(&mi, &r)| if r >= 1.0 { 0.0 } else { mi * opts.kwh_per_mile })
        .collect();
    let position = (0..n).map(|s| position_at(labeled, opts.day_start, g.midpoint_hour(s))).collect();
    Ok(Downsampled {
        profile: TruckProfile {
            id: tr.truck_id.clone(),
            stop_fraction,
            consumption,
            diesel_emission: window_miles * opts.diesel_kg_per_mile,
            position: Some(position),
        },
        step_miles,
        step_stop_hours: step_stop,
        window_miles,
        window_stop_hours: window_stop,
        warnings,
    })
}

fn position_at(labeled: &LabeledTrace, day_start: DateTime<FixedOffset>, hour: f64) -> GeoPoint {
    let s = &labeled.trace.samples;
    let k = s.partition_point(|p| hours_between(day_start, p.time) <= hour);
    if k == 0 {
        return s[0].pos;
    }
    if k == s.len() {
        return s[k - 1].pos;
    }
    let (a, b) = (&s[k - 1], &s[k]);
    let f = (hour - hours_between(day_start, a.time)) / hours_between(a.time, b.time);
    GeoPoint::new(a.pos.lon + f * (b.pos.lon - a.pos.lon), a.pos.lat + f * (b.pos.lat - a.pos.lat))
}
