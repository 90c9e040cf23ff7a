//! GPS traces and stop detection.

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};

use crate::domain::{haversine_miles, GeoPoint};
use crate::error::PipelineError;

pub const DEFAULT_SPEED_THRESH_MPH: f64 = 0.1;
pub const DEFAULT_MIN_STOP_MIN: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub time: DateTime<FixedOffset>,
    pub pos: GeoPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTrace {
    pub truck_id: String,
    pub samples: Vec<TraceSample>,
}

impl RawTrace {
    pub fn new(truck_id: impl Into<String>, samples: Vec<TraceSample>) -> Result<Self, PipelineError> {
        let truck_id = truck_id.into();
        if let Some(k) = samples.windows(2).position(|w| w[1].time <= w[0].time) {
            return Err(PipelineError::Trace {
                truck: truck_id,
                msg: format!("timestamps not strictly increasing at sample {}", k + 1),
            });
        }
        Ok(RawTrace { truck_id, samples })
    }

    pub fn duration_hours(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => hours_between(a.time, b.time),
            _ => 0.0,
        }
    }

    /// Length of the interval between samples `k` and `k + 1`, in miles.
    pub fn interval_miles(&self, k: usize) -> f64 {
        haversine_miles(self.samples[k].pos, self.samples[k + 1].pos)
    }

    pub fn interval_hours(&self, k: usize) -> f64 {
        hours_between(self.samples[k].time, self.samples[k + 1].time)
    }

    pub fn total_miles(&self) -> f64 {
        (0..self.samples.len().saturating_sub(1)).map(|k| self.interval_miles(k)).sum()
    }
}

pub(crate) fn hours_between(a: DateTime<FixedOffset>, b: DateTime<FixedOffset>) -> f64 {
    (b - a).num_milliseconds() as f64 / 3.6e6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Activity {
    QualifiedStop,
    Trip,
}

/// A maximal run of intervals with one activity. `start..end` are sample
/// indices; the run covers intervals `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub activity: Activity,
    pub minutes: f64,
    pub miles: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTrace {
    pub trace: RawTrace,
    /// One label per interval between consecutive samples.
    pub intervals: Vec<Activity>,
    /// One label per sample: a sample touching a qualified-stop interval is a stop.
    pub samples: Vec<Activity>,
    pub segments: Vec<Segment>,
}

impl LabeledTrace {
    pub fn stops(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.activity == Activity::QualifiedStop)
    }

    /// Position of the longest qualified stop, the presumed depot.
    pub fn longest_stop(&self) -> Option<GeoPoint> {
        let mut best: Option<&Segment> = None;
        for s in self.stops() {
            if best.is_none_or(|b| s.minutes > b.minutes) {
                best = Some(s);
            }
        }
        best.map(|s| self.trace.samples[s.start].pos)
    }

    pub fn stop_hours(&self) -> f64 {
        self.stops().map(|s| s.minutes / 60.0).sum()
    }
}

/// Labels each interval: a qualified stop is a maximal run of intervals
/// slower than `speed_thresh_mph` lasting at least `min_duration_min`.
pub fn classify_stops(trace: &RawTrace, speed_thresh_mph: f64, min_duration_min: f64) -> LabeledTrace {
    let m = trace.samples.len().saturating_sub(1);
    let slow: Vec<bool> = (0..m)
        .map(|k| trace.interval_miles(k) / trace.interval_hours(k) < speed_thresh_mph)
        .collect();
    let mut intervals = vec![Activity::Trip; m];
    let mut k = 0;
    while k < m {
        if !slow[k] {
            k += 1;
            continue;
        }
        let s = k;
        while k < m && slow[k] {
            k += 1;
        }
        if hours_between(trace.samples[s].time, trace.samples[k].time) * 60.0 >= min_duration_min - 1e-9 {
            intervals[s..k].fill(Activity::QualifiedStop);
        }
    }

    let mut samples = vec![Activity::Trip; trace.samples.len()];
    for (k, a) in intervals.iter().enumerate() {
        if *a == Activity::QualifiedStop {
            samples[k] = Activity::QualifiedStop;
            samples[k + 1] = Activity::QualifiedStop;
        }
    }

    let mut segments = Vec::new();
    let mut k = 0;
    while k < m {
        let s = k;
        while k < m && intervals[k] == intervals[s] {
            k += 1;
        }
        segments.push(Segment {
            start: s,
            end: k,
            activity: intervals[s],
            minutes: hours_between(trace.samples[s].time, trace.samples[k].time) * 60.0,
            miles: (s..k).map(|q| trace.interval_miles(q)).sum(),
        });
    }
    LabeledTrace {
        trace: trace.clone(),
        intervals,
        samples,
        segments,
    }
}
