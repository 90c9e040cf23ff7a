//! Merging per-truck depot candidates into shared depot sites.

use std::collections::{BTreeSet, VecDeque};

use crate::domain::{haversine_miles, GeoPoint, SiteKind, StationSite};

pub const DEFAULT_DEPOT_RADIUS_FT: f64 = 1000.0;
const FEET_PER_MILE: f64 = 5280.0;

/// Density clustering with `eps = radius_ft` and `min_pts = 1`; every point
/// is a core point, so clusters are the components of the eps-graph.
/// Returns cluster labels in input order.
pub fn dbscan_labels(points: &[GeoPoint], radius_ft: f64) -> Vec<usize> {
    let eps = radius_ft / FEET_PER_MILE;
    let mut label = vec![usize::MAX; points.len()];
    let mut next = 0;
    for seed in 0..points.len() {
        if label[seed] != usize::MAX {
            continue;
        }
        label[seed] = next;
        let mut queue = VecDeque::from([seed]);
        while let Some(p) = queue.pop_front() {
            for q in 0..points.len() {
                if label[q] == usize::MAX && haversine_miles(points[p], points[q]) <= eps {
                    label[q] = next;
                    queue.push_back(q);
                }
            }
        }
        next += 1;
    }
    label
}

/// One depot per cluster of `(truck_id, longest-stop position)` candidates,
/// located at the member centroid and owned by the members. Output order and
/// ids depend only on the set of inputs, not their order.
pub fn cluster_depots(stop_points: &[(String, GeoPoint)], radius_ft: f64) -> Vec<StationSite> {
    let mut pts: Vec<&(String, GeoPoint)> = stop_points.iter().collect();
    pts.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.lon.total_cmp(&b.1.lon))
            .then(a.1.lat.total_cmp(&b.1.lat))
    });
    let coords: Vec<GeoPoint> = pts.iter().map(|p| p.1).collect();
    let labels = dbscan_labels(&coords, radius_ft);
    let clusters = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); clusters];
    for (k, &c) in labels.iter().enumerate() {
        members[c].push(k);
    }
    members
        .into_iter()
        .enumerate()
        .map(|(c, idx)| {
            let n = idx.len() as f64;
            let lon = idx.iter().map(|&k| coords[k].lon).sum::<f64>() / n;
            let lat = idx.iter().map(|&k| coords[k].lat).sum::<f64>() / n;
            StationSite {
                id: format!("depot-{c}"),
                kind: SiteKind::Depot,
                location: GeoPoint::new(lon, lat),
                owner_truck_ids: idx.iter().map(|&k| pts[k].0.clone()).collect::<BTreeSet<_>>(),
            }
        })
        .collect()
}
