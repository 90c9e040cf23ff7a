//! Which sites a truck can charge at, and which substations can feed a site.

use crate::domain::{haversine_miles, AccessMatrix, StationLink, StationSite, SubstationNode, TruckProfile};

pub const DEFAULT_ACCESS_RADIUS_MI: f64 = 0.5;
pub const DEFAULT_K_NEAREST: usize = 5;
/// A step counts as a qualified stop when at least this share of it is stopped.
pub const STOP_SHARE_FOR_ACCESS: f64 = 0.5;

/// `a_ijt = 1` when step `t` is mostly stopped, the truck is within
/// `access_radius_mi` of the site, and the site is public or the truck's own
/// depot. Each site links to its `k_nearest` substations (ties by index).
/// Trucks without positions get no access.
pub fn build_access_matrix(
    profiles: &[TruckProfile],
    sites: &[StationSite],
    substations: &[SubstationNode],
    access_radius_mi: f64,
    k_nearest: usize,
) -> AccessMatrix {
    let mut a = AccessMatrix::new(k_nearest);
    for (i, tr) in profiles.iter().enumerate() {
        let Some(pos) = &tr.position else { continue };
        for (j, site) in sites.iter().enumerate() {
            if !site.admits(&tr.id) {
                continue;
            }
            for (t, &r) in tr.stop_fraction.iter().enumerate() {
                if r >= STOP_SHARE_FOR_ACCESS && haversine_miles(pos[t], site.location) <= access_radius_mi {
                    a.truck_station.insert((i, j, t));
                }
            }
        }
    }
    for (j, site) in sites.iter().enumerate() {
        let mut d: Vec<(f64, usize)> = substations
            .iter()
            .enumerate()
            .map(|(k, s)| (haversine_miles(site.location, s.location), k))
            .collect();
        d.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let mut near: Vec<_> = d.into_iter().take(k_nearest).collect();
        near.sort_by_key(|&(_, k)| k);
        a.station_substation.extend(near.into_iter().map(|(dist, k)| StationLink {
            station: j,
            substation: k,
            distance_miles: dist,
        }));
    }
    a
}
